//! Brute-force baselines: secret recovery for `p′ = s̃∘p` and preimages of `s ↦ s∘1`.
//!
//! Candidates are tried in a fixed enumeration order and the reported hit is
//! always the first one in that order, whatever the execution mode.

use super::{FiniteMagma, LdPlatform, PlatformError, SearchBounds, ShiftedBraid};
use crate::braid::BraidWord;
use crate::par::{self, Exec};

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult<E> {
    pub found: Option<E>,
    /// Candidates examined; the position of the hit plus one when found.
    pub candidates_tried: u64,
    /// Size of the full candidate space before the budget is applied.
    pub space_size: u64,
    pub bounds: SearchBounds,
}

impl<E> SearchResult<E> {
    pub fn budget_exhausted(&self) -> bool {
        self.found.is_none() && self.candidates_tried < self.space_size
    }
}

/// Looks for s̃ with `s̃∘p ≡ p_prime`.
pub fn scsp_search<P: LdPlatform>(
    platform: &P,
    p: &P::Element,
    p_prime: &P::Element,
    bounds: &SearchBounds,
    exec: Exec,
) -> Result<SearchResult<P::Element>, PlatformError> {
    let space_size = platform
        .search_space_len(bounds)
        .ok_or_else(|| PlatformError::NotSearchable(platform.descriptor()))?;
    let limit = bounds.budget.map_or(space_size, |b| b.min(space_size));
    let hit = par::find_first(exec, limit, |i| {
        let candidate = platform.search_candidate(bounds, i)?;
        match platform.equiv(&platform.op(&candidate, p), p_prime) {
            Ok(true) => Some(Ok(candidate)),
            Ok(false) => None,
            Err(e) => Some(Err(e)),
        }
    });
    let (found, candidates_tried) = match hit {
        Some((i, Ok(candidate))) => (Some(candidate), i + 1),
        Some((_, Err(e))) => return Err(e),
        None => (None, limit),
    };
    Ok(SearchResult {
        found,
        candidates_tried,
        space_size,
        bounds: *bounds,
    })
}

/// `s ↦ s∘1` on braids under shifted conjugacy.
pub fn f_map(s: &BraidWord) -> BraidWord {
    ShiftedBraid::default().f_map(s)
}

/// Looks for s with `s∘1 ≡ p`.
pub fn f_preimage_search(
    p: &BraidWord,
    bounds: &SearchBounds,
    exec: Exec,
) -> Result<SearchResult<BraidWord>, PlatformError> {
    scsp_search(&ShiftedBraid::default(), &BraidWord::identity(), p, bounds, exec)
}

/// All operation tables on {0, …, m−1} satisfying `r∘(s∘p) = (s∘r)∘(r∘p)`, in
/// lexicographic order of their row-major tables.
pub fn search_cd_magmas(m: usize, exec: Exec) -> Result<Vec<FiniteMagma>, PlatformError> {
    if m == 0 {
        return Err(PlatformError::Magma("size must be positive".into()));
    }
    if m > 3 {
        return Err(PlatformError::MagmaTooLarge(m));
    }
    let cells = m * m;
    let total = (m as u64).pow(cells as u32);
    let table_at = |mut index: u64| -> Vec<u32> {
        let mut table = vec![0u32; cells];
        for cell in table.iter_mut().rev() {
            *cell = (index % m as u64) as u32;
            index /= m as u64;
        }
        table
    };
    let satisfies_cd = |t: &[u32]| {
        let op = |x: u32, y: u32| t[x as usize * m + y as usize];
        let m = m as u32;
        (0..m).all(|r| (0..m).all(|s| (0..m).all(|p| op(r, op(s, p)) == op(op(s, r), op(r, p)))))
    };
    par::map(exec, total, |i| {
        let table = table_at(i);
        satisfies_cd(&table).then_some(table)
    })
    .into_iter()
    .flatten()
    .map(|table| FiniteMagma::from_table(m, table))
    .collect()
}
