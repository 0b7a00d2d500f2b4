use std::fmt;

use super::{BraidError, BraidWord};

/// A permutation of the strands {1, …, n}; `images()[k-1]` is the image of k.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn identity(n: usize) -> Permutation {
        Permutation((1..=n as u32).collect())
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(k, &v)| v as usize == k + 1)
    }

    pub fn transposition(n: usize, a: u32, b: u32) -> Permutation {
        let mut p = Permutation::identity(n);
        p.0.swap(a as usize - 1, b as usize - 1);
        p
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation without fixed points; `()` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.0.len()];
        let mut wrote = false;
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] as usize == start + 1 {
                continue;
            }
            f.write_str("(")?;
            let mut k = start;
            let mut first = true;
            while !seen[k] {
                seen[k] = true;
                if !first {
                    f.write_str(" ")?;
                }
                write!(f, "{}", k + 1)?;
                first = false;
                k = self.0[k] as usize - 1;
            }
            f.write_str(")")?;
            wrote = true;
        }
        if !wrote {
            f.write_str("()")?;
        }
        Ok(())
    }
}

/// Image of a braid in the symmetric group together with its exponent sum.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BraidInvariants {
    pub permutation: Permutation,
    pub exponent_sum: i64,
}

/// Computes the invariants of `word` viewed in B_n. Requires `n > max_index`.
pub fn braid_invariants(word: &BraidWord, n: usize) -> Result<BraidInvariants, BraidError> {
    let max_index = word.max_index();
    if n <= max_index as usize {
        return Err(BraidError::TooFewStrands {
            strands: n,
            max_index,
        });
    }
    let mut images: Vec<u32> = (1..=n as u32).collect();
    // σ_i swaps the strands at positions i and i+1.
    for l in word.letters() {
        let i = l.index() as usize;
        images.swap(i - 1, i);
    }
    // images[pos] = strand ending at pos; invert to get strand -> final position.
    let mut perm = vec![0u32; n];
    for (pos, &strand) in images.iter().enumerate() {
        perm[strand as usize - 1] = pos as u32 + 1;
    }
    Ok(BraidInvariants {
        permutation: Permutation(perm),
        exponent_sum: word.exponent_sum(),
    })
}
