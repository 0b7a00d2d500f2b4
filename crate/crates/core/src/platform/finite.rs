use std::path::Path;
use std::sync::Arc;

use rand::{Rng, RngCore};

use super::{LawStatus, LdPlatform, PlatformError, Verdict};
use crate::laver::LaverTable;

fn decode_u64(text: &str) -> Result<u64, PlatformError> {
    text.trim().parse().map_err(|_| PlatformError::Decode {
        input: text.to_string(),
        reason: "expected a nonnegative decimal integer".into(),
    })
}

/// The Laver table A_n as a platform on {0, …, 2^n − 1}.
#[derive(Debug, Clone)]
pub struct LaverPlatform {
    table: Arc<LaverTable>,
}

impl LaverPlatform {
    pub fn new(n: u32) -> Result<LaverPlatform, PlatformError> {
        Ok(LaverPlatform::from_table(LaverTable::build(n)?))
    }

    pub fn from_table(table: LaverTable) -> LaverPlatform {
        LaverPlatform {
            table: Arc::new(table),
        }
    }

    pub fn table(&self) -> &LaverTable {
        &self.table
    }
}

impl LdPlatform for LaverPlatform {
    type Element = u32;

    fn descriptor(&self) -> String {
        format!("laver:{}", self.table.n())
    }

    fn op(&self, s: &u32, p: &u32) -> u32 {
        self.table.get(*s as usize, *p as usize)
    }

    fn equiv(&self, a: &u32, b: &u32) -> Result<bool, PlatformError> {
        Ok(a == b)
    }

    fn sample(&self, rng: &mut dyn RngCore) -> u32 {
        rng.random_range(0..self.table.size() as u32)
    }

    fn encode(&self, e: &u32) -> String {
        e.to_string()
    }

    fn decode(&self, text: &str) -> Result<u32, PlatformError> {
        let v = decode_u64(text)?;
        if v >= self.table.size() as u64 {
            return Err(crate::laver::LaverError::OutOfRange {
                value: v,
                n: self.table.n(),
            }
            .into());
        }
        Ok(v as u32)
    }

    fn law_status(&self) -> LawStatus {
        LawStatus::ld_only()
    }

    fn domain_size(&self) -> Option<u64> {
        Some(self.table.size() as u64)
    }

    fn element_at(&self, i: u64) -> Option<u32> {
        (i < self.table.size() as u64).then_some(i as u32)
    }
}

/// Magmas at most this large get both laws checked exhaustively on construction.
const STATUS_CHECK_LIMIT: usize = 64;

/// A finite set {0, …, m−1} with an arbitrary operation table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMagma {
    size: usize,
    table: Vec<u32>,
    origin: String,
    status: LawStatus,
}

impl FiniteMagma {
    /// `table[x * size + y]` is x∘y.
    pub fn from_table(size: usize, table: Vec<u32>) -> Result<FiniteMagma, PlatformError> {
        if size == 0 {
            return Err(PlatformError::Magma("size must be positive".into()));
        }
        if table.len() != size * size {
            return Err(PlatformError::Magma(format!(
                "expected {} entries, found {}",
                size * size,
                table.len()
            )));
        }
        if let Some(bad) = table.iter().find(|&&v| v as usize >= size) {
            return Err(PlatformError::Magma(format!("entry {bad} out of range for size {size}")));
        }
        let mut magma = FiniteMagma {
            size,
            table,
            origin: "magma:inline".into(),
            status: LawStatus::UNCHECKED,
        };
        if size <= STATUS_CHECK_LIMIT {
            magma.status = LawStatus {
                ld: magma.exhaustive_verdict(|m, x, y, z| {
                    m.get(x, m.get(y, z)) == m.get(m.get(x, y), m.get(x, z))
                }),
                cd: magma.exhaustive_verdict(|m, r, s, p| {
                    m.get(r, m.get(s, p)) == m.get(m.get(s, r), m.get(r, p))
                }),
            };
        }
        Ok(magma)
    }

    /// The trivial LD-system `x∘y = f(y)` on {0, …, f.len()−1}.
    pub fn right_map(f: &[u32]) -> Result<FiniteMagma, PlatformError> {
        let size = f.len();
        let table = (0..size).flat_map(|_| f.iter().copied()).collect();
        let mut magma = FiniteMagma::from_table(size, table)?;
        magma.origin = "magma:trivial".into();
        Ok(magma)
    }

    fn exhaustive_verdict(&self, law: impl Fn(&FiniteMagma, usize, usize, usize) -> bool) -> Verdict {
        let m = self.size;
        let holds = (0..m).all(|a| (0..m).all(|b| (0..m).all(|c| law(self, a, b, c))));
        if holds {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> usize {
        self.table[x * self.size + y] as usize
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    /// Parses the CSV form: a `size=m` header line followed by m rows of m values.
    pub fn parse_csv(text: &str) -> Result<FiniteMagma, PlatformError> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| PlatformError::Magma("empty magma file".into()))?;
        let size: usize = header
            .strip_prefix("size=")
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| PlatformError::Magma(format!("bad header {header:?}, expected size=m")))?;
        let mut table = Vec::with_capacity(size * size);
        let mut rows = 0;
        for line in lines {
            let row: Vec<u32> = line
                .split(',')
                .map(|v| v.trim().parse())
                .collect::<Result<_, _>>()
                .map_err(|_| PlatformError::Magma(format!("bad row {line:?}")))?;
            if row.len() != size {
                return Err(PlatformError::Magma(format!("row {line:?} does not have {size} entries")));
            }
            table.extend(row);
            rows += 1;
        }
        if rows != size {
            return Err(PlatformError::Magma(format!("expected {size} rows, found {rows}")));
        }
        FiniteMagma::from_table(size, table)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<FiniteMagma, PlatformError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| PlatformError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let mut magma = FiniteMagma::parse_csv(&text)?;
        magma.origin = format!("magma:{}", path.display());
        Ok(magma)
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("size={}\n", self.size);
        for row in self.table.chunks(self.size) {
            let cells: Vec<String> = row.iter().map(u32::to_string).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

impl LdPlatform for FiniteMagma {
    type Element = u32;

    fn descriptor(&self) -> String {
        self.origin.clone()
    }

    fn op(&self, s: &u32, p: &u32) -> u32 {
        self.get(*s as usize, *p as usize) as u32
    }

    fn equiv(&self, a: &u32, b: &u32) -> Result<bool, PlatformError> {
        Ok(a == b)
    }

    fn sample(&self, rng: &mut dyn RngCore) -> u32 {
        rng.random_range(0..self.size as u32)
    }

    fn encode(&self, e: &u32) -> String {
        e.to_string()
    }

    fn decode(&self, text: &str) -> Result<u32, PlatformError> {
        let v = decode_u64(text)?;
        if v >= self.size as u64 {
            return Err(PlatformError::Decode {
                input: text.to_string(),
                reason: format!("outside a magma of size {}", self.size),
            });
        }
        Ok(v as u32)
    }

    fn law_status(&self) -> LawStatus {
        self.status
    }

    fn domain_size(&self) -> Option<u64> {
        Some(self.size as u64)
    }

    fn element_at(&self, i: u64) -> Option<u32> {
        (i < self.size as u64).then_some(i as u32)
    }
}

/// The integers with `x∘y = y + 1`, an LD-system that is not idempotent.
#[derive(Debug, Clone)]
pub struct IntSuccessor {
    /// Samples are drawn uniformly from `-sample_radius..=sample_radius`.
    pub sample_radius: i64,
}

impl Default for IntSuccessor {
    fn default() -> Self {
        IntSuccessor { sample_radius: 1000 }
    }
}

impl LdPlatform for IntSuccessor {
    type Element = i64;

    fn descriptor(&self) -> String {
        "int-succ".into()
    }

    fn op(&self, _s: &i64, p: &i64) -> i64 {
        p.wrapping_add(1)
    }

    fn equiv(&self, a: &i64, b: &i64) -> Result<bool, PlatformError> {
        Ok(a == b)
    }

    fn sample(&self, rng: &mut dyn RngCore) -> i64 {
        rng.random_range(-self.sample_radius..=self.sample_radius)
    }

    fn encode(&self, e: &i64) -> String {
        e.to_string()
    }

    fn decode(&self, text: &str) -> Result<i64, PlatformError> {
        text.trim().parse().map_err(|_| PlatformError::Decode {
            input: text.to_string(),
            reason: "expected a decimal integer".into(),
        })
    }

    fn law_status(&self) -> LawStatus {
        // Both sides of either law reduce to p + 2.
        LawStatus {
            ld: Verdict::Holds,
            cd: Verdict::Holds,
        }
    }
}
