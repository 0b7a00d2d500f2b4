//! The Laver tables A_n.
//!
//! A_n is the unique left self-distributive operation on {0, …, 2^n − 1} with
//! p∘0 = p + 1 (and (2^n − 1)∘0 = 0). Tables are built by the double induction
//! p∘(q+1) = (p∘q)∘(p+1), filling rows from the bottom up; every non-final row
//! only ever reads rows below it because p∘q > p.

use std::collections::HashMap;

use crate::par::{self, Exec};

/// Largest n built unless the caller raises the cap (A_12 occupies 32 MiB).
pub const DEFAULT_CAP: u32 = 12;
/// Entries are stored as `u16`.
pub const MAX_SUPPORTED_N: u32 = 16;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum LaverError {
    #[error("A_{n} exceeds the configured cap n <= {cap}")]
    AboveCap { n: u32, cap: u32 },
    #[error("element {value} is outside A_{n}")]
    OutOfRange { value: u64, n: u32 },
    #[error("threshold {t} is outside 0..={period}")]
    ThresholdOutOfRange { t: usize, period: usize },
}

fn check_cap(n: u32, cap: u32) -> Result<(), LaverError> {
    let cap = cap.min(MAX_SUPPORTED_N);
    if n > cap {
        Err(LaverError::AboveCap { n, cap })
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaverTable {
    n: u32,
    size: usize,
    entries: Vec<u16>,
}

impl LaverTable {
    pub fn build(n: u32) -> Result<LaverTable, LaverError> {
        LaverTable::build_with_cap(n, DEFAULT_CAP)
    }

    pub fn build_with_cap(n: u32, cap: u32) -> Result<LaverTable, LaverError> {
        check_cap(n, cap)?;
        let size = 1usize << n;
        let mut entries = vec![0u16; size * size];
        let last = size - 1;
        for q in 0..size {
            entries[last * size + q] = q as u16;
        }
        for p in (0..last).rev() {
            let col = p + 1;
            entries[p * size] = col as u16;
            for q in 1..size {
                let prev = entries[p * size + q - 1] as usize;
                debug_assert!(prev > p, "row {p} read row {prev} before it was built");
                entries[p * size + q] = entries[prev * size + col];
            }
        }
        Ok(LaverTable { n, size, entries })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Bytes held by the entry array.
    pub fn memory_bytes(&self) -> usize {
        self.entries.len() * std::mem::size_of::<u16>()
    }

    fn check(&self, value: u64) -> Result<usize, LaverError> {
        if value < self.size as u64 {
            Ok(value as usize)
        } else {
            Err(LaverError::OutOfRange { value, n: self.n })
        }
    }

    /// p∘q.
    pub fn op(&self, p: u64, q: u64) -> Result<u32, LaverError> {
        let p = self.check(p)?;
        let q = self.check(q)?;
        Ok(self.get(p, q))
    }

    /// p∘q without range checking beyond the slice bounds.
    #[inline]
    pub fn get(&self, p: usize, q: usize) -> u32 {
        self.entries[p * self.size + q] as u32
    }

    pub fn row(&self, p: usize) -> &[u16] {
        &self.entries[p * self.size..(p + 1) * self.size]
    }

    pub fn row_pattern(&self, p: usize) -> Result<RowPattern, LaverError> {
        let p = self.check(p as u64)?;
        let row = self.row(p);
        let period = minimal_period(row);
        Ok(RowPattern {
            p,
            pattern: row[..period].iter().map(|&v| v as u32).collect(),
        })
    }

    /// Thresholds of every row of `self` read off the next table.
    pub fn thresholds_into(&self, next: &LaverTable) -> Vec<Threshold> {
        assert_eq!(next.n, self.n + 1, "tables must be consecutive");
        (0..self.size)
            .map(|p| Threshold {
                p,
                t: (0..next.size)
                    .find(|&q| next.get(p, q) as usize >= self.size)
                    .expect("the last column of A_{n+1} is 2^{n+1} - 1"),
            })
            .collect()
    }
}

/// Smallest d such that the row repeats with shift d; not assumed to divide the length.
fn minimal_period(row: &[u16]) -> usize {
    (1..=row.len())
        .find(|&d| row[d..].iter().zip(row).all(|(a, b)| a == b))
        .unwrap_or(row.len())
}

/// The repeating block of one row of A_n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowPattern {
    pub p: usize,
    pub pattern: Vec<u32>,
}

impl RowPattern {
    pub fn period(&self) -> usize {
        self.pattern.len()
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.pattern.windows(2).all(|w| w[0] < w[1])
    }

    /// The full row of length `size`, obtained by repeating the pattern.
    pub fn expand(&self, size: usize) -> Vec<u32> {
        self.pattern.iter().copied().cycle().take(size).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Threshold {
    pub p: usize,
    /// Smallest t with p∘t ≥ 2^n in A_{n+1}.
    pub t: usize,
}

/// Predicts the row of `pattern.p` in A_{n+1} from its pattern in A_n and its threshold.
///
/// With period 2^k: t = 2^k doubles the period and appends the pattern shifted by
/// 2^n; t < 2^k keeps the period and adds 2^n to the entries from position t on.
pub fn extend_row(pattern: &RowPattern, t: usize, n: u32) -> Result<RowPattern, LaverError> {
    let period = pattern.period();
    let lift = 1u32 << n;
    let next = if t == period {
        pattern
            .pattern
            .iter()
            .copied()
            .chain(pattern.pattern.iter().map(|&r| r + lift))
            .collect()
    } else if t < period {
        pattern
            .pattern
            .iter()
            .enumerate()
            .map(|(j, &r)| if j < t { r } else { r + lift })
            .collect()
    } else {
        return Err(LaverError::ThresholdOutOfRange { t, period });
    };
    Ok(RowPattern {
        p: pattern.p,
        pattern: next,
    })
}

/// Threshold of row `p` of A_n, evaluating only the entries of A_{n+1} that it needs.
pub fn threshold(n: u32, p: u64) -> Result<Threshold, LaverError> {
    threshold_with_cap(n, p, DEFAULT_CAP)
}

pub fn threshold_with_cap(n: u32, p: u64, cap: u32) -> Result<Threshold, LaverError> {
    check_cap(n + 1, cap)?;
    let half = 1u64 << n;
    if p >= half {
        return Err(LaverError::OutOfRange { value: p, n });
    }
    let mut lazy = LazyLaver::new(n + 1);
    let p = p as u32;
    let t = (0..2 * half as u32)
        .find(|&q| lazy.get(p, q) as u64 >= half)
        .expect("the last column of A_{n+1} is 2^{n+1} - 1");
    Ok(Threshold {
        p: p as usize,
        t: t as usize,
    })
}

/// Entry-wise evaluation of A_n with memoized partial rows.
struct LazyLaver {
    size: u32,
    rows: HashMap<u32, Vec<u32>>,
}

impl LazyLaver {
    fn new(n: u32) -> LazyLaver {
        LazyLaver {
            size: 1 << n,
            rows: HashMap::new(),
        }
    }

    fn known(&self, a: u32, b: u32) -> Option<u32> {
        if a == self.size - 1 {
            Some(b)
        } else if b == 0 {
            Some(a + 1)
        } else {
            self.rows.get(&a).and_then(|r| r.get(b as usize).copied())
        }
    }

    fn get(&mut self, a: u32, b: u32) -> u32 {
        // Each pending entry waits on a row strictly below it, so the stack is at most `size` deep.
        let mut stack = vec![(a, b)];
        while let Some(&(a, b)) = stack.last() {
            if self.known(a, b).is_some() {
                stack.pop();
                continue;
            }
            let row = self.rows.entry(a).or_insert_with(|| vec![a + 1]);
            let last = *row.last().expect("rows start with column 0");
            match self.known(last, a + 1) {
                Some(v) => self.rows.get_mut(&a).expect("row exists").push(v),
                None => stack.push((last, a + 1)),
            }
        }
        self.known(a, b).expect("entry resolved")
    }
}

/// Checks that A_n is the reduction mod 2^n of A_{n+1}.
pub fn project_check(n: u32, exec: Exec) -> Result<bool, LaverError> {
    let small = LaverTable::build(n)?;
    let big = LaverTable::build(n + 1)?;
    Ok(projects_onto(&big, &small, exec))
}

pub fn projects_onto(big: &LaverTable, small: &LaverTable, exec: Exec) -> bool {
    assert_eq!(big.n, small.n + 1, "tables must be consecutive");
    let mask = small.size - 1;
    par::count(exec, big.size as u64, |p| {
        let p = p as usize;
        (0..big.size).all(|q| big.get(p, q) as usize & mask == small.get(p & mask, q & mask) as usize)
    }) == big.size as u64
}

/// Rows of A_{n+1} (for p < 2^n) that the threshold rules fail to reproduce.
pub fn doubling_mismatches(small: &LaverTable, big: &LaverTable, exec: Exec) -> Vec<usize> {
    let thresholds = small.thresholds_into(big);
    par::map(exec, small.size as u64, |p| {
        let p = p as usize;
        let pattern = small.row_pattern(p).expect("row in range");
        let predicted = extend_row(&pattern, thresholds[p].t, small.n).ok()?;
        let actual: Vec<u32> = big.row(p).iter().map(|&v| v as u32).collect();
        (predicted.expand(big.size) != actual).then_some(p)
    })
    .into_iter()
    .flatten()
    .collect()
}
