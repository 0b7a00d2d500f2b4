//! Handle reduction.
//!
//! A σ_i-handle is a subword σ_i^e · v · σ_i^{-e} where v contains neither
//! σ_i^{±1} nor σ_{i-1}^{±1}. Reducing it deletes the two ends and replaces
//! every σ_{i+1}^d in v by σ_{i+1}^{-e} · σ_i^d · σ_{i+1}^e; all other letters
//! of v commute with σ_i and are kept. The handle whose closing letter comes
//! first never contains another complete handle, so it is always permitted
//! and any sequence of such reductions terminates.
//!
//! A word with no handle left is either empty or has its lowest generator
//! occurring with a single sign, and such a word is never trivial. So a word
//! represents the identity iff reduction ends on the empty word.

use super::{BraidError, BraidWord, Letter};

pub const DEFAULT_LENGTH_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReductionLimits {
    /// Largest intermediate word length tolerated before giving up.
    pub length_cap: usize,
}

impl Default for ReductionLimits {
    fn default() -> Self {
        ReductionLimits {
            length_cap: DEFAULT_LENGTH_CAP,
        }
    }
}

/// Reduces `word` until no handle remains.
pub fn reduce(word: &BraidWord, limits: &ReductionLimits) -> Result<BraidWord, BraidError> {
    let letters = reduce_signed(word.signed(), limits)?;
    Ok(letters
        .into_iter()
        .map(|k| Letter::from_signed(k as i64).expect("reduction keeps letters nonzero"))
        .collect())
}

pub fn is_trivial(word: &BraidWord, limits: &ReductionLimits) -> Result<bool, BraidError> {
    Ok(reduce_signed(word.signed(), limits)?.is_empty())
}

fn reduce_signed(word: Vec<i32>, limits: &ReductionLimits) -> Result<Vec<i32>, BraidError> {
    let mut word = free_reduce(word);
    let top = word.iter().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0);
    let mut last: Vec<Option<usize>> = vec![None; top + 2];
    let mut scratch = Vec::with_capacity(word.len());
    while let Some((start, end)) = first_handle(&word, &mut last) {
        rewrite_handle(&word, start, end, &mut scratch);
        std::mem::swap(&mut word, &mut scratch);
        if word.len() > limits.length_cap {
            return Err(BraidError::ReductionCapExceeded {
                cap: limits.length_cap,
            });
        }
    }
    Ok(word)
}

/// Locates the handle whose closing letter is leftmost.
fn first_handle(word: &[i32], last: &mut [Option<usize>]) -> Option<(usize, usize)> {
    last.fill(None);
    for (k, &letter) in word.iter().enumerate() {
        let i = letter.unsigned_abs() as usize;
        if let Some(j) = last[i] {
            if word[j] == -letter {
                return Some((j, k));
            }
        }
        last[i] = Some(k);
        // σ_i sitting between two σ_{i+1} letters blocks a σ_{i+1}-handle.
        last[i + 1] = None;
    }
    None
}

fn rewrite_handle(word: &[i32], start: usize, end: usize, out: &mut Vec<i32>) {
    let opening = word[start];
    let i = opening.abs();
    let e = opening.signum();
    out.clear();
    let mut push = |l: i32| {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    };
    for &l in &word[..start] {
        push(l);
    }
    for &l in &word[start + 1..end] {
        if l.abs() == i + 1 {
            let d = l.signum();
            push(-e * (i + 1));
            push(d * i);
            push(e * (i + 1));
        } else {
            push(l);
        }
    }
    for &l in &word[end + 1..] {
        push(l);
    }
}

fn free_reduce(word: Vec<i32>) -> Vec<i32> {
    let mut out = Vec::with_capacity(word.len());
    for l in word {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}
