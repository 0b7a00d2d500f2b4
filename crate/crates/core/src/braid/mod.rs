//! Braid words over the generators σ_1, σ_2, … of B∞.
//!
//! Words are stored exactly as built. [`shifted_conj`] and [`conj`] return the
//! literal juxtaposition of their pieces so the output can be inspected letter
//! by letter; semantic comparison goes through [`words_equal`], which decides
//! the word problem by handle reduction.

mod handle;
mod invariants;

use std::fmt;
use std::str::FromStr;

use rand::Rng;

pub use handle::{is_trivial, reduce, ReductionLimits, DEFAULT_LENGTH_CAP};
pub use invariants::{braid_invariants, BraidInvariants, Permutation};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum BraidError {
    #[error("generator index must be at least 1")]
    ZeroIndex,
    #[error("generator index {0} is too large")]
    IndexTooLarge(u64),
    #[error("handle reduction exceeded the cap of {cap} letters")]
    ReductionCapExceeded { cap: usize },
    #[error("strand count {strands} too small for a word using σ_{max_index}")]
    TooFewStrands { strands: usize, max_index: u32 },
    #[error("cannot parse braid word {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

/// Exponent of a single generator letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }

    pub fn as_i32(self) -> i32 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }
}

/// One letter σ_i^{±1}, stored as the signed index (σ_3⁻¹ is -3).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(transparent)]
pub struct Letter(i32);

impl Letter {
    pub fn new(index: u32, sign: Sign) -> Result<Letter, BraidError> {
        if index == 0 {
            return Err(BraidError::ZeroIndex);
        }
        if index > i32::MAX as u32 {
            return Err(BraidError::IndexTooLarge(index as u64));
        }
        Ok(Letter(index as i32 * sign.as_i32()))
    }

    /// σ_index
    pub fn pos(index: u32) -> Letter {
        Letter::new(index, Sign::Positive).expect("valid generator index")
    }

    /// σ_index⁻¹
    pub fn neg(index: u32) -> Letter {
        Letter::new(index, Sign::Negative).expect("valid generator index")
    }

    pub fn from_signed(k: i64) -> Result<Letter, BraidError> {
        if k == 0 {
            return Err(BraidError::ZeroIndex);
        }
        if k.unsigned_abs() > i32::MAX as u64 {
            return Err(BraidError::IndexTooLarge(k.unsigned_abs()));
        }
        Ok(Letter(k as i32))
    }

    pub fn index(self) -> u32 {
        self.0.unsigned_abs()
    }

    pub fn sign(self) -> Sign {
        if self.0 > 0 {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    pub fn signed(self) -> i32 {
        self.0
    }

    pub fn inverse(self) -> Letter {
        Letter(-self.0)
    }

    fn shifted(self, by: u32) -> Letter {
        let index = self.index() + by;
        Letter(index as i32 * self.sign().as_i32())
    }
}

/// A finite word in the generators σ_i^{±1}; the empty word is the identity braid.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct BraidWord {
    letters: Vec<Letter>,
}

impl BraidWord {
    pub fn identity() -> BraidWord {
        BraidWord::default()
    }

    pub fn from_letters(letters: Vec<Letter>) -> BraidWord {
        BraidWord { letters }
    }

    /// Builds a word from signed indices; `k > 0` is σ_k and `k < 0` is σ_|k|⁻¹.
    pub fn from_signed(indices: &[i64]) -> Result<BraidWord, BraidError> {
        indices
            .iter()
            .map(|&k| Letter::from_signed(k))
            .collect::<Result<Vec<_>, _>>()
            .map(BraidWord::from_letters)
    }

    /// σ_index as a one-letter word.
    pub fn generator(index: u32) -> BraidWord {
        BraidWord::from_letters(vec![Letter::pos(index)])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn signed(&self) -> Vec<i32> {
        self.letters.iter().map(|l| l.signed()).collect()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Largest generator index used, 0 for the empty word.
    pub fn max_index(&self) -> u32 {
        self.letters.iter().map(|l| l.index()).max().unwrap_or(0)
    }

    pub fn exponent_sum(&self) -> i64 {
        self.letters.iter().map(|l| l.sign().as_i32() as i64).sum()
    }

    /// Applies the shift endomorphism σ_i ↦ σ_{i+1}.
    pub fn shift(&self) -> BraidWord {
        self.shift_by(1)
    }

    pub fn shift_by(&self, k: u32) -> BraidWord {
        BraidWord::from_letters(self.letters.iter().map(|l| l.shifted(k)).collect())
    }

    /// The formal inverse: letters reversed, signs flipped.
    pub fn invert(&self) -> BraidWord {
        BraidWord::from_letters(self.letters.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn concat(&self, other: &BraidWord) -> BraidWord {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        BraidWord::from_letters(letters)
    }

    /// Cancels adjacent pairs σ_i^e σ_i^{-e} until none remain.
    pub fn free_reduce(&self) -> BraidWord {
        let mut out: Vec<Letter> = Vec::with_capacity(self.len());
        for &l in &self.letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        BraidWord::from_letters(out)
    }
}

impl FromIterator<Letter> for BraidWord {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        BraidWord::from_letters(iter.into_iter().collect())
    }
}

/// Canonical text form: `[1, 2, -1]` for σ1·σ2·σ1⁻¹, `[]` for the identity.
impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}", l.signed())?;
        }
        f.write_str("]")
    }
}

impl FromStr for BraidWord {
    type Err = BraidError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse_err = |reason: &str| BraidError::Parse {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|rest| rest.strip_suffix(']'))
            .ok_or_else(|| parse_err("expected a bracketed list"))?;
        if inner.trim().is_empty() {
            return Ok(BraidWord::identity());
        }
        let mut letters = Vec::new();
        for item in inner.split(',') {
            let k: i64 = item
                .trim()
                .parse()
                .map_err(|_| parse_err(&format!("bad entry {:?}", item.trim())))?;
            letters.push(Letter::from_signed(k).map_err(|e| parse_err(&e.to_string()))?);
        }
        Ok(BraidWord::from_letters(letters))
    }
}

/// Shifted conjugacy `x ∘ y = x · sh(y) · σ1 · sh(x)⁻¹`, returned unreduced.
pub fn shifted_conj(x: &BraidWord, y: &BraidWord) -> BraidWord {
    f_conj(x, y, 1, &BraidWord::generator(1))
}

/// `x · sh^k(y) · a · sh^k(x)⁻¹`, the shifted-conjugacy template with an arbitrary
/// shift power and middle element.
pub fn f_conj(x: &BraidWord, y: &BraidWord, shift_power: u32, a: &BraidWord) -> BraidWord {
    let mut letters = Vec::with_capacity(2 * x.len() + y.len() + a.len());
    letters.extend_from_slice(&x.letters);
    letters.extend(y.letters.iter().map(|l| l.shifted(shift_power)));
    letters.extend_from_slice(&a.letters);
    letters.extend(x.letters.iter().rev().map(|l| l.shifted(shift_power).inverse()));
    BraidWord::from_letters(letters)
}

/// Ordinary conjugacy `x · y · x⁻¹`, returned unreduced.
pub fn conj(x: &BraidWord, y: &BraidWord) -> BraidWord {
    x.concat(y).concat(&x.invert())
}

/// Decides whether `u` and `v` are the same element of B∞.
pub fn words_equal(u: &BraidWord, v: &BraidWord) -> Result<bool, BraidError> {
    words_equal_with(u, v, &ReductionLimits::default())
}

pub fn words_equal_with(
    u: &BraidWord,
    v: &BraidWord,
    limits: &ReductionLimits,
) -> Result<bool, BraidError> {
    if u == v {
        return Ok(true);
    }
    is_trivial(&u.concat(&v.invert()), limits)
}

/// `length` letters drawn independently and uniformly from σ_1^{±1}, …, σ_max_index^{±1}.
pub fn random_word<R: Rng + ?Sized>(max_index: u32, length: usize, rng: &mut R) -> BraidWord {
    assert!(max_index >= 1, "max_index must be at least 1");
    (0..length)
        .map(|_| {
            let index = rng.random_range(1..=max_index);
            if rng.random_bool(0.5) {
                Letter::pos(index)
            } else {
                Letter::neg(index)
            }
        })
        .collect()
}

/// The bounded candidate space used by brute-force searches: all words of
/// length at most `max_len` over σ_1^{±1}, …, σ_max_index^{±1}, ordered by length
/// and then lexicographically by signed index (`-m < … < -1 < 1 < … < m`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WordSpace {
    pub max_len: usize,
    pub max_index: u32,
}

impl WordSpace {
    pub fn new(max_len: usize, max_index: u32) -> WordSpace {
        assert!(max_index >= 1, "max_index must be at least 1");
        WordSpace { max_len, max_index }
    }

    fn alphabet_size(&self) -> u64 {
        2 * self.max_index as u64
    }

    /// Total number of words in the space; saturates at `u64::MAX`.
    pub fn len(&self) -> u64 {
        let a = self.alphabet_size();
        let mut total: u64 = 0;
        let mut layer: u64 = 1;
        for _ in 0..=self.max_len {
            total = total.saturating_add(layer);
            layer = layer.saturating_mul(a);
        }
        total
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn letter_at(&self, digit: u64) -> Letter {
        let m = self.max_index as i64;
        let k = digit as i64 - m;
        let k = if k >= 0 { k + 1 } else { k };
        Letter::from_signed(k).expect("digit within alphabet")
    }

    /// The `index`-th word in enumeration order.
    pub fn word(&self, mut index: u64) -> BraidWord {
        let a = self.alphabet_size();
        let mut length = 0usize;
        let mut layer: u64 = 1;
        while index >= layer {
            index -= layer;
            length += 1;
            layer = layer.saturating_mul(a);
        }
        let mut letters = vec![Letter::pos(1); length];
        for slot in letters.iter_mut().rev() {
            *slot = self.letter_at(index % a);
            index /= a;
        }
        BraidWord::from_letters(letters)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn w(s: &[i64]) -> BraidWord {
        BraidWord::from_signed(s).unwrap()
    }

    #[test]
    fn shift_translates_indices() {
        assert_eq!(w(&[1, -2]).shift(), w(&[2, -3]));
        assert_eq!(BraidWord::identity().shift(), BraidWord::identity());
        assert_eq!(w(&[3]).shift(), w(&[4]));
    }

    #[test]
    fn invert_reverses_and_flips() {
        assert_eq!(w(&[1, 2]).invert(), w(&[-2, -1]));
        assert_eq!(BraidWord::identity().invert(), BraidWord::identity());
        assert_eq!(w(&[-1]).invert(), w(&[1]));
        let x = w(&[1, 3, -2, 2, 5]);
        assert!(is_trivial(&x.concat(&x.invert()), &ReductionLimits::default()).unwrap());
    }

    #[test]
    fn concat_juxtaposes() {
        let c = w(&[1]).concat(&w(&[-1]));
        assert_eq!(c.len(), 2);
        assert!(words_equal(&c, &BraidWord::identity()).unwrap());
        assert_eq!(BraidWord::identity().concat(&w(&[2])), w(&[2]));
        assert_eq!(w(&[1]).concat(&w(&[2])), w(&[1, 2]));
    }

    #[test]
    fn free_reduction_examples() {
        assert_eq!(w(&[1, -1, 2]).free_reduce(), w(&[2]));
        assert_eq!(w(&[1, 2, -2, -1]).free_reduce(), BraidWord::identity());
        assert_eq!(w(&[1, 2]).free_reduce(), w(&[1, 2]));
    }

    #[test]
    fn shifted_conj_is_literal() {
        let one = BraidWord::identity();
        let s1 = w(&[1]);
        assert_eq!(shifted_conj(&one, &one), w(&[1]));
        assert_eq!(shifted_conj(&s1, &one), w(&[1, 1, -2]));
        assert_eq!(shifted_conj(&s1, &s1), w(&[1, 2, 1, -2]));
        assert!(words_equal(&shifted_conj(&s1, &s1), &w(&[2, 1])).unwrap());
    }

    #[test]
    fn conj_examples() {
        let y = w(&[2, -3, 1]);
        assert_eq!(conj(&BraidWord::identity(), &y), y);
        assert_eq!(conj(&w(&[1]), &w(&[2])), w(&[1, 2, -1]));
        let x = w(&[1, 2, -3, 1]);
        assert!(words_equal(&conj(&x, &x), &x).unwrap());
    }

    #[test]
    fn words_equal_examples() {
        assert!(words_equal(&w(&[1, 2, 1]), &w(&[2, 1, 2])).unwrap());
        assert!(words_equal(&w(&[1, 3]), &w(&[3, 1])).unwrap());
        assert!(!words_equal(&w(&[1]), &w(&[2])).unwrap());
        assert!(!words_equal(&w(&[1, 2]), &w(&[2, 1])).unwrap());
    }

    #[test]
    fn text_format() {
        let x = w(&[1, 2, -1]);
        assert_eq!(x.to_string(), "[1, 2, -1]");
        assert_eq!("[1,2,  -1]".parse::<BraidWord>().unwrap(), x);
        assert_eq!("[]".parse::<BraidWord>().unwrap(), BraidWord::identity());
        assert_eq!(" [ ] ".parse::<BraidWord>().unwrap(), BraidWord::identity());
        assert!("[0]".parse::<BraidWord>().is_err());
        assert!("1, 2".parse::<BraidWord>().is_err());
        assert!("[1,,2]".parse::<BraidWord>().is_err());
    }

    #[test]
    fn random_words() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert!(random_word(4, 0, &mut rng).is_empty());
        let x = random_word(1, 3, &mut rng);
        assert_eq!(x.len(), 3);
        assert!(x.letters().iter().all(|l| l.index() == 1));
        let a = random_word(6, 16, &mut ChaCha8Rng::seed_from_u64(42));
        let b = random_word(6, 16, &mut ChaCha8Rng::seed_from_u64(42));
        assert_eq!(a, b);
        assert!(a.max_index() <= 6);
    }

    #[test]
    fn word_space_enumeration_order() {
        let space = WordSpace::new(2, 2);
        assert_eq!(space.len(), 1 + 4 + 16);
        assert_eq!(space.word(0), BraidWord::identity());
        assert_eq!(space.word(1), w(&[-2]));
        assert_eq!(space.word(2), w(&[-1]));
        assert_eq!(space.word(3), w(&[1]));
        assert_eq!(space.word(4), w(&[2]));
        assert_eq!(space.word(5), w(&[-2, -2]));
        assert_eq!(space.word(20), w(&[2, 2]));
        let all: std::collections::HashSet<_> = (0..space.len()).map(|i| space.word(i)).collect();
        assert_eq!(all.len() as u64, space.len());
    }
}
