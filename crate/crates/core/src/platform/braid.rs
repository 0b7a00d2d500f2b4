use rand::RngCore;

use super::{LawStatus, LdPlatform, PlatformError, SearchBounds, Verdict};
use crate::braid::{self, BraidWord, ReductionLimits, WordSpace};

/// How braid elements are sampled: i.i.d. uniform letters, fixed length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BraidSampling {
    pub max_index: u32,
    pub length: usize,
}

impl Default for BraidSampling {
    fn default() -> Self {
        BraidSampling {
            max_index: 6,
            length: 16,
        }
    }
}

fn decode_word(text: &str) -> Result<BraidWord, PlatformError> {
    text.parse().map_err(PlatformError::from)
}

fn word_candidate(bounds: &SearchBounds, i: u64) -> Option<BraidWord> {
    let space = WordSpace::new(bounds.max_len, bounds.max_index);
    (i < space.len()).then(|| space.word(i))
}

macro_rules! braid_platform_common {
    () => {
        type Element = BraidWord;

        fn equiv(&self, a: &BraidWord, b: &BraidWord) -> Result<bool, PlatformError> {
            Ok(braid::words_equal_with(a, b, &self.limits)?)
        }

        fn sample(&self, rng: &mut dyn RngCore) -> BraidWord {
            braid::random_word(self.sampling.max_index, self.sampling.length, rng)
        }

        fn encode(&self, e: &BraidWord) -> String {
            e.to_string()
        }

        fn decode(&self, text: &str) -> Result<BraidWord, PlatformError> {
            decode_word(text)
        }

        fn search_space_len(&self, bounds: &SearchBounds) -> Option<u64> {
            Some(WordSpace::new(bounds.max_len, bounds.max_index).len())
        }

        fn search_candidate(&self, bounds: &SearchBounds, i: u64) -> Option<BraidWord> {
            word_candidate(bounds, i)
        }
    };
}

/// B∞ with shifted conjugacy `x∘y = x · sh(y) · σ1 · sh(x)⁻¹`.
#[derive(Debug, Clone, Default)]
pub struct ShiftedBraid {
    pub sampling: BraidSampling,
    pub limits: ReductionLimits,
}

impl ShiftedBraid {
    pub fn with_sampling(sampling: BraidSampling) -> ShiftedBraid {
        ShiftedBraid {
            sampling,
            ..ShiftedBraid::default()
        }
    }

    /// `s ↦ s∘1`, known to be injective.
    pub fn f_map(&self, s: &BraidWord) -> BraidWord {
        self.op(s, &BraidWord::identity())
    }
}

impl LdPlatform for ShiftedBraid {
    braid_platform_common!();

    fn descriptor(&self) -> String {
        "shifted-braid".into()
    }

    fn op(&self, s: &BraidWord, p: &BraidWord) -> BraidWord {
        braid::shifted_conj(s, p)
    }

    fn law_status(&self) -> LawStatus {
        LawStatus::ld_only()
    }
}

/// B∞ with ordinary conjugacy `x∘y = x · y · x⁻¹`.
#[derive(Debug, Clone, Default)]
pub struct ConjBraid {
    pub sampling: BraidSampling,
    pub limits: ReductionLimits,
}

impl ConjBraid {
    pub fn with_sampling(sampling: BraidSampling) -> ConjBraid {
        ConjBraid {
            sampling,
            ..ConjBraid::default()
        }
    }
}

impl LdPlatform for ConjBraid {
    braid_platform_common!();

    fn descriptor(&self) -> String {
        "conj-braid".into()
    }

    fn op(&self, s: &BraidWord, p: &BraidWord) -> BraidWord {
        braid::conj(s, p)
    }

    fn law_status(&self) -> LawStatus {
        LawStatus::ld_only()
    }
}

/// `x∘y = x · f(y) · a · f(x)⁻¹` with f the k-th power of the shift.
///
/// Whether this is LD depends on `a` and `k`; the status starts out
/// unchecked and is set from a law check via [`FConjugacy::with_ld_verdict`].
#[derive(Debug, Clone)]
pub struct FConjugacy {
    pub shift_power: u32,
    pub a: BraidWord,
    pub sampling: BraidSampling,
    pub limits: ReductionLimits,
    status: LawStatus,
}

impl FConjugacy {
    pub fn new(shift_power: u32, a: BraidWord) -> FConjugacy {
        assert!(shift_power >= 1, "shift power must be at least 1");
        FConjugacy {
            shift_power,
            a,
            sampling: BraidSampling::default(),
            limits: ReductionLimits::default(),
            status: LawStatus::UNCHECKED,
        }
    }

    pub fn with_ld_verdict(mut self, verdict: Verdict) -> FConjugacy {
        self.status.ld = verdict;
        self
    }

    pub fn with_sampling(mut self, sampling: BraidSampling) -> FConjugacy {
        self.sampling = sampling;
        self
    }
}

impl LdPlatform for FConjugacy {
    braid_platform_common!();

    fn descriptor(&self) -> String {
        format!("fconj:{}:{}", self.shift_power, self.a)
    }

    fn op(&self, s: &BraidWord, p: &BraidWord) -> BraidWord {
        braid::f_conj(s, p, self.shift_power, &self.a)
    }

    fn law_status(&self) -> LawStatus {
        self.status
    }
}
