//! Algebraic platforms for the authentication scheme.
//!
//! A platform is a set with a binary operation `s∘p`, read as the left
//! translation F_s applied to p. The protocol needs `op`, a decidable
//! equality, a sampler, and a canonical text encoding for each element.

mod braid;
mod descriptor;
mod finite;
pub mod laws;
pub mod search;

use std::fmt;

use rand::RngCore;

use crate::braid::BraidError;
use crate::laver::LaverError;

pub use braid::{BraidSampling, ConjBraid, FConjugacy, ShiftedBraid};
pub use descriptor::PlatformSpec;
pub use finite::{FiniteMagma, IntSuccessor, LaverPlatform};

#[derive(Debug, thiserror::Error)]
pub enum PlatformError {
    #[error(transparent)]
    Braid(#[from] BraidError),
    #[error(transparent)]
    Laver(#[from] LaverError),
    #[error("cannot decode element {input:?}: {reason}")]
    Decode { input: String, reason: String },
    #[error("platform {0} has no finite domain to enumerate")]
    NotFinite(String),
    #[error("platform {0} has no candidate space for searching")]
    NotSearchable(String),
    #[error("bad platform descriptor {input:?}: {reason}")]
    Descriptor { input: String, reason: String },
    #[error("bad magma table: {0}")]
    Magma(String),
    #[error("magma of size {0} is too large to enumerate (at most 3)")]
    MagmaTooLarge(usize),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// What is known about one algebraic law on a platform.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Unchecked,
    /// Holds by construction or by an exhaustive check.
    Holds,
    /// No counterexample among the sampled triples.
    PassedSampling,
    Fails,
}

impl Verdict {
    pub fn is_usable(self) -> bool {
        matches!(self, Verdict::Holds | Verdict::PassedSampling)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Unchecked => "unchecked",
            Verdict::Holds => "holds",
            Verdict::PassedSampling => "passed-sampling",
            Verdict::Fails => "fails",
        })
    }
}

/// Status of the left self-distributive (LD) and central duplication (CD) laws.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LawStatus {
    pub ld: Verdict,
    pub cd: Verdict,
}

impl LawStatus {
    pub const UNCHECKED: LawStatus = LawStatus {
        ld: Verdict::Unchecked,
        cd: Verdict::Unchecked,
    };

    pub fn ld_only() -> LawStatus {
        LawStatus {
            ld: Verdict::Holds,
            cd: Verdict::Unchecked,
        }
    }
}

/// Bounds for brute-force searches over braid words.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct SearchBounds {
    pub max_len: usize,
    pub max_index: u32,
    /// Caps the number of candidates tried.
    pub budget: Option<u64>,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            max_len: 3,
            max_index: 3,
            budget: None,
        }
    }
}

pub trait LdPlatform: Send + Sync {
    type Element: Clone + fmt::Debug + PartialEq + Send + Sync;

    /// The descriptor string this platform was built from, e.g. `laver:8`.
    fn descriptor(&self) -> String;

    /// s∘p, i.e. F_s(p).
    fn op(&self, s: &Self::Element, p: &Self::Element) -> Self::Element;

    /// Semantic equality of elements.
    fn equiv(&self, a: &Self::Element, b: &Self::Element) -> Result<bool, PlatformError>;

    fn sample(&self, rng: &mut dyn RngCore) -> Self::Element;

    fn encode(&self, e: &Self::Element) -> String;

    fn decode(&self, text: &str) -> Result<Self::Element, PlatformError>;

    fn law_status(&self) -> LawStatus;

    /// Number of elements, for finite platforms.
    fn domain_size(&self) -> Option<u64> {
        None
    }

    /// The `i`-th element of a finite domain.
    fn element_at(&self, _i: u64) -> Option<Self::Element> {
        None
    }

    /// Size of the brute-force candidate space; the whole domain for finite platforms.
    fn search_space_len(&self, _bounds: &SearchBounds) -> Option<u64> {
        self.domain_size()
    }

    fn search_candidate(&self, _bounds: &SearchBounds, i: u64) -> Option<Self::Element> {
        self.element_at(i)
    }
}
