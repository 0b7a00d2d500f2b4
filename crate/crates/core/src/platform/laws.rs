//! Law checkers for the left self-distributive and central duplication laws.

use std::fmt;

use super::{LdPlatform, PlatformError};
use crate::par::{self, Exec};
use crate::stream_rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Law {
    /// x∘(y∘z) = (x∘y)∘(x∘z)
    Ld,
    /// r∘(s∘p) = (s∘r)∘(r∘p)
    Cd,
}

impl Law {
    /// Both sides of the law at `(a, b, c)`.
    pub fn sides<P: LdPlatform + ?Sized>(
        self,
        platform: &P,
        a: &P::Element,
        b: &P::Element,
        c: &P::Element,
    ) -> (P::Element, P::Element) {
        let lhs = platform.op(a, &platform.op(b, c));
        let rhs = match self {
            Law::Ld => platform.op(&platform.op(a, b), &platform.op(a, c)),
            Law::Cd => platform.op(&platform.op(b, a), &platform.op(a, c)),
        };
        (lhs, rhs)
    }

    pub fn holds_at<P: LdPlatform + ?Sized>(
        self,
        platform: &P,
        a: &P::Element,
        b: &P::Element,
        c: &P::Element,
    ) -> Result<bool, PlatformError> {
        let (lhs, rhs) = self.sides(platform, a, b, c);
        platform.equiv(&lhs, &rhs)
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Law::Ld => "ld",
            Law::Cd => "cd",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coverage {
    /// Every triple of a finite domain.
    Exhaustive,
    /// `trials` triples sampled from the platform's distribution.
    Random { trials: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct LawReport<E> {
    pub law: Law,
    pub coverage: Coverage,
    pub checked: u64,
    pub passed: u64,
    /// The first failing triple in enumeration (or sampling) order.
    pub counterexample: Option<(E, E, E)>,
}

impl<E> LawReport<E> {
    pub fn all_passed(&self) -> bool {
        self.passed == self.checked
    }
}

pub fn ld_law_check<P: LdPlatform>(
    platform: &P,
    coverage: Coverage,
    exec: Exec,
) -> Result<LawReport<P::Element>, PlatformError> {
    law_check(platform, Law::Ld, coverage, exec)
}

pub fn cd_law_check<P: LdPlatform>(
    platform: &P,
    coverage: Coverage,
    exec: Exec,
) -> Result<LawReport<P::Element>, PlatformError> {
    law_check(platform, Law::Cd, coverage, exec)
}

pub fn law_check<P: LdPlatform>(
    platform: &P,
    law: Law,
    coverage: Coverage,
    exec: Exec,
) -> Result<LawReport<P::Element>, PlatformError> {
    let triple = |i: u64| -> (P::Element, P::Element, P::Element) {
        match coverage {
            Coverage::Exhaustive => {
                let m = platform.domain_size().expect("checked finite");
                let at = |k| platform.element_at(k).expect("index within domain");
                (at(i / (m * m)), at(i / m % m), at(i % m))
            }
            Coverage::Random { seed, .. } => {
                let mut rng = stream_rng(seed, i);
                let a = platform.sample(&mut rng);
                let b = platform.sample(&mut rng);
                let c = platform.sample(&mut rng);
                (a, b, c)
            }
        }
    };
    let checked = match coverage {
        Coverage::Exhaustive => {
            let m = platform
                .domain_size()
                .ok_or_else(|| PlatformError::NotFinite(platform.descriptor()))?;
            m.checked_mul(m)
                .and_then(|m2| m2.checked_mul(m))
                .ok_or_else(|| PlatformError::NotFinite(platform.descriptor()))?
        }
        Coverage::Random { trials, .. } => trials,
    };
    let outcomes = par::map(exec, checked, |i| {
        let (a, b, c) = triple(i);
        law.holds_at(platform, &a, &b, &c)
    });
    let mut passed = 0;
    let mut first_failure = None;
    for (i, outcome) in outcomes.into_iter().enumerate() {
        if outcome? {
            passed += 1;
        } else if first_failure.is_none() {
            first_failure = Some(i as u64);
        }
    }
    Ok(LawReport {
        law,
        coverage,
        checked,
        passed,
        counterexample: first_failure.map(triple),
    })
}
