//! Monte Carlo drivers for completeness, soundness and brute-force recovery.
//!
//! Trial `t` of a run seeded with `seed` draws everything from
//! `stream_rng(seed, t)`, so a report is reproducible from its seed in either
//! execution mode.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::braid::{BraidWord, Letter};
use crate::par::{self, Exec};
use crate::platform::search::scsp_search;
use crate::platform::{LdPlatform, PlatformError, SearchBounds, ShiftedBraid};
use crate::protocol::{cheat_round, cheat_session, keygen, run_session, KeyPair, ProtocolConfig, ProtocolError};
use crate::stream_rng;

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub name: String,
    pub platform: String,
    pub trials: u64,
    pub successes: u64,
    pub rate: f64,
    /// 95% Wilson score interval for the success rate.
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
    pub wall_time_secs: f64,
    pub parallel: bool,
    #[serde(default)]
    pub parameters: BTreeMap<String, String>,
    #[serde(default)]
    pub notes: Vec<String>,
}

/// Wilson score interval at 95% for `successes` out of `trials`.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

impl ExperimentReport {
    fn new(name: &str, platform: String, trials: u64, successes: u64, seed: u64, start: Instant, exec: Exec) -> Self {
        let (ci_low, ci_high) = wilson_interval(successes, trials);
        ExperimentReport {
            name: name.to_string(),
            platform,
            trials,
            successes,
            rate: if trials == 0 { 0.0 } else { successes as f64 / trials as f64 },
            ci_low,
            ci_high,
            seed,
            wall_time_secs: start.elapsed().as_secs_f64(),
            parallel: exec.is_parallel(),
            parameters: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn count_ok<E: Send>(results: Vec<Result<bool, E>>) -> Result<u64, E> {
    let mut n = 0;
    for r in results {
        n += u64::from(r?);
    }
    Ok(n)
}

fn degeneracy_note<P: LdPlatform>(platform: &P, report: &mut ExperimentReport) {
    if platform.descriptor().starts_with("laver:") {
        report.notes.push(
            "demo only: small Laver tables have constant and short-period rows, so forged commitments \
             collide often and the rate overstates what a cheater can do on a large platform"
                .into(),
        );
    }
}

/// Honest sessions with a fresh key per trial; success = session accepted.
pub fn completeness<P: LdPlatform>(
    platform: &P,
    config: &ProtocolConfig,
    trials: u64,
    seed: u64,
    exec: Exec,
) -> Result<ExperimentReport, ProtocolError> {
    config.check_platform(platform)?;
    let start = Instant::now();
    let results = par::map(exec, trials, |t| {
        let mut rng = stream_rng(seed, t);
        let key = keygen(platform, &mut rng);
        run_session(platform, config, &key, &mut rng).map(|tr| tr.accepted())
    });
    let successes = count_ok(results)?;
    Ok(
        ExperimentReport::new("completeness", platform.descriptor(), trials, successes, seed, start, exec)
            .param("rounds", config.rounds)
            .param("mode", config.mode),
    )
}

/// Single cheating rounds against fresh keys; success = round accepted.
pub fn soundness_rounds<P: LdPlatform>(
    platform: &P,
    trials: u64,
    seed: u64,
    exec: Exec,
) -> Result<ExperimentReport, ProtocolError> {
    let start = Instant::now();
    let results = par::map(exec, trials, |t| {
        let mut rng = stream_rng(seed, t);
        let key = keygen(platform, &mut rng);
        cheat_round(platform, &key.public, &mut rng)
    });
    let successes = count_ok(results)?;
    let mut report =
        ExperimentReport::new("soundness-rounds", platform.descriptor(), trials, successes, seed, start, exec)
            .param("rounds", 1);
    report.notes.push("expected rate 0.5 when commitments do not collide".into());
    degeneracy_note(platform, &mut report);
    Ok(report)
}

/// Full cheating sessions of `config.rounds` rounds; success = session accepted.
pub fn soundness_sessions<P: LdPlatform>(
    platform: &P,
    config: &ProtocolConfig,
    trials: u64,
    seed: u64,
    exec: Exec,
) -> Result<ExperimentReport, ProtocolError> {
    let start = Instant::now();
    let results = par::map(exec, trials, |t| {
        let mut rng = stream_rng(seed, t);
        let key = keygen(platform, &mut rng);
        cheat_session(platform, config, &key.public, &mut rng).map(|tr| tr.accepted())
    });
    let successes = count_ok(results)?;
    let mut report =
        ExperimentReport::new("soundness-sessions", platform.descriptor(), trials, successes, seed, start, exec)
            .param("rounds", config.rounds)
            .param("mode", config.mode);
    report
        .notes
        .push(format!("expected rate about 2^-{} when commitments do not collide", config.rounds));
    degeneracy_note(platform, &mut report);
    Ok(report)
}

/// Outcome of one planted brute-force instance.
#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryTrial<E> {
    pub key: KeyPair<E>,
    pub recovered: Option<E>,
    pub candidates_tried: u64,
}

/// The summary report plus every individual trial.
pub type BruteforceOutcome<E> = (ExperimentReport, Vec<RecoveryTrial<E>>);

/// Plants a secret from `plant`, publishes `p′ = s∘p` with `p` sampled from
/// the platform, and searches for any `s̃` with `s̃∘p ≡ p′`. Success means a
/// candidate was found and re-verified.
pub fn bruteforce<P, F>(
    platform: &P,
    plant: F,
    bounds: &SearchBounds,
    trials: u64,
    seed: u64,
    exec: Exec,
) -> Result<BruteforceOutcome<P::Element>, PlatformError>
where
    P: LdPlatform,
    F: Fn(&mut dyn RngCore) -> P::Element + Sync + Send,
{
    let start = Instant::now();
    let results = par::map(exec, trials, |t| -> Result<RecoveryTrial<P::Element>, PlatformError> {
        let mut rng = stream_rng(seed, t);
        let secret = plant(&mut rng);
        let p = platform.sample(&mut rng);
        let key = KeyPair::from_secret(platform, secret, p);
        let result = scsp_search(platform, &key.public.p, &key.public.p_prime, bounds, exec)?;
        let recovered = match result.found {
            Some(s) if platform.equiv(&platform.op(&s, &key.public.p), &key.public.p_prime)? => Some(s),
            _ => None,
        };
        Ok(RecoveryTrial {
            key,
            recovered,
            candidates_tried: result.candidates_tried,
        })
    });
    let trials_out: Vec<_> = results.into_iter().collect::<Result<_, _>>()?;
    let successes = trials_out.iter().filter(|t| t.recovered.is_some()).count() as u64;
    let exact = trials_out
        .iter()
        .filter(|t| t.recovered.as_ref() == Some(&t.key.secret))
        .count();
    let mean_tried = if trials_out.is_empty() {
        0.0
    } else {
        trials_out.iter().map(|t| t.candidates_tried as f64).sum::<f64>() / trials_out.len() as f64
    };
    let mut report = ExperimentReport::new("bruteforce", platform.descriptor(), trials, successes, seed, start, exec)
        .param("max_len", bounds.max_len)
        .param("max_index", bounds.max_index)
        .param("budget", bounds.budget.map_or("none".to_string(), |b| b.to_string()));
    report.notes.push(format!("{exact} recoveries returned the planted word itself"));
    report.notes.push(format!("mean candidates tried: {mean_tried:.1}"));
    Ok((report, trials_out))
}

/// A random word of length `0..=max_len` over σ1^{±1}, σ2^{±1}.
pub fn planted_braid_secret(max_len: usize, rng: &mut dyn RngCore) -> BraidWord {
    let len = rng.random_range(0..=max_len);
    let letters = (0..len)
        .map(|_| {
            let i = rng.random_range(1..=2);
            if rng.random_bool(0.5) {
                Letter::pos(i)
            } else {
                Letter::neg(i)
            }
        })
        .collect();
    BraidWord::from_letters(letters)
}

/// Brute-force recovery on shifted braids with planted secrets over σ1, σ2.
pub fn braid_bruteforce(
    max_secret_len: usize,
    trials: u64,
    seed: u64,
    exec: Exec,
) -> Result<ExperimentReport, PlatformError> {
    let platform = ShiftedBraid::default();
    let bounds = SearchBounds {
        max_len: max_secret_len,
        max_index: 2,
        budget: None,
    };
    let (report, _) = bruteforce(
        &platform,
        |rng| planted_braid_secret(max_secret_len, rng),
        &bounds,
        trials,
        seed,
        exec,
    )?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::platform::LaverPlatform;
    use crate::protocol::LawMode;

    #[test]
    fn wilson_bounds() {
        let (lo, hi) = wilson_interval(50, 100);
        assert!((lo - 0.4038).abs() < 1e-3 && (hi - 0.5962).abs() < 1e-3);
        let (lo, hi) = wilson_interval(0, 10);
        assert_eq!(lo, 0.0);
        assert!((hi - 0.2775).abs() < 1e-3);
        assert_eq!(wilson_interval(0, 0), (0.0, 1.0));
    }

    #[test]
    fn completeness_small() {
        let p = LaverPlatform::new(4).unwrap();
        let config = ProtocolConfig::new(10, LawMode::Ld).unwrap();
        let r = completeness(&p, &config, 50, 1, Exec::Parallel).unwrap();
        assert_eq!(r.successes, 50);
        let again = completeness(&p, &config, 50, 1, Exec::Sequential).unwrap();
        assert_eq!(again.successes, r.successes);
    }

    #[test]
    fn soundness_is_reproducible() {
        let b = ShiftedBraid::default();
        let a = soundness_rounds(&b, 64, 7, Exec::Parallel).unwrap();
        let s = soundness_rounds(&b, 64, 7, Exec::Sequential).unwrap();
        assert_eq!(a.successes, s.successes);
        assert!(a.successes <= a.trials);
    }

    #[test]
    fn bruteforce_recovers_short_secrets() {
        let r = braid_bruteforce(2, 8, 3, Exec::Parallel).unwrap();
        assert_eq!(r.successes, 8);
    }
}
