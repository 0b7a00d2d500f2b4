//! The three-exchange identification scheme.
//!
//! Per round: the prover picks `r` and commits `x = r∘p`, `x′ = r∘p′`; the
//! verifier sends a bit `c`; the prover answers `y = r` (c = 0) or `y = r∘s`
//! (c = 1, LD mode) / `y = s∘r` (c = 1, CD mode). The verifier checks
//! `x = y∘p` and `x′ = y∘p′` for c = 0, and `x′ = y∘x` for c = 1.
//!
//! Commitments are sent as raw elements with no hashing layer.

mod cheat;
mod transcript;

use std::fmt;
use std::str::FromStr;

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::platform::{LdPlatform, PlatformError, Verdict};

pub use cheat::{cheat_round, cheat_session, CheatProver};
pub use transcript::{RoundRecord, Transcript, TranscriptError};

#[derive(Debug, thiserror::Error)]
pub enum ProtocolError {
    #[error("protocol order: {0}")]
    Order(&'static str),
    #[error("a session needs at least one round")]
    ZeroRounds,
    #[error("{mode} mode needs a platform where the {mode} law is checked, but it is {verdict}")]
    LawUnavailable { mode: LawMode, verdict: Verdict },
    #[error("public key does not satisfy p′ = s∘p")]
    InconsistentKey,
    #[error(transparent)]
    Platform(#[from] PlatformError),
}

/// Which algebraic law the c = 1 answer relies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LawMode {
    /// `y = r∘s`, correct under r∘(s∘p) = (r∘s)∘(r∘p).
    #[default]
    Ld,
    /// `y = s∘r`, correct under r∘(s∘p) = (s∘r)∘(r∘p).
    Cd,
}

impl fmt::Display for LawMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LawMode::Ld => "ld",
            LawMode::Cd => "cd",
        })
    }
}

impl FromStr for LawMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ld" => Ok(LawMode::Ld),
            "cd" => Ok(LawMode::Cd),
            other => Err(format!("unknown law mode {other:?}, expected ld or cd")),
        }
    }
}

/// The verifier's one-bit challenge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Challenge {
    /// c = 0: reveal r.
    Zero,
    /// c = 1: reveal r∘s (or s∘r in CD mode).
    One,
}

impl Challenge {
    pub fn bit(self) -> u8 {
        match self {
            Challenge::Zero => 0,
            Challenge::One => 1,
        }
    }

    pub fn from_bit(bit: u8) -> Option<Challenge> {
        match bit {
            0 => Some(Challenge::Zero),
            1 => Some(Challenge::One),
            _ => None,
        }
    }

    pub fn random(rng: &mut dyn RngCore) -> Challenge {
        if rng.random_bool(0.5) {
            Challenge::One
        } else {
            Challenge::Zero
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicKey<E> {
    pub p: E,
    pub p_prime: E,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyPair<E> {
    pub secret: E,
    pub public: PublicKey<E>,
}

impl<E: Clone> KeyPair<E> {
    /// Key pair with `p′ = s∘p`.
    pub fn from_secret<P: LdPlatform<Element = E>>(platform: &P, secret: E, p: E) -> KeyPair<E> {
        let p_prime = platform.op(&secret, &p);
        KeyPair {
            secret,
            public: PublicKey { p, p_prime },
        }
    }

    /// Checks `p′ ≡ s∘p` under the platform's equality.
    pub fn is_consistent<P: LdPlatform<Element = E>>(&self, platform: &P) -> Result<bool, PlatformError> {
        platform.equiv(&self.public.p_prime, &platform.op(&self.secret, &self.public.p))
    }
}

/// Samples `s` and `p` from the platform and derives `p′ = s∘p`.
pub fn keygen<P: LdPlatform>(platform: &P, rng: &mut dyn RngCore) -> KeyPair<P::Element> {
    let secret = platform.sample(rng);
    let p = platform.sample(rng);
    KeyPair::from_secret(platform, secret, p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProtocolConfig {
    pub rounds: u32,
    pub mode: LawMode,
}

impl ProtocolConfig {
    pub fn new(rounds: u32, mode: LawMode) -> Result<ProtocolConfig, ProtocolError> {
        if rounds == 0 {
            return Err(ProtocolError::ZeroRounds);
        }
        Ok(ProtocolConfig { rounds, mode })
    }

    /// Rejects LD mode on platforms known to violate LD and CD mode on
    /// platforms where CD has not been checked.
    pub fn check_platform<P: LdPlatform>(&self, platform: &P) -> Result<(), ProtocolError> {
        let status = platform.law_status();
        let verdict = match self.mode {
            LawMode::Ld => status.ld,
            LawMode::Cd => status.cd,
        };
        let ok = match self.mode {
            LawMode::Ld => verdict != Verdict::Fails,
            LawMode::Cd => verdict.is_usable(),
        };
        if ok {
            Ok(())
        } else {
            Err(ProtocolError::LawUnavailable {
                mode: self.mode,
                verdict,
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Commitment<E> {
    pub x: E,
    pub x_prime: E,
}

/// Prover side of a session. Holds the secret; the ephemeral `r` lives only
/// between `commit` and `respond`.
pub struct Prover<'a, P: LdPlatform> {
    platform: &'a P,
    key: &'a KeyPair<P::Element>,
    mode: LawMode,
    ephemeral: Option<P::Element>,
}

impl<'a, P: LdPlatform> Prover<'a, P> {
    pub fn new(platform: &'a P, key: &'a KeyPair<P::Element>, mode: LawMode) -> Self {
        Prover {
            platform,
            key,
            mode,
            ephemeral: None,
        }
    }

    pub fn commit(&mut self, rng: &mut dyn RngCore) -> Result<Commitment<P::Element>, ProtocolError> {
        if self.ephemeral.is_some() {
            return Err(ProtocolError::Order("commit sent twice in one round"));
        }
        let r = self.platform.sample(rng);
        self.commit_with(r)
    }

    /// Commits with a caller-chosen `r`.
    pub fn commit_with(&mut self, r: P::Element) -> Result<Commitment<P::Element>, ProtocolError> {
        if self.ephemeral.is_some() {
            return Err(ProtocolError::Order("commit sent twice in one round"));
        }
        let commitment = Commitment {
            x: self.platform.op(&r, &self.key.public.p),
            x_prime: self.platform.op(&r, &self.key.public.p_prime),
        };
        self.ephemeral = Some(r);
        Ok(commitment)
    }

    pub fn respond(&mut self, challenge: Challenge) -> Result<P::Element, ProtocolError> {
        let r = self
            .ephemeral
            .take()
            .ok_or(ProtocolError::Order("response requested before commit"))?;
        Ok(match (challenge, self.mode) {
            (Challenge::Zero, _) => r,
            (Challenge::One, LawMode::Ld) => self.platform.op(&r, &self.key.secret),
            (Challenge::One, LawMode::Cd) => self.platform.op(&self.key.secret, &r),
        })
    }
}

/// The verifier's check for one round, using public values only.
pub fn verify_round<P: LdPlatform>(
    platform: &P,
    public: &PublicKey<P::Element>,
    commitment: &Commitment<P::Element>,
    challenge: Challenge,
    y: &P::Element,
) -> Result<bool, PlatformError> {
    match challenge {
        Challenge::Zero => Ok(platform.equiv(&commitment.x, &platform.op(y, &public.p))?
            && platform.equiv(&commitment.x_prime, &platform.op(y, &public.p_prime))?),
        Challenge::One => platform.equiv(&commitment.x_prime, &platform.op(y, &commitment.x)),
    }
}

enum VerifierState<E> {
    AwaitingCommit,
    Committed(Commitment<E>),
    Challenged(Commitment<E>, Challenge),
}

/// Verifier side of a session; never sees the secret.
pub struct Verifier<'a, P: LdPlatform> {
    platform: &'a P,
    public: &'a PublicKey<P::Element>,
    state: VerifierState<P::Element>,
    round: u32,
}

impl<'a, P: LdPlatform> Verifier<'a, P> {
    pub fn new(platform: &'a P, public: &'a PublicKey<P::Element>) -> Self {
        Verifier {
            platform,
            public,
            state: VerifierState::AwaitingCommit,
            round: 0,
        }
    }

    pub fn receive_commit(&mut self, commitment: Commitment<P::Element>) -> Result<(), ProtocolError> {
        match self.state {
            VerifierState::AwaitingCommit => {
                self.state = VerifierState::Committed(commitment);
                Ok(())
            }
            _ => Err(ProtocolError::Order("commit received while a round is open")),
        }
    }

    pub fn challenge(&mut self, rng: &mut dyn RngCore) -> Result<Challenge, ProtocolError> {
        self.challenge_with(Challenge::random(rng))
    }

    pub fn challenge_with(&mut self, challenge: Challenge) -> Result<Challenge, ProtocolError> {
        match std::mem::replace(&mut self.state, VerifierState::AwaitingCommit) {
            VerifierState::Committed(commitment) => {
                self.state = VerifierState::Challenged(commitment, challenge);
                Ok(challenge)
            }
            other => {
                self.state = other;
                Err(ProtocolError::Order("challenge requested before commit"))
            }
        }
    }

    /// Checks the response and closes the round.
    pub fn receive_response(&mut self, y: P::Element) -> Result<RoundRecord<P::Element>, ProtocolError> {
        match std::mem::replace(&mut self.state, VerifierState::AwaitingCommit) {
            VerifierState::Challenged(commitment, challenge) => {
                let accepted = verify_round(self.platform, self.public, &commitment, challenge, &y)?;
                self.round += 1;
                Ok(RoundRecord {
                    round: self.round,
                    commitment,
                    challenge,
                    response: y,
                    accepted,
                })
            }
            other => {
                self.state = other;
                Err(ProtocolError::Order("response received before challenge"))
            }
        }
    }
}

/// Runs an honest session in memory. Stops at the first rejected round.
pub fn run_session<P: LdPlatform>(
    platform: &P,
    config: &ProtocolConfig,
    key: &KeyPair<P::Element>,
    rng: &mut dyn RngCore,
) -> Result<Transcript<P::Element>, ProtocolError> {
    config.check_platform(platform)?;
    let mut prover = Prover::new(platform, key, config.mode);
    let mut verifier = Verifier::new(platform, &key.public);
    let mut transcript = Transcript::new();
    for _ in 0..config.rounds {
        let commitment = prover.commit(rng)?;
        verifier.receive_commit(commitment)?;
        let challenge = verifier.challenge(rng)?;
        let y = prover.respond(challenge)?;
        let record = verifier.receive_response(y)?;
        let accepted = record.accepted;
        transcript.push(record);
        if !accepted {
            break;
        }
    }
    transcript.finish(config.rounds);
    Ok(transcript)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::BraidWord;
    use crate::platform::{FiniteMagma, LaverPlatform, ShiftedBraid};
    use crate::stream_rng;

    fn laver3() -> LaverPlatform {
        LaverPlatform::new(3).unwrap()
    }

    #[test]
    fn keygen_examples() {
        let p = laver3();
        assert_eq!(KeyPair::from_secret(&p, 2, 1).public.p_prime, 7);
        for q in 0..8 {
            assert_eq!(KeyPair::from_secret(&p, 7, q).public.p_prime, q);
        }
        let b = ShiftedBraid::default();
        let one = BraidWord::identity();
        let key = KeyPair::from_secret(&b, one.clone(), one);
        assert_eq!(key.public.p_prime, BraidWord::generator(1));
        let sampled = keygen(&b, &mut stream_rng(1, 0));
        assert!(sampled.is_consistent(&b).unwrap());
    }

    #[test]
    fn commit_examples() {
        let p = laver3();
        let key = KeyPair::from_secret(&p, 2, 1);
        let mut prover = Prover::new(&p, &key, LawMode::Ld);
        assert_eq!(prover.commit_with(4).unwrap(), Commitment { x: 7, x_prime: 7 });
        assert!(matches!(prover.commit_with(4), Err(ProtocolError::Order(_))));
        prover.respond(Challenge::Zero).unwrap();
        let c = prover.commit_with(7).unwrap();
        assert_eq!((c.x, c.x_prime), (1, 7));

        let b = ShiftedBraid::default();
        let one = BraidWord::identity();
        let key = KeyPair::from_secret(&b, one.clone(), one.clone());
        let c = Prover::new(&b, &key, LawMode::Ld).commit_with(one).unwrap();
        assert_eq!(c.x, BraidWord::generator(1));
        assert!(b.equiv(&c.x_prime, &"[2, 1]".parse().unwrap()).unwrap());
    }

    #[test]
    fn respond_examples() {
        let p = laver3();
        let key = KeyPair::from_secret(&p, 2, 1);
        let mut ld = Prover::new(&p, &key, LawMode::Ld);
        ld.commit_with(4).unwrap();
        assert_eq!(ld.respond(Challenge::One).unwrap(), 5);
        ld.commit_with(4).unwrap();
        assert_eq!(ld.respond(Challenge::Zero).unwrap(), 4);
        let mut cd = Prover::new(&p, &key, LawMode::Cd);
        cd.commit_with(4).unwrap();
        assert_eq!(cd.respond(Challenge::One).unwrap(), 3);
        assert!(matches!(cd.respond(Challenge::One), Err(ProtocolError::Order(_))));
    }

    #[test]
    fn verify_examples() {
        let p = laver3();
        let public = PublicKey { p: 1, p_prime: 7 };
        let c = Commitment { x: 7, x_prime: 7 };
        assert!(verify_round(&p, &public, &c, Challenge::One, &5).unwrap());
        assert!(verify_round(&p, &public, &c, Challenge::Zero, &4).unwrap());
        // 0∘1 = 3 ≠ 7
        assert!(!verify_round(&p, &public, &c, Challenge::Zero, &0).unwrap());

        let b = ShiftedBraid::default();
        let one = BraidWord::identity();
        let s1 = BraidWord::generator(1);
        let public = PublicKey {
            p: one.clone(),
            p_prime: s1.clone(),
        };
        let c = Commitment {
            x: s1.clone(),
            x_prime: "[2, 1]".parse().unwrap(),
        };
        assert!(verify_round(&b, &public, &c, Challenge::One, &s1).unwrap());
    }

    #[test]
    fn verifier_order_errors() {
        let p = laver3();
        let public = PublicKey { p: 1, p_prime: 7 };
        let mut v = Verifier::new(&p, &public);
        assert!(matches!(v.challenge_with(Challenge::One), Err(ProtocolError::Order(_))));
        assert!(matches!(v.receive_response(3), Err(ProtocolError::Order(_))));
        v.receive_commit(Commitment { x: 7, x_prime: 7 }).unwrap();
        assert!(matches!(
            v.receive_commit(Commitment { x: 7, x_prime: 7 }),
            Err(ProtocolError::Order(_))
        ));
        assert!(matches!(v.receive_response(3), Err(ProtocolError::Order(_))));
        v.challenge_with(Challenge::One).unwrap();
        assert!(v.receive_response(5).unwrap().accepted);
    }

    #[test]
    fn honest_sessions_accept() {
        let p = laver3();
        let config = ProtocolConfig::new(20, LawMode::Ld).unwrap();
        for seed in 0..20 {
            let mut rng = stream_rng(seed, 0);
            let key = keygen(&p, &mut rng);
            let t = run_session(&p, &config, &key, &mut rng).unwrap();
            assert!(t.accepted());
            assert_eq!(t.rounds().len(), 20);
        }
    }

    #[test]
    fn cd_mode_requires_checked_platform() {
        let config = ProtocolConfig::new(5, LawMode::Cd).unwrap();
        assert!(matches!(
            config.check_platform(&laver3()),
            Err(ProtocolError::LawUnavailable { .. })
        ));
        let projection = FiniteMagma::from_table(2, vec![0, 1, 0, 1]).unwrap();
        config.check_platform(&projection).unwrap();
        let mut rng = stream_rng(9, 0);
        let key = keygen(&projection, &mut rng);
        assert!(run_session(&projection, &config, &key, &mut rng).unwrap().accepted());
        assert!(matches!(ProtocolConfig::new(0, LawMode::Ld), Err(ProtocolError::ZeroRounds)));
    }
}
