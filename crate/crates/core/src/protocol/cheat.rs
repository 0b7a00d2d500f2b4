//! A prover without the secret, used as the soundness baseline.
//!
//! Before each round it guesses the challenge. Guessing 0 it commits honestly
//! and can answer only c = 0. Guessing 1 it picks `y` and `r`, commits
//! `x = r∘p`, `x′ = y∘x`, and can answer only c = 1. With uniform challenges
//! a round passes with probability 1/2 plus whatever accidental collisions
//! the platform allows.

use rand::{Rng, RngCore};

use super::{Challenge, Commitment, ProtocolConfig, ProtocolError, PublicKey, Transcript, Verifier};
use crate::platform::LdPlatform;

pub struct CheatProver<'a, P: LdPlatform> {
    platform: &'a P,
    public: &'a PublicKey<P::Element>,
    /// (guess, r, y) for the open round.
    pending: Option<(Challenge, P::Element, Option<P::Element>)>,
}

impl<'a, P: LdPlatform> CheatProver<'a, P> {
    pub fn new(platform: &'a P, public: &'a PublicKey<P::Element>) -> Self {
        CheatProver {
            platform,
            public,
            pending: None,
        }
    }

    pub fn commit(&mut self, rng: &mut dyn RngCore) -> Result<Commitment<P::Element>, ProtocolError> {
        let guess = if rng.random_bool(0.5) {
            Challenge::One
        } else {
            Challenge::Zero
        };
        self.commit_guessing(guess, rng)
    }

    pub fn commit_guessing(
        &mut self,
        guess: Challenge,
        rng: &mut dyn RngCore,
    ) -> Result<Commitment<P::Element>, ProtocolError> {
        if self.pending.is_some() {
            return Err(ProtocolError::Order("commit sent twice in one round"));
        }
        let r = self.platform.sample(rng);
        let x = self.platform.op(&r, &self.public.p);
        let (x_prime, y) = match guess {
            Challenge::Zero => (self.platform.op(&r, &self.public.p_prime), None),
            Challenge::One => {
                let y = self.platform.sample(rng);
                (self.platform.op(&y, &x), Some(y))
            }
        };
        self.pending = Some((guess, r, y));
        Ok(Commitment { x, x_prime })
    }

    /// Answers with the prepared `y` for c = 1, and with `r` otherwise.
    pub fn respond(&mut self, challenge: Challenge) -> Result<P::Element, ProtocolError> {
        let (_, r, y) = self
            .pending
            .take()
            .ok_or(ProtocolError::Order("response requested before commit"))?;
        Ok(match (challenge, y) {
            (Challenge::One, Some(y)) => y,
            _ => r,
        })
    }
}

/// One cheating round against an honest verifier; returns the verifier's verdict.
pub fn cheat_round<P: LdPlatform>(
    platform: &P,
    public: &PublicKey<P::Element>,
    rng: &mut dyn RngCore,
) -> Result<bool, ProtocolError> {
    let mut cheat = CheatProver::new(platform, public);
    let mut verifier = Verifier::new(platform, public);
    verifier.receive_commit(cheat.commit(rng)?)?;
    let c = verifier.challenge(rng)?;
    let y = cheat.respond(c)?;
    Ok(verifier.receive_response(y)?.accepted)
}

/// A full session driven by the cheating prover. Stops at the first rejection.
pub fn cheat_session<P: LdPlatform>(
    platform: &P,
    config: &ProtocolConfig,
    public: &PublicKey<P::Element>,
    rng: &mut dyn RngCore,
) -> Result<Transcript<P::Element>, ProtocolError> {
    let mut cheat = CheatProver::new(platform, public);
    let mut verifier = Verifier::new(platform, public);
    let mut transcript = Transcript::new();
    for _ in 0..config.rounds {
        verifier.receive_commit(cheat.commit(rng)?)?;
        let c = verifier.challenge(rng)?;
        let record = verifier.receive_response(cheat.respond(c)?)?;
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
    use crate::platform::ShiftedBraid;
    use crate::protocol::keygen;
    use crate::stream_rng;

    #[test]
    fn matching_guess_passes() {
        let b = ShiftedBraid::default();
        let mut rng = stream_rng(5, 0);
        let key = keygen(&b, &mut rng);
        for guess in [Challenge::Zero, Challenge::One] {
            let mut cheat = CheatProver::new(&b, &key.public);
            let mut verifier = Verifier::new(&b, &key.public);
            verifier.receive_commit(cheat.commit_guessing(guess, &mut rng).unwrap()).unwrap();
            verifier.challenge_with(guess).unwrap();
            let y = cheat.respond(guess).unwrap();
            assert!(verifier.receive_response(y).unwrap().accepted);
        }
    }

    #[test]
    fn forged_commitment_fails_the_other_challenge() {
        let b = ShiftedBraid::default();
        let mut rng = stream_rng(6, 0);
        let key = keygen(&b, &mut rng);
        for _ in 0..20 {
            let mut cheat = CheatProver::new(&b, &key.public);
            let mut verifier = Verifier::new(&b, &key.public);
            verifier
                .receive_commit(cheat.commit_guessing(Challenge::One, &mut rng).unwrap())
                .unwrap();
            verifier.challenge_with(Challenge::Zero).unwrap();
            let y = cheat.respond(Challenge::Zero).unwrap();
            assert!(!verifier.receive_response(y).unwrap().accepted);
        }
    }
}
