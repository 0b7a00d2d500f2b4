use serde::{Deserialize, Serialize};

use super::{verify_round, Challenge, Commitment, PublicKey};
use crate::platform::{LdPlatform, PlatformError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundRecord<E> {
    /// 1-based round number.
    pub round: u32,
    pub commitment: Commitment<E>,
    pub challenge: Challenge,
    pub response: E,
    pub accepted: bool,
}

/// Ordered round records plus the session verdict.
///
/// The verdict is accept iff every one of the expected rounds was recorded
/// and accepted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript<E> {
    rounds: Vec<RoundRecord<E>>,
    expected_rounds: u32,
    accepted: bool,
}

impl<E> Default for Transcript<E> {
    fn default() -> Self {
        Transcript {
            rounds: Vec::new(),
            expected_rounds: 0,
            accepted: false,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum TranscriptError {
    #[error("transcript line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error(transparent)]
    Platform(#[from] PlatformError),
}

#[derive(Serialize, Deserialize)]
struct RoundLine {
    round: u32,
    x: String,
    x_prime: String,
    c: u8,
    y: String,
    accept: bool,
}

#[derive(Serialize, Deserialize)]
struct VerdictLine {
    verdict: String,
    rounds: u32,
}

impl<E> Transcript<E> {
    pub fn new() -> Self {
        Transcript::default()
    }

    pub fn push(&mut self, record: RoundRecord<E>) {
        self.rounds.push(record);
    }

    /// Fixes the verdict once the session is over.
    pub fn finish(&mut self, expected_rounds: u32) {
        self.expected_rounds = expected_rounds;
        self.accepted =
            self.rounds.len() == expected_rounds as usize && self.rounds.iter().all(|r| r.accepted);
    }

    pub fn rounds(&self) -> &[RoundRecord<E>] {
        &self.rounds
    }

    pub fn rounds_mut(&mut self) -> &mut [RoundRecord<E>] {
        &mut self.rounds
    }

    pub fn expected_rounds(&self) -> u32 {
        self.expected_rounds
    }

    pub fn accepted(&self) -> bool {
        self.accepted
    }

    /// Re-runs the verifier's check on every recorded round and returns the
    /// verdict those checks imply.
    pub fn replay<P: LdPlatform<Element = E>>(
        &self,
        platform: &P,
        public: &PublicKey<E>,
    ) -> Result<bool, PlatformError> {
        let mut all = self.rounds.len() == self.expected_rounds as usize;
        for r in &self.rounds {
            all &= verify_round(platform, public, &r.commitment, r.challenge, &r.response)?;
        }
        Ok(all)
    }

    /// One JSON record per round followed by a verdict record.
    pub fn to_text<P: LdPlatform<Element = E>>(&self, platform: &P) -> String {
        let mut out = String::new();
        for r in &self.rounds {
            let line = RoundLine {
                round: r.round,
                x: platform.encode(&r.commitment.x),
                x_prime: platform.encode(&r.commitment.x_prime),
                c: r.challenge.bit(),
                y: platform.encode(&r.response),
                accept: r.accepted,
            };
            out.push_str(&serde_json::to_string(&line).expect("plain record serializes"));
            out.push('\n');
        }
        let verdict = VerdictLine {
            verdict: if self.accepted { "accept" } else { "reject" }.into(),
            rounds: self.expected_rounds,
        };
        out.push_str(&serde_json::to_string(&verdict).expect("plain record serializes"));
        out.push('\n');
        out
    }

    pub fn from_text<P: LdPlatform<Element = E>>(platform: &P, text: &str) -> Result<Self, TranscriptError> {
        let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
        let (last, body) = lines.split_last().ok_or(TranscriptError::Malformed {
            line: 1,
            reason: "empty transcript".into(),
        })?;
        let mut transcript = Transcript::new();
        for (i, line) in body.iter().enumerate() {
            let bad = |reason: String| TranscriptError::Malformed { line: i + 1, reason };
            let rec: RoundLine = serde_json::from_str(line).map_err(|e| bad(e.to_string()))?;
            let challenge = Challenge::from_bit(rec.c).ok_or_else(|| bad(format!("challenge bit {}", rec.c)))?;
            transcript.push(RoundRecord {
                round: rec.round,
                commitment: Commitment {
                    x: platform.decode(&rec.x)?,
                    x_prime: platform.decode(&rec.x_prime)?,
                },
                challenge,
                response: platform.decode(&rec.y)?,
                accepted: rec.accept,
            });
        }
        let verdict: VerdictLine = serde_json::from_str(last).map_err(|e| TranscriptError::Malformed {
            line: lines.len(),
            reason: e.to_string(),
        })?;
        transcript.finish(verdict.rounds);
        if transcript.accepted != (verdict.verdict == "accept") {
            return Err(TranscriptError::Malformed {
                line: lines.len(),
                reason: format!("verdict {:?} disagrees with the round records", verdict.verdict),
            });
        }
        Ok(transcript)
    }
}
