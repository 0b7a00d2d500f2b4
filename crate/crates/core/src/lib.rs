//! Fiat–Shamir-style identification over left self-distributive algebras.
//!
//! The prover holds a secret `s` and publishes `(p, p′ = s∘p)`. Each round
//! commits to `x = r∘p`, `x′ = r∘p′` and answers a one-bit challenge with
//! either `r` or `r∘s`; the second answer verifies because the operation
//! satisfies `r∘(s∘p) = (r∘s)∘(r∘p)`.
//!
//! Platforms: braids under shifted or ordinary conjugacy ([`braid`]), the
//! Laver tables ([`laver`]), finite magmas and a few trivial systems
//! ([`platform`]). [`protocol`] holds the prover and verifier state machines,
//! [`wire`] and [`transport`] run them over a byte stream, and [`experiment`]
//! drives the completeness, soundness and brute-force measurements.

pub mod braid;
pub mod laver;
pub mod par;
pub mod platform;
pub mod protocol;
pub mod experiment;
pub mod keyfile;
pub mod transport;
pub mod wire;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use par::Exec;

/// Deterministic generator for trial `stream` of a run seeded with `seed`.
///
/// Trials draw from disjoint ChaCha streams, so results do not depend on
/// the order in which trials are executed.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
