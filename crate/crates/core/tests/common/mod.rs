//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use ldauth_core::braid::{BraidWord, Letter};
use rand::{Rng, RngCore};

/// Laurent polynomial in t with integer coefficients, zero terms dropped.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Laurent(BTreeMap<i32, i128>);

impl Laurent {
    pub fn zero() -> Laurent {
        Laurent::default()
    }

    pub fn monomial(coeff: i128, exp: i32) -> Laurent {
        let mut m = BTreeMap::new();
        if coeff != 0 {
            m.insert(exp, coeff);
        }
        Laurent(m)
    }

    pub fn add(&self, other: &Laurent) -> Laurent {
        let mut m = self.0.clone();
        for (&e, &c) in &other.0 {
            let v = m.entry(e).or_insert(0);
            *v += c;
            if *v == 0 {
                m.remove(&e);
            }
        }
        Laurent(m)
    }

    pub fn mul(&self, other: &Laurent) -> Laurent {
        let mut out = Laurent::zero();
        for (&e1, &c1) in &self.0 {
            for (&e2, &c2) in &other.0 {
                out = out.add(&Laurent::monomial(c1 * c2, e1 + e2));
            }
        }
        out
    }
}

pub type Mat2 = [[Laurent; 2]; 2];

fn m(a: (i128, i32), b: (i128, i32), c: (i128, i32), d: (i128, i32)) -> Mat2 {
    [
        [Laurent::monomial(a.0, a.1), Laurent::monomial(b.0, b.1)],
        [Laurent::monomial(c.0, c.1), Laurent::monomial(d.0, d.1)],
    ]
}

pub fn mat_mul(x: &Mat2, y: &Mat2) -> Mat2 {
    let cell = |i: usize, j: usize| x[i][0].mul(&y[0][j]).add(&x[i][1].mul(&y[1][j]));
    [[cell(0, 0), cell(0, 1)], [cell(1, 0), cell(1, 1)]]
}

pub fn identity() -> Mat2 {
    m((1, 0), (0, 0), (0, 0), (1, 0))
}

/// Reduced Burau matrix of one letter of B_3.
pub fn burau_letter(l: Letter) -> Mat2 {
    match l.signed() {
        1 => m((-1, 1), (1, 0), (0, 0), (1, 0)),
        -1 => m((-1, -1), (1, -1), (0, 0), (1, 0)),
        2 => m((1, 0), (0, 0), (1, 1), (-1, 1)),
        -2 => m((1, 0), (0, 0), (1, 0), (-1, -1)),
        other => panic!("letter {other} is not in B_3"),
    }
}

/// Reduced Burau image of a word in B_3; faithful on three strands.
pub fn burau(word: &BraidWord) -> Mat2 {
    word.letters()
        .iter()
        .fold(identity(), |acc, &l| mat_mul(&acc, &burau_letter(l)))
}

pub fn random_b3_word(len: usize, rng: &mut dyn RngCore) -> BraidWord {
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

fn random_letter(max_index: u32, rng: &mut dyn RngCore) -> Letter {
    let i = rng.random_range(1..=max_index);
    if rng.random_bool(0.5) {
        Letter::pos(i)
    } else {
        Letter::neg(i)
    }
}

/// Applies `steps` random relation moves, each producing a word equal in the
/// braid group: inserting `x x⁻¹`, deleting such a pair, swapping far
/// commuting letters, or rewriting `σ_i σ_{i+1} σ_i` into `σ_{i+1} σ_i σ_{i+1}`
/// (and back, with either sign).
pub fn scramble(word: &BraidWord, steps: usize, max_index: u32, rng: &mut dyn RngCore) -> BraidWord {
    let mut w: Vec<i32> = word.signed();
    let max_index = max_index.max(2);
    for _ in 0..steps {
        match rng.random_range(0..4) {
            0 => {
                let at = rng.random_range(0..=w.len());
                let l = random_letter(max_index, rng).signed();
                w.splice(at..at, [l, -l]);
            }
            1 => {
                if let Some(at) = (0..w.len().saturating_sub(1)).find(|&k| w[k] == -w[k + 1]) {
                    w.drain(at..at + 2);
                }
            }
            2 => {
                if w.len() >= 2 {
                    let at = rng.random_range(0..w.len() - 1);
                    if (w[at].abs() - w[at + 1].abs()).abs() >= 2 {
                        w.swap(at, at + 1);
                    }
                }
            }
            _ => {
                if w.len() >= 3 {
                    let start = rng.random_range(0..w.len() - 2);
                    let (a, b, c) = (w[start], w[start + 1], w[start + 2]);
                    let same_sign = a.signum() == b.signum() && b.signum() == c.signum();
                    if same_sign && a == c && (a.abs() - b.abs()).abs() == 1 {
                        w[start] = b;
                        w[start + 1] = a;
                        w[start + 2] = b;
                    }
                }
            }
        }
    }
    let signed: Vec<i64> = w.into_iter().map(i64::from).collect();
    BraidWord::from_signed(&signed).expect("indices stay positive")
}
