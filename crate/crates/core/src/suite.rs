//! Reproducible random test suites.
//!
//! One `ChaCha8` stream, seeded from a `u64`, drives everything in a fixed
//! order: for each exponent pair a dimension `n` uniform in `1..=n_max` and
//! weights `μ_i = exp(U(ln 0.1, ln 10))`; then, for each `(θ, λ)` and each
//! repetition, a vector with independent `N(0, ½) + i N(0, ½)` coordinates.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::Serialize;

use crate::couples::{Couple, Element, Exponent};
use crate::error::Result;

/// The exponents of the standard suites.
pub const STANDARD_EXPONENTS: [Exponent; 5] = [
    Exponent::Finite(1.0),
    Exponent::Finite(1.5),
    Exponent::Finite(2.0),
    Exponent::Finite(3.0),
    Exponent::Infinite,
];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Weights log-uniform in `[0.1, 10]`.
pub fn random_weights<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let (lo, hi) = (0.1_f64.ln(), 10.0_f64.ln());
    (0..n).map(|_| rng.gen_range(lo..=hi).exp()).collect()
}

/// Complex standard normal coordinates (`E|z|² = 1`).
pub fn random_element<R: Rng>(rng: &mut R, n: usize) -> Element {
    let normal = Normal::new(0.0, std::f64::consts::FRAC_1_SQRT_2).unwrap();
    Element(
        (0..n)
            .map(|_| {
                let re = normal.sample(rng);
                Complex64::new(re, normal.sample(rng))
            })
            .collect(),
    )
}

pub fn random_couple<R: Rng>(rng: &mut R, n_max: usize, p0: Exponent, p1: Exponent) -> Result<Couple> {
    let n = rng.gen_range(1..=n_max.max(1));
    Couple::new(p0, p1, random_weights(rng, n))
}

/// One `(couple, a, θ, λ)` instance.
#[derive(Clone, Debug, Serialize)]
pub struct Case {
    pub index: usize,
    pub couple: Couple,
    pub a: Element,
    pub theta: f64,
    pub lambda: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteSpec {
    pub seed: u64,
    pub n_max: usize,
    pub exponents: Vec<Exponent>,
    pub thetas: Vec<f64>,
    pub lambdas: Vec<f64>,
    pub repetitions: usize,
}

impl SuiteSpec {
    /// All exponent pairs over the standard exponents.
    pub fn standard(seed: u64, thetas: Vec<f64>, lambdas: Vec<f64>, repetitions: usize) -> Self {
        SuiteSpec {
            seed,
            n_max: 8,
            exponents: STANDARD_EXPONENTS.to_vec(),
            thetas,
            lambdas,
            repetitions,
        }
    }

    /// Cases in grid order: exponent pair, then `θ`, then `λ`, then repetition.
    pub fn cases(&self) -> Result<Vec<Case>> {
        let mut rng = rng(self.seed);
        let mut out = Vec::new();
        for &p0 in &self.exponents {
            for &p1 in &self.exponents {
                let couple = random_couple(&mut rng, self.n_max, p0, p1)?;
                for &theta in &self.thetas {
                    for &lambda in &self.lambdas {
                        for _ in 0..self.repetitions {
                            let a = random_element(&mut rng, couple.n());
                            out.push(Case {
                                index: out.len(),
                                couple: couple.clone(),
                                a,
                                theta,
                                lambda,
                            });
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}
