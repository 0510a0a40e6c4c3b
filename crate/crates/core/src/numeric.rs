//! Small numerical kernels shared by every module.

use num_complex::Complex64;

/// Pairwise (cascade) summation. Order-independent up to the fixed tree
/// shape, which keeps reductions reproducible.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const BLOCK: usize = 8;
    if xs.len() <= BLOCK {
        return xs.iter().fold(0.0, |acc, &x| acc + x);
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

pub fn pairwise_sum_complex(xs: &[Complex64]) -> Complex64 {
    const BLOCK: usize = 8;
    if xs.len() <= BLOCK {
        return xs.iter().fold(Complex64::new(0.0, 0.0), |acc, &x| acc + x);
    }
    let mid = xs.len() / 2;
    pairwise_sum_complex(&xs[..mid]) + pairwise_sum_complex(&xs[mid..])
}

/// `exp(u) - 1` without cancellation for small `|u|`.
pub fn cexpm1(u: Complex64) -> Complex64 {
    let (a, b) = (u.re, u.im);
    let half = (0.5 * b).sin();
    let re = a.exp_m1() * b.cos() - 2.0 * half * half;
    let im = a.exp() * b.sin();
    Complex64::new(re, im)
}

/// `1 - exp(-x)` for `x >= 0`, accurate for tiny `x`.
pub fn one_minus_exp_neg(x: f64) -> f64 {
    -(-x).exp_m1()
}
