//! Closed-form constants of the periodic method and brute-force checks of
//! the sup bounds they encode.
//!
//! * `C₁,λ(α)` bounds the lattice Gaussian sum `sup_{|y|≤λ/2} Σ_k e^{α(1-(y+kλ)²)}`.
//! * `w(z) = (e^u - 1)/u`, `u = (2π/λ)(z - θ)`, interpolates `1` at `θ` and
//!   vanishes at `θ + ikλ`, `k ≠ 0`; `m(λ)` bounds it on the strip.
//! * `C(λ)` is the equivalence constant between the periodic and the
//!   ordinary complex norms; it tends to 1 as `λ → ∞`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::couples::check_theta;
use crate::error::{invalid, Error, Result};
use crate::numeric::{cexpm1, one_minus_exp_neg, pairwise_sum};

/// Switch radius `|z - θ|` below which `w` is evaluated by its Taylor series.
pub const W_TAYLOR_RADIUS: f64 = 1e-3;
const W_TAYLOR_MIN_TERMS: usize = 8;

fn check_positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(name, format!("must be positive and finite, got {v}")))
    }
}

fn finite(label: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Range(format!("{label} is not representable ({v})")))
    }
}

/// `1 - e^{-x}`, rejected when it is not a usable positive number.
fn gap(label: &str, x: f64) -> Result<f64> {
    let g = one_minus_exp_neg(x);
    if g > 0.0 && g.is_normal() {
        Ok(g)
    } else {
        Err(Error::Range(format!("1 - exp(-{x:e}) underflows in {label}")))
    }
}

/// `C₁,λ(α) = e^α + 2e^{α - αλ²/4}·(2 - e^{-αλ²})/(1 - e^{-αλ²})`.
pub fn c1(lambda: f64, alpha: f64) -> Result<f64> {
    check_positive("lambda", lambda)?;
    check_positive("alpha", alpha)?;
    let s = alpha * lambda * lambda;
    let g = gap("c1", s)?;
    let v = alpha.exp() + 2.0 * (alpha - 0.25 * s).exp() * (1.0 + g) / g;
    finite("c1", v)
}

/// Bound on `Σ_{|k|>K} e^{α(1-(y+kλ)²)}` uniform in `|y| ≤ λ/2`.
///
/// For `k ≥ K+1` and `|y| ≤ λ/2`, `y + kλ ≥ λ(k - ½)` and
/// `(k - ½)² ≥ (K + ½)(k - ½)`, so each side is at most
/// `e^α Σ_{k≥K+1} e^{-αλ²(K+½)(k-½)} = e^{α - αλ²(K+½)²} / (1 - e^{-αλ²(K+½)})`.
pub fn gaussian_tail(lambda: f64, alpha: f64, k_trunc: usize) -> Result<f64> {
    check_positive("lambda", lambda)?;
    check_positive("alpha", alpha)?;
    let s = alpha * lambda * lambda;
    let h = k_trunc as f64 + 0.5;
    let g = gap("gaussian_tail", s * h)?;
    let v = 2.0 * (alpha - s * h * h).exp() / g;
    finite("gaussian_tail", v)
}

/// A sampled supremum plus a rigorous bound for what the sampling dropped.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridSup {
    pub grid_max: f64,
    pub tail: f64,
}

impl GridSup {
    pub fn value(&self) -> f64 {
        self.grid_max + self.tail
    }
}

/// `max_y Σ_{|k|≤K} e^{α(1-(y+kλ)²)}` over `M` equispaced `y ∈ [-λ/2, λ/2]`,
/// with the `|k| > K` remainder bounded by [`gaussian_tail`].
pub fn c1_bruteforce(lambda: f64, alpha: f64, k_trunc: usize, samples: usize) -> Result<GridSup> {
    check_positive("lambda", lambda)?;
    check_positive("alpha", alpha)?;
    if k_trunc < 1 {
        return Err(invalid("K", "truncation order must be at least 1"));
    }
    if samples < 16 {
        return Err(invalid("M", format!("need at least 16 grid points, got {samples}")));
    }
    let kk = k_trunc as i64;
    let grid_max = (0..samples)
        .map(|m| {
            let y = -0.5 * lambda + lambda * m as f64 / (samples - 1) as f64;
            let terms: Vec<f64> = (-kk..=kk)
                .map(|k| {
                    let t = y + k as f64 * lambda;
                    (alpha * (1.0 - t * t)).exp()
                })
                .collect();
            pairwise_sum(&terms)
        })
        .fold(0.0_f64, f64::max);
    Ok(GridSup {
        grid_max,
        tail: gaussian_tail(lambda, alpha, k_trunc)?,
    })
}

/// `w(z) = (λ/2π)(e^{(2π/λ)(z-θ)} - 1)/(z - θ)`, `w(θ) = 1`.
pub fn w_eval(lambda: f64, theta: f64, z: Complex64) -> Complex64 {
    let d = z - theta;
    let u = d * (2.0 * PI / lambda);
    if d.norm() < W_TAYLOR_RADIUS {
        w_series(u)
    } else {
        cexpm1(u) / u
    }
}

/// `(e^u - 1)/u = Σ_{m≥0} u^m/(m+1)!`, summed until the terms stop mattering.
fn w_series(u: Complex64) -> Complex64 {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for m in 1..64 {
        term = term * u / (m as f64 + 1.0);
        sum += term;
        if m + 1 >= W_TAYLOR_MIN_TERMS && term.norm() <= 1e-18 * sum.norm() {
            break;
        }
    }
    sum
}

/// Pointwise envelope `|w(z)| ≤ max(1, e^{(2π/λ)(Re z - θ)})`, from
/// `(e^u - 1)/u = ∫_0^1 e^{tu} dt`.
pub fn w_envelope(lambda: f64, theta: f64, re_z: f64) -> f64 {
    (2.0 * PI / lambda * (re_z - theta)).exp().max(1.0)
}

/// `m(λ) = (λ/2π)(1 + e^{4π/λ})`.
pub fn m_bound(lambda: f64) -> Result<f64> {
    check_positive("lambda", lambda)?;
    finite("m(lambda)", lambda / (2.0 * PI) * (1.0 + (4.0 * PI / lambda).exp()))
}

/// `max |w|` over an `M×M` grid on `[0,1]×[-Y,Y]` (plus the real axis row),
/// combined with the bound `(λ/2π)(1 + e^{2π(1-θ)/λ})/|y|` valid for `|y| > Y`.
pub fn w_sup_empirical(lambda: f64, theta: f64, half_height: f64, samples: usize) -> Result<f64> {
    check_positive("lambda", lambda)?;
    check_theta(theta)?;
    check_positive("Y", half_height)?;
    if samples < 64 {
        return Err(invalid("M", format!("need at least 64 grid points, got {samples}")));
    }
    let step_x = 1.0 / (samples - 1) as f64;
    let step_y = 2.0 * half_height / (samples - 1) as f64;
    let ys = (0..samples)
        .map(|m| -half_height + m as f64 * step_y)
        .chain(std::iter::once(0.0));
    let mut grid_max = 0.0_f64;
    for y in ys {
        for i in 0..samples {
            let x = i as f64 * step_x;
            grid_max = grid_max.max(w_eval(lambda, theta, Complex64::new(x, y)).norm());
        }
    }
    let tail = lambda / (2.0 * PI) * (1.0 + (2.0 * PI * (1.0 - theta) / lambda).exp()) / half_height;
    Ok(grid_max.max(tail))
}

/// `m(λ)·(2e^{-ρλ²}/(1 - e^{-ρλ²}))·C₁,λ(δ) + C₁,λ(ρ)`.
pub fn c_general(lambda: f64, delta: f64, rho: f64) -> Result<f64> {
    check_positive("delta", delta)?;
    check_positive("rho", rho)?;
    let s = rho * lambda * lambda;
    let fine = 2.0 * (-s).exp() / gap("c_general", s)?;
    finite(
        "c_general",
        m_bound(lambda)? * fine * c1(lambda, delta)? + c1(lambda, rho)?,
    )
}

/// `C(λ) = (m(λ)·2e^{-λ}/(1 - e^{-λ}) + 1)·C₁,λ(1/λ)`.
pub fn c_main(lambda: f64) -> Result<f64> {
    check_positive("lambda", lambda)?;
    let fine = 2.0 * (-lambda).exp() / gap("c_main", lambda)?;
    finite("c_main", (m_bound(lambda)? * fine + 1.0) * c1(lambda, 1.0 / lambda)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OptimizedConstant {
    pub delta: f64,
    pub rho: f64,
    pub value: f64,
}

const OPT_GRID: usize = 32;
const OPT_SPAN: f64 = 3.0; // decades either side of 1/λ
const OPT_ROUNDS: usize = 3;

/// Minimise `c_general(λ, ·, ·)` over `(δ, ρ) ∈ [10⁻³/λ, 10³/λ]²`.
pub fn c_optimized(lambda: f64) -> Result<OptimizedConstant> {
    c_optimized_with(lambda, 0)
}

/// As [`c_optimized`] with the starting grid refined `levels` times (each
/// level halves the spacing and is seeded with the previous level's
/// optimum, so the value never increases with `levels`).
pub fn c_optimized_with(lambda: f64, levels: u32) -> Result<OptimizedConstant> {
    check_positive("lambda", lambda)?;
    let start = OptimizedConstant {
        delta: 1.0 / lambda,
        rho: 1.0 / lambda,
        value: c_main(lambda)?,
    };
    let mut best = start;
    for level in 0..=levels {
        let points = (OPT_GRID - 1) * (1usize << level) + 1;
        best = optimize_from(lambda, points, best);
    }
    Ok(best)
}

fn optimize_from(lambda: f64, points: usize, seed: OptimizedConstant) -> OptimizedConstant {
    let objective = |ld: f64, lr: f64| -> f64 {
        c_general(lambda, ld.exp() / lambda, lr.exp() / lambda).unwrap_or(f64::INFINITY)
    };
    let ln10 = std::f64::consts::LN_10;
    let lo = -OPT_SPAN * ln10;
    let step = 2.0 * OPT_SPAN * ln10 / (points - 1) as f64;
    let axis: Vec<f64> = (0..points).map(|i| lo + i as f64 * step).collect();
    // log-coordinates relative to 1/λ
    let mut best_ld = (seed.delta * lambda).ln();
    let mut best_lr = (seed.rho * lambda).ln();
    let mut best_v = seed.value;
    for &ld in &axis {
        for &lr in &axis {
            let v = objective(ld, lr);
            if v < best_v {
                best_v = v;
                best_ld = ld;
                best_lr = lr;
            }
        }
    }
    for _ in 0..OPT_ROUNDS {
        let (ld, v) = golden(|x| objective(x, best_lr), best_ld - step, best_ld + step);
        if v < best_v {
            best_v = v;
            best_ld = ld;
        }
        let (lr, v) = golden(|x| objective(best_ld, x), best_lr - step, best_lr + step);
        if v < best_v {
            best_v = v;
            best_lr = lr;
        }
    }
    OptimizedConstant {
        delta: best_ld.exp() / lambda,
        rho: best_lr.exp() / lambda,
        value: best_v,
    }
}

fn golden<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let g = 0.5 * (5.0_f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..80 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// One row of the `constants` table. Missing entries serialise as empty.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ConstantsRow {
    pub lambda: f64,
    pub alpha: Option<f64>,
    pub delta: Option<f64>,
    pub rho: Option<f64>,
    pub c1: Option<f64>,
    pub m: Option<f64>,
    pub c_main: Option<f64>,
    pub c_general: Option<f64>,
    pub c_opt: Option<f64>,
    pub delta_opt: Option<f64>,
    pub rho_opt: Option<f64>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c1_matches_extended_precision() {
        // mpmath, 40 digits
        let want = 5.961756556199459450484812;
        assert!((c1(2.0, 0.5).unwrap() - want).abs() <= 1e-14 * want);
    }

    #[test]
    fn c1_limit_and_monotonicity() {
        assert!((c1(40.0, 1.0).unwrap() - std::f64::consts::E).abs() < 1e-15);
        let vals: Vec<f64> = [1.0, 2.0, 4.0, 8.0].iter().map(|&l| c1(l, 1.0).unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn c1_rejects_degenerate_inputs() {
        assert!(c1(0.0, 1.0).is_err());
        assert!(c1(1.0, -1.0).is_err());
        assert!(matches!(c1(1e-200, 1e-200), Err(Error::Range(_))));
        assert!(matches!(c1(1.0, 800.0), Err(Error::Range(_))));
    }

    #[test]
    fn tail_formula_dominates_direct_summation() {
        for &(lambda, alpha) in &[(0.5, 0.1), (1.0, 1.0), (2.0, 0.5), (3.0, 2.0)] {
            for k_trunc in [0usize, 1, 3, 10] {
                let bound = gaussian_tail(lambda, alpha, k_trunc).unwrap();
                for m in 0..=64 {
                    let y = -0.5 * lambda + lambda * m as f64 / 64.0;
                    let direct: f64 = (k_trunc as i64 + 1..4000)
                        .flat_map(|k| [k, -k])
                        .map(|k| {
                            let t = y + k as f64 * lambda;
                            (alpha * (1.0 - t * t)).exp()
                        })
                        .sum();
                    assert!(direct <= bound * (1.0 + 1e-12), "{lambda} {alpha} {k_trunc}");
                }
            }
        }
        // the whole-lattice version (K = 0 plus the k = 0 term) never beats C₁
        for &(lambda, alpha) in &[(0.5f64, 0.1f64), (1.0, 1.0), (8.0, 4.0)] {
            let whole = alpha.exp() + gaussian_tail(lambda, alpha, 0).unwrap();
            assert!(c1_bruteforce(lambda, alpha, 5, 512).unwrap().value() <= whole);
        }
    }

    #[test]
    fn bruteforce_dominant_term_limit() {
        let r = c1_bruteforce(10.0, 0.5, 3, 4097).unwrap();
        assert!((r.value() - 0.5f64.exp()).abs() < 1e-12);
    }

    #[test]
    fn bruteforce_is_stable_and_below_c1() {
        let coarse = c1_bruteforce(1.0, 1.0, 20, 4096).unwrap();
        let fine = c1_bruteforce(1.0, 1.0, 20, 16384).unwrap();
        assert!((coarse.value() - fine.value()).abs() < 1e-6);
        // mpmath: the lattice sum at y = 0 is 4.8185275023307231006
        assert!((fine.grid_max - 4.8185275023307231006).abs() < 1e-6);
        assert!(fine.value() <= c1(1.0, 1.0).unwrap());
        assert!(c1_bruteforce(1.0, 1.0, 0, 64).is_err());
        assert!(c1_bruteforce(1.0, 1.0, 1, 8).is_err());
    }

    #[test]
    fn w_interpolates() {
        for &lambda in &[0.5, 1.0, 4.0] {
            for &theta in &[0.1, 0.5] {
                assert_eq!(w_eval(lambda, theta, Complex64::new(theta, 0.0)), Complex64::new(1.0, 0.0));
                for k in [-3, -1, 1, 2] {
                    let z = Complex64::new(theta, k as f64 * lambda);
                    assert!(w_eval(lambda, theta, z).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn w_series_and_direct_agree_at_switch() {
        for &lambda in &[0.5, 1.0, 2.0, 8.0, 128.0] {
            for a in 0..16 {
                let phase = a as f64 * PI / 8.0;
                let d = Complex64::from_polar(W_TAYLOR_RADIUS, phase);
                let u = d * (2.0 * PI / lambda);
                let direct = cexpm1(u) / u;
                let series = w_series(u);
                assert!((direct - series).norm() <= 1e-13, "{lambda} {phase}");
            }
        }
    }

    #[test]
    fn m_bound_values() {
        let v = m_bound(4.0 * PI).unwrap();
        assert!((v - 2.0 * (1.0 + std::f64::consts::E)).abs() < 1e-14 * v);
        assert!(m_bound(0.001).is_err());
    }

    #[test]
    fn w_sup_is_bounded_and_stable() {
        for &lambda in &[0.5, 2.0, 8.0] {
            for &theta in &[0.1, 0.9] {
                let s = w_sup_empirical(lambda, theta, 10.0 * lambda, 64).unwrap();
                assert!(s >= 1.0);
                assert!(s <= m_bound(lambda).unwrap());
                let s2 = w_sup_empirical(lambda, theta, 20.0 * lambda, 128).unwrap();
                assert!((s - s2).abs() < 1e-6);
                assert!(w_envelope(lambda, theta, 1.0) >= s * (1.0 - 1e-12));
            }
        }
    }

    #[test]
    fn c_general_reduces_to_c_main() {
        for &lambda in &[2.0, 4.0, 8.0, 16.0, 64.0] {
            let a = c_general(lambda, 1.0 / lambda, 1.0 / lambda).unwrap();
            let b = c_main(lambda).unwrap();
            assert!((a - b).abs() <= 1e-13 * b);
        }
        let want = 324.6607052983050760534971;
        assert!((c_general(2.0, 0.5, 0.5).unwrap() - want).abs() <= 1e-13 * want);
    }

    #[test]
    fn c_general_partial_monotonicity() {
        // increasing in δ through C₁(δ) when C₁ increases
        let lambda = 3.0;
        assert!(c1(lambda, 2.0).unwrap() > c1(lambda, 1.0).unwrap());
        assert!(c_general(lambda, 2.0, 0.3).unwrap() > c_general(lambda, 1.0, 0.3).unwrap());
    }

    #[test]
    fn c_main_frozen_values() {
        // mpmath, 40 digits
        let table = [
            (2.0, 324.6607052983050760534971),
            (4.0, 5.021125434588593018618678),
            (8.0, 1.755343917429642748872477),
            (16.0, 1.142484138696168682419757),
            (128.0, 1.007843097206499031660776),
        ];
        for (lambda, want) in table {
            assert!((c_main(lambda).unwrap() - want).abs() <= 1e-13 * want, "{lambda}");
        }
    }

    #[test]
    fn c_optimized_improves_on_c_main() {
        for &lambda in &[2.0, 8.0, 32.0] {
            let opt = c_optimized(lambda).unwrap();
            assert!(opt.value <= c_main(lambda).unwrap());
            let finer = c_optimized_with(lambda, 1).unwrap();
            assert!(finer.value <= opt.value);
            let c = c_general(lambda, opt.delta, opt.rho).unwrap();
            assert_eq!(c, opt.value);
        }
    }
}
