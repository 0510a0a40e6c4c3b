//! Gaussian periodization of closed-form strip functions.
//!
//! `P(z) = Σ_k e^{α(z-θ+ikλ)²} g(z+ikλ) f(z+ikλ)` with kernel `g ≡ 1` or
//! `g = w`, truncated to a window of `2K+1` translates. Every truncation
//! carries a certified bound on the dropped terms.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::{
    candidate_fstrip_norm, check_strip, lipschitz_sup_capped, project_periodic, Projection, StripGeometry,
};
use crate::bounds::{c1, gaussian_tail, m_bound, w_envelope, w_eval};
use crate::couples::{weighted_norm_of_moduli, CandidateFn, Couple, Element, Side};
use crate::error::{invalid, Error, Result};
use crate::numeric::pairwise_sum_complex;

/// Largest truncation order [`truncation_k`] will return.
pub const TRUNCATION_BUDGET: usize = 4096;

/// Default truncation tolerance relative to `‖f‖_{𝔉∞}`.
pub const DEFAULT_RELATIVE_TOL: f64 = 1e-10;

const NORM_EVAL_BUDGET: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kernel {
    One,
    W,
}

impl std::str::FromStr for Kernel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "one" | "1" => Ok(Kernel::One),
            "w" => Ok(Kernel::W),
            other => Err(invalid("kernel", format!("expected `one` or `w`, got `{other}`"))),
        }
    }
}

impl Kernel {
    fn eval(self, geometry: StripGeometry, z: Complex64) -> Complex64 {
        match self {
            Kernel::One => Complex64::new(1.0, 0.0),
            Kernel::W => w_eval(geometry.lambda(), geometry.theta(), z),
        }
    }

    /// Bound on `|g|` over `Re z ∈ [x_lo, x_hi]`.
    fn envelope(self, geometry: StripGeometry, x_hi: f64) -> f64 {
        match self {
            Kernel::One => 1.0,
            Kernel::W => w_envelope(geometry.lambda(), geometry.theta(), x_hi),
        }
    }

    /// The constant `M_g` of the norm bound `‖P‖ ≤ C₁,λ(α) M_g ‖f‖`.
    pub fn norm_factor(self, lambda: f64) -> Result<f64> {
        match self {
            Kernel::One => Ok(1.0),
            Kernel::W => m_bound(lambda),
        }
    }
}

/// Smallest `K` with `sup_bound · tail(K) ≤ tol`, where `tail(K)` bounds
/// `Σ_{|k|>K} e^{α(1-(y+kλ)²)}` for `|y| ≤ λ/2`.
pub fn truncation_k(lambda: f64, alpha: f64, sup_bound: f64, tol: f64) -> Result<usize> {
    if !(tol > 0.0) {
        return Err(invalid("tol", format!("must be positive, got {tol}")));
    }
    if !(sup_bound >= 0.0 && sup_bound.is_finite()) {
        return Err(invalid("sup_bound", format!("must be finite and >= 0, got {sup_bound}")));
    }
    gaussian_tail(lambda, alpha, 0)?;
    let fits = |k: usize| {
        gaussian_tail(lambda, alpha, k)
            .map(|t| sup_bound * t <= tol)
            .unwrap_or(false)
    };
    if fits(0) {
        return Ok(0);
    }
    if !fits(TRUNCATION_BUDGET) {
        return Err(Error::TruncationBudget {
            tol,
            budget: TRUNCATION_BUDGET,
        });
    }
    // the tail decreases in K
    let (mut lo, mut hi) = (0, TRUNCATION_BUDGET);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if fits(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// A truncated periodization together with its certified tail.
///
/// `tail_bound` dominates, uniformly on the strip, both every coordinate
/// modulus and both boundary norms of the dropped translates.
#[derive(Clone, Debug)]
pub struct PeriodizedFn {
    source: CandidateFn,
    couple: Couple,
    kernel: Kernel,
    alpha: f64,
    geometry: StripGeometry,
    k_trunc: usize,
    /// `sup_{strip} |g| · ` envelope of `f`, measured coordinatewise and in both norms.
    sup_bound: f64,
    tail_bound: f64,
}

/// Periodize `f` with Gaussian rate `alpha` and kernel `g`.
///
/// `tol` defaults to `1e-10·‖f‖_{𝔉∞}`.
pub fn periodize(
    f: &CandidateFn,
    couple: &Couple,
    kernel: Kernel,
    alpha: f64,
    geometry: StripGeometry,
    tol: Option<f64>,
) -> Result<PeriodizedFn> {
    if couple.n() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: couple.n(),
            got: f.dim(),
        });
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(invalid("alpha", format!("must be positive, got {alpha}")));
    }
    if f.theta() != geometry.theta() {
        return Err(invalid(
            "theta",
            format!("candidate is centred at {} but the geometry at {}", f.theta(), geometry.theta()),
        ));
    }
    let envelope = f.modulus_envelope(0.0, 1.0);
    let env_norm = couple
        .norm_intersection(&Element(envelope.iter().map(|&e| Complex64::new(e, 0.0)).collect()))?
        .max(envelope.iter().fold(0.0_f64, |m, &e| m.max(e)));
    let sup_bound = kernel.envelope(geometry, 1.0) * env_norm;
    let tol = match tol {
        Some(t) => t,
        None => DEFAULT_RELATIVE_TOL * candidate_fstrip_norm(f, couple)?,
    };
    let lambda = geometry.lambda();
    let k_trunc = if sup_bound == 0.0 {
        0
    } else {
        truncation_k(lambda, alpha, sup_bound, tol)?
    };
    let tail_bound = sup_bound * gaussian_tail(lambda, alpha, k_trunc)?;
    Ok(PeriodizedFn {
        source: f.clone(),
        couple: couple.clone(),
        kernel,
        alpha,
        geometry,
        k_trunc,
        sup_bound,
        tail_bound,
    })
}

/// `G_δ`: kernel `w`, so that `G_δ(θ) = f(θ)` up to the tail.
pub fn g_delta(
    f: &CandidateFn,
    couple: &Couple,
    delta: f64,
    geometry: StripGeometry,
    tol: Option<f64>,
) -> Result<PeriodizedFn> {
    periodize(f, couple, Kernel::W, delta, geometry, tol)
}

/// `f̃_ρ`: kernel `1`.
pub fn f_tilde(
    f: &CandidateFn,
    couple: &Couple,
    rho: f64,
    geometry: StripGeometry,
    tol: Option<f64>,
) -> Result<PeriodizedFn> {
    periodize(f, couple, Kernel::One, rho, geometry, tol)
}

impl PeriodizedFn {
    pub fn source(&self) -> &CandidateFn {
        &self.source
    }

    pub fn couple(&self) -> &Couple {
        &self.couple
    }

    pub fn kernel(&self) -> Kernel {
        self.kernel
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn geometry(&self) -> StripGeometry {
        self.geometry
    }

    pub fn truncation(&self) -> usize {
        self.k_trunc
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// The same periodization truncated at `K` instead.
    pub fn with_truncation(&self, k_trunc: usize) -> Result<PeriodizedFn> {
        let tail_bound = self.sup_bound * gaussian_tail(self.geometry.lambda(), self.alpha, k_trunc)?;
        Ok(PeriodizedFn {
            k_trunc,
            tail_bound,
            ..self.clone()
        })
    }

    /// Truncated sum over `k ∈ [-K - shift, K - shift]`.
    pub fn eval_window(&self, z: Complex64, shift: i64) -> Vec<Complex64> {
        let theta = self.geometry.theta();
        let lambda = self.geometry.lambda();
        let kk = self.k_trunc as i64;
        let dim = self.source.dim();
        let mut parts: Vec<Vec<Complex64>> = vec![Vec::with_capacity(2 * self.k_trunc + 1); dim];
        for k in (-kk - shift)..=(kk - shift) {
            let zk = z + Complex64::new(0.0, k as f64 * lambda);
            let d = zk - theta;
            let weight = (self.alpha * d * d).exp() * self.kernel.eval(self.geometry, zk);
            for (i, v) in self.source.eval_unchecked(zk).into_iter().enumerate() {
                parts[i].push(weight * v);
            }
        }
        parts.iter().map(|p| pairwise_sum_complex(p)).collect()
    }

    /// Evaluate with the window centred on the period cell containing `z`,
    /// so the truncated function is exactly `iλ`-periodic.
    pub fn eval_unchecked(&self, z: Complex64) -> Vec<Complex64> {
        let shift = (z.im / self.geometry.lambda() + 0.5).floor() as i64;
        self.eval_window(z, shift)
    }

    pub fn eval(&self, z: Complex64) -> Result<Element> {
        check_strip(z)?;
        Ok(Element(self.eval_unchecked(z)))
    }

    pub fn value_at_theta(&self) -> Element {
        Element(self.eval_unchecked(Complex64::new(self.geometry.theta(), 0.0)))
    }

    /// Right-hand side `C₁,λ(α)·M_g·‖f‖_{𝔉∞}` of the norm bound.
    pub fn norm_bound_rhs(&self) -> Result<f64> {
        let lambda = self.geometry.lambda();
        Ok(c1(lambda, self.alpha)? * self.kernel.norm_factor(lambda)? * candidate_fstrip_norm(&self.source, &self.couple)?)
    }

    /// Certified upper bound on `‖P‖_{𝔉∞}` for the untruncated sum.
    ///
    /// On each boundary line the truncated sum is maximised over one period
    /// by Lipschitz branch and bound, then the tail is added. The Lipschitz
    /// constant is a Cauchy estimate on discs of radius `r`: the full sum is
    /// bounded there by `e^{α(|j-θ|+r)²}·C₁,λ(α)e^{-α}·sup|g|·‖envelope‖`.
    pub fn fstrip_norm(&self) -> Result<f64> {
        let lambda = self.geometry.lambda();
        let theta = self.geometry.theta();
        let lattice = c1(lambda, self.alpha)? * (-self.alpha).exp();
        let mut best = 0.0_f64;
        for side in Side::BOTH {
            let j = side.abscissa();
            let p = self.couple.exponent(side);
            let lipschitz = [0.05, 0.1, 0.25, 0.5, 1.0]
                .iter()
                .map(|&r| {
                    let env = self.source.modulus_envelope(j - r, j + r);
                    let env_norm = weighted_norm_of_moduli(&env, p, self.couple.mu());
                    let reach = (j - theta).abs() + r;
                    (self.alpha * reach * reach).exp() * lattice * self.kernel.envelope(self.geometry, j + r) * env_norm / r
                })
                .fold(f64::INFINITY, f64::min);
            let value = |y: f64| {
                self.couple
                    .norm_unchecked(&self.eval_window(Complex64::new(j, y), 0), side)
            };
            let sup = lipschitz_sup_capped(value, -0.5 * lambda, 0.5 * lambda, lipschitz, NORM_EVAL_BUDGET);
            best = best.max(sup);
        }
        Ok(best + self.tail_bound)
    }

    /// Laurent projection of degree `N` from `M` samples per boundary line.
    pub fn project(&self, degree: usize, samples: usize) -> Result<Projection> {
        project_periodic(|z| self.eval(z), self.geometry, degree, samples)
    }
}

/// `ã = f̃_ρ(θ) = Σ_k e^{-ρ(kλ)²} f(θ + ikλ)`, truncated.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AtildeResult {
    pub value: Element,
    pub tail_bound: f64,
    pub rho: f64,
    pub lambda: f64,
}

pub fn a_tilde(
    f: &CandidateFn,
    couple: &Couple,
    rho: f64,
    geometry: StripGeometry,
    tol: Option<f64>,
) -> Result<AtildeResult> {
    let p = f_tilde(f, couple, rho, geometry, tol)?;
    Ok(AtildeResult {
        value: p.value_at_theta(),
        tail_bound: p.tail_bound(),
        rho,
        lambda: geometry.lambda(),
    })
}

/// `2e^{-ρλ²}/(1 - e^{-ρλ²})`: the weight of all off-centre translates in `ã`.
pub fn fine_tuning_factor(lambda: f64, rho: f64) -> f64 {
    let s = rho * lambda * lambda;
    2.0 * (-s).exp() / crate::numeric::one_minus_exp_neg(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::couples::{Exponent, Term};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn setup(lambda: f64, theta: f64) -> (Couple, Element, CandidateFn, StripGeometry) {
        let couple = Couple::new(Exponent::Finite(1.0), Exponent::Finite(3.0), vec![0.5, 2.0, 1.0]).unwrap();
        let a = Element(vec![c(1.0, -0.5), c(0.2, 0.1), c(-2.0, 0.3)]);
        let f = couple
            .thorin_extremal(&a, theta)
            .unwrap()
            .function
            .damp(0.01, theta)
            .unwrap();
        (couple, a, f, StripGeometry::new(lambda, theta).unwrap())
    }

    #[test]
    fn truncation_is_minimal_and_monotone() {
        for &(lambda, alpha) in &[(1.0, 1.0), (2.0, 0.5), (4.0, 0.25), (0.5, 2.0)] {
            for &tol in &[1e-3, 1e-8, 1e-12] {
                let k = truncation_k(lambda, alpha, 3.0, tol).unwrap();
                assert!(3.0 * gaussian_tail(lambda, alpha, k).unwrap() <= tol);
                if k > 0 {
                    assert!(3.0 * gaussian_tail(lambda, alpha, k - 1).unwrap() > tol);
                }
                assert!(truncation_k(lambda, alpha, 3.0, tol * 10.0).unwrap() <= k);
            }
        }
        assert!(truncation_k(1.0, 50.0, 1.0, 1e-12).unwrap() <= 3);
        assert!(truncation_k(10.0, 0.5, 1.0, 1e-12).unwrap() <= 3);
        assert!(matches!(
            truncation_k(1e-3, 1e-3, 1.0, 1e-12),
            Err(Error::TruncationBudget { .. })
        ));
    }

    #[test]
    fn w_kernel_reproduces_the_interpolation_point() {
        for &lambda in &[1.0, 2.0, 4.0] {
            let (couple, a, f, geom) = setup(lambda, 0.3);
            let g = g_delta(&f, &couple, 1.0 / lambda, geom, None).unwrap();
            let v = g.value_at_theta();
            for (x, y) in v.0.iter().zip(&a.0) {
                assert!((x - y).norm() <= g.tail_bound() + 1e-12);
            }
        }
    }

    #[test]
    fn dominant_translate_for_large_rate() {
        let geom = StripGeometry::new(10.0, 0.5).unwrap();
        let couple = Couple::uniform(2, Exponent::Finite(2.0), Exponent::Infinite).unwrap();
        let a = Element(vec![c(1.0, 2.0), c(-0.5, 0.0)]);
        let f = CandidateFn::constant(&a, 0.5).unwrap();
        let p = f_tilde(&f, &couple, 1.0, geom, None).unwrap();
        for &z in &[c(0.2, 0.1), c(0.9, -0.3), c(0.5, 0.0)] {
            let d = z - 0.5;
            let want = a.scale((d * d).exp());
            let got = p.eval(z).unwrap();
            assert!(got.sub(&want).max_modulus() <= 1e-12);
        }
        // constant input: ã = a · Σ_k e^{-ρ(kλ)²} with a ratio ≥ 1
        let at = a_tilde(&f, &couple, 0.01, geom, None).unwrap();
        let ratio = at.value.0[0] / a.0[0];
        let series: f64 = (-50..=50i32).map(|k| (-0.01 * (k as f64 * 10.0).powi(2)).exp()).sum();
        assert!((ratio.re - series).abs() < 1e-10 && ratio.im.abs() < 1e-12);
        assert!(ratio.re >= 1.0);
    }

    #[test]
    fn f_tilde_at_theta_is_the_weighted_translate_sum() {
        let (couple, _, f, geom) = setup(2.0, 0.6);
        let rho = 0.5;
        let at = a_tilde(&f, &couple, rho, geom, None).unwrap();
        let kk = f_tilde(&f, &couple, rho, geom, None).unwrap().truncation() as i64;
        let mut want = Element::zeros(3);
        for k in -kk..=kk {
            let v = f.eval_unchecked(c(0.6, k as f64 * 2.0));
            want = want.add(&Element(v).scale(c((-rho * (k as f64 * 2.0).powi(2)).exp(), 0.0)));
        }
        assert!(at.value.sub(&want).max_modulus() <= 1e-12);
    }

    #[test]
    fn periodicity_defect_is_within_twice_the_tail() {
        let (couple, _, f, geom) = setup(1.0, 0.4);
        let p = g_delta(&f, &couple, 1.0, geom, Some(1e-4)).unwrap();
        for i in 0..21 {
            // y runs over the closed fundamental cell, including both edges
            let z = c(i as f64 / 20.0, -0.5 + 0.05 * i as f64);
            let shifted = z + c(0.0, 1.0);
            let a = Element(p.eval_window(z, 0));
            let b = p.eval(shifted).unwrap();
            assert!(a.sub(&b).max_modulus() <= 2.0 * p.tail_bound(), "{i} {} {} K={}", a.sub(&b).max_modulus(), p.tail_bound(), p.truncation());
            let a = p.eval(z).unwrap();
            let b = p.eval(shifted).unwrap();
            assert!(a.sub(&b).max_modulus() <= 1e-12 * (1.0 + a.max_modulus()));
        }
    }

    #[test]
    fn doubling_truncation_moves_values_by_at_most_the_tail() {
        let (couple, _, f, geom) = setup(1.0, 0.5);
        let p = f_tilde(&f, &couple, 0.3, geom, Some(1e-3)).unwrap();
        let q = p.with_truncation(2 * p.truncation()).unwrap();
        assert!(q.tail_bound() <= p.tail_bound());
        for i in 0..10 {
            let z = c(0.1 * i as f64, 0.37 * i as f64 - 1.0);
            let d = Element(p.eval_unchecked(z)).sub(&Element(q.eval_unchecked(z)));
            assert!(d.max_modulus() <= p.tail_bound());
        }
    }

    #[test]
    fn periodization_is_linear() {
        let (couple, _, f, geom) = setup(2.0, 0.5);
        let g = CandidateFn::new(
            0.5,
            vec![
                vec![Term { c: c(0.3, 0.0), beta: 0.2, s: -1.0 }],
                vec![],
                vec![Term { c: c(0.0, 1.0), beta: 0.0, s: 0.5 }],
            ],
        )
        .unwrap();
        let sum = CandidateFn::new(
            0.5,
            f.terms().iter().zip(g.terms()).map(|(x, y)| [x.clone(), y.clone()].concat()).collect(),
        )
        .unwrap();
        let pf = g_delta(&f, &couple, 0.5, geom, None).unwrap();
        let pg = pf.clone();
        let pg = PeriodizedFn { source: g, ..pg };
        let ps = PeriodizedFn { source: sum, ..pf.clone() };
        for i in 0..8 {
            let z = c(0.125 * i as f64, 0.3 * i as f64);
            let lhs = Element(ps.eval_unchecked(z));
            let rhs = Element(pf.eval_unchecked(z)).add(&Element(pg.eval_unchecked(z)));
            assert!(lhs.sub(&rhs).max_modulus() <= 1e-13 * (1.0 + lhs.max_modulus()));
        }
    }

    #[test]
    fn norm_bounds_hold() {
        for &lambda in &[2.0, 4.0] {
            let (couple, _, f, geom) = setup(lambda, 0.35);
            let fnorm = candidate_fstrip_norm(&f, &couple).unwrap();
            let g = g_delta(&f, &couple, 1.0 / lambda, geom, None).unwrap();
            let bound = m_bound(lambda).unwrap() * c1(lambda, 1.0 / lambda).unwrap() * fnorm;
            let got = g.fstrip_norm().unwrap();
            assert!(got <= bound * (1.0 + 1e-9), "{got} {bound}");
            assert!((g.norm_bound_rhs().unwrap() - bound).abs() <= 1e-12 * bound);
            let t = f_tilde(&f, &couple, 1.0 / lambda, geom, None).unwrap();
            assert!(t.fstrip_norm().unwrap() <= c1(lambda, 1.0 / lambda).unwrap() * fnorm * (1.0 + 1e-9));
            // the certified value dominates samples
            for i in 0..16 {
                let y = lambda * i as f64 / 16.0;
                for side in Side::BOTH {
                    let v = g.eval(c(side.abscissa(), y)).unwrap();
                    assert!(couple.norm_pj(&v, side).unwrap() <= got);
                }
            }
        }
    }

    #[test]
    fn fine_tuning_inequality() {
        let (couple, a, f, geom) = setup(4.0, 0.45);
        let rho = 0.25;
        let fnorm = candidate_fstrip_norm(&f, &couple).unwrap();
        let at = a_tilde(&f, &couple, rho, geom, None).unwrap();
        let lhs = couple.oracle_interp_norm(&at.value.sub(&a), 0.45).unwrap();
        let rhs = fine_tuning_factor(4.0, rho) * fnorm;
        assert!(lhs <= rhs * (1.0 + 1e-9) + at.tail_bound, "{lhs} {rhs}");
        assert!(lhs > 0.0);
    }

    #[test]
    fn projection_matches_direct_evaluation() {
        let (couple, _, f, geom) = setup(2.0, 0.5);
        let g = g_delta(&f, &couple, 0.5, geom, None).unwrap();
        let proj = g.project(12, 200).unwrap();
        assert!(proj.aliasing < 1e-8);
        for i in 0..8 {
            let z = c(i as f64 / 7.0, 0.1 + 0.2 * i as f64);
            let d = proj.function.eval(z).unwrap().sub(&g.eval(z).unwrap());
            assert!(d.max_modulus() < 1e-8, "{}", d.max_modulus());
        }
    }

    #[test]
    fn rejects_mismatched_centre() {
        let (couple, _, f, _) = setup(2.0, 0.5);
        let geom = StripGeometry::new(2.0, 0.4).unwrap();
        assert!(g_delta(&f, &couple, 0.5, geom, None).is_err());
        assert!("z".parse::<Kernel>().is_err());
        assert_eq!("w".parse::<Kernel>().unwrap(), Kernel::W);
    }
}
