//! Certified upper bounds on the periodic interpolation norm `‖a‖_[θ,λ]`.
//!
//! Competitors are Laurent polynomials `F = Σ_{|k|≤N} c_k ζ^k` with the
//! constraint `F(θ) = Σ_k c_k = a` eliminated through
//! `c_0 = a - Σ_{k≠0} c_k`. A temperature-annealed smooth surrogate of the
//! sampled sup norm is minimised by accelerated gradient descent; whatever
//! the optimizer does, only the certified norm of an exactly feasible
//! function is ever reported.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlannerScalar};
use serde::{Deserialize, Serialize};

use crate::analytic::{certification_factor, PeriodicLaurentFn, StripGeometry};
use crate::bounds::{c_general, c_main, c_optimized, m_bound, OptimizedConstant};
use crate::couples::{CandidateFn, Couple, Element, Exponent, Side};
use crate::error::{invalid, Error, Result};
use crate::periodize::{f_tilde, g_delta, PeriodizedFn};

/// Schema version carried by every serialized configuration.
pub const ARTIFACT_VERSION: &str = "1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Init {
    /// `F ≡ a`.
    Zero,
    /// Laurent projection of the periodized Thorin function.
    PeriodizedThorin,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub version: String,
    #[serde(rename = "N")]
    pub degree: usize,
    #[serde(rename = "M")]
    pub samples: usize,
    /// Smoothing temperatures relative to the initial sup norm.
    pub temperatures: Vec<f64>,
    /// Iteration cap per temperature.
    pub max_iters: usize,
    /// Factor by which the curvature estimate grows on a failed step.
    pub backtrack: f64,
    /// Factor by which it shrinks after an accepted step.
    pub relax: f64,
    pub init: Init,
    /// Gaussian damping applied to the Thorin function before periodization.
    pub eps_damp: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig::with_degree(12, 8)
    }
}

impl SolverConfig {
    /// Degree `N` with `M = oversample·(2N+1)` boundary samples.
    pub fn with_degree(degree: usize, oversample: usize) -> Self {
        SolverConfig {
            version: ARTIFACT_VERSION.to_string(),
            degree,
            samples: oversample * (2 * degree + 1),
            temperatures: vec![1e-1, 1e-2, 1e-3, 1e-4],
            max_iters: 150,
            backtrack: 2.0,
            relax: 0.7,
            init: Init::PeriodizedThorin,
            eps_damp: 0.01,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.degree as f64;
        if self.samples as f64 <= std::f64::consts::PI * n || self.samples < 2 * self.degree + 1 {
            return Err(Error::Certification {
                degree: self.degree,
                samples: self.samples,
            });
        }
        if self.temperatures.is_empty() {
            return Err(invalid("temperatures", "schedule must not be empty"));
        }
        if self.temperatures.iter().any(|t| !(*t > 0.0 && t.is_finite()))
            || self.temperatures.windows(2).any(|w| w[1] >= w[0])
        {
            return Err(invalid("temperatures", "must be positive and strictly decreasing"));
        }
        if self.max_iters == 0 {
            return Err(invalid("max_iters", "must be at least 1"));
        }
        if !(self.backtrack > 1.0 && self.relax > 0.0 && self.relax <= 1.0) {
            return Err(invalid("backtrack", "need backtrack > 1 and 0 < relax <= 1"));
        }
        if !(self.eps_damp > 0.0 && self.eps_damp.is_finite()) {
            return Err(invalid("eps_damp", "must be positive"));
        }
        Ok(())
    }
}

/// Mode index `q ∈ 0..2N` to Laurent index `k ≠ 0`.
fn mode(q: usize, degree: usize) -> i64 {
    if q < degree {
        q as i64 - degree as i64
    } else {
        q as i64 - degree as i64 + 1
    }
}

/// `t·ln Σ e^{v/t}` and, optionally, its softmax weights.
fn soft_max(values: &[f64], t: f64, weights: Option<&mut Vec<f64>>) -> f64 {
    let top = values.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v));
    match weights {
        Some(w) => {
            w.clear();
            w.extend(values.iter().map(|&v| ((v - top) / t).exp()));
            let total: f64 = w.iter().sum();
            w.iter_mut().for_each(|e| *e /= total);
            top + t * total.ln()
        }
        None => {
            let total: f64 = values.iter().map(|&v| ((v - top) / t).exp()).sum();
            top + t * total.ln()
        }
    }
}

/// Smoothed `‖x‖_{L^p(μ)}` with `|x_i|` replaced by `sqrt(|x_i|² + ε²)` and,
/// for `p = ∞`, the max replaced by a soft-max at temperature `t`. Writes
/// `∂/∂Re x_i + i ∂/∂Im x_i` into `grad` when given. `h` is scratch space.
fn smoothed_norm(
    x: &[Complex64],
    p: Exponent,
    mu: &[f64],
    eps: f64,
    t: f64,
    h: &mut Vec<f64>,
    grad: Option<&mut [Complex64]>,
) -> f64 {
    let eps2 = eps * eps;
    h.clear();
    h.extend(x.iter().map(|z| (z.norm_sqr() + eps2).sqrt()));
    match p {
        Exponent::Infinite => {
            let top = h.iter().fold(0.0_f64, |m, &v| m.max(v));
            for v in h.iter_mut() {
                *v = ((*v - top) / t).exp();
            }
            let total: f64 = h.iter().sum();
            if let Some(g) = grad {
                for i in 0..x.len() {
                    let hi = top + t * h[i].ln();
                    g[i] = x[i] * (h[i] / (total * hi));
                }
            }
            top + t * total.ln()
        }
        Exponent::Finite(q) if q == 1.0 => {
            if let Some(g) = grad {
                for i in 0..x.len() {
                    g[i] = x[i] * (mu[i] / h[i]);
                }
            }
            h.iter().zip(mu).map(|(a, b)| a * b).sum()
        }
        Exponent::Finite(q) if q == 2.0 => {
            let value = h.iter().zip(mu).map(|(a, b)| a * a * b).sum::<f64>().sqrt();
            if let Some(g) = grad {
                for i in 0..x.len() {
                    g[i] = x[i] * (mu[i] / value);
                }
            }
            value
        }
        Exponent::Finite(q) => {
            let top = h.iter().fold(0.0_f64, |m, &v| m.max(v));
            let s: f64 = h.iter().zip(mu).map(|(&v, m)| m * (v / top).powf(q)).sum();
            let value = top * s.powf(1.0 / q);
            if let Some(g) = grad {
                for i in 0..x.len() {
                    // μ_i (h_i/n)^{p-1} x_i / h_i
                    let w = mu[i] * (h[i] / value).powf(q - 1.0);
                    g[i] = x[i] * (w / h[i]);
                }
            }
            value
        }
    }
}

/// The smoothed sup objective in the scaled free coefficients
/// `d_k = c_k·max(r_0^k, r_1^k)`, `k ≠ 0`, stored mode-major (`2N × n`).
///
/// Boundary values `F(j + imλ/M) = a + Σ_k d_k (r_j^k/s_k · e^{2πikm/M} - 1/s_k)`
/// are one inverse DFT per side and coordinate.
#[derive(Clone)]
pub struct SmoothedObjective {
    couple: Couple,
    a: Vec<Complex64>,
    geometry: StripGeometry,
    degree: usize,
    samples: usize,
    /// Per side and mode, `r_j^k / s_k ≤ 1`.
    gain: [Vec<f64>; 2],
    log_scale: Vec<f64>,
    /// DFT bin `k mod M` of each mode.
    bin: Vec<usize>,
    inverse: Arc<dyn Fft<f64>>,
    forward: Arc<dyn Fft<f64>>,
    temperature: f64,
}

impl fmt::Debug for SmoothedObjective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SmoothedObjective")
            .field("couple", &self.couple)
            .field("geometry", &self.geometry)
            .field("degree", &self.degree)
            .field("samples", &self.samples)
            .field("temperature", &self.temperature)
            .finish()
    }
}

impl SmoothedObjective {
    pub fn new(
        couple: &Couple,
        a: &Element,
        geometry: StripGeometry,
        degree: usize,
        samples: usize,
        temperature: f64,
    ) -> Result<Self> {
        couple.check_dim(a)?;
        geometry.check_degree(degree)?;
        if samples < 2 * degree + 1 {
            return Err(Error::Certification { degree, samples });
        }
        if !(temperature > 0.0 && temperature.is_finite()) {
            return Err(invalid("temperature", format!("must be positive, got {temperature}")));
        }
        let lr = [
            geometry.log_boundary_modulus(Side::Zero),
            geometry.log_boundary_modulus(Side::One),
        ];
        let modes = 2 * degree;
        let log_scale: Vec<f64> = (0..modes)
            .map(|q| {
                let k = mode(q, degree) as f64;
                (k * lr[0]).max(k * lr[1])
            })
            .collect();
        let gain = [0, 1].map(|j| {
            (0..modes)
                .map(|q| (mode(q, degree) as f64 * lr[j] - log_scale[q]).exp())
                .collect()
        });
        let bin = (0..modes)
            .map(|q| mode(q, degree).rem_euclid(samples as i64) as usize)
            .collect();
        // the scalar planner keeps results identical across CPUs
        let mut planner = FftPlannerScalar::new();
        Ok(SmoothedObjective {
            couple: couple.clone(),
            a: a.0.clone(),
            geometry,
            degree,
            samples,
            gain,
            log_scale,
            bin,
            inverse: planner.plan_fft_inverse(samples),
            forward: planner.plan_fft_forward(samples),
            temperature,
        })
    }

    pub fn num_vars(&self) -> usize {
        2 * self.degree * self.a.len()
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn set_temperature(&mut self, temperature: f64) {
        self.temperature = temperature;
    }

    /// Boundary values laid out `[side][coordinate·M + sample]`.
    fn boundary_values(&self, d: &[Complex64], scratch: &mut [Complex64]) -> [Vec<Complex64>; 2] {
        let n = self.a.len();
        let big_m = self.samples;
        let mut shift = self.a.clone();
        for (q, &ls) in self.log_scale.iter().enumerate() {
            let inv = (-ls).exp();
            for i in 0..n {
                shift[i] -= d[q * n + i] * inv;
            }
        }
        [0, 1].map(|j| {
            let mut vals = vec![Complex64::new(0.0, 0.0); n * big_m];
            for i in 0..n {
                let buf = &mut vals[i * big_m..(i + 1) * big_m];
                for (q, &g) in self.gain[j].iter().enumerate() {
                    buf[self.bin[q]] += d[q * n + i] * g;
                }
                self.inverse.process_with_scratch(buf, scratch);
                for v in buf.iter_mut() {
                    *v += shift[i];
                }
            }
            vals
        })
    }

    fn evaluate(&self, d: &[Complex64], want_grad: bool) -> (f64, Vec<Complex64>) {
        let n = self.a.len();
        let big_m = self.samples;
        let modes = 2 * self.degree;
        let t = self.temperature;
        let zero = Complex64::new(0.0, 0.0);
        let mut scratch = vec![zero; self.inverse.get_inplace_scratch_len().max(self.forward.get_inplace_scratch_len())];
        let vals = self.boundary_values(d, &mut scratch);
        let mut norms = Vec::with_capacity(2 * big_m);
        let mut grads = if want_grad { [vec![zero; n * big_m], vec![zero; n * big_m]] } else { [Vec::new(), Vec::new()] };
        let mut x = vec![zero; n];
        let mut g = vec![zero; n];
        let mut h = Vec::with_capacity(n);
        for j in 0..2 {
            let p = self.couple.exponent(Side::try_from(j).unwrap());
            for m in 0..big_m {
                for i in 0..n {
                    x[i] = vals[j][i * big_m + m];
                }
                let gs = want_grad.then_some(&mut g[..]);
                norms.push(smoothed_norm(&x, p, self.couple.mu(), t, t, &mut h, gs));
                if want_grad {
                    for i in 0..n {
                        grads[j][i * big_m + m] = g[i];
                    }
                }
            }
        }
        let mut weights = Vec::new();
        let value = soft_max(&norms, t, want_grad.then_some(&mut weights));
        if !want_grad {
            return (value, Vec::new());
        }
        let mut grad = vec![zero; modes * n];
        let mut totals = vec![zero; n];
        for j in 0..2 {
            for i in 0..n {
                let buf = &mut grads[j][i * big_m..(i + 1) * big_m];
                for (m, v) in buf.iter_mut().enumerate() {
                    *v *= weights[j * big_m + m];
                }
                self.forward.process_with_scratch(buf, &mut scratch);
                totals[i] += buf[0];
                for (q, &gq) in self.gain[j].iter().enumerate() {
                    grad[q * n + i] += buf[self.bin[q]] * gq;
                }
            }
        }
        for (q, &ls) in self.log_scale.iter().enumerate() {
            let inv = (-ls).exp();
            for i in 0..n {
                grad[q * n + i] -= totals[i] * inv;
            }
        }
        (value, grad)
    }

    pub fn value(&self, d: &[Complex64]) -> f64 {
        self.evaluate(d, false).0
    }

    /// Objective and its gradient as `∂/∂Re d + i ∂/∂Im d`.
    pub fn value_and_grad(&self, d: &[Complex64]) -> (f64, Vec<Complex64>) {
        self.evaluate(d, true)
    }

    /// The feasible Laurent polynomial encoded by `d`.
    pub fn to_laurent(&self, d: &[Complex64]) -> Result<PeriodicLaurentFn> {
        let n = self.a.len();
        let degree = self.degree;
        let mut coeffs = vec![Element::zeros(n); 2 * degree + 1];
        let mut c0 = self.a.clone();
        for q in 0..2 * degree {
            let k = mode(q, degree);
            let inv = (-self.log_scale[q]).exp();
            let ck: Vec<Complex64> = d[q * n..(q + 1) * n].iter().map(|v| v * inv).collect();
            for i in 0..n {
                c0[i] -= ck[i];
            }
            coeffs[(k + degree as i64) as usize] = Element(ck);
        }
        coeffs[degree] = Element(c0);
        PeriodicLaurentFn::new(self.geometry, degree, coeffs)
    }

    /// Free coefficients of `f` (its `c_0` is implied by the constraint).
    pub fn from_laurent(&self, f: &PeriodicLaurentFn) -> Result<Vec<Complex64>> {
        if f.degree() > self.degree {
            return Err(invalid("init", format!("degree {} exceeds N = {}", f.degree(), self.degree)));
        }
        let f = f.padded(self.degree)?;
        let mut d = Vec::with_capacity(self.num_vars());
        for q in 0..2 * self.degree {
            let s = self.log_scale[q].exp();
            d.extend(f.coeff(mode(q, self.degree)).unwrap().0.iter().map(|c| c * s));
        }
        Ok(d)
    }
}

fn norm_sq(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// Accelerated proximal-free gradient descent with backtracking and
/// function-value restarts.
fn descend(obj: &SmoothedObjective, start: Vec<Complex64>, cfg: &SolverConfig) -> Result<Vec<Complex64>> {
    let t = obj.temperature();
    let mut x = start;
    let mut fx = obj.value(&x);
    let mut y = x.clone();
    let mut momentum = 1.0_f64;
    let mut curvature = 1.0 / t;
    let mut quiet = 0;
    for iteration in 0..cfg.max_iters {
        let (fy, gy) = obj.value_and_grad(&y);
        if !fy.is_finite() || gy.iter().any(|g| !g.re.is_finite() || !g.im.is_finite()) {
            return Err(Error::NonFiniteGradient {
                iteration,
                temperature: t,
            });
        }
        let g2 = norm_sq(&gy);
        if g2 == 0.0 {
            break;
        }
        let (candidate, fc) = loop {
            let step = 1.0 / curvature;
            let c: Vec<Complex64> = y.iter().zip(&gy).map(|(a, g)| a - g * step).collect();
            let fc = obj.value(&c);
            if fc <= fy - 0.5 * step * g2 || curvature > 1e300 {
                break (c, fc);
            }
            curvature *= cfg.backtrack;
        };
        if fc > fx {
            // restart the momentum from the last accepted point
            momentum = 1.0;
            y = x.clone();
            quiet = 0;
            continue;
        }
        let next = 0.5 * (1.0 + (1.0 + 4.0 * momentum * momentum).sqrt());
        let beta = (momentum - 1.0) / next;
        y = candidate
            .iter()
            .zip(&x)
            .map(|(c, old)| c + (c - old) * beta)
            .collect();
        let improvement = fx - fc;
        x = candidate;
        fx = fc;
        momentum = next;
        curvature *= cfg.relax;
        if improvement <= 1e-12 * fx.abs() {
            quiet += 1;
            if quiet >= 8 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    Ok(x)
}

/// Output of [`periodic_norm_upper`].
#[derive(Clone, Debug)]
pub struct SolverResult {
    /// Certified `‖F‖_{𝔉∞}`, an upper bound on `‖a‖_[θ,λ]`.
    pub value: f64,
    pub function: PeriodicLaurentFn,
    /// Certified value of the starting point.
    pub init_value: f64,
}

/// Put the residual `a - F(θ)` into `c_0` so that `F(θ) = a`.
pub fn repair_constraint(f: &mut PeriodicLaurentFn, a: &Element) {
    let residual = a.sub(&f.value_at_theta());
    let c0 = f.coeff_mut(0).unwrap();
    *c0 = c0.add(&residual);
}

/// Certified upper bound on `‖a‖_[θ,λ]` over Laurent degree `N`.
pub fn periodic_norm_upper(
    couple: &Couple,
    a: &Element,
    theta: f64,
    lambda: f64,
    cfg: &SolverConfig,
) -> Result<SolverResult> {
    cfg.validate()?;
    let geometry = StripGeometry::new(lambda, theta)?;
    let init = match cfg.init {
        Init::Zero => None,
        Init::PeriodizedThorin => {
            if a.is_zero() {
                None
            } else {
                Some(constructive_upper(couple, a, theta, lambda, 1.0 / lambda, cfg.eps_damp, cfg)?.function)
            }
        }
    };
    periodic_norm_upper_from(couple, a, geometry, cfg, init.as_ref())
}

/// As [`periodic_norm_upper`], starting from the better of `F ≡ a` and `init`.
pub fn periodic_norm_upper_from(
    couple: &Couple,
    a: &Element,
    geometry: StripGeometry,
    cfg: &SolverConfig,
    init: Option<&PeriodicLaurentFn>,
) -> Result<SolverResult> {
    cfg.validate()?;
    couple.check_dim(a)?;
    geometry.check_degree(cfg.degree)?;
    let degree = cfg.degree;
    let samples = cfg.samples;
    if a.is_zero() {
        let zero = PeriodicLaurentFn::zero(geometry, degree, a.len())?;
        return Ok(SolverResult {
            value: 0.0,
            function: zero,
            init_value: 0.0,
        });
    }
    let mut best_fn = PeriodicLaurentFn::constant(geometry, degree, a)?;
    let mut best = best_fn.fstrip_norm(couple, samples)?;
    if let Some(f) = init {
        if f.dim() != a.len() {
            return Err(Error::DimensionMismatch {
                expected: a.len(),
                got: f.dim(),
            });
        }
        if f.degree() > degree {
            return Err(invalid("init", format!("degree {} exceeds N = {degree}", f.degree())));
        }
        let mut f = f.padded(degree)?;
        // leave functions that already interpolate `a` to rounding untouched
        if f.value_at_theta().sub(a).max_modulus() > 8.0 * f64::EPSILON * a.max_modulus() {
            repair_constraint(&mut f, a);
        }
        let v = f.fstrip_norm(couple, samples)?;
        if v < best {
            best = v;
            best_fn = f;
        }
    }
    let init_value = best;
    if degree == 0 {
        return Ok(SolverResult {
            value: best,
            function: best_fn,
            init_value,
        });
    }
    let scale = best_fn.sampled_fstrip_norm(couple, samples);
    let mut obj = SmoothedObjective::new(couple, a, geometry, degree, samples, cfg.temperatures[0] * scale)?;
    let mut d = obj.from_laurent(&best_fn)?;
    for &tau in &cfg.temperatures {
        obj.set_temperature(tau * scale);
        d = descend(&obj, d, cfg)?;
        let f = obj.to_laurent(&d)?;
        let v = f.fstrip_norm(couple, samples)?;
        if v < best {
            best = v;
            best_fn = f;
        }
    }
    Ok(SolverResult {
        value: best,
        function: best_fn,
        init_value,
    })
}

/// A feasible periodic function built from the periodization operators.
#[derive(Clone, Debug)]
pub struct Constructive {
    /// Certified `‖F‖_{𝔉∞}` of the repaired Laurent projection.
    pub value: f64,
    pub function: PeriodicLaurentFn,
    /// Truncation tails plus the two-resolution aliasing estimate plus
    /// the constraint repair, all in absolute terms.
    pub defect: f64,
    pub delta: f64,
    pub rho: Option<f64>,
}

fn damped_thorin(couple: &Couple, a: &Element, theta: f64, eps: f64) -> Result<CandidateFn> {
    couple.thorin_extremal(a, theta)?.function.damp(eps, theta)
}

fn finish(
    parts: &[&PeriodizedFn],
    couple: &Couple,
    a: &Element,
    geometry: StripGeometry,
    cfg: &SolverConfig,
    delta: f64,
    rho: Option<f64>,
) -> Result<Constructive> {
    let sample = |z: Complex64| -> Result<Element> {
        let mut acc = Element::zeros(a.len());
        for p in parts {
            acc = acc.add(&p.eval(z)?);
        }
        Ok(acc)
    };
    let projection = crate::analytic::project_periodic(sample, geometry, cfg.degree, cfg.samples)?;
    let mut function = projection.function;
    let residual = a.sub(&function.value_at_theta());
    repair_constraint(&mut function, a);
    let value = function.fstrip_norm(couple, cfg.samples)?;
    let tails: f64 = parts.iter().map(|p| p.tail_bound()).sum();
    Ok(Constructive {
        value,
        function,
        defect: tails + projection.aliasing + couple.norm_intersection(&residual)?,
        delta,
        rho,
    })
}

/// `G_δ` applied to the damped Thorin function, projected to degree `N`
/// and repaired to interpolate `a` exactly.
pub fn constructive_upper(
    couple: &Couple,
    a: &Element,
    theta: f64,
    lambda: f64,
    delta: f64,
    eps_damp: f64,
    cfg: &SolverConfig,
) -> Result<Constructive> {
    let geometry = StripGeometry::new(lambda, theta)?;
    let f = damped_thorin(couple, a, theta, eps_damp)?;
    let g = g_delta(&f, couple, delta, geometry, None)?;
    finish(&[&g], couple, a, geometry, cfg, delta, None)
}

/// The two-stage competitor `f̃_ρ + G_δ[thorin(a - ã)]`: the cheap kernel-free
/// periodization carries most of `a`, and `G_δ` only has to correct the
/// small discrepancy `a - ã`.
pub fn constructive_fine_tuned(
    couple: &Couple,
    a: &Element,
    theta: f64,
    lambda: f64,
    delta: f64,
    rho: f64,
    eps_damp: f64,
    cfg: &SolverConfig,
) -> Result<Constructive> {
    let geometry = StripGeometry::new(lambda, theta)?;
    let f = damped_thorin(couple, a, theta, eps_damp)?;
    let ft = f_tilde(&f, couple, rho, geometry, None)?;
    let gap = a.sub(&ft.value_at_theta());
    let h = damped_thorin(couple, &gap, theta, eps_damp)?;
    // the correction is small; keep its truncation error relative to the whole
    let tol = 1e-10 * crate::analytic::candidate_fstrip_norm(&f, couple)?;
    let g = g_delta(&h, couple, delta, geometry, Some(tol.max(f64::MIN_POSITIVE)))?;
    finish(&[&ft, &g], couple, a, geometry, cfg, delta, Some(rho))
}

/// Both sides of the norm equivalence for one `(couple, a, θ, λ)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SandwichReport {
    pub lambda: f64,
    pub theta: f64,
    pub couple: Couple,
    pub a: Element,
    pub oracle: f64,
    pub upper_constructive: f64,
    pub upper_solver: f64,
    pub c_main: f64,
    pub c_opt: f64,
    pub ratio_solver: f64,
    pub ratio_constructive: f64,
    /// Relative budget: certification factor, damping, tails and aliasing.
    pub slack: f64,
    pub config: SolverConfig,
    pub seed: Option<u64>,
}

impl SandwichReport {
    /// `oracle ≤ upper_solver·(1 + tol)`.
    pub fn left_holds(&self, tol: f64) -> bool {
        self.oracle <= self.upper_solver * (1.0 + tol)
    }

    /// `min(upper_constructive, upper_solver) ≤ C(λ)·oracle·(1 + slack)`.
    pub fn right_holds(&self) -> bool {
        self.upper_constructive.min(self.upper_solver) <= self.c_main * self.oracle * (1.0 + self.slack)
    }
}

fn ratio(upper: f64, oracle: f64) -> f64 {
    if oracle == 0.0 {
        1.0
    } else {
        upper / oracle
    }
}

/// Multiples of `1/λ` tried for `δ` in the single-stage construction.
const DELTA_GRID: [f64; 3] = [0.25, 1.0, 4.0];

/// Best constructive competitor over the `δ` grid and the two-stage
/// variants at `δ = ρ = 1/λ` and at the optimised `(δ, ρ)`.
pub fn best_constructive(
    couple: &Couple,
    a: &Element,
    theta: f64,
    lambda: f64,
    cfg: &SolverConfig,
    optimized: Option<OptimizedConstant>,
) -> Result<Constructive> {
    let mut candidates = Vec::new();
    for m in DELTA_GRID {
        candidates.push(constructive_upper(couple, a, theta, lambda, m / lambda, cfg.eps_damp, cfg)?);
    }
    let mut pairs = vec![(1.0 / lambda, 1.0 / lambda)];
    if let Some(o) = optimized {
        pairs.push((o.delta, o.rho));
    }
    for (delta, rho) in pairs {
        candidates.push(constructive_fine_tuned(couple, a, theta, lambda, delta, rho, cfg.eps_damp, cfg)?);
    }
    Ok(candidates
        .into_iter()
        .min_by(|x, y| x.value.total_cmp(&y.value))
        .unwrap())
}

pub fn sandwich(
    couple: &Couple,
    a: &Element,
    theta: f64,
    lambda: f64,
    cfg: &SolverConfig,
    seed: Option<u64>,
) -> Result<SandwichReport> {
    cfg.validate()?;
    let geometry = StripGeometry::new(lambda, theta)?;
    let oracle = couple.oracle_interp_norm(a, theta)?;
    let c_main = c_main(lambda)?;
    let optimized = c_optimized(lambda)?;
    let base_slack = certification_factor(cfg.degree, cfg.samples) - 1.0 + cfg.eps_damp.exp_m1();
    let (upper_constructive, upper_solver, slack) = if a.is_zero() {
        (0.0, 0.0, base_slack)
    } else {
        let best = best_constructive(couple, a, theta, lambda, cfg, Some(optimized))?;
        let init = match cfg.init {
            Init::Zero => None,
            Init::PeriodizedThorin => Some(&best.function),
        };
        let solved = periodic_norm_upper_from(couple, a, geometry, cfg, init)?;
        (best.value, solved.value, base_slack + best.defect / oracle)
    };
    Ok(SandwichReport {
        lambda,
        theta,
        couple: couple.clone(),
        a: a.clone(),
        oracle,
        upper_constructive,
        upper_solver,
        c_main,
        c_opt: optimized.value,
        ratio_solver: ratio(upper_solver, oracle),
        ratio_constructive: ratio(upper_constructive, oracle),
        slack,
        config: cfg.clone(),
        seed,
    })
}

/// The a-priori bound `m(λ)·C₁,λ(δ)·e^{ε}` on the single-stage ratio.
pub fn single_stage_bound(lambda: f64, delta: f64, eps_damp: f64) -> Result<f64> {
    Ok(m_bound(lambda)? * crate::bounds::c1(lambda, delta)? * eps_damp.exp())
}

/// The a-priori bound `C(λ; δ, ρ)·e^{ε}` on the two-stage ratio.
pub fn two_stage_bound(lambda: f64, delta: f64, rho: f64, eps_damp: f64) -> Result<f64> {
    Ok(c_general(lambda, delta, rho)? * eps_damp.exp())
}
