//! Strip and annulus geometry, evaluation of strip functions, certified
//! boundary sup norms, and recovery of Laurent coefficients from samples.
//!
//! An `iλ`-periodic function on the strip is a function of
//! `ζ = exp((2π/λ)(z - θ))`, which maps the strip onto the annulus
//! `r_0 ≤ |ζ| ≤ r_1` with `r_j = exp((2π/λ)(j - θ))` and sends `θ` to `ζ = 1`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::couples::{check_theta, weighted_norm_of_moduli, CandidateFn, Couple, Element, Side};
use crate::error::{invalid, Error, Result};
use crate::numeric::pairwise_sum_complex;

/// Largest exponent we allow for `r_j^k` before declaring overflow.
const MAX_LOG_MODULUS: f64 = 700.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StripGeometry {
    lambda: f64,
    theta: f64,
}

impl StripGeometry {
    pub fn new(lambda: f64, theta: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(invalid("lambda", format!("period must be positive, got {lambda}")));
        }
        check_theta(theta)?;
        Ok(StripGeometry { lambda, theta })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Angular frequency `2π/λ`.
    pub fn omega(&self) -> f64 {
        2.0 * PI / self.lambda
    }

    pub fn zeta(&self, z: Complex64) -> Complex64 {
        (self.omega() * (z - self.theta)).exp()
    }

    pub fn log_boundary_modulus(&self, side: Side) -> f64 {
        self.omega() * (side.abscissa() - self.theta)
    }

    /// `r_j = |ζ|` on the line `Re z = j`.
    pub fn boundary_modulus(&self, side: Side) -> f64 {
        self.log_boundary_modulus(side).exp()
    }

    /// Largest Laurent degree whose boundary moduli `r_j^{±N}` stay in range.
    pub fn max_degree(&self) -> usize {
        let worst = self.omega() * self.theta.max(1.0 - self.theta);
        (MAX_LOG_MODULUS / worst).floor().min(1e9) as usize
    }

    pub fn check_degree(&self, degree: usize) -> Result<()> {
        let max_degree = self.max_degree();
        if degree > max_degree {
            Err(Error::DegreeOverflow { degree, max_degree })
        } else {
            Ok(())
        }
    }

    /// Period-aligned boundary grid `j + i·mλ/M`, `m = 0..M`.
    pub fn boundary_grid(&self, side: Side, samples: usize) -> Vec<Complex64> {
        (0..samples)
            .map(|m| Complex64::new(side.abscissa(), m as f64 * self.lambda / samples as f64))
            .collect()
    }
}

pub fn check_strip(z: Complex64) -> Result<()> {
    if (0.0..=1.0).contains(&z.re) && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::OutsideStrip { re: z.re, im: z.im })
    }
}

pub fn eval_candidate(f: &CandidateFn, z: Complex64) -> Result<Element> {
    check_strip(z)?;
    Ok(Element(f.eval_unchecked(z)))
}

/// Default oversampling `M = 8·max(2N+1, ⌈πN⌉+1)`.
pub fn default_samples(degree: usize) -> usize {
    let bernstein = (PI * degree as f64).ceil() as usize + 1;
    8 * (2 * degree + 1).max(bernstein)
}

/// Certification factor for a sampled trigonometric polynomial.
///
/// For a real trigonometric polynomial `T` of degree `N` with `|T| ≤ S`,
/// Szegő's inequality `T'² + N²T² ≤ N²S²` gives `T ≥ S cos(N(t - t*))` near
/// a maximiser `t*`; every point is within `π/M` of a sample, hence
/// `S ≤ gridmax / cos(πN/M)`. Applying this to `Re(e^{-iφ} ℓ(F))` for unit
/// functionals `ℓ` extends it to any norm. The factor never exceeds the
/// first-order Bernstein factor `1/(1 - πN/M)`.
pub fn certification_factor(degree: usize, samples: usize) -> f64 {
    if degree == 0 {
        1.0
    } else {
        1.0 / (PI * degree as f64 / samples as f64).cos()
    }
}

fn check_sampling(degree: usize, samples: usize) -> Result<()> {
    if samples == 0 || (degree > 0 && (samples as f64 <= PI * degree as f64 || samples < 2 * degree + 1))
    {
        Err(Error::Certification { degree, samples })
    } else {
        Ok(())
    }
}

/// An `iλ`-periodic strip function `Σ_{|k|≤N} c_k ζ^k` with vector
/// coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicLaurentFn {
    geometry: StripGeometry,
    degree: usize,
    /// `coeffs[k + N] = c_k`
    coeffs: Vec<Element>,
}

impl PeriodicLaurentFn {
    pub fn new(geometry: StripGeometry, degree: usize, coeffs: Vec<Element>) -> Result<Self> {
        geometry.check_degree(degree)?;
        if coeffs.len() != 2 * degree + 1 {
            return Err(Error::DimensionMismatch {
                expected: 2 * degree + 1,
                got: coeffs.len(),
            });
        }
        let n = coeffs[0].len();
        if n == 0 {
            return Err(invalid("coeffs", "coefficients must have positive dimension"));
        }
        if let Some(c) = coeffs.iter().find(|c| c.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: c.len(),
            });
        }
        Ok(PeriodicLaurentFn {
            geometry,
            degree,
            coeffs,
        })
    }

    pub fn zero(geometry: StripGeometry, degree: usize, n: usize) -> Result<Self> {
        PeriodicLaurentFn::new(geometry, degree, vec![Element::zeros(n); 2 * degree + 1])
    }

    /// `F ≡ a`, padded to the given degree.
    pub fn constant(geometry: StripGeometry, degree: usize, a: &Element) -> Result<Self> {
        let mut f = PeriodicLaurentFn::zero(geometry, degree, a.len())?;
        f.coeffs[degree] = a.clone();
        Ok(f)
    }

    pub fn geometry(&self) -> StripGeometry {
        self.geometry
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.coeffs[0].len()
    }

    pub fn coeff(&self, k: i64) -> Option<&Element> {
        let idx = k + self.degree as i64;
        if idx < 0 {
            return None;
        }
        self.coeffs.get(idx as usize)
    }

    pub fn coeff_mut(&mut self, k: i64) -> Option<&mut Element> {
        let idx = k + self.degree as i64;
        if idx < 0 {
            return None;
        }
        self.coeffs.get_mut(idx as usize)
    }

    pub fn coeffs(&self) -> &[Element] {
        &self.coeffs
    }

    /// Highest `|k|` carrying a nonzero coefficient.
    pub fn effective_degree(&self) -> usize {
        let n = self.degree as i64;
        (1..=n)
            .rev()
            .find(|&k| !(self.coeff(k).unwrap().is_zero() && self.coeff(-k).unwrap().is_zero()))
            .unwrap_or(0) as usize
    }

    /// Same function, represented at a higher degree.
    pub fn padded(&self, degree: usize) -> Result<Self> {
        if degree < self.degree {
            return Err(invalid("degree", "padding cannot lower the degree"));
        }
        let mut out = PeriodicLaurentFn::zero(self.geometry, degree, self.dim())?;
        for k in -(self.degree as i64)..=self.degree as i64 {
            *out.coeff_mut(k).unwrap() = self.coeff(k).unwrap().clone();
        }
        Ok(out)
    }

    pub fn scale(&self, t: Complex64) -> Self {
        PeriodicLaurentFn {
            geometry: self.geometry,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c.scale(t)).collect(),
        }
    }

    /// Sum of two functions on the same geometry.
    pub fn add(&self, other: &PeriodicLaurentFn) -> Result<Self> {
        if self.geometry != other.geometry || self.dim() != other.dim() {
            return Err(invalid("other", "geometry and dimension must agree"));
        }
        let degree = self.degree.max(other.degree);
        let mut out = self.padded(degree)?;
        for k in -(other.degree as i64)..=other.degree as i64 {
            let slot = out.coeff_mut(k).unwrap();
            *slot = slot.add(other.coeff(k).unwrap());
        }
        Ok(out)
    }

    /// `F(θ) = Σ_k c_k`.
    pub fn value_at_theta(&self) -> Element {
        let n = self.dim();
        Element(
            (0..n)
                .map(|i| {
                    let col: Vec<Complex64> = self.coeffs.iter().map(|c| c.0[i]).collect();
                    pairwise_sum_complex(&col)
                })
                .collect(),
        )
    }

    /// Evaluation at any point; Horner in `ζ` for `k ≥ 0` and in `1/ζ` for `k < 0`.
    pub fn eval_unchecked(&self, z: Complex64) -> Vec<Complex64> {
        let zeta = self.geometry.zeta(z);
        let inv = 1.0 / zeta;
        let n = self.degree;
        (0..self.dim())
            .map(|i| {
                let mut pos = Complex64::new(0.0, 0.0);
                for k in (0..=n).rev() {
                    pos = pos * zeta + self.coeffs[n + k].0[i];
                }
                let mut neg = Complex64::new(0.0, 0.0);
                for k in (1..=n).rev() {
                    neg = (neg + self.coeffs[n - k].0[i]) * inv;
                }
                pos + neg
            })
            .collect()
    }

    pub fn eval(&self, z: Complex64) -> Result<Element> {
        check_strip(z)?;
        Ok(Element(self.eval_unchecked(z)))
    }

    /// Boundary-scaled coefficients `c_k r_j^k`, i.e. the Fourier
    /// coefficients of `y ↦ F(j + iy)`.
    fn boundary_coeffs(&self, side: Side) -> Vec<Vec<Complex64>> {
        let log_r = self.geometry.log_boundary_modulus(side);
        let n = self.degree as i64;
        (-n..=n)
            .map(|k| {
                let scale = (k as f64 * log_r).exp();
                self.coeff(k).unwrap().0.iter().map(|&c| c * scale).collect()
            })
            .collect()
    }

    /// Values on the grid `j + i·mλ/M`, `m = 0..M`.
    pub fn boundary_samples(&self, side: Side, samples: usize) -> Vec<Vec<Complex64>> {
        let scaled = self.boundary_coeffs(side);
        let twiddle = twiddles(samples);
        let n = self.degree as i64;
        let dim = self.dim();
        (0..samples)
            .map(|m| {
                (0..dim)
                    .map(|i| {
                        let terms: Vec<Complex64> = (-n..=n)
                            .map(|k| {
                                let t = (k * m as i64).rem_euclid(samples as i64) as usize;
                                scaled[(k + n) as usize][i] * twiddle[t]
                            })
                            .collect();
                        pairwise_sum_complex(&terms)
                    })
                    .collect()
            })
            .collect()
    }

    /// Certified upper bound on `sup_y ‖F(j + iy)‖_{A_j}` from `M` samples.
    pub fn certified_boundary_norm(&self, couple: &Couple, side: Side, samples: usize) -> Result<f64> {
        if couple.n() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: couple.n(),
                got: self.dim(),
            });
        }
        check_sampling(self.degree, samples)?;
        let p = couple.exponent(side);
        let grid_max = self
            .boundary_samples(side, samples)
            .iter()
            .map(|v| couple.norm_unchecked(v, side))
            .fold(0.0_f64, f64::max);
        let sampled = grid_max * certification_factor(self.effective_degree(), samples);
        // triangle inequality over the modes is also a valid bound
        let triangle: f64 = self
            .boundary_coeffs(side)
            .iter()
            .map(|c| {
                let moduli: Vec<f64> = c.iter().map(|z| z.norm()).collect();
                weighted_norm_of_moduli(&moduli, p, couple.mu())
            })
            .sum();
        Ok(sampled.min(triangle))
    }

    /// Certified upper bound on `‖F‖_{𝔉∞}`.
    pub fn fstrip_norm(&self, couple: &Couple, samples: usize) -> Result<f64> {
        Ok(self
            .certified_boundary_norm(couple, Side::Zero, samples)?
            .max(self.certified_boundary_norm(couple, Side::One, samples)?))
    }

    /// Largest sampled boundary norm, without certification.
    pub fn sampled_fstrip_norm(&self, couple: &Couple, samples: usize) -> f64 {
        Side::BOTH
            .iter()
            .flat_map(|&side| {
                self.boundary_samples(side, samples)
                    .into_iter()
                    .map(move |v| couple.norm_unchecked(&v, side))
            })
            .fold(0.0_f64, f64::max)
    }
}

pub(crate) fn twiddles(samples: usize) -> Vec<Complex64> {
    (0..samples)
        .map(|t| Complex64::from_polar(1.0, 2.0 * PI * t as f64 / samples as f64))
        .collect()
}

/// Discrete Fourier coefficients `(1/M) Σ_m s_m e^{-2πikm/M}` for `|k| ≤ N`.
fn dft_coeffs(samples: &[Element], degree: usize) -> Vec<Vec<Complex64>> {
    let m_count = samples.len();
    let twiddle = twiddles(m_count);
    let dim = samples[0].len();
    let n = degree as i64;
    (-n..=n)
        .map(|k| {
            (0..dim)
                .map(|i| {
                    let terms: Vec<Complex64> = samples
                        .iter()
                        .enumerate()
                        .map(|(m, s)| {
                            let t = (-k * m as i64).rem_euclid(m_count as i64) as usize;
                            s.0[i] * twiddle[t]
                        })
                        .collect();
                    pairwise_sum_complex(&terms) / m_count as f64
                })
                .collect()
        })
        .collect()
}

fn check_recovery(samples: &[Element], degree: usize) -> Result<usize> {
    if samples.len() < 2 * degree + 1 {
        return Err(invalid(
            "samples",
            format!("need at least 2N+1 = {} samples, got {}", 2 * degree + 1, samples.len()),
        ));
    }
    let dim = samples[0].len();
    if let Some(s) = samples.iter().find(|s| s.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: s.len(),
        });
    }
    Ok(dim)
}

/// Recover `c_k = r_j^{-k}·DFT_k` from samples on one boundary line.
///
/// Exact for Laurent polynomials of degree `≤ N`; otherwise modes `k + lM`
/// alias onto `k`.
pub fn laurent_from_boundary(
    samples: &[Element],
    geometry: StripGeometry,
    side: Side,
    degree: usize,
) -> Result<PeriodicLaurentFn> {
    check_recovery(samples, degree)?;
    geometry.check_degree(degree)?;
    let log_r = geometry.log_boundary_modulus(side);
    let n = degree as i64;
    let coeffs = dft_coeffs(samples, degree)
        .into_iter()
        .zip(-n..=n)
        .map(|(b, k)| {
            let scale = (-(k as f64) * log_r).exp();
            Element(b.into_iter().map(|z| z * scale).collect())
        })
        .collect();
    PeriodicLaurentFn::new(geometry, degree, coeffs)
}

/// Recover each mode from the boundary line on which it is largest: `k > 0`
/// from `Re z = 1`, `k < 0` from `Re z = 0`, `k = 0` from the average. Alias
/// errors are then divided by the larger modulus and never amplified on the
/// opposite line.
pub fn laurent_from_both_boundaries(
    samples0: &[Element],
    samples1: &[Element],
    geometry: StripGeometry,
    degree: usize,
) -> Result<PeriodicLaurentFn> {
    let from0 = laurent_from_boundary(samples0, geometry, Side::Zero, degree)?;
    let from1 = laurent_from_boundary(samples1, geometry, Side::One, degree)?;
    if from0.dim() != from1.dim() {
        return Err(Error::DimensionMismatch {
            expected: from0.dim(),
            got: from1.dim(),
        });
    }
    let n = degree as i64;
    let coeffs = (-n..=n)
        .map(|k| match k.cmp(&0) {
            std::cmp::Ordering::Less => from0.coeff(k).unwrap().clone(),
            std::cmp::Ordering::Greater => from1.coeff(k).unwrap().clone(),
            std::cmp::Ordering::Equal => from0
                .coeff(0)
                .unwrap()
                .add(from1.coeff(0).unwrap())
                .scale(Complex64::new(0.5, 0.0)),
        })
        .collect();
    PeriodicLaurentFn::new(geometry, degree, coeffs)
}

/// A Laurent projection together with a two-resolution aliasing estimate.
#[derive(Clone, Debug)]
pub struct Projection {
    pub function: PeriodicLaurentFn,
    /// `Σ_k max_j r_j^k · max_i |c_k(M) - c_k(2M)|`: how far the boundary
    /// values move when the sampling density doubles.
    pub aliasing: f64,
}

/// Coefficient drift between two projections, measured on the boundaries.
pub fn boundary_drift(a: &PeriodicLaurentFn, b: &PeriodicLaurentFn) -> f64 {
    let geometry = a.geometry();
    let degree = a.degree().min(b.degree()) as i64;
    let log_r0 = geometry.log_boundary_modulus(Side::Zero);
    let log_r1 = geometry.log_boundary_modulus(Side::One);
    (-degree..=degree)
        .map(|k| {
            let scale = (k as f64 * log_r0).exp().max((k as f64 * log_r1).exp());
            let diff = a.coeff(k).unwrap().sub(b.coeff(k).unwrap()).max_modulus();
            scale * diff
        })
        .sum()
}

/// Project a periodic strip function onto Laurent degree `N` from `M`
/// samples per boundary line, and estimate aliasing by repeating at `2M`.
pub fn project_periodic<F>(
    sample: F,
    geometry: StripGeometry,
    degree: usize,
    samples: usize,
) -> Result<Projection>
where
    F: Fn(Complex64) -> Result<Element>,
{
    let recover = |m: usize| -> Result<PeriodicLaurentFn> {
        let s0 = geometry
            .boundary_grid(Side::Zero, m)
            .into_iter()
            .map(&sample)
            .collect::<Result<Vec<_>>>()?;
        let s1 = geometry
            .boundary_grid(Side::One, m)
            .into_iter()
            .map(&sample)
            .collect::<Result<Vec<_>>>()?;
        laurent_from_both_boundaries(&s0, &s1, geometry, degree)
    };
    let coarse = recover(samples)?;
    let fine = recover(2 * samples)?;
    Ok(Projection {
        aliasing: boundary_drift(&coarse, &fine),
        function: coarse,
    })
}

/// Certified `sup_{j, y} ‖f(j + iy)‖_{A_j}` for a closed-form candidate.
///
/// With at most one term per coordinate every modulus `|f_i(j + iy)|` is
/// `|c| e^{β((j-θ)² - y²) + s(j-θ)}`, maximal at `y = 0` for all coordinates
/// at once, so the value there is exact. Otherwise a grid over `|y| ≤ Y`
/// with a Lipschitz correction is combined with a modulus bound for `|y| > Y`.
pub fn candidate_fstrip_norm(f: &CandidateFn, couple: &Couple) -> Result<f64> {
    if couple.n() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: couple.n(),
            got: f.dim(),
        });
    }
    let simple = f.terms().iter().all(|ts| ts.len() <= 1);
    let mut best = 0.0_f64;
    for side in Side::BOTH {
        let x = side.abscissa();
        let w = x - f.theta();
        let p = couple.exponent(side);
        if simple {
            let v = f.eval_unchecked(Complex64::new(x, 0.0));
            best = best.max(couple.norm_unchecked(&v, side));
            continue;
        }
        best = best.max(candidate_side_sup(f, couple, side, w, p)?);
    }
    Ok(best)
}

fn candidate_side_sup(
    f: &CandidateFn,
    couple: &Couple,
    side: Side,
    w: f64,
    p: crate::couples::Exponent,
) -> Result<f64> {
    let x = side.abscissa();
    let terms = f.terms();
    let beta_min = terms
        .iter()
        .flatten()
        .filter(|t| t.beta > 0.0)
        .fold(f64::INFINITY, |m, t| m.min(t.beta));
    // modulus bound outside the window, with the Gaussian factor at |y| = Y
    let outside = |y_cut: f64| -> f64 {
        let moduli: Vec<f64> = terms
            .iter()
            .map(|ts| {
                ts.iter()
                    .map(|t| t.c.norm() * (t.beta * (w * w - y_cut * y_cut) + t.s * w).exp())
                    .sum()
            })
            .collect();
        weighted_norm_of_moduli(&moduli, p, couple.mu())
    };
    if !beta_min.is_finite() {
        // purely exponential, several terms per coordinate: no window helps
        return Ok(outside(0.0));
    }
    let y_cut = (32.3 / beta_min).sqrt();
    // |d/dy term| ≤ |c| e^{β(w²-y²)+sw} (2β sqrt(w²+y²) + |s|) ≤ |c| e^{βw²+sw}(2β|w| + sqrt(2β/e) + |s|)
    let lip_moduli: Vec<f64> = terms
        .iter()
        .map(|ts| {
            ts.iter()
                .map(|t| {
                    t.c.norm()
                        * (t.beta * w * w + t.s * w).exp()
                        * (2.0 * t.beta * w.abs() + (2.0 * t.beta / std::f64::consts::E).sqrt() + t.s.abs())
                })
                .sum()
        })
        .collect();
    let lipschitz = weighted_norm_of_moduli(&lip_moduli, p, couple.mu());
    let value = |y: f64| couple.norm_unchecked(&f.eval_unchecked(Complex64::new(x, y)), side);
    Ok(lipschitz_sup(value, -y_cut, y_cut, lipschitz).max(outside(y_cut)))
}

/// Certified maximum of an `L`-Lipschitz function on `[lo, hi]` by branch
/// and bound: a cell `[a, b]` is bounded by `max(v(a), v(b)) + L(b-a)/2`
/// and split while that bound can still beat the best sample by more than
/// a relative `1e-10`.
pub(crate) fn lipschitz_sup<F: Fn(f64) -> f64>(value: F, lo: f64, hi: f64, lipschitz: f64) -> f64 {
    lipschitz_sup_capped(value, lo, hi, lipschitz, 4_000_000)
}

/// [`lipschitz_sup`] with an explicit evaluation budget; once it is spent
/// the remaining cells contribute their Lipschitz bounds as they stand.
pub(crate) fn lipschitz_sup_capped<F: Fn(f64) -> f64>(
    value: F,
    lo: f64,
    hi: f64,
    lipschitz: f64,
    max_evals: usize,
) -> f64 {
    const INITIAL_CELLS: usize = 4096;
    let h = (hi - lo) / INITIAL_CELLS as f64;
    let mut ys: Vec<f64> = (0..=INITIAL_CELLS).map(|m| lo + m as f64 * h).collect();
    ys[INITIAL_CELLS] = hi;
    let vs: Vec<f64> = ys.iter().map(|&y| value(y)).collect();
    let mut best = vs.iter().fold(0.0_f64, |m, &v| m.max(v));
    let mut cells: Vec<(f64, f64, f64, f64)> = (0..INITIAL_CELLS)
        .map(|m| (ys[m], ys[m + 1], vs[m], vs[m + 1]))
        .collect();
    let mut evals = INITIAL_CELLS + 1;
    let mut bound = 0.0_f64;
    while let Some((a, b, va, vb)) = cells.pop() {
        let ub = va.max(vb) + 0.5 * lipschitz * (b - a);
        if ub <= best * (1.0 + 1e-10) || evals >= max_evals || b - a < 1e-15 * (1.0 + a.abs()) {
            bound = bound.max(ub);
            continue;
        }
        let mid = 0.5 * (a + b);
        let vm = value(mid);
        evals += 1;
        best = best.max(vm);
        cells.push((a, mid, va, vm));
        cells.push((mid, b, vm, vb));
    }
    bound.max(best)
}

#[derive(Serialize, Deserialize)]
struct CoeffRepr {
    k: i64,
    re: Vec<f64>,
    im: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct LaurentRepr {
    lambda: f64,
    theta: f64,
    #[serde(rename = "N")]
    degree: usize,
    coeffs: Vec<CoeffRepr>,
}

impl Serialize for PeriodicLaurentFn {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.degree as i64;
        LaurentRepr {
            lambda: self.geometry.lambda,
            theta: self.geometry.theta,
            degree: self.degree,
            coeffs: (-n..=n)
                .map(|k| {
                    let c = self.coeff(k).unwrap();
                    CoeffRepr {
                        k,
                        re: c.0.iter().map(|z| z.re).collect(),
                        im: c.0.iter().map(|z| z.im).collect(),
                    }
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PeriodicLaurentFn {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = LaurentRepr::deserialize(deserializer)?;
        let geometry = StripGeometry::new(r.lambda, r.theta).map_err(D::Error::custom)?;
        let n = r.degree as i64;
        let mut slots: Vec<Option<Element>> = vec![None; 2 * r.degree + 1];
        let mut dim = None;
        for c in r.coeffs {
            if c.k.abs() > n {
                return Err(D::Error::custom(format!("coefficient index {} exceeds N = {n}", c.k)));
            }
            let e = Element::from_parts(&c.re, &c.im).map_err(D::Error::custom)?;
            dim = Some(e.len());
            slots[(c.k + n) as usize] = Some(e);
        }
        let dim = dim.ok_or_else(|| D::Error::custom("no coefficients"))?;
        let coeffs = slots
            .into_iter()
            .map(|s| s.unwrap_or_else(|| Element::zeros(dim)))
            .collect();
        PeriodicLaurentFn::new(geometry, r.degree, coeffs).map_err(D::Error::custom)
    }
}
