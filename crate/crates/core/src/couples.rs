//! Weighted lᵖ couples on ℂⁿ sharing one atomic measure.
//!
//! `A_j = L^{p_j}(μ)` with `μ = Σ mu_i δ_i`. The complex interpolation
//! space between them is again a weighted Lebesgue space, so the exact
//! interpolation norm is available in closed form and serves as the oracle
//! for everything else in the crate.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, Error, Result};
use crate::numeric::pairwise_sum;

/// An exponent in `[1, ∞]`. Infinity is its own variant so that formulas can
/// work with reciprocals (`1/∞ = 0`) instead of large floats.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinite,
}

impl Exponent {
    pub fn finite(p: f64) -> Result<Self> {
        if p.is_finite() && p >= 1.0 {
            Ok(Exponent::Finite(p))
        } else if p == f64::INFINITY {
            Ok(Exponent::Infinite)
        } else {
            Err(invalid("p", format!("exponent must lie in [1, inf], got {p}")))
        }
    }

    pub fn reciprocal(self) -> f64 {
        match self {
            Exponent::Finite(p) => 1.0 / p,
            Exponent::Infinite => 0.0,
        }
    }

    /// Inverse of [`Exponent::reciprocal`]; `r` must lie in `[0, 1]`.
    pub fn from_reciprocal(r: f64) -> Self {
        if r <= 0.0 {
            Exponent::Infinite
        } else {
            Exponent::Finite(1.0 / r)
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinite)
    }

    /// Hölder conjugate `q` with `1/p + 1/q = 1`.
    pub fn conjugate(self) -> Self {
        Exponent::from_reciprocal(1.0 - self.reciprocal())
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if matches!(t.to_ascii_lowercase().as_str(), "inf" | "infinity" | "∞") {
            return Ok(Exponent::Infinite);
        }
        let p: f64 = t
            .parse()
            .map_err(|_| invalid("p", format!("cannot parse exponent `{s}`")))?;
        Exponent::finite(p)
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(p) => serializer.serialize_f64(*p),
            Exponent::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        let parsed = match Raw::deserialize(deserializer)? {
            Raw::Num(p) => Exponent::finite(p),
            Raw::Text(s) => s.parse(),
        };
        parsed.map_err(serde::de::Error::custom)
    }
}

/// Boundary line of the strip: `Re z = 0` carries `A_0`, `Re z = 1` carries `A_1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Zero,
    One,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Zero, Side::One];

    pub fn abscissa(self) -> f64 {
        match self {
            Side::Zero => 0.0,
            Side::One => 1.0,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Side::Zero => 0,
            Side::One => 1,
        }
    }
}

impl TryFrom<usize> for Side {
    type Error = Error;

    fn try_from(j: usize) -> Result<Self> {
        match j {
            0 => Ok(Side::Zero),
            1 => Ok(Side::One),
            _ => Err(invalid("j", format!("side index must be 0 or 1, got {j}"))),
        }
    }
}

/// A vector of ℂⁿ.
#[derive(Clone, Debug, PartialEq)]
pub struct Element(pub Vec<Complex64>);

impl Element {
    pub fn zeros(n: usize) -> Self {
        Element(vec![Complex64::new(0.0, 0.0); n])
    }

    pub fn from_parts(re: &[f64], im: &[f64]) -> Result<Self> {
        if re.len() != im.len() {
            return Err(Error::DimensionMismatch {
                expected: re.len(),
                got: im.len(),
            });
        }
        Ok(Element(
            re.iter().zip(im).map(|(&r, &i)| Complex64::new(r, i)).collect(),
        ))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn scale(&self, t: Complex64) -> Element {
        Element(self.0.iter().map(|&z| z * t).collect())
    }

    pub fn sub(&self, other: &Element) -> Element {
        Element(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn add(&self, other: &Element) -> Element {
        Element(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Largest coordinate modulus.
    pub fn max_modulus(&self) -> f64 {
        self.0.iter().fold(0.0, |m, z| m.max(z.norm()))
    }
}

#[derive(Serialize, Deserialize)]
struct ElementRepr {
    re: Vec<f64>,
    im: Vec<f64>,
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ElementRepr {
            re: self.0.iter().map(|z| z.re).collect(),
            im: self.0.iter().map(|z| z.im).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Element {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = ElementRepr::deserialize(deserializer)?;
        Element::from_parts(&repr.re, &repr.im).map_err(serde::de::Error::custom)
    }
}

/// Weighted `L^p(μ)` norm of a coordinate vector. For `p = ∞` the weights
/// play no role (all atoms carry positive mass).
pub fn weighted_norm(x: &[Complex64], p: Exponent, mu: &[f64]) -> f64 {
    let moduli: Vec<f64> = x.iter().map(|z| z.norm()).collect();
    weighted_norm_of_moduli(&moduli, p, mu)
}

pub(crate) fn weighted_norm_of_moduli(moduli: &[f64], p: Exponent, mu: &[f64]) -> f64 {
    let peak = moduli.iter().fold(0.0_f64, |m, &v| m.max(v));
    match p {
        Exponent::Infinite => peak,
        Exponent::Finite(p) => {
            if peak == 0.0 {
                return 0.0;
            }
            // scaled by the peak so that large p neither overflows nor underflows
            let terms: Vec<f64> = moduli
                .iter()
                .zip(mu)
                .map(|(&v, &w)| w * (v / peak).powf(p))
                .collect();
            peak * pairwise_sum(&terms).powf(1.0 / p)
        }
    }
}

/// `L^{p_0}(μ), L^{p_1}(μ)` on ℂⁿ.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Couple {
    n: usize,
    p0: Exponent,
    p1: Exponent,
    mu: Vec<f64>,
}

#[derive(Deserialize)]
struct CoupleRepr {
    n: usize,
    p0: Exponent,
    p1: Exponent,
    mu: Vec<f64>,
}

impl<'de> Deserialize<'de> for Couple {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let r = CoupleRepr::deserialize(deserializer)?;
        if r.mu.len() != r.n {
            return Err(serde::de::Error::custom(Error::DimensionMismatch {
                expected: r.n,
                got: r.mu.len(),
            }));
        }
        Couple::new(r.p0, r.p1, r.mu).map_err(serde::de::Error::custom)
    }
}

/// Result of the infimal splitting behind the `A_0 + A_1` norm.
#[derive(Clone, Debug, PartialEq)]
pub struct SumNorm {
    /// Value of the best splitting found (an upper bound on the norm).
    pub value: f64,
    /// Certified lower bound on the norm.
    pub lower: f64,
    pub iterations: usize,
}

const SUM_NORM_MAX_ITERS: usize = 200_000;

impl Couple {
    pub fn new(p0: Exponent, p1: Exponent, mu: Vec<f64>) -> Result<Self> {
        if mu.is_empty() {
            return Err(invalid("n", "dimension must be at least 1"));
        }
        if let Some(w) = mu.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(invalid("mu", format!("weights must be positive and finite, got {w}")));
        }
        for p in [p0, p1] {
            if let Exponent::Finite(v) = p {
                Exponent::finite(v)?;
            }
        }
        Ok(Couple {
            n: mu.len(),
            p0,
            p1,
            mu,
        })
    }

    /// Unweighted couple (`mu_i = 1`).
    pub fn uniform(n: usize, p0: Exponent, p1: Exponent) -> Result<Self> {
        Couple::new(p0, p1, vec![1.0; n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p0(&self) -> Exponent {
        self.p0
    }

    pub fn p1(&self) -> Exponent {
        self.p1
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn exponent(&self, side: Side) -> Exponent {
        match side {
            Side::Zero => self.p0,
            Side::One => self.p1,
        }
    }

    pub fn check_dim(&self, a: &Element) -> Result<()> {
        if a.len() == self.n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.n,
                got: a.len(),
            })
        }
    }

    /// Exponent of the interpolation space: `1/p_θ = (1-θ)/p_0 + θ/p_1`.
    pub fn interpolated_exponent(&self, theta: f64) -> Result<Exponent> {
        check_theta(theta)?;
        Ok(Exponent::from_reciprocal(
            (1.0 - theta) * self.p0.reciprocal() + theta * self.p1.reciprocal(),
        ))
    }

    pub fn norm_pj(&self, a: &Element, side: Side) -> Result<f64> {
        self.check_dim(a)?;
        Ok(self.norm_unchecked(&a.0, side))
    }

    pub(crate) fn norm_unchecked(&self, x: &[Complex64], side: Side) -> f64 {
        weighted_norm(x, self.exponent(side), &self.mu)
    }

    pub fn norm_intersection(&self, a: &Element) -> Result<f64> {
        Ok(self.norm_pj(a, Side::Zero)?.max(self.norm_pj(a, Side::One)?))
    }

    /// `A_0 + A_1` norm with the default tolerance `1e-9`.
    pub fn norm_sum(&self, a: &Element) -> Result<f64> {
        self.norm_sum_with(a, 1e-9).map(|s| s.value)
    }

    /// `inf { ‖a_0‖_{A_0} + ‖a_1‖_{A_1} : a_0 + a_1 = a }`.
    ///
    /// The norms only see coordinate moduli, so an optimal splitting has
    /// `a_0 = t·a` coordinatewise with `t_i ∈ [0, 1]`. When one exponent is
    /// infinite the problem collapses to a one-dimensional convex search over
    /// the clipping level; otherwise projected gradient descent runs until a
    /// dual certificate closes the gap to `tol` (relative).
    pub fn norm_sum_with(&self, a: &Element, tol: f64) -> Result<SumNorm> {
        self.check_dim(a)?;
        if !(tol > 0.0) {
            return Err(invalid("tol", "tolerance must be positive"));
        }
        let b: Vec<f64> = a.0.iter().map(|z| z.norm()).collect();
        let peak = b.iter().fold(0.0_f64, |m, &v| m.max(v));
        if peak == 0.0 {
            return Ok(SumNorm {
                value: 0.0,
                lower: 0.0,
                iterations: 0,
            });
        }
        if self.p0 == self.p1 {
            let v = weighted_norm_of_moduli(&b, self.p0, &self.mu);
            return Ok(SumNorm {
                value: v,
                lower: v,
                iterations: 0,
            });
        }
        match (self.p0, self.p1) {
            (Exponent::Infinite, other) => Ok(self.clipped_split(&b, other)),
            (other, Exponent::Infinite) => Ok(self.clipped_split(&b, other)),
            (Exponent::Finite(p0), Exponent::Finite(p1)) => self.smooth_split(&b, p0, p1, tol),
        }
    }

    /// `min_t t + ‖(b - t)_+‖_other` over `t ∈ [0, max b]` (the `∞` side
    /// takes `min(b_i, t)`).
    fn clipped_split(&self, b: &[f64], other: Exponent) -> SumNorm {
        let peak = b.iter().fold(0.0_f64, |m, &v| m.max(v));
        let objective = |t: f64| {
            let rest: Vec<f64> = b.iter().map(|&v| (v - t).max(0.0)).collect();
            t + weighted_norm_of_moduli(&rest, other, &self.mu)
        };
        // convex piecewise-smooth in t: golden section, then compare the ends
        let (mut lo, mut hi) = (0.0, peak);
        let g = 0.5 * (5.0_f64.sqrt() - 1.0);
        let mut x1 = hi - g * (hi - lo);
        let mut x2 = lo + g * (hi - lo);
        let (mut f1, mut f2) = (objective(x1), objective(x2));
        let mut iterations = 0;
        while hi - lo > 1e-16 * peak && iterations < 400 {
            iterations += 1;
            if f1 <= f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - g * (hi - lo);
                f1 = objective(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + g * (hi - lo);
                f2 = objective(x2);
            }
        }
        let candidates = [0.0, peak, lo, hi, x1, x2];
        let value = candidates
            .iter()
            .map(|&t| objective(t))
            .fold(f64::INFINITY, f64::min);
        // The objective is Lipschitz with constant at most 1 + ‖1‖_other, so
        // the bracket width bounds the gap.
        let lip = 1.0 + weighted_norm_of_moduli(&vec![1.0; b.len()], other, &self.mu);
        let lower = (value - lip * (hi - lo)).max(0.0);
        SumNorm {
            value,
            lower,
            iterations,
        }
    }

    fn smooth_split(&self, b: &[f64], p0: f64, p1: f64, tol: f64) -> Result<SumNorm> {
        let n = b.len();
        let e0 = Exponent::Finite(p0);
        let e1 = Exponent::Finite(p1);
        let objective = |u: &[f64]| {
            let v: Vec<f64> = b.iter().zip(u).map(|(&bi, &ui)| bi - ui).collect();
            weighted_norm_of_moduli(u, e0, &self.mu) + weighted_norm_of_moduli(&v, e1, &self.mu)
        };
        // Dual certificate: any y >= 0 with ‖y‖_{q0}, ‖y‖_{q1} <= 1 (pairing
        // Σ mu_i x_i y_i) gives ‖a‖ >= Σ mu_i b_i y_i.
        let dual_bound = |y: &[f64]| {
            let s0 = weighted_norm_of_moduli(y, e0.conjugate(), &self.mu);
            let s1 = weighted_norm_of_moduli(y, e1.conjugate(), &self.mu);
            let scale = s0.max(s1);
            if scale <= 0.0 {
                return 0.0;
            }
            let terms: Vec<f64> = (0..n).map(|i| self.mu[i] * b[i] * y[i]).collect();
            pairwise_sum(&terms) / scale
        };
        // gradient of ‖x‖_p with respect to the μ-pairing
        let dual_direction = |x: &[f64], p: f64| -> Vec<f64> {
            let norm = weighted_norm_of_moduli(x, Exponent::Finite(p), &self.mu);
            if norm == 0.0 {
                return vec![0.0; x.len()];
            }
            x.iter().map(|&xi| (xi / norm).powf(p - 1.0)).collect()
        };
        let gradient = |u: &[f64]| -> Vec<f64> {
            let v: Vec<f64> = b.iter().zip(u).map(|(&bi, &ui)| bi - ui).collect();
            let g0 = dual_direction(u, p0);
            let g1 = dual_direction(&v, p1);
            (0..n).map(|i| self.mu[i] * (g0[i] - g1[i])).collect()
        };
        let project = |u: &mut [f64]| {
            for (ui, &bi) in u.iter_mut().zip(b) {
                *ui = ui.clamp(0.0, bi);
            }
        };

        // Start from the better pure splitting.
        let all: Vec<f64> = b.to_vec();
        let none = vec![0.0; n];
        let mut u = if objective(&all) <= objective(&none) { all } else { none };
        let mut u_half: Vec<f64> = b.iter().map(|&v| 0.5 * v).collect();
        if objective(&u_half) < objective(&u) {
            std::mem::swap(&mut u, &mut u_half);
        }
        let mut best = objective(&u);
        let mut lower = 0.0_f64;
        let mut step = b.iter().fold(0.0_f64, |m, &v| m.max(v));
        let mut iterations = 0;
        while iterations < SUM_NORM_MAX_ITERS {
            iterations += 1;
            let v: Vec<f64> = b.iter().zip(&u).map(|(&bi, &ui)| bi - ui).collect();
            let y0 = dual_direction(&u, p0);
            let y1 = dual_direction(&v, p1);
            let mix: Vec<f64> = y0.iter().zip(&y1).map(|(a, c)| 0.5 * (a + c)).collect();
            for cand in [&y0, &y1, &mix] {
                lower = lower.max(dual_bound(cand));
            }
            if best - lower <= tol * best {
                return Ok(SumNorm {
                    value: best,
                    lower,
                    iterations,
                });
            }
            let g = gradient(&u);
            let mut accepted = false;
            for _ in 0..60 {
                let mut trial: Vec<f64> = u.iter().zip(&g).map(|(&ui, &gi)| ui - step * gi).collect();
                project(&mut trial);
                let f = objective(&trial);
                let moved: f64 = trial
                    .iter()
                    .zip(&u)
                    .map(|(t, x)| (t - x) * (t - x))
                    .sum::<f64>();
                if f <= best - 1e-4 * moved / step.max(f64::MIN_POSITIVE) || (moved == 0.0 && f <= best) {
                    accepted = moved > 0.0;
                    u = trial;
                    best = best.min(f);
                    step *= 1.5;
                    break;
                }
                step *= 0.5;
            }
            if !accepted && step < 1e-300 {
                break;
            }
            if !accepted {
                step = step.max(1e-300);
            }
        }
        if best - lower <= tol * best {
            Ok(SumNorm {
                value: best,
                lower,
                iterations,
            })
        } else {
            Err(Error::NoConvergence { iterations, best })
        }
    }

    /// Exact `‖a‖_[θ]`: the `L^{p_θ}(μ)` norm.
    pub fn oracle_interp_norm(&self, a: &Element, theta: f64) -> Result<f64> {
        self.check_dim(a)?;
        let p_theta = self.interpolated_exponent(theta)?;
        Ok(weighted_norm(&a.0, p_theta, &self.mu))
    }

    /// Thorin's extremal function for `a` at `θ`.
    ///
    /// `f_i(z) = a_i · (|a_i| / ‖a‖_{p_θ})^{(z-θ) p_θ (1/p_1 - 1/p_0)}`, written
    /// as `c·exp(s(z-θ))` with the phase of `a_i` carried by `c`.
    pub fn thorin_extremal(&self, a: &Element, theta: f64) -> Result<Extremal> {
        self.check_dim(a)?;
        let p_theta = self.interpolated_exponent(theta)?;
        if a.is_zero() {
            return Ok(Extremal {
                function: CandidateFn::zero(self.n, theta)?,
                degenerate: true,
            });
        }
        let norm = weighted_norm(&a.0, p_theta, &self.mu);
        let recip_theta = p_theta.reciprocal();
        let gap = self.p1.reciprocal() - self.p0.reciprocal();
        // p_θ (1/p_1 - 1/p_0); both factors vanish together when p_θ = ∞
        let rate = if recip_theta == 0.0 { 0.0 } else { gap / recip_theta };
        let terms = a
            .0
            .iter()
            .map(|&ai| {
                if ai.re == 0.0 && ai.im == 0.0 {
                    Vec::new()
                } else {
                    vec![Term {
                        c: ai,
                        beta: 0.0,
                        s: rate * (ai.norm() / norm).ln(),
                    }]
                }
            })
            .collect();
        Ok(Extremal {
            function: CandidateFn::new(theta, terms)?,
            degenerate: false,
        })
    }
}

pub(crate) fn check_theta(theta: f64) -> Result<()> {
    if theta > 0.0 && theta < 1.0 {
        Ok(())
    } else {
        Err(invalid("theta", format!("must lie in (0, 1), got {theta}")))
    }
}

/// Output of [`Couple::thorin_extremal`]; `degenerate` flags `a = 0`, in which
/// case the zero function is returned.
#[derive(Clone, Debug, PartialEq)]
pub struct Extremal {
    pub function: CandidateFn,
    pub degenerate: bool,
}

/// One Gaussian-exponential term `c·exp(beta (z-θ)² + s (z-θ))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub c: Complex64,
    pub beta: f64,
    pub s: f64,
}

impl Term {
    pub fn eval(&self, w: Complex64) -> Complex64 {
        self.c * (self.beta * w * w + self.s * w).exp()
    }
}

/// A closed-form strip function, coordinate by coordinate a finite sum of
/// [`Term`]s centred at `theta`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CandidateFn {
    theta: f64,
    terms: Vec<Vec<Term>>,
}

#[derive(Deserialize)]
struct CandidateRepr {
    theta: f64,
    terms: Vec<Vec<Term>>,
}

impl<'de> Deserialize<'de> for CandidateFn {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let r = CandidateRepr::deserialize(deserializer)?;
        CandidateFn::new(r.theta, r.terms).map_err(serde::de::Error::custom)
    }
}

impl CandidateFn {
    pub fn new(theta: f64, terms: Vec<Vec<Term>>) -> Result<Self> {
        check_theta(theta)?;
        if terms.is_empty() {
            return Err(invalid("terms", "at least one coordinate is required"));
        }
        for t in terms.iter().flatten() {
            if !(t.beta >= 0.0 && t.beta.is_finite()) {
                return Err(invalid("beta", format!("must be finite and >= 0, got {}", t.beta)));
            }
            if !t.s.is_finite() || !t.c.re.is_finite() || !t.c.im.is_finite() {
                return Err(invalid("terms", "term parameters must be finite"));
            }
        }
        Ok(CandidateFn { theta, terms })
    }

    pub fn zero(n: usize, theta: f64) -> Result<Self> {
        CandidateFn::new(theta, vec![Vec::new(); n])
    }

    /// `f ≡ a`.
    pub fn constant(a: &Element, theta: f64) -> Result<Self> {
        CandidateFn::new(
            theta,
            a.0.iter()
                .map(|&c| vec![Term { c, beta: 0.0, s: 0.0 }])
                .collect(),
        )
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn terms(&self) -> &[Vec<Term>] {
        &self.terms
    }

    pub fn dim(&self) -> usize {
        self.terms.len()
    }

    /// True when every term carries Gaussian decay (membership in 𝔉).
    pub fn decays(&self) -> bool {
        self.terms.iter().flatten().all(|t| t.beta > 0.0)
    }

    /// Term-by-term evaluation at any complex point (the terms are entire).
    pub fn eval_unchecked(&self, z: Complex64) -> Vec<Complex64> {
        let w = z - self.theta;
        self.terms
            .iter()
            .map(|ts| ts.iter().fold(Complex64::new(0.0, 0.0), |acc, t| acc + t.eval(w)))
            .collect()
    }

    /// Multiply by `exp(eps (z - center)²)`.
    pub fn damp(&self, eps: f64, center: f64) -> Result<CandidateFn> {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(invalid("eps", format!("damping must be positive, got {eps}")));
        }
        // eps (w + d)² with w = z - θ, d = θ - center
        let d = self.theta - center;
        let terms = self
            .terms
            .iter()
            .map(|ts| {
                ts.iter()
                    .map(|t| Term {
                        c: t.c * (eps * d * d).exp(),
                        beta: t.beta + eps,
                        s: t.s + 2.0 * eps * d,
                    })
                    .collect()
            })
            .collect();
        CandidateFn::new(self.theta, terms)
    }

    /// Coordinatewise bound on `|f_i(z)|` valid for `Re z ∈ [x_lo, x_hi]`
    /// and every imaginary part.
    pub fn modulus_envelope(&self, x_lo: f64, x_hi: f64) -> Vec<f64> {
        let (w_lo, w_hi) = (x_lo - self.theta, x_hi - self.theta);
        let sq_max = (w_lo * w_lo).max(w_hi * w_hi);
        self.terms
            .iter()
            .map(|ts| {
                let parts: Vec<f64> = ts
                    .iter()
                    .map(|t| t.c.norm() * (t.beta * sq_max + (t.s * w_lo).max(t.s * w_hi)).exp())
                    .collect();
                pairwise_sum(&parts)
            })
            .collect()
    }
}
