use num_complex::Complex64;
use proptest::prelude::*;

use periodic_interp::analytic::{PeriodicLaurentFn, StripGeometry};
use periodic_interp::bounds::{c1, c1_bruteforce, c_general, c_main, gaussian_tail, w_envelope, w_eval};
use periodic_interp::normsolver::{periodic_norm_upper, Init, SolverConfig};
use periodic_interp::periodize::{periodize, Kernel};
use periodic_interp::{CandidateFn, Couple, Element, Exponent, Side, Term};

fn exponent() -> impl Strategy<Value = Exponent> + Clone {
    prop_oneof![
        (1.0..6.0f64).prop_map(Exponent::Finite),
        Just(Exponent::Finite(1.0)),
        Just(Exponent::Infinite),
    ]
}

fn finite_exponent() -> impl Strategy<Value = Exponent> + Clone {
    prop_oneof![(1.0..6.0f64).prop_map(Exponent::Finite), Just(Exponent::Finite(1.0))]
}

fn complex() -> impl Strategy<Value = Complex64> {
    (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn instance(p: impl Strategy<Value = Exponent> + Clone) -> impl Strategy<Value = (Couple, Element)> {
    (1usize..7, p.clone(), p).prop_flat_map(|(n, p0, p1)| {
        (
            prop::collection::vec(0.1..10.0f64, n),
            prop::collection::vec(complex(), n),
        )
            .prop_map(move |(mu, a)| (Couple::new(p0, p1, mu).unwrap(), Element(a)))
    })
}

fn nonzero(a: &Element) -> bool {
    a.max_modulus() > 1e-3
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn norms_are_ordered((couple, a) in instance(exponent()), theta in 0.01..0.99f64) {
        prop_assume!(nonzero(&a));
        let sum = couple.norm_sum(&a).unwrap();
        let p0 = couple.norm_pj(&a, Side::Zero).unwrap();
        let p1 = couple.norm_pj(&a, Side::One).unwrap();
        let cap = couple.norm_intersection(&a).unwrap();
        let oracle = couple.oracle_interp_norm(&a, theta).unwrap();
        let tol = 1e-9 * cap;
        prop_assert!(sum <= p0.min(p1) + tol);
        prop_assert!(p0.min(p1) <= cap + tol);
        prop_assert!(sum <= oracle + tol);
        prop_assert!(oracle <= cap + tol);
    }

    #[test]
    fn oracle_is_log_convex((couple, a) in instance(exponent()), t0 in 0.01..0.99f64, t1 in 0.01..0.99f64) {
        prop_assume!(nonzero(&a));
        let mid = couple.oracle_interp_norm(&a, 0.5 * (t0 + t1)).unwrap();
        let n0 = couple.oracle_interp_norm(&a, t0).unwrap();
        let n1 = couple.oracle_interp_norm(&a, t1).unwrap();
        prop_assert!(mid <= (n0 * n1).sqrt() * (1.0 + 1e-12));
    }

    #[test]
    fn norms_are_absolutely_homogeneous((couple, a) in instance(exponent()), t in complex(), theta in 0.01..0.99f64) {
        prop_assume!(nonzero(&a));
        let ta = a.scale(t);
        let close = |x: f64, y: f64| (x - y).abs() <= 1e-9 * y.max(1e-300);
        let s = t.norm();
        prop_assert!(close(couple.norm_pj(&ta, Side::Zero).unwrap(), s * couple.norm_pj(&a, Side::Zero).unwrap()));
        prop_assert!(close(couple.norm_pj(&ta, Side::One).unwrap(), s * couple.norm_pj(&a, Side::One).unwrap()));
        prop_assert!(close(couple.norm_intersection(&ta).unwrap(), s * couple.norm_intersection(&a).unwrap()));
        prop_assert!(close(couple.oracle_interp_norm(&ta, theta).unwrap(), s * couple.oracle_interp_norm(&a, theta).unwrap()));
        let sum = couple.norm_sum(&a).unwrap();
        prop_assert!((couple.norm_sum(&ta).unwrap() - s * sum).abs() <= 1e-6 * s * sum.max(1e-300));
    }

    #[test]
    fn thorin_function_is_extremal((couple, a) in instance(finite_exponent()), theta in 0.01..0.99f64, y in -20.0..20.0f64) {
        prop_assume!(nonzero(&a));
        let f = couple.thorin_extremal(&a, theta).unwrap().function;
        let at = Element(f.eval_unchecked(Complex64::new(theta, 0.0)));
        prop_assert!(at.sub(&a).max_modulus() <= 1e-13 * a.max_modulus().max(1.0));
        let oracle = couple.oracle_interp_norm(&a, theta).unwrap();
        for side in Side::BOTH {
            let v = Element(f.eval_unchecked(Complex64::new(side.abscissa(), y)));
            prop_assert!((couple.norm_pj(&v, side).unwrap() - oracle).abs() <= 1e-10 * oracle);
        }
    }

    #[test]
    fn lattice_sum_stays_below_c1(lambda in 0.3..10.0f64, alpha in 0.05..5.0f64) {
        let brute = c1_bruteforce(lambda, alpha, 40, 1025).unwrap();
        prop_assert!(brute.value() <= c1(lambda, alpha).unwrap() + 1e-12);
    }

    #[test]
    fn gaussian_tail_dominates_direct_sum(lambda in 0.3..6.0f64, alpha in 0.05..3.0f64, k in 1usize..6, u in -0.5..0.5f64) {
        let y = u * lambda;
        let direct: f64 = (k as i64 + 1..k as i64 + 200)
            .flat_map(|j| [j, -j])
            .map(|j| {
                let t = y + j as f64 * lambda;
                (alpha * (1.0 - t * t)).exp()
            })
            .sum();
        prop_assert!(direct <= gaussian_tail(lambda, alpha, k).unwrap() * (1.0 + 1e-12));
    }

    #[test]
    fn kernel_stays_below_envelope(lambda in 0.3..20.0f64, theta in 0.01..0.99f64, x in 0.0..1.0f64, y in -50.0..50.0f64) {
        let w = w_eval(lambda, theta, Complex64::new(x, y));
        prop_assert!(w.norm() <= w_envelope(lambda, theta, x) * (1.0 + 1e-12));
    }

    #[test]
    fn constants_assemble_consistently(lambda in 0.5..200.0f64) {
        let g = c_general(lambda, 1.0 / lambda, 1.0 / lambda).unwrap();
        let m = c_main(lambda).unwrap();
        prop_assert!((g - m).abs() <= 1e-13 * m);
        prop_assert_eq!(c_main(lambda).unwrap().to_bits(), m.to_bits());
    }

    #[test]
    fn c_main_decreases(l0 in 4.0..200.0f64, step in 0.01..50.0f64) {
        prop_assert!(c_main(l0 + step).unwrap() <= c_main(l0).unwrap());
    }
}

fn laurent(n: usize, degree: usize) -> impl Strategy<Value = Vec<Element>> {
    prop::collection::vec(prop::collection::vec(complex(), n).prop_map(Element), 2 * degree + 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn laurent_functions_are_periodic(
        coeffs in laurent(3, 4),
        lambda in 2.0..16.0f64,
        theta in 0.05..0.95f64,
        x in 0.0..1.0f64,
        y in -10.0..10.0f64,
    ) {
        let geometry = StripGeometry::new(lambda, theta).unwrap();
        let f = PeriodicLaurentFn::new(geometry, 4, coeffs).unwrap();
        let couple = Couple::uniform(3, Exponent::Finite(2.0), Exponent::Infinite).unwrap();
        let norm = f.fstrip_norm(&couple, 64).unwrap();
        let z = Complex64::new(x, y);
        let a = Element(f.eval_unchecked(z));
        let b = Element(f.eval_unchecked(z + Complex64::new(0.0, lambda)));
        prop_assert!(a.sub(&b).max_modulus() <= 1e-12 * (1.0 + norm));
    }

    #[test]
    fn fstrip_norm_is_a_norm(
        f in laurent(2, 3),
        g in laurent(2, 3),
        t in complex(),
        p0 in exponent(),
        p1 in exponent(),
    ) {
        let geometry = StripGeometry::new(4.0, 0.4).unwrap();
        let couple = Couple::new(p0, p1, vec![0.7, 2.0]).unwrap();
        let samples = 64;
        let eps = periodic_interp::analytic::certification_factor(3, samples) - 1.0;
        let f = PeriodicLaurentFn::new(geometry, 3, f).unwrap();
        let g = PeriodicLaurentFn::new(geometry, 3, g).unwrap();
        let nf = f.fstrip_norm(&couple, samples).unwrap();
        let ng = g.fstrip_norm(&couple, samples).unwrap();
        let nfg = f.add(&g).unwrap().fstrip_norm(&couple, samples).unwrap();
        prop_assert!(nfg <= (nf + ng) * (1.0 + eps) + 1e-12);
        let nt = f.scale(t).fstrip_norm(&couple, samples).unwrap();
        prop_assert!((nt - t.norm() * nf).abs() <= 1e-10 * (1.0 + nt));
    }

    #[test]
    fn periodized_function_interpolates_and_is_linear(
        (couple, a) in instance(finite_exponent()),
        theta in 0.1..0.9f64,
        lambda in 2.0..10.0f64,
        t in complex(),
        y in -5.0..5.0f64,
    ) {
        prop_assume!(nonzero(&a));
        let geometry = StripGeometry::new(lambda, theta).unwrap();
        let f = couple.thorin_extremal(&a, theta).unwrap().function.damp(0.01, theta).unwrap();
        let p = periodize(&f, &couple, Kernel::W, 1.0 / lambda, geometry, None).unwrap();
        prop_assert!(p.value_at_theta().sub(&a).max_modulus() <= p.tail_bound() + 1e-10);
        let g = couple.thorin_extremal(&a.scale(t), theta).unwrap().function.damp(0.03, theta).unwrap();
        let sum_terms: Vec<Vec<Term>> = f
            .terms()
            .iter()
            .zip(g.terms())
            .map(|(x, y)| x.iter().chain(y).copied().collect())
            .collect();
        let h = CandidateFn::new(theta, sum_terms).unwrap();
        let pg = periodize(&g, &couple, Kernel::W, 1.0 / lambda, geometry, None).unwrap();
        let ph = periodize(&h, &couple, Kernel::W, 1.0 / lambda, geometry, None).unwrap();
        let k = p.truncation().max(pg.truncation()).max(ph.truncation());
        let (p, pg, ph) = (p.with_truncation(k).unwrap(), pg.with_truncation(k).unwrap(), ph.with_truncation(k).unwrap());
        let z = Complex64::new(0.3, y);
        let sum = Element(p.eval_unchecked(z)).add(&Element(pg.eval_unchecked(z)));
        let direct = Element(ph.eval_unchecked(z));
        prop_assert!(direct.sub(&sum).max_modulus() <= 1e-12 * (1.0 + sum.max_modulus()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn solver_is_feasible_and_never_beats_the_oracle(
        (couple, a) in instance(exponent()),
        theta in 0.1..0.9f64,
        lambda in 2.0..12.0f64,
    ) {
        prop_assume!(nonzero(&a));
        let mut cfg = SolverConfig::with_degree(4, 8);
        cfg.max_iters = 40;
        cfg.init = Init::Zero;
        let r = periodic_norm_upper(&couple, &a, theta, lambda, &cfg).unwrap();
        let oracle = couple.oracle_interp_norm(&a, theta).unwrap();
        prop_assert!(r.value >= oracle * (1.0 - 1e-9));
        prop_assert!(r.function.value_at_theta().sub(&a).max_modulus() <= 1e-12 * a.max_modulus().max(1.0));
        let certified = r.function.fstrip_norm(&couple, cfg.samples).unwrap();
        prop_assert_eq!(certified.to_bits(), r.value.to_bits());
    }
}
