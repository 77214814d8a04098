use approx::assert_relative_eq;
use lk_sharp::bvp::{self, ProblemSpec};
use lk_sharp::problems::{
    check_conjecture, endpoint_bound_certificates, extremal_certificate, gamma_curve,
    inequality_sweep, markov_supremum, norm_domination, omega, stechkin, uniform_omega,
    uniform_stechkin, Verdict,
};
use proptest::prelude::*;

fn pick_k(r: usize, frac: f64) -> usize {
    ((r as f64 * frac) as usize).min(r - 1)
}

#[test]
fn gamma_curve_examples() {
    let spec = ProblemSpec::endpoint(1, 0).unwrap();
    let pts = gamma_curve(&spec, &[0.0, 1.0]).unwrap();
    assert_relative_eq!(pts[0].a, 0.5f64.sqrt(), max_relative = 1e-14);
    assert_relative_eq!(pts[0].b, (2.0f64 / 3.0).sqrt(), max_relative = 1e-14);
    assert_relative_eq!(pts[1].a, 0.594679190201845f64.sqrt(), max_relative = 1e-12);
    assert_relative_eq!(pts[1].b, 0.4426355305257028f64.sqrt(), max_relative = 1e-12);
}

#[test]
fn omega_examples() {
    let spec = ProblemSpec::endpoint(1, 0).unwrap();
    let (a, b) = (0.594679190201845f64.sqrt(), 0.4426355305257028f64.sqrt());
    let res = omega(&spec, a / b).unwrap();
    assert_relative_eq!(res.lambda_star, 1.0, max_relative = 1e-8);
    assert_relative_eq!(res.omega, a * a / b + b, max_relative = 1e-10);
    assert!(res.residual() < 1e-10);
    assert_eq!(res.best_recovery(), res.omega);

    let far = omega(&spec, 1e3).unwrap();
    assert_relative_eq!(far.omega / 1e3, spec.markov_constant(), max_relative = 0.01);
}

#[test]
fn omega_equals_curve_minimum() {
    let spec = ProblemSpec::new(2, 1, 0.3).unwrap();
    let lambdas: Vec<f64> = (0..200)
        .map(|i| 10f64.powf(-4.0 + 10.0 * i as f64 / 199.0))
        .collect();
    let curve = gamma_curve(&spec, &lambdas).unwrap();
    for delta in [0.05, 0.5, 5.0] {
        let res = omega(&spec, delta).unwrap();
        let best = curve
            .iter()
            .map(|p| p.a * delta + p.b)
            .fold(f64::INFINITY, f64::min);
        assert!(best >= res.omega * (1.0 - 1e-12));
        assert!(best <= res.omega * (1.0 + 1e-3));
    }
}

#[test]
fn stechkin_examples() {
    let spec = ProblemSpec::endpoint(1, 0).unwrap();
    let at_m = stechkin(&spec, spec.markov_constant()).unwrap();
    assert_eq!(at_m.lambda_n(), Some(0.0));
    assert_relative_eq!(at_m.e_n(), (2.0f64 / 3.0).sqrt(), max_relative = 1e-14);
    assert!(stechkin(&spec, 0.5).unwrap().is_infinite());
    assert!(stechkin(&spec, 0.5).unwrap().e_n().is_infinite());
    let res = stechkin(&spec, 0.594679190201845f64.sqrt()).unwrap();
    assert_relative_eq!(
        res.e_n(),
        0.4426355305257028f64.sqrt(),
        max_relative = 1e-10
    );
    assert!(res.kernel(0.0).is_some());

    let interior = ProblemSpec::new(2, 0, 0.4).unwrap();
    let at_mt = stechkin(&interior, interior.markov_constant()).unwrap();
    assert_relative_eq!(at_mt.e_n(), interior.u0().norm(), max_relative = 1e-14);
}

#[test]
fn uniform_examples() {
    let r1 = uniform_omega(1, 0, 1.0, 21).unwrap();
    assert!(r1.argmax_at_endpoint());
    let end = omega(&ProblemSpec::endpoint(1, 0).unwrap(), 1.0)
        .unwrap()
        .omega;
    assert_relative_eq!(r1.omega, end, max_relative = 1e-12);
    let r2 = uniform_omega(2, 1, 0.5, 21).unwrap();
    assert!(r2.argmax_at_endpoint());
    for &(_, v) in &r2.values {
        assert!(v <= r2.endpoint_omega + 1e-9);
    }

    let s = uniform_stechkin(1, 0, 0.5f64.sqrt(), 21).unwrap();
    assert_relative_eq!(s.endpoint.e_n(), (2.0f64 / 3.0).sqrt(), max_relative = 1e-7);
    assert!((s.interior_sup - s.endpoint.e_n()).abs() < 1e-6);
    let s2 = uniform_stechkin(2, 1, 2.0, 21).unwrap();
    assert!((s2.interior_sup - s2.endpoint.e_n()).abs() < 1e-6);
    assert!(uniform_stechkin(1, 0, 0.7, 21)
        .unwrap()
        .endpoint
        .is_infinite());
}

#[test]
fn markov_supremum_location() {
    let (m, t) = markov_supremum(3, 1, 101).unwrap();
    assert_eq!(t.abs(), 1.0);
    assert_relative_eq!(
        m,
        ProblemSpec::endpoint(3, 1).unwrap().markov_constant(),
        max_relative = 1e-14
    );
}

#[test]
fn conjecture_examples() {
    for (r, k) in [(1, 0), (2, 0), (2, 1)] {
        for rep in check_conjecture(r, k, 10, 1001).unwrap() {
            assert_eq!(rep.verdict, Verdict::Holds, "{rep:?}");
        }
    }
    let reps = check_conjecture(1, 0, 20, 1001).unwrap();
    for rep in &reps {
        let exact = (std::f64::consts::PI * rep.mode as f64 / 2.0).powi(2);
        assert_relative_eq!(rep.eigenvalue, exact, max_relative = 1e-8);
    }
    for k in [0, 2] {
        let reps = check_conjecture(4, k, 6, 2001).unwrap();
        assert_eq!(reps.len(), 6);
        assert!(reps.iter().all(|r| r.margin >= 0.0));
    }
}

#[test]
fn domination_on_grid() {
    for (r, k) in [(1, 0), (2, 0), (2, 1), (3, 1)] {
        let check =
            norm_domination(r, k, &[0.1, 1.0, 10.0, 100.0], &[-0.9, -0.5, 0.0, 0.3, 0.8]).unwrap();
        assert!(check.holds(1e-12), "r={r} k={k} {check:?}");
    }
}

#[test]
fn endpoint_inequality_constants() {
    let rep = endpoint_bound_certificates(2, 1).unwrap();
    assert!(rep.passes(1e-10));
    let pts = gamma_curve(&ProblemSpec::endpoint(2, 1).unwrap(), &[0.0]).unwrap();
    assert_relative_eq!(rep.a, pts[0].a, max_relative = 1e-14);
    assert_relative_eq!(rep.b, pts[0].b, max_relative = 1e-14);
    let eq = endpoint_bound_certificates(2, 0).unwrap();
    assert!(eq.equality_residual.unwrap() < 1e-10);
    assert!(endpoint_bound_certificates(5, 1).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn omega_is_concave(r in 1usize..=3, kf in 0.0f64..1.0, t in -1.0f64..1.0, l1 in -2.0f64..2.0, gap in 0.05f64..2.0) {
        let spec = ProblemSpec::new(r, pick_k(r, kf), t).unwrap();
        let (d1, d2) = (10f64.powf(l1), 10f64.powf(l1 + gap));
        let o1 = omega(&spec, d1).unwrap().omega;
        let o2 = omega(&spec, d2).unwrap().omega;
        let mid = omega(&spec, 0.5 * (d1 + d2)).unwrap().omega;
        prop_assert!(mid >= 0.5 * (o1 + o2) - 1e-9);
    }

    #[test]
    fn defining_ratio_decreases(r in 1usize..=4, kf in 0.0f64..1.0, t in -1.0f64..1.0, l in -3.0f64..5.0, step in 0.01f64..1.0) {
        let spec = ProblemSpec::new(r, pick_k(r, kf), t).unwrap();
        let f = |lambda: f64| {
            let s = bvp::solve(&spec, lambda).unwrap();
            (s.norm_ur() / (lambda * s.norm_u())).powi(2)
        };
        prop_assert!(f(10f64.powf(l + step)) < f(10f64.powf(l)));
    }

    #[test]
    fn stechkin_dominates_omega_lines(r in 1usize..=3, kf in 0.0f64..1.0, t in -1.0f64..1.0, l in -2.0f64..4.0) {
        let spec = ProblemSpec::new(r, pick_k(r, kf), t).unwrap();
        let lambda0 = 10f64.powf(l);
        let sol0 = bvp::solve(&spec, lambda0).unwrap();
        let n = sol0.norm_ur();
        let res = stechkin(&spec, n).unwrap();
        let lambda_n = res.lambda_n().unwrap();
        let back = bvp::solve(&spec, lambda_n).unwrap().norm_ur();
        prop_assert!((back / n - 1.0).abs() < 1e-9);
        // λ is recovered from A = sqrt(M² + E) with E ~ λ², so its relative
        // accuracy is limited to about ε·A²/E
        let cond = n * n / sol0.ur_excess();
        prop_assert!((lambda_n / lambda0 - 1.0).abs() < 1e-6 + 100.0 * f64::EPSILON * cond);
        let e_n = res.e_n();
        for delta in [0.01, 0.1, 1.0, 10.0] {
            let o = omega(&spec, delta).unwrap().omega;
            prop_assert!(e_n >= o - n * delta - 1e-9);
        }
        let sol = res.solution().unwrap();
        let delta_n = sol.norm_ur() / (sol.lambda() * sol.norm_u());
        let at = omega(&spec, delta_n).unwrap().omega - n * delta_n;
        prop_assert!((at - e_n).abs() <= 1e-7 * e_n);
    }

    #[test]
    fn extremal_attains_equality(r in 1usize..=3, kf in 0.0f64..1.0, t in -1.0f64..1.0, l in -2.0f64..4.0) {
        let spec = ProblemSpec::new(r, pick_k(r, kf), t).unwrap();
        let sol = bvp::solve(&spec, 10f64.powf(l)).unwrap();
        let cert = extremal_certificate(&sol);
        let bound = sol.norm_ur() * cert.norm_f + sol.norm_u() * cert.norm_fr;
        prop_assert!((cert.value - bound).abs() <= 1e-7 * bound);
    }

    #[test]
    fn curve_points_are_valid_constants(r in 1usize..=4, kf in 0.0f64..1.0, t in -1.0f64..1.0, l in -3.0f64..4.0) {
        let spec = ProblemSpec::new(r, pick_k(r, kf), t).unwrap();
        let pts = gamma_curve(&spec, &[0.0, 10f64.powf(l)]).unwrap();
        prop_assert!(pts[1].a >= spec.markov_constant() - 1e-9);
        prop_assert!(pts[1].b > 0.0);
        let rep = inequality_sweep(&pts);
        prop_assert!(rep.max_violation <= 1e-8, "{:?}", rep);
    }
}
