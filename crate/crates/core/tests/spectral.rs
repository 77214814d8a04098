use std::f64::consts::PI;
use std::sync::OnceLock;

use approx::assert_relative_eq;
use lk_sharp::bvp::{self, ProblemSpec};
use lk_sharp::poly_core::quadrature::GaussLegendre;
use lk_sharp::poly_core::{u0_endpoint, Side};
use lk_sharp::spectral::{
    decompose, determinant_eigenvalues, eigen_derivative_profile, eigen_determinant,
    series_solution, GreensKernel, SpectralDecomposition,
};
use proptest::prelude::*;

fn small(r: usize) -> &'static SpectralDecomposition {
    static CACHE: OnceLock<Vec<SpectralDecomposition>> = OnceLock::new();
    &CACHE.get_or_init(|| (1..=4).map(|r| decompose(r, 20, 80).unwrap()).collect())[r - 1]
}

fn l2<F: Fn(f64) -> f64>(f: F) -> f64 {
    let rule = GaussLegendre::new(32);
    (0..8)
        .map(|i| {
            rule.integrate(-1.0 + 0.25 * i as f64, -0.75 + 0.25 * i as f64, |x| {
                f(x).powi(2)
            })
        })
        .sum::<f64>()
        .sqrt()
}

#[test]
fn galerkin_matches_determinant_roots() {
    for r in 1..=4 {
        let roots = determinant_eigenvalues(r, 10).unwrap();
        for (n, root) in roots.iter().enumerate() {
            assert_relative_eq!(small(r).eigenvalues()[n], *root, max_relative = 1e-8);
        }
    }
}

#[test]
fn beam_root() {
    let omega = 2.3650203f64;
    assert_relative_eq!(
        small(2).eigenvalues()[0],
        omega.powi(4),
        max_relative = 1e-6
    );
    let between = 0.5 * (small(2).eigenvalues()[0] + small(2).eigenvalues()[1]);
    assert!(eigen_determinant(2, between).abs() > 1e-6);
}

#[test]
fn first_string_mode_is_cosine() {
    let dec = small(1);
    let err = l2(|x| dec.eigenfunction(0, 0, x) - (PI * x / 2.0).cos());
    assert!(err < 1e-8, "{err}");
}

#[test]
fn orthonormal_and_energy_orthogonal() {
    for r in 1..=4 {
        let dec = small(r);
        for m in 0..10 {
            for n in 0..10 {
                let ip = l2(|x| dec.eigenfunction(m, 0, x) + dec.eigenfunction(n, 0, x)).powi(2)
                    / 4.0
                    - l2(|x| dec.eigenfunction(m, 0, x) - dec.eigenfunction(n, 0, x)).powi(2) / 4.0;
                let target = if m == n { 1.0 } else { 0.0 };
                assert!((ip - target).abs() < 1e-9, "r={r} ({m},{n}) {ip}");
                let rule = GaussLegendre::new(80);
                let energy = rule.integrate(-1.0, 1.0, |x| {
                    dec.eigenfunction(m, r, x) * dec.eigenfunction(n, r, x)
                });
                let lam = dec.eigenvalues()[m];
                let target = if m == n { lam } else { 0.0 };
                assert!(
                    (energy - target).abs() <= 1e-7 * lam,
                    "r={r} ({m},{n}) {energy}"
                );
            }
        }
    }
}

#[test]
fn clamped_and_sign_fixed() {
    for r in 1..=4 {
        let dec = small(r);
        for n in 0..10 {
            for s in 0..r {
                assert!(dec.eigenfunction(n, s, -1.0).abs() < 1e-9);
                assert!(dec.eigenfunction(n, s, 1.0).abs() < 1e-9);
            }
            let lead = (r..2 * r)
                .map(|s| dec.eigenfunction(n, s, -1.0))
                .find(|v| v.abs() > 1e-8)
                .unwrap();
            assert!(lead > 0.0);
        }
    }
}

#[test]
fn string_profile_peaks_at_ends() {
    let prof = eigen_derivative_profile(small(1), 0, 1, 2001).unwrap();
    let max = prof.iter().map(|p| p.1.abs()).fold(0.0, f64::max);
    assert_relative_eq!(prof[0].1.abs(), max, max_relative = 1e-12);
    assert_relative_eq!(prof[2000].1.abs(), max, max_relative = 1e-12);
}

#[test]
fn series_at_zero_lambda_is_exact() {
    let u0 = u0_endpoint(3, 1).unwrap();
    let s = series_solution(small(3), &u0, 0.0).unwrap();
    assert_relative_eq!(s.norm_u, u0.norm(), max_relative = 1e-14);
    assert_relative_eq!(s.norm_ur, u0.differentiate(3).norm(), max_relative = 1e-14);
}

#[test]
fn series_tracks_closed_form() {
    let dec = decompose(1, 200, 400).unwrap();
    let s = series_solution(&dec, &u0_endpoint(1, 0).unwrap(), 1.0).unwrap();
    assert_relative_eq!(s.norm_u.powi(2), 0.4426355305257028, max_relative = 1e-6);
}

#[test]
fn series_function_matches_direct_solution() {
    for r in 1..=3 {
        let dec = decompose(r, 400, 800).unwrap();
        for k in 0..r {
            let spec = ProblemSpec::endpoint(r, k).unwrap();
            for lambda in [0.1, 1.0, 10.0, 100.0] {
                let direct = bvp::solve(&spec, lambda).unwrap();
                let series = series_solution(&dec, &spec.u0(), lambda).unwrap();
                let err: f64 = direct
                    .quadrature_nodes()
                    .into_iter()
                    .map(|(x, w)| {
                        w * (series.evaluate(x, Side::Right) - direct.evaluate(0, x, Side::Right))
                            .powi(2)
                    })
                    .sum::<f64>()
                    .sqrt();
                assert!(err <= 1e-5, "r={r} k={k} λ={lambda}: {err}");
            }
        }
    }
}

#[test]
fn parseval_partial_sums_are_bounded() {
    for r in 1..=3 {
        for k in 0..r {
            let u0 = u0_endpoint(r, k).unwrap();
            let c = small(r).fourier(&u0);
            let total: f64 = c.iter().map(|v| v * v).sum();
            assert!(total <= u0.norm().powi(2) * (1.0 + 1e-12));
        }
    }
}

#[test]
fn kernel_string_parabola_and_clamping() {
    let ker = GreensKernel::new(1).unwrap();
    for &x in &[-0.9, -0.3, 0.0, 0.4, 0.95] {
        assert!((ker.apply(|_| 1.0, x, 8) - (1.0 - x * x) / 2.0).abs() < 1e-10);
    }
    for r in 1..=3 {
        let ker = GreensKernel::new(r).unwrap();
        let g = |x: f64| ker.apply(|xi| (2.0 * xi).exp() - xi, x, 30);
        let h = 1e-2;
        for end in [-1.0, 1.0] {
            let dir = -end;
            let samples: Vec<f64> = (0..=2 * r).map(|i| g(end + dir * h * i as f64)).collect();
            // Forward differences of a function with r vanishing derivatives are O(h^r).
            for s in 0..r {
                let mut diff = samples.clone();
                for _ in 0..s {
                    diff = diff.windows(2).map(|w| w[1] - w[0]).collect();
                }
                let derivative = diff[0] / h.powi(s as i32);
                assert!(
                    derivative.abs() < 1e-6 + 10.0 * h.powi((r - s) as i32),
                    "r={r} s={s} {derivative}"
                );
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn kernel_is_symmetric(r in 1usize..=4, x in -1.0f64..1.0, xi in -1.0f64..1.0) {
        let ker = GreensKernel::new(r).unwrap();
        let a = ker.value(x, xi);
        let b = ker.value(xi, x);
        prop_assert!((a - b).abs() < 1e-12 * (1.0 + a.abs()));
        prop_assert!(a.abs() < 1.0);
    }

    #[test]
    fn fourier_identity(r in 1usize..=3, kf in 0.0f64..1.0, t_idx in 0usize..3) {
        let k = ((r as f64 * kf) as usize).min(r - 1);
        let t = [-1.0, 0.0, 0.5][t_idx];
        let spec = ProblemSpec::new(r, k, t).unwrap();
        let dec = small(r);
        let c = dec.fourier(&spec.u0());
        let rhs: Vec<f64> = (0..10).map(|n| -dec.eigenfunction(n, r + k, t) / dec.eigenvalues()[n]).collect();
        let scale = rhs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for n in 0..10 {
            // Parity makes some coefficients vanish; those are compared against the mode scale.
            prop_assert!((c[n] - rhs[n]).abs() <= 1e-6 * rhs[n].abs().max(scale), "n={} {} vs {}", n, c[n], rhs[n]);
        }
    }

    #[test]
    fn series_norms_match_direct(r in 1usize..=3, kf in 0.0f64..1.0, t in -0.9f64..0.9, log_l in -1.0f64..2.0) {
        let k = ((r as f64 * kf) as usize).min(r - 1);
        let lambda = 10f64.powf(log_l);
        let spec = ProblemSpec::new(r, k, t).unwrap();
        let direct = bvp::solve(&spec, lambda).unwrap();
        let series = series_solution(small(r), &spec.u0(), lambda).unwrap();
        let bound_u = (series.tail_bound_u_sq / direct.norm_u().powi(2)).max(1e-10);
        let bound_ur = (series.tail_bound_ur_sq / direct.norm_ur().powi(2)).max(1e-10);
        prop_assert!((series.norm_u / direct.norm_u() - 1.0).abs() <= bound_u);
        prop_assert!((series.norm_ur / direct.norm_ur() - 1.0).abs() <= bound_ur);
    }
}

#[test]
fn rejects_small_galerkin_space() {
    assert!(decompose(2, 10, 15).is_err());
}
