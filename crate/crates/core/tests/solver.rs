//! Predictor-corrector integration and the L1 derivative against analytic
//! solutions, convergence orders and structural properties.

use fracburst::bounds::theorem_bound;
use fracburst::scenarios::{ALPHAS, EXAMPLE3, EXAMPLES};
use fracburst::solver::{
    l1_caputo, predictor_weight_b, solve, Rhs, SolverConfig, Status, SystemSpec, Trajectory,
};
use fracburst::special_fn::{gamma, mittag_leffler, SeriesPolicy};
use proptest::prelude::*;

fn linear(lambda: f64) -> impl Fn(f64, &[f64], &mut [f64]) + Copy {
    move |_t: f64, x: &[f64], out: &mut [f64]| out[0] = lambda * x[0]
}

fn max_error(traj: &Trajectory, exact: impl Fn(f64) -> f64) -> f64 {
    traj.times()
        .iter()
        .zip(traj.states())
        .map(|(t, s)| (s[0] - exact(*t)).abs())
        .fold(0.0, f64::max)
}

/// `D^α u = -u + g(t)` with exact solution `u = 1 + t²`.
fn manufactured(alpha: f64) -> impl Fn(f64, &[f64], &mut [f64]) + Copy {
    let g = gamma(3.0 - alpha).unwrap();
    move |t: f64, x: &[f64], out: &mut [f64]| {
        out[0] = -x[0] + 2.0 * t.powf(2.0 - alpha) / g + 1.0 + t * t
    }
}

fn manufactured_error(alpha: f64, steps: usize) -> f64 {
    let spec = SystemSpec::new(alpha, vec![1.0], manufactured(alpha)).unwrap();
    let traj = solve(&spec, &SolverConfig::new(1.0, steps).unwrap()).unwrap();
    max_error(&traj, |t| 1.0 + t * t)
}

#[test]
fn zero_rhs_keeps_initial_state() {
    let rhs = |_t: f64, _x: &[f64], out: &mut [f64]| out.fill(0.0);
    for alpha in [0.2, 0.7, 1.0] {
        let spec = SystemSpec::new(alpha, vec![2.5, -1.0, 0.0], rhs).unwrap();
        let traj = solve(&spec, &SolverConfig::new(3.0, 200).unwrap()).unwrap();
        assert_eq!(traj.status(), Status::Completed);
        assert_eq!(traj.len(), 201);
        assert!(traj.states().all(|s| s == [2.5, -1.0, 0.0]));
    }
}

#[test]
fn grid_times_are_multiplicative() {
    let spec = SystemSpec::new(0.5, vec![1.0], linear(-1.0)).unwrap();
    let config = SolverConfig::new(0.7, 1000).unwrap();
    let traj = solve(&spec, &config).unwrap();
    let h = config.step_size();
    for (k, t) in traj.times().iter().enumerate() {
        assert_eq!(t.to_bits(), (k as f64 * h).to_bits());
    }
    assert_eq!(traj.state(0), &[1.0]);
}

#[test]
fn linear_equation_matches_mittag_leffler() {
    // u(t) = E_{1/2}(t^{1/2})
    let policy = SeriesPolicy::default();
    let spec = SystemSpec::new(0.5, vec![1.0], linear(1.0)).unwrap();
    let traj = solve(&spec, &SolverConfig::new(1.0, 4096).unwrap()).unwrap();
    let err = max_error(&traj, |t| mittag_leffler(0.5, 1.0, t.sqrt(), &policy).unwrap());
    assert!(err <= 1e-4, "max error {err:e}");
}

#[test]
fn decaying_linear_equation_matches_mittag_leffler() {
    let policy = SeriesPolicy::default();
    for alpha in [0.5, 0.8] {
        let spec = SystemSpec::new(alpha, vec![1.0], linear(-1.0)).unwrap();
        let traj = solve(&spec, &SolverConfig::new(2.0, 4096).unwrap()).unwrap();
        let err = max_error(&traj, |t| {
            mittag_leffler(alpha, 1.0, -t.powf(alpha), &policy).unwrap()
        });
        assert!(err <= 1e-4, "α={alpha}: max error {err:e}");
    }
}

#[test]
fn classical_limit_is_second_order() {
    let spec = SystemSpec::new(1.0, vec![1.0], linear(1.0)).unwrap();
    let errs: Vec<f64> = [256, 4096]
        .iter()
        .map(|&n| {
            let traj = solve(&spec, &SolverConfig::new(1.0, n).unwrap()).unwrap();
            max_error(&traj, f64::exp)
        })
        .collect();
    let order = (errs[0] / errs[1]).log2() / 4.0;
    assert!(order >= 1.9, "order {order}");
}

#[test]
fn manufactured_solution_order() {
    for alpha in [0.3, 0.5, 0.8] {
        let errs: Vec<f64> = (9..=12).map(|k| manufactured_error(alpha, 1 << k)).collect();
        let bar = (1.0 + alpha).min(2.0) - 0.2;
        for w in errs.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!(order >= bar, "α={alpha}: order {order} < {bar}");
        }
    }
}

#[test]
fn l1_exact_for_affine() {
    let h = 1e-3;
    let samples: Vec<f64> = (0..=1000).map(|k| 3.0 + 2.0 * (k as f64 * h)).collect();
    let d = l1_caputo(&samples, 0.5, h).unwrap();
    let g = gamma(1.5).unwrap();
    for (n, v) in d.iter().enumerate() {
        let t = (n + 1) as f64 * h;
        let exact = 2.0 * t.sqrt() / g;
        assert!((v - exact).abs() <= 1e-12 * exact.max(1.0), "t={t}: {v} vs {exact}");
    }
}

#[test]
fn l1_quadratic_error_is_first_order() {
    let alpha = 0.3;
    let g = gamma(2.7).unwrap();
    let err = |n: usize| {
        let h = 1.0 / n as f64;
        let samples: Vec<f64> = (0..=n).map(|k| (k as f64 * h).powi(2)).collect();
        let d = l1_caputo(&samples, alpha, h).unwrap();
        d.iter()
            .enumerate()
            .map(|(k, v)| {
                let t = (k + 1) as f64 * h;
                (v - 2.0 * t.powf(1.7) / g).abs()
            })
            .fold(0.0, f64::max)
    };
    let e1 = err(1000);
    let e2 = err(2000);
    assert!(e1 <= 1e-3, "{e1:e}");
    assert!(e1 / e2 >= 2.0 - 1e-9, "ratio {}", e1 / e2);
}

#[test]
fn convexity_inequality_holds_on_grid() {
    let n = 1000;
    let h = 1.0 / n as f64;
    let u: Vec<f64> = (0..=n).map(|k| 1.0 + (k as f64 * h).powi(2)).collect();
    for alpha in [0.3, 0.7] {
        let du = l1_caputo(&u, alpha, h).unwrap();
        for gamma_exp in [2.0, 3.0] {
            let ug: Vec<f64> = u.iter().map(|v| v.powf(gamma_exp)).collect();
            let dug = l1_caputo(&ug, alpha, h).unwrap();
            for k in 0..n {
                let un = u[k + 1];
                let rhs = gamma_exp * un.powf(gamma_exp - 1.0) * du[k] + 10.0 * h;
                assert!(dug[k] <= rhs, "α={alpha} γ={gamma_exp} n={}", k + 1);
            }
        }
    }
}

#[test]
fn residual_halves_in_smooth_regime() {
    for alpha in [0.3, 0.5, 0.8] {
        let rhs = manufactured(alpha);
        let spec = SystemSpec::new(alpha, vec![1.0], rhs).unwrap();
        let residual = |n: usize| {
            let traj = solve(&spec, &SolverConfig::new(1.0, n).unwrap()).unwrap();
            let d = l1_caputo(&traj.component(0), alpha, traj.step_size()).unwrap();
            let mut f = [0.0];
            d.iter()
                .enumerate()
                .map(|(k, v)| {
                    rhs.eval(traj.times()[k + 1], traj.state(k + 1), &mut f);
                    (v - f[0]).abs()
                })
                .fold(0.0, f64::max)
        };
        let r: Vec<f64> = [256, 512, 1024].iter().map(|n| residual(*n)).collect();
        assert!(r[0] >= 2.0 * r[1] && r[1] >= 2.0 * r[2], "α={alpha}: {r:?}");
    }
}

#[test]
fn power_law_components_grow_monotonically() {
    for ex in EXAMPLES {
        for &alpha in &ALPHAS {
            let p = ex.params(alpha);
            let tau = theorem_bound(&p).unwrap().tau_ub;
            let spec = SystemSpec::from_params(&p).unwrap();
            let traj = solve(&spec, &SolverConfig::new(tau, 2048).unwrap()).unwrap();
            assert!(matches!(traj.status(), Status::Overflowed { .. }));
            for c in 0..2 {
                let u = traj.component(c);
                assert!(
                    u.windows(2).all(|w| w[1] >= w[0]),
                    "example {} α={alpha} component {c}",
                    ex.id
                );
                assert!(u.iter().all(|v| *v >= u[0]));
            }
        }
    }
}

#[test]
fn overflow_reports_step_and_component() {
    let p = EXAMPLE3.params(0.9);
    let spec = SystemSpec::from_params(&p).unwrap();
    let config = SolverConfig::new(2.0, 1024).unwrap();
    let traj = solve(&spec, &config).unwrap();
    match traj.status() {
        Status::Overflowed { step, component } => {
            assert_eq!(step, traj.len() - 1);
            let last = traj.state(step);
            assert!(last[0] + last[1] > 1e8);
            assert_eq!(last[component].abs(), last[0].abs().max(last[1].abs()));
            let before = traj.state(step - 1);
            assert!(before[0] + before[1] <= 1e8);
        }
        other => panic!("expected overflow, got {other:?}"),
    }
}

#[test]
fn predictor_only_agrees_to_first_order() {
    // before the blow-up of the third example at α = 0.6
    let p = EXAMPLE3.params(0.6);
    let spec = SystemSpec::from_params(&p).unwrap();
    let gap = |n: usize| {
        let config = SolverConfig::new(0.15, n).unwrap();
        let full = solve(&spec, &config).unwrap();
        let euler = solve(&spec, &config.with_corrector(false)).unwrap();
        assert_eq!(full.status(), Status::Completed);
        assert_eq!(euler.status(), Status::Completed);
        full.states()
            .zip(euler.states())
            .map(|(a, b)| (a[0] - b[0]).abs().max((a[1] - b[1]).abs()))
            .fold(0.0, f64::max)
    };
    let g: Vec<f64> = [512, 1024, 2048].iter().map(|n| gap(*n)).collect();
    assert!(g[0] / g[1] >= 1.8 && g[1] / g[2] >= 1.8, "{g:?}");
}

#[test]
fn predictor_only_crossing_within_one_cell() {
    let p = EXAMPLE3.params(0.6);
    let tau = theorem_bound(&p).unwrap().tau_ub;
    let spec = SystemSpec::from_params(&p).unwrap();
    let config = SolverConfig::new(tau * 1.05, 4096).unwrap();
    let full = solve(&spec, &config).unwrap().crossing_time().unwrap();
    let euler = solve(&spec, &config.with_corrector(false))
        .unwrap()
        .crossing_time()
        .unwrap();
    let cells = (full - euler).abs() / config.step_size();
    assert!(
        cells <= 1.0,
        "PECE crosses at {full}, predictor-only at {euler}: {cells:.1} cells apart"
    );
}

#[test]
fn general_rhs_in_three_dimensions() {
    // decoupled components with known solutions
    let rhs = |_t: f64, x: &[f64], out: &mut [f64]| {
        out[0] = 0.0;
        out[1] = -x[1];
        out[2] = 1.0;
    };
    let alpha = 0.7;
    let spec = SystemSpec::new(alpha, vec![1.0, 1.0, 0.0], rhs).unwrap();
    let traj = solve(&spec, &SolverConfig::new(1.0, 2048).unwrap()).unwrap();
    let policy = SeriesPolicy::default();
    let g = gamma(alpha + 1.0).unwrap();
    for (t, s) in traj.times().iter().zip(traj.states()) {
        assert_eq!(s[0], 1.0);
        let e = mittag_leffler(alpha, 1.0, -t.powf(alpha), &policy).unwrap();
        assert!((s[1] - e).abs() <= 1e-4);
        // constant forcing is integrated exactly by the product rule
        assert!((s[2] - t.powf(alpha) / g).abs() <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn predictor_weights_positive_and_telescoping(alpha in 0.05f64..1.0, n in 0usize..300, h in 1e-4f64..1.0) {
        let mut sum = 0.0;
        for j in 0..=n {
            let b = predictor_weight_b(j, n, alpha, h);
            prop_assert!(b > 0.0);
            sum += b;
        }
        let expected = h.powf(alpha) * ((n + 1) as f64).powf(alpha) / alpha;
        prop_assert!(((sum - expected) / expected).abs() <= 1e-12);
    }

    #[test]
    fn corrector_weights_positive(alpha in 0.05f64..1.0, n in 0usize..2000) {
        for j in 0..=n {
            prop_assert!(fracburst::solver::corrector_weight_a(j, n, alpha) > 0.0);
        }
    }

    #[test]
    fn l1_exact_for_random_affine(alpha in 0.05f64..0.95, a in -5.0f64..5.0, b in -5.0f64..5.0, n in 2usize..200) {
        let h = 1.0 / n as f64;
        let u: Vec<f64> = (0..=n).map(|k| a + b * k as f64 * h).collect();
        let d = l1_caputo(&u, alpha, h).unwrap();
        let g = gamma(2.0 - alpha).unwrap();
        for (k, v) in d.iter().enumerate() {
            let t = (k + 1) as f64 * h;
            let exact = b * t.powf(1.0 - alpha) / g;
            prop_assert!((v - exact).abs() <= 1e-11 * (1.0 + exact.abs()));
        }
    }
}
