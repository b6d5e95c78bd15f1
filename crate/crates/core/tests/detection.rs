//! Blow-up detection over the built-in scenarios.

use fracburst::bounds::theorem_bound;
use fracburst::detect::{detect, Detection, DetectionReport, RefinementPolicy};
use fracburst::scenarios::{Example, ALPHAS, EXAMPLE3, EXAMPLES};
use fracburst::solver::{SolverConfig, SystemSpec};

fn run(ex: &Example, alpha: f64, threshold: f64) -> (DetectionReport, f64) {
    let p = ex.params(alpha);
    let tau = theorem_bound(&p).unwrap().tau_ub;
    let spec = SystemSpec::from_params(&p).unwrap();
    let base = SolverConfig::new(tau * 1.05, 4096)
        .unwrap()
        .with_threshold(threshold)
        .unwrap();
    match detect(&spec, &base, &RefinementPolicy::default()).unwrap() {
        Detection::BlowUp(r) => (r, tau),
        other => panic!("example {} α={alpha}: {other:?}", ex.id),
    }
}

#[test]
fn zero_rhs_has_no_crossing() {
    let rhs = |_t: f64, _x: &[f64], out: &mut [f64]| out[0] = 0.0;
    let spec = SystemSpec::new(0.5, vec![1.0], rhs).unwrap();
    let d = detect(&spec, &SolverConfig::new(1.0, 256).unwrap(), &RefinementPolicy::default()).unwrap();
    assert!(matches!(d, Detection::NoCrossing { .. }));
    assert!(d.report().is_none());
}

#[test]
fn third_example_high_order_matches_graph() {
    let (r, _) = run(&EXAMPLE3, 0.9, 1e8);
    assert!((r.t_num - 0.42).abs() <= 0.15 * 0.42, "t_num = {}", r.t_num);
    assert!(r.uncertainty > 0.0 && r.t_num > 0.0);
}

#[test]
fn crossings_stay_below_bound_at_every_level() {
    for ex in EXAMPLES {
        for &alpha in &ALPHAS {
            let (r, tau) = run(&ex, alpha, 1e8);
            for level in &r.runs {
                let c = level.crossing.expect("crossing at every level");
                assert!(c < tau, "example {} α={alpha} N={}: {c} ≥ {tau}", ex.id, level.steps);
            }
        }
    }
}

#[test]
fn refinement_history_is_consistent() {
    for ex in EXAMPLES {
        for &alpha in &ALPHAS {
            let (r, _) = run(&ex, alpha, 1e8);
            let c: Vec<f64> = r.runs.iter().map(|x| x.crossing.unwrap()).collect();
            for (k, w) in c.windows(2).enumerate() {
                let coarse_h = r.runs[k].step_size;
                assert!(
                    w[1] <= w[0] || (w[1] - w[0]).abs() <= coarse_h,
                    "example {} α={alpha}: {c:?}",
                    ex.id
                );
            }
            let d: Vec<f64> = c.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
            for w in d.windows(2) {
                assert!(w[1] <= w[0], "example {} α={alpha}: differences {d:?}", ex.id);
            }
            assert_eq!(r.uncertainty, r.runs.last().unwrap().step_size);
        }
    }
}

#[test]
fn crossing_time_insensitive_to_threshold() {
    let mut failures = Vec::new();
    for ex in EXAMPLES {
        for &alpha in &ALPHAS {
            let (low, _) = run(&ex, alpha, 1e6);
            let (high, _) = run(&ex, alpha, 1e10);
            let h = low.uncertainty.max(high.uncertainty);
            let shift = (high.t_num - low.t_num).abs();
            let line = format!(
                "example {} α={alpha}: t_num {} (1e6) vs {} (1e10), shift {:.1} h",
                ex.id,
                low.t_num,
                high.t_num,
                shift / h
            );
            println!("{line}");
            if shift >= 2.0 * h {
                failures.push(line);
            }
        }
    }
    assert!(failures.is_empty(), "threshold-sensitive scenarios:\n{}", failures.join("\n"));
}
