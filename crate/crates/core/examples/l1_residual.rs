//! L1 approximation of the Caputo derivative, used here to check
//! a computed trajectory against its own equation.

use fracburst::solver::{l1_caputo, solve, SolverConfig, SystemSpec};
use fracburst::special_fn::gamma;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let alpha = 0.5;
    let n = 1000;
    let h = 1.0 / n as f64;

    // D^α t^2 = 2 t^{2-α} / Γ(3-α)
    let samples: Vec<f64> = (0..=n).map(|k| (k as f64 * h).powi(2)).collect();
    let d = l1_caputo(&samples, alpha, h)?;
    let exact = 2.0 / gamma(3.0 - alpha)?;
    println!("D^0.5 t² at t = 1: L1 {:.8}, exact {exact:.8}", d[n - 1]);

    // forcing chosen so that u = 1 + t^2 solves D^α u = -u + g
    let g = move |t: f64| exact * t.powf(2.0 - alpha) + 1.0 + t * t;
    let rhs = move |t: f64, x: &[f64], out: &mut [f64]| out[0] = -x[0] + g(t);
    let spec = SystemSpec::new(alpha, vec![1.0], rhs)?;
    for steps in [250, 500, 1000] {
        let traj = solve(&spec, &SolverConfig::new(1.0, steps)?)?;
        let u = traj.component(0);
        let du = l1_caputo(&u, alpha, traj.step_size())?;
        let residual = du
            .iter()
            .zip(&u[1..])
            .zip(&traj.times()[1..])
            .map(|((d, u), t)| (d + u - g(*t)).abs())
            .fold(0.0, f64::max);
        println!("N = {steps:>5}: max |D^α u + u - g| = {residual:.3e}");
    }
    Ok(())
}
