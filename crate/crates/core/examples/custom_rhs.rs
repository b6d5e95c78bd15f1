//! Any closure works as a right-hand side. Here a damped
//! fractional oscillator in three components.

use fracburst::solver::{solve, SolverConfig, SystemSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rhs = |t: f64, x: &[f64], out: &mut [f64]| {
        out[0] = x[1];
        out[1] = -x[0] - 0.3 * x[1] + x[2];
        out[2] = -0.5 * x[2] + (2.0 * t).sin();
    };
    let spec = SystemSpec::new(0.85, vec![1.0, 0.0, 0.0], rhs)?;
    for corrector in [true, false] {
        let traj = solve(&spec, &SolverConfig::new(20.0, 2000)?.with_corrector(corrector))?;
        let last = traj.state(traj.len() - 1);
        println!(
            "corrector {corrector:>5}: x(20) = [{:.6}, {:.6}, {:.6}]",
            last[0], last[1], last[2]
        );
    }
    Ok(())
}
