//! Integrate a power-law system until it leaves the threshold.

use fracburst::bounds::theorem_bound;
use fracburst::scenarios::EXAMPLE3;
use fracburst::solver::{solve, SolverConfig, Status, SystemSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = EXAMPLE3.params(0.6);
    let tau = theorem_bound(&params)?.tau_ub;
    let spec = SystemSpec::from_params(&params)?;
    let config = SolverConfig::new(1.05 * tau, 4096)?;
    let traj = solve(&spec, &config)?;

    let stride = (traj.len() / 12).max(1);
    for k in (0..traj.len()).step_by(stride) {
        let s = traj.state(k);
        println!("t = {:.5}  x = {:.6e}  y = {:.6e}", traj.times()[k], s[0], s[1]);
    }
    match traj.status() {
        Status::Overflowed { step, component } => println!(
            "overflow at step {step} (t = {:.5}), largest component {}",
            traj.times()[step],
            component + 1
        ),
        other => println!("status: {other:?}"),
    }
    println!("crossing time {:?}, bound {tau:.5}", traj.crossing_time());
    Ok(())
}
