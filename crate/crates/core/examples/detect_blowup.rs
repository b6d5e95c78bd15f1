//! Refine the step size until the detected blow-up time settles.

use fracburst::bounds::theorem_bound;
use fracburst::detect::{detect, Detection, RefinementPolicy};
use fracburst::scenarios::EXAMPLE1;
use fracburst::solver::{SolverConfig, SystemSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = EXAMPLE1.params(0.9);
    let tau = theorem_bound(&params)?.tau_ub;
    let spec = SystemSpec::from_params(&params)?;
    let base = SolverConfig::new(1.05 * tau, 1024)?;

    match detect(&spec, &base, &RefinementPolicy { max_doublings: 4 })? {
        Detection::BlowUp(report) => {
            for run in &report.runs {
                println!("N = {:>6}  h = {:.3e}  crossing {:?}", run.steps, run.step_size, run.crossing);
            }
            println!(
                "t_num = {:.5} ± {:.1e} (converged: {}), τ_ub = {tau:.5}",
                report.t_num, report.uncertainty, report.converged
            );
        }
        Detection::NoCrossing { runs } => println!("no crossing in {} runs", runs.len()),
    }
    Ok(())
}
