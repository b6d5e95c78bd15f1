//! Upper bound on the blow-up time of a scalar problem
//! `D^α u = t^q u^p`, `u(0) = u0`.

use fracburst::bounds::{big_b, minimize_big_b, tau_bound, ScalarBoundProblem};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let problem = ScalarBoundProblem::new(0.6, 1.2, 1.5, 5.42)?;
    let result = tau_bound(&problem)?;
    println!("p̃ = {:.6}", problem.p_tilde());
    println!("λ_m = {:.6}, B(λ_m) = {:.6}", result.lambda_m, result.b_min);
    println!("τ_ub = {:.6}", result.tau_ub);

    let m = minimize_big_b(problem.alpha(), problem.p_tilde(), problem.q())?;
    for dl in [-0.1, -0.05, 0.0, 0.1, 0.2] {
        let l = m.lambda_m + dl;
        println!("  B({l:+.4}) = {:.6}", big_b(l, problem.alpha(), problem.p_tilde(), problem.q())?);
    }

    for u0 in [0.5, 1.0, 2.0, 4.0] {
        let p = ScalarBoundProblem::new(0.6, u0, 1.5, 5.42)?;
        println!("u0 = {u0}: τ_ub = {:.6}", tau_bound(&p)?.tau_ub);
    }
    Ok(())
}
