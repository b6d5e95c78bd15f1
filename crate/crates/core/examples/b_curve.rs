//! Tabulate B(λ) around its minimizer.

use fracburst::bounds::{big_b, big_b_domain_start, conjugate_index, minimize_big_b};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (alpha, q, p) = (0.4, 1.5, 5.42);
    let p_tilde = conjugate_index(p)?;
    let start = big_b_domain_start(alpha, p_tilde, q);
    let m = minimize_big_b(alpha, p_tilde, q)?;
    println!("domain λ > {start:.6}; minimum B({:.6}) = {:.6}", m.lambda_m, m.b_min);

    let width = 1.5;
    for k in 1..=15 {
        let l = start + width * k as f64 / 15.0;
        let b = big_b(l, alpha, p_tilde, q)?;
        let bar = "#".repeat(((b / m.b_min).ln() * 20.0).min(60.0) as usize);
        println!("{l:>9.4} {b:>12.5} {bar}");
    }
    Ok(())
}
