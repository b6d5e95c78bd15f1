//! Mittag-Leffler values, the e_α kernel and the gamma function.

use fracburst::special_fn::{e_alpha_kernel, gamma, ln_gamma, mittag_leffler, SeriesPolicy};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let policy = SeriesPolicy::default();

    println!("{:>6} {:>14} {:>14} {:>14}", "t", "E_0.5(-t)", "E_0.9(-t)", "exp(-t)");
    for t in [0.0, 0.5, 1.0, 2.0, 5.0, 10.0] {
        println!(
            "{t:>6} {:>14.10} {:>14.10} {:>14.10}",
            mittag_leffler(0.5, 1.0, -t, &policy)?,
            mittag_leffler(0.9, 1.0, -t, &policy)?,
            (-t).exp()
        );
    }

    // t^{α-1} E_{α,α}(λ t^α) with a shifted origin
    let k = e_alpha_kernel(0.6, -1.5, 2.0, 0.5, &policy)?;
    println!("e_0.6(-1.5; t = 2, s = 0.5) = {k:.10}");

    println!("Γ(0.5)^2 = {:.15}  (π = {:.15})", gamma(0.5)?.powi(2), std::f64::consts::PI);
    println!("ln Γ(200) = {:.10}", ln_gamma(200.0)?);

    let tight = SeriesPolicy::new(1e-15, 2000)?;
    println!("E_0.3(2) = {:.12}", mittag_leffler(0.3, 1.0, 2.0, &tight)?);
    Ok(())
}
