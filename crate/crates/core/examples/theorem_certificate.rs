//! Classify a two-component power-law system and print its bound certificate.

use fracburst::bounds::{theorem_bound, BoundsError, PowerLawParams};
use fracburst::scenarios::{ALPHAS, EXAMPLES};

fn main() {
    for ex in EXAMPLES {
        for &alpha in &ALPHAS {
            match theorem_bound(&ex.params(alpha)) {
                Ok(c) => println!(
                    "{} α={alpha}: {} target {} γ={:.4} p̃={:.5} τ_ub={:.6}",
                    ex.name, c.branch, c.active.target, c.gamma(), c.p_tilde(), c.tau_ub
                ),
                Err(e) => println!("{} α={alpha}: {e}", ex.name),
            }
        }
    }

    let weak = PowerLawParams {
        alpha: 0.5,
        q1: 0.0,
        q2: 0.0,
        p11: 1.0,
        p12: 1.0,
        p21: 1.0,
        p22: 1.0,
        x0: 1.0,
        y0: 1.0,
    };
    if let Err(BoundsError::NotApplicable { violated }) = theorem_bound(&weak) {
        println!("all-ones system:");
        for v in violated {
            println!("  {v}");
        }
    }
}
