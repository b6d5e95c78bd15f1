//! Compute every built-in scenario and print the comparison tables.
//!
//! Set FRACBURST_THREADS to pin the worker count.

use fracburst::cli::reproduce::{compute_rows, format_tables, threads_from_env, ReproduceOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let options = ReproduceOptions {
        base_steps: 2048,
        budget: 3,
        ..ReproduceOptions::default()
    };
    let rows = compute_rows(&options, threads_from_env()?);
    print!("{}", format_tables(&rows));
    Ok(())
}
