//! The twelve built-in scenario rows: bound, detected blow-up time, tables.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::bounds::{theorem_bound, BoundCertificate, BoundsError, PowerLawParams};
use crate::detect::{detect, Detection, RefinementPolicy};
use crate::scenarios::{is_inconsistent_row, Example, ALPHAS, EXAMPLE1_ALPHA01_CANDIDATES, EXAMPLES};
use crate::solver::{solve, SolverConfig, SolverError, SystemSpec, Trajectory, DEFAULT_OVERFLOW_THRESHOLD};

use super::output::format_g;

/// Horizon used when none is configured: slightly past the bound, so a
/// crossing after τ_ub would be visible.
pub const HORIZON_FACTOR: f64 = 1.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReproduceOptions {
    pub base_steps: usize,
    pub budget: u32,
    pub threshold: f64,
}

impl Default for ReproduceOptions {
    fn default() -> Self {
        Self {
            base_steps: 4096,
            budget: 5,
            threshold: DEFAULT_OVERFLOW_THRESHOLD,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ScenarioRow {
    pub example: Example,
    pub alpha: f64,
    pub certificate: Result<BoundCertificate, BoundsError>,
    pub detection: Result<Detection, SolverError>,
    /// Base-grid trajectory, the one written to CSV.
    pub trajectory: Result<Trajectory, SolverError>,
}

impl ScenarioRow {
    pub fn params(&self) -> PowerLawParams {
        self.example.params(self.alpha)
    }

    fn alpha_index(&self) -> usize {
        ALPHAS.iter().position(|a| *a == self.alpha).unwrap_or(0)
    }

    pub fn reported_t_num(&self) -> f64 {
        self.example.reported_t_num[self.alpha_index()]
    }

    pub fn reported_tau(&self) -> f64 {
        self.example.reported_tau[self.alpha_index()]
    }

    pub fn reported_lambda(&self) -> Option<f64> {
        self.example.reported_lambda.map(|l| l[self.alpha_index()])
    }

    pub fn tau_ub(&self) -> Option<f64> {
        self.certificate.as_ref().ok().map(|c| c.tau_ub)
    }

    pub fn t_num(&self) -> Option<f64> {
        self.detection.as_ref().ok()?.report().map(|r| r.t_num)
    }

    /// `t_num < τ_ub` at every refinement level; `None` without a bound.
    pub fn sound(&self) -> Option<bool> {
        let tau = self.tau_ub()?;
        let det = self.detection.as_ref().ok()?;
        Some(det.runs().iter().all(|r| r.crossing.is_none_or(|c| c < tau)))
    }

    pub fn inconsistent(&self) -> bool {
        is_inconsistent_row(self.example.id, self.alpha)
    }
}

/// Bound, detection and base trajectory for one scenario.
pub fn compute_row(example: &Example, alpha: f64, options: &ReproduceOptions) -> ScenarioRow {
    let params = example.params(alpha);
    let certificate = theorem_bound(&params);
    let horizon = certificate.as_ref().map(|c| c.tau_ub * HORIZON_FACTOR);
    let prepared = match horizon {
        Ok(t) => SystemSpec::from_params(&params).and_then(|spec| {
            let config = SolverConfig::new(t, options.base_steps)?.with_threshold(options.threshold)?;
            Ok((spec, config))
        }),
        Err(ref e) => Err(SolverError::InvalidConfig(format!("no horizon: {e}"))),
    };
    let (detection, trajectory) = match prepared {
        Ok((spec, config)) => (
            detect(
                &spec,
                &config,
                &RefinementPolicy {
                    max_doublings: options.budget,
                },
            ),
            solve(&spec, &config),
        ),
        Err(e) => (Err(e.clone()), Err(e)),
    };
    ScenarioRow {
        example: *example,
        alpha,
        certificate,
        detection,
        trajectory,
    }
}

/// All twelve rows in example-major, α-minor order.
///
/// Rows run in parallel; `threads = None` uses the global pool.
pub fn compute_rows(options: &ReproduceOptions, threads: Option<usize>) -> Vec<ScenarioRow> {
    let jobs: Vec<(Example, f64)> = EXAMPLES
        .iter()
        .flat_map(|e| ALPHAS.iter().map(move |a| (*e, *a)))
        .collect();
    let work = || {
        jobs.par_iter()
            .map(|(e, a)| compute_row(e, *a, options))
            .collect::<Vec<_>>()
    };
    match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map(|pool| pool.install(work))
            .unwrap_or_else(|_| work()),
        None => work(),
    }
}

fn fmt6(v: f64) -> String {
    format_g(v, 6)
}

/// Plain-text tables, one per example.
pub fn format_tables(rows: &[ScenarioRow]) -> String {
    let mut out = String::new();
    for example in EXAMPLES {
        let ex_rows: Vec<&ScenarioRow> = rows.iter().filter(|r| r.example.id == example.id).collect();
        if ex_rows.is_empty() {
            continue;
        }
        writeln!(out, "Example {}", example.id).unwrap();
        let with_lambda = example.reported_lambda.is_some();
        write!(out, "{:<6}", "alpha").unwrap();
        if with_lambda {
            write!(out, " {:>12}", "lambda_m").unwrap();
        }
        writeln!(
            out,
            " {:>12} {:>11} {:>12} {:>15} {:>13}  t_num<tau_ub",
            "t_num", "+/- h", "tau_ub", "published t_num", "published tau"
        )
        .unwrap();
        for row in ex_rows {
            write!(out, "{:<6}", fmt6(row.alpha)).unwrap();
            if with_lambda {
                let l = row
                    .certificate
                    .as_ref()
                    .map(|c| fmt6(c.lambda_m()))
                    .unwrap_or_else(|_| "-".into());
                write!(out, " {l:>12}").unwrap();
            }
            let (t_num, h) = match &row.detection {
                Ok(Detection::BlowUp(r)) => (fmt6(r.t_num), format_g(r.uncertainty, 3)),
                Ok(Detection::NoCrossing { .. }) => ("none".into(), "-".into()),
                Err(_) => ("error".into(), "-".into()),
            };
            let tau = row.tau_ub().map(fmt6).unwrap_or_else(|| "n/a".into());
            let published_t = if row.inconsistent() {
                format!(
                    "{}|{}",
                    EXAMPLE1_ALPHA01_CANDIDATES[0], EXAMPLE1_ALPHA01_CANDIDATES[1]
                )
            } else {
                fmt6(row.reported_t_num())
            };
            let tick = match row.sound() {
                Some(true) => "\u{2713}",
                Some(false) => "\u{2717}",
                None => "-",
            };
            writeln!(
                out,
                " {t_num:>12} {h:>11} {tau:>12} {published_t:>15} {:>13}  {tick}",
                fmt6(row.reported_tau())
            )
            .unwrap();
        }
        for row in rows.iter().filter(|r| r.example.id == example.id) {
            if row.inconsistent() {
                let detected = row.t_num();
                write!(
                    out,
                    "  note: alpha={} published t_num is inconsistent (table {}, figure {})",
                    fmt6(row.alpha),
                    EXAMPLE1_ALPHA01_CANDIDATES[0],
                    EXAMPLE1_ALPHA01_CANDIDATES[1]
                )
                .unwrap();
                if let Some(t) = detected {
                    let devs: Vec<String> = EXAMPLE1_ALPHA01_CANDIDATES
                        .iter()
                        .map(|c| format!("{:+.1}% vs {c}", 100.0 * (t - c) / c))
                        .collect();
                    write!(out, "; detected {} ({})", fmt6(t), devs.join(", ")).unwrap();
                }
                out.push('\n');
            }
            if let Err(e) = &row.certificate {
                writeln!(out, "  error: alpha={}: {e}", fmt6(row.alpha)).unwrap();
            }
            if let Err(e) = &row.detection {
                writeln!(out, "  error: alpha={}: {e}", fmt6(row.alpha)).unwrap();
            }
        }
        out.push('\n');
    }
    out
}

/// Reads `FRACBURST_THREADS`; `Ok(None)` when unset.
pub fn threads_from_env() -> Result<Option<usize>, String> {
    match std::env::var("FRACBURST_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(format!("FRACBURST_THREADS must be a positive integer, got `{v}`")),
        },
        Err(_) => Ok(None),
    }
}
