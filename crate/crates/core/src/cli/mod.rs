//! The `fracburst` command line.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 configuration or usage error,
//! 3 blow-up theorem not applicable, 4 numerical failure.

pub mod config;
pub mod output;
pub mod reproduce;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::bounds::{big_b, big_b_domain_start, theorem_bound, BoundCertificate, BoundsError};
use crate::detect::{detect, Detection, RefinementPolicy};
use crate::solver::{solve, SolverConfig, SolverError, Status, SystemSpec};

use config::{ConfigError, ScenarioConfig};
use output::{alpha_tag, format_g, plot_script, trajectory_csv, write_file, xy_csv, WriteError};
use reproduce::{compute_rows, format_tables, ReproduceOptions, HORIZON_FACTOR};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    Io = 1,
    Config = 2,
    NotApplicable = 3,
    Numeric = 4,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Write(#[from] WriteError),
    #[error("{0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit(&self) -> Exit {
        match self {
            CliError::Config(ConfigError::Io { .. }) => Exit::Io,
            CliError::Config(_) | CliError::Usage(_) => Exit::Config,
            CliError::Bounds(BoundsError::NotApplicable { .. }) => Exit::NotApplicable,
            CliError::Bounds(BoundsError::Domain(_) | BoundsError::Inadmissible { .. }) => Exit::Config,
            CliError::Bounds(_) => Exit::Numeric,
            CliError::Solver(SolverError::InvalidSpec(_) | SolverError::InvalidConfig(_)) => Exit::Config,
            CliError::Solver(_) => Exit::Numeric,
            CliError::Write(_) => Exit::Io,
            CliError::Numeric(_) => Exit::Numeric,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "fracburst",
    version,
    about = "Blow-up bounds and numerical blow-up times for Caputo power-law systems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the blow-up certificate for every alpha in the scenario.
    Bound { config: PathBuf },
    /// Integrate the scenario and write `<name>_alpha<value>.csv` plus a plot script.
    Solve {
        config: PathBuf,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// Skip the corrector (fractional Euler).
        #[arg(long)]
        predictor_only: bool,
    },
    /// Estimate the numerical blow-up time under grid refinement.
    Detect { config: PathBuf },
    /// Sample B(λ) on (lambda-min, lambda-max] and write a CSV plus plot script.
    BCurve {
        config: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        lambda_min: f64,
        #[arg(long, allow_hyphen_values = true)]
        lambda_max: f64,
        #[arg(long, default_value_t = 400)]
        points: usize,
        /// Use this order instead of the scenario's alpha list.
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Rebuild the three example tables and all trajectory CSVs.
    Reproduce {
        #[arg(long, default_value = "reproduce")]
        out_dir: PathBuf,
    },
}

/// Parses `args` and runs the command, writing to `out` and `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { Exit::Config } else { Exit::Ok };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code as i32;
        }
    };
    match execute(&cli.command, out) {
        Ok(code) => code as i32,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit() as i32
        }
    }
}

fn execute(command: &Command, out: &mut dyn Write) -> Result<Exit, CliError> {
    match command {
        Command::Bound { config } => cmd_bound(&config::load(config)?, out),
        Command::Solve {
            config,
            out_dir,
            predictor_only,
        } => cmd_solve(&config::load(config)?, out_dir, *predictor_only, out),
        Command::Detect { config } => cmd_detect(&config::load(config)?, out),
        Command::BCurve {
            config,
            lambda_min,
            lambda_max,
            points,
            alpha,
            out_dir,
        } => {
            let mut config = config::load(config)?;
            if let Some(a) = alpha {
                if !(*a > 0.0 && *a < 1.0) {
                    return Err(CliError::Usage(format!("--alpha must lie in (0,1), got {a}")));
                }
                config.alphas = vec![*a];
            }
            cmd_b_curve(&config, *lambda_min, *lambda_max, *points, out_dir, out)
        }
        Command::Reproduce { out_dir } => cmd_reproduce(out_dir, out),
    }
}

macro_rules! say {
    ($out:expr, $($arg:tt)*) => {
        // a closed stdout is not worth failing the computation over
        let _ = writeln!($out, $($arg)*);
    };
}

fn g6(v: f64) -> String {
    format_g(v, 6)
}

fn print_certificate(out: &mut dyn Write, alpha: f64, cert: &BoundCertificate) {
    let a = &cert.active;
    say!(out, "alpha = {}", g6(alpha));
    say!(out, "  branch     {}", cert.branch);
    say!(out, "  component  {}", a.target);
    say!(out, "  gamma_j    {}", g6(a.gamma));
    say!(out, "  p_j        {}", g6(a.p));
    say!(out, "  p_tilde_j  {}", g6(a.p_tilde));
    say!(out, "  q_j        {}", g6(a.q));
    say!(out, "  u_j        {}", g6(a.u0));
    say!(out, "  lambda_m   {}", g6(a.scalar.lambda_m));
    say!(out, "  B_min      {}", g6(a.scalar.b_min));
    say!(out, "  tau_ub     {}", g6(cert.tau_ub));
    if let Some(alt) = &cert.alternate {
        say!(out, "  alternate  {} tau_ub {}", alt.target, g6(alt.scalar.tau_ub));
    }
}

pub fn cmd_bound(config: &ScenarioConfig, out: &mut dyn Write) -> Result<Exit, CliError> {
    say!(out, "scenario {}", config.name);
    for &alpha in &config.alphas {
        let cert = theorem_bound(&config.params(alpha))?;
        print_certificate(out, alpha, &cert);
    }
    Ok(Exit::Ok)
}

fn horizon(config: &ScenarioConfig, alpha: f64) -> Result<f64, CliError> {
    if let Some(t) = config.horizon {
        return Ok(t);
    }
    match theorem_bound(&config.params(alpha)) {
        Ok(cert) => Ok(cert.tau_ub * HORIZON_FACTOR),
        Err(BoundsError::NotApplicable { .. }) => Err(CliError::Usage(
            "no blow-up bound applies, so [solver] T must be given".into(),
        )),
        Err(e) => Err(e.into()),
    }
}

fn solver_config(config: &ScenarioConfig, alpha: f64) -> Result<SolverConfig, CliError> {
    Ok(SolverConfig::new(horizon(config, alpha)?, config.steps)?.with_threshold(config.threshold)?)
}

fn describe_status(status: Status, times: &[f64], out: &mut dyn Write) {
    match status {
        Status::Completed => {
            say!(out, "  status     completed");
        }
        Status::Overflowed { step, component } => {
            say!(
                out,
                "  status     overflowed at step {step} (t = {}, largest component x{})",
                g6(times[step]),
                component + 1
            );
        }
        Status::NonFinite { step } => {
            say!(out, "  status     non-finite value at step {step}");
        }
    }
}

pub fn cmd_solve(
    config: &ScenarioConfig,
    out_dir: &Path,
    predictor_only: bool,
    out: &mut dyn Write,
) -> Result<Exit, CliError> {
    let mut exit = Exit::Ok;
    for &alpha in &config.alphas {
        let params = config.params(alpha);
        let spec = SystemSpec::from_params(&params)?;
        let solver = solver_config(config, alpha)?.with_corrector(!predictor_only);
        let traj = solve(&spec, &solver)?;
        let stem = format!("{}_alpha{}", config.name, alpha_tag(alpha));
        let csv = write_file(out_dir, &format!("{stem}.csv"), &trajectory_csv(&traj))?;
        let title = format!("{} alpha={}", config.name, alpha_tag(alpha));
        write_file(
            out_dir,
            &format!("{stem}.plot"),
            &plot_script(&stem, &title, traj.dimension() + 1, &[]),
        )?;
        say!(out, "alpha = {}", g6(alpha));
        say!(out, "  T          {}  N {}", g6(solver.horizon()), solver.steps());
        describe_status(traj.status(), traj.times(), out);
        say!(out, "  csv        {}", csv.display());
        if matches!(traj.status(), Status::NonFinite { .. }) {
            exit = Exit::Numeric;
        }
    }
    Ok(exit)
}

pub fn cmd_detect(config: &ScenarioConfig, out: &mut dyn Write) -> Result<Exit, CliError> {
    for &alpha in &config.alphas {
        let params = config.params(alpha);
        let spec = SystemSpec::from_params(&params)?;
        let base = solver_config(config, alpha)?;
        let policy = RefinementPolicy {
            max_doublings: config.budget,
        };
        let detection = detect(&spec, &base, &policy)?;
        let tau = theorem_bound(&params).ok().map(|c| c.tau_ub);
        say!(out, "alpha = {}", g6(alpha));
        for run in detection.runs() {
            let c = run.crossing.map(g6).unwrap_or_else(|| "none".into());
            say!(out, "  N = {:<8} h = {:<12} crossing {c}", run.steps, g6(run.step_size));
        }
        match &detection {
            Detection::BlowUp(r) => {
                say!(out, "  t_num      {} +/- {}", g6(r.t_num), format_g(r.uncertainty, 3));
                say!(out, "  converged  {}", r.converged);
                if let Some(tau) = tau {
                    say!(out, "  tau_ub     {}  (t_num < tau_ub: {})", g6(tau), r.t_num < tau);
                }
            }
            Detection::NoCrossing { .. } => {
                say!(out, "  no crossing in [0, {}]", g6(base.horizon()));
            }
        }
    }
    Ok(Exit::Ok)
}

pub fn cmd_b_curve(
    config: &ScenarioConfig,
    lambda_min: f64,
    lambda_max: f64,
    points: usize,
    out_dir: &Path,
    out: &mut dyn Write,
) -> Result<Exit, CliError> {
    if !(lambda_max > lambda_min) || !lambda_min.is_finite() || !lambda_max.is_finite() {
        return Err(CliError::Usage(format!(
            "need finite lambda-min < lambda-max, got ({lambda_min}, {lambda_max}]"
        )));
    }
    if points < 2 {
        return Err(CliError::Usage("need at least 2 points".into()));
    }
    let step = (lambda_max - lambda_min) / points as f64;
    for &alpha in &config.alphas {
        let cert = theorem_bound(&config.params(alpha))?;
        let a = &cert.active;
        let start = big_b_domain_start(alpha, a.p_tilde, a.q);
        if lambda_min + step <= start {
            return Err(CliError::Usage(format!(
                "alpha = {}: range ({lambda_min}, {lambda_max}] leaves the domain of B (λ > {})",
                g6(alpha),
                g6(start)
            )));
        }
        let samples = (1..=points)
            .map(|k| {
                let lambda = lambda_min + k as f64 * step;
                big_b(lambda, alpha, a.p_tilde, a.q).map(|b| (lambda, b))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let stem = format!("{}_bcurve_alpha{}", config.name, alpha_tag(alpha));
        let csv = write_file(out_dir, &format!("{stem}.csv"), &xy_csv("lambda", "B", &samples))?;
        let lm = a.scalar.lambda_m;
        let extra = vec![
            format!("set arrow from {lm}, graph 0 to {lm}, graph 1 nohead dt 2"),
            format!("set label 'lambda_m = {}' at {lm}, graph 0.9 offset 1,0", g6(lm)),
            "set xlabel 'lambda'".to_string(),
        ];
        let title = format!("B for {} alpha={}", config.name, alpha_tag(alpha));
        write_file(out_dir, &format!("{stem}.plot"), &plot_script(&stem, &title, 2, &extra))?;
        let (first, last) = (samples[0], samples[samples.len() - 1]);
        say!(out, "alpha = {}", g6(alpha));
        say!(out, "  lambda_m   {}  B_min {}", g6(lm), g6(a.scalar.b_min));
        say!(out, "  B({})  {}", g6(first.0), g6(first.1));
        say!(out, "  B({})  {}", g6(last.0), g6(last.1));
        say!(out, "  csv        {}", csv.display());
    }
    Ok(Exit::Ok)
}

pub fn cmd_reproduce(out_dir: &Path, out: &mut dyn Write) -> Result<Exit, CliError> {
    let threads = reproduce::threads_from_env().map_err(CliError::Usage)?;
    let rows = compute_rows(&ReproduceOptions::default(), threads);
    let tables = format_tables(&rows);
    let _ = write!(out, "{tables}");
    write_file(out_dir, "tables.txt", &tables)?;
    let mut exit = Exit::Ok;
    for row in &rows {
        match &row.trajectory {
            Ok(traj) => {
                let stem = format!("{}_alpha{}", row.example.name, alpha_tag(row.alpha));
                write_file(out_dir, &format!("{stem}.csv"), &trajectory_csv(traj))?;
                let title = format!("{} alpha={}", row.example.name, alpha_tag(row.alpha));
                write_file(out_dir, &format!("{stem}.plot"), &plot_script(&stem, &title, 3, &[]))?;
            }
            Err(_) => exit = Exit::Numeric,
        }
        if row.certificate.is_err() || row.detection.is_err() {
            exit = Exit::Numeric;
        }
    }
    say!(out, "wrote {}", out_dir.join("tables.txt").display());
    Ok(exit)
}
