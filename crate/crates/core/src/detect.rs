//! Numerical blow-up time by threshold crossing under grid refinement.

use crate::solver::{solve, Result, Rhs, SolverConfig, SolverError, Status, SystemSpec};

/// How many times the grid may be doubled after the base run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RefinementPolicy {
    pub max_doublings: u32,
}

impl Default for RefinementPolicy {
    fn default() -> Self {
        Self { max_doublings: 5 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefinementRun {
    pub steps: usize,
    pub step_size: f64,
    /// First grid time where `Σ|x_i|` exceeded the threshold.
    pub crossing: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectionReport {
    pub t_num: f64,
    /// Step size of the finest run.
    pub uncertainty: f64,
    pub runs: Vec<RefinementRun>,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Detection {
    BlowUp(DetectionReport),
    /// No crossing in `[0, T]` on the finest grid tried.
    NoCrossing { runs: Vec<RefinementRun> },
}

impl Detection {
    pub fn report(&self) -> Option<&DetectionReport> {
        match self {
            Detection::BlowUp(r) => Some(r),
            Detection::NoCrossing { .. } => None,
        }
    }

    pub fn runs(&self) -> &[RefinementRun] {
        match self {
            Detection::BlowUp(r) => &r.runs,
            Detection::NoCrossing { runs } => runs,
        }
    }
}

fn crossing<R: Rhs>(spec: &SystemSpec<R>, config: &SolverConfig) -> Result<RefinementRun> {
    let traj = solve(spec, config)?;
    let h = config.step_size();
    // a jump straight to a non-finite state has crossed any threshold
    let crossing = match traj.status() {
        Status::Completed => None,
        Status::Overflowed { step, .. } | Status::NonFinite { step } => Some(step as f64 * h),
    };
    Ok(RefinementRun {
        steps: config.steps(),
        step_size: h,
        crossing,
    })
}

/// Runs the solver at `N, 2N, 4N, …` until two successive crossing times
/// differ by less than the coarser step, or the doubling budget is spent.
///
/// Two successive runs without a crossing end the search early.
pub fn detect<R: Rhs>(
    spec: &SystemSpec<R>,
    base: &SolverConfig,
    policy: &RefinementPolicy,
) -> Result<Detection> {
    let mut runs: Vec<RefinementRun> = Vec::new();
    let mut converged = false;
    for level in 0..=policy.max_doublings {
        let steps = base
            .steps()
            .checked_mul(1usize << level)
            .ok_or_else(|| SolverError::InvalidConfig("refined step count overflows".into()))?;
        let run = crossing(spec, &base.with_steps(steps)?)?;
        let prev = runs.last().copied();
        runs.push(run);
        if let Some(prev) = prev {
            match (prev.crossing, run.crossing) {
                (Some(a), Some(b)) if (a - b).abs() < prev.step_size => {
                    converged = true;
                    break;
                }
                (None, None) => break,
                _ => {}
            }
        }
    }
    let finest = *runs.last().expect("at least one run");
    Ok(match finest.crossing {
        Some(t_num) => Detection::BlowUp(DetectionReport {
            t_num,
            uncertainty: finest.step_size,
            runs,
            converged,
        }),
        None => Detection::NoCrossing { runs },
    })
}
