//! Adams-Bashforth-Moulton predictor-corrector integration of Caputo systems
//! `D^α x = f(t, x)`, `x(0) = x0`, on a uniform grid, plus the L1 discrete
//! Caputo derivative.

use thiserror::Error;

use crate::bounds::PowerLawParams;
use crate::special_fn::{gamma, SpecialFnError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("invalid system: {0}")]
    InvalidSpec(String),
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error(transparent)]
    SpecialFn(#[from] SpecialFnError),
}

pub type Result<T> = std::result::Result<T, SolverError>;

/// Right-hand side `f(t, x)` of the system.
///
/// `out` has the same length as `x`. Failures are signalled by writing a
/// non-finite value.
pub trait Rhs {
    fn eval(&self, t: f64, x: &[f64], out: &mut [f64]);
}

impl<F> Rhs for F
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    fn eval(&self, t: f64, x: &[f64], out: &mut [f64]) {
        self(t, x, out)
    }
}

/// `f_i(t, x) = t^{q_i} Π_k x_k^{p_ik}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerLawRhs {
    q: Vec<f64>,
    /// Row-major `n × n`.
    exponents: Vec<f64>,
}

impl PowerLawRhs {
    pub fn new(q: Vec<f64>, exponents: Vec<Vec<f64>>) -> Result<Self> {
        let n = q.len();
        if n == 0 {
            return Err(SolverError::InvalidSpec("dimension must be at least 1".into()));
        }
        if exponents.len() != n || exponents.iter().any(|r| r.len() != n) {
            return Err(SolverError::InvalidSpec(format!(
                "exponent matrix must be {n}×{n}"
            )));
        }
        if let Some(v) = q.iter().find(|v| !(**v >= 0.0) || !v.is_finite()) {
            return Err(SolverError::InvalidSpec(format!("time exponent {v} must be ≥ 0")));
        }
        let flat: Vec<f64> = exponents.into_iter().flatten().collect();
        if let Some(v) = flat.iter().find(|v| !(**v >= 0.0) || !v.is_finite()) {
            return Err(SolverError::InvalidSpec(format!("state exponent {v} must be ≥ 0")));
        }
        Ok(Self { q, exponents: flat })
    }

    /// Two-component system with `D^α x = t^{q1} x^{p11} y^{p12}` and
    /// `D^α y = t^{q2} y^{p21} x^{p22}`.
    pub fn from_params(p: &PowerLawParams) -> Result<Self> {
        Self::new(
            vec![p.q1, p.q2],
            vec![vec![p.p11, p.p12], vec![p.p22, p.p21]],
        )
    }

    pub fn dimension(&self) -> usize {
        self.q.len()
    }

    pub fn time_exponents(&self) -> &[f64] {
        &self.q
    }

    pub fn exponent(&self, i: usize, k: usize) -> f64 {
        self.exponents[i * self.q.len() + k]
    }
}

impl Rhs for PowerLawRhs {
    fn eval(&self, t: f64, x: &[f64], out: &mut [f64]) {
        let n = self.q.len();
        for (i, o) in out.iter_mut().enumerate() {
            let mut v = t.powf(self.q[i]);
            for (k, &xk) in x.iter().enumerate() {
                let e = self.exponents[i * n + k];
                if e != 0.0 {
                    // powf returns NaN for negative bases with fractional exponents
                    v *= xk.powf(e);
                }
            }
            *o = v;
        }
    }
}

#[derive(Debug, Clone)]
pub struct SystemSpec<R> {
    alpha: f64,
    initial_state: Vec<f64>,
    rhs: R,
}

impl<R: Rhs> SystemSpec<R> {
    pub fn new(alpha: f64, initial_state: Vec<f64>, rhs: R) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(SolverError::InvalidSpec(format!("alpha must lie in (0,1], got {alpha}")));
        }
        if initial_state.is_empty() {
            return Err(SolverError::InvalidSpec("dimension must be at least 1".into()));
        }
        if let Some(v) = initial_state.iter().find(|v| !v.is_finite()) {
            return Err(SolverError::InvalidSpec(format!("initial value {v} is not finite")));
        }
        Ok(Self {
            alpha,
            initial_state,
            rhs,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn dimension(&self) -> usize {
        self.initial_state.len()
    }
    pub fn initial_state(&self) -> &[f64] {
        &self.initial_state
    }
    pub fn rhs(&self) -> &R {
        &self.rhs
    }
}

impl SystemSpec<PowerLawRhs> {
    /// Power-law system; the initial state must be strictly positive.
    pub fn power_law(alpha: f64, initial_state: Vec<f64>, rhs: PowerLawRhs) -> Result<Self> {
        if rhs.dimension() != initial_state.len() {
            return Err(SolverError::InvalidSpec(format!(
                "rhs has dimension {}, initial state has {}",
                rhs.dimension(),
                initial_state.len()
            )));
        }
        if let Some(v) = initial_state.iter().find(|v| !(**v > 0.0)) {
            return Err(SolverError::InvalidSpec(format!(
                "power-law initial values must be positive, got {v}"
            )));
        }
        Self::new(alpha, initial_state, rhs)
    }

    pub fn from_params(p: &PowerLawParams) -> Result<Self> {
        Self::power_law(p.alpha, vec![p.x0, p.y0], PowerLawRhs::from_params(p)?)
    }
}

pub const DEFAULT_OVERFLOW_THRESHOLD: f64 = 1e8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    horizon: f64,
    steps: usize,
    overflow_threshold: f64,
    corrector_enabled: bool,
}

impl SolverConfig {
    pub fn new(horizon: f64, steps: usize) -> Result<Self> {
        if !(horizon > 0.0) || !horizon.is_finite() {
            return Err(SolverError::InvalidConfig(format!("T must be positive, got {horizon}")));
        }
        if steps == 0 {
            return Err(SolverError::InvalidConfig("N must be at least 1".into()));
        }
        Ok(Self {
            horizon,
            steps,
            overflow_threshold: DEFAULT_OVERFLOW_THRESHOLD,
            corrector_enabled: true,
        })
    }

    pub fn with_threshold(mut self, threshold: f64) -> Result<Self> {
        if !(threshold > 0.0) {
            return Err(SolverError::InvalidConfig(format!(
                "threshold must be positive, got {threshold}"
            )));
        }
        self.overflow_threshold = threshold;
        Ok(self)
    }

    /// `false` selects the predictor-only (fractional Euler) scheme.
    pub fn with_corrector(mut self, enabled: bool) -> Self {
        self.corrector_enabled = enabled;
        self
    }

    pub fn with_steps(mut self, steps: usize) -> Result<Self> {
        if steps == 0 {
            return Err(SolverError::InvalidConfig("N must be at least 1".into()));
        }
        self.steps = steps;
        Ok(self)
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }
    pub fn steps(&self) -> usize {
        self.steps
    }
    pub fn step_size(&self) -> f64 {
        self.horizon / self.steps as f64
    }
    pub fn overflow_threshold(&self) -> f64 {
        self.overflow_threshold
    }
    pub fn corrector_enabled(&self) -> bool {
        self.corrector_enabled
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Completed,
    /// `Σ|x_i|` exceeded the threshold at `step`; `component` is the largest.
    Overflowed { step: usize, component: usize },
    NonFinite { step: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    dimension: usize,
    step_size: f64,
    times: Vec<f64>,
    states: Vec<f64>,
    status: Status,
}

impl Trajectory {
    pub fn dimension(&self) -> usize {
        self.dimension
    }
    pub fn step_size(&self) -> f64 {
        self.step_size
    }
    /// Grid times of the stored states.
    pub fn times(&self) -> &[f64] {
        &self.times
    }
    pub fn len(&self) -> usize {
        self.times.len()
    }
    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
    pub fn state(&self, k: usize) -> &[f64] {
        &self.states[k * self.dimension..(k + 1) * self.dimension]
    }
    pub fn states(&self) -> impl Iterator<Item = &[f64]> {
        self.states.chunks_exact(self.dimension)
    }
    /// Values of component `i` along the grid.
    pub fn component(&self, i: usize) -> Vec<f64> {
        self.states().map(|s| s[i]).collect()
    }
    pub fn status(&self) -> Status {
        self.status
    }
    /// Time of the threshold crossing, if the run overflowed.
    pub fn crossing_time(&self) -> Option<f64> {
        match self.status {
            Status::Overflowed { step, .. } => Some(self.times[step]),
            _ => None,
        }
    }
}

/// Corrector weight `a_{j,n+1}` for `0 ≤ j ≤ n`.
pub fn corrector_weight_a(j: usize, n: usize, alpha: f64) -> f64 {
    assert!(j <= n, "corrector weight needs j ≤ n");
    if j == 0 {
        a_first(n, alpha)
    } else {
        a_interior(n - j, alpha)
    }
}

/// Predictor weight `b_{j,n+1}` for `0 ≤ j ≤ n`.
pub fn predictor_weight_b(j: usize, n: usize, alpha: f64, h: f64) -> f64 {
    assert!(j <= n, "predictor weight needs j ≤ n");
    h.powf(alpha) / alpha * b_diff(n - j, alpha)
}

/// `(m+1)^α - m^α`.
fn b_diff(m: usize, alpha: f64) -> f64 {
    if m == 0 {
        return 1.0;
    }
    let m = m as f64;
    m.powf(alpha) * (alpha * (1.0 / m).ln_1p()).exp_m1()
}

/// `(m+2)^{α+1} + m^{α+1} - 2(m+1)^{α+1}`.
fn a_interior(m: usize, alpha: f64) -> f64 {
    let c = alpha + 1.0;
    let mf = m as f64;
    if m < 9 {
        return (mf + 2.0).powf(c) + mf.powf(c) - 2.0 * (mf + 1.0).powf(c);
    }
    // (m+1)^c [(1+u)^c + (1-u)^c - 2] with u = 1/(m+1), even binomial terms
    let u = 1.0 / (mf + 1.0);
    let u2 = u * u;
    let mut coeff = c * (c - 1.0) / 2.0;
    let mut pw = u2;
    let mut sum = 0.0;
    let mut k = 2.0;
    for _ in 0..12 {
        sum += coeff * pw;
        coeff *= (c - k) * (c - k - 1.0) / ((k + 1.0) * (k + 2.0));
        pw *= u2;
        k += 2.0;
    }
    (mf + 1.0).powf(c) * 2.0 * sum
}

/// `n^{α+1} - (n-α)(n+1)^α`.
fn a_first(n: usize, alpha: f64) -> f64 {
    let nf = n as f64;
    if n < 10 {
        return nf.powf(alpha + 1.0) - (nf - alpha) * (nf + 1.0).powf(alpha);
    }
    // n^{α+1} Σ_{k≥2} [α C(α,k-1) - C(α,k)] u^k with u = 1/n
    let u = 1.0 / nf;
    let mut binom_prev = alpha; // C(α,1)
    let mut pw = u;
    let mut sum = 0.0;
    for k in 2..24 {
        let kf = k as f64;
        let binom = binom_prev * (alpha - kf + 1.0) / kf;
        pw *= u;
        sum += (alpha * binom_prev - binom) * pw;
        binom_prev = binom;
    }
    nf.powf(alpha + 1.0) * sum
}

/// Integrates the system on `[0, T]` with `N` steps of the PECE scheme.
///
/// Stops at the first step where `Σ|x_i|` exceeds the overflow threshold
/// (the offending state is kept as the last row) or where any value turns
/// non-finite (that state is dropped).
pub fn solve<R: Rhs>(spec: &SystemSpec<R>, config: &SolverConfig) -> Result<Trajectory> {
    let alpha = spec.alpha;
    let dim = spec.dimension();
    let steps = config.steps;
    let h = config.step_size();
    let threshold = config.overflow_threshold;
    let x0 = &spec.initial_state;

    let h_alpha = h.powf(alpha);
    let pred_scale = h_alpha / (alpha * gamma(alpha)?);
    let corr_scale = h_alpha / gamma(alpha + 2.0)?;

    let b: Vec<f64> = (0..steps).map(|m| b_diff(m, alpha)).collect();
    let a: Vec<f64> = (0..steps).map(|m| a_interior(m, alpha)).collect();

    // history of f per component, contiguous in time
    let mut f_hist: Vec<Vec<f64>> = vec![Vec::with_capacity(steps + 1); dim];
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity((steps + 1) * dim);
    let mut f_buf = vec![0.0; dim];
    let mut pred = vec![0.0; dim];
    let mut corr_hist = vec![0.0; dim];
    let mut next = vec![0.0; dim];

    times.push(0.0);
    states.extend_from_slice(x0);
    spec.rhs.eval(0.0, x0, &mut f_buf);
    let mut status = Status::Completed;
    if f_buf.iter().any(|v| !v.is_finite()) {
        status = Status::NonFinite { step: 0 };
    } else {
        for (hist, &v) in f_hist.iter_mut().zip(&f_buf) {
            hist.push(v);
        }
    }

    if status == Status::Completed {
        for n in 0..steps {
            let t_next = (n + 1) as f64 * h;
            let a0 = a_first(n, alpha);
            let b_rev = &b[..=n];
            let a_rev = &a[..n];
            for i in 0..dim {
                let f = &f_hist[i];
                let mut sp = 0.0;
                for (fj, bw) in f.iter().zip(b_rev.iter().rev()) {
                    sp += fj * bw;
                }
                pred[i] = x0[i] + pred_scale * sp;
                if config.corrector_enabled {
                    let mut sc = a0 * f[0];
                    for (fj, aw) in f[1..].iter().zip(a_rev.iter().rev()) {
                        sc += fj * aw;
                    }
                    corr_hist[i] = sc;
                }
            }
            if config.corrector_enabled {
                spec.rhs.eval(t_next, &pred, &mut f_buf);
                for i in 0..dim {
                    next[i] = x0[i] + corr_scale * (corr_hist[i] + f_buf[i]);
                }
            } else {
                next.copy_from_slice(&pred);
            }

            if next.iter().any(|v| !v.is_finite()) {
                status = Status::NonFinite { step: n + 1 };
                break;
            }
            times.push(t_next);
            states.extend_from_slice(&next);
            let norm: f64 = next.iter().map(|v| v.abs()).sum();
            if norm > threshold {
                let component = next
                    .iter()
                    .enumerate()
                    .max_by(|x, y| x.1.abs().total_cmp(&y.1.abs()))
                    .map(|(k, _)| k)
                    .unwrap_or(0);
                status = Status::Overflowed {
                    step: n + 1,
                    component,
                };
                break;
            }
            spec.rhs.eval(t_next, &next, &mut f_buf);
            if f_buf.iter().any(|v| !v.is_finite()) {
                times.pop();
                states.truncate(states.len() - dim);
                status = Status::NonFinite { step: n + 1 };
                break;
            }
            for (hist, &v) in f_hist.iter_mut().zip(&f_buf) {
                hist.push(v);
            }
        }
    }

    Ok(Trajectory {
        dimension: dim,
        step_size: h,
        times,
        states,
        status,
    })
}

/// L1 discrete Caputo derivative of samples `u_0, …, u_M` on a grid of
/// spacing `h`.
///
/// Entry `n - 1` of the result approximates the derivative at `t_n`,
/// `n = 1..=M`.
pub fn l1_caputo(samples: &[f64], alpha: f64, h: f64) -> Result<Vec<f64>> {
    if samples.len() < 2 {
        return Err(SolverError::Degenerate(format!(
            "L1 derivative needs at least 2 samples, got {}",
            samples.len()
        )));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(SolverError::Degenerate(format!("alpha must lie in (0,1), got {alpha}")));
    }
    if !(h > 0.0) {
        return Err(SolverError::Degenerate(format!("h must be positive, got {h}")));
    }
    let m = samples.len() - 1;
    let beta = 1.0 - alpha;
    // w_k = (k+1)^{1-α} - k^{1-α}
    let w: Vec<f64> = (0..m)
        .map(|k| {
            let kf = k as f64;
            (kf + 1.0).powf(beta) - kf.powf(beta)
        })
        .collect();
    let diffs: Vec<f64> = samples.windows(2).map(|p| p[1] - p[0]).collect();
    let scale = h.powf(-alpha) / gamma(2.0 - alpha)?;
    Ok((1..=m)
        .map(|n| {
            let s: f64 = diffs[..n]
                .iter()
                .zip(w[..n].iter().rev())
                .map(|(d, wk)| d * wk)
                .sum();
            scale * s
        })
        .collect())
}
