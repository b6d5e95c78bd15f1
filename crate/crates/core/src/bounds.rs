//! Upper bounds for finite-time blow-up.
//!
//! A non-negative solution of `D^α u ≥ K t^q u^p` with `u(0) = u0 > 0` blows
//! up no later than
//!
//! ```text
//! τ(u0, q, p) = [ Γ(q(1-p̃)+1) / (u0^p Γ(q+1)) · B(λ_m) ]^{1/(p̃(α+q))}
//! ```
//!
//! where `p̃ = p/(p-1)` and `B(λ_m)` is the minimum over `λ > αp̃ - 1` of
//!
//! ```text
//! B(λ) = Γ(λ+1)^{p̃-1} Γ(λ+1-αp̃) Γ(q+λ+2) / ( Γ(λ+1-α)^{p̃} Γ(q+λ+2-p̃(q+α)) ).
//! ```
//!
//! [`theorem_bound`] reduces the two-component power-law system to that
//! scalar inequality whenever one of its sufficient conditions holds.

use std::fmt;

use thiserror::Error;

use crate::special_fn::{ln_gamma, SpecialFnError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundsError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("B({lambda}) overflows f64 (log value {log_value})")]
    Overflow { lambda: f64, log_value: f64 },
    #[error("inadmissible exponents: q + 1 = {lhs} must exceed q·p̃ = {rhs}")]
    Inadmissible { lhs: f64, rhs: f64 },
    #[error("no interior minimum of B found within (λ0, λ0 + 1e6], λ0 = {boundary}")]
    Bracketing { boundary: f64 },
    #[error("blow-up theorem not applicable; violated conditions: {}", list_conditions(.violated))]
    NotApplicable { violated: Vec<ViolatedCondition> },
    #[error(transparent)]
    SpecialFn(#[from] SpecialFnError),
}

fn list_conditions(v: &[ViolatedCondition]) -> String {
    v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join("; ")
}

pub type Result<T> = std::result::Result<T, BoundsError>;

/// Hölder conjugate `p/(p-1)` of `p > 1`.
pub fn conjugate_index(p: f64) -> Result<f64> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(BoundsError::Domain(format!(
            "conjugate index needs finite p > 1, got {p}"
        )));
    }
    Ok(p / (p - 1.0))
}

/// Left end of the domain of B: every gamma argument is positive above it.
pub fn big_b_domain_start(alpha: f64, p_tilde: f64, q: f64) -> f64 {
    (alpha * p_tilde - 1.0).max(p_tilde * (q + alpha) - q - 2.0)
}

/// ln B(λ).
pub fn ln_big_b(lambda: f64, alpha: f64, p_tilde: f64, q: f64) -> Result<f64> {
    let args = [
        lambda + 1.0,
        lambda + 1.0 - alpha * p_tilde,
        q + lambda + 2.0,
        lambda + 1.0 - alpha,
        q + lambda + 2.0 - p_tilde * (q + alpha),
    ];
    if let Some(bad) = args.iter().find(|a| !(**a > 0.0)) {
        return Err(BoundsError::Domain(format!(
            "B(λ={lambda}) needs positive gamma arguments, got {bad} \
             (λ must exceed {})",
            big_b_domain_start(alpha, p_tilde, q)
        )));
    }
    Ok((p_tilde - 1.0) * ln_gamma(args[0])? + ln_gamma(args[1])? + ln_gamma(args[2])?
        - p_tilde * ln_gamma(args[3])?
        - ln_gamma(args[4])?)
}

/// B(λ), evaluated in log space and exponentiated once.
pub fn big_b(lambda: f64, alpha: f64, p_tilde: f64, q: f64) -> Result<f64> {
    let log_value = ln_big_b(lambda, alpha, p_tilde, q)?;
    let value = log_value.exp();
    if !value.is_finite() {
        return Err(BoundsError::Overflow { lambda, log_value });
    }
    Ok(value)
}

/// Minimizer of B on its domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BMinimum {
    pub lambda_m: f64,
    pub b_min: f64,
    /// Bracket handed to the golden-section search.
    pub bracket: (f64, f64),
}

const GOLDEN: f64 = 0.618_033_988_749_894_9;
const BRACKET_TOL: f64 = 1e-10;
const PROBE_STEP: f64 = 1e-6;
const MAX_BRACKET_SPAN: f64 = 1e6;

fn golden_section<F>(f: &F, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut c = b - GOLDEN * (b - a);
    let mut d = a + GOLDEN * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - GOLDEN * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + GOLDEN * (b - a);
            fd = f(d)?;
        }
        // interval stops shrinking once it hits the f64 grid
        if c >= d {
            break;
        }
    }
    Ok(if fc < fd { (c, fc) } else { (d, fd) })
}

/// Grows a bracket geometrically away from the domain boundary until ln B
/// turns upward. Returns `(a, b, c)` with `f(b) <= f(a)` and `f(b) < f(c)`.
fn bracket_minimum<F>(f: &F, boundary: f64) -> Result<(f64, f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let scale = boundary.abs().max(1.0);
    let left = boundary + 1e-12 * scale;
    let f_left = f(left)?;
    let mut step = 1e-3 * scale;
    // B blows up at the boundary; make sure the first probe sits below it
    let mut f_b = f(boundary + step)?;
    while f_b >= f_left {
        step *= 0.1;
        if step < 1e-11 * scale {
            return Err(BoundsError::Bracketing { boundary });
        }
        f_b = f(boundary + step)?;
    }
    let mut a = left;
    let mut b = boundary + step;
    loop {
        let c = boundary + 2.0 * (b - boundary);
        if c - boundary > MAX_BRACKET_SPAN {
            return Err(BoundsError::Bracketing { boundary });
        }
        let f_c = f(c)?;
        if f_c > f_b {
            return Ok((a, b, c));
        }
        a = b;
        b = c;
        f_b = f_c;
    }
}

/// Minimizes B over `λ > max(αp̃ - 1, p̃(q+α) - q - 2)`.
///
/// Golden-section search on ln B, followed by a 100-point scan of the bracket
/// and a two-sided probe at ±1e-6 around the result.
pub fn minimize_big_b(alpha: f64, p_tilde: f64, q: f64) -> Result<BMinimum> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(BoundsError::Domain(format!("alpha must lie in (0,1), got {alpha}")));
    }
    if !(p_tilde > 1.0) || !(q >= 0.0) {
        return Err(BoundsError::Domain(format!(
            "need p̃ > 1 and q ≥ 0, got p̃ = {p_tilde}, q = {q}"
        )));
    }
    if !(q + 1.0 > q * p_tilde) {
        return Err(BoundsError::Inadmissible {
            lhs: q + 1.0,
            rhs: q * p_tilde,
        });
    }
    let f = |lambda: f64| ln_big_b(lambda, alpha, p_tilde, q);
    let boundary = big_b_domain_start(alpha, p_tilde, q);
    let (lo, _, hi) = bracket_minimum(&f, boundary)?;
    let (mut lambda_m, mut f_m) = golden_section(&f, lo, hi, BRACKET_TOL)?;

    // coarse scan of the bracket; re-polish around any sample that beats λ_m
    let samples = 100;
    let dx = (hi - lo) / samples as f64;
    for i in 1..samples {
        let x = lo + i as f64 * dx;
        let fx = f(x)?;
        if fx < f_m {
            let (x2, f2) = golden_section(&f, x - dx, x + dx, BRACKET_TOL)?;
            if f2 < f_m {
                lambda_m = x2;
                f_m = f2;
            }
        }
    }

    let mut b_min = big_b(lambda_m, alpha, p_tilde, q)?;
    for _ in 0..100 {
        let left = big_b(lambda_m - PROBE_STEP, alpha, p_tilde, q)?;
        let right = big_b(lambda_m + PROBE_STEP, alpha, p_tilde, q)?;
        if left < b_min {
            lambda_m -= PROBE_STEP;
            b_min = left;
        } else if right < b_min {
            lambda_m += PROBE_STEP;
            b_min = right;
        } else {
            break;
        }
    }
    Ok(BMinimum {
        lambda_m,
        b_min,
        bracket: (lo, hi),
    })
}

/// Parameters of the scalar inequality `D^α u ≥ K t^q u^p`, `u(0) = u0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarBoundProblem {
    alpha: f64,
    u0: f64,
    q: f64,
    p: f64,
}

impl ScalarBoundProblem {
    /// `p = 1` is rejected: its conjugate index is infinite.
    pub fn new(alpha: f64, u0: f64, q: f64, p: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(BoundsError::Domain(format!("alpha must lie in (0,1), got {alpha}")));
        }
        if !(u0 > 0.0) || !u0.is_finite() {
            return Err(BoundsError::Domain(format!("u0 must be positive, got {u0}")));
        }
        if !(q >= 0.0) || !q.is_finite() {
            return Err(BoundsError::Domain(format!("q must be ≥ 0, got {q}")));
        }
        let p_tilde = conjugate_index(p)?;
        if !(q + 1.0 > q * p_tilde) {
            return Err(BoundsError::Inadmissible {
                lhs: q + 1.0,
                rhs: q * p_tilde,
            });
        }
        Ok(Self { alpha, u0, q, p })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn u0(&self) -> f64 {
        self.u0
    }
    pub fn q(&self) -> f64 {
        self.q
    }
    pub fn p(&self) -> f64 {
        self.p
    }
    pub fn p_tilde(&self) -> f64 {
        self.p / (self.p - 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarBoundResult {
    pub tau_ub: f64,
    pub lambda_m: f64,
    pub b_min: f64,
    pub bracket: (f64, f64),
}

/// Blow-up time bound τ(u0, q, p).
pub fn tau_bound(problem: &ScalarBoundProblem) -> Result<ScalarBoundResult> {
    let ScalarBoundProblem { alpha, u0, q, p } = *problem;
    let p_tilde = problem.p_tilde();
    let min = minimize_big_b(alpha, p_tilde, q)?;
    let ln_b = ln_big_b(min.lambda_m, alpha, p_tilde, q)?;
    let ln_tau = (ln_gamma(q * (1.0 - p_tilde) + 1.0)? - ln_gamma(q + 1.0)? - p * u0.ln() + ln_b)
        / (p_tilde * (alpha + q));
    let tau_ub = ln_tau.exp();
    if !(tau_ub > 0.0 && tau_ub.is_finite()) {
        return Err(BoundsError::Domain(format!(
            "bound is not a positive finite number (ln τ = {ln_tau})"
        )));
    }
    Ok(ScalarBoundResult {
        tau_ub,
        lambda_m: min.lambda_m,
        b_min: min.b_min,
        bracket: min.bracket,
    })
}

/// Parameters of the two-component system
///
/// ```text
/// D^α x = t^{q1} x^{p11} y^{p12}
/// D^α y = t^{q2} y^{p21} x^{p22}
/// ```
///
/// Note the second row: `p21` is the exponent of `y` and `p22` that of `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawParams {
    pub alpha: f64,
    pub q1: f64,
    pub q2: f64,
    pub p11: f64,
    pub p12: f64,
    pub p21: f64,
    pub p22: f64,
    pub x0: f64,
    pub y0: f64,
}

impl PowerLawParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(BoundsError::Domain(format!(
                "alpha must lie in (0,1), got {}",
                self.alpha
            )));
        }
        let exps = [
            ("q1", self.q1),
            ("q2", self.q2),
            ("p11", self.p11),
            ("p12", self.p12),
            ("p21", self.p21),
            ("p22", self.p22),
        ];
        for (name, v) in exps {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(BoundsError::Domain(format!("{name} must be ≥ 0, got {v}")));
            }
        }
        if !(self.x0 > 0.0 && self.y0 > 0.0) || !self.x0.is_finite() || !self.y0.is_finite() {
            return Err(BoundsError::Domain(format!(
                "initial values must be positive, got x0 = {}, y0 = {}",
                self.x0, self.y0
            )));
        }
        Ok(())
    }

    pub fn with_alpha(self, alpha: f64) -> Self {
        Self { alpha, ..self }
    }
}

/// Component whose scalar inequality carries the bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Component {
    X,
    Y,
}

impl Component {
    pub fn index(self) -> usize {
        match self {
            Component::X => 1,
            Component::Y => 2,
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Component::X => "x",
            Component::Y => "y",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `q1 ≠ q2`; `lower` has the smaller time exponent, `target` the other.
    DistinctQ { lower: Component, target: Component },
    /// `q1 = q2`, bound through x.
    EqualQBranch1,
    /// `q1 = q2`, bound through y.
    EqualQBranch2,
    /// `q1 = q2`, both apply; the smaller bound is reported.
    EqualQBoth,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Branch::DistinctQ { lower, target } => write!(
                f,
                "DISTINCT_Q (i={}, j={})",
                lower.index(),
                target.index()
            ),
            Branch::EqualQBranch1 => f.write_str("EQUAL_Q_BRANCH1"),
            Branch::EqualQBranch2 => f.write_str("EQUAL_Q_BRANCH2"),
            Branch::EqualQBoth => f.write_str("EQUAL_Q_BOTH"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ViolatedCondition {
    pub target: Component,
    pub condition: String,
}

impl fmt::Display for ViolatedCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[j={}] {}", self.target.index(), self.condition)
    }
}

/// One reduction of the system to a scalar inequality for `target`.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchBound {
    pub target: Component,
    pub gamma: f64,
    pub p: f64,
    pub p_tilde: f64,
    pub q: f64,
    pub u0: f64,
    pub scalar: ScalarBoundResult,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundCertificate {
    pub branch: Branch,
    /// Branch whose bound is reported (the smaller one for `EqualQBoth`).
    pub active: BranchBound,
    /// The other branch when both apply.
    pub alternate: Option<BranchBound>,
    pub tau_ub: f64,
}

impl BoundCertificate {
    pub fn gamma(&self) -> f64 {
        self.active.gamma
    }
    pub fn p(&self) -> f64 {
        self.active.p
    }
    pub fn p_tilde(&self) -> f64 {
        self.active.p_tilde
    }
    pub fn lambda_m(&self) -> f64 {
        self.active.scalar.lambda_m
    }
}

/// Exponents of the target equation and of the other one, in the roles the
/// comparison argument uses them.
struct Roles {
    target: Component,
    target_self: f64,
    target_cross: f64,
    other_self: f64,
    other_cross: f64,
    q: f64,
    u0: f64,
}

fn roles(params: &PowerLawParams, target: Component) -> Roles {
    // D^α x: self p11, cross p12; D^α y: self p21, cross p22
    match target {
        Component::Y => Roles {
            target,
            target_self: params.p21,
            target_cross: params.p22,
            other_self: params.p11,
            other_cross: params.p12,
            q: params.q2,
            u0: params.y0,
        },
        Component::X => Roles {
            target,
            target_self: params.p11,
            target_cross: params.p12,
            other_self: params.p21,
            other_cross: params.p22,
            q: params.q1,
            u0: params.x0,
        },
    }
}

fn exponent_name(target: Component, role: &str) -> &'static str {
    match (target, role) {
        (Component::Y, "target_self") => "p21",
        (Component::Y, "target_cross") => "p22",
        (Component::Y, "other_self") => "p11",
        (Component::Y, "other_cross") => "p12",
        (Component::X, "target_self") => "p11",
        (Component::X, "target_cross") => "p12",
        (Component::X, "other_self") => "p21",
        (Component::X, "other_cross") => "p22",
        _ => unreachable!(),
    }
}

/// Checks the sufficient conditions for bounding through `target`.
///
/// For the y-target: `p12 ≥ 3 + p21`, `p11 + 1 ≥ p22`, `q2 + 1 > q2·p̃2` with
/// `γ2 = (p12 + 1 - p21)/2` and `p2 = p21 + p22·γ2`; the x-target is the
/// mirror image under x ↔ y.
fn try_branch(
    params: &PowerLawParams,
    target: Component,
) -> Result<std::result::Result<BranchBound, Vec<ViolatedCondition>>> {
    let r = roles(params, target);
    let name = |role| exponent_name(target, role);
    let j = target.index();
    let mut violated = Vec::new();
    let mut fail = |condition: String| {
        violated.push(ViolatedCondition { target, condition });
    };

    if !(r.other_cross >= 3.0 + r.target_self) {
        fail(format!(
            "{} ≥ 3 + {} fails ({} < {})",
            name("other_cross"),
            name("target_self"),
            r.other_cross,
            3.0 + r.target_self
        ));
    }
    if !(r.other_self + 1.0 >= r.target_cross) {
        fail(format!(
            "{} + 1 ≥ {} fails ({} < {})",
            name("other_self"),
            name("target_cross"),
            r.other_self + 1.0,
            r.target_cross
        ));
    }
    let gamma = (r.other_cross + 1.0 - r.target_self) / 2.0;
    let p = r.target_self + r.target_cross * gamma;
    if !(p > 1.0) {
        fail(format!("p{j} = {p} must exceed 1"));
    } else {
        let p_tilde = p / (p - 1.0);
        if !(r.q + 1.0 > r.q * p_tilde) {
            fail(format!(
                "q{j} + 1 > q{j}·p̃{j} fails ({} ≤ {})",
                r.q + 1.0,
                r.q * p_tilde
            ));
        }
    }
    if !violated.is_empty() {
        return Ok(Err(violated));
    }

    debug_assert!(gamma >= 2.0);
    let problem = ScalarBoundProblem::new(params.alpha, r.u0, r.q, p)?;
    let scalar = tau_bound(&problem)?;
    Ok(Ok(BranchBound {
        target: r.target,
        gamma,
        p,
        p_tilde: problem.p_tilde(),
        q: r.q,
        u0: r.u0,
        scalar,
    }))
}

/// Dispatches the case analysis and returns a certificate for the first
/// applicable branch (or the tighter of two).
pub fn theorem_bound(params: &PowerLawParams) -> Result<BoundCertificate> {
    params.validate()?;
    #[allow(clippy::float_cmp)]
    if params.q1 != params.q2 {
        let (lower, target) = if params.q1 < params.q2 {
            (Component::X, Component::Y)
        } else {
            (Component::Y, Component::X)
        };
        return match try_branch(params, target)? {
            Ok(active) => Ok(BoundCertificate {
                branch: Branch::DistinctQ { lower, target },
                tau_ub: active.scalar.tau_ub,
                active,
                alternate: None,
            }),
            Err(violated) => Err(BoundsError::NotApplicable { violated }),
        };
    }

    let via_x = try_branch(params, Component::X)?;
    let via_y = try_branch(params, Component::Y)?;
    match (via_x, via_y) {
        (Ok(x), Ok(y)) => {
            let (active, alternate) = if x.scalar.tau_ub <= y.scalar.tau_ub {
                (x, y)
            } else {
                (y, x)
            };
            Ok(BoundCertificate {
                branch: Branch::EqualQBoth,
                tau_ub: active.scalar.tau_ub,
                active,
                alternate: Some(alternate),
            })
        }
        (Ok(x), Err(_)) => Ok(BoundCertificate {
            branch: Branch::EqualQBranch1,
            tau_ub: x.scalar.tau_ub,
            active: x,
            alternate: None,
        }),
        (Err(_), Ok(y)) => Ok(BoundCertificate {
            branch: Branch::EqualQBranch2,
            tau_ub: y.scalar.tau_ub,
            active: y,
            alternate: None,
        }),
        (Err(mut vx), Err(vy)) => {
            vx.extend(vy);
            Err(BoundsError::NotApplicable { violated: vx })
        }
    }
}
