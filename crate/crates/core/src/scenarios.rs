//! Built-in scenarios: three two-component power-law systems swept over
//! α ∈ {0.1, 0.4, 0.6, 0.9}, together with the published reference values.

use crate::bounds::PowerLawParams;

/// Orders used by every example table.
pub const ALPHAS: [f64; 4] = [0.1, 0.4, 0.6, 0.9];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Example {
    pub id: usize,
    pub name: &'static str,
    /// Parameters with `alpha` set to 0; use [`Example::params`].
    base: PowerLawParams,
    /// Published τ_ub per entry of [`ALPHAS`].
    pub reported_tau: [f64; 4],
    /// Published minimizers, when the table lists them.
    pub reported_lambda: Option<[f64; 4]>,
    /// Published numerical blow-up times read from the graphs.
    pub reported_t_num: [f64; 4],
}

impl Example {
    pub fn params(&self, alpha: f64) -> PowerLawParams {
        self.base.with_alpha(alpha)
    }
}

/// The α = 0.1 row of the first example appears as 0.085 in the table and
/// as 0.85 in the figure caption.
pub const EXAMPLE1_ALPHA01_CANDIDATES: [f64; 2] = [0.085, 0.85];

pub const EXAMPLE1: Example = Example {
    id: 1,
    name: "example1",
    base: PowerLawParams {
        alpha: 0.0,
        q1: 0.5,
        q2: 1.5,
        p11: 1.5,
        p12: 3.6,
        p21: 0.5,
        p22: 2.4,
        x0: 1.0,
        y0: 1.2,
    },
    reported_tau: [0.720, 0.998, 1.169, 1.415],
    reported_lambda: Some([-0.802, -0.358, -0.083, 0.315]),
    reported_t_num: [0.085, 0.28, 0.44, 0.67],
};

pub const EXAMPLE2: Example = Example {
    id: 2,
    name: "example2",
    base: PowerLawParams {
        alpha: 0.0,
        q1: 0.0,
        q2: 0.0,
        p11: 0.0,
        p12: 3.2,
        p21: 0.2,
        p22: 0.5,
        x0: 0.5,
        y0: 0.5,
    },
    reported_tau: [8.899, 6.333, 7.297, 8.948],
    reported_lambda: None,
    reported_t_num: [0.35, 3.8, 5.1, 6.9],
};

// p11 = 1: the system display shows x to the first power
pub const EXAMPLE3: Example = Example {
    id: 3,
    name: "example3",
    base: PowerLawParams {
        alpha: 0.0,
        q1: 0.5,
        q2: 0.5,
        p11: 1.0,
        p12: 3.0,
        p21: 2.0,
        p22: 4.0,
        x0: 1.0,
        y0: 1.0,
    },
    reported_tau: [1.228, 1.551, 1.726, 1.967],
    reported_lambda: None,
    reported_t_num: [0.019, 0.11, 0.21, 0.42],
};

pub const EXAMPLES: [Example; 3] = [EXAMPLE1, EXAMPLE2, EXAMPLE3];

/// True for the row whose published t_num is internally inconsistent.
pub fn is_inconsistent_row(example_id: usize, alpha: f64) -> bool {
    example_id == 1 && alpha == 0.1
}
