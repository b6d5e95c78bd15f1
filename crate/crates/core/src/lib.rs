//! Caputo fractional systems `D^α x = f(t, x)`: special functions, blow-up
//! time bounds for two-component power-law systems, a predictor-corrector
//! integrator and numerical blow-up detection.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod bounds;
pub mod cli;
pub mod detect;
pub mod scenarios;
pub mod solver;
pub mod special_fn;
