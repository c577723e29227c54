//! Closed-form evaluation of
//!
//! ```text
//!   ∫₀^X (x^(n+p) − 2xⁿ cos ζ + x^(n−p)) / (x^(2n) − 2xⁿ cos θ + 1) dx/x
//! ```
//!
//! for X = 1 and X = ∞, with the machinery that produces it (denominator roots,
//! partial fractions, finite trigonometric sums, series) and an independent
//! quadrature oracle to check every path against.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod closed_form;
pub mod error;
pub mod params;
pub mod partial_fractions;
pub mod quadrature;
pub mod series;
pub mod trig_sums;
pub mod verify;

pub use error::{Error, Result};
