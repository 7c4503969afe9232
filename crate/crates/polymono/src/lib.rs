//! Global mixed-monotone decomposition functions for univariate polynomials.
//!
//! Every univariate polynomial `p` admits a two-argument polynomial
//! `g(x, y) = q(x) - r(y)` with `p` embedded on the diagonal (`g(x, x) = p(x)`),
//! `q` increasing and `r` increasing, so that
//!
//! ```text
//! g(lo, hi) <= p(x) <= g(hi, lo)    whenever lo <= x <= hi.
//! ```
//!
//! The construction works through the Gram-matrix representation of the
//! derivative: `p'(x) = m(x)^T (G + L(alpha)) m(x)` with `m(x)` the monomial
//! vector, split as a difference `U - V` of positive semidefinite matrices and
//! integrated back. The crate provides
//!
//! - exact-coefficient polynomial arithmetic ([`polynomial`]),
//! - a small dense symmetric eigensolver and PSD tools ([`linalg`]),
//! - the Gram parameterization `G + L(alpha)` ([`gram`]),
//! - PSD splits: constructive, optimized, and monotonicity certificates
//!   ([`psd_split`]),
//! - decomposition-function assembly and validation ([`decomposition`]),
//! - tightness analysis: exact envelopes, width profiles, dominance
//!   ([`analysis`]),
//! - discrete-time reachable-set over-approximation ([`reach`]).

pub mod analysis;
pub mod decomposition;
pub mod gram;
pub mod linalg;
mod optim;
pub mod polynomial;
pub mod psd_split;
pub mod reach;
pub mod rng;
pub mod util;

use std::fmt;

/// Errors shared across the crate's numerical modules.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Matrix loaded from the wire is not symmetric within tolerance.
    NotSymmetric { max_asymmetry: f64 },
    /// Rows do not form a square matrix of the declared dimension.
    BadShape { expected: usize, got: usize },
    /// Jacobi sweep cap exhausted; reports the remaining off-diagonal mass.
    NoConvergence { residual: f64 },
    /// Vector length does not match the parameterization dimension.
    DimensionMismatch { expected: usize, got: usize },
    /// A value required to be finite was not.
    NonFinite { what: &'static str },
    /// The shift matrix of a split must be positive semidefinite.
    NotPsd { min_eig: f64 },
    /// Interval bounds out of order.
    EmptyInterval { lo: f64, hi: f64 },
    /// Width profiles being compared were built on different grids.
    GridMismatch,
    /// Invalid argument with a static description.
    Invalid(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotSymmetric { max_asymmetry } => {
                write!(f, "matrix is not symmetric (max asymmetry {max_asymmetry:e})")
            }
            Error::BadShape { expected, got } => {
                write!(f, "expected {expected} rows/columns, got {got}")
            }
            Error::NoConvergence { residual } => {
                write!(f, "eigensolver did not converge (off-diagonal residual {residual:e})")
            }
            Error::DimensionMismatch { expected, got } => {
                write!(f, "expected vector of length {expected}, got {got}")
            }
            Error::NonFinite { what } => write!(f, "{what} must be finite"),
            Error::NotPsd { min_eig } => {
                write!(f, "matrix is not positive semidefinite (min eigenvalue {min_eig:e})")
            }
            Error::EmptyInterval { lo, hi } => {
                write!(f, "interval lower bound {lo} exceeds upper bound {hi}")
            }
            Error::GridMismatch => write!(f, "width profiles use different grids or offsets"),
            Error::Invalid(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for Error {}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
