//! Numerics for weighted Bergman spaces on the unit disc.
//!
//! Radial weights and their moments, reproducing kernels, the Bergman
//! projection, the two-weight criteria `D_p`, `A_p` and `M_p`, weight-class
//! diagnostics, and the complete decision rule for pairs of exponential
//! weights.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotic;
pub mod classes;
pub mod conditions;
pub mod config;
pub mod error;
pub mod exp_classifier;
pub mod exec;
pub mod grid;
pub mod interp;
pub mod jet;
pub mod kernel;
pub mod moments;
pub mod nonfinite;
pub mod projection;
pub mod quadrature;
pub mod special;
pub mod suite;
pub mod weight;

pub use config::Config;
pub use error::{Error, Result};
pub use exec::ExecMode;
pub use moments::{Backend, LogValue, MomentTable, PlainValue};
pub use quadrature::{DecayClass, QuadratureSpec, RadialPoint, Substitution, SubstitutionPolicy};
pub use weight::{sigma_weight, RadialWeight, Tabulated};
