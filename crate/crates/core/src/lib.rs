//! Numerical verification of sharp Hardy and Rellich type inequalities on
//! balls: closed-form constants, singular radial quadrature, Rayleigh
//! quotients, remainder identities, coordinate transplantation between
//! the ball, the full space and a log-weighted ball, and discretized
//! minimization of the quotients.
// `!(x > y)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod constants;
pub mod corpus;
pub mod error;
pub mod functionals;
pub mod jet;
pub mod quadrature;
pub mod radial;
pub mod transplant;
pub mod suites;
pub mod sweep;
pub mod variational;
pub mod xf;

pub use error::{HardyError, Result};
