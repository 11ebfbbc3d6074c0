//! Laplace spectra of model domains, eigenvalue counting, Riesz means, and
//! Polya-type eigenvalue inequalities for thin product domains.

// `!(x > 0.0)` style checks are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod constants;
pub mod counting;
pub mod error;
pub mod exact;
pub mod polya;
pub mod reproduce;
pub mod riesz;
pub mod spectra;

pub use error::{Error, Result};
pub use exact::{Length, PiRational};
pub use spectra::{BoundaryCondition, DomainMeta, EigenvalueStream, Level};
