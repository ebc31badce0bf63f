//! Constructive witnesses and numerical checks for operator inequalities
//! between the blocks of a positive semidefinite partitioned matrix
//! `[[A, X], [X*, B]]`.
//!
//! The linear algebra, block constructors, witnesses and spectral checks are
//! generic over the real scalar ([`Real`], implemented for `f32` and `f64`).
//! The extremal probes and the search engine run in `f64`. The aliases below
//! fix the double-precision types most callers want.

// `!(x > 0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod blocks;
pub mod checks;
pub mod corpus;
pub mod error;
pub mod extremal;
pub mod io;
pub mod linalg;
pub mod random;
pub mod scalar;
pub mod witness;

pub use error::{Error, Result};
pub use scalar::Real;

pub type CMatrix = linalg::Matrix<f64>;
pub type HermitianMatrix = linalg::Hermitian<f64>;
pub type PsdMatrix = linalg::Psd<f64>;
pub type UnitaryMatrix = linalg::Unitary<f64>;
pub type SymmetryMatrix = linalg::Symmetry<f64>;
pub type Spectrum = linalg::Spectrum<f64>;
pub type Tolerance = linalg::ToleranceCfg<f64>;
pub type PsdBlock = blocks::PsdBlock<f64>;
pub type FactorList = blocks::FactorList<f64>;
pub type WitnessReport = witness::WitnessReport<f64>;
pub type CheckReport = checks::CheckReport<f64>;
