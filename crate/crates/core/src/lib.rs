//! Exact algebraic layer for the code-polynomial / theta-constant pipeline.
//!
//! Everything in this crate is computed over the Gaussian rationals
//! `Q(i)` with arbitrary-precision integers; no floating point appears
//! anywhere. The numerical half of the pipeline (theta evaluation,
//! lattice sums, the Siegel upper half space) lives in the companion
//! `theta-code-lab` crate.
//!
//! Variable indexing convention, used by every module: a vector
//! `a = (a_1, ..., a_g)` over `F_2` maps to the integer index
//! `sum a_k * 2^(k-1)` (little-endian, `a_1` is the low bit).

#![no_std]

extern crate alloc;

pub mod codes;
pub mod error;
pub mod gaussian;
pub mod hgroup;
pub mod matrix;
pub mod poly;
pub mod symplectic;
pub mod tangent;

pub use codes::{BinaryCode, NamedCode};
pub use error::Error;
pub use gaussian::GaussianRational;
pub use hgroup::GroupClosure;
pub use matrix::UnitaryAction;
pub use poly::SparsePolynomial;
pub use symplectic::SymplecticMatrix;
pub use tangent::TangentReport;

pub type Result<T> = core::result::Result<T, Error>;
