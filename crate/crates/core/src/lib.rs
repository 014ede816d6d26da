//! Exact quantum cohomology of Fano hypersurfaces `M_N^k ⊂ CP^{N-1}`.
//!
//! The pipeline runs entirely over exact rationals:
//!
//! 1. [`picard_fuchs`] builds the Picard-Fuchs operator `P^{N,k}` and the
//!    adapted connection family `Ω_PF = (1/h) R^h(q) dt`.
//! 2. [`birkhoff`] solves the coefficient recursion for the positive
//!    Birkhoff factor `L_+ = Q_0 (I + h Q_1 + ...)` and produces the
//!    `1/h`-linear connection `(1/h) Q_0 ω Q_0^{-1}`.
//! 3. [`gw`] reads the structure constants `L_m^d` off that matrix and
//!    derives the three-point invariants.
//!
//! [`weyl`] implements operators in `(q, h, h∂)` and the reduction of an
//! adapted family to its scalar operator, which is used as an independent
//! check of step 2.
//!
//! The crate is `no_std` (it needs `alloc`); enable the `std` feature to pull
//! in `std` support from the numeric dependencies.

#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

pub mod birkhoff;
mod error;
pub mod exact;
pub mod gw;
pub mod matrix;
pub mod picard_fuchs;
pub mod pipeline;
pub mod weyl;

pub use birkhoff::{NormalizedConnection, QSystem, Scheme, SolveOptions, TermOrder};
pub use error::Error;
pub use exact::{BigRat, Grading, Monomial, QHPoly};
pub use gw::{GwRecord, GwTable};
pub use matrix::PolyMatrix;
pub use picard_fuchs::{AdaptedFamily, FanoParams};
pub use pipeline::Pipeline;
pub use weyl::{AdaptedReport, DiffOperator};

pub type Result<T, E = Error> = core::result::Result<T, E>;
