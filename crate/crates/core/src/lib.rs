//! Computational toolkit for weighted, inhomogeneous and intermediate
//! Diophantine approximation: certified arithmetic, lattice enumeration and
//! successive minima, weighted best-approximation sequences, exponent
//! estimators, transference-bound evaluators, exterior-algebra machinery and
//! the nested-box construction of badly approximable shifts.

pub mod badset;
pub mod bestapprox;
pub mod error;
pub mod exponents;
pub mod grassmann;
pub mod lattice;
pub mod linalg;
pub mod numerics;
pub mod sampling;
pub mod transference;

pub use error::{BadSetError, BestApproxError, LatticeError, NumError};
pub use numerics::{CertReal, Rat, WeightVector, WeightedValue};
