//! Cyclic representations of finite-dimensional *-algebras, positive
//! functionals, and reproducing kernels on the anti-dual.
//!
//! The crate realizes, with dense complex matrices, the correspondence
//! between positive functionals `ρ`, their GNS representations `(π, ξ)`, and
//! the *-invariant Hilbert subspaces of `A*` given by reproducing operators
//! `H`, together with the cone operations (sum, scaling, order, difference,
//! exclusion, chains, weighted sums, pullback) on these objects.

pub mod algebra;
pub mod correspondence;
pub mod duality;
pub mod error;
pub mod gns;
pub mod kernels;
pub mod numerics;
pub mod report;

pub use algebra::{AlgebraElement, FiniteStarAlgebra};
pub use correspondence::StarHomomorphism;
pub use duality::{DualVector, Functional};
pub use error::{Error, Result};
pub use gns::{Decomposition, GnsRepresentation};
pub use kernels::Kernel;
pub use numerics::{c64, ComplexMatrix, TolerancePolicy, C64};
pub use report::ValidationReport;
