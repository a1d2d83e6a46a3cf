//! Exact computations over prime fields: cyclic cohomology of truncated
//! polynomial algebras, derivation algebras and their invariants, and second
//! Chevalley–Eilenberg cohomology of current Lie algebras.

pub mod assoc;
pub mod ce;
pub mod cyclic;
mod echelon;
pub mod error;
pub mod field;
pub mod format;
pub mod lie;
pub mod matrix;
pub mod subspace;
pub mod system;
pub mod verify;

pub use assoc::{AssocAlgebra, LinearOperator, MultiIndex};
pub use ce::TwoCochain;
pub use cyclic::BilinearForm;
pub use error::{Error, Result};
pub use field::{Prime, Scalar};
pub use lie::LieAlgebra;
pub use matrix::{Matrix, Rref};
pub use subspace::Subspace;
pub use system::LinearSystem;
