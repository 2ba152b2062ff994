//! Simultaneous Schmidt decomposition of bipartite pure states.
//!
//! Given vectors |ψ_α⟩ in a d_A⊗d_B system, [`ssd::decompose`] decides whether
//! one pair of local bases puts every vector in Schmidt form at once, and if
//! so builds the local unitaries and the (generally complex) coefficients.
//! Mixtures ρ = Σ a_αβ |ψ_α⟩⟨ψ_β| of such vectors are then locally equivalent
//! to maximally correlated states, whose distillable entanglement is the
//! coherent information computed in [`entropy`].
//!
//! The [`bell`] and [`locc`] modules specialize this to generalized Bell
//! states: an index-level criterion, exhaustive enumeration of admissible
//! sets, and synthesis of one-way LOCC discrimination protocols.

pub mod bell;
pub mod entropy;
mod error;
pub mod linalg;
pub mod locc;
#[cfg(test)]
mod properties;
pub mod random;
pub mod ssd;
pub mod states;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, C64, DEFAULT_TOL};
