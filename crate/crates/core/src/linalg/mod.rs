//! Dense complex linear algebra.

mod eigen;
mod joint;
mod matrix;

pub use eigen::{hermitian_eig, svd, EigenSystem, Svd};
pub use joint::{joint_diagonalize, validate_commuting_family, JointBasis};
pub use matrix::{
    commutator_norm, complete_orthonormal, fix_phase, inner, is_normal, normality_defect, vec_norm,
    ComplexMatrix, C64,
};

/// Default relative tolerance for every numerical decision.
pub const DEFAULT_TOL: f64 = 1e-10;
