//! Von Neumann entropy and the coherent-information quantities of a
//! bipartite state. All logarithms are base 2, so results are in bits
//! (ebits for entanglement quantities).

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, ComplexMatrix};
use crate::states::{partial_trace, DensityMatrix, Side};

/// Eigenvalues below this are treated as exact zeros.
pub const EIGENVALUE_FLOOR: f64 = 1e-12;
/// Most negative eigenvalue still accepted (and clipped) as roundoff.
pub const NEGATIVE_CLIP: f64 = 1e-9;
/// Largest |I_A − I_B| tolerated for a state certified maximally correlated.
pub const MCS_SYMMETRY_TOL: f64 = 1e-8;

/// S(M) = −Tr M log₂ M for a positive semidefinite Hermitian M.
pub fn von_neumann_entropy(m: &ComplexMatrix) -> Result<f64> {
    let eig = hermitian_eig(m, 1e-9)?;
    entropy_of_spectrum(&eig.values)
}

/// −Σ λ log₂ λ with the same clipping rules as [`von_neumann_entropy`].
pub fn entropy_of_spectrum(values: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &lambda in values {
        if lambda < -NEGATIVE_CLIP {
            return Err(Error::NotPsd {
                min_eigenvalue: lambda,
            });
        }
        if lambda > EIGENVALUE_FLOOR {
            s -= lambda * lambda.log2();
        }
    }
    Ok(s.max(0.0))
}

/// Binary entropy h(p) in bits.
pub fn binary_entropy(p: f64) -> f64 {
    entropy_of_spectrum(&[p, 1.0 - p]).unwrap_or(f64::NAN)
}

/// Entropies and coherent informations of one bipartite state.
#[derive(Debug, Clone, PartialEq)]
pub struct EntanglementReport {
    pub s_rho: f64,
    pub s_a: f64,
    pub s_b: f64,
    /// S(ρ_A) − S(ρ).
    pub i_a: f64,
    /// S(ρ_B) − S(ρ).
    pub i_b: f64,
    /// Distillable entanglement, present only for certified maximally
    /// correlated states.
    pub e_d_mcs: Option<f64>,
}

impl EntanglementReport {
    /// max(0, I_A, I_B): always a valid lower bound on distillable
    /// entanglement, whether or not the state is certified.
    pub fn hashing_lower_bound(&self) -> f64 {
        self.i_a.max(self.i_b).max(0.0)
    }
}

pub fn entanglement_report(rho: &DensityMatrix, mcs_certified: bool) -> Result<EntanglementReport> {
    let s_rho = von_neumann_entropy(rho.matrix())?;
    let s_a = von_neumann_entropy(&partial_trace(rho, Side::A))?;
    let s_b = von_neumann_entropy(&partial_trace(rho, Side::B))?;
    let i_a = s_a - s_rho;
    let i_b = s_b - s_rho;
    let e_d_mcs = if mcs_certified {
        let gap = (i_a - i_b).abs();
        if gap >= MCS_SYMMETRY_TOL {
            return Err(Error::McsInconsistent { gap });
        }
        Some(i_a)
    } else {
        None
    };
    Ok(EntanglementReport {
        s_rho,
        s_a,
        s_b,
        i_a,
        i_b,
        e_d_mcs,
    })
}
