//! Joint diagonalization of pairwise commuting normal matrices.

use super::eigen::hermitian_eig;
use super::matrix::{commutator_norm, fix_phase, normality_defect, ComplexMatrix, C64};
use crate::error::{Error, Result};
use crate::random::Rng64;

const REDRAWS: usize = 8;

/// A single unitary `vectors` with `vectors† · M_i · vectors` diagonal for
/// every family member; `values[i]` holds that diagonal.
#[derive(Debug, Clone)]
pub struct JointBasis {
    pub vectors: ComplexMatrix,
    pub values: Vec<Vec<C64>>,
    /// Largest off-diagonal Frobenius mass left in any conjugated member.
    pub residual: f64,
}

impl JointBasis {
    pub fn dim(&self) -> usize {
        self.vectors.rows()
    }
}

fn family_scale(family: &[ComplexMatrix]) -> f64 {
    family
        .iter()
        .map(ComplexMatrix::frobenius_norm)
        .fold(0.0, f64::max)
        .max(1.0)
}

fn off_diagonal_residual(family: &[ComplexMatrix], v: &ComplexMatrix) -> f64 {
    let vh = v.adjoint();
    family
        .iter()
        .map(|m| (&(&vh * m) * v).off_diagonal_norm())
        .fold(0.0, f64::max)
}

/// Validates a family: equal square dimensions, every member normal and
/// every pair commuting within `tol` (relative to the family scale). Pairs
/// are scanned in lexicographic order and the first violation is reported.
pub fn validate_commuting_family(family: &[ComplexMatrix], tol: f64) -> Result<usize> {
    let first = family
        .first()
        .ok_or_else(|| Error::InvalidArgument("joint diagonalization of an empty family".into()))?;
    let n = first.require_square()?;
    for m in family {
        let d = m.require_square()?;
        if d != n {
            return Err(Error::DimensionMismatch {
                expected: format!("{n}x{n}"),
                found: format!("{d}x{d}"),
            });
        }
    }
    let scale = family_scale(family);
    for (index, m) in family.iter().enumerate() {
        let defect = normality_defect(m)?;
        if defect > tol * scale * scale {
            return Err(Error::NotNormal { index, defect });
        }
    }
    for i in 0..family.len() {
        for j in i + 1..family.len() {
            let norm = commutator_norm(&family[i], &family[j])?;
            if norm > tol * scale * scale {
                return Err(Error::NotCommuting {
                    first: i,
                    second: j,
                    norm,
                });
            }
        }
    }
    Ok(n)
}

/// Finds one unitary diagonalizing every member of a commuting normal family.
///
/// A random real combination of the Hermitian and anti-Hermitian parts is
/// diagonalized; its eigenbasis diagonalizes the family unless two distinct
/// joint eigenvalues collide, in which case the coefficients are redrawn. If
/// every draw fails the eigenspaces are refined member by member.
pub fn joint_diagonalize(family: &[ComplexMatrix], tol: f64, seed: u64) -> Result<JointBasis> {
    let n = validate_commuting_family(family, tol)?;
    let scale = family_scale(family);
    let accept = tol * scale;

    let parts: Vec<ComplexMatrix> = family
        .iter()
        .flat_map(|m| [m.hermitian_part(), m.anti_hermitian_part()])
        .collect();

    let mut rng = Rng64::seeded(seed);
    let mut best: Option<(f64, ComplexMatrix)> = None;
    for _ in 0..REDRAWS {
        let mut h = ComplexMatrix::zeros(n, n);
        for p in &parts {
            h = &h + &p.scale_real(rng.uniform(-1.0, 1.0));
        }
        let eig = hermitian_eig(&h, 1e-8)?;
        let residual = off_diagonal_residual(family, &eig.vectors);
        if residual <= accept {
            return Ok(finish(family, eig.vectors));
        }
        if best.as_ref().is_none_or(|(r, _)| residual < *r) {
            best = Some((residual, eig.vectors));
        }
    }

    let refined = refine_sequentially(&parts, n)?;
    let residual = off_diagonal_residual(family, &refined);
    match best {
        Some((r, v)) if r < residual => Ok(finish(family, v)),
        _ => Ok(finish(family, refined)),
    }
}

fn finish(family: &[ComplexMatrix], v: ComplexMatrix) -> JointBasis {
    let vh = v.adjoint();
    let conjugated: Vec<ComplexMatrix> = family.iter().map(|m| &(&vh * m) * &v).collect();
    let residual = conjugated
        .iter()
        .map(ComplexMatrix::off_diagonal_norm)
        .fold(0.0, f64::max);
    JointBasis {
        values: conjugated.iter().map(ComplexMatrix::diagonal).collect(),
        vectors: v,
        residual,
    }
}

/// Splits the space into clusters of (near-)degenerate eigenvalues of each
/// Hermitian part in turn, diagonalizing the compression of the next part
/// inside every cluster.
fn refine_sequentially(parts: &[ComplexMatrix], n: usize) -> Result<ComplexMatrix> {
    // each cluster is an n×k matrix with orthonormal columns
    let mut clusters = vec![ComplexMatrix::identity(n)];
    for part in parts {
        let cluster_tol = 1e-8 * part.frobenius_norm().max(1.0);
        let mut next = Vec::new();
        for basis in clusters {
            if basis.cols() == 1 {
                next.push(basis);
                continue;
            }
            let compressed = &(&basis.adjoint() * part) * &basis;
            let eig = hermitian_eig(&compressed.hermitian_part(), 1e-8)?;
            let rotated = &basis * &eig.vectors;
            let mut start = 0;
            for k in 1..=eig.values.len() {
                let split = k == eig.values.len()
                    || (eig.values[k - 1] - eig.values[k]).abs() > cluster_tol;
                if split {
                    let cols: Vec<Vec<C64>> = (start..k).map(|j| rotated.column(j)).collect();
                    next.push(ComplexMatrix::from_columns(n, &cols));
                    start = k;
                }
            }
        }
        clusters = next;
    }
    let mut cols = Vec::with_capacity(n);
    for c in clusters {
        for j in 0..c.cols() {
            let mut v = c.column(j);
            fix_phase(&mut v);
            cols.push(v);
        }
    }
    Ok(ComplexMatrix::from_columns(n, &cols))
}
