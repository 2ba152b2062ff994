//! Cyclic Jacobi eigensolver for complex Hermitian matrices and the
//! one-sided (Hestenes) Jacobi SVD built on the same plane rotation.

use super::matrix::{complete_orthonormal, fix_phase, ComplexMatrix, C64, ONE, ZERO};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues (descending) and unitary eigenvector columns of a Hermitian
/// matrix, together with the Frobenius reconstruction error ‖MV − VΛ‖_F.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
    pub residual: f64,
}

/// Unitary 2×2 plane rotation G (entries at (p,p), (p,q), (q,p), (q,q))
/// such that G† [[app, apq], [conj(apq), aqq]] G is diagonal.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Rotation {
    pp: C64,
    pq: C64,
    qp: C64,
    qq: C64,
}

impl Rotation {
    pub(crate) fn annihilating(app: f64, aqq: f64, apq: C64) -> Self {
        let mag = apq.norm();
        let phase = if mag > 0.0 { apq.conj() / mag } else { ONE };
        let theta = (aqq - app) / (2.0 * mag);
        let t = if theta.is_finite() {
            theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
        } else {
            0.0
        };
        let c = 1.0 / (t * t + 1.0).sqrt();
        let s = t * c;
        Self {
            pp: C64::new(c, 0.0),
            pq: C64::new(s, 0.0),
            qp: phase * -s,
            qq: phase * c,
        }
    }

    /// M ← M·G on columns p, q.
    pub(crate) fn apply_right(&self, m: &mut ComplexMatrix, p: usize, q: usize) {
        for k in 0..m.rows() {
            let (a, b) = (m[(k, p)], m[(k, q)]);
            m[(k, p)] = a * self.pp + b * self.qp;
            m[(k, q)] = a * self.pq + b * self.qq;
        }
    }

    /// M ← G†·M on rows p, q.
    fn apply_left_adjoint(&self, m: &mut ComplexMatrix, p: usize, q: usize) {
        for k in 0..m.cols() {
            let (a, b) = (m[(p, k)], m[(q, k)]);
            m[(p, k)] = self.pp.conj() * a + self.qp.conj() * b;
            m[(q, k)] = self.pq.conj() * a + self.qq.conj() * b;
        }
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// The input must satisfy ‖M − M†‖_F ≤ tol·‖M‖_F; it is symmetrized before
/// the sweeps start. Eigenvalues come back sorted descending and every
/// eigenvector has its first largest-modulus entry real and nonnegative.
pub fn hermitian_eig(m: &ComplexMatrix, tol: f64) -> Result<EigenSystem> {
    let n = m.require_square()?;
    let defect = m.hermiticity_defect();
    if defect > tol {
        return Err(Error::NotHermitian { defect });
    }
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();
    let target = f64::EPSILON * scale;

    let mut sweeps = 0;
    loop {
        let off = a.off_diagonal_norm();
        if off <= target || scale == 0.0 {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, off });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq.norm() <= f64::MIN_POSITIVE {
                    continue;
                }
                let rot = Rotation::annihilating(a[(p, p)].re, a[(q, q)].re, apq);
                rot.apply_right(&mut a, p, q);
                rot.apply_left_adjoint(&mut a, p, q);
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
                rot.apply_right(&mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        let mut c = v.column(i);
        fix_phase(&mut c);
        vectors.set_column(col, &c);
    }
    let residual = reconstruction_residual(m, &values, &vectors);
    Ok(EigenSystem {
        values,
        vectors,
        residual,
    })
}

fn reconstruction_residual(m: &ComplexMatrix, values: &[f64], vectors: &ComplexMatrix) -> f64 {
    let mv = m * vectors;
    let vl = ComplexMatrix::from_fn(vectors.rows(), vectors.cols(), |i, j| {
        vectors[(i, j)] * values[j]
    });
    (&mv - &vl).frobenius_norm()
}

/// Thin singular value decomposition M = U·diag(s)·V† with k = min(rows, cols)
/// singular values sorted descending. `u` is rows×k and `v` is cols×k, both
/// with orthonormal columns (completed where singular values vanish).
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub v: ComplexMatrix,
}

pub fn svd(m: &ComplexMatrix) -> Result<Svd> {
    if m.rows() < m.cols() {
        let t = svd(&m.adjoint())?;
        return Ok(Svd {
            u: t.v,
            singular_values: t.singular_values,
            v: t.u,
        });
    }
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = m.clone();
    let mut v = ComplexMatrix::identity(cols);
    let scale = m.frobenius_norm();

    let mut sweeps = 0;
    loop {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, ZERO);
                for k in 0..rows {
                    alpha += w[(k, p)].norm_sqr();
                    beta += w[(k, q)].norm_sqr();
                    gamma += w[(k, p)].conj() * w[(k, q)];
                }
                if gamma.norm() <= f64::EPSILON * (alpha * beta).sqrt()
                    || gamma.norm() <= f64::MIN_POSITIVE
                {
                    continue;
                }
                rotated = true;
                let rot = Rotation::annihilating(alpha, beta, gamma);
                rot.apply_right(&mut w, p, q);
                rot.apply_right(&mut v, p, q);
            }
        }
        if !rotated || scale == 0.0 {
            break;
        }
        sweeps += 1;
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off: f64::NAN,
            });
        }
    }

    let norms: Vec<f64> = (0..cols)
        .map(|j| (0..rows).map(|k| w[(k, j)].norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));

    let cutoff = f64::EPSILON * scale.max(f64::MIN_POSITIVE) * (cols as f64);
    let mut u_cols = Vec::with_capacity(cols);
    let mut singular_values = Vec::with_capacity(cols);
    let mut v_cols = Vec::with_capacity(cols);
    for &j in &order {
        singular_values.push(norms[j]);
        v_cols.push(v.column(j));
        if norms[j] > cutoff {
            u_cols.push(w.column(j).into_iter().map(|z| z / norms[j]).collect());
        }
    }
    let u_cols = complete_orthonormal(u_cols, rows);
    let u = ComplexMatrix::from_columns(rows, &u_cols[..cols]);
    Ok(Svd {
        u,
        singular_values,
        v: ComplexMatrix::from_columns(cols, &v_cols),
    })
}
