//! Bipartite pure states, Gram-weighted ensembles and density matrices.
//!
//! A vector |ψ⟩ = Σ b_jk |j_A⟩⊗|k_B⟩ is stored with its amplitudes in row-major
//! (j, k) order, which is exactly the layout of its d_A×d_B amplitude matrix
//! Ψ (A index = row, B index = column). Local unitaries act on Ψ as
//! Ψ ↦ U_A·Ψ·U_Bᵀ.

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, inner, svd, vec_norm, ComplexMatrix, C64};

/// Inputs whose norm is within this distance of one are renormalized.
pub const RENORMALIZE_WINDOW: f64 = 1e-6;

const UNITARY_TOL: f64 = 1e-9;
const PSD_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-9;

/// Normalized pure state on C^{d_A} ⊗ C^{d_B}.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteVector {
    d_a: usize,
    d_b: usize,
    amps: Vec<C64>,
}

impl BipartiteVector {
    pub fn new(d_a: usize, d_b: usize, amps: Vec<C64>) -> Result<Self> {
        if d_a == 0 || d_b == 0 || amps.len() != d_a * d_b {
            return Err(Error::DimensionMismatch {
                expected: format!("{} amplitudes ({d_a}x{d_b})", d_a * d_b),
                found: format!("{} amplitudes", amps.len()),
            });
        }
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm = vec_norm(&amps);
        if (norm - 1.0).abs() > RENORMALIZE_WINDOW {
            return Err(Error::NotNormalized { norm });
        }
        // rescaling an already unit vector would only shuffle the last bits
        let amps = if (norm - 1.0).abs() <= 8.0 * f64::EPSILON {
            amps
        } else {
            amps.into_iter().map(|z| z / norm).collect()
        };
        Ok(Self { d_a, d_b, amps })
    }

    /// Normalizes an arbitrary nonzero amplitude list.
    pub fn normalized(d_a: usize, d_b: usize, amps: Vec<C64>) -> Result<Self> {
        let norm = vec_norm(&amps);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized { norm });
        }
        Self::new(d_a, d_b, amps.into_iter().map(|z| z / norm).collect())
    }

    /// Product state |j⟩⊗|k⟩.
    pub fn basis(d_a: usize, d_b: usize, j: usize, k: usize) -> Self {
        let mut amps = vec![C64::new(0.0, 0.0); d_a * d_b];
        amps[j * d_b + k] = C64::new(1.0, 0.0);
        Self { d_a, d_b, amps }
    }

    /// Inverse of [`psi_matrix`]: reads the amplitudes off a d_A×d_B matrix.
    pub fn from_psi_matrix(psi: &ComplexMatrix) -> Result<Self> {
        Self::new(psi.rows(), psi.cols(), psi.as_slice().to_vec())
    }

    pub fn d_a(&self) -> usize {
        self.d_a
    }

    pub fn d_b(&self) -> usize {
        self.d_b
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.d_a, self.d_b)
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitude(&self, j: usize, k: usize) -> C64 {
        self.amps[j * self.d_b + k]
    }

    /// ⟨self|other⟩.
    pub fn overlap(&self, other: &Self) -> C64 {
        inner(&self.amps, &other.amps)
    }
}

/// The d_A×d_B matrix Ψ with Ψ[j][k] = b_jk.
pub fn psi_matrix(v: &BipartiteVector) -> ComplexMatrix {
    ComplexMatrix::from_row_major(v.d_a, v.d_b, v.amps.clone())
        .expect("amplitude count fixed at construction")
}

/// Vectors |ψ_α⟩ together with a positive semidefinite weight matrix a_αβ.
#[derive(Debug, Clone)]
pub struct GramEnsemble {
    vectors: Vec<BipartiteVector>,
    weights: ComplexMatrix,
}

impl GramEnsemble {
    pub fn new(vectors: Vec<BipartiteVector>, weights: ComplexMatrix) -> Result<Self> {
        common_dims(&vectors)?;
        let l = vectors.len();
        if weights.rows() != l || weights.cols() != l {
            return Err(Error::DimensionMismatch {
                expected: format!("{l}x{l} weight matrix"),
                found: format!("{}x{}", weights.rows(), weights.cols()),
            });
        }
        let defect = weights.hermiticity_defect();
        if defect > PSD_TOL {
            return Err(Error::NotHermitian { defect });
        }
        let min_eigenvalue = hermitian_eig(&weights, PSD_TOL)?
            .values
            .last()
            .copied()
            .unwrap_or(0.0);
        if min_eigenvalue < -PSD_TOL {
            return Err(Error::NotPsd { min_eigenvalue });
        }
        Ok(Self { vectors, weights })
    }

    /// Equal-weight incoherent mixture, a = I/l.
    pub fn uniform(vectors: Vec<BipartiteVector>) -> Result<Self> {
        let l = vectors.len();
        let w = 1.0 / l.max(1) as f64;
        Self::new(vectors, ComplexMatrix::identity(l).scale_real(w))
    }

    /// Incoherent mixture with the given probabilities on the diagonal.
    pub fn mixture(vectors: Vec<BipartiteVector>, probs: &[f64]) -> Result<Self> {
        let diag: Vec<C64> = probs.iter().map(|&p| C64::new(p, 0.0)).collect();
        Self::new(vectors, ComplexMatrix::from_diagonal(&diag))
    }

    pub fn vectors(&self) -> &[BipartiteVector] {
        &self.vectors
    }

    pub fn weights(&self) -> &ComplexMatrix {
        &self.weights
    }

    pub fn dims(&self) -> (usize, usize) {
        self.vectors[0].dims()
    }

    /// Numerical rank of the overlap matrix G_αβ = ⟨ψ_α|ψ_β⟩. A value below
    /// the number of vectors means the vectors are linearly dependent, which
    /// is allowed but worth reporting.
    pub fn vector_rank(&self) -> usize {
        gram_rank(&self.vectors)
    }
}

/// Numerical rank of the overlap matrix of `vectors`.
pub fn gram_rank(vectors: &[BipartiteVector]) -> usize {
    let l = vectors.len();
    let g = ComplexMatrix::from_fn(l, l, |a, b| vectors[a].overlap(&vectors[b]));
    hermitian_eig(&g, 1e-8)
        .map(|e| e.values.iter().filter(|&&x| x > 1e-10 * l as f64).count())
        .unwrap_or(0)
}

/// Shared (d_A, d_B) of a nonempty vector list.
pub fn common_dims(vectors: &[BipartiteVector]) -> Result<(usize, usize)> {
    let first = vectors
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty vector list".into()))?;
    let dims = first.dims();
    if let Some(bad) = vectors.iter().find(|v| v.dims() != dims) {
        return Err(Error::DimensionMismatch {
            expected: format!("{}x{}", dims.0, dims.1),
            found: format!("{}x{}", bad.d_a, bad.d_b),
        });
    }
    Ok(dims)
}

/// Hermitian, positive semidefinite, unit-trace operator on C^{d_A}⊗C^{d_B}.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    d_a: usize,
    d_b: usize,
    mat: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(d_a: usize, d_b: usize, mat: ComplexMatrix) -> Result<Self> {
        let n = d_a * d_b;
        if mat.rows() != n || mat.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: format!("{n}x{n}"),
                found: format!("{}x{}", mat.rows(), mat.cols()),
            });
        }
        let trace = mat.trace();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(Error::TraceError { trace: trace.re });
        }
        let eig = hermitian_eig(&mat, 1e-9)?;
        let min_eigenvalue = eig.values.last().copied().unwrap_or(0.0);
        if min_eigenvalue < -1e-9 {
            return Err(Error::NotPsd { min_eigenvalue });
        }
        Ok(Self { d_a, d_b, mat })
    }

    pub fn pure(v: &BipartiteVector) -> Self {
        let n = v.amps.len();
        let mat = ComplexMatrix::from_fn(n, n, |i, j| v.amps[i] * v.amps[j].conj());
        Self {
            d_a: v.d_a,
            d_b: v.d_b,
            mat,
        }
    }

    pub fn d_a(&self) -> usize {
        self.d_a
    }

    pub fn d_b(&self) -> usize {
        self.d_b
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    /// (U_A⊗U_B)·ρ·(U_A⊗U_B)†.
    pub fn conjugate_local(&self, ua: &ComplexMatrix, ub: &ComplexMatrix) -> ComplexMatrix {
        let u = ua.kron(ub);
        &(&u * &self.mat) * &u.adjoint()
    }
}

/// ρ = Σ_αβ a_αβ |ψ_α⟩⟨ψ_β|.
pub fn assemble_density(e: &GramEnsemble) -> Result<DensityMatrix> {
    let (d_a, d_b) = e.dims();
    let n = d_a * d_b;
    let mut mat = ComplexMatrix::zeros(n, n);
    for (a, va) in e.vectors.iter().enumerate() {
        for (b, vb) in e.vectors.iter().enumerate() {
            let w = e.weights[(a, b)];
            if w == C64::new(0.0, 0.0) {
                continue;
            }
            for i in 0..n {
                let left = w * va.amps[i];
                for j in 0..n {
                    mat[(i, j)] += left * vb.amps[j].conj();
                }
            }
        }
    }
    let trace = mat.trace().re;
    if (trace - 1.0).abs() > TRACE_TOL {
        return Err(Error::TraceError { trace });
    }
    DensityMatrix::new(d_a, d_b, mat)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

/// Reduced state ρ_A = Tr_B ρ or ρ_B = Tr_A ρ.
pub fn partial_trace(rho: &DensityMatrix, side: Side) -> ComplexMatrix {
    let (d_a, d_b) = (rho.d_a, rho.d_b);
    let m = &rho.mat;
    match side {
        Side::A => ComplexMatrix::from_fn(d_a, d_a, |j, jp| {
            (0..d_b).map(|k| m[(j * d_b + k, jp * d_b + k)]).sum()
        }),
        Side::B => ComplexMatrix::from_fn(d_b, d_b, |k, kp| {
            (0..d_a).map(|j| m[(j * d_b + k, j * d_b + kp)]).sum()
        }),
    }
}

/// (U_A⊗U_B)|ψ⟩, computed as Ψ ↦ U_A·Ψ·U_Bᵀ.
pub fn apply_local_unitary(
    v: &BipartiteVector,
    ua: &ComplexMatrix,
    ub: &ComplexMatrix,
) -> Result<BipartiteVector> {
    if ua.rows() != v.d_a || ua.cols() != v.d_a || ub.rows() != v.d_b || ub.cols() != v.d_b {
        return Err(Error::DimensionMismatch {
            expected: format!("{0}x{0} and {1}x{1} unitaries", v.d_a, v.d_b),
            found: format!(
                "{}x{} and {}x{}",
                ua.rows(),
                ua.cols(),
                ub.rows(),
                ub.cols()
            ),
        });
    }
    ua.require_unitary(UNITARY_TOL)?;
    ub.require_unitary(UNITARY_TOL)?;
    let psi = &(ua * &psi_matrix(v)) * &ub.transpose();
    Ok(BipartiteVector {
        d_a: v.d_a,
        d_b: v.d_b,
        amps: psi.into_vec(),
    })
}

/// Schmidt decomposition of a single vector.
///
/// `coeffs` has length min(d_A, d_B), real nonnegative and descending; the
/// k-th columns of `basis_a` and `basis_b` are the paired local vectors.
#[derive(Debug, Clone)]
pub struct SchmidtForm {
    pub coeffs: Vec<C64>,
    pub basis_a: ComplexMatrix,
    pub basis_b: ComplexMatrix,
}

impl SchmidtForm {
    /// Σ_k b_k |k_A'⟩⊗|k_B'⟩ as a flat amplitude list.
    pub fn reassemble(&self) -> Vec<C64> {
        let (d_a, d_b) = (self.basis_a.rows(), self.basis_b.rows());
        let mut amps = vec![C64::new(0.0, 0.0); d_a * d_b];
        for (k, &b) in self.coeffs.iter().enumerate() {
            for j in 0..d_a {
                let left = b * self.basis_a[(j, k)];
                for i in 0..d_b {
                    amps[j * d_b + i] += left * self.basis_b[(i, k)];
                }
            }
        }
        amps
    }
}

pub fn schmidt_single(v: &BipartiteVector) -> Result<SchmidtForm> {
    let psi = psi_matrix(v);
    let dec = svd(&psi)?;
    let k = v.d_a.min(v.d_b);
    // Ψ = Σ s_k u_k v_k† = Σ s_k u_k ⊗ conj(v_k)
    let a_cols: Vec<Vec<C64>> = (0..k).map(|j| dec.u.column(j)).collect();
    let b_cols: Vec<Vec<C64>> = (0..k)
        .map(|j| dec.v.column(j).into_iter().map(|z| z.conj()).collect())
        .collect();
    let basis_a =
        ComplexMatrix::from_columns(v.d_a, &crate::linalg::complete_orthonormal(a_cols, v.d_a));
    let basis_b =
        ComplexMatrix::from_columns(v.d_b, &crate::linalg::complete_orthonormal(b_cols, v.d_b));
    Ok(SchmidtForm {
        coeffs: dec
            .singular_values
            .iter()
            .map(|&s| C64::new(s, 0.0))
            .collect(),
        basis_a,
        basis_b,
    })
}
