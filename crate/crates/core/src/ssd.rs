//! Simultaneous Schmidt decomposition.
//!
//! Vectors |ψ_1⟩..|ψ_l⟩ admit one pair of local bases in which all of them are
//! in Schmidt form iff
//!
//! * (A) the l² matrices Ψ_αΨ_β† pairwise commute, and
//! * (B) in a joint eigenbasis {v_j} of that family, with
//!   μ_j^(αβ) = ⟨v_j|Ψ_αΨ_β†|v_j⟩, every |μ_j^(αβ)|² equals μ_j^(αα)·μ_j^(ββ).
//!
//! Given both, the B-side partner of v_j is read off a reference vector
//! α_j with μ_j^(α_j α_j) > 0 as Ψ_{α_j}†v_j / √μ_j^(α_j α_j); condition (B)
//! makes every other Ψ_α†v_j parallel to it, so the remaining per-vector
//! phases end up in complex coefficients.

use std::cmp::Reverse;

use crate::error::{Error, Result};
use crate::linalg::{
    commutator_norm, complete_orthonormal, inner, joint_diagonalize, ComplexMatrix, JointBasis, C64,
};
use crate::states::{
    assemble_density, common_dims, psi_matrix, BipartiteVector, DensityMatrix, GramEnsemble,
};

/// Orthonormality defect of the constructed B-side vectors that is still
/// attributed to roundoff.
pub const ORTHOGONALITY_GUARD: f64 = 1e-8;
/// Elementwise tolerance when checking the maximally correlated form.
pub const MCS_VERIFY_TOL: f64 = 1e-9;

/// The first violated check found while scanning conditions (A) and (B).
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// Ψ_aΨ_b† and Ψ_cΨ_d† fail to commute, with (a,b) = `pair_a`, (c,d) = `pair_b`.
    Commutator {
        pair_a: (usize, usize),
        pair_b: (usize, usize),
        norm: f64,
    },
    /// |μ_j^(αβ)|² ≠ μ_j^(αα)μ_j^(ββ) for joint basis vector `index`.
    Coefficient {
        index: usize,
        pair: (usize, usize),
        lhs: f64,
        rhs: f64,
        basis_vector: Vec<C64>,
    },
}

/// Outcome of testing condition (A).
#[derive(Debug, Clone)]
pub struct ConditionA {
    pub holds: bool,
    /// Largest commutator norm over all pairs of products.
    pub worst_norm: f64,
    pub witness: Option<Witness>,
}

/// Outcome of testing condition (B), with the joint basis it was judged in.
#[derive(Debug, Clone)]
pub struct ConditionB {
    pub holds: bool,
    /// Largest | |μ_j^(αβ)|² − μ_j^(αα)μ_j^(ββ) | seen.
    pub worst_defect: f64,
    pub witness: Option<Witness>,
    pub basis: CommonBasis,
}

/// Joint eigenbasis of {Ψ_αΨ_β†} in canonical order, with μ_j^(αβ).
#[derive(Debug, Clone)]
pub struct CommonBasis {
    /// Columns are v_j^A.
    pub vectors: ComplexMatrix,
    /// `mu[j][α][β]` = μ_j^(αβ).
    pub mu: Vec<Vec<Vec<C64>>>,
    /// Off-diagonal mass left by the joint diagonalization.
    pub residual: f64,
}

impl CommonBasis {
    pub fn dim(&self) -> usize {
        self.vectors.cols()
    }

    /// μ_j^(αα), real by construction.
    pub fn weight(&self, j: usize, alpha: usize) -> f64 {
        self.mu[j][alpha][alpha].re
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SsdVerdict {
    pub decomposable: bool,
    pub cond_a: bool,
    /// `None` when condition (A) fails and (B) is not defined.
    pub cond_b: Option<bool>,
    pub witness: Option<Witness>,
    pub worst_commutator: f64,
    pub worst_b_defect: Option<f64>,
}

/// Local unitaries and simultaneous Schmidt coefficients.
#[derive(Debug, Clone)]
pub struct SimultaneousForm {
    /// Maps v_j^A to e_j.
    pub ua: ComplexMatrix,
    /// Maps the B-side Schmidt ket of index j to e_j.
    pub ub: ComplexMatrix,
    /// l × min(d_A, d_B); row α holds b_k^(α).
    pub coeffs: ComplexMatrix,
    /// Largest off-diagonal amplitude mass of (U_A⊗U_B)|ψ_α⟩ over α.
    pub residual: f64,
}

impl SimultaneousForm {
    pub fn schmidt_rank(&self) -> usize {
        self.coeffs.cols()
    }

    /// Σ_k b_k^(α) (U_A†e_k) ⊗ (U_B†e_k).
    pub fn reconstruct(&self, alpha: usize) -> Vec<C64> {
        let (d_a, d_b) = (self.ua.rows(), self.ub.rows());
        let a = self.ua.adjoint();
        let b = self.ub.adjoint();
        let mut amps = vec![C64::new(0.0, 0.0); d_a * d_b];
        for k in 0..self.coeffs.cols() {
            let c = self.coeffs[(alpha, k)];
            for j in 0..d_a {
                let left = c * a[(j, k)];
                for i in 0..d_b {
                    amps[j * d_b + i] += left * b[(i, k)];
                }
            }
        }
        amps
    }
}

#[derive(Debug, Clone)]
pub struct SsdResult {
    pub verdict: SsdVerdict,
    pub basis: Option<CommonBasis>,
    /// Present iff the vectors are simultaneously decomposable.
    pub form: Option<SimultaneousForm>,
}

/// Ψ_αΨ_β† for all (α, β) in lexicographic order.
pub fn product_family(vectors: &[BipartiteVector]) -> Vec<((usize, usize), ComplexMatrix)> {
    let psis: Vec<ComplexMatrix> = vectors.iter().map(psi_matrix).collect();
    let adjs: Vec<ComplexMatrix> = psis.iter().map(ComplexMatrix::adjoint).collect();
    let mut out = Vec::with_capacity(psis.len() * psis.len());
    for (a, pa) in psis.iter().enumerate() {
        for (b, pb) in adjs.iter().enumerate() {
            out.push(((a, b), pa * pb));
        }
    }
    out
}

/// Condition (A): every pair among {Ψ_αΨ_β†} commutes within `tol`.
///
/// Pairs of products are scanned lexicographically in ((α,β), (γ,δ)); the
/// first violation becomes the witness.
pub fn check_condition_a(vectors: &[BipartiteVector], tol: f64) -> Result<ConditionA> {
    common_dims(vectors)?;
    let family = product_family(vectors);
    let mut worst_norm: f64 = 0.0;
    let mut witness = None;
    for (i, (pa, ma)) in family.iter().enumerate() {
        for (pb, mb) in &family[i + 1..] {
            let norm = commutator_norm(ma, mb)?;
            worst_norm = worst_norm.max(norm);
            if norm > tol && witness.is_none() {
                witness = Some(Witness::Commutator {
                    pair_a: *pa,
                    pair_b: *pb,
                    norm,
                });
            }
        }
    }
    Ok(ConditionA {
        holds: witness.is_none(),
        worst_norm,
        witness,
    })
}

/// Condition (B), evaluated in a canonical joint eigenbasis of the family.
/// Errors with [`Error::ConditionAViolated`] if the family does not commute.
pub fn check_condition_b(vectors: &[BipartiteVector], tol: f64, seed: u64) -> Result<ConditionB> {
    let cond_a = check_condition_a(vectors, tol)?;
    if let Some(Witness::Commutator {
        pair_a,
        pair_b,
        norm,
    }) = cond_a.witness
    {
        return Err(Error::ConditionAViolated {
            pair_a,
            pair_b,
            norm,
        });
    }
    condition_b_unchecked(vectors, tol, seed)
}

fn condition_b_unchecked(vectors: &[BipartiteVector], tol: f64, seed: u64) -> Result<ConditionB> {
    let basis = common_basis(vectors, tol, seed)?;
    let l = vectors.len();
    let mut worst_defect: f64 = 0.0;
    let mut witness = None;
    for j in 0..basis.dim() {
        for a in 0..l {
            for b in a + 1..l {
                let lhs = basis.mu[j][a][b].norm_sqr();
                let rhs = basis.weight(j, a) * basis.weight(j, b);
                let defect = (lhs - rhs).abs();
                worst_defect = worst_defect.max(defect);
                if defect > tol && witness.is_none() {
                    witness = Some(Witness::Coefficient {
                        index: j,
                        pair: (a, b),
                        lhs,
                        rhs,
                        basis_vector: basis.vectors.column(j),
                    });
                }
            }
        }
    }
    Ok(ConditionB {
        holds: witness.is_none(),
        worst_defect,
        witness,
        basis,
    })
}

/// Sort key quantized to a 1e-9 grid so ties compare exactly.
fn quantize(x: f64) -> i64 {
    (x * 1e9).round() as i64
}

/// Joint eigenbasis of the product family, ordered by Σ_α μ_j^(αα)
/// descending, then μ_j^(11) descending, then lexicographically on the
/// (phase-fixed) basis vector.
fn common_basis(vectors: &[BipartiteVector], tol: f64, seed: u64) -> Result<CommonBasis> {
    let l = vectors.len();
    let family = product_family(vectors);
    // Ψ_βΨ_α† is the adjoint of Ψ_αΨ_β†, so the upper triangle suffices
    let upper: Vec<ComplexMatrix> = family
        .iter()
        .filter(|((a, b), _)| a <= b)
        .map(|(_, m)| m.clone())
        .collect();
    let JointBasis {
        vectors: v,
        residual,
        ..
    } = joint_diagonalize(&upper, tol, seed)?;
    let n = v.cols();

    let cols: Vec<Vec<C64>> = (0..n).map(|j| v.column(j)).collect();
    let mu: Vec<Vec<Vec<C64>>> = cols
        .iter()
        .map(|vj| {
            (0..l)
                .map(|a| {
                    (0..l)
                        .map(|b| inner(vj, &family[a * l + b].1.mat_vec(vj)))
                        .collect()
                })
                .collect()
        })
        .collect();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_cached_key(|&j| {
        let total: f64 = (0..l).map(|a| mu[j][a][a].re).sum();
        let lex: Vec<(i64, i64)> = cols[j]
            .iter()
            .map(|z| (quantize(-z.re), quantize(-z.im)))
            .collect();
        (
            Reverse(quantize(total)),
            Reverse(quantize(mu[j][0][0].re)),
            lex,
        )
    });

    let sorted_cols: Vec<Vec<C64>> = order.iter().map(|&j| cols[j].clone()).collect();
    Ok(CommonBasis {
        vectors: ComplexMatrix::from_columns(n, &sorted_cols),
        mu: order.iter().map(|&j| mu[j].clone()).collect(),
        residual,
    })
}

/// Decides simultaneous Schmidt decomposability and, when it holds, builds
/// the local unitaries and coefficient table.
pub fn decompose(vectors: &[BipartiteVector], tol: f64, seed: u64) -> Result<SsdResult> {
    let (d_a, d_b) = common_dims(vectors)?;
    let cond_a = check_condition_a(vectors, tol)?;
    if !cond_a.holds {
        return Ok(SsdResult {
            verdict: SsdVerdict {
                decomposable: false,
                cond_a: false,
                cond_b: None,
                witness: cond_a.witness,
                worst_commutator: cond_a.worst_norm,
                worst_b_defect: None,
            },
            basis: None,
            form: None,
        });
    }
    let cond_b = condition_b_unchecked(vectors, tol, seed)?;
    let verdict = SsdVerdict {
        decomposable: cond_b.holds,
        cond_a: true,
        cond_b: Some(cond_b.holds),
        witness: cond_b.witness.clone(),
        worst_commutator: cond_a.worst_norm,
        worst_b_defect: Some(cond_b.worst_defect),
    };
    if !cond_b.holds {
        return Ok(SsdResult {
            verdict,
            basis: Some(cond_b.basis),
            form: None,
        });
    }

    let form = build_form(vectors, &cond_b.basis, d_a, d_b)?;
    Ok(SsdResult {
        verdict,
        basis: Some(cond_b.basis),
        form: Some(form),
    })
}

fn build_form(
    vectors: &[BipartiteVector],
    basis: &CommonBasis,
    d_a: usize,
    d_b: usize,
) -> Result<SimultaneousForm> {
    let l = vectors.len();
    let k = d_a.min(d_b);
    let psis: Vec<ComplexMatrix> = vectors.iter().map(psi_matrix).collect();

    let max_weight = (0..d_a)
        .flat_map(|j| (0..l).map(move |a| (j, a)))
        .map(|(j, a)| basis.weight(j, a))
        .fold(0.0, f64::max);
    let rank_tol = 1e-10 * max_weight;
    let reference = |j: usize| -> Option<usize> { (0..l).find(|&a| basis.weight(j, a) > rank_tol) };

    // supported joint vectors sort ahead of unsupported ones
    if let Some(j) = (k..d_a).find(|&j| reference(j).is_some()) {
        return Err(Error::BasisOrthogonalityFailure {
            defect: basis.weight(j, reference(j).unwrap_or(0)),
        });
    }

    // right singular partners b_j = Ψ_ref† v_j / √μ; the B-side ket is conj(b_j)
    let mut partners: Vec<Option<Vec<C64>>> = Vec::with_capacity(k);
    for j in 0..k {
        partners.push(reference(j).map(|a| {
            let vj = basis.vectors.column(j);
            let scale = 1.0 / basis.weight(j, a).sqrt();
            psis[a]
                .adjoint()
                .mat_vec(&vj)
                .into_iter()
                .map(|z| z * scale)
                .collect()
        }));
    }

    let supported: Vec<Vec<C64>> = partners
        .iter()
        .flatten()
        .map(|b| b.iter().map(|z| z.conj()).collect())
        .collect();
    let s = supported.len();
    let gram = ComplexMatrix::from_fn(s, s, |i, j| inner(&supported[i], &supported[j]));
    let defect = (&gram - &ComplexMatrix::identity(s)).frobenius_norm();
    if defect > ORTHOGONALITY_GUARD {
        return Err(Error::BasisOrthogonalityFailure { defect });
    }

    let completed = complete_orthonormal(supported, d_b);
    let mut extras = completed[s..].iter().cloned();
    let mut kets: Vec<Vec<C64>> = Vec::with_capacity(d_b);
    let mut next_supported = completed[..s].iter().cloned();
    for partner in &partners {
        let ket = match partner {
            Some(_) => next_supported.next(),
            None => extras.next(),
        };
        kets.push(ket.expect("completion yields d_B vectors"));
    }
    kets.extend(extras);

    let ua = basis.vectors.adjoint();
    let ub = ComplexMatrix::from_columns(d_b, &kets).adjoint();
    let ub_t = ub.transpose();

    let mut coeffs = ComplexMatrix::zeros(l, k);
    let mut residual: f64 = 0.0;
    for (a, psi) in psis.iter().enumerate() {
        let local = &(&ua * psi) * &ub_t;
        for j in 0..k {
            coeffs[(a, j)] = local[(j, j)];
        }
        residual = residual.max(local.off_diagonal_norm());
    }

    Ok(SimultaneousForm {
        ua,
        ub,
        coeffs,
        residual,
    })
}

/// Maximally correlated form Σ_jk α_jk |jj⟩⟨kk| of an ensemble, in the
/// local bases of a simultaneous Schmidt decomposition.
#[derive(Debug, Clone)]
pub struct McsForm {
    pub alpha: ComplexMatrix,
    pub ua: ComplexMatrix,
    pub ub: ComplexMatrix,
    /// Largest elementwise mismatch between the conjugated state and the
    /// maximally correlated form built from `alpha`.
    pub residual: f64,
}

impl McsForm {
    /// Embeds Σ α_jk |jj⟩⟨kk| as a (d_A·d_B)² matrix.
    pub fn expand(&self) -> ComplexMatrix {
        let (d_a, d_b) = (self.ua.rows(), self.ub.rows());
        let k = self.alpha.rows();
        let mut m = ComplexMatrix::zeros(d_a * d_b, d_a * d_b);
        for j in 0..k {
            for i in 0..k {
                m[(j * d_b + j, i * d_b + i)] = self.alpha[(j, i)];
            }
        }
        m
    }

    pub fn density(&self) -> Result<DensityMatrix> {
        DensityMatrix::new(self.ua.rows(), self.ub.rows(), self.expand())
    }
}

/// α_jk = Σ_αβ a_αβ b_j^(α) b_k^(β)*, verified elementwise against
/// (U_A⊗U_B)ρ(U_A⊗U_B)†.
pub fn to_mcs(e: &GramEnsemble, ssd: &SsdResult) -> Result<McsForm> {
    let form = match (&ssd.form, ssd.verdict.decomposable) {
        (Some(form), true) => form,
        _ => return Err(Error::NotDecomposable),
    };
    let l = e.vectors().len();
    if form.coeffs.rows() != l {
        return Err(Error::DimensionMismatch {
            expected: format!("{} coefficient rows", l),
            found: format!("{}", form.coeffs.rows()),
        });
    }
    let k = form.coeffs.cols();
    let w = e.weights();
    let c = &form.coeffs;
    let alpha = ComplexMatrix::from_fn(k, k, |j, i| {
        let mut acc = C64::new(0.0, 0.0);
        for a in 0..l {
            for b in 0..l {
                acc += w[(a, b)] * c[(a, j)] * c[(b, i)].conj();
            }
        }
        acc
    });
    let mut mcs = McsForm {
        alpha,
        ua: form.ua.clone(),
        ub: form.ub.clone(),
        residual: 0.0,
    };
    let rho = assemble_density(e)?;
    let conjugated = rho.conjugate_local(&mcs.ua, &mcs.ub);
    let mismatch = (&conjugated - &mcs.expand()).max_abs();
    if mismatch > MCS_VERIFY_TOL {
        return Err(Error::VerificationFailure { mismatch });
    }
    mcs.residual = mismatch;
    Ok(mcs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermitian_eig, DEFAULT_TOL};
    use crate::random::{random_unit_vector, random_unitary, Rng64};
    use crate::states::schmidt_single;

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn from_terms(d: usize, terms: &[(usize, usize, f64)]) -> BipartiteVector {
        let mut amps = vec![r(0.0); d * d];
        for &(j, k, w) in terms {
            amps[j * d + k] = r(w);
        }
        BipartiteVector::normalized(d, d, amps).unwrap()
    }

    /// Example 1 exactly as printed: ψ₂ = (|13⟩+|21⟩+|33⟩)/√3.
    fn example1() -> Vec<BipartiteVector> {
        vec![
            from_terms(4, &[(0, 0, 1.0), (1, 2, 1.0), (2, 1, 1.0)]),
            from_terms(4, &[(1, 3, 1.0), (2, 1, 1.0), (3, 3, 1.0)]),
        ]
    }

    /// Example 1 with ψ₂'s last term moved to |34⟩ in a 4⊗5 system, the
    /// smallest change reproducing the printed products Ψ_αΨ_β†.
    fn example1_corrected() -> Vec<BipartiteVector> {
        let term = |terms: &[(usize, usize)]| {
            let mut amps = vec![r(0.0); 20];
            for &(j, k) in terms {
                amps[j * 5 + k] = r(1.0);
            }
            BipartiteVector::normalized(4, 5, amps).unwrap()
        };
        vec![
            term(&[(0, 0), (1, 2), (2, 1)]),
            term(&[(1, 3), (2, 1), (3, 4)]),
        ]
    }

    fn example2() -> Vec<BipartiteVector> {
        vec![
            from_terms(4, &[(1, 1, 1.0), (1, 2, -1.0), (2, 1, -1.0), (2, 2, 1.0)]),
            from_terms(
                4,
                &[
                    (0, 0, 2.0),
                    (1, 1, 1.0),
                    (1, 2, 1.0),
                    (2, 1, 1.0),
                    (2, 2, 1.0),
                    (3, 3, 2.0),
                ],
            ),
        ]
    }

    #[test]
    fn example_one_as_printed_fails_condition_a() {
        // |13⟩ and |33⟩ share a B index, so Ψ₂Ψ₂† couples |1_A⟩ and |3_A⟩
        let a = check_condition_a(&example1(), DEFAULT_TOL).unwrap();
        assert!(!a.holds);
        assert!(a.worst_norm > 0.1);
    }

    #[test]
    fn example_one_products() {
        let fam = product_family(&example1_corrected());
        let t = 1.0 / 3.0;
        let p11 = ComplexMatrix::from_diagonal(&[r(t), r(t), r(t), r(0.0)]);
        let p22 = ComplexMatrix::from_diagonal(&[r(0.0), r(t), r(t), r(t)]);
        let p12 = ComplexMatrix::from_diagonal(&[r(0.0), r(0.0), r(t), r(0.0)]);
        assert!((&fam[0].1 - &p11).frobenius_norm() < 1e-15);
        assert!((&fam[3].1 - &p22).frobenius_norm() < 1e-15);
        assert!((&fam[1].1 - &p12).frobenius_norm() < 1e-15);
        assert!((&fam[2].1 - &p12).frobenius_norm() < 1e-15);
    }

    #[test]
    fn example_one_violates_b_only() {
        let v = example1_corrected();
        assert!(check_condition_a(&v, DEFAULT_TOL).unwrap().holds);
        let b = check_condition_b(&v, DEFAULT_TOL, 0).unwrap();
        assert!(!b.holds);
        match b.witness.unwrap() {
            Witness::Coefficient {
                pair,
                lhs,
                rhs,
                basis_vector,
                ..
            } => {
                assert_eq!(pair, (0, 1));
                assert!(lhs.abs() < 1e-12);
                assert!((rhs - 1.0 / 9.0).abs() < 1e-12);
                // the violating joint vector is |1_A⟩
                assert!((basis_vector[1].norm() - 1.0).abs() < 1e-12);
            }
            w => panic!("unexpected witness {w:?}"),
        }
    }

    #[test]
    fn example_one_negative_for_every_tolerance() {
        for exp in [-12, -11, -10, -9, -8, -7, -6] {
            let tol = 10f64.powi(exp);
            assert!(!decompose(&example1(), tol, 1).unwrap().verdict.decomposable);
            let v = decompose(&example1_corrected(), tol, 1).unwrap().verdict;
            assert!(v.cond_a && v.cond_b == Some(false));
        }
    }

    #[test]
    fn example_two_decomposes() {
        let res = decompose(&example2(), DEFAULT_TOL, 0).unwrap();
        assert!(res.verdict.decomposable);
        let form = res.form.unwrap();
        assert!(form.residual < 1e-12);
        let t = 1.0 / 3f64.sqrt();
        let mags = |a: usize| -> Vec<f64> {
            let mut m: Vec<f64> = (0..4).map(|k| form.coeffs[(a, k)].norm()).collect();
            m.sort_by(|x, y| y.total_cmp(x));
            m
        };
        let m1 = mags(0);
        assert!((m1[0] - 1.0).abs() < 1e-12 && m1[1..].iter().all(|x| *x < 1e-12));
        let m2 = mags(1);
        assert!(m2[..3].iter().all(|x| (x - t).abs() < 1e-12) && m2[3] < 1e-12);
        // ψ₁ carries the single largest weight, so (|1⟩−|2⟩)/√2 sorts first
        let basis = res.basis.unwrap();
        let v4 = basis.vectors.column(0);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((inner(&v4, &[r(0.0), r(h), r(-h), r(0.0)]).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn example_two_joint_basis_spans_expected_vectors() {
        let b = check_condition_b(&example2(), DEFAULT_TOL, 3).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let expected = [
            vec![r(1.0), r(0.0), r(0.0), r(0.0)],
            vec![r(0.0), r(0.0), r(0.0), r(1.0)],
            vec![r(0.0), r(h), r(h), r(0.0)],
            vec![r(0.0), r(h), r(-h), r(0.0)],
        ];
        for e in &expected {
            let best = (0..4)
                .map(|j| inner(&b.basis.vectors.column(j), e).norm())
                .fold(0.0, f64::max);
            assert!((best - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn condition_b_requires_a() {
        let mut rng = Rng64::seeded(3);
        let v: Vec<BipartiteVector> = (0..2)
            .map(|_| BipartiteVector::new(3, 3, random_unit_vector(&mut rng, 9)).unwrap())
            .collect();
        assert!(matches!(
            check_condition_b(&v, DEFAULT_TOL, 0),
            Err(Error::ConditionAViolated { .. })
        ));
        let res = decompose(&v, DEFAULT_TOL, 0).unwrap();
        assert!(!res.verdict.cond_a);
        assert!(matches!(
            res.verdict.witness,
            Some(Witness::Commutator { .. })
        ));
    }

    #[test]
    fn single_vector_matches_svd() {
        let mut rng = Rng64::seeded(12);
        for (da, db) in [(2, 3), (4, 2), (3, 3)] {
            let v = BipartiteVector::new(da, db, random_unit_vector(&mut rng, da * db)).unwrap();
            let res = decompose(std::slice::from_ref(&v), DEFAULT_TOL, 0).unwrap();
            let form = res.form.unwrap();
            let mut mags: Vec<f64> = (0..da.min(db))
                .map(|k| form.coeffs[(0, k)].norm())
                .collect();
            mags.sort_by(|x, y| y.total_cmp(x));
            let s = schmidt_single(&v).unwrap();
            for (m, c) in mags.iter().zip(&s.coeffs) {
                assert!((m - c.re).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn synthetic_family_roundtrip() {
        let mut rng = Rng64::seeded(99);
        let (da, db, l) = (4, 5, 3);
        let u = random_unitary(&mut rng, da);
        let w = random_unitary(&mut rng, db);
        let k = da.min(db);
        let vectors: Vec<BipartiteVector> = (0..l)
            .map(|_| {
                let c = random_unit_vector(&mut rng, k);
                let psi = ComplexMatrix::from_fn(da, db, |j, i| {
                    (0..k).map(|m| c[m] * u[(j, m)] * w[(i, m)]).sum()
                });
                BipartiteVector::from_psi_matrix(&psi).unwrap()
            })
            .collect();
        let res = decompose(&vectors, DEFAULT_TOL, 5).unwrap();
        assert!(res.verdict.decomposable);
        let form = res.form.unwrap();
        assert!(form.residual < 1e-9);
        for (a, v) in vectors.iter().enumerate() {
            let rebuilt = form.reconstruct(a);
            let err: f64 = rebuilt
                .iter()
                .zip(v.amplitudes())
                .map(|(x, y)| (x - y).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(err < 1e-9);
            let row: f64 = (0..k).map(|m| form.coeffs[(a, m)].norm_sqr()).sum();
            assert!((row - 1.0).abs() < 1e-9);
        }
        assert!(form.ua.unitarity_defect() < 1e-10 && form.ub.unitarity_defect() < 1e-10);
    }

    #[test]
    fn decompose_is_deterministic() {
        let a = decompose(&example2(), DEFAULT_TOL, 17)
            .unwrap()
            .form
            .unwrap();
        let b = decompose(&example2(), DEFAULT_TOL, 17)
            .unwrap()
            .form
            .unwrap();
        assert_eq!(a.ua, b.ua);
        assert_eq!(a.coeffs, b.coeffs);
    }

    #[test]
    fn sigma_to_mcs() {
        let v = example2();
        let e = GramEnsemble::mixture(v.clone(), &[0.25, 0.75]).unwrap();
        let res = decompose(&v, DEFAULT_TOL, 0).unwrap();
        let mcs = to_mcs(&e, &res).unwrap();
        assert!(mcs.residual < 1e-9);
        // direct assembly oracle: rank-one blocks ¼·|e_4⟩⟨e_4| and ¾·|u⟩⟨u|
        let spec = hermitian_eig(&mcs.alpha, 1e-10).unwrap().values;
        assert!((spec[0] - 0.75).abs() < 1e-12 && (spec[1] - 0.25).abs() < 1e-12);
        assert!((mcs.alpha.trace().re - 1.0).abs() < 1e-12);
        let diag: Vec<f64> = mcs.alpha.diagonal().iter().map(|z| z.re).collect();
        assert!(diag.iter().all(|x| (x - 0.25).abs() < 1e-12), "{diag:?}");
    }

    #[test]
    fn to_mcs_rejects_undecomposable() {
        let v = example1();
        let e = GramEnsemble::uniform(v.clone()).unwrap();
        let res = decompose(&v, DEFAULT_TOL, 0).unwrap();
        assert!(matches!(to_mcs(&e, &res), Err(Error::NotDecomposable)));
    }

    #[test]
    fn maximally_entangled_alpha_is_uniform() {
        let d = 3;
        let plus = from_terms(d, &[(0, 0, 1.0), (1, 1, 1.0), (2, 2, 1.0)]);
        let e = GramEnsemble::uniform(vec![plus.clone()]).unwrap();
        let mcs = to_mcs(&e, &decompose(&[plus], DEFAULT_TOL, 0).unwrap()).unwrap();
        // |α_jk| = 1/d; phases depend on the chosen basis
        assert!(mcs
            .alpha
            .as_slice()
            .iter()
            .all(|z| (z.norm() - 1.0 / 3.0).abs() < 1e-12));
        let spec = hermitian_eig(&mcs.alpha, 1e-10).unwrap().values;
        assert!((spec[0] - 1.0).abs() < 1e-12);
    }
}
