//! Property tests for invariants that hold across modules.

use proptest::prelude::*;

use crate::bell::{check_a_prime, line_witness, literal_witness, BellSet};
use crate::entropy::von_neumann_entropy;
use crate::linalg::{commutator_norm, hermitian_eig, svd, ComplexMatrix, C64, DEFAULT_TOL};
use crate::locc::LabelGroup;
use crate::random::{
    random_density, random_hermitian, random_matrix, random_unit_vector, random_unitary, Rng64,
};
use crate::ssd::{check_condition_a, decompose};
use crate::states::{apply_local_unitary, psi_matrix, schmidt_single, BipartiteVector};

fn is_prime(d: usize) -> bool {
    d >= 2 && (2..d).all(|k| !d.is_multiple_of(k))
}

fn sorted_moduli(row: &[C64]) -> Vec<f64> {
    let mut m: Vec<f64> = row.iter().map(|z| z.norm()).collect();
    m.sort_by(|a, b| b.total_cmp(a));
    m
}

fn bell_set(d: usize, raw: &[(usize, usize)]) -> Option<BellSet> {
    let mut pairs: Vec<(i64, i64)> = raw
        .iter()
        .map(|&(n, m)| ((n % d) as i64, (m % d) as i64))
        .collect();
    pairs.sort_unstable();
    pairs.dedup();
    BellSet::from_pairs(d, &pairs).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn commutator_is_antisymmetric_and_unitarily_invariant(seed: u64, n in 1usize..6) {
        let mut rng = Rng64::seeded(seed);
        let (a, b) = (random_matrix(&mut rng, n, n), random_matrix(&mut rng, n, n));
        let u = random_unitary(&mut rng, n);
        let ab = commutator_norm(&a, &b).unwrap();
        prop_assert!((ab - commutator_norm(&b, &a).unwrap()).abs() <= 1e-12 * ab.max(1.0));
        let conj = |m: &ComplexMatrix| &(&u * m) * &u.adjoint();
        let rotated = commutator_norm(&conj(&a), &conj(&b)).unwrap();
        prop_assert!((ab - rotated).abs() <= 1e-10 * ab.max(1.0));
    }

    #[test]
    fn eigen_and_svd_reassemble(seed: u64, r in 1usize..7, c in 1usize..7) {
        let mut rng = Rng64::seeded(seed);
        let h = random_hermitian(&mut rng, r);
        let e = hermitian_eig(&h, 1e-12).unwrap();
        prop_assert!(e.residual < 1e-10 * h.frobenius_norm().max(1.0));
        prop_assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
        let m = random_matrix(&mut rng, r, c);
        let s = svd(&m).unwrap();
        let sigma = ComplexMatrix::from_diagonal(
            &s.singular_values.iter().map(|&x| C64::new(x, 0.0)).collect::<Vec<_>>(),
        );
        let back = &(&s.u * &sigma) * &s.v.adjoint();
        prop_assert!((&back - &m).max_abs() < 1e-10 * m.frobenius_norm().max(1.0));
    }

    #[test]
    fn psi_matrix_round_trip(seed: u64, da in 1usize..7, db in 1usize..7) {
        let mut rng = Rng64::seeded(seed);
        let v = BipartiteVector::new(da, db, random_unit_vector(&mut rng, da * db)).unwrap();
        let psi = psi_matrix(&v);
        prop_assert_eq!((psi.rows(), psi.cols()), (da, db));
        prop_assert_eq!(BipartiteVector::from_psi_matrix(&psi).unwrap(), v);
    }

    #[test]
    fn schmidt_coefficients_are_local_invariants(seed: u64, da in 1usize..6, db in 1usize..6) {
        let mut rng = Rng64::seeded(seed);
        let v = BipartiteVector::new(da, db, random_unit_vector(&mut rng, da * db)).unwrap();
        let (ua, ub) = (random_unitary(&mut rng, da), random_unitary(&mut rng, db));
        let w = apply_local_unitary(&v, &ua, &ub).unwrap();
        let (s, t) = (schmidt_single(&v).unwrap(), schmidt_single(&w).unwrap());
        let total: f64 = s.coeffs.iter().map(|z| z.norm_sqr()).sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        for (x, y) in s.coeffs.iter().zip(&t.coeffs) {
            prop_assert!((x - y).norm() < 1e-10);
        }
    }

    #[test]
    fn decomposability_survives_local_unitaries(seed: u64, d in 2usize..6, l in 1usize..4) {
        let mut rng = Rng64::seeded(seed);
        let (ua, ub) = (random_unitary(&mut rng, d), random_unitary(&mut rng, d));
        let family: Vec<BipartiteVector> = (0..l)
            .map(|_| {
                let diag: Vec<C64> = (0..d).map(|_| rng.complex_normal()).collect();
                let psi = &(&ua * &ComplexMatrix::from_diagonal(&diag)) * &ub.transpose();
                BipartiteVector::from_psi_matrix(&psi.scale_real(1.0 / psi.frobenius_norm())).unwrap()
            })
            .collect();
        let (va, vb) = (random_unitary(&mut rng, d), random_unitary(&mut rng, d));
        let moved: Vec<BipartiteVector> =
            family.iter().map(|v| apply_local_unitary(v, &va, &vb).unwrap()).collect();
        let (r0, r1) = (decompose(&family, DEFAULT_TOL, seed).unwrap(), decompose(&moved, DEFAULT_TOL, seed).unwrap());
        prop_assert!(r0.verdict.decomposable && r1.verdict.decomposable);
        let (f0, f1) = (r0.form.unwrap(), r1.form.unwrap());
        for alpha in 0..l {
            let (a, b) = (sorted_moduli(f0.coeffs.row(alpha)), sorted_moduli(f1.coeffs.row(alpha)));
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x - y).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn entropy_bounds_and_invariance(seed: u64, n in 1usize..7, rank in 1usize..7) {
        let mut rng = Rng64::seeded(seed);
        let rho = random_density(&mut rng, n, rank.min(n));
        let s = von_neumann_entropy(&rho).unwrap();
        prop_assert!(s >= 0.0 && s <= (rank.min(n) as f64).log2() + 1e-10);
        let u = random_unitary(&mut rng, n);
        let t = von_neumann_entropy(&(&(&u * &rho) * &u.adjoint())).unwrap();
        prop_assert!((s - t).abs() < 1e-9);
    }

    #[test]
    fn criterion_is_translation_invariant(
        d in 2usize..7,
        raw in prop::collection::vec((0usize..7, 0usize..7), 1..7),
        shift in (0usize..7, 0usize..7),
    ) {
        let Some(s) = bell_set(d, &raw) else { return Ok(()) };
        let moved: Vec<(usize, usize)> =
            s.pairs().iter().map(|&(n, m)| (n + shift.0, m + shift.1)).collect();
        let t = bell_set(d, &moved).unwrap();
        prop_assert_eq!(check_a_prime(&s).holds, check_a_prime(&t).holds);
    }

    #[test]
    fn algebraic_and_matrix_criteria_agree(
        d in 2usize..6,
        raw in prop::collection::vec((0usize..5, 0usize..5), 1..6),
    ) {
        let Some(s) = bell_set(d, &raw) else { return Ok(()) };
        let v = check_a_prime(&s);
        prop_assert_eq!(v.holds, check_condition_a(&s.vectors(), DEFAULT_TOL).unwrap().holds);
        if let Some((p, q, r)) = v.witness {
            prop_assert!(s.pairs().iter().all(|&(n, m)| (p * n + q * m) % d == r));
        }
        if is_prime(d) {
            prop_assert_eq!(v.holds, literal_witness(&s).is_some());
        } else if v.holds {
            prop_assert!(line_witness(d, &s.pairs()).is_some());
        }
    }

    #[test]
    fn label_group_arithmetic(d in 2usize..9, a in 0usize..64, b in 0usize..64) {
        for g in LabelGroup::candidates(d) {
            let (a, b) = (a % d, b % d);
            prop_assert_eq!(g.add(g.sub(a, b), b), a);
            prop_assert!((g.character(a, b) - g.character(b, a)).norm() < 1e-12);
        }
    }
}
