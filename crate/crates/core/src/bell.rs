//! Generalized Bell states |ψ_nm⟩ = (Zⁿ ⊗ X⁻ᵐ)|ψ₊⟩ on C^d ⊗ C^d and the
//! index-level criterion for their simultaneous Schmidt decomposability.
//!
//! Ψ_nm = Zⁿ Xᵐ / √d, and Ψ_αΨ_β† commutes with Ψ_γΨ_δ† iff the symplectic
//! product of the index differences (n_α−n_β, m_α−m_β) and
//! (n_γ−n_δ, m_γ−m_δ) vanishes mod d. A set of indices therefore passes iff
//! its differences are pairwise symplectically orthogonal. Such a set always
//! lies on a "line" p·n + q·m ≡ r (mod d) with (p, q) ≠ (0, 0), and that
//! (p, q, r) is reported as the witness. For prime d the converse holds as
//! well, so the line condition alone is the criterion; for composite d it is
//! weaker (see [`literal_witness`]).

use std::f64::consts::TAU;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::states::{apply_local_unitary, BipartiteVector};

/// Largest dimension accepted by the enumerators.
pub const MAX_ENUMERATION_DIM: usize = 8;
/// Default cap on the number of subsets an enumeration may visit.
pub const DEFAULT_SUBSET_CAP: u128 = 10_000_000;

/// Index (n, m) ∈ Z_d × Z_d of a generalized Bell state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BellIndex {
    d: usize,
    n: usize,
    m: usize,
}

impl BellIndex {
    /// Reduces `n` and `m` mod `d`.
    pub fn new(d: usize, n: i64, m: i64) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidArgument(format!("Bell dimension {d} < 2")));
        }
        let di = d as i64;
        Ok(Self {
            d,
            n: n.rem_euclid(di) as usize,
            m: m.rem_euclid(di) as usize,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn pair(&self) -> (usize, usize) {
        (self.n, self.m)
    }
}

/// ω_d = exp(2πi/d) raised to `k`.
pub fn omega_pow(d: usize, k: i64) -> C64 {
    let k = k.rem_euclid(d as i64) as f64;
    C64::from_polar(1.0, TAU * k / d as f64)
}

/// Shift operator, X|k⟩ = |k−1 mod d⟩.
pub fn weyl_x(d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, d, |i, j| {
        if i == (j + d - 1) % d {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// Clock operator, Z|k⟩ = ω_d^k |k⟩.
pub fn weyl_z(d: usize) -> ComplexMatrix {
    let diag: Vec<C64> = (0..d).map(|k| omega_pow(d, k as i64)).collect();
    ComplexMatrix::from_diagonal(&diag)
}

/// |ψ₊⟩ = d^{-1/2} Σ_k |k⟩⊗|k⟩.
pub fn maximally_entangled(d: usize) -> BipartiteVector {
    let s = 1.0 / (d as f64).sqrt();
    let amps = (0..d * d)
        .map(|i| C64::new(if i % (d + 1) == 0 { s } else { 0.0 }, 0.0))
        .collect();
    BipartiteVector::new(d, d, amps).expect("unit norm by construction")
}

/// (Zⁿ ⊗ X⁻ᵐ)|ψ₊⟩.
pub fn bell_vector(idx: BellIndex) -> BipartiteVector {
    let d = idx.d;
    let zn = weyl_z(d).pow(idx.n as u32);
    // X is a permutation matrix, so X⁻¹ = Xᵀ
    let x_inv_m = weyl_x(d).transpose().pow(idx.m as u32);
    apply_local_unitary(&maximally_entangled(d), &zn, &x_inv_m).expect("Weyl operators are unitary")
}

/// (p, q, r) with p·n + q·m ≡ r (mod d) for every member.
pub type LineWitness = (usize, usize, usize);

/// Distinct Bell indices sharing one dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BellSet {
    d: usize,
    indices: Vec<BellIndex>,
    witness: Option<LineWitness>,
}

impl BellSet {
    pub fn new(d: usize, indices: Vec<BellIndex>) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidBellSet(format!("dimension {d} < 2")));
        }
        if indices.is_empty() {
            return Err(Error::InvalidBellSet("empty set".into()));
        }
        if let Some(bad) = indices.iter().find(|i| i.d != d) {
            return Err(Error::InvalidBellSet(format!(
                "index ({}, {}) has d = {}, expected {d}",
                bad.n, bad.m, bad.d
            )));
        }
        if let Some(dup) = indices.iter().duplicates().next() {
            return Err(Error::InvalidBellSet(format!(
                "index ({}, {}) appears twice",
                dup.n, dup.m
            )));
        }
        Ok(Self {
            d,
            indices,
            witness: None,
        })
    }

    /// Builds a set from raw (n, m) pairs, reducing them mod d.
    pub fn from_pairs(d: usize, pairs: &[(i64, i64)]) -> Result<Self> {
        let indices = pairs
            .iter()
            .map(|&(n, m)| BellIndex::new(d, n, m))
            .collect::<Result<Vec<_>>>()?;
        Self::new(d, indices)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[BellIndex] {
        &self.indices
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.indices.iter().map(BellIndex::pair).collect()
    }

    pub fn witness(&self) -> Option<LineWitness> {
        self.witness
    }

    /// Runs [`check_a_prime`] and stores its witness.
    pub fn with_witness(mut self) -> Self {
        self.witness = check_a_prime(&self).witness;
        self
    }

    pub fn vectors(&self) -> Vec<BipartiteVector> {
        self.indices.iter().copied().map(bell_vector).collect()
    }
}

/// Result of the index-level criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct APrimeVerdict {
    pub holds: bool,
    pub witness: Option<LineWitness>,
}

fn symplectic(d: usize, a: (usize, usize), b: (usize, usize)) -> usize {
    (a.0 * b.1 + d * d - (a.1 * b.0) % (d * d)) % d
}

fn difference(d: usize, a: (usize, usize), b: (usize, usize)) -> (usize, usize) {
    ((a.0 + d - b.0) % d, (a.1 + d - b.1) % d)
}

/// True iff all index differences are pairwise symplectically orthogonal,
/// i.e. every pair of products Ψ_αΨ_β†, Ψ_γΨ_δ† commutes.
pub fn is_isotropic(d: usize, pairs: &[(usize, usize)]) -> bool {
    let Some(&origin) = pairs.first() else {
        return true;
    };
    let diffs: Vec<(usize, usize)> = pairs[1..]
        .iter()
        .map(|&p| difference(d, p, origin))
        .collect();
    diffs
        .iter()
        .tuple_combinations()
        .all(|(&u, &v)| symplectic(d, u, v) == 0)
}

/// First (p, q, r) in lexicographic order, starting from (0, 1, 0), with
/// p·n + q·m ≡ r (mod d) for every pair.
pub fn line_witness(d: usize, pairs: &[(usize, usize)]) -> Option<LineWitness> {
    let &(n0, m0) = pairs.first()?;
    for p in 0..d {
        for q in 0..d {
            if p == 0 && q == 0 {
                continue;
            }
            let r = (p * n0 + q * m0) % d;
            if pairs.iter().all(|&(n, m)| (p * n + q * m) % d == r) {
                return Some((p, q, r));
            }
        }
    }
    None
}

/// The bare line condition: some (p, q) ≠ (0, 0) and r with p·n + q·m ≡ r
/// for all members. Equivalent to [`check_a_prime`] for prime d only; for
/// composite d it also admits non-commuting sets (e.g. every index with even
/// n when d = 4).
pub fn literal_witness(s: &BellSet) -> Option<LineWitness> {
    line_witness(s.d, &s.pairs())
}

/// Index-level criterion for simultaneous Schmidt decomposability of the
/// member Bell states, with the lexicographically first line witness.
pub fn check_a_prime(s: &BellSet) -> APrimeVerdict {
    let pairs = s.pairs();
    if !is_isotropic(s.d, &pairs) {
        return APrimeVerdict {
            holds: false,
            witness: None,
        };
    }
    let witness = line_witness(s.d, &pairs);
    debug_assert!(witness.is_some(), "isotropic sets always lie on a line");
    APrimeVerdict {
        holds: true,
        witness,
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// Passing subset together with its line witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ListedSet {
    pub pairs: Vec<(usize, usize)>,
    pub witness: LineWitness,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationTally {
    pub d: usize,
    pub size: usize,
    pub count: u64,
    /// Passing sets in lexicographic order of their sorted index pairs.
    pub listing: Option<Vec<ListedSet>>,
}

fn enumeration_guard(d: usize, size: usize, cap: u128) -> Result<()> {
    if !(2..=MAX_ENUMERATION_DIM).contains(&d) {
        return Err(Error::InvalidArgument(format!(
            "enumeration needs 2 <= d <= {MAX_ENUMERATION_DIM}, got {d}"
        )));
    }
    if size < 2 || size > d * d {
        return Err(Error::InvalidArgument(format!(
            "subset size must lie in 2..={}, got {size}",
            d * d
        )));
    }
    let subsets = binomial((d * d) as u128, size as u128);
    if subsets > cap {
        return Err(Error::TooLarge { subsets, cap });
    }
    Ok(())
}

/// Counts every `size`-subset of Z_d × Z_d that passes [`check_a_prime`].
pub fn enumerate_a_prime_sets(
    d: usize,
    size: usize,
    list: bool,
    cap: u128,
) -> Result<EnumerationTally> {
    enumeration_guard(d, size, cap)?;
    let all: Vec<(usize, usize)> = (0..d).cartesian_product(0..d).collect();
    let mut count = 0u64;
    let mut listing = list.then(Vec::new);
    for subset in all.iter().copied().combinations(size) {
        if !is_isotropic(d, &subset) {
            continue;
        }
        count += 1;
        if let Some(out) = listing.as_mut() {
            let witness = line_witness(d, &subset).expect("isotropic sets lie on a line");
            out.push(ListedSet {
                pairs: subset,
                witness,
            });
        }
    }
    Ok(EnumerationTally {
        d,
        size,
        count,
        listing,
    })
}

/// Which coordinate of the special families runs over Z_d.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// {(n, f·n + g)}
    NParam,
    /// {(f·m + g, m)}
    MParam,
}

/// The d-member families {(n, fn+g)} or {(fm+g, m)}.
pub fn special_family(d: usize, f: i64, g: i64, orientation: Orientation) -> Result<BellSet> {
    let pairs: Vec<(i64, i64)> = (0..d as i64)
        .map(|t| match orientation {
            Orientation::NParam => (t, f * t + g),
            Orientation::MParam => (f * t + g, t),
        })
        .collect();
    Ok(BellSet::from_pairs(d, &pairs)?.with_witness())
}

/// Confirms exhaustively that no (d+1)-subset of Bell indices passes.
pub fn max_set_bound_check(d: usize, cap: u128) -> Result<bool> {
    Ok(enumerate_a_prime_sets(d, d + 1, false, cap)?.count == 0)
}
