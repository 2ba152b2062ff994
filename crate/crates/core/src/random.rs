//! Seeded random generators for matrices, unitaries and states.
//!
//! Everything here draws from a ChaCha stream so test fixtures, benches and
//! the joint diagonalizer are reproducible from a single `u64` seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{complete_orthonormal, ComplexMatrix, C64};

/// Seeded generator used throughout the crate.
#[derive(Debug, Clone)]
pub struct Rng64(ChaCha8Rng);

impl Rng64 {
    pub fn seeded(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Independent stream for item `index` of a computation seeded by `seed`.
    pub fn stream(seed: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        Self(rng)
    }

    pub fn normal(&mut self) -> f64 {
        self.0.sample(StandardNormal)
    }

    pub fn complex_normal(&mut self) -> C64 {
        C64::new(self.normal(), self.normal())
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.0.random_range(lo..hi)
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.0.random_range(0..n)
    }

    pub fn phase(&mut self) -> C64 {
        C64::from_polar(1.0, self.uniform(0.0, std::f64::consts::TAU))
    }
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn random_matrix(rng: &mut Rng64, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| rng.complex_normal())
}

pub fn random_hermitian(rng: &mut Rng64, n: usize) -> ComplexMatrix {
    random_matrix(rng, n, n).hermitian_part()
}

/// Haar-distributed unitary (Gram–Schmidt of a Ginibre matrix).
pub fn random_unitary(rng: &mut Rng64, n: usize) -> ComplexMatrix {
    let g = random_matrix(rng, n, n);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = g.column(j);
        for _ in 0..2 {
            for b in &cols {
                let overlap: C64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                for (vk, bk) in v.iter_mut().zip(b) {
                    *vk -= overlap * bk;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    ComplexMatrix::from_columns(n, &complete_orthonormal(cols, n))
}

/// Uniformly random unit vector of length `n`.
pub fn random_unit_vector(rng: &mut Rng64, n: usize) -> Vec<C64> {
    let v: Vec<C64> = (0..n).map(|_| rng.complex_normal()).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// Random positive semidefinite matrix of unit trace and the given rank.
pub fn random_density(rng: &mut Rng64, n: usize, rank: usize) -> ComplexMatrix {
    let g = random_matrix(rng, n, rank);
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    m.scale_real(1.0 / tr)
}
