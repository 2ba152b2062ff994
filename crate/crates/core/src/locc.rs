//! One-way LOCC discrimination of simultaneously Schmidt decomposable Bell
//! sets.
//!
//! After the simultaneous Schmidt transform every member reads
//! d^{-1/2} Σ_g γ_α χ_{r_α}(g) |g⟩⊗|g⟩ for a character χ_{r_α} of a label
//! group G of order d. A Fourier transform F on A and its conjugate on B
//! turn this into d^{-1/2} Σ_b |b + r_α⟩⊗|b⟩, so both parties measure in the
//! computational basis and the label is the group difference of outcomes.
//! For cyclic G = Z_d, F is H₀ with entries d^{-1/2} ω^{-jk} and the decoder
//! is (a − b) mod d. Composite d can require G = Z_e1 × Z_e2 (for instance
//! the cosets of {0,2}² at d = 4, whose products all square to ±1).

use std::f64::consts::TAU;

use itertools::Itertools;

use crate::bell::{check_a_prime, BellSet, MAX_ENUMERATION_DIM};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64, DEFAULT_TOL};
use crate::random::Rng64;
use crate::ssd::decompose;
use crate::states::{apply_local_unitary, BipartiteVector};

/// Phase-pattern matching tolerance of the canonicalization search.
pub const MATCH_TOL: f64 = 1e-8;
/// Largest deviation of a transformed member from its target.
pub const TARGET_TOL: f64 = 1e-9;
/// Born probabilities below this are outside the outcome support.
pub const SUPPORT_FLOOR: f64 = 1e-12;

/// Z_e1 × Z_e2 with e2 | e1 and e1·e2 = d. Element (g1, g2) is encoded as
/// the outcome index g1 + e1·g2, so the cyclic group (e2 = 1) is plain Z_d.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LabelGroup {
    pub e1: usize,
    pub e2: usize,
}

impl LabelGroup {
    pub fn cyclic(d: usize) -> Self {
        Self { e1: d, e2: 1 }
    }

    pub fn new(e1: usize, e2: usize) -> Result<Self> {
        if e1 == 0 || e2 == 0 || !e1.is_multiple_of(e2) {
            return Err(Error::InvalidArgument(format!(
                "label group Z_{e1} x Z_{e2} needs e2 | e1"
            )));
        }
        Ok(Self { e1, e2 })
    }

    /// Cyclic first, then by increasing e2.
    pub fn candidates(d: usize) -> Vec<Self> {
        (1..=d)
            .filter(|&e2| d.is_multiple_of(e2 * e2) && (d / e2).is_multiple_of(e2))
            .map(|e2| Self { e1: d / e2, e2 })
            .collect()
    }

    pub fn order(&self) -> usize {
        self.e1 * self.e2
    }

    pub fn is_cyclic(&self) -> bool {
        self.e2 == 1
    }

    fn split(&self, x: usize) -> (usize, usize) {
        (x % self.e1, x / self.e1)
    }

    fn join(&self, g: (usize, usize)) -> usize {
        g.0 + self.e1 * g.1
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        let (a, b) = (self.split(a), self.split(b));
        self.join((
            (a.0 + self.e1 - b.0) % self.e1,
            (a.1 + self.e2 - b.1) % self.e2,
        ))
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (a, b) = (self.split(a), self.split(b));
        self.join(((a.0 + b.0) % self.e1, (a.1 + b.1) % self.e2))
    }

    /// χ_r(g).
    pub fn character(&self, r: usize, g: usize) -> C64 {
        let (r, g) = (self.split(r), self.split(g));
        let turns = (r.0 * g.0) as f64 / self.e1 as f64 + (r.1 * g.1) as f64 / self.e2 as f64;
        C64::from_polar(1.0, TAU * turns)
    }

    /// F[a, g] = d^{-1/2} conj(χ_a(g)); equals H₀ for the cyclic group.
    pub fn fourier(&self) -> ComplexMatrix {
        let d = self.order();
        let s = 1.0 / (d as f64).sqrt();
        ComplexMatrix::from_fn(d, d, |a, g| self.character(a, g).conj() * s)
    }

    /// Label read off from the outcomes a (on A) and b (on B).
    pub fn decode(&self, a: usize, b: usize) -> usize {
        self.sub(a, b)
    }
}

/// Local unitaries and labels discriminating the members of a Bell set.
#[derive(Debug, Clone)]
pub struct LoccProtocol {
    pub d: usize,
    pub group: LabelGroup,
    pub ua: ComplexMatrix,
    pub ub: ComplexMatrix,
    /// r_α for member α, encoded as group elements.
    pub labels: Vec<usize>,
    /// Member indices (n, m) in input order.
    pub members: Vec<(usize, usize)>,
    pub seed: u64,
}

impl LoccProtocol {
    pub fn decode(&self, a: usize, b: usize) -> usize {
        self.group.decode(a, b)
    }

    /// Amplitude d^{-1/2} δ(a = b + r) of the ideal transformed member.
    pub fn target(&self, label: usize) -> BipartiteVector {
        let d = self.d;
        let s = 1.0 / (d as f64).sqrt();
        let mut amps = vec![C64::new(0.0, 0.0); d * d];
        for b in 0..d {
            amps[self.group.add(b, label) * d + b] = C64::new(s, 0.0);
        }
        BipartiteVector::new(d, d, amps).expect("unit norm by construction")
    }

    /// (U_A ⊗ U_B)|ψ_α⟩ for every member of `s`.
    pub fn transformed(&self, s: &BellSet) -> Result<Vec<BipartiteVector>> {
        self.require_matches(s)?;
        s.vectors()
            .iter()
            .map(|v| apply_local_unitary(v, &self.ua, &self.ub))
            .collect()
    }

    fn require_matches(&self, s: &BellSet) -> Result<()> {
        if s.d() != self.d {
            return Err(Error::ProtocolMismatch(format!(
                "protocol for d = {}, state set has d = {}",
                self.d,
                s.d()
            )));
        }
        if s.pairs() != self.members {
            return Err(Error::ProtocolMismatch(format!(
                "protocol members {:?} differ from state set {:?}",
                self.members,
                s.pairs()
            )));
        }
        Ok(())
    }
}

/// Max elementwise distance between `v` and `target` after removing the
/// best global phase.
fn phase_free_distance(v: &BipartiteVector, target: &BipartiteVector) -> f64 {
    let overlap = target.overlap(v);
    let gamma = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        C64::new(1.0, 0.0)
    };
    v.amplitudes()
        .iter()
        .zip(target.amplitudes())
        .map(|(x, t)| (x - gamma * t).norm())
        .fold(0.0, f64::max)
}

/// Label of member `phases` under the assignment `perm` (group element g
/// sits at Schmidt index perm[g]), if its pattern is γ·χ_r.
fn match_character(group: &LabelGroup, phases: &[C64], perm: &[usize]) -> Option<usize> {
    let gamma = phases[perm[0]];
    let turns = |g: usize, e: usize| {
        let z = phases[perm[g]] / gamma;
        (z.arg() / TAU * e as f64).round().rem_euclid(e as f64) as usize
    };
    let r1 = if group.e1 > 1 { turns(1, group.e1) } else { 0 };
    let r2 = if group.e2 > 1 {
        turns(group.e1, group.e2)
    } else {
        0
    };
    let r = group.join((r1, r2));
    (0..group.order())
        .all(|g| (phases[perm[g]] - gamma * group.character(r, g)).norm() < MATCH_TOL)
        .then_some(r)
}

/// Searches a bijection between group elements and Schmidt indices under
/// which every member's phase pattern is a character.
fn canonicalize(group: &LabelGroup, phases: &[Vec<C64>]) -> Option<(Vec<usize>, Vec<usize>)> {
    let d = group.order();
    'perm: for perm in (0..d).permutations(d) {
        let mut labels = Vec::with_capacity(phases.len());
        for p in phases {
            match match_character(group, p, &perm) {
                Some(r) => labels.push(r),
                None => continue 'perm,
            }
        }
        if labels.iter().all_unique() {
            return Some((perm, labels));
        }
    }
    None
}

/// Builds the discrimination protocol for a set passing the index criterion.
/// The first member is the reference and always receives label 0.
pub fn synthesize(s: &BellSet, seed: u64) -> Result<LoccProtocol> {
    let d = s.d();
    if d > MAX_ENUMERATION_DIM {
        return Err(Error::InvalidArgument(format!(
            "protocol synthesis needs d <= {MAX_ENUMERATION_DIM}, got {d}"
        )));
    }
    if !check_a_prime(s).holds {
        return Err(Error::NotAPrime);
    }
    let vectors = s.vectors();
    let result = decompose(&vectors, DEFAULT_TOL, seed)?;
    let form = result.form.ok_or(Error::NotDecomposable)?;
    if form.schmidt_rank() != d {
        return Err(Error::CanonicalizationFailure {
            mismatch: (d - form.schmidt_rank()) as f64,
        });
    }

    // rescale B so the reference member has all coefficients d^{-1/2}
    let unit = 1.0 / (d as f64).sqrt();
    let correction: Vec<C64> = (0..d)
        .map(|j| C64::new(unit, 0.0) / form.coeffs[(0, j)])
        .collect();
    let phases: Vec<Vec<C64>> = (0..s.len())
        .map(|alpha| {
            (0..d)
                .map(|j| {
                    let z = form.coeffs[(alpha, j)] * correction[j];
                    z / z.norm()
                })
                .collect()
        })
        .collect();
    let ub_corrected = &ComplexMatrix::from_diagonal(&correction) * &form.ub;

    let mut worst = f64::INFINITY;
    for group in LabelGroup::candidates(d) {
        let Some((perm, labels)) = canonicalize(&group, &phases) else {
            continue;
        };
        let mut p = ComplexMatrix::zeros(d, d);
        for (g, &j) in perm.iter().enumerate() {
            p[(g, j)] = C64::new(1.0, 0.0);
        }
        let f = group.fourier();
        let protocol = LoccProtocol {
            d,
            group,
            ua: &(&f * &p) * &form.ua,
            ub: &(&f.conj() * &p) * &ub_corrected,
            labels,
            members: s.pairs(),
            seed,
        };
        let mismatch = protocol
            .transformed(s)?
            .iter()
            .zip(&protocol.labels)
            .map(|(v, &r)| phase_free_distance(v, &protocol.target(r)))
            .fold(0.0, f64::max);
        if mismatch <= TARGET_TOL {
            return Ok(protocol);
        }
        worst = worst.min(mismatch);
    }
    Err(Error::CanonicalizationFailure { mismatch: worst })
}

/// Exhaustive check of the decoder over every outcome pair.
#[derive(Debug, Clone, PartialEq)]
pub struct DecoderAudit {
    /// Outcome pairs with nonzero probability, per member.
    pub support_sizes: Vec<usize>,
    /// Largest probability of any member decoding to a wrong label.
    pub worst_error_probability: f64,
}

impl DecoderAudit {
    pub fn exact(&self) -> bool {
        self.worst_error_probability < SUPPORT_FLOOR * self.support_sizes.len().max(1) as f64
    }
}

fn born(v: &BipartiteVector) -> Vec<f64> {
    v.amplitudes().iter().map(|z| z.norm_sqr()).collect()
}

/// Enumerates all d² outcome pairs of every transformed member and checks
/// that each supported pair decodes to that member's label.
pub fn audit_decoder(p: &LoccProtocol, s: &BellSet) -> Result<DecoderAudit> {
    let d = p.d;
    let mut support_sizes = Vec::with_capacity(s.len());
    let mut worst: f64 = 0.0;
    for (v, &label) in p.transformed(s)?.iter().zip(&p.labels) {
        let probs = born(v);
        let mut support = 0;
        let mut wrong = 0.0;
        for a in 0..d {
            for b in 0..d {
                let prob = probs[a * d + b];
                if prob > SUPPORT_FLOOR {
                    support += 1;
                }
                if p.decode(a, b) != label {
                    wrong += prob;
                }
            }
        }
        support_sizes.push(support);
        worst = worst.max(wrong);
    }
    Ok(DecoderAudit {
        support_sizes,
        worst_error_probability: worst,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MemberTally {
    pub trials: u64,
    pub successes: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationReport {
    pub trials: u64,
    pub per_member: Vec<MemberTally>,
    pub success_rate: f64,
    pub seed: u64,
    /// Outcome counts on A and on B.
    pub marginal_a: Vec<u64>,
    pub marginal_b: Vec<u64>,
}

impl SimulationReport {
    pub fn successes(&self) -> u64 {
        self.per_member.iter().map(|t| t.successes).sum()
    }
}

/// Runs the protocol on uniformly chosen members, sampling the joint
/// outcome from the exact Born distribution of the transformed state.
/// Trial t draws from its own stream of `seed`, so results do not depend on
/// evaluation order.
pub fn simulate(p: &LoccProtocol, s: &BellSet, trials: u64, seed: u64) -> Result<SimulationReport> {
    let d = p.d;
    let cumulative: Vec<Vec<f64>> = p
        .transformed(s)?
        .iter()
        .map(|v| {
            born(v)
                .into_iter()
                .scan(0.0, |acc, x| {
                    *acc += x;
                    Some(*acc)
                })
                .collect()
        })
        .collect();
    let mut per_member = vec![MemberTally::default(); s.len()];
    let mut marginal_a = vec![0u64; d];
    let mut marginal_b = vec![0u64; d];
    for trial in 0..trials {
        let mut rng = Rng64::stream(seed, trial);
        let alpha = rng.below(s.len());
        let cdf = &cumulative[alpha];
        let u = rng.uniform(0.0, 1.0) * cdf[cdf.len() - 1];
        let outcome = cdf.partition_point(|&c| c <= u).min(cdf.len() - 1);
        let (a, b) = (outcome / d, outcome % d);
        marginal_a[a] += 1;
        marginal_b[b] += 1;
        let tally = &mut per_member[alpha];
        tally.trials += 1;
        if p.decode(a, b) == p.labels[alpha] {
            tally.successes += 1;
        }
    }
    let successes: u64 = per_member.iter().map(|t| t.successes).sum();
    Ok(SimulationReport {
        trials,
        per_member,
        success_rate: if trials == 0 {
            1.0
        } else {
            successes as f64 / trials as f64
        },
        seed,
        marginal_a,
        marginal_b,
    })
}
