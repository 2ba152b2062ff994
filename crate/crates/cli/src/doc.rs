//! JSON documents read and written by the command-line tool.
//!
//! Complex numbers are always two-element arrays `[re, im]`. Floats are
//! written in shortest round-trip form and parsed exactly, so every document
//! survives a write/read cycle bit for bit.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use schmidtkit::bell::{BellSet, EnumerationTally};
use schmidtkit::entropy::EntanglementReport;
use schmidtkit::locc::{DecoderAudit, LabelGroup, LoccProtocol, SimulationReport};
use schmidtkit::ssd::{McsForm, SimultaneousForm, SsdVerdict, Witness};
use schmidtkit::states::{BipartiteVector, GramEnsemble};
use schmidtkit::{ComplexMatrix, C64};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub type Cx = [f64; 2];
pub type MatrixDoc = Vec<Vec<Cx>>;

pub fn cx(z: C64) -> Cx {
    [z.re, z.im]
}

pub fn from_cx(c: Cx) -> C64 {
    C64::new(c[0], c[1])
}

pub fn matrix_doc(m: &ComplexMatrix) -> MatrixDoc {
    (0..m.rows())
        .map(|i| m.row(i).iter().copied().map(cx).collect())
        .collect()
}

pub fn matrix_from_doc(rows: &MatrixDoc, field: &str) -> CliResult<ComplexMatrix> {
    let n_rows = rows.len();
    let n_cols = rows.first().map_or(0, Vec::len);
    if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != n_cols) {
        return Err(CliError::field(
            format!("{field}[{i}]"),
            format!("expected {n_cols} entries, found {}", row.len()),
        ));
    }
    let data = rows.iter().flatten().copied().map(from_cx).collect();
    ComplexMatrix::from_row_major(n_rows, n_cols, data)
        .map_err(|e| CliError::field(field, e.to_string()))
}

pub fn read_document<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: path.to_owned(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents contain only finite numbers");
    s.push('\n');
    s
}

/// Input vectors with optional Gram weights (uniform 1/l on the diagonal
/// when absent).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StatesDocument {
    #[serde(rename = "dA")]
    pub d_a: usize,
    #[serde(rename = "dB")]
    pub d_b: usize,
    pub vectors: Vec<Vec<Cx>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<MatrixDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<BTreeMap<String, String>>,
}

impl StatesDocument {
    pub fn from_ensemble(e: &GramEnsemble) -> Self {
        let (d_a, d_b) = e.dims();
        Self {
            d_a,
            d_b,
            vectors: e
                .vectors()
                .iter()
                .map(|v| v.amplitudes().iter().copied().map(cx).collect())
                .collect(),
            weights: Some(matrix_doc(e.weights())),
            meta: None,
        }
    }

    pub fn state_vectors(&self) -> CliResult<Vec<BipartiteVector>> {
        if self.vectors.is_empty() {
            return Err(CliError::field(
                "vectors",
                "at least one vector is required",
            ));
        }
        let expected = self.d_a * self.d_b;
        self.vectors
            .iter()
            .enumerate()
            .map(|(i, amps)| {
                let field = format!("vectors[{i}]");
                if amps.len() != expected {
                    return Err(CliError::field(
                        field,
                        format!(
                            "expected dA*dB = {expected} amplitudes, found {}",
                            amps.len()
                        ),
                    ));
                }
                let amps = amps.iter().copied().map(from_cx).collect();
                BipartiteVector::new(self.d_a, self.d_b, amps)
                    .map_err(|e| CliError::field(field, e.to_string()))
            })
            .collect()
    }

    pub fn ensemble(&self) -> CliResult<GramEnsemble> {
        let vectors = self.state_vectors()?;
        let ensemble = match &self.weights {
            None => GramEnsemble::uniform(vectors),
            Some(w) => GramEnsemble::new(vectors, matrix_from_doc(w, "weights")?),
        };
        ensemble.map_err(|e| CliError::field("weights", e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToleranceDoc {
    pub ssd: f64,
    pub orthogonality_guard: f64,
    pub mcs_verify: f64,
    pub mcs_symmetry: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictDoc {
    pub decomposable: bool,
    pub condition_a: bool,
    pub condition_b: Option<bool>,
    pub worst_commutator: f64,
    pub worst_b_defect: Option<f64>,
}

impl From<&SsdVerdict> for VerdictDoc {
    fn from(v: &SsdVerdict) -> Self {
        Self {
            decomposable: v.decomposable,
            condition_a: v.cond_a,
            condition_b: v.cond_b,
            worst_commutator: v.worst_commutator,
            worst_b_defect: v.worst_b_defect,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "condition")]
pub enum WitnessDoc {
    #[serde(rename = "A")]
    Commutator {
        pair_a: [usize; 2],
        pair_b: [usize; 2],
        norm: f64,
    },
    #[serde(rename = "B")]
    Coefficient {
        index: usize,
        pair: [usize; 2],
        lhs: f64,
        rhs: f64,
        basis_vector: Vec<Cx>,
    },
}

impl From<&Witness> for WitnessDoc {
    fn from(w: &Witness) -> Self {
        match w {
            Witness::Commutator {
                pair_a,
                pair_b,
                norm,
            } => Self::Commutator {
                pair_a: [pair_a.0, pair_a.1],
                pair_b: [pair_b.0, pair_b.1],
                norm: *norm,
            },
            Witness::Coefficient {
                index,
                pair,
                lhs,
                rhs,
                basis_vector,
            } => Self::Coefficient {
                index: *index,
                pair: [pair.0, pair.1],
                lhs: *lhs,
                rhs: *rhs,
                basis_vector: basis_vector.iter().copied().map(cx).collect(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormDoc {
    pub schmidt_rank: usize,
    /// Row α holds the coefficients of vector α.
    pub coeffs: MatrixDoc,
    pub residual: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ua: Option<MatrixDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ub: Option<MatrixDoc>,
}

impl FormDoc {
    pub fn new(f: &SimultaneousForm, matrices: bool) -> Self {
        Self {
            schmidt_rank: f.schmidt_rank(),
            coeffs: matrix_doc(&f.coeffs),
            residual: f.residual,
            ua: matrices.then(|| matrix_doc(&f.ua)),
            ub: matrices.then(|| matrix_doc(&f.ub)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McsDoc {
    pub residual: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<MatrixDoc>,
}

impl McsDoc {
    pub fn new(m: &McsForm, matrices: bool) -> Self {
        Self {
            residual: m.residual,
            alpha: matrices.then(|| matrix_doc(&m.alpha)),
        }
    }
}

pub const CERTIFIED_LABEL: &str = "distillable entanglement (certified maximally correlated)";
pub const HASHING_LABEL: &str = "hashing lower bound on distillable entanglement (not certified)";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntanglementDoc {
    pub s_rho: f64,
    pub s_a: f64,
    pub s_b: f64,
    pub i_a: f64,
    pub i_b: f64,
    pub certified: bool,
    /// The headline number: E_D when certified, otherwise max(0, I_A, I_B).
    pub value: f64,
    pub label: String,
}

impl From<&EntanglementReport> for EntanglementDoc {
    fn from(r: &EntanglementReport) -> Self {
        let (value, label) = match r.e_d_mcs {
            Some(e) => (e, CERTIFIED_LABEL),
            None => (r.hashing_lower_bound(), HASHING_LABEL),
        };
        Self {
            s_rho: r.s_rho,
            s_a: r.s_a,
            s_b: r.s_b,
            i_a: r.i_a,
            i_b: r.i_b,
            certified: r.e_d_mcs.is_some(),
            value,
            label: label.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub seed: u64,
    pub tolerances: ToleranceDoc,
    pub verdict: VerdictDoc,
    pub witness: Option<WitnessDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub form: Option<FormDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mcs: Option<McsDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entanglement: Option<EntanglementDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BellSetDoc {
    pub d: usize,
    pub indices: Vec<[usize; 2]>,
    pub witness: Option<[usize; 3]>,
}

fn pair_docs(pairs: &[(usize, usize)]) -> Vec<[usize; 2]> {
    pairs.iter().map(|&(n, m)| [n, m]).collect()
}

impl From<&BellSet> for BellSetDoc {
    fn from(s: &BellSet) -> Self {
        Self {
            d: s.d(),
            indices: pair_docs(&s.pairs()),
            witness: s.witness().map(|(p, q, r)| [p, q, r]),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BellCheckDoc {
    pub d: usize,
    pub indices: Vec<[usize; 2]>,
    pub holds: bool,
    pub witness: Option<[usize; 3]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ListedSetDoc {
    pub indices: Vec<[usize; 2]>,
    pub witness: [usize; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnumerationDoc {
    pub d: usize,
    pub size: usize,
    pub count: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sets: Option<Vec<ListedSetDoc>>,
}

impl From<&EnumerationTally> for EnumerationDoc {
    fn from(t: &EnumerationTally) -> Self {
        Self {
            d: t.d,
            size: t.size,
            count: t.count,
            sets: t.listing.as_ref().map(|list| {
                list.iter()
                    .map(|s| ListedSetDoc {
                        indices: pair_docs(&s.pairs),
                        witness: [s.witness.0, s.witness.1, s.witness.2],
                    })
                    .collect()
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolDoc {
    pub d: usize,
    /// [e1, e2]: labels and outcomes live in Z_e1 × Z_e2, outcome x encoding
    /// (x mod e1, x div e1). [d, 1] is the cyclic protocol.
    pub label_group: [usize; 2],
    pub decoder: String,
    pub members: Vec<[usize; 2]>,
    pub labels: Vec<usize>,
    pub seed: u64,
    pub ua: MatrixDoc,
    pub ub: MatrixDoc,
}

impl From<&LoccProtocol> for ProtocolDoc {
    fn from(p: &LoccProtocol) -> Self {
        let decoder = if p.group.is_cyclic() {
            "(a - b) mod d".to_string()
        } else {
            format!(
                "(a - b) in Z_{} x Z_{}, outcome x read as (x mod {0}, x div {0})",
                p.group.e1, p.group.e2
            )
        };
        Self {
            d: p.d,
            label_group: [p.group.e1, p.group.e2],
            decoder,
            members: pair_docs(&p.members),
            labels: p.labels.clone(),
            seed: p.seed,
            ua: matrix_doc(&p.ua),
            ub: matrix_doc(&p.ub),
        }
    }
}

impl ProtocolDoc {
    pub fn protocol(&self) -> CliResult<LoccProtocol> {
        let group = LabelGroup::new(self.label_group[0], self.label_group[1])
            .map_err(|e| CliError::field("label_group", e.to_string()))?;
        if group.order() != self.d {
            return Err(CliError::field(
                "label_group",
                format!("group order {} differs from d = {}", group.order(), self.d),
            ));
        }
        if self.labels.len() != self.members.len() {
            return Err(CliError::field(
                "labels",
                format!(
                    "{} labels for {} members",
                    self.labels.len(),
                    self.members.len()
                ),
            ));
        }
        if let Some(i) = self.labels.iter().position(|&r| r >= self.d) {
            return Err(CliError::field(
                format!("labels[{i}]"),
                "label out of range",
            ));
        }
        Ok(LoccProtocol {
            d: self.d,
            group,
            ua: matrix_from_doc(&self.ua, "ua")?,
            ub: matrix_from_doc(&self.ub, "ub")?,
            labels: self.labels.clone(),
            members: self.members.iter().map(|&[n, m]| (n, m)).collect(),
            seed: self.seed,
        })
    }

    pub fn member_pairs(&self) -> Vec<(i64, i64)> {
        self.members
            .iter()
            .map(|&[n, m]| (n as i64, m as i64))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemberDoc {
    pub index: [usize; 2],
    pub label: usize,
    pub trials: u64,
    pub successes: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationDoc {
    pub trials: u64,
    pub seed: u64,
    pub successes: u64,
    pub success_rate: f64,
    pub members: Vec<MemberDoc>,
    pub marginal_a: Vec<u64>,
    pub marginal_b: Vec<u64>,
    /// Every supported outcome pair of every member decodes correctly.
    pub decoder_exact: bool,
    pub worst_error_probability: f64,
}

impl SimulationDoc {
    pub fn new(p: &LoccProtocol, r: &SimulationReport, audit: &DecoderAudit) -> Self {
        Self {
            trials: r.trials,
            seed: r.seed,
            successes: r.successes(),
            success_rate: r.success_rate,
            members: p
                .members
                .iter()
                .zip(&p.labels)
                .zip(&r.per_member)
                .map(|((&(n, m), &label), t)| MemberDoc {
                    index: [n, m],
                    label,
                    trials: t.trials,
                    successes: t.successes,
                })
                .collect(),
            marginal_a: r.marginal_a.clone(),
            marginal_b: r.marginal_b.clone(),
            decoder_exact: audit.exact(),
            worst_error_probability: audit.worst_error_probability,
        }
    }
}
