//! JSON documents for the library types. Rationals travel as `"num/den"`
//! strings so that every round trip is bit-exact.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize, Serializer};

use crate::aerm::{ErmHypothesis, ErmResult, SearchStats};
use crate::corruption::{CorruptedLabel, TabularRelation};
use crate::error::{Error, Result};
use crate::exact::{format_rational, parse_rational, Rational, Vector};
use crate::geometry::{Body, ConstraintSet, LpNorm};
use crate::hypotheses::{FiniteClass, Halfspace, IndexedDataset, Label, LabeledDataset};
use crate::shattering::{AppendixCertificate, FeasibilityCertificate, FeasibilityStatus, LpRecord, WitnessPiece};

pub fn rationals_to_strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

pub fn strings_to_rationals(v: &[String]) -> Result<Vector> {
    v.iter().map(|s| parse_rational(s)).collect()
}

fn matrix_to_strings(m: &[Vector]) -> Vec<Vec<String>> {
    m.iter().map(|r| rationals_to_strings(r)).collect()
}

fn strings_to_matrix(m: &[Vec<String>]) -> Result<Vec<Vector>> {
    m.iter().map(|r| strings_to_rationals(r)).collect()
}

/// `serialize_with` helper for a single rational.
pub fn serialize_rational<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(q))
}

pub fn serialize_opt_rational<S: Serializer>(q: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match q {
        Some(q) => s.serialize_some(&format_rational(q)),
        None => s.serialize_none(),
    }
}

/// `1`, `2`, or `"inf"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PJson {
    Finite(u8),
    Named(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BodyJson {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<PJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintSetJson {
    pub dim: usize,
    pub body: BodyJson,
    #[serde(default)]
    pub lineality: Vec<Vec<String>>,
}

impl From<&ConstraintSet> for ConstraintSetJson {
    fn from(b: &ConstraintSet) -> Self {
        let body = match b.body() {
            Body::Lp { p, radius } => BodyJson {
                kind: "lp".into(),
                p: Some(match p {
                    LpNorm::One => PJson::Finite(1),
                    LpNorm::Two => PJson::Finite(2),
                    LpNorm::Inf => PJson::Named("inf".into()),
                }),
                eps: Some(format_rational(radius)),
                vertices: None,
            },
            Body::Polytope { vertices } => {
                BodyJson { kind: "polytope".into(), p: None, eps: None, vertices: Some(matrix_to_strings(vertices)) }
            }
            Body::Identity => BodyJson { kind: "identity".into(), p: None, eps: None, vertices: None },
        };
        ConstraintSetJson { dim: b.dim(), body, lineality: matrix_to_strings(&b.lineality().1) }
    }
}

impl ConstraintSetJson {
    pub fn to_constraint_set(&self) -> Result<ConstraintSet> {
        let body = match self.body.kind.as_str() {
            "lp" => {
                let p = match &self.body.p {
                    Some(PJson::Finite(1)) => LpNorm::One,
                    Some(PJson::Finite(2)) => LpNorm::Two,
                    Some(PJson::Named(s)) if s == "inf" => LpNorm::Inf,
                    other => return Err(Error::InvalidInput(format!("unsupported p: {other:?} (use 1, 2 or \"inf\")"))),
                };
                let eps = self.body.eps.as_deref().ok_or_else(|| Error::InvalidInput("lp body needs eps".into()))?;
                Body::Lp { p, radius: parse_rational(eps)? }
            }
            "polytope" => {
                let v = self.body.vertices.as_ref().ok_or_else(|| Error::InvalidInput("polytope needs vertices".into()))?;
                Body::Polytope { vertices: strings_to_matrix(v)? }
            }
            "identity" => Body::Identity,
            other => return Err(Error::InvalidInput(format!("unknown body kind {other:?}"))),
        };
        ConstraintSet::new(self.dim, body, strings_to_matrix(&self.lineality)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetJson {
    pub points: Vec<Vec<String>>,
    pub labels: Vec<i64>,
}

impl From<&LabeledDataset> for DatasetJson {
    fn from(d: &LabeledDataset) -> Self {
        DatasetJson { points: matrix_to_strings(d.points()), labels: d.labels().iter().map(|l| l.sign()).collect() }
    }
}

impl DatasetJson {
    pub fn to_dataset(&self) -> Result<LabeledDataset> {
        let labels = self.labels.iter().map(|&c| Label::from_sign(c)).collect::<Result<Vec<_>>>()?;
        LabeledDataset::new(strings_to_matrix(&self.points)?, labels)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfspaceJson {
    pub a: Vec<String>,
    pub b: String,
}

impl From<&Halfspace> for HalfspaceJson {
    fn from(h: &Halfspace) -> Self {
        HalfspaceJson { a: rationals_to_strings(&h.a), b: format_rational(&h.b) }
    }
}

impl HalfspaceJson {
    pub fn to_halfspace(&self) -> Result<Halfspace> {
        Ok(Halfspace::new(strings_to_rationals(&self.a)?, parse_rational(&self.b)?))
    }
}

/// Ground-set points plus `"i": [j, ...]` neighborhoods keyed by point index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TabularRelationJson {
    pub points: Vec<Vec<String>>,
    pub neighbors: BTreeMap<String, Vec<usize>>,
}

impl TabularRelationJson {
    pub fn new(points: &[Vector], relation: &TabularRelation) -> Self {
        TabularRelationJson {
            points: matrix_to_strings(points),
            neighbors: relation.entries().iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
        }
    }

    pub fn to_relation(&self) -> Result<(Vec<Vector>, TabularRelation)> {
        let points = strings_to_matrix(&self.points)?;
        let mut neighbors = BTreeMap::new();
        for (k, v) in &self.neighbors {
            let i: usize = k.parse().map_err(|_| Error::Parse(format!("neighbor key {k:?} is not an index")))?;
            if let Some(&j) = v.iter().find(|&&j| j >= points.len()) {
                return Err(Error::InvalidInput(format!("neighbor {j} of point {i} is outside the ground set")));
            }
            neighbors.insert(i, v.clone());
        }
        let relation = TabularRelation::new(points.len(), neighbors)?;
        Ok((points, relation))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub a: Vec<String>,
    pub b: String,
    /// The vertex `v*` with `aᵀv* = ‖a‖_{B*} = 1`; absent for a zero-dual witness.
    pub vertex: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AppendixJson {
    pub a: Vec<String>,
    #[serde(rename = "J")]
    pub j: Vec<usize>,
    #[serde(rename = "K")]
    pub k: Vec<usize>,
    pub eta: Vec<u8>,
}

impl From<&AppendixCertificate> for AppendixJson {
    fn from(c: &AppendixCertificate) -> Self {
        AppendixJson { a: rationals_to_strings(&c.a), j: c.j.clone(), k: c.k.clone(), eta: c.eta.bits().to_vec() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpRecordJson {
    pub vertex: Option<Vec<String>>,
    /// Optimal slack of the piece, or null when the piece is infeasible.
    pub slack: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub status: String,
    pub pattern: Vec<u8>,
    pub witness: Option<WitnessJson>,
    pub appendix_cert: Option<AppendixJson>,
    pub lp_records: Vec<LpRecordJson>,
}

fn piece_vertex(piece: &WitnessPiece) -> Option<Vec<String>> {
    match piece {
        WitnessPiece::Vertex(v) => Some(rationals_to_strings(v)),
        WitnessPiece::ZeroDual => None,
    }
}

fn record_json(r: &LpRecord) -> LpRecordJson {
    LpRecordJson { vertex: piece_vertex(&r.piece), slack: r.slack.as_ref().map(format_rational) }
}

impl From<&FeasibilityCertificate> for CertificateJson {
    fn from(c: &FeasibilityCertificate) -> Self {
        CertificateJson {
            status: match c.status {
                FeasibilityStatus::Feasible => "feasible".into(),
                FeasibilityStatus::Infeasible => "infeasible".into(),
            },
            pattern: c.pattern.bits().to_vec(),
            witness: c.witness.as_ref().map(|w| WitnessJson {
                a: rationals_to_strings(&w.halfspace.a),
                b: format_rational(&w.halfspace.b),
                vertex: piece_vertex(&w.piece),
            }),
            appendix_cert: c.appendix.as_ref().map(AppendixJson::from),
            lp_records: c.lp_records.iter().map(record_json).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ErmHypothesisJson {
    Halfspace(HalfspaceJson),
    Finite { id: usize, name: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErmStatsJson {
    pub subsets_tested: u64,
    pub lps_solved: u64,
    pub cores_found: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErmResultJson {
    pub status: String,
    pub witness: ErmHypothesisJson,
    pub risk: String,
    pub pattern: Vec<u8>,
    pub stats: ErmStatsJson,
}

impl From<&ErmResult> for ErmResultJson {
    fn from(r: &ErmResult) -> Self {
        let SearchStats { subsets_tested, lps_solved, cores_found } = r.stats.clone();
        ErmResultJson {
            status: "feasible".into(),
            witness: match &r.hypothesis {
                ErmHypothesis::Halfspace(h) => ErmHypothesisJson::Halfspace(h.into()),
                ErmHypothesis::Finite { id, name } => ErmHypothesisJson::Finite { id: *id, name: name.clone() },
            },
            risk: format_rational(&r.risk),
            pattern: r.pattern.bits().to_vec(),
            stats: ErmStatsJson { subsets_tested, lps_solved, cores_found },
        }
    }
}

/// A dataset over a finite ground set, given by point ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexedDatasetJson {
    pub ids: Vec<usize>,
    pub labels: Vec<i64>,
}

impl IndexedDatasetJson {
    pub fn to_dataset(&self) -> Result<IndexedDataset> {
        let labels = self.labels.iter().map(|&c| Label::from_sign(c)).collect::<Result<Vec<_>>>()?;
        IndexedDataset::new(self.ids.clone(), labels)
    }
}

/// An explicit hypothesis table; cells are `"1"`, `"-1"` or `"bottom"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteClassJson {
    pub points: Vec<Vec<String>>,
    pub names: Vec<String>,
    pub table: Vec<Vec<String>>,
}

impl From<&FiniteClass> for FiniteClassJson {
    fn from(c: &FiniteClass) -> Self {
        FiniteClassJson {
            points: matrix_to_strings(c.points()),
            names: c.names().to_vec(),
            table: c.rows().iter().map(|r| r.iter().map(|l| l.symbol().to_string()).collect()).collect(),
        }
    }
}

impl FiniteClassJson {
    pub fn to_class(&self) -> Result<FiniteClass> {
        let cell = |s: &String| match s.as_str() {
            "1" | "+1" => Ok(CorruptedLabel::Pos),
            "-1" => Ok(CorruptedLabel::Neg),
            "bottom" => Ok(CorruptedLabel::Bottom),
            other => Err(Error::Parse(format!("table cell {other:?} is not 1, -1 or bottom"))),
        };
        let table = self.table.iter().map(|r| r.iter().map(cell).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
        FiniteClass::new(strings_to_matrix(&self.points)?, self.names.clone(), table)
    }
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    Ok(serde_json::from_str(text)?)
}
