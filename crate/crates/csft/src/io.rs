//! JSON formats for families, morphisms, graphs, algebras, tensors and reports.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::csg::{CsgError, CsgMorphism, Family, FamilyKind, FiniteGroup, Parity};
use crate::frobenius::{ActionGenerator, FrobeniusPresentation};
use crate::graph::{GraphError, HalfEdge, StructuredGraph, IN, OUT};
use crate::tensor::{Field, Scalar, Tensor, TensorError, TensorJson};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON at line {line}, column {column}: {msg}")]
    Json { line: usize, column: usize, msg: String },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Csg(#[from] CsgError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        let text = e.to_string();
        let msg = text.rsplit_once(" at line ").map_or(text.as_str(), |(m, _)| m).to_string();
        IoError::Json { line: e.line(), column: e.column(), msg }
    }
}

pub type Result<T> = std::result::Result<T, IoError>;

fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(IoError::Invalid(msg.into()))
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GroupJson {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
    #[serde(default)]
    pub names: Vec<String>,
}

impl GroupJson {
    pub fn from_group(g: &FiniteGroup) -> Self {
        GroupJson { order: g.order(), table: g.table().to_vec(), names: g.names().to_vec() }
    }

    pub fn to_group(&self) -> Result<FiniteGroup> {
        if self.table.len() != self.order {
            return invalid(format!("group table has {} rows for order {}", self.table.len(), self.order));
        }
        let names = if self.names.is_empty() { (0..self.order).map(|i| format!("h{i}")).collect() } else { self.names.clone() };
        Ok(FiniteGroup::new(self.table.clone(), names)?)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FamilyJson {
    pub kind: String,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub level: Option<u32>,
    #[serde(rename = "H", default)]
    pub companion: Option<GroupJson>,
}

fn kind_name(k: FamilyKind) -> &'static str {
    match k {
        FamilyKind::Cyclic => "Cyclic",
        FamilyKind::Dihedral => "Dihedral",
        FamilyKind::NCyclic => "NCyclic",
        FamilyKind::NDihedral => "NDihedral",
        FamilyKind::Paracyclic => "Paracyclic",
        FamilyKind::Paradihedral => "Paradihedral",
    }
}

fn parse_kind(s: &str) -> Result<FamilyKind> {
    Ok(match s {
        "Cyclic" => FamilyKind::Cyclic,
        "Dihedral" => FamilyKind::Dihedral,
        "NCyclic" => FamilyKind::NCyclic,
        "NDihedral" => FamilyKind::NDihedral,
        "Paracyclic" => FamilyKind::Paracyclic,
        "Paradihedral" => FamilyKind::Paradihedral,
        other => return invalid(format!("unknown family kind {other:?}")),
    })
}

impl FamilyJson {
    pub fn from_family(f: &Family) -> Self {
        let kind = f.kind();
        let level = matches!(kind, FamilyKind::NCyclic | FamilyKind::NDihedral).then(|| f.level().unwrap());
        FamilyJson { kind: kind_name(kind).into(), level, companion: f.companion().map(GroupJson::from_group) }
    }

    pub fn to_family(&self) -> Result<Family> {
        let fam = Family::new(parse_kind(&self.kind)?, self.level)?;
        Ok(match &self.companion {
            Some(g) => fam.with_companion(g.to_group()?),
            None => fam,
        })
    }
}

/// Parses the short form `Kind` or `Kind:N`, e.g. `NCyclic:4`, `Paradihedral`.
pub fn parse_family(s: &str) -> Result<Family> {
    let (kind, level) = match s.split_once(':') {
        Some((k, n)) => (k, Some(n.trim().parse::<u32>().map_err(|_| IoError::Invalid(format!("bad level in {s:?}")))?)),
        None => (s, None),
    };
    Ok(Family::new(parse_kind(kind.trim())?, level)?)
}

pub fn family_short(f: &Family) -> String {
    let kind = f.kind();
    match kind {
        FamilyKind::NCyclic | FamilyKind::NDihedral => format!("{}:{}", kind_name(kind), f.level().unwrap()),
        _ => kind_name(kind).into(),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MorphismJson {
    pub family: FamilyJson,
    pub source: usize,
    pub target: usize,
    pub sign: i64,
    pub lift: Vec<i64>,
    #[serde(default)]
    pub h: Option<usize>,
}

impl MorphismJson {
    pub fn from_morphism(f: &CsgMorphism) -> Self {
        MorphismJson {
            family: FamilyJson::from_family(f.family()),
            source: f.source(),
            target: f.target(),
            sign: f.sign(),
            lift: f.lift().to_vec(),
            h: (f.family().companion().is_some()).then_some(f.h()),
        }
    }

    pub fn to_morphism(&self) -> Result<CsgMorphism> {
        let fam = self.family.to_family()?;
        Ok(CsgMorphism::new(&fam, self.source, self.target, self.sign, self.lift.clone(), self.h.unwrap_or(0))?)
    }
}

/// A twist in `G_0`: sign and the single lift value; the family is the graph's.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TwistJson {
    pub sign: i64,
    pub lift: Vec<i64>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct HalfEdgeJson {
    pub v: usize,
    pub slot: usize,
    pub side: u8,
    #[serde(default)]
    pub twist: Option<TwistJson>,
    #[serde(default)]
    pub h: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GraphJson {
    pub family: FamilyJson,
    pub vertices: Vec<usize>,
    pub half_edges: Vec<HalfEdgeJson>,
    pub pairing: Vec<[usize; 2]>,
    #[serde(rename = "in")]
    pub ins: Vec<usize>,
    #[serde(rename = "out")]
    pub outs: Vec<usize>,
}

impl GraphJson {
    pub fn from_graph(g: &StructuredGraph) -> Self {
        let companion = g.family().companion().is_some();
        GraphJson {
            family: FamilyJson::from_family(g.family()),
            vertices: g.arities().to_vec(),
            half_edges: g
                .half_edges()
                .iter()
                .map(|h| HalfEdgeJson {
                    v: h.vertex,
                    slot: h.slot,
                    side: h.side,
                    twist: Some(TwistJson { sign: h.twist.sign(), lift: h.twist.lift().to_vec() }),
                    h: companion.then_some(h.twist.h()),
                })
                .collect(),
            pairing: g.edges().into_iter().map(|(o, i)| [o, i]).collect(),
            ins: g.ins().to_vec(),
            outs: g.outs().to_vec(),
        }
    }

    /// Builds the graph. A pairing of two half-edges on the same side is
    /// realized through an inserted two-slot vertex: a trace between two
    /// outgoing halves, a cotrace between two incoming ones.
    pub fn to_graph(&self) -> Result<StructuredGraph> {
        let family = self.family.to_family()?;
        let n = self.half_edges.len();
        let mut arities = self.vertices.clone();
        let mut half_edges = Vec::with_capacity(n);
        for (k, h) in self.half_edges.iter().enumerate() {
            let twist = match &h.twist {
                Some(t) => CsgMorphism::new(&family, 0, 0, t.sign, t.lift.clone(), h.h.unwrap_or(0))
                    .map_err(|e| IoError::Invalid(format!("half-edge {k}: {e}")))?,
                None => CsgMorphism::identity(&family, 0).with_h(h.h.unwrap_or(0)),
            };
            if h.side > 1 {
                return invalid(format!("half-edge {k}: side must be 0 or 1"));
            }
            half_edges.push(HalfEdge { vertex: h.v, slot: h.slot, side: h.side, twist });
        }
        let mut pairing: Vec<usize> = (0..n).collect();
        let id = CsgMorphism::identity(&family, 0);
        for (k, &[a, b]) in self.pairing.iter().enumerate() {
            if a >= n || b >= n || a == b {
                return invalid(format!("pairing entry {k} refers to half-edges {a}, {b}"));
            }
            if pairing[a] != a || pairing[b] != b {
                return invalid(format!("pairing entry {k}: a half-edge is paired twice"));
            }
            let (sa, sb) = (half_edges[a].side, half_edges[b].side);
            if sa != sb {
                pairing[a] = b;
                pairing[b] = a;
                continue;
            }
            let w = arities.len();
            arities.push(1);
            let side = if sa == OUT { IN } else { OUT };
            for (slot, x) in [a, b].into_iter().enumerate() {
                let y = half_edges.len();
                half_edges.push(HalfEdge { vertex: w, slot, side, twist: id.clone() });
                pairing.push(x);
                pairing[x] = y;
            }
        }
        Ok(StructuredGraph::new(family, arities, half_edges, pairing, self.ins.clone(), self.outs.clone())?)
    }
}

/// A scalar given as a string (`"3/7"`, `"2 mod 5"`) or an integer.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum ScalarJson {
    Int(i64),
    Str(String),
}

impl ScalarJson {
    pub fn to_scalar(&self, field: Field) -> Result<Scalar> {
        match self {
            ScalarJson::Int(v) => Ok(field.int(*v)),
            ScalarJson::Str(s) => Ok(field.parse(s)?),
        }
    }

    pub fn from_scalar(s: &Scalar) -> Self {
        ScalarJson::Str(s.to_string())
    }
}

fn scalars(field: Field, xs: &[ScalarJson]) -> Result<Vec<Scalar>> {
    xs.iter().map(|x| x.to_scalar(field)).collect()
}

fn matrix(field: Field, rows: &[Vec<ScalarJson>], d: usize) -> Result<Tensor> {
    let rows = rows.iter().map(|r| scalars(field, r)).collect::<Result<Vec<_>>>()?;
    let m = Tensor::from_matrix(field, &rows)?;
    if m.shape() != [d, d] {
        return invalid(format!("action matrix has shape {:?}, expected {d}x{d}", m.shape()));
    }
    Ok(m)
}

fn matrix_json(m: &Tensor) -> Vec<Vec<ScalarJson>> {
    let d = m.shape()[1];
    m.entries().chunks(d).map(|row| row.iter().map(ScalarJson::from_scalar).collect()).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ActionJson {
    pub parity: String,
    pub matrix: Vec<Vec<ScalarJson>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct HActionJson {
    pub group: GroupJson,
    /// One matrix per group element, in table order.
    pub matrices: Vec<Vec<Vec<ScalarJson>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct AlgebraJson {
    #[serde(default)]
    pub name: Option<String>,
    pub field: Field,
    pub dim: usize,
    pub mul: Vec<Vec<Vec<ScalarJson>>>,
    pub unit: Vec<ScalarJson>,
    pub trace: Vec<ScalarJson>,
    #[serde(default)]
    pub g0_action: Vec<ActionJson>,
    #[serde(default)]
    pub h_action: Option<HActionJson>,
}

impl AlgebraJson {
    pub fn from_presentation(p: &FrobeniusPresentation) -> Self {
        let d = p.dim;
        let mul = (0..d)
            .map(|i| (0..d).map(|j| (0..d).map(|k| ScalarJson::from_scalar(p.mul.get(&[i, j, k]))).collect()).collect())
            .collect();
        AlgebraJson {
            name: Some(p.name.clone()),
            field: p.field,
            dim: d,
            mul,
            unit: p.unit.iter().map(ScalarJson::from_scalar).collect(),
            trace: p.trace.iter().map(ScalarJson::from_scalar).collect(),
            g0_action: p
                .g0_action
                .iter()
                .map(|g| ActionJson {
                    parity: if g.parity == Parity::Even { "even" } else { "odd" }.into(),
                    matrix: matrix_json(&g.matrix),
                })
                .collect(),
            h_action: match (&p.companion, &p.h_action) {
                (Some(g), Some(ms)) => Some(HActionJson { group: GroupJson::from_group(g), matrices: ms.iter().map(matrix_json).collect() }),
                _ => None,
            },
        }
    }

    pub fn to_presentation(&self) -> Result<FrobeniusPresentation> {
        let (f, d) = (self.field, self.dim);
        if self.mul.len() != d || self.mul.iter().any(|r| r.len() != d || r.iter().any(|c| c.len() != d)) {
            return invalid(format!("mul must be a {d}x{d}x{d} array"));
        }
        let flat: Vec<ScalarJson> = self.mul.iter().flatten().flatten().cloned().collect();
        let mul = Tensor::from_entries(f, vec![d, d, d], scalars(f, &flat)?)?;
        let unit = scalars(f, &self.unit)?;
        let trace = scalars(f, &self.trace)?;
        if unit.len() != d || trace.len() != d {
            return invalid(format!("unit and trace must have {d} entries"));
        }
        let mut g0_action = Vec::new();
        for (k, g) in self.g0_action.iter().enumerate() {
            let parity = match g.parity.as_str() {
                "even" => Parity::Even,
                "odd" => Parity::Odd,
                other => return invalid(format!("g0_action[{k}]: parity {other:?} is neither even nor odd")),
            };
            g0_action.push(ActionGenerator { parity, matrix: matrix(f, &g.matrix, d)? });
        }
        let (companion, h_action) = match &self.h_action {
            Some(h) => {
                let group = h.group.to_group()?;
                let ms = h.matrices.iter().map(|m| matrix(f, m, d)).collect::<Result<Vec<_>>>()?;
                (Some(group), Some(ms))
            }
            None => (None, None),
        };
        Ok(FrobeniusPresentation {
            name: self.name.clone().unwrap_or_else(|| format!("algebra of dimension {d} over {f}")),
            field: f,
            dim: d,
            mul,
            unit,
            trace,
            g0_action,
            h_action,
            companion,
        })
    }
}

pub fn tensor_json(t: &Tensor) -> TensorJson {
    TensorJson::from(t)
}

pub fn read_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    Ok(serde_json::from_str(text)?)
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable")
}

pub fn parse_morphism(text: &str) -> Result<CsgMorphism> {
    read_json::<MorphismJson>(text)?.to_morphism()
}

pub fn parse_graph(text: &str) -> Result<StructuredGraph> {
    read_json::<GraphJson>(text)?.to_graph()
}

pub fn parse_algebra(text: &str) -> Result<FrobeniusPresentation> {
    read_json::<AlgebraJson>(text)?.to_presentation()
}

pub fn morphism_to_json(f: &CsgMorphism) -> String {
    to_json(&MorphismJson::from_morphism(f))
}

pub fn graph_to_json(g: &StructuredGraph) -> String {
    to_json(&GraphJson::from_graph(g))
}

pub fn algebra_to_json(p: &FrobeniusPresentation) -> String {
    to_json(&AlgebraJson::from_presentation(p))
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct WreathJson {
    pub twists: Vec<TwistJson>,
    pub h: Option<Vec<usize>>,
    pub perm: Vec<usize>,
    #[serde(default)]
    pub distinguished: Option<usize>,
}

impl WreathJson {
    pub fn from_wreath(w: &crate::operad::WreathElement) -> Self {
        let companion = w.twists.first().is_some_and(|t| t.family().companion().is_some());
        WreathJson {
            twists: w.twists.iter().map(|t| TwistJson { sign: t.sign(), lift: t.lift().to_vec() }).collect(),
            h: companion.then(|| w.twists.iter().map(CsgMorphism::h).collect()),
            perm: w.perm.clone(),
            distinguished: w.distinguished,
        }
    }
}
