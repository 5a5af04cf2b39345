//! JSON documents for graphs, bases, filters, schemes, plans and decimated systems.
//!
//! Complex numbers are `{"re": f, "im": f}`; matrices are row-major arrays of rows.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::decimation::DecimatedSystem;
use crate::error::{GspError, Result};
use crate::filters::{PolyFilter, ShiftDomain};
use crate::graphs::{graph_from_adjacency, graph_from_family, Graph};
use crate::linalg::{CMatrix, CVector, C64};
use crate::reconstruction::ReconstructionPlan;
use crate::sampling::SamplingScheme;
use crate::spectral::SpectralBasis;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JsonComplex {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for JsonComplex {
    fn from(z: C64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<JsonComplex> for C64 {
    fn from(z: JsonComplex) -> Self {
        C64::new(z.re, z.im)
    }
}

pub fn vector_to_json(v: &CVector) -> Vec<JsonComplex> {
    v.iter().map(|&z| z.into()).collect()
}

pub fn vector_from_json(v: &[JsonComplex]) -> CVector {
    CVector::from_iterator(v.len(), v.iter().map(|&z| z.into()))
}

pub fn matrix_to_json(m: &CMatrix) -> Vec<Vec<JsonComplex>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)].into()).collect()).collect()
}

pub fn matrix_from_json(rows: &[Vec<JsonComplex>]) -> Result<CMatrix> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if let Some(bad) = rows.iter().position(|row| row.len() != c) {
        return Err(GspError::Format(format!("row {bad} has {} entries, expected {c}", rows[bad].len())));
    }
    Ok(CMatrix::from_fn(r, c, |i, j| rows[i][j].into()))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphDoc {
    pub n: usize,
    pub adjacency: Vec<Vec<JsonComplex>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family_params: Option<Value>,
}

pub fn graph_to_doc(g: &Graph) -> GraphDoc {
    GraphDoc {
        n: g.n(),
        adjacency: matrix_to_json(g.adjacency()),
        family: g.family().map(str::to_string),
        family_params: g.family_params().cloned(),
    }
}

/// Family documents are rebuilt from their parameters (restoring the closed-form basis) and must
/// reproduce the stored adjacency exactly; other documents become plain graphs.
pub fn graph_from_doc(doc: &GraphDoc) -> Result<Graph> {
    let a = matrix_from_json(&doc.adjacency)?;
    if a.nrows() != doc.n || a.ncols() != doc.n {
        return Err(GspError::Format(format!(
            "declared n = {} but adjacency is {} x {}",
            doc.n,
            a.nrows(),
            a.ncols()
        )));
    }
    let rebuilt = match (&doc.family, &doc.family_params) {
        (Some(f), Some(p)) if matches!(f.as_str(), "cycle" | "star" | "circulant" | "kronecker") => {
            Some(graph_from_family(f, p)?)
        }
        _ => None,
    };
    match rebuilt {
        Some(g) => {
            if g.adjacency() != &a {
                return Err(GspError::Format(format!(
                    "adjacency does not match the declared {} family parameters",
                    doc.family.as_deref().unwrap_or_default()
                )));
            }
            Ok(g)
        }
        None => Ok(crate::graphs::attach_metadata(
            graph_from_adjacency(a)?,
            doc.family.clone(),
            doc.family_params.clone(),
        )),
    }
}

pub fn graph_to_value(g: &Graph) -> Value {
    serde_json::to_value(graph_to_doc(g)).expect("graph documents always serialize")
}

pub fn graph_from_value(v: &Value) -> Result<Graph> {
    graph_from_doc(&serde_json::from_value(v.clone())?)
}

pub fn graph_to_json(g: &Graph) -> String {
    to_pretty(&graph_to_doc(g))
}

pub fn graph_from_json(s: &str) -> Result<Graph> {
    graph_from_doc(&serde_json::from_str(s)?)
}

/// SHA-256 of the compact graph document, hex encoded.
pub fn graph_hash(g: &Graph) -> String {
    let compact = serde_json::to_string(&graph_to_doc(g)).expect("graph documents always serialize");
    Sha256::digest(compact.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

fn to_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents always serialize");
    s.push('\n');
    s
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BasisDoc {
    pub lambda: Vec<JsonComplex>,
    pub gft: Vec<Vec<JsonComplex>>,
    pub igft: Vec<Vec<JsonComplex>>,
    pub ordering_tag: String,
}

pub fn basis_to_doc(b: &SpectralBasis) -> BasisDoc {
    BasisDoc {
        lambda: vector_to_json(b.lambda()),
        gft: matrix_to_json(b.gft()),
        igft: matrix_to_json(b.igft()),
        ordering_tag: b.ordering_tag().to_string(),
    }
}

pub fn basis_from_doc(doc: &BasisDoc) -> Result<SpectralBasis> {
    SpectralBasis::new(
        matrix_from_json(&doc.gft)?,
        matrix_from_json(&doc.igft)?,
        vector_from_json(&doc.lambda),
        doc.ordering_tag.clone(),
    )
}

pub fn basis_to_json(b: &SpectralBasis) -> String {
    to_pretty(&basis_to_doc(b))
}

pub fn basis_from_json(s: &str) -> Result<SpectralBasis> {
    basis_from_doc(&serde_json::from_str(s)?)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FilterDoc {
    pub domain: String,
    pub coeffs: Vec<JsonComplex>,
}

pub fn filter_to_doc(f: &PolyFilter) -> FilterDoc {
    FilterDoc { domain: f.domain.symbol().to_string(), coeffs: vector_to_json(&f.coeffs) }
}

pub fn filter_from_doc(doc: &FilterDoc) -> Result<PolyFilter> {
    Ok(PolyFilter::new(vector_from_json(&doc.coeffs), ShiftDomain::from_symbol(&doc.domain)?))
}

pub fn filter_to_json(f: &PolyFilter) -> String {
    to_pretty(&filter_to_doc(f))
}

pub fn filter_from_json(s: &str) -> Result<PolyFilter> {
    filter_from_doc(&serde_json::from_str(s)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeDoc {
    pub k: usize,
    #[serde(rename = "S")]
    pub set: Vec<usize>,
    pub delta: Vec<u8>,
    pub vertex_perm: Vec<usize>,
    pub freq_perm: Vec<usize>,
}

pub fn scheme_to_doc(s: &SamplingScheme) -> SchemeDoc {
    SchemeDoc {
        k: s.k(),
        set: s.set().to_vec(),
        delta: s.delta(),
        vertex_perm: s.vertex_perm().to_vec(),
        freq_perm: s.freq_perm().to_vec(),
    }
}

/// The band is read from the leading `k` entries of `freq_perm`; every field must be consistent.
pub fn scheme_from_doc(doc: &SchemeDoc) -> Result<SamplingScheme> {
    let n = doc.delta.len();
    if doc.k > n || doc.freq_perm.len() != n || doc.vertex_perm.len() != n {
        return Err(GspError::Format("scheme fields disagree on the vertex count".into()));
    }
    let scheme = SamplingScheme::new(n, &doc.set, &doc.freq_perm[..doc.k])?;
    if scheme_to_doc(&scheme) != *doc {
        return Err(GspError::Format("scheme fields are inconsistent with S and the band".into()));
    }
    Ok(scheme)
}

pub fn scheme_to_json(s: &SamplingScheme) -> String {
    to_pretty(&scheme_to_doc(s))
}

pub fn scheme_from_json(s: &str) -> Result<SamplingScheme> {
    scheme_from_doc(&serde_json::from_str(s)?)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlanDoc {
    pub strategy: String,
    #[serde(rename = "Q")]
    pub q: Vec<Vec<JsonComplex>>,
    #[serde(rename = "F")]
    pub f: Vec<Vec<JsonComplex>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lowpass: Option<Vec<Vec<JsonComplex>>>,
    pub is_q_lsi: bool,
    pub is_raw_q_lsi: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<JsonComplex>>,
    pub contract_error: f64,
}

pub fn plan_to_doc(p: &ReconstructionPlan, include_lowpass: bool) -> PlanDoc {
    PlanDoc {
        strategy: p.strategy.name().to_string(),
        q: matrix_to_json(&p.q),
        f: matrix_to_json(&p.f),
        lowpass: include_lowpass.then(|| matrix_to_json(&p.lowpass_vertex)),
        is_q_lsi: p.is_q_lsi,
        is_raw_q_lsi: p.raw_lsi.is_lsi,
        coeffs: p.coeffs().map(|f| vector_to_json(&f.coeffs)),
        contract_error: p.contract_error,
    }
}

pub fn plan_to_json(p: &ReconstructionPlan, include_lowpass: bool) -> String {
    to_pretty(&plan_to_doc(p, include_lowpass))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecimatedDoc {
    pub lambda: Vec<JsonComplex>,
    pub gft: Vec<Vec<JsonComplex>>,
    pub igft: Vec<Vec<JsonComplex>>,
    pub ordering_tag: String,
    pub adjacency: Vec<Vec<JsonComplex>>,
    pub gft_kk: Vec<Vec<JsonComplex>>,
    pub condition: f64,
    pub repeated_eigenvalues: bool,
    pub graph_hash: String,
    pub scheme: SchemeDoc,
    pub band: Vec<usize>,
}

pub fn decimated_to_doc(system: &DecimatedSystem, original: &Graph) -> DecimatedDoc {
    let b = basis_to_doc(&system.basis);
    DecimatedDoc {
        lambda: b.lambda,
        gft: b.gft,
        igft: b.igft,
        ordering_tag: b.ordering_tag,
        adjacency: matrix_to_json(system.adjacency()),
        gft_kk: matrix_to_json(&system.gft_kk),
        condition: system.condition,
        repeated_eigenvalues: system.repeated_eigenvalues,
        graph_hash: graph_hash(original),
        scheme: scheme_to_doc(&system.scheme),
        band: system.scheme.band().to_vec(),
    }
}

pub fn decimated_to_json(system: &DecimatedSystem, original: &Graph) -> String {
    to_pretty(&decimated_to_doc(system, original))
}
