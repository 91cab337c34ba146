//! Machine-readable result documents. Every numeric value is rendered as a
//! string in its mode's exact notation, so a document's bytes are a pure
//! function of the run it describes; serde keeps struct field order, which
//! makes repeated serializations byte-identical.

use num_bigint::BigInt;
use num_rational::BigRational;
use parcover::certificate::CertificateReport;
use parcover::engine::{round_bound, work_bound, CoverResult};
use parcover::numeric::{Epsilon, Numeric};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::format::ParsedInstance;

pub const SCHEMA_VERSION: u32 = 1;
/// Round report arrays are capped; the bound on rounds keeps real runs far
/// below this, so hitting the cap is itself a red flag worth surfacing.
pub const MAX_ROUND_REPORTS: usize = 10_000;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct InstanceBlock {
    pub kind: String,
    pub n: usize,
    pub m: usize,
    pub rank: usize,
    pub size: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct RoundBlock {
    pub round: usize,
    pub edges_at_start: usize,
    pub edges_at_end: usize,
    pub deleted: usize,
    pub phi_before: String,
    pub phi_after: String,
    pub good_edge_fraction: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct BoundsBlock {
    pub round_bound: String,
    pub work_bound: String,
    pub bound_factor: String,
    pub rounds_within_bound: bool,
    pub work_within_bound: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CertificateBlock {
    pub packing_nonnegative: bool,
    pub packing_feasible: bool,
    pub cover_hits_every_edge: bool,
    pub cover_fully_charged: bool,
    pub eps_maximal: bool,
    pub weak_duality: bool,
    pub ratio_certified: bool,
    pub all_pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct OracleBlock {
    pub optimum_weight: String,
    pub optimum_cover: Vec<usize>,
    /// Cover weight over optimum weight, in binary64.
    pub ratio: String,
    pub subsets_examined: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ResultDocument {
    pub schema: u32,
    pub instance: InstanceBlock,
    pub mode: String,
    pub eps: String,
    /// Vertex ids for `hg` instances, set ids for `sc` instances.
    pub cover: Vec<usize>,
    /// Weight of the cover in the instance's own units, even when the solve
    /// ran on scaled weights.
    pub cover_weight: String,
    /// Edge values for `hg` instances, element values for `sc` instances;
    /// in `int` mode these are in scaled units (see `scaled_by`).
    pub packing: Vec<String>,
    pub packing_total: String,
    pub rounds: usize,
    pub work_edges: usize,
    pub round_reports: Vec<RoundBlock>,
    pub round_reports_truncated: bool,
    pub bounds: BoundsBlock,
    pub certificate: CertificateBlock,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scaled_by: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleBlock>,
}

#[derive(Debug, Error)]
pub enum ReverifyError {
    #[error("unsupported schema {0}")]
    Schema(u32),
    #[error("unknown mode `{0}`")]
    UnknownMode(String),
    #[error("bad numeric field: `{0}`")]
    BadNumber(String),
    #[error("document does not fit the instance: {0}")]
    Mismatch(String),
}

pub fn eps_to_string(eps: &Epsilon) -> String {
    format!("{}/{}", eps.numer(), eps.denom())
}

pub fn parse_eps_fraction(s: &str) -> Option<Epsilon> {
    let (num, den) = s.split_once('/')?;
    Epsilon::new(num.parse().ok()?, den.parse().ok()?).ok()
}

fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((n, d)) => Some(BigRational::new(n.parse().ok()?, d.parse().ok()?)),
        None => Some(BigRational::from_integer(s.parse::<BigInt>().ok()?)),
    }
}

fn certificate_block<N: Numeric>(report: &CertificateReport<N>) -> CertificateBlock {
    CertificateBlock {
        packing_nonnegative: report.packing_nonnegative,
        packing_feasible: report.packing_feasible,
        cover_hits_every_edge: report.cover_hits_every_edge,
        cover_fully_charged: report.cover_fully_charged,
        eps_maximal: report.eps_maximal,
        weak_duality: report.weak_duality,
        ratio_certified: report.ratio_certified,
        all_pass: report.all_pass(),
    }
}

/// Everything `build_document` needs beyond the raw run: id translation and
/// unit choices differ between `hg` and `sc` inputs and between modes, so
/// the caller resolves those first.
pub struct DocumentInputs<'a, N: Numeric> {
    pub kind: &'a str,
    pub result: &'a CoverResult<N>,
    pub certificate: &'a CertificateReport<N>,
    /// Cover in the instance's own id space.
    pub cover_ids: Vec<usize>,
    /// Cover weight in the instance's own units, already rendered.
    pub cover_weight: String,
    /// Packing values in the instance's own index space, already rendered.
    pub packing: Vec<String>,
    pub scaled_by: Option<String>,
    pub oracle: Option<OracleBlock>,
}

pub fn build_document<N: Numeric + std::fmt::Display>(
    inputs: DocumentInputs<'_, N>,
) -> ResultDocument {
    let result = inputs.result;
    let stats = &result.stats;
    let eps = result.eps;
    let factor = result.mode.bound_factor();
    let (rb, wb) = if stats.m == 0 {
        (0.0, 0.0)
    } else {
        (
            round_bound(stats.rank, stats.m, &eps),
            work_bound(stats.size, stats.m, &eps),
        )
    };
    let truncated = result.reports.len() > MAX_ROUND_REPORTS;
    let round_reports = result
        .reports
        .iter()
        .take(MAX_ROUND_REPORTS)
        .map(|r| RoundBlock {
            round: r.round,
            edges_at_start: r.edges_at_start,
            edges_at_end: r.edges_at_end,
            deleted: r.deleted.len(),
            phi_before: r.phi_before.to_string(),
            phi_after: r.phi_after.to_string(),
            good_edge_fraction: r.good_edge_fraction.to_string(),
        })
        .collect();
    ResultDocument {
        schema: SCHEMA_VERSION,
        instance: InstanceBlock {
            kind: inputs.kind.to_string(),
            n: stats.n,
            m: stats.m,
            rank: stats.rank,
            size: stats.size,
        },
        mode: result.mode.token().to_string(),
        eps: eps_to_string(&eps),
        cover: inputs.cover_ids,
        cover_weight: inputs.cover_weight,
        packing: inputs.packing,
        packing_total: inputs.certificate.packing_total.to_string(),
        rounds: result.rounds(),
        work_edges: result.work_edges(),
        round_reports,
        round_reports_truncated: truncated,
        bounds: BoundsBlock {
            round_bound: rb.to_string(),
            work_bound: wb.to_string(),
            bound_factor: factor.to_string(),
            rounds_within_bound: result.rounds() as f64 <= factor * rb,
            work_within_bound: result.work_edges() as f64 <= factor * wb,
        },
        certificate: certificate_block(inputs.certificate),
        scaled_by: inputs.scaled_by,
        oracle: inputs.oracle,
    }
}

pub fn to_json(doc: &ResultDocument) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("document serializes");
    s.push('\n');
    s
}

/// Recomputes every certificate verdict from the document's own cover,
/// packing, mode, and eps against a freshly parsed instance. A document is
/// trustworthy exactly when this returns a block equal to the one it carries.
pub fn reverify(
    doc: &ResultDocument,
    instance: &ParsedInstance,
) -> Result<CertificateBlock, ReverifyError> {
    if doc.schema != SCHEMA_VERSION {
        return Err(ReverifyError::Schema(doc.schema));
    }
    let eps = parse_eps_fraction(&doc.eps)
        .ok_or_else(|| ReverifyError::BadNumber(doc.eps.clone()))?;
    // Bring cover and packing from the instance's id space back to the
    // hypergraph's.
    let (graph, cover, packing_strings) = match instance {
        ParsedInstance::Graph(h) => (h.clone(), doc.cover.clone(), doc.packing.clone()),
        ParsedInstance::SetCover(sc) => {
            let reduction = sc
                .reduce()
                .map_err(|e| ReverifyError::Mismatch(e.to_string()))?;
            if doc.packing.len() != sc.num_elements() {
                return Err(ReverifyError::Mismatch(format!(
                    "{} packing values for {} elements",
                    doc.packing.len(),
                    sc.num_elements()
                )));
            }
            let cover = doc
                .cover
                .iter()
                .map(|&s| {
                    reduction
                        .mapping
                        .vertex_for_set(s)
                        .map_err(|_| ReverifyError::Mismatch(format!("unknown set id {s}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let mut packing = vec![String::new(); sc.num_elements()];
            for (element, value) in doc.packing.iter().enumerate() {
                let edge = reduction
                    .mapping
                    .edge_for_element(element)
                    .expect("reduction maps every element");
                packing[edge] = value.clone();
            }
            (reduction.hypergraph, cover, packing)
        }
    };
    if packing_strings.len() != graph.m() {
        return Err(ReverifyError::Mismatch(format!(
            "{} packing values for {} edges",
            packing_strings.len(),
            graph.m()
        )));
    }
    let report = match doc.mode.as_str() {
        "rational" => {
            let packing = packing_strings
                .iter()
                .map(|s| parse_rational(s).ok_or_else(|| ReverifyError::BadNumber(s.clone())))
                .collect::<Result<Vec<_>, _>>()?;
            let report = CertificateReport::compute(&graph, &cover, &packing, eps)
                .map_err(|e| ReverifyError::Mismatch(e.to_string()))?;
            certificate_block(&report)
        }
        "float" => {
            let graph = graph
                .to_f64_weights()
                .map_err(|e| ReverifyError::Mismatch(e.to_string()))?;
            let packing = packing_strings
                .iter()
                .map(|s| {
                    s.parse::<f64>()
                        .map_err(|_| ReverifyError::BadNumber(s.clone()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let report = CertificateReport::compute(&graph, &cover, &packing, eps)
                .map_err(|e| ReverifyError::Mismatch(e.to_string()))?;
            certificate_block(&report)
        }
        "int" => {
            let graph = graph
                .to_integer_weights()
                .map_err(|e| ReverifyError::Mismatch(e.to_string()))?;
            let (scaled, factor) = parcover::engine::scale_weights_integer(&graph, &eps)
                .map_err(|e| ReverifyError::Mismatch(e.to_string()))?;
            let declared = doc
                .scaled_by
                .as_deref()
                .ok_or_else(|| ReverifyError::Mismatch("`int` document without scaled_by".into()))?;
            if declared != factor.to_string() {
                return Err(ReverifyError::Mismatch(format!(
                    "scaled_by {declared} but scaling derives {factor}"
                )));
            }
            let packing = packing_strings
                .iter()
                .map(|s| {
                    s.parse::<i128>()
                        .map_err(|_| ReverifyError::BadNumber(s.clone()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let report = CertificateReport::compute(&scaled, &cover, &packing, eps)
                .map_err(|e| ReverifyError::Mismatch(e.to_string()))?;
            certificate_block(&report)
        }
        other => return Err(ReverifyError::UnknownMode(other.to_string())),
    };
    Ok(report)
}
