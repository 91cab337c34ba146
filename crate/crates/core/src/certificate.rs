//! Certificate checks for a (cover, packing) pair.
//!
//! Nothing here trusts the engine: every check recomputes its inequality
//! from the graph, the claimed cover, the claimed packing values, and the
//! slack parameter alone. The chain being certified is
//!
//! ```text
//! packing total  <=  weight of any cover  <=  weight of the claimed cover
//!                <=  rank / (1 - eps) * packing total
//! ```
//!
//! so a report where everything passes pins the claimed cover's weight to
//! within `rank / (1 - eps)` of optimal without knowing the optimum.
//!
//! Comparisons against `(1 - eps) * w` are cross-multiplied through the
//! exact numerator and denominator of the slack, which keeps the rational
//! and integer modes free of rounding; the binary64 mode gets a relative
//! slack of [`FLOAT_CERT_SLACK`](crate::numeric::FLOAT_CERT_SLACK).

use thiserror::Error;

use crate::model::{valid_vertex_subset, Hypergraph, VertexId};
use crate::numeric::{Epsilon, Numeric, NumericMode};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertificateError {
    #[error("packing has {got} values for {expected} edges")]
    PackingLength { expected: usize, got: usize },
    #[error("cover is not a valid vertex subset (id out of range or repeated)")]
    MalformedCover,
}

/// Result of re-deriving every certified inequality from raw inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct CertificateReport<N> {
    pub mode: NumericMode,
    pub eps: Epsilon,
    /// No edge carries a negative value.
    pub packing_nonnegative: bool,
    /// Every vertex is charged at most its weight.
    pub packing_feasible: bool,
    /// Every edge contains a claimed cover vertex.
    pub cover_hits_every_edge: bool,
    /// Every claimed cover vertex is charged to at least `(1 - eps)` of its
    /// weight, i.e. the cover only takes vertices the packing paid for.
    pub cover_fully_charged: bool,
    /// Every edge has some vertex charged to at least `(1 - eps)` of its
    /// weight, so no edge value can be raised without breaking feasibility
    /// beyond the slack.
    pub eps_maximal: bool,
    /// Total packing value is at most the claimed cover's weight.
    pub weak_duality: bool,
    /// Claimed cover weight is at most `rank / (1 - eps)` times the total
    /// packing value.
    pub ratio_certified: bool,
    pub packing_total: N,
    pub cover_weight: N,
}

impl<N: Numeric> CertificateReport<N> {
    pub fn all_pass(&self) -> bool {
        self.packing_nonnegative
            && self.packing_feasible
            && self.cover_hits_every_edge
            && self.cover_fully_charged
            && self.eps_maximal
            && self.weak_duality
            && self.ratio_certified
    }

    /// Runs every check. Fails only on structurally malformed inputs;
    /// semantic violations come back as failed flags.
    pub fn compute(
        graph: &Hypergraph<N>,
        cover: &[VertexId],
        packing: &[N],
        eps: Epsilon,
    ) -> Result<Self, CertificateError> {
        if packing.len() != graph.m() {
            return Err(CertificateError::PackingLength {
                expected: graph.m(),
                got: packing.len(),
            });
        }
        if !valid_vertex_subset(graph.n(), cover) {
            return Err(CertificateError::MalformedCover);
        }

        let charges = vertex_charges(graph, packing);
        let packing_nonnegative = packing.iter().all(|p| !p.is_negative());
        let packing_feasible = (0..graph.n())
            .all(|v| charges[v].le_with_tolerance(graph.weight(v), graph.weight(v).to_f64()));

        let mut in_cover = vec![false; graph.n()];
        for &v in cover {
            in_cover[v] = true;
        }
        let cover_hits_every_edge = graph
            .edges()
            .iter()
            .all(|e| e.iter().any(|&v| in_cover[v]));

        let cover_fully_charged = cover
            .iter()
            .all(|&v| charged_to_eps_complement(graph.weight(v), &charges[v], &eps));
        let eps_maximal = graph
            .edges()
            .iter()
            .all(|e| {
                e.iter()
                    .any(|&v| charged_to_eps_complement(graph.weight(v), &charges[v], &eps))
            });

        let packing_total = N::sum(packing.iter());
        let cover_weight = N::sum(cover.iter().map(|&v| graph.weight(v)));
        let scale = graph.total_weight().to_f64().abs().max(1.0);
        let weak_duality = packing_total.le_with_tolerance(&cover_weight, scale);

        let rank = graph.stats().rank;
        let lhs = cover_weight.mul_u128(eps.complement_numer() as u128);
        let rhs = packing_total.mul_u128(eps.denom() as u128 * rank as u128);
        let ratio_certified = lhs.le_with_tolerance(&rhs, scale * eps.denom() as f64);

        Ok(CertificateReport {
            mode: N::MODE,
            eps,
            packing_nonnegative,
            packing_feasible,
            cover_hits_every_edge,
            cover_fully_charged,
            eps_maximal,
            weak_duality,
            ratio_certified,
            packing_total,
            cover_weight,
        })
    }
}

/// Charge accumulated by each vertex: the sum of packing values over its
/// incident edges, in ascending edge order.
pub fn vertex_charges<N: Numeric>(graph: &Hypergraph<N>, packing: &[N]) -> Vec<N> {
    (0..graph.n())
        .map(|v| N::sum(graph.incident_edges(v).iter().map(|&e| &packing[e])))
        .collect()
}

/// `(1 - eps) * w <= charge`, cross-multiplied so the exact modes never
/// round: `w * (den - num) <= charge * den`, with the binary64 slack scaled
/// by `w * den`.
fn charged_to_eps_complement<N: Numeric>(w: &N, charge: &N, eps: &Epsilon) -> bool {
    let lhs = w.mul_u128(eps.complement_numer() as u128);
    let rhs = charge.mul_u128(eps.denom() as u128);
    lhs.le_with_tolerance(&rhs, w.to_f64().abs() * eps.denom() as f64)
}

/// Nonnegative values that never charge a vertex past its weight.
pub fn verify_packing<N: Numeric>(graph: &Hypergraph<N>, packing: &[N]) -> bool {
    packing.len() == graph.m()
        && packing.iter().all(|p| !p.is_negative())
        && vertex_charges(graph, packing)
            .iter()
            .enumerate()
            .all(|(v, c)| c.le_with_tolerance(graph.weight(v), graph.weight(v).to_f64()))
}

/// Every edge contains a vertex of the claimed cover.
pub fn verify_cover<N: Numeric>(graph: &Hypergraph<N>, cover: &[VertexId]) -> bool {
    if !valid_vertex_subset(graph.n(), cover) {
        return false;
    }
    let mut in_cover = vec![false; graph.n()];
    for &v in cover {
        in_cover[v] = true;
    }
    graph.edges().iter().all(|e| e.iter().any(|&v| in_cover[v]))
}

/// Every edge has a vertex charged to at least `(1 - eps)` of its weight:
/// no single edge value can grow without overcharging some vertex beyond
/// the slack. A feasible packing passing this is maximal up to `eps`.
pub fn verify_eps_maximal<N: Numeric>(
    graph: &Hypergraph<N>,
    packing: &[N],
    eps: &Epsilon,
) -> bool {
    if packing.len() != graph.m() {
        return false;
    }
    let charges = vertex_charges(graph, packing);
    graph.edges().iter().all(|e| {
        e.iter()
            .any(|&v| charged_to_eps_complement(graph.weight(v), &charges[v], eps))
    })
}

/// True when `eps < 1 / w(V)` for an integer-weighted instance: the slack is
/// then too small to admit any fractional improvement, so a fully certified
/// cover is within exactly `rank` times the optimum.
pub fn eps_below_inverse_total_weight(graph: &Hypergraph<i128>, eps: &Epsilon) -> bool {
    use num_bigint::BigInt;
    let total: BigInt = graph.weights().iter().map(|&w| BigInt::from(w)).sum();
    BigInt::from(eps.numer()) * total < BigInt::from(eps.denom())
}
