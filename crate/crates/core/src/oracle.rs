//! Reference solvers: an exhaustive optimum for small instances and a
//! sequential greedy packing baseline. Both are independent of the round
//! engine and exist so its output can be judged against ground truth.

use thiserror::Error;

use crate::model::{Hypergraph, VertexId};
use crate::numeric::Numeric;

/// Exhaustive search refuses instances above this many vertices; `2^24`
/// subsets is the edge of comfortable desk-scale runtime.
pub const MAX_ORACLE_VERTICES: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("exhaustive search is capped at {limit} vertices, got {n}")]
    TooLarge { n: usize, limit: usize },
}

/// A provably optimal cover found by exhaustive search.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult<N> {
    /// Minimum-weight cover; among covers of equal weight, the
    /// lexicographically smallest vertex list.
    pub cover: Vec<VertexId>,
    pub weight: N,
    /// Number of candidate subsets examined.
    pub subsets_examined: u64,
}

/// Enumerates all `2^n` vertex subsets and returns the minimum-weight cover.
///
/// Ties are broken toward the lexicographically smallest sorted vertex list,
/// so the result is unique and reproducible.
pub fn brute_force_min_cover<N: Numeric>(
    h: &Hypergraph<N>,
) -> Result<OracleResult<N>, OracleError> {
    let n = h.n();
    if n > MAX_ORACLE_VERTICES {
        return Err(OracleError::TooLarge {
            n,
            limit: MAX_ORACLE_VERTICES,
        });
    }
    let edge_masks: Vec<u32> = h
        .edges()
        .iter()
        .map(|e| e.iter().fold(0u32, |m, &v| m | (1 << v)))
        .collect();
    let mut best: Option<(N, Vec<VertexId>)> = None;
    let mut examined = 0u64;
    for mask in 0..(1u32 << n) {
        examined += 1;
        if edge_masks.iter().any(|&em| em & mask == 0) {
            continue;
        }
        let vertices: Vec<VertexId> = (0..n).filter(|&v| mask & (1 << v) != 0).collect();
        let weight = N::sum(vertices.iter().map(|&v| h.weight(v)));
        let better = match &best {
            None => true,
            Some((bw, bv)) => weight < *bw || (weight == *bw && vertices < *bv),
        };
        if better {
            best = Some((weight, vertices));
        }
    }
    // The full vertex set always covers, so a best candidate exists.
    let (weight, cover) = best.expect("the full vertex set is a cover");
    Ok(OracleResult {
        cover,
        weight,
        subsets_examined: examined,
    })
}

/// Sequential greedy baseline: raises each edge's packing value to the
/// smallest residual among its vertices, in ascending edge id order, and
/// returns the tight vertices as the cover together with the packing.
///
/// The packing is maximal (every edge ends up with at least one tight
/// vertex), so the tight vertices cover every edge and their weight is at
/// most `rank` times the optimum.
pub fn greedy_maximal_packing<N: Numeric>(h: &Hypergraph<N>) -> GreedyBaseline<N> {
    let mut residual: Vec<N> = h.weights().to_vec();
    let mut packing = Vec::with_capacity(h.m());
    for e in 0..h.m() {
        let raise = h.edge(e)
            .iter()
            .map(|&v| &residual[v])
            .fold(None::<N>, |acc, r| match acc {
                Some(best) if best <= *r => Some(best),
                _ => Some(r.clone()),
            })
            .expect("edges are non-empty");
        for &v in h.edge(e) {
            residual[v] = residual[v].sub(&raise);
        }
        packing.push(raise);
    }
    let cover = (0..h.n()).filter(|&v| residual[v].is_zero()).collect();
    GreedyBaseline { cover, packing }
}

/// Output of [`greedy_maximal_packing`]: the tight vertices and the packing
/// that tightened them.
#[derive(Debug, Clone, PartialEq)]
pub struct GreedyBaseline<N> {
    /// Vertices whose residual reached zero, ascending.
    pub cover: Vec<VertexId>,
    /// Per-edge packing values, indexed by edge id.
    pub packing: Vec<N>,
}
