//! The synchronous round engine.
//!
//! Each round takes a frozen snapshot of the residual weights and live
//! degrees, raises every live edge's packing value by the smallest
//! `residual / degree` quotient over its vertices, subtracts the raises from
//! every vertex simultaneously, and deletes the vertices whose residual has
//! dropped to at most `eps` times their original weight, together with their
//! incident edges. When no live edge remains, the deleted vertices form a
//! cover and the accumulated edge values form a packing that is maximal up
//! to the `eps` slack.
//!
//! Everything a round decides is a pure function of the snapshot, so the
//! per-edge and per-vertex passes may run on parallel workers; each item is
//! still reduced in ascending id order, which keeps even the binary64 mode
//! bit-identical to a sequential run.

use rayon::prelude::*;
use thiserror::Error;

use crate::model::{EdgeId, GraphStats, Hypergraph, VertexId};
use crate::numeric::{Epsilon, Numeric, NumericMode};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error("no live edges remain; the run has already converged")]
    NoLiveEdges,
    #[error("round {rounds} passed the termination cap {cap:.2}; the numeric mode is not making progress")]
    RoundBoundExceeded { rounds: usize, cap: f64 },
    #[error("arithmetic overflow while scaling weights")]
    ScaleOverflow,
}

/// Execution choices that must not change any committed value.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Evaluate the per-edge and per-vertex passes on rayon workers. The
    /// committed state is bit-identical to the sequential evaluation.
    pub parallel: bool,
}

/// Everything one round did, recorded for bound checking and diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundReport<N> {
    /// 1-based round index.
    pub round: usize,
    pub edges_at_start: usize,
    pub edges_at_end: usize,
    /// Sum of edge cardinalities over the live edges at round start: the
    /// work actually touched this round.
    pub vertex_touches: usize,
    /// Raise applied to each live edge, ascending by edge id.
    pub raises: Vec<(EdgeId, N)>,
    /// Each live edge's limiting vertex: the lowest-id vertex attaining the
    /// minimum `residual / degree` quotient.
    pub limiters: Vec<(EdgeId, VertexId)>,
    /// How many edges each vertex limited (vertices with a zero count are
    /// omitted), ascending by vertex id.
    pub limited_counts: Vec<(VertexId, u32)>,
    /// Vertices deleted this round, ascending.
    pub deleted: Vec<VertexId>,
    pub phi_before: f64,
    pub phi_after: f64,
    /// Edges whose limiter is good, i.e. limits strictly more than a third
    /// of its own live edges.
    pub good_edges: usize,
    pub good_edge_fraction: f64,
}

/// Final output of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverResult<N> {
    /// Deleted vertices in admission order.
    pub cover: Vec<VertexId>,
    pub cover_weight: N,
    /// Final packing value of every edge, live or not, indexed by edge id.
    pub packing: Vec<N>,
    pub reports: Vec<RoundReport<N>>,
    pub stats: GraphStats,
    pub eps: Epsilon,
    pub mode: NumericMode,
}

impl<N: Numeric> CoverResult<N> {
    pub fn rounds(&self) -> usize {
        self.reports.len()
    }

    /// Total of the live-edge counts at every round start; the measured
    /// quantity the work bound caps.
    pub fn work_edges(&self) -> usize {
        self.reports.iter().map(|r| r.edges_at_start).sum()
    }

    pub fn total_packing(&self) -> N {
        N::sum(self.packing.iter())
    }
}

/// Mutable state of a run between rounds.
#[derive(Debug)]
pub struct PackingState<'g, N: Numeric> {
    graph: &'g Hypergraph<N>,
    eps: Epsilon,
    options: RunOptions,
    residual: Vec<N>,
    degree: Vec<usize>,
    live_incidence: Vec<Vec<EdgeId>>,
    live_edges: Vec<EdgeId>,
    edge_alive: Vec<bool>,
    packing: Vec<N>,
    deleted: Vec<VertexId>,
    vertex_deleted: Vec<bool>,
    raise_buf: Vec<N>,
    rounds_completed: usize,
}

impl<'g, N: Numeric> PackingState<'g, N> {
    /// Fresh state: residuals equal the weights, every edge is live.
    pub fn new(graph: &'g Hypergraph<N>, eps: Epsilon, options: RunOptions) -> Self {
        let n = graph.n();
        let m = graph.m();
        PackingState {
            graph,
            eps,
            options,
            residual: graph.weights().to_vec(),
            degree: (0..n).map(|v| graph.degree(v)).collect(),
            live_incidence: (0..n).map(|v| graph.incident_edges(v).to_vec()).collect(),
            live_edges: (0..m).collect(),
            edge_alive: vec![true; m],
            packing: vec![N::zero(); m],
            deleted: Vec::new(),
            vertex_deleted: vec![false; n],
            raise_buf: vec![N::zero(); m],
            rounds_completed: 0,
        }
    }

    pub fn graph(&self) -> &'g Hypergraph<N> {
        self.graph
    }

    pub fn epsilon(&self) -> Epsilon {
        self.eps
    }

    pub fn residual_weight(&self, v: VertexId) -> &N {
        &self.residual[v]
    }

    /// Number of live edges still incident to `v`.
    pub fn live_degree(&self, v: VertexId) -> usize {
        self.degree[v]
    }

    pub fn is_deleted(&self, v: VertexId) -> bool {
        self.vertex_deleted[v]
    }

    pub fn live_edge_count(&self) -> usize {
        self.live_edges.len()
    }

    pub fn rounds_completed(&self) -> usize {
        self.rounds_completed
    }

    pub fn packing_values(&self) -> &[N] {
        &self.packing
    }

    pub fn deleted_vertices(&self) -> &[VertexId] {
        &self.deleted
    }

    /// The potential `sum_v degree(v) * ln(residual(v) / (eps * weight(v)))`
    /// over live degrees. Instrumentation only: computed in binary64 in every
    /// mode, with compensated summation so the error stays near one ulp of
    /// the total. Starts at `size * ln(1/eps)` and hits 0 at convergence.
    pub fn potential(&self) -> f64 {
        let eps_f = self.eps.as_f64();
        let mut sum = 0.0;
        let mut compensation = 0.0;
        for v in 0..self.graph.n() {
            let d = self.degree[v];
            if d == 0 {
                continue;
            }
            let ratio = self.residual[v].to_f64() / (eps_f * self.graph.weight(v).to_f64());
            let term = d as f64 * ratio.ln();
            let t = sum + term;
            if sum.abs() >= term.abs() {
                compensation += (sum - t) + term;
            } else {
                compensation += (term - t) + sum;
            }
            sum = t;
        }
        sum + compensation
    }

    fn edge_raise(&self, e: EdgeId) -> (EdgeId, N, VertexId) {
        let mut best: Option<(N, VertexId)> = None;
        for &v in self.graph.edge(e) {
            let d = self.degree[v];
            debug_assert!(d >= 1, "live edge incident to a vertex with no live edges");
            let candidate = self.residual[v].div_by_degree(d);
            best = match best {
                None => Some((candidate, v)),
                Some((b, lim)) => {
                    if candidate < b || (candidate == b && v < lim) {
                        Some((candidate, v))
                    } else {
                        Some((b, lim))
                    }
                }
            };
        }
        let (raise, limiter) = best.expect("edges are non-empty");
        (e, raise, limiter)
    }

    fn vertex_update(&self, v: VertexId) -> (VertexId, N, bool) {
        self.residual[v].debug_assert_round_progress(self.degree[v], self.graph.m());
        let total = N::sum(self.live_incidence[v].iter().map(|&e| &self.raise_buf[e]));
        let next = self.residual[v].sub(&total);
        let delete = next.le_eps_times(&self.eps, self.graph.weight(v));
        (v, next, delete)
    }

    /// Executes one synchronous round and reports what it did.
    ///
    /// Raises are computed from the round-start snapshot only; the updates
    /// and deletions are committed afterwards, so vertices deleted in the
    /// same round still receive their full raise. Ties for the limiting
    /// vertex go to the lowest id, and every accumulation runs in ascending
    /// id order regardless of worker count.
    pub fn round(&mut self) -> Result<RoundReport<N>, EngineError> {
        if self.live_edges.is_empty() {
            return Err(EngineError::NoLiveEdges);
        }
        let edges_at_start = self.live_edges.len();
        let vertex_touches = self
            .live_edges
            .iter()
            .map(|&e| self.graph.edge(e).len())
            .sum();
        let phi_before = self.potential();

        let raises: Vec<(EdgeId, N, VertexId)> = if self.options.parallel {
            self.live_edges
                .par_iter()
                .map(|&e| self.edge_raise(e))
                .collect()
        } else {
            self.live_edges.iter().map(|&e| self.edge_raise(e)).collect()
        };
        for (e, raise, _) in &raises {
            self.raise_buf[*e] = raise.clone();
        }

        let limiters: Vec<(EdgeId, VertexId)> =
            raises.iter().map(|(e, _, lim)| (*e, *lim)).collect();
        let limit_stats = limit_orientation_stats(&limiters, &self.degree);
        let good_edge_fraction = limit_stats.good_edges as f64 / edges_at_start as f64;

        let active: Vec<VertexId> = (0..self.graph.n())
            .filter(|&v| !self.vertex_deleted[v] && self.degree[v] > 0)
            .collect();
        let verdicts: Vec<(VertexId, N, bool)> = if self.options.parallel {
            active.par_iter().map(|&v| self.vertex_update(v)).collect()
        } else {
            active.iter().map(|&v| self.vertex_update(v)).collect()
        };

        let mut deleted_this_round = Vec::new();
        for (v, next, delete) in verdicts {
            self.residual[v] = next;
            if delete {
                self.vertex_deleted[v] = true;
                self.deleted.push(v);
                deleted_this_round.push(v);
            }
        }
        for (e, raise, _) in &raises {
            self.packing[*e] = self.packing[*e].add(raise);
        }
        for &v in &deleted_this_round {
            for &e in &self.live_incidence[v] {
                self.edge_alive[e] = false;
            }
        }
        let edge_alive = std::mem::take(&mut self.edge_alive);
        self.live_edges.retain(|&e| edge_alive[e]);
        for &v in &active {
            if self.vertex_deleted[v] {
                self.live_incidence[v].clear();
                self.degree[v] = 0;
            } else {
                let mut li = std::mem::take(&mut self.live_incidence[v]);
                li.retain(|&e| edge_alive[e]);
                self.degree[v] = li.len();
                self.live_incidence[v] = li;
            }
        }
        self.edge_alive = edge_alive;
        self.rounds_completed += 1;

        let phi_after = self.potential();
        Ok(RoundReport {
            round: self.rounds_completed,
            edges_at_start,
            edges_at_end: self.live_edges.len(),
            vertex_touches,
            raises: raises.into_iter().map(|(e, r, _)| (e, r)).collect(),
            limiters,
            limited_counts: limit_stats.limited_counts,
            deleted: deleted_this_round,
            phi_before,
            phi_after,
            good_edges: limit_stats.good_edges,
            good_edge_fraction,
        })
    }
}

/// Counts derived from one round's limit orientation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitStats {
    /// Per-vertex count of edges it limited; zero counts omitted, ascending.
    pub limited_counts: Vec<(VertexId, u32)>,
    /// Edges whose limiter limits strictly more than a third of its own
    /// live edges.
    pub good_edges: usize,
}

/// Directs each live edge into its limiting vertex and counts how many edges
/// point at vertices that absorb strictly more than a third of their own
/// live edges. `degrees` are the live degrees at round start.
pub fn limit_orientation_stats(
    limiters: &[(EdgeId, VertexId)],
    degrees: &[usize],
) -> LimitStats {
    let mut counts = vec![0u32; degrees.len()];
    let mut touched = Vec::new();
    for &(_, v) in limiters {
        if counts[v] == 0 {
            touched.push(v);
        }
        counts[v] += 1;
    }
    touched.sort_unstable();
    let mut good_edges = 0usize;
    let limited_counts = touched
        .iter()
        .map(|&v| {
            let c = counts[v];
            if 3 * c as usize > degrees[v] {
                good_edges += c as usize;
            }
            (v, c)
        })
        .collect();
    LimitStats {
        limited_counts,
        good_edges,
    }
}

/// Guaranteed round count for a converging run on an instance with the given
/// rank and `m >= 1` edges: `(1 + rank * ln(1/eps)) * (1 + ln m)`. The
/// scaled-integer mode is covered by twice this value.
pub fn round_bound(rank: usize, m: usize, eps: &Epsilon) -> f64 {
    (1.0 + rank as f64 * eps.ln_inverse()) * (1.0 + (m as f64).ln())
}

/// Guaranteed total of live-edge counts over all round starts:
/// `m + size * ln(1/eps)`, doubled in the scaled-integer mode.
pub fn work_bound(size: usize, m: usize, eps: &Epsilon) -> f64 {
    m as f64 + size as f64 * eps.ln_inverse()
}

/// Hard cap on rounds before the run is declared stuck: twice the guaranteed
/// bound for the slowest mode plus slack. Reaching it means a numeric bug,
/// not a hard instance.
pub fn termination_cap(rank: usize, m: usize, eps: &Epsilon) -> f64 {
    2.0 * round_bound(rank, m, eps) + rank as f64 * eps.ln_inverse() + 2.0
}

/// Runs rounds until no live edge remains and packages the result.
pub fn run_cover<N: Numeric>(
    graph: &Hypergraph<N>,
    eps: Epsilon,
    options: RunOptions,
) -> Result<CoverResult<N>, EngineError> {
    let stats = graph.stats();
    let cap = if stats.m == 0 {
        0.0
    } else {
        termination_cap(stats.rank, stats.m, &eps)
    };
    let mut state = PackingState::new(graph, eps, options);
    let mut reports = Vec::new();
    while state.live_edge_count() > 0 {
        let report = state.round()?;
        reports.push(report);
        if state.rounds_completed() as f64 > cap {
            return Err(EngineError::RoundBoundExceeded {
                rounds: state.rounds_completed(),
                cap,
            });
        }
    }
    let PackingState {
        packing, deleted, ..
    } = state;
    let cover_weight = N::sum(deleted.iter().map(|&v| graph.weight(v)));
    Ok(CoverResult {
        cover: deleted,
        cover_weight,
        packing,
        reports,
        stats,
        eps,
        mode: N::MODE,
    })
}

/// Multiplies integer weights by the smallest factor that lifts the minimum
/// weight to at least `ceil(m / eps)`, returning the scaled graph and the
/// factor. With that floor, every live residual stays at or above `m`, so
/// floored quotients keep at least half their exact value and never hit zero.
///
/// Expects `eps >= 1/(2 * w(V))`; below that the slack already forces exact
/// optimality and scaling this way is pointless. For `k`-bit inputs the
/// scaled weights stay under `2^(2k+3) * m * n`, which is asserted.
pub fn scale_weights_integer(
    graph: &Hypergraph<i128>,
    eps: &Epsilon,
) -> Result<(Hypergraph<i128>, i128), EngineError> {
    let m = graph.m() as i128;
    let target = m
        .checked_mul(eps.denom() as i128)
        .map(|t| ceil_div(t, eps.numer() as i128))
        .ok_or(EngineError::ScaleOverflow)?;
    let min_weight = graph.weights().iter().min().copied().unwrap_or(1);
    let factor = if target <= min_weight {
        1
    } else {
        ceil_div(target, min_weight)
    };
    let scaled: Vec<i128> = graph
        .weights()
        .iter()
        .map(|w| w.checked_mul(factor).ok_or(EngineError::ScaleOverflow))
        .collect::<Result<_, _>>()?;
    let out = graph
        .with_weights(scaled)
        .expect("scaling positive weights by a positive factor keeps them positive");
    if graph.m() > 0 {
        use num_bigint::BigInt;
        let w_total: BigInt = graph.weights().iter().map(|&w| BigInt::from(w)).sum();
        let precondition_holds =
            BigInt::from(2) * eps.numer() * &w_total >= BigInt::from(eps.denom());
        if precondition_holds {
            let k = graph.max_weight_bits();
            let limit = (BigInt::from(1) << (2 * k + 3)) * graph.m() * graph.n();
            let max_scaled = out.weights().iter().max().copied().unwrap_or(0);
            assert!(
                BigInt::from(max_scaled) < limit,
                "scaled weights escaped the {}-bit envelope",
                2 * k + 3
            );
        }
    }
    Ok((out, factor))
}

fn ceil_div(a: i128, b: i128) -> i128 {
    debug_assert!(a >= 0 && b > 0);
    (a + b - 1) / b
}
