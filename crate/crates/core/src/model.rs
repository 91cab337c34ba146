//! Weighted hypergraphs with dense integer ids.
//!
//! Vertices and edges are `0..n` and `0..m`; any external labels live in the
//! I/O layer. An edge is a duplicate-free, non-empty list of vertices, kept
//! in the order it was given. Identical vertex sets may appear as distinct
//! edges. Vertices may be isolated. Weights are strictly positive.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use thiserror::Error;

use crate::numeric::Numeric;

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("edge {edge} is empty")]
    EmptyEdge { edge: EdgeId },
    #[error("edge {edge} references vertex {vertex}, but the instance has {n} vertices")]
    UnknownVertex { edge: EdgeId, vertex: VertexId, n: usize },
    #[error("vertex {vertex} has a non-positive weight")]
    NonpositiveWeight { vertex: VertexId },
    #[error("edge {edge} lists vertex {vertex} more than once")]
    DuplicateVertexInEdge { edge: EdgeId, vertex: VertexId },
    #[error("set {set} references element {element}, but the universe has {universe} elements")]
    UnknownElement { set: usize, element: usize, universe: usize },
    #[error("set {set} lists element {element} more than once")]
    DuplicateElementInSet { set: usize, element: usize },
    #[error("element {element} is not contained in any set")]
    UncoveredElement { element: usize },
    #[error("id {id} is out of range (limit {limit})")]
    UnknownId { id: usize, limit: usize },
    #[error("vertex {vertex} has a non-integer weight")]
    NonIntegerWeight { vertex: VertexId },
    #[error("vertex {vertex} has a weight outside the representable range")]
    WeightOutOfRange { vertex: VertexId },
}

/// Derived size measures of a hypergraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphStats {
    /// Vertex count.
    pub n: usize,
    /// Edge count.
    pub m: usize,
    /// Largest edge cardinality (0 when there are no edges).
    pub rank: usize,
    /// Total of all edge cardinalities, i.e. the incidence count.
    pub size: usize,
}

/// A vertex-weighted hypergraph.
#[derive(Debug, Clone, PartialEq)]
pub struct Hypergraph<N> {
    weights: Vec<N>,
    edges: Vec<Vec<VertexId>>,
    incidence: Vec<Vec<EdgeId>>,
}

impl<N: Numeric> Hypergraph<N> {
    /// Validates and builds a hypergraph; the incidence lists (edge ids per
    /// vertex, ascending) are derived here and never mutated afterwards.
    pub fn new(weights: Vec<N>, edges: Vec<Vec<VertexId>>) -> Result<Self, ModelError> {
        let n = weights.len();
        for (vertex, w) in weights.iter().enumerate() {
            if !w.is_positive() {
                return Err(ModelError::NonpositiveWeight { vertex });
            }
        }
        // Epoch-stamped duplicate detection: one O(n) allocation total.
        let mut stamp = vec![usize::MAX; n];
        for (edge, vs) in edges.iter().enumerate() {
            if vs.is_empty() {
                return Err(ModelError::EmptyEdge { edge });
            }
            for &v in vs {
                if v >= n {
                    return Err(ModelError::UnknownVertex { edge, vertex: v, n });
                }
                if stamp[v] == edge {
                    return Err(ModelError::DuplicateVertexInEdge { edge, vertex: v });
                }
                stamp[v] = edge;
            }
        }
        let mut incidence = vec![Vec::new(); n];
        for (e, vs) in edges.iter().enumerate() {
            for &v in vs {
                incidence[v].push(e);
            }
        }
        Ok(Hypergraph {
            weights,
            edges,
            incidence,
        })
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn weight(&self, v: VertexId) -> &N {
        &self.weights[v]
    }

    pub fn weights(&self) -> &[N] {
        &self.weights
    }

    /// The vertices of an edge, in their given order.
    pub fn edge(&self, e: EdgeId) -> &[VertexId] {
        &self.edges[e]
    }

    pub fn edges(&self) -> &[Vec<VertexId>] {
        &self.edges
    }

    /// Edge ids incident to a vertex, ascending.
    pub fn incident_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.incidence[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.incidence[v].len()
    }

    pub fn stats(&self) -> GraphStats {
        let rank = self.edges.iter().map(Vec::len).max().unwrap_or(0);
        let size = self.edges.iter().map(Vec::len).sum();
        GraphStats {
            n: self.n(),
            m: self.m(),
            rank,
            size,
        }
    }

    /// Total vertex weight `w(V)`.
    pub fn total_weight(&self) -> N {
        N::sum(self.weights.iter())
    }

    /// Weight of a vertex subset. Ids must be in range and duplicate-free.
    pub fn subset_weight(&self, vertices: &[VertexId]) -> Result<N, ModelError> {
        for &v in vertices {
            if v >= self.n() {
                return Err(ModelError::UnknownId { id: v, limit: self.n() });
            }
        }
        Ok(N::sum(vertices.iter().map(|&v| &self.weights[v])))
    }

    /// True when the incidence lists are exactly the inverse of the edge
    /// lists; construction guarantees it, tests cross-check it.
    pub fn incidence_consistent(&self) -> bool {
        let mut count = 0usize;
        for (v, es) in self.incidence.iter().enumerate() {
            if es.windows(2).any(|w| w[0] >= w[1]) {
                return false;
            }
            for &e in es {
                if !self.edges[e].contains(&v) {
                    return false;
                }
            }
            count += es.len();
        }
        count == self.stats().size
    }

    /// Same structure, different weights; validity of the structure carries
    /// over, positivity of the new weights is re-checked.
    pub fn with_weights<M: Numeric>(&self, weights: Vec<M>) -> Result<Hypergraph<M>, ModelError> {
        assert_eq!(weights.len(), self.n());
        for (vertex, w) in weights.iter().enumerate() {
            if !w.is_positive() {
                return Err(ModelError::NonpositiveWeight { vertex });
            }
        }
        Ok(Hypergraph {
            weights,
            edges: self.edges.clone(),
            incidence: self.incidence.clone(),
        })
    }
}

impl Hypergraph<BigRational> {
    /// Converts exact weights to binary64 once, up front. Fails only if a
    /// positive weight is so small it would round to zero.
    pub fn to_f64_weights(&self) -> Result<Hypergraph<f64>, ModelError> {
        let weights = self
            .weights
            .iter()
            .enumerate()
            .map(|(vertex, w)| {
                let f = Numeric::to_f64(w);
                if f > 0.0 && f.is_finite() {
                    Ok(f)
                } else {
                    Err(ModelError::WeightOutOfRange { vertex })
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        self.with_weights(weights)
    }

    /// Requires every weight to be an integer fitting the machine range;
    /// this is the gate into the scaled-integer pipeline.
    pub fn to_integer_weights(&self) -> Result<Hypergraph<i128>, ModelError> {
        let weights = self
            .weights
            .iter()
            .enumerate()
            .map(|(vertex, w)| {
                if !w.denom().is_one() {
                    return Err(ModelError::NonIntegerWeight { vertex });
                }
                w.numer()
                    .to_i128()
                    .ok_or(ModelError::WeightOutOfRange { vertex })
            })
            .collect::<Result<Vec<_>, _>>()?;
        self.with_weights(weights)
    }
}

impl Hypergraph<i128> {
    /// Lifts integer weights back into the exact-rational representation.
    pub fn to_rational_weights(&self) -> Hypergraph<BigRational> {
        let weights = self
            .weights
            .iter()
            .map(|&w| BigRational::from_integer(BigInt::from(w)))
            .collect();
        self.with_weights(weights)
            .expect("positive integers stay positive")
    }

    /// Largest bit length among the weights.
    pub fn max_weight_bits(&self) -> u64 {
        self.weights
            .iter()
            .map(|w| 128 - w.unsigned_abs().leading_zeros() as u64)
            .max()
            .unwrap_or(0)
    }
}

/// True when the given vertices form a duplicate-free subset of `0..n`.
pub fn valid_vertex_subset(n: usize, vertices: &[VertexId]) -> bool {
    let mut seen = vec![false; n];
    vertices.iter().all(|&v| {
        if v >= n || seen[v] {
            false
        } else {
            seen[v] = true;
            true
        }
    })
}
