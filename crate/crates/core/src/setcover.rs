//! Weighted set cover and its reduction to hypergraph vertex cover.
//!
//! Each set becomes a vertex carrying the set's weight; each universe
//! element becomes the edge containing exactly the vertices of the sets
//! holding it. Covers and packings translate back through explicit id
//! tables, so the translation is cross-checkable rather than assumed.

use crate::model::{EdgeId, Hypergraph, ModelError, VertexId};
use crate::numeric::Numeric;

/// A weighted set system over the universe `0..num_elements`.
#[derive(Debug, Clone, PartialEq)]
pub struct SetCoverInstance<N> {
    weights: Vec<N>,
    sets: Vec<Vec<usize>>,
    num_elements: usize,
}

/// Bijective id tables between a set-cover instance and its hypergraph image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdMapping {
    set_to_vertex: Vec<VertexId>,
    vertex_to_set: Vec<usize>,
    element_to_edge: Vec<EdgeId>,
    edge_to_element: Vec<usize>,
}

/// The hypergraph image of a set-cover instance, with its id mapping.
#[derive(Debug, Clone, PartialEq)]
pub struct SetCoverReduction<N> {
    pub hypergraph: Hypergraph<N>,
    pub mapping: IdMapping,
}

impl<N: Numeric> SetCoverInstance<N> {
    /// Validates weights, element ranges, and per-set duplicates. Empty sets
    /// are allowed (they become isolated vertices); whether every element is
    /// covered is checked by [`SetCoverInstance::reduce`].
    pub fn new(
        weights: Vec<N>,
        sets: Vec<Vec<usize>>,
        num_elements: usize,
    ) -> Result<Self, ModelError> {
        assert_eq!(weights.len(), sets.len());
        for (vertex, w) in weights.iter().enumerate() {
            if !w.is_positive() {
                return Err(ModelError::NonpositiveWeight { vertex });
            }
        }
        let mut stamp = vec![usize::MAX; num_elements];
        for (set, elems) in sets.iter().enumerate() {
            for &x in elems {
                if x >= num_elements {
                    return Err(ModelError::UnknownElement {
                        set,
                        element: x,
                        universe: num_elements,
                    });
                }
                if stamp[x] == set {
                    return Err(ModelError::DuplicateElementInSet { set, element: x });
                }
                stamp[x] = set;
            }
        }
        Ok(SetCoverInstance {
            weights,
            sets,
            num_elements,
        })
    }

    pub fn num_sets(&self) -> usize {
        self.sets.len()
    }

    pub fn num_elements(&self) -> usize {
        self.num_elements
    }

    pub fn weight(&self, set: usize) -> &N {
        &self.weights[set]
    }

    pub fn set(&self, set: usize) -> &[usize] {
        &self.sets[set]
    }

    /// Builds the hypergraph image. Fails with [`ModelError::UncoveredElement`]
    /// if some element lies in no set, since that element's edge would be
    /// empty and the instance infeasible.
    pub fn reduce(&self) -> Result<SetCoverReduction<N>, ModelError> {
        let num_sets = self.sets.len();
        let mut edges = vec![Vec::new(); self.num_elements];
        for (set, elems) in self.sets.iter().enumerate() {
            for &x in elems {
                edges[x].push(set);
            }
        }
        if let Some(element) = edges.iter().position(Vec::is_empty) {
            return Err(ModelError::UncoveredElement { element });
        }
        let hypergraph = Hypergraph::new(self.weights.clone(), edges)?;
        let mapping = IdMapping {
            set_to_vertex: (0..num_sets).collect(),
            vertex_to_set: (0..num_sets).collect(),
            element_to_edge: (0..self.num_elements).collect(),
            edge_to_element: (0..self.num_elements).collect(),
        };
        Ok(SetCoverReduction { hypergraph, mapping })
    }
}

impl IdMapping {
    pub fn vertex_for_set(&self, set: usize) -> Result<VertexId, ModelError> {
        self.set_to_vertex
            .get(set)
            .copied()
            .ok_or(ModelError::UnknownId {
                id: set,
                limit: self.set_to_vertex.len(),
            })
    }

    pub fn set_for_vertex(&self, vertex: VertexId) -> Result<usize, ModelError> {
        self.vertex_to_set
            .get(vertex)
            .copied()
            .ok_or(ModelError::UnknownId {
                id: vertex,
                limit: self.vertex_to_set.len(),
            })
    }

    pub fn edge_for_element(&self, element: usize) -> Result<EdgeId, ModelError> {
        self.element_to_edge
            .get(element)
            .copied()
            .ok_or(ModelError::UnknownId {
                id: element,
                limit: self.element_to_edge.len(),
            })
    }

    pub fn element_for_edge(&self, edge: EdgeId) -> Result<usize, ModelError> {
        self.edge_to_element
            .get(edge)
            .copied()
            .ok_or(ModelError::UnknownId {
                id: edge,
                limit: self.edge_to_element.len(),
            })
    }

    /// True when the four tables really are mutually inverse bijections.
    pub fn is_bijective(&self) -> bool {
        let sets_ok = self.set_to_vertex.len() == self.vertex_to_set.len()
            && self
                .set_to_vertex
                .iter()
                .enumerate()
                .all(|(s, &v)| self.vertex_to_set.get(v) == Some(&s))
            && self
                .vertex_to_set
                .iter()
                .enumerate()
                .all(|(v, &s)| self.set_to_vertex.get(s) == Some(&v));
        let elems_ok = self.element_to_edge.len() == self.edge_to_element.len()
            && self
                .element_to_edge
                .iter()
                .enumerate()
                .all(|(x, &e)| self.edge_to_element.get(e) == Some(&x))
            && self
                .edge_to_element
                .iter()
                .enumerate()
                .all(|(e, &x)| self.element_to_edge.get(x) == Some(&e));
        sets_ok && elems_ok
    }

    /// Translates a vertex cover of the image into the chosen set ids.
    pub fn cover_to_sets(&self, cover: &[VertexId]) -> Result<Vec<usize>, ModelError> {
        cover.iter().map(|&v| self.set_for_vertex(v)).collect()
    }

    /// Translates an edge packing of the image into per-element values,
    /// indexed by element id.
    pub fn packing_to_elements<N: Clone>(&self, packing: &[N]) -> Result<Vec<N>, ModelError> {
        if packing.len() != self.edge_to_element.len() {
            return Err(ModelError::UnknownId {
                id: packing.len(),
                limit: self.edge_to_element.len(),
            });
        }
        let mut out = Vec::with_capacity(self.element_to_edge.len());
        for &e in &self.element_to_edge {
            out.push(packing[e].clone());
        }
        Ok(out)
    }
}
