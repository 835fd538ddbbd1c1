//! Finite multigraphs with loops, per-endpoint edge weights, and the
//! operators built from them.
//!
//! A loop at `v` is one element of `E_v`, contributes 1 to `d(v)` and carries
//! a single weight.

mod operator;

use std::collections::VecDeque;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use operator::{
    cayley_laplacian, laplace_type_operator, markov_operator, shift_square_operator,
    shift_square_transform, LinearOperator,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub label: Option<char>,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Multigraph {
    vertex_count: usize,
    edges: Vec<Edge>,
    #[serde(skip)]
    incidence: Vec<Vec<usize>>,
}

impl Multigraph {
    pub fn new(vertex_count: usize) -> Self {
        Multigraph {
            vertex_count,
            edges: Vec::new(),
            incidence: vec![Vec::new(); vertex_count],
        }
    }

    pub fn from_edges(vertex_count: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let mut g = Multigraph::new(vertex_count);
        for e in edges {
            g.try_add_edge(e.u, e.v, e.label)?;
        }
        Ok(g)
    }

    pub fn try_add_edge(&mut self, u: usize, v: usize, label: Option<char>) -> Result<usize> {
        if u >= self.vertex_count || v >= self.vertex_count {
            return Err(Error::InvalidArgument(format!(
                "edge {u}-{v} out of range for {} vertices",
                self.vertex_count
            )));
        }
        let id = self.edges.len();
        self.edges.push(Edge { u, v, label });
        self.incidence[u].push(id);
        if u != v {
            self.incidence[v].push(id);
        }
        Ok(id)
    }

    /// Panics on out-of-range endpoints.
    pub fn add_edge(&mut self, u: usize, v: usize, label: Option<char>) -> usize {
        self.try_add_edge(u, v, label)
            .expect("edge endpoints in range")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    /// `E_v` in insertion order.
    pub fn incident(&self, v: usize) -> &[usize] {
        &self.incidence[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.incidence[v].len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.vertex_count)
            .map(|v| self.degree(v))
            .max()
            .unwrap_or(0)
    }

    /// `r_v(e)`: the endpoint of `e` other than `v`, or `v` for a loop.
    pub fn other_end(&self, e: usize, v: usize) -> usize {
        let edge = &self.edges[e];
        if edge.u == v {
            edge.v
        } else {
            debug_assert_eq!(edge.v, v);
            edge.u
        }
    }

    pub fn loop_count(&self, v: usize) -> usize {
        self.incidence[v]
            .iter()
            .filter(|&&e| self.edges[e].is_loop())
            .count()
    }

    /// The unique edge at `v` with the given label, if any.
    pub fn edge_with_label(&self, v: usize, label: char) -> Option<usize> {
        self.incidence[v]
            .iter()
            .copied()
            .find(|&e| self.edges[e].label == Some(label))
    }

    /// Breadth-first distances from `source`; `usize::MAX` marks unreachable
    /// vertices.
    pub fn distances_from(&self, source: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.vertex_count];
        let mut queue = VecDeque::new();
        dist[source] = 0;
        queue.push_back(source);
        while let Some(x) = queue.pop_front() {
            for &e in &self.incidence[x] {
                let y = self.other_end(e, x);
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count == 0 || self.distances_from(0).iter().all(|&d| d != usize::MAX)
    }

    /// Rebuilds the incidence lists (after deserialization).
    pub fn reindex(&mut self) {
        self.incidence = vec![Vec::new(); self.vertex_count];
        for (id, e) in self.edges.iter().enumerate() {
            self.incidence[e.u].push(id);
            if e.u != e.v {
                self.incidence[e.v].push(id);
            }
        }
    }

    /// Same graph without labels.
    pub fn unlabeled(&self) -> Multigraph {
        let mut g = self.clone();
        for e in &mut g.edges {
            e.label = None;
        }
        g
    }
}

/// Weights `α_{u,e}` and `α_{v,e}` of an edge `e = {u, v}`. For a loop
/// both fields hold the single weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeWeight {
    pub at_u: Complex64,
    pub at_v: Complex64,
}

impl EdgeWeight {
    pub fn symmetric(w: f64) -> Self {
        EdgeWeight {
            at_u: Complex64::new(w, 0.0),
            at_v: Complex64::new(w, 0.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    pub graph: Multigraph,
    pub weights: Vec<EdgeWeight>,
}

impl WeightedGraph {
    pub fn new(graph: Multigraph, weights: Vec<EdgeWeight>) -> Result<Self> {
        if weights.len() != graph.edge_count() {
            return Err(Error::DimensionMismatch {
                expected: graph.edge_count(),
                found: weights.len(),
            });
        }
        for (e, w) in graph.edges().iter().zip(&weights) {
            if e.is_loop() && w.at_u != w.at_v {
                return Err(Error::InvalidArgument(format!(
                    "loop at {} carries two different weights",
                    e.u
                )));
            }
        }
        Ok(WeightedGraph { graph, weights })
    }

    /// `α_{v,e} = 1/d(v)`: the weighting whose operator is the Markov
    /// operator.
    pub fn markov(graph: &Multigraph) -> Result<Self> {
        for v in 0..graph.vertex_count() {
            if graph.degree(v) == 0 {
                return Err(Error::IsolatedVertex(v));
            }
        }
        let weights = graph
            .edges()
            .iter()
            .map(|e| EdgeWeight {
                at_u: Complex64::new(1.0 / graph.degree(e.u) as f64, 0.0),
                at_v: Complex64::new(1.0 / graph.degree(e.v) as f64, 0.0),
            })
            .collect();
        Ok(WeightedGraph {
            graph: graph.clone(),
            weights,
        })
    }

    pub fn constant(graph: &Multigraph, w: Complex64) -> Self {
        WeightedGraph {
            graph: graph.clone(),
            weights: vec![EdgeWeight { at_u: w, at_v: w }; graph.edge_count()],
        }
    }

    /// `α_{v,e}`.
    pub fn weight_at(&self, e: usize, v: usize) -> Complex64 {
        let edge = self.graph.edge(e);
        if edge.u == v {
            self.weights[e].at_u
        } else {
            self.weights[e].at_v
        }
    }

    /// `α_{v,e} = conj(α_{w,e})` on every edge (loops carry real weights).
    pub fn is_self_adjoint(&self) -> bool {
        self.weights.iter().all(|w| w.at_u == w.at_v.conj())
    }

    pub fn max_abs_weight(&self) -> f64 {
        self.weights
            .iter()
            .flat_map(|w| [w.at_u.norm(), w.at_v.norm()])
            .fold(0.0, f64::max)
    }

    /// `(max degree, max |α|)`; both finite for every finite graph.
    pub fn bounds(&self) -> (usize, f64) {
        (self.graph.max_degree(), self.max_abs_weight())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn upsilon_one() -> Multigraph {
        let mut g = Multigraph::new(2);
        g.add_edge(0, 1, None);
        for v in 0..2 {
            for _ in 0..3 {
                g.add_edge(v, v, None);
            }
        }
        g
    }

    #[test]
    fn loops_count_once() {
        let g = upsilon_one();
        assert_eq!(g.degree(0), 4);
        assert_eq!(g.loop_count(1), 3);
        assert_eq!(g.other_end(0, 1), 0);
        assert_eq!(g.other_end(1, 0), 0);
        assert!(g.is_connected());
    }

    #[test]
    fn markov_weights_and_isolated_vertices() {
        let w = WeightedGraph::markov(&upsilon_one()).unwrap();
        assert!(w.is_self_adjoint());
        assert_eq!(w.bounds(), (4, 0.25));
        let mut g = upsilon_one();
        g = Multigraph::from_edges(3, g.edges().to_vec()).unwrap();
        assert_eq!(WeightedGraph::markov(&g), Err(Error::IsolatedVertex(2)));
    }

    #[test]
    fn self_adjointness_needs_conjugate_pairs() {
        let mut g = Multigraph::new(2);
        g.add_edge(0, 1, None);
        let z = Complex64::new(0.3, 0.4);
        let ok = WeightedGraph::new(
            g.clone(),
            vec![EdgeWeight {
                at_u: z,
                at_v: z.conj(),
            }],
        )
        .unwrap();
        assert!(ok.is_self_adjoint());
        let bad = WeightedGraph::new(g, vec![EdgeWeight { at_u: z, at_v: z }]).unwrap();
        assert!(!bad.is_self_adjoint());
    }
}
