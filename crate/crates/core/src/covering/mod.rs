//! Graph coverings: verification, weight and path lifting, fiber counts over
//! finite windows of infinite sources, and the residual harness that turns
//! eigenfunctions of a covered graph into approximate eigenfunctions upstairs.

mod hulanicki;
mod oracle;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::graph::{EdgeWeight, Multigraph, WeightedGraph};
use crate::{Error, Result};

pub use hulanicki::{
    hulanicki_residual, spectral_inclusion_report, HulanickiMode, HulanickiReport, InclusionEntry,
    InclusionReport, EXACT_ZERO,
};
pub use oracle::{
    folner_balls, materialize, BinaryTreeOracle, CayleyOracle, FiniteOracle, FolnerReport,
    GraphOracle, UpsilonRayOracle, Window,
};

/// A source that is a finite ball of a larger graph. Stars are complete only
/// at vertices closer to `root` than `radius`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverWindow {
    pub root: usize,
    pub radius: usize,
    pub distance: Vec<usize>,
}

impl CoverWindow {
    pub fn is_interior(&self, v: usize) -> bool {
        self.distance[v] < self.radius
    }
}

/// Vertex and edge maps from `source` onto `target`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoveringMap {
    pub source: Multigraph,
    pub target: Multigraph,
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<usize>,
    /// `None` when `source` is the whole graph.
    pub window: Option<CoverWindow>,
    pub source_weights: Option<Vec<EdgeWeight>>,
    pub target_weights: Option<Vec<EdgeWeight>>,
}

impl CoveringMap {
    pub fn new(
        source: Multigraph,
        target: Multigraph,
        vertex_map: Vec<usize>,
        edge_map: Vec<usize>,
    ) -> Self {
        CoveringMap {
            source,
            target,
            vertex_map,
            edge_map,
            window: None,
            source_weights: None,
            target_weights: None,
        }
    }

    pub fn with_window(mut self, window: CoverWindow) -> Self {
        self.window = Some(window);
        self
    }

    pub fn with_weights(
        mut self,
        source: Option<Vec<EdgeWeight>>,
        target: Option<Vec<EdgeWeight>>,
    ) -> Self {
        self.source_weights = source;
        self.target_weights = target;
        self
    }

    pub fn is_interior(&self, v: usize) -> bool {
        self.window.as_ref().is_none_or(|w| w.is_interior(v))
    }

    /// The vertex distances are measured from.
    pub fn root(&self) -> usize {
        self.window.as_ref().map_or(0, |w| w.root)
    }

    /// Target weights, defaulting to the Markov weighting.
    pub fn weighted_target(&self) -> Result<WeightedGraph> {
        match &self.target_weights {
            Some(w) => WeightedGraph::new(self.target.clone(), w.clone()),
            None => WeightedGraph::markov(&self.target),
        }
    }

    /// Source weights, defaulting to the pullback of the target weights.
    pub fn weighted_source(&self) -> Result<WeightedGraph> {
        match &self.source_weights {
            Some(w) => WeightedGraph::new(self.source.clone(), w.clone()),
            None => {
                let target = self.weighted_target()?;
                WeightedGraph::new(self.source.clone(), lift_weights(self, &target.weights)?)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoveringViolation {
    MapSize {
        what: String,
        expected: usize,
        found: usize,
    },
    OutOfRange {
        what: String,
        index: usize,
    },
    VertexNotCovered {
        vertex: usize,
    },
    EdgeNotCovered {
        edge: usize,
    },
    /// The endpoints of `edge` do not map onto the endpoints of its image.
    EndpointMismatch {
        edge: usize,
    },
    /// The edge map restricted to the star of `vertex` is not a bijection.
    NotLocallyBijective {
        vertex: usize,
    },
    WeightMismatch {
        vertex: usize,
        edge: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveringVerdict {
    /// Window radius the certificate is valid for, if the source is a window.
    pub window_radius: Option<usize>,
    pub checked_vertices: usize,
    pub violation: Option<CoveringViolation>,
}

impl CoveringVerdict {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

fn first_violation(c: &CoveringMap) -> Result<Option<CoveringViolation>> {
    let (src, tgt) = (&c.source, &c.target);
    for (what, expected, found) in [
        ("vertex map", src.vertex_count(), c.vertex_map.len()),
        ("edge map", src.edge_count(), c.edge_map.len()),
    ] {
        if expected != found {
            return Ok(Some(CoveringViolation::MapSize {
                what: what.into(),
                expected,
                found,
            }));
        }
    }
    if let Some(w) = &c.window {
        if w.distance.len() != src.vertex_count() {
            return Ok(Some(CoveringViolation::MapSize {
                what: "window distances".into(),
                expected: src.vertex_count(),
                found: w.distance.len(),
            }));
        }
    }
    if let Some(v) = c.vertex_map.iter().position(|&y| y >= tgt.vertex_count()) {
        return Ok(Some(CoveringViolation::OutOfRange {
            what: "vertex map".into(),
            index: v,
        }));
    }
    if let Some(e) = c.edge_map.iter().position(|&f| f >= tgt.edge_count()) {
        return Ok(Some(CoveringViolation::OutOfRange {
            what: "edge map".into(),
            index: e,
        }));
    }

    for (e, edge) in src.edges().iter().enumerate() {
        let image = tgt.edge(c.edge_map[e]);
        let (x, y) = (c.vertex_map[edge.u], c.vertex_map[edge.v]);
        if !((x, y) == (image.u, image.v) || (x, y) == (image.v, image.u)) {
            return Ok(Some(CoveringViolation::EndpointMismatch { edge: e }));
        }
    }

    let target_weighted = match &c.target_weights {
        Some(w) => Some(WeightedGraph::new(tgt.clone(), w.clone())?),
        None => None,
    };
    let source_weighted = match &c.source_weights {
        Some(w) => Some(WeightedGraph::new(src.clone(), w.clone())?),
        None => None,
    };

    let mut vertex_hit = vec![false; tgt.vertex_count()];
    let mut edge_hit = vec![false; tgt.edge_count()];
    let mut seen = vec![usize::MAX; tgt.edge_count()];
    for v in (0..src.vertex_count()).filter(|&v| c.is_interior(v)) {
        let image = c.vertex_map[v];
        vertex_hit[image] = true;
        if src.degree(v) != tgt.degree(image) {
            return Ok(Some(CoveringViolation::NotLocallyBijective { vertex: v }));
        }
        for &e in src.incident(v) {
            let f = c.edge_map[e];
            if seen[f] == v || !tgt.incident(image).contains(&f) {
                return Ok(Some(CoveringViolation::NotLocallyBijective { vertex: v }));
            }
            seen[f] = v;
            edge_hit[f] = true;
            if let (Some(sw), Some(tw)) = (&source_weighted, &target_weighted) {
                if sw.weight_at(e, v) != tw.weight_at(f, image) {
                    return Ok(Some(CoveringViolation::WeightMismatch {
                        vertex: v,
                        edge: e,
                    }));
                }
            }
        }
    }
    if let Some(y) = vertex_hit.iter().position(|&hit| !hit) {
        if let Some(w) = &c.window {
            return Err(Error::WindowTooSmall(format!(
                "target vertex {y} has no preimage in the interior of the radius-{} window",
                w.radius
            )));
        }
        return Ok(Some(CoveringViolation::VertexNotCovered { vertex: y }));
    }
    if let Some(f) = edge_hit.iter().position(|&hit| !hit) {
        if let Some(w) = &c.window {
            return Err(Error::WindowTooSmall(format!(
                "target edge {f} has no preimage in the interior of the radius-{} window",
                w.radius
            )));
        }
        return Ok(Some(CoveringViolation::EdgeNotCovered { edge: f }));
    }
    Ok(None)
}

/// Checks surjectivity, endpoint compatibility, bijectivity of the edge map
/// on every star, and weight compatibility when both sides carry weights.
/// Window sources are checked on their interior; surjectivity there that
/// cannot be established is reported as `WindowTooSmall`.
pub fn verify_covering(c: &CoveringMap) -> Result<CoveringVerdict> {
    let violation = first_violation(c)?;
    Ok(CoveringVerdict {
        window_radius: c.window.as_ref().map(|w| w.radius),
        checked_vertices: (0..c.source.vertex_count())
            .filter(|&v| c.is_interior(v))
            .count(),
        violation,
    })
}

/// Pulls target weights back along the covering: the weight of `ẽ` at `ṽ`
/// is the weight of `φ(ẽ)` at `φ(ṽ)`.
pub fn lift_weights(c: &CoveringMap, target_weights: &[EdgeWeight]) -> Result<Vec<EdgeWeight>> {
    let target = WeightedGraph::new(c.target.clone(), target_weights.to_vec())?;
    Ok(c.source
        .edges()
        .iter()
        .enumerate()
        .map(|(e, edge)| {
            let f = c.edge_map[e];
            EdgeWeight {
                at_u: target.weight_at(f, c.vertex_map[edge.u]),
                at_v: target.weight_at(f, c.vertex_map[edge.v]),
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftedPath {
    /// `edges.len() + 1` vertices.
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

/// Vertices visited by an edge path starting at `origin`.
pub fn path_vertices(g: &Multigraph, origin: usize, edges: &[usize]) -> Result<Vec<usize>> {
    let mut vertices = vec![origin];
    let mut current = origin;
    for (i, &e) in edges.iter().enumerate() {
        if e >= g.edge_count() {
            return Err(Error::InvalidArgument(format!(
                "path step {i}: no edge {e}"
            )));
        }
        let edge = g.edge(e);
        if edge.u != current && edge.v != current {
            return Err(Error::InvalidArgument(format!(
                "path step {i}: edge {e} does not touch vertex {current}"
            )));
        }
        current = g.other_end(e, current);
        vertices.push(current);
    }
    Ok(vertices)
}

/// Edge path in a labeled graph following `labels` from `origin`.
pub fn path_from_labels(g: &Multigraph, origin: usize, labels: &str) -> Result<Vec<usize>> {
    let mut current = origin;
    labels
        .chars()
        .map(|label| {
            let e = g.edge_with_label(current, label).ok_or_else(|| {
                Error::InvalidArgument(format!("no edge labeled {label} at vertex {current}"))
            })?;
            current = g.other_end(e, current);
            Ok(e)
        })
        .collect()
}

/// The unique lift of the target path `edges` (starting at `origin`) that
/// begins at `start`.
pub fn lift_path(
    c: &CoveringMap,
    origin: usize,
    edges: &[usize],
    start: usize,
) -> Result<LiftedPath> {
    if start >= c.source.vertex_count() || c.vertex_map[start] != origin {
        return Err(Error::BadStart(start));
    }
    let downstairs = path_vertices(&c.target, origin, edges)?;
    let mut vertices = vec![start];
    let mut lifted = Vec::with_capacity(edges.len());
    let mut current = start;
    for (i, &f) in edges.iter().enumerate() {
        if !c.is_interior(current) {
            return Err(Error::WindowTooSmall(format!(
                "lift reaches the window boundary at step {i}"
            )));
        }
        let e = c
            .source
            .incident(current)
            .iter()
            .copied()
            .find(|&e| c.edge_map[e] == f)
            .ok_or_else(|| {
                Error::InvalidArgument(format!("no edge over {f} at source vertex {current}"))
            })?;
        current = c.source.other_end(e, current);
        debug_assert_eq!(c.vertex_map[current], downstairs[i + 1]);
        lifted.push(e);
        vertices.push(current);
    }
    Ok(LiftedPath {
        vertices,
        edges: lifted,
    })
}

fn source_distances(c: &CoveringMap, v: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; c.source.vertex_count()];
    let mut queue = VecDeque::from([v]);
    dist[v] = 0;
    while let Some(x) = queue.pop_front() {
        for &e in c.source.incident(x) {
            let y = c.source.other_end(e, x);
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    dist
}

/// Largest `k` for which `B_k(v)` lies inside the source (unbounded for
/// complete sources).
pub(crate) fn ball_reach(c: &CoveringMap, v: usize) -> usize {
    match &c.window {
        Some(w) => w.radius.saturating_sub(w.distance[v]),
        None => usize::MAX,
    }
}

/// `α_k = |{x ∈ B_k(v) : φ(x) = φ(v)}|` for `k = 0..=k_max`.
pub fn fiber_counts(c: &CoveringMap, v: usize, k_max: usize) -> Result<Vec<usize>> {
    if v >= c.source.vertex_count() {
        return Err(Error::InvalidArgument(format!("no source vertex {v}")));
    }
    if k_max > ball_reach(c, v) {
        return Err(Error::WindowTooSmall(format!(
            "B_{k_max}({v}) leaves the window"
        )));
    }
    let dist = source_distances(c, v);
    let image = c.vertex_map[v];
    let mut counts = vec![0usize; k_max + 1];
    for (x, &d) in dist.iter().enumerate() {
        if d <= k_max && c.vertex_map[x] == image {
            counts[d] += 1;
        }
    }
    for k in 1..counts.len() {
        counts[k] += counts[k - 1];
    }
    Ok(counts)
}

/// `α_k`, with `α_k = 0` for negative `k`.
pub fn fiber_count(c: &CoveringMap, v: usize, k: i64) -> Result<usize> {
    if k < 0 {
        return Ok(0);
    }
    Ok(*fiber_counts(c, v, k as usize)?
        .last()
        .expect("k + 1 entries"))
}
