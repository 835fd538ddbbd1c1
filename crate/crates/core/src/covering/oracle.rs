use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use super::{CoverWindow, CoveringMap};
use crate::graph::Multigraph;
use crate::omega::{generator_action, Generator, OmegaWord, TreeAutomorphism};
use crate::{Error, Limits, Result};

/// A possibly infinite graph of bounded degree, explored one star at a time.
///
/// `star(v)` lists the edges at `v` as `(label, other end)`; a loop appears
/// once with `v` as its other end. Answers must be deterministic and
/// symmetric: `v` occurs in `star(w)` under a label as often as `w` occurs in
/// `star(v)` under that label.
pub trait GraphOracle: Sync {
    type Vertex: Clone + Eq + Hash + Debug + Send + Sync;

    fn root(&self) -> Self::Vertex;
    fn star(&self, v: &Self::Vertex) -> Vec<(Option<char>, Self::Vertex)>;
    fn degree_bound(&self) -> usize;
    fn name(&self) -> String;
}

/// The induced subgraph on `B_radius(root)`; vertex 0 is the root.
#[derive(Debug, Clone)]
pub struct Window<V> {
    pub vertices: Vec<V>,
    pub graph: Multigraph,
    pub distance: Vec<usize>,
    pub radius: usize,
    index: HashMap<V, usize>,
}

impl<V: Clone + Eq + Hash> Window<V> {
    pub fn index_of(&self, v: &V) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn cover_window(&self) -> CoverWindow {
        CoverWindow {
            root: 0,
            radius: self.radius,
            distance: self.distance.clone(),
        }
    }

    /// `|B_k(root)|` for `k = 0..=radius`.
    pub fn ball_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.radius + 1];
        for &d in &self.distance {
            sizes[d] += 1;
        }
        for k in 1..sizes.len() {
            sizes[k] += sizes[k - 1];
        }
        sizes
    }
}

pub fn materialize<O: GraphOracle>(
    oracle: &O,
    radius: usize,
    limits: &Limits,
) -> Result<Window<O::Vertex>> {
    let root = oracle.root();
    let mut index = HashMap::from([(root.clone(), 0usize)]);
    let mut vertices = vec![root];
    let mut distance = vec![0usize];
    let mut stars = Vec::new();
    let mut next = 0;
    while next < vertices.len() {
        let star = oracle.star(&vertices[next]);
        if distance[next] < radius {
            for (_, w) in &star {
                if !index.contains_key(w) {
                    limits.check_vertices(vertices.len() + 1, "window")?;
                    index.insert(w.clone(), vertices.len());
                    vertices.push(w.clone());
                    distance.push(distance[next] + 1);
                }
            }
        }
        stars.push(star);
        next += 1;
    }
    let mut graph = Multigraph::new(vertices.len());
    for (x, star) in stars.iter().enumerate() {
        for (label, w) in star {
            match index.get(w) {
                Some(&y) if y == x => {
                    graph.add_edge(x, x, *label);
                }
                // the endpoint that comes first adds the edge
                Some(&y) if y > x => {
                    graph.add_edge(x, y, *label);
                }
                _ => {}
            }
        }
    }
    Ok(Window {
        vertices,
        graph,
        distance,
        radius,
        index,
    })
}

/// Cayley graph of the level-`depth` quotient of `G_ω`, edges `{g, s·g}`.
/// It agrees with the Cayley graph of `G_ω` on balls whose elements stay
/// distinct at that depth.
#[derive(Debug, Clone)]
pub struct CayleyOracle {
    omega: OmegaWord,
    depth: u32,
    generators: Vec<TreeAutomorphism>,
}

impl CayleyOracle {
    pub fn new(omega: OmegaWord, depth: u32) -> Result<Self> {
        let generators = Generator::ALL
            .iter()
            .map(|&g| generator_action(g, &omega, depth))
            .collect::<Result<_>>()?;
        Ok(CayleyOracle {
            omega,
            depth,
            generators,
        })
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// `g(1^n)` as a level-`n` vertex.
    pub fn project(&self, g: &TreeAutomorphism, n: u32) -> usize {
        let rightmost = (1u32 << self.depth) - 1;
        (g.apply(rightmost) >> (self.depth - n)) as usize
    }

    /// The map `g ↦ g(1^n)` from a window onto the labeled `Γ_n`, sending each
    /// `s`-edge at `g` to the `s`-edge at `g(1^n)`.
    pub fn covering(
        &self,
        window: &Window<TreeAutomorphism>,
        target: Multigraph,
        n: u32,
    ) -> Result<CoveringMap> {
        if n == 0 || n > self.depth {
            return Err(Error::InvalidArgument(format!(
                "target level {n} must lie in 1..={}",
                self.depth
            )));
        }
        let vertex_map: Vec<usize> = window.vertices.iter().map(|g| self.project(g, n)).collect();
        let edge_map = window
            .graph
            .edges()
            .iter()
            .map(|e| {
                let label = e.label.expect("Cayley edges are labeled");
                target
                    .edge_with_label(vertex_map[e.u], label)
                    .ok_or_else(|| {
                        Error::InvalidArgument(format!(
                            "target has no {label}-edge at {}",
                            vertex_map[e.u]
                        ))
                    })
            })
            .collect::<Result<_>>()?;
        Ok(
            CoveringMap::new(window.graph.clone(), target, vertex_map, edge_map)
                .with_window(window.cover_window()),
        )
    }
}

impl GraphOracle for CayleyOracle {
    type Vertex = TreeAutomorphism;

    fn root(&self) -> TreeAutomorphism {
        TreeAutomorphism::identity(self.depth).expect("depth validated on construction")
    }

    fn star(&self, g: &TreeAutomorphism) -> Vec<(Option<char>, TreeAutomorphism)> {
        Generator::ALL
            .iter()
            .zip(&self.generators)
            .map(|(s, action)| (Some(s.letter()), action.compose(g)))
            .collect()
    }

    fn degree_bound(&self) -> usize {
        4
    }

    fn name(&self) -> String {
        format!("cayley:{}", self.omega)
    }
}

/// The one-ended model graph on `0, 1, 2, …`.
#[derive(Debug, Clone, Copy, Default)]
pub struct UpsilonRayOracle;

impl GraphOracle for UpsilonRayOracle {
    type Vertex = u64;

    fn root(&self) -> u64 {
        0
    }

    fn star(&self, &v: &u64) -> Vec<(Option<char>, u64)> {
        let loops = if v == 0 { 3 } else { 1 };
        let multiplicity = |i: u64| if i.is_multiple_of(2) { 1 } else { 2 };
        let mut star = vec![(None, v); loops];
        if v > 0 {
            star.extend(std::iter::repeat_n((None, v - 1), multiplicity(v - 1)));
        }
        star.extend(std::iter::repeat_n((None, v + 1), multiplicity(v)));
        star
    }

    fn degree_bound(&self) -> usize {
        4
    }

    fn name(&self) -> String {
        "upsilon-ray".into()
    }
}

/// The rooted binary tree on heap indices `1, 2, 3, …`.
#[derive(Debug, Clone, Copy, Default)]
pub struct BinaryTreeOracle;

impl GraphOracle for BinaryTreeOracle {
    type Vertex = u64;

    fn root(&self) -> u64 {
        1
    }

    fn star(&self, &v: &u64) -> Vec<(Option<char>, u64)> {
        let mut star = Vec::with_capacity(3);
        if v > 1 {
            star.push((None, v / 2));
        }
        star.push((None, 2 * v));
        star.push((None, 2 * v + 1));
        star
    }

    fn degree_bound(&self) -> usize {
        3
    }

    fn name(&self) -> String {
        "binary-tree".into()
    }
}

/// A finite graph seen through the oracle interface.
#[derive(Debug, Clone, Copy)]
pub struct FiniteOracle<'a> {
    pub graph: &'a Multigraph,
    pub root: usize,
}

impl GraphOracle for FiniteOracle<'_> {
    type Vertex = usize;

    fn root(&self) -> usize {
        self.root
    }

    fn star(&self, &v: &usize) -> Vec<(Option<char>, usize)> {
        self.graph
            .incident(v)
            .iter()
            .map(|&e| (self.graph.edge(e).label, self.graph.other_end(e, v)))
            .collect()
    }

    fn degree_bound(&self) -> usize {
        self.graph.max_degree()
    }

    fn name(&self) -> String {
        "finite".into()
    }
}

/// Balls `F_k = B_k(root)` and their boundary ratios.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FolnerReport {
    pub source: String,
    /// `|F_k|` for `k = 0..=k_max`.
    pub sizes: Vec<usize>,
    /// `|B_1(F_k) ∖ F_k|`.
    pub boundary: Vec<usize>,
    pub ratios: Vec<f64>,
    /// `|F_k|^{1/k}` for `k ≥ 1`.
    pub root_growth: Vec<f64>,
    /// Log-log slope of `|F_k|/|F_{k-1}| - 1` against `k` over the upper
    /// half of the range. Exponential growth keeps it near 0, polynomial
    /// growth near -1.
    pub growth_decay_slope: Option<f64>,
    /// The ball sizes stop growing, or `growth_decay_slope < -0.1`.
    pub subexponential_evidence: bool,
}

const SUBEXPONENTIAL_SLOPE: f64 = -0.1;

fn decay_slope(sizes: &[usize]) -> Option<f64> {
    let top = sizes.len() - 1;
    let points: Vec<(f64, f64)> = ((top / 2).max(2)..=top)
        .map(|k| {
            let q = sizes[k] as f64 / sizes[k - 1] as f64;
            ((k as f64).ln(), (q - 1.0).ln())
        })
        .collect();
    if points.len() < 2 || points.iter().any(|p| !p.1.is_finite()) {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}

pub fn folner_balls<O: GraphOracle>(
    oracle: &O,
    k_max: usize,
    limits: &Limits,
) -> Result<FolnerReport> {
    if k_max == 0 {
        return Err(Error::InvalidArgument("k_max must be at least 1".into()));
    }
    let window = materialize(oracle, k_max + 1, limits)?;
    let all = window.ball_sizes();
    let sizes = all[..=k_max].to_vec();
    let boundary: Vec<usize> = (0..=k_max).map(|k| all[k + 1] - all[k]).collect();
    let ratios = boundary
        .iter()
        .zip(&sizes)
        .map(|(&b, &s)| b as f64 / s as f64)
        .collect();
    let root_growth = (1..=k_max)
        .map(|k| (sizes[k] as f64).powf(1.0 / k as f64))
        .collect();
    let saturated = all.windows(2).any(|w| w[0] == w[1]);
    let growth_decay_slope = decay_slope(&all);
    let subexponential_evidence =
        saturated || growth_decay_slope.is_some_and(|s| s < SUBEXPONENTIAL_SLOPE);
    Ok(FolnerReport {
        source: oracle.name(),
        sizes,
        boundary,
        ratios,
        root_growth,
        growth_decay_slope,
        subexponential_evidence,
    })
}
