//! Schreier graphs `Γ_n` of the level actions, the path-with-loops models
//! `Υ`, and the coverings between them.

use serde::{Deserialize, Serialize};

use crate::covering::{materialize, CayleyOracle, CoverWindow, CoveringMap};
use crate::graph::Multigraph;
use crate::omega::{apply_letter, stable_depth, Generator, OmegaWord, MAX_TREE_DEPTH};
use crate::{Error, Limits, Result};

/// The Schreier graph of `G_ω` acting on level `n`, with generator labels.
///
/// Vertex `x` is the level-`n` word whose letters are the bits of `x`, most
/// significant first. Every vertex carries exactly one edge per label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchreierGraph {
    omega: OmegaWord,
    level: u32,
    graph: Multigraph,
}

impl SchreierGraph {
    pub fn omega(&self) -> &OmegaWord {
        &self.omega
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn into_graph(self) -> Multigraph {
        self.graph
    }

    pub fn unlabeled(&self) -> Multigraph {
        self.graph.unlabeled()
    }

    pub fn vertex_name(&self, v: usize) -> String {
        format!("{:0width$b}", v, width = self.level as usize)
    }

    /// Index of the vertex spelled by a binary word.
    pub fn vertex_by_name(&self, name: &str) -> Option<usize> {
        if name.len() != self.level as usize {
            return None;
        }
        usize::from_str_radix(name, 2).ok()
    }

    pub fn edge_at(&self, v: usize, g: Generator) -> usize {
        self.graph
            .edge_with_label(v, g.letter())
            .expect("every vertex has one edge per generator")
    }

    /// `g·v`.
    pub fn neighbor(&self, v: usize, g: Generator) -> usize {
        self.graph.other_end(self.edge_at(v, g), v)
    }
}

pub fn schreier_graph(omega: &OmegaWord, n: u32) -> Result<SchreierGraph> {
    schreier_graph_with(omega, n, &Limits::default())
}

pub fn schreier_graph_with(omega: &OmegaWord, n: u32, limits: &Limits) -> Result<SchreierGraph> {
    if n == 0 {
        return Err(Error::InvalidArgument("level must be at least 1".into()));
    }
    if n > MAX_TREE_DEPTH || n > limits.max_depth {
        return Err(Error::ResourceLimit(format!(
            "level {n} exceeds depth cap {}",
            limits.max_depth.min(MAX_TREE_DEPTH)
        )));
    }
    let size = 1usize << n;
    limits.check_vertices(size, "Schreier graph")?;
    let mut graph = Multigraph::new(size);
    for g in Generator::ALL {
        let mask = g.level_mask(omega, n);
        for x in 0..size as u32 {
            let y = apply_letter(g, mask, n, x);
            if y >= x {
                graph.add_edge(x as usize, y as usize, Some(g.letter()));
            }
        }
    }
    Ok(SchreierGraph {
        omega: omega.clone(),
        level: n,
        graph,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum UpsilonShape {
    /// `Υ_n` on `0..2^n`.
    Finite { n: u32 },
    /// Vertices `0..=length` of the one-ended graph; `0` carries three loops.
    Ray { length: usize },
    /// Vertices `start..=start + length` of the two-ended graph.
    Line { start: i64, length: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpsilonSpec {
    pub shape: UpsilonShape,
    /// Drop the double edge at `2^{n-1} - 1` in the finite model. This
    /// variant disconnects the graph and does not match any `Γ_n`, `n ≥ 2`.
    pub middle_exception: bool,
}

impl UpsilonSpec {
    pub fn finite(n: u32) -> Self {
        UpsilonSpec {
            shape: UpsilonShape::Finite { n },
            middle_exception: false,
        }
    }

    pub fn ray(length: usize) -> Self {
        UpsilonSpec {
            shape: UpsilonShape::Ray { length },
            middle_exception: false,
        }
    }

    pub fn line(start: i64, length: usize) -> Self {
        UpsilonSpec {
            shape: UpsilonShape::Line { start, length },
            middle_exception: false,
        }
    }

    pub fn with_middle_exception(mut self) -> Self {
        self.middle_exception = true;
        self
    }

    pub fn vertex_count(&self) -> usize {
        match self.shape {
            UpsilonShape::Finite { n } => 1usize << n,
            UpsilonShape::Ray { length } | UpsilonShape::Line { length, .. } => length + 1,
        }
    }
}

/// Materializes a model graph. Vertex `i` is the `i`-th point of the path
/// (offset by `start` for lines). Segments of the infinite models keep the
/// degree deficit at their cut ends.
pub fn upsilon_graph(spec: &UpsilonSpec) -> Multigraph {
    let count = spec.vertex_count();
    let (offset, three_loops): (i64, Vec<usize>) = match spec.shape {
        UpsilonShape::Finite { .. } => (0, vec![0, count - 1]),
        UpsilonShape::Ray { .. } => (0, vec![0]),
        UpsilonShape::Line { start, .. } => (start, vec![]),
    };
    let skipped = match spec.shape {
        UpsilonShape::Finite { n } if spec.middle_exception && n >= 1 => {
            Some((1usize << (n - 1)) - 1)
        }
        _ => None,
    };
    let mut g = Multigraph::new(count);
    for i in 0..count {
        let loops = if three_loops.contains(&i) { 3 } else { 1 };
        for _ in 0..loops {
            g.add_edge(i, i, None);
        }
        if i + 1 < count {
            let label = offset + i as i64;
            let multiplicity = if label.rem_euclid(2) == 0 {
                1
            } else if Some(i) == skipped {
                0
            } else {
                2
            };
            for _ in 0..multiplicity {
                g.add_edge(i, i + 1, None);
            }
        }
    }
    g
}

/// Loop count at a path position and the number of edges to the next one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathSite {
    pub loops: usize,
    pub link: Option<usize>,
}

/// A path-with-loops multigraph read from one end.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalPath {
    /// Vertices in path order, starting at the end with the smaller index.
    pub order: Vec<usize>,
    pub sites: Vec<PathSite>,
}

impl CanonicalPath {
    pub fn reversed(&self) -> CanonicalPath {
        let order: Vec<usize> = self.order.iter().rev().copied().collect();
        let n = self.sites.len();
        let sites = (0..n)
            .map(|i| PathSite {
                loops: self.sites[n - 1 - i].loops,
                link: (i + 1 < n).then(|| self.sites[n - 2 - i].link.unwrap_or(0)),
            })
            .collect();
        CanonicalPath { order, sites }
    }
}

fn sites_in_order(g: &Multigraph, order: &[usize]) -> Vec<PathSite> {
    let mut position = vec![usize::MAX; g.vertex_count()];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let mut sites: Vec<PathSite> = order
        .iter()
        .enumerate()
        .map(|(i, &v)| PathSite {
            loops: g.loop_count(v),
            link: (i + 1 < order.len()).then_some(0),
        })
        .collect();
    for e in g.edges() {
        let (p, q) = (position[e.u], position[e.v]);
        if p.abs_diff(q) == 1 {
            if let Some(link) = sites[p.min(q)].link.as_mut() {
                *link += 1;
            }
        }
    }
    sites
}

/// Canonical form of a path with loops attached.
pub fn canonical_path(g: &Multigraph) -> Result<CanonicalPath> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(Error::NotAPath("empty graph".into()));
    }
    let mut neighbors: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in g.edges().iter().filter(|e| !e.is_loop()) {
        for (x, y) in [(e.u, e.v), (e.v, e.u)] {
            if !neighbors[x].contains(&y) {
                neighbors[x].push(y);
            }
        }
    }
    if let Some(v) = (0..n).find(|&v| neighbors[v].len() > 2) {
        return Err(Error::NotAPath(format!(
            "vertex {v} has {} distinct neighbors",
            neighbors[v].len()
        )));
    }
    let order = if n == 1 {
        vec![0]
    } else {
        let start = (0..n)
            .find(|&v| neighbors[v].len() == 1)
            .ok_or_else(|| Error::NotAPath("no endpoint".into()))?;
        let mut order = vec![start];
        let mut previous = usize::MAX;
        let mut current = start;
        while let Some(&next) = neighbors[current].iter().find(|&&w| w != previous) {
            order.push(next);
            previous = current;
            current = next;
        }
        if order.len() != n {
            return Err(Error::NotAPath(format!(
                "path through {start} reaches {} of {n} vertices",
                order.len()
            )));
        }
        order
    };
    let sites = sites_in_order(g, &order);
    Ok(CanonicalPath { order, sites })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum IsomorphismOutcome {
    /// `mapping[v]` is the model vertex matched with `v`.
    Isomorphic { mapping: Vec<usize> },
    /// First disagreement along the canonical order.
    Mismatch {
        position: usize,
        expected: PathSite,
        found: PathSite,
    },
}

impl IsomorphismOutcome {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsomorphismOutcome::Isomorphic { .. })
    }
}

/// Matches a path-with-loops graph against a model whose vertex `i` is the
/// `i`-th point of its path. Both orientations are tried; a failure reports
/// the first mismatch of the canonical orientation.
pub fn check_path_isomorphic(g: &Multigraph, model: &Multigraph) -> Result<IsomorphismOutcome> {
    if g.vertex_count() != model.vertex_count() {
        return Err(Error::DimensionMismatch {
            expected: model.vertex_count(),
            found: g.vertex_count(),
        });
    }
    let natural: Vec<usize> = (0..model.vertex_count()).collect();
    let expected = sites_in_order(model, &natural);
    let forward = canonical_path(g)?;
    let first_mismatch = |path: &CanonicalPath| {
        path.sites
            .iter()
            .zip(&expected)
            .position(|(found, want)| found != want)
    };
    let forward_mismatch = first_mismatch(&forward);
    let matched = match forward_mismatch {
        None => Some(forward.clone()),
        Some(_) => {
            let backward = forward.reversed();
            first_mismatch(&backward).is_none().then_some(backward)
        }
    };
    if let Some(path) = matched {
        let mut mapping = vec![0; g.vertex_count()];
        for (i, &v) in path.order.iter().enumerate() {
            mapping[v] = i;
        }
        return Ok(IsomorphismOutcome::Isomorphic { mapping });
    }
    let position = forward_mismatch.expect("forward orientation mismatched");
    Ok(IsomorphismOutcome::Mismatch {
        position,
        expected: expected[position],
        found: forward.sites[position],
    })
}

pub fn check_isomorphic(g: &SchreierGraph, spec: &UpsilonSpec) -> Result<IsomorphismOutcome> {
    check_path_isomorphic(g.graph(), &upsilon_graph(spec))
}

/// `Γ_m → Γ_n` sending a vertex to its length-`n` prefix and each labeled
/// edge to the edge with the same label at the image.
pub fn level_projection_covering(omega: &OmegaWord, m: u32, n: u32) -> Result<CoveringMap> {
    if n == 0 || m <= n {
        return Err(Error::InvalidArgument(format!(
            "projection needs m > n >= 1, got m = {m}, n = {n}"
        )));
    }
    let source = schreier_graph(omega, m)?;
    let target = schreier_graph(omega, n)?;
    let shift = m - n;
    let vertex_map: Vec<usize> = (0..source.graph.vertex_count())
        .map(|x| x >> shift)
        .collect();
    let edge_map = source
        .graph
        .edges()
        .iter()
        .map(|e| {
            let label = e.label.expect("Schreier edges are labeled");
            target
                .graph
                .edge_with_label(vertex_map[e.u], label)
                .expect("every vertex has one edge per generator")
        })
        .collect();
    Ok(CoveringMap::new(
        source.graph,
        target.graph,
        vertex_map,
        edge_map,
    ))
}

/// A ball around the identity in the Cayley graph of `G_ω`, with its map onto
/// `Γ_n`.
#[derive(Debug, Clone)]
pub struct CayleyBall {
    /// Tree depth at which group elements were told apart.
    pub depth: u32,
    pub radius: usize,
    /// Labeled induced subgraph on the ball; vertex 0 is the identity.
    pub graph: Multigraph,
    pub distance: Vec<usize>,
    /// `g ↦ g(1^n)`, locally bijective at every vertex of distance
    /// `< radius`.
    pub covering: CoveringMap,
}

/// Radius-`radius` ball of the Cayley graph, elements separated at the
/// depth where the ball census stabilizes (and at least `n`).
pub fn cayley_ball(
    omega: &OmegaWord,
    radius: usize,
    n: u32,
    limits: &Limits,
) -> Result<CayleyBall> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "target level must be at least 1".into(),
        ));
    }
    let (stable, _) = stable_depth(omega, radius, limits)?;
    let depth = stable.max(n);
    let oracle = CayleyOracle::new(omega.clone(), depth)?;
    let window = materialize(&oracle, radius, limits)?;
    let target = schreier_graph_with(omega, n, limits)?;
    let covering = oracle.covering(&window, target.into_graph(), n)?;
    Ok(CayleyBall {
        depth,
        radius,
        graph: window.graph.clone(),
        distance: window.distance.clone(),
        covering,
    })
}

impl CayleyBall {
    pub fn window(&self) -> &CoverWindow {
        self.covering
            .window
            .as_ref()
            .expect("Cayley balls carry a window")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::verify_covering;
    use crate::omega::ball_sizes;

    fn om(s: &str) -> OmegaWord {
        OmegaWord::parse(s).unwrap()
    }

    fn census(g: &Multigraph) -> (usize, usize) {
        let loops = g.edges().iter().filter(|e| e.is_loop()).count();
        (loops, g.edge_count() - loops)
    }

    #[test]
    fn level_one() {
        let g = schreier_graph(&om(":012"), 1).unwrap();
        assert_eq!(g.graph().vertex_count(), 2);
        assert_eq!(census(g.graph()), (6, 1));
        for v in 0..2 {
            assert_eq!(g.graph().loop_count(v), 3);
            assert_eq!(g.neighbor(v, Generator::A), 1 - v);
        }
    }

    #[test]
    fn level_two_is_the_expected_path() {
        let g = schreier_graph(&om("0:12"), 2).unwrap();
        let name = |s: &str| g.vertex_by_name(s).unwrap();
        let between = |x: usize, y: usize| {
            g.graph()
                .edges()
                .iter()
                .filter(|e| (e.u, e.v) == (x.min(y), x.max(y)))
                .map(|e| e.label.unwrap())
                .collect::<String>()
        };
        assert_eq!(between(name("10"), name("00")), "a");
        assert_eq!(between(name("00"), name("01")), "bc");
        assert_eq!(between(name("01"), name("11")), "a");
        assert_eq!(g.graph().loop_count(name("00")), 1);
        assert_eq!(g.graph().loop_count(name("10")), 3);
    }

    #[test]
    fn level_three_census() {
        // 32 edge-ends: 12 loops and 10 proper edges
        let g = schreier_graph(&om(":012"), 3).unwrap();
        assert_eq!(g.graph().vertex_count(), 8);
        assert_eq!(census(g.graph()), (12, 10));
        assert_eq!(g.graph().edge_count(), 22);
    }

    #[test]
    fn every_vertex_has_one_edge_per_label() {
        for s in [":012", ":01", "0:12", ":2", "0001:02"] {
            for n in 1..=12 {
                let g = schreier_graph(&om(s), n).unwrap();
                for v in 0..g.graph().vertex_count() {
                    assert_eq!(g.graph().degree(v), 4);
                    for gen in Generator::ALL {
                        let e = g.edge_at(v, gen);
                        assert_eq!(g.graph().incident(v).iter().filter(|&&f| f == e).count(), 1);
                    }
                }
                assert!(g.graph().is_connected(), "{s} level {n}");
            }
        }
    }

    #[test]
    fn resource_limit() {
        let limits = Limits {
            max_vertices: 100,
            ..Limits::default()
        };
        assert!(matches!(
            schreier_graph_with(&om(":012"), 7, &limits),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn upsilon_models() {
        let one = upsilon_graph(&UpsilonSpec::finite(1));
        assert_eq!(census(&one), (6, 1));
        let two = upsilon_graph(&UpsilonSpec::finite(2));
        assert_eq!(
            two.edges().iter().filter(|e| (e.u, e.v) == (1, 2)).count(),
            2
        );
        let ray = upsilon_graph(&UpsilonSpec::ray(4));
        assert_eq!(ray.vertex_count(), 5);
        let loops: Vec<usize> = (0..5).map(|v| ray.loop_count(v)).collect();
        assert_eq!(loops, vec![3, 1, 1, 1, 1]);
        let path = canonical_path(&ray).unwrap();
        let links: Vec<_> = path.sites.iter().map(|s| s.link).collect();
        assert_eq!(links, vec![Some(1), Some(2), Some(1), Some(2), None]);
        let line = upsilon_graph(&UpsilonSpec::line(-3, 3));
        let links: Vec<_> = canonical_path(&line)
            .unwrap()
            .sites
            .iter()
            .map(|s| s.link)
            .collect();
        assert_eq!(links, vec![Some(2), Some(1), Some(2), None]);
        assert!(!upsilon_graph(&UpsilonSpec::finite(2).with_middle_exception()).is_connected());
    }

    #[test]
    fn level_two_maps_onto_the_model_in_path_order() {
        let g = schreier_graph(&om("0:12"), 2).unwrap();
        let outcome = check_isomorphic(&g, &UpsilonSpec::finite(2)).unwrap();
        let IsomorphismOutcome::Isomorphic { mapping } = outcome else {
            panic!("expected isomorphism, got {outcome:?}");
        };
        let order: Vec<usize> = ["10", "00", "01", "11"]
            .iter()
            .map(|s| mapping[g.vertex_by_name(s).unwrap()])
            .collect();
        assert_eq!(order, vec![0, 1, 2, 3]);
    }

    #[test]
    fn schreier_graphs_match_the_model() {
        for s in [":012", ":01", ":02", ":12", "0:12"] {
            for n in 1..=10 {
                let g = schreier_graph(&om(s), n).unwrap();
                let outcome = check_isomorphic(&g, &UpsilonSpec::finite(n)).unwrap();
                assert!(outcome.is_isomorphic(), "{s} level {n}: {outcome:?}");
            }
        }
    }

    #[test]
    fn mismatches_are_located() {
        let g = schreier_graph(&om(":012"), 2).unwrap();
        let outcome =
            check_isomorphic(&g, &UpsilonSpec::finite(2).with_middle_exception()).unwrap();
        assert!(
            matches!(outcome, IsomorphismOutcome::Mismatch { position: 1, .. }),
            "{outcome:?}"
        );

        let model = upsilon_graph(&UpsilonSpec::finite(2));
        let dropped = model
            .edges()
            .iter()
            .position(|e| e.is_loop() && e.u == 1)
            .unwrap();
        let damaged = Multigraph::from_edges(
            4,
            model
                .edges()
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != dropped)
                .map(|(_, e)| *e),
        )
        .unwrap();
        let outcome = check_path_isomorphic(&damaged, &model).unwrap();
        assert_eq!(
            outcome,
            IsomorphismOutcome::Mismatch {
                position: 1,
                expected: PathSite {
                    loops: 1,
                    link: Some(2)
                },
                found: PathSite {
                    loops: 0,
                    link: Some(2)
                },
            }
        );
    }

    #[test]
    fn non_paths_are_rejected() {
        let mut star = Multigraph::new(4);
        for v in 1..4 {
            star.add_edge(0, v, None);
        }
        assert!(matches!(canonical_path(&star), Err(Error::NotAPath(_))));
        let mut cycle = Multigraph::new(3);
        cycle.add_edge(0, 1, None);
        cycle.add_edge(1, 2, None);
        cycle.add_edge(2, 0, None);
        assert!(matches!(canonical_path(&cycle), Err(Error::NotAPath(_))));
    }

    #[test]
    fn unlabeled_graphs_do_not_depend_on_omega() {
        for n in [3, 6, 9] {
            let forms: Vec<Vec<PathSite>> = [":012", ":01", ":02", ":12", "0:12", "21:0"]
                .iter()
                .map(|s| {
                    canonical_path(schreier_graph(&om(s), n).unwrap().graph())
                        .unwrap()
                        .sites
                })
                .collect();
            assert!(forms.windows(2).all(|w| w[0] == w[1]));
        }
    }

    #[test]
    fn projections_are_coverings() {
        for (m, n) in [(2, 1), (3, 2), (5, 2)] {
            let c = level_projection_covering(&om(":012"), m, n).unwrap();
            assert!(verify_covering(&c).unwrap().passed());
            let mut fibers = vec![0; c.target.vertex_count()];
            for &y in &c.vertex_map {
                fibers[y] += 1;
            }
            assert!(fibers.iter().all(|&f| f == 1 << (m - n)));
        }
        assert!(level_projection_covering(&om(":012"), 2, 2).is_err());
    }

    #[test]
    fn cayley_balls() {
        let omega = om(":012");
        let limits = Limits::default();
        let one = cayley_ball(&omega, 1, 1, &limits).unwrap();
        assert_eq!(one.graph.vertex_count(), 5);
        assert_eq!(one.graph.degree(0), 4);
        // only the root is interior, so surjectivity cannot be checked
        assert!(matches!(
            verify_covering(&one.covering),
            Err(Error::WindowTooSmall(_))
        ));
        let two = cayley_ball(&omega, 2, 2, &limits).unwrap();
        assert_eq!(two.graph.vertex_count(), 11);
        let five = cayley_ball(&omega, 5, 2, &limits).unwrap();
        assert_eq!(
            five.graph.vertex_count(),
            *ball_sizes(&omega, 5, &limits)
                .unwrap()
                .sizes
                .last()
                .unwrap()
        );
        for v in 0..five.graph.vertex_count() {
            if five.distance[v] < 5 {
                assert_eq!(five.graph.degree(v), 4);
            }
        }
        assert!(verify_covering(&five.covering).unwrap().passed());
    }
}
