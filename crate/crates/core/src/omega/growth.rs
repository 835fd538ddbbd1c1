use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{generator_action, Generator, OmegaWord, TreeAutomorphism};
use crate::{Error, Limits, Result};

/// Ball of radius `radius` around the identity in the Cayley graph of the
/// level-`depth` quotient of `G_ω`, with edges `{g, s·g}`.
#[derive(Debug, Clone)]
pub struct ElementBall {
    pub depth: u32,
    pub radius: usize,
    pub elements: Vec<TreeAutomorphism>,
    pub distance: Vec<usize>,
    /// `neighbors[i][s]` is the index of `s·elements[i]`, when that element
    /// lies in the ball (the ball is an induced subgraph).
    pub neighbors: Vec<[Option<usize>; 4]>,
}

impl ElementBall {
    pub fn build(
        omega: &OmegaWord,
        depth: u32,
        radius: usize,
        max_elements: usize,
    ) -> Result<Self> {
        let gens: Vec<TreeAutomorphism> = Generator::ALL
            .iter()
            .map(|&g| generator_action(g, omega, depth))
            .collect::<Result<_>>()?;
        let identity = TreeAutomorphism::identity(depth)?;
        let mut index = HashMap::new();
        index.insert(identity.clone(), 0usize);
        let mut elements = vec![identity];
        let mut distance = vec![0usize];
        let mut neighbors: Vec<[Option<usize>; 4]> = vec![[None; 4]];
        let mut frontier = vec![0usize];
        for r in 1..=radius {
            let mut next = Vec::new();
            for &i in &frontier {
                for (s, gen) in gens.iter().enumerate() {
                    let product = gen.compose(&elements[i]);
                    let j = match index.get(&product) {
                        Some(&j) => j,
                        None => {
                            if elements.len() >= max_elements {
                                return Err(Error::ResourceLimit(format!(
                                    "ball of radius {radius} exceeds {max_elements} elements"
                                )));
                            }
                            let j = elements.len();
                            index.insert(product.clone(), j);
                            elements.push(product);
                            distance.push(r);
                            neighbors.push([None; 4]);
                            next.push(j);
                            j
                        }
                    };
                    neighbors[i][s] = Some(j);
                    // generators are involutions
                    neighbors[j][s] = Some(i);
                }
            }
            frontier = next;
        }
        // edges between elements of the outer sphere
        for &i in &frontier {
            for (s, gen) in gens.iter().enumerate() {
                if let Some(&j) = index.get(&gen.compose(&elements[i])) {
                    neighbors[i][s] = Some(j);
                }
            }
        }
        Ok(ElementBall {
            depth,
            radius,
            elements,
            distance,
            neighbors,
        })
    }

    /// `|B_r|` for `r = 0..=radius`.
    pub fn census(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.radius + 1];
        for &d in &self.distance {
            sizes[d] += 1;
        }
        for r in 1..sizes.len() {
            sizes[r] += sizes[r - 1];
        }
        sizes
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthReport {
    /// `γ(0), …, γ(radius)`.
    pub sizes: Vec<usize>,
    /// Smallest depth at which the census matched the previous depth.
    pub depth: u32,
    /// Always `true` on success; the values are exact only if the
    /// stabilization is genuine, which no finite computation certifies.
    pub stabilized: bool,
}

/// Smallest depth `D` whose ball census agrees with depth `D - 1`.
pub(crate) fn stable_depth(
    omega: &OmegaWord,
    radius: usize,
    limits: &Limits,
) -> Result<(u32, ElementBall)> {
    let mut previous = ElementBall::build(omega, 1, radius, limits.max_vertices)?;
    for depth in 2..=limits.max_depth.min(super::MAX_TREE_DEPTH) {
        let ball = ElementBall::build(omega, depth, radius, limits.max_vertices)?;
        if ball.census() == previous.census() {
            return Ok((depth, ball));
        }
        previous = ball;
    }
    Err(Error::ResourceLimit(format!(
        "ball census of radius {radius} did not stabilize by depth {}",
        limits.max_depth
    )))
}

/// Growth values `γ(0..=radius)` of `G_ω` with respect to `{a, b, c, d}`.
pub fn ball_sizes(omega: &OmegaWord, radius: usize, limits: &Limits) -> Result<GrowthReport> {
    let (depth, ball) = stable_depth(omega, radius, limits)?;
    Ok(GrowthReport {
        sizes: ball.census(),
        depth,
        stabilized: true,
    })
}
