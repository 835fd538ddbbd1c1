use serde::{Deserialize, Serialize};

use super::generator::apply_letter;
use super::{Generator, GeneratorWord, OmegaWord};
use crate::{Error, Result};

/// Deepest level for which a full permutation table is built.
pub const MAX_TREE_DEPTH: u32 = 24;

/// An automorphism of the binary rooted tree truncated to levels `1..=depth`.
///
/// Only the permutation of the deepest level is stored; level `k` is its
/// prefix projection. A level-`k` vertex `x₁…x_k` is the integer with `x₁`
/// as the most significant of `k` bits, so integer order is lexicographic
/// order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TreeAutomorphism {
    depth: u32,
    images: Vec<u32>,
}

fn check_depth(depth: u32) -> Result<()> {
    if depth == 0 || depth > MAX_TREE_DEPTH {
        return Err(Error::InvalidArgument(format!(
            "tree depth must be in 1..={MAX_TREE_DEPTH}, got {depth}"
        )));
    }
    Ok(())
}

impl TreeAutomorphism {
    pub fn identity(depth: u32) -> Result<Self> {
        check_depth(depth)?;
        Ok(TreeAutomorphism {
            depth,
            images: (0..1u32 << depth).collect(),
        })
    }

    /// Builds an automorphism from the permutation of level `depth`,
    /// rejecting tables that are not bijective or not prefix coherent.
    pub fn from_level_permutation(depth: u32, images: Vec<u32>) -> Result<Self> {
        check_depth(depth)?;
        let size = 1usize << depth;
        if images.len() != size {
            return Err(Error::DimensionMismatch {
                expected: size,
                found: images.len(),
            });
        }
        let mut seen = vec![false; size];
        for &y in &images {
            if y as usize >= size || std::mem::replace(&mut seen[y as usize], true) {
                return Err(Error::InvalidArgument(
                    "level table is not a permutation".into(),
                ));
            }
        }
        let candidate = TreeAutomorphism { depth, images };
        if !candidate.is_coherent() {
            return Err(Error::InvalidArgument(
                "level table does not come from a tree automorphism".into(),
            ));
        }
        Ok(candidate)
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// Images of the level-`depth` vertices in lexicographic order.
    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn apply(&self, vertex: u32) -> u32 {
        self.images[vertex as usize]
    }

    /// Permutation of level `level ≤ depth`.
    pub fn level_permutation(&self, level: u32) -> Vec<u32> {
        assert!(level >= 1 && level <= self.depth);
        let shift = self.depth - level;
        (0..1u32 << level)
            .map(|y| self.images[(y << shift) as usize] >> shift)
            .collect()
    }

    /// Every level permutation is the prefix projection of the next one.
    pub fn is_coherent(&self) -> bool {
        (1..=self.depth).all(|level| {
            let shift = self.depth - level;
            self.images.iter().enumerate().all(|(x, &y)| {
                let prefix = (x as u32) >> shift;
                self.images[(prefix << shift) as usize] >> shift == y >> shift
            })
        })
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &TreeAutomorphism) -> TreeAutomorphism {
        assert_eq!(self.depth, other.depth, "depth mismatch in composition");
        TreeAutomorphism {
            depth: self.depth,
            images: other
                .images
                .iter()
                .map(|&y| self.images[y as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> TreeAutomorphism {
        let mut images = vec![0; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            images[y as usize] = x as u32;
        }
        TreeAutomorphism {
            depth: self.depth,
            images,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(x, &y)| x as u32 == y)
    }

    /// First vertex moved by the automorphism.
    pub fn first_moved(&self) -> Option<u32> {
        self.images
            .iter()
            .enumerate()
            .find(|&(x, &y)| x as u32 != y)
            .map(|(x, _)| x as u32)
    }
}

/// Truncation of `a = σ_0`, or of `b_ω, c_ω, d_ω` as products of the
/// branch transpositions `σ_n`, `n < depth`, selected by `ω`.
pub fn generator_action(g: Generator, omega: &OmegaWord, depth: u32) -> Result<TreeAutomorphism> {
    check_depth(depth)?;
    let mask = g.level_mask(omega, depth);
    let images = (0..1u32 << depth)
        .map(|x| apply_letter(g, mask, depth, x))
        .collect();
    Ok(TreeAutomorphism { depth, images })
}

/// Action of a word; the leftmost letter acts last.
pub fn word_action(
    word: &GeneratorWord,
    omega: &OmegaWord,
    depth: u32,
) -> Result<TreeAutomorphism> {
    check_depth(depth)?;
    let masks: Vec<u32> = Generator::ALL
        .iter()
        .map(|g| g.level_mask(omega, depth))
        .collect();
    let images = (0..1u32 << depth)
        .map(|x| {
            word.letters
                .iter()
                .rev()
                .fold(x, |v, &g| apply_letter(g, masks[g.index()], depth, v))
        })
        .collect();
    Ok(TreeAutomorphism { depth, images })
}
