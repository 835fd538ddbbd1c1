use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::eigen::eigenpairs_selfadjoint;
use crate::graph::{markov_operator, LinearOperator, Multigraph};
use crate::{Error, Limits, Result};

/// Return probabilities `m_p = (M^p δ_v, δ_v)`, the moments of the spectral
/// measure of `M` at `v`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentSequence {
    pub vertex: usize,
    pub moments: Vec<f64>,
}

impl MomentSequence {
    pub fn max_deviation(&self, other: &MomentSequence) -> f64 {
        self.moments
            .iter()
            .zip(&other.moments)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn hankel_positive(&self, tolerance: f64) -> bool {
        hankel_min_eigenvalue(self) >= -tolerance
    }
}

fn check_vertex(g: &Multigraph, v: usize, limits: &Limits) -> Result<()> {
    limits.check_vertices(g.vertex_count(), "moment graph")?;
    if v >= g.vertex_count() {
        return Err(Error::InvalidArgument(format!("vertex {v} out of range")));
    }
    Ok(())
}

/// Moments `m_0..=m_P` by repeated application of `M` to `δ_v`.
pub fn spectral_moments(
    g: &Multigraph,
    v: usize,
    p_max: usize,
    limits: &Limits,
) -> Result<MomentSequence> {
    check_vertex(g, v, limits)?;
    let m = markov_operator(g)?;
    let mut f = vec![Complex64::new(0.0, 0.0); g.vertex_count()];
    f[v] = Complex64::new(1.0, 0.0);
    let mut moments = Vec::with_capacity(p_max + 1);
    for p in 0..=p_max {
        moments.push(f[v].re);
        if p < p_max {
            f = m.apply(&f);
        }
    }
    Ok(MomentSequence { vertex: v, moments })
}

/// Moments from the eigendecomposition of `D^{-1/2} A D^{-1/2}`, which is
/// conjugate to `M` and has the same diagonal powers:
/// `m_p = Σ_i U[v,i]² λ_i^p`.
pub fn eigen_moments(
    g: &Multigraph,
    v: usize,
    p_max: usize,
    limits: &Limits,
) -> Result<MomentSequence> {
    check_vertex(g, v, limits)?;
    Ok(eigen_moments_at(g, &[v], p_max, limits)?.remove(0))
}

/// [`eigen_moments`] at several vertices from one eigendecomposition.
pub fn eigen_moments_at(
    g: &Multigraph,
    vertices: &[usize],
    p_max: usize,
    limits: &Limits,
) -> Result<Vec<MomentSequence>> {
    for &v in vertices {
        check_vertex(g, v, limits)?;
    }
    let n = g.vertex_count();
    let mut inv_sqrt = Vec::with_capacity(n);
    for u in 0..n {
        match g.degree(u) {
            0 => return Err(Error::IsolatedVertex(u)),
            d => inv_sqrt.push(1.0 / (d as f64).sqrt()),
        }
    }
    let mut rows = vec![Vec::new(); n];
    for e in g.edges() {
        let w = Complex64::new(inv_sqrt[e.u] * inv_sqrt[e.v], 0.0);
        rows[e.u].push((e.v, w));
        if !e.is_loop() {
            rows[e.v].push((e.u, w));
        }
    }
    let s = LinearOperator::from_rows(rows);
    let (values, vectors) = eigenpairs_selfadjoint(&s, limits)?;
    Ok(vertices
        .iter()
        .map(|&v| {
            let weights: Vec<f64> = (0..n).map(|i| vectors[(v, i)].norm_sqr()).collect();
            let moments = (0..=p_max)
                .map(|p| {
                    values
                        .iter()
                        .zip(&weights)
                        .map(|(l, w)| w * l.powi(p as i32))
                        .sum()
                })
                .collect();
            MomentSequence { vertex: v, moments }
        })
        .collect())
}

/// Smallest eigenvalue of the Hankel matrix `(m_{i+j})` of the largest size
/// the sequence supports. Nonnegative for the moments of a positive measure.
pub fn hankel_min_eigenvalue(seq: &MomentSequence) -> f64 {
    let size = seq.moments.len().div_ceil(2);
    if size == 0 {
        return 0.0;
    }
    let h = DMatrix::from_fn(size, size, |i, j| seq.moments[i + j]);
    SymmetricEigen::new(h)
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}
