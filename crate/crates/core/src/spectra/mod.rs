//! Spectra of the Markov operators on `Γ_n`, target sets, the infinite
//! dihedral comparison operator, and return-probability moments.

mod dihedral;
mod eigen;
mod interval;
mod moments;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::Multigraph;
use crate::omega::OmegaWord;
use crate::schreier::{canonical_path, schreier_graph_with};
use crate::{Error, Limits, Result};

pub use dihedral::{
    dihedral_exact_spectrum, dihedral_line_truncation, dihedral_reduction_check,
    dihedral_weighted_spectrum, DihedralSpectrum, ReductionReport, TruncationCheck,
};
pub use eigen::{
    as_tridiagonal, eigenpairs_selfadjoint, eigenvalues_selfadjoint, lanczos_extremal,
    tridiagonal_eigenpairs, tridiagonal_eigenvalues, tridiagonal_residuals, Eigenvalues,
    SolverKind,
};
pub use interval::IntervalUnion;
pub use moments::{
    eigen_moments, eigen_moments_at, hankel_min_eigenvalue, spectral_moments, MomentSequence,
};

/// Membership tolerance used when none is given.
pub const DEFAULT_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    #[serde(flatten)]
    pub eigenvalues: Eigenvalues,
    pub target: Option<IntervalUnion>,
    pub tolerance: f64,
    /// Per eigenvalue; empty without a target.
    pub in_target: Vec<bool>,
    pub contained: bool,
    /// `sup_λ dist(λ, target)`.
    pub excess: f64,
    /// `sup_{t ∈ target} dist(t, eigenvalues)`.
    pub gap: f64,
}

impl SpectrumReport {
    pub fn new(eigenvalues: Eigenvalues, target: Option<&IntervalUnion>, tolerance: f64) -> Self {
        let (in_target, excess, gap) = match target {
            Some(t) => {
                let flags = eigenvalues
                    .values
                    .iter()
                    .map(|&x| t.contains(x, tolerance))
                    .collect();
                let (excess, gap) = t.hausdorff_parts(&eigenvalues.values);
                (flags, excess, gap)
            }
            None => (Vec::new(), 0.0, 0.0),
        };
        SpectrumReport {
            contained: in_target.iter().all(|&b| b),
            eigenvalues,
            target: target.cloned(),
            tolerance,
            in_target,
            excess,
            gap,
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.eigenvalues.values
    }

    pub fn hausdorff(&self) -> f64 {
        self.excess.max(self.gap)
    }

    /// `max |λ|`.
    pub fn spectral_radius(&self) -> f64 {
        self.values().iter().map(|x| x.abs()).fold(0.0, f64::max)
    }
}

/// The Markov operator of a path with loops as a symmetric tridiagonal
/// matrix in path order, conjugated by `D^{1/2}` so that it stays symmetric
/// when degrees differ.
pub fn path_markov_tridiagonal(g: &Multigraph) -> Result<(Vec<f64>, Vec<f64>)> {
    let path = canonical_path(g)?;
    let degrees: Vec<f64> = path
        .order
        .iter()
        .map(|&v| match g.degree(v) {
            0 => Err(Error::IsolatedVertex(v)),
            d => Ok(d as f64),
        })
        .collect::<Result<_>>()?;
    let diag = path
        .sites
        .iter()
        .zip(&degrees)
        .map(|(s, d)| s.loops as f64 / d)
        .collect();
    let off = path
        .sites
        .iter()
        .zip(degrees.windows(2))
        .map(|(s, d)| s.link.unwrap_or(0) as f64 / (d[0] * d[1]).sqrt())
        .collect();
    Ok((diag, off))
}

/// Spectrum of the Markov operator on `Γ_n`, through its path structure.
/// Residuals are attached up to the dense cap.
pub fn level_spectrum(omega: &OmegaWord, n: u32, limits: &Limits) -> Result<Eigenvalues> {
    let g = schreier_graph_with(omega, n, limits)?;
    let (diag, off) = path_markov_tridiagonal(g.graph())?;
    let values = tridiagonal_eigenvalues(&diag, &off);
    let residuals =
        (diag.len() <= limits.dense_cap).then(|| tridiagonal_residuals(&diag, &off, &values));
    Ok(Eigenvalues {
        values,
        residuals,
        partial: false,
        solver: SolverKind::Tridiagonal,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelSpectrum {
    pub level: u32,
    pub report: SpectrumReport,
    /// Hausdorff distance between the target and all eigenvalues of levels
    /// `1..=level`.
    pub cumulative_hausdorff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub omega: String,
    pub target: IntervalUnion,
    pub levels: Vec<LevelSpectrum>,
}

impl SweepReport {
    pub fn all_contained(&self) -> bool {
        self.levels.iter().all(|l| l.report.contained)
    }

    pub fn hausdorff_non_increasing(&self) -> bool {
        self.levels
            .windows(2)
            .all(|w| w[1].cumulative_hausdorff <= w[0].cumulative_hausdorff)
    }
}

/// Spectra of `Γ_1, …, Γ_{n_max}` checked against `target`.
pub fn spectrum_sweep(
    omega: &OmegaWord,
    n_max: u32,
    target: &IntervalUnion,
    tolerance: f64,
    limits: &Limits,
) -> Result<SweepReport> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be at least 1".into()));
    }
    let spectra: Vec<Eigenvalues> = (1..=n_max)
        .into_par_iter()
        .map(|n| level_spectrum(omega, n, limits))
        .collect::<Result<_>>()?;
    let mut cumulative: Vec<f64> = Vec::new();
    let levels = spectra
        .into_iter()
        .zip(1..)
        .map(|(eigs, level)| {
            cumulative.extend_from_slice(&eigs.values);
            cumulative.sort_by(f64::total_cmp);
            let (excess, gap) = target.hausdorff_parts(&cumulative);
            LevelSpectrum {
                level,
                report: SpectrumReport::new(eigs, Some(target), tolerance),
                cumulative_hausdorff: excess.max(gap),
            }
        })
        .collect();
    Ok(SweepReport {
        omega: omega.to_string(),
        target: target.clone(),
        levels,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KestenVerdict {
    pub half_size: usize,
    pub lower_bound: f64,
    pub spectral_radius: f64,
    pub within_bounds: bool,
    /// For finite graphs: whether the radius is 1.
    pub finite_radius_one: Option<bool>,
}

impl KestenVerdict {
    pub fn holds(&self) -> bool {
        self.within_bounds && self.finite_radius_one.unwrap_or(true)
    }
}

/// `√(2n-1)/n`, the spectral radius of the simple random walk on the
/// `2n`-regular tree.
pub fn kesten_lower_bound(half_size: usize) -> f64 {
    let n = half_size as f64;
    (2.0 * n - 1.0).sqrt() / n
}

const KESTEN_TOLERANCE: f64 = 1e-10;

/// Checks `√(2n-1)/n ≤ r(M) ≤ 1` for the Markov operator of a `2n`-regular
/// graph, and `r(M) = 1` when the graph is finite.
pub fn kesten_check(report: &SpectrumReport, half_size: usize, finite: bool) -> KestenVerdict {
    let lower_bound = kesten_lower_bound(half_size.max(1));
    let r = report.spectral_radius();
    KestenVerdict {
        half_size,
        lower_bound,
        spectral_radius: r,
        within_bounds: r >= lower_bound - KESTEN_TOLERANCE && r <= 1.0 + KESTEN_TOLERANCE,
        finite_radius_one: finite.then(|| (r - 1.0).abs() <= KESTEN_TOLERANCE),
    }
}
