//! Approximate eigenfunctions on a covering graph built from eigenfunctions
//! downstairs, with the a-priori bounds that control their residuals.
//!
//! Given `φ: Γ₁ → Γ₂`, an (approximate) eigenpair `(λ, f)` of `H₂` and a
//! truncation radius `k`, the pullback `f∘φ` is cut off on a ball around a
//! base vertex `v`:
//!
//! * [`HulanickiMode::FiniteTarget`] keeps `f∘φ` on `B_{N+1}(F_k)` with
//!   `F_k = B_k(v)` and `N = |Γ₂|`. The error lives on the shell
//!   `B_{k+N+2}(v) ∖ B_{k+N}(v)` and is bounded by
//!   `|shell| (max|f| (W + |λ|))² / (α_{k,N} |f(w)|²)`, where `W` bounds the
//!   absolute row sums of `H₂` (equal to those of `H₁`), `w` maximizes `|f|` and
//!   `α_{k,N}` counts preimages of `w` in `B_{k+N}(v)`.
//! * [`HulanickiMode::Subexponential`] keeps `f∘φ` on `B_k(v)` and reports
//!   `ε² α_k/α_{k-N} + 2|S| (α_{k+N} - α_{k-2N})/α_{k-N}` with `S = supp f`,
//!   `ε = ‖H₂f - λf‖`, `N` the radius of `S` around `φ(v)` and `α` the fiber
//!   counts of `φ(v)`.
//!
//! Both bounds are on the squared residual of the normalized truncation.

use std::collections::VecDeque;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{ball_reach, fiber_counts, CoveringMap};
use crate::graph::laplace_type_operator;
use crate::spectra::eigenpairs_selfadjoint;
use crate::{Error, Limits, Result};

/// Residuals at or below this are reported as exact zeros.
pub const EXACT_ZERO: f64 = 1e-12;

const EIGENPAIR_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HulanickiMode {
    FiniteTarget,
    Subexponential,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HulanickiReport {
    pub mode: HulanickiMode,
    pub k: usize,
    pub lambda: f64,
    /// `‖H₁f̃_k - λf̃_k‖` for the normalized truncation `f̃_k`.
    pub residual: f64,
    /// Upper bound for `residual²`; infinite when vacuous.
    pub bound: f64,
    /// `‖H₂f - λf‖` for the normalized input.
    pub target_defect: f64,
    /// `N` of the construction.
    pub reach: usize,
    /// Vertices where the truncation is nonzero.
    pub support_size: usize,
    /// Vertices outside the region where the truncation is exact.
    pub shell_size: usize,
    /// Fiber counts entering the bound, as `(radius, count)`.
    pub fiber_counts: Vec<(i64, usize)>,
    /// `|B_{k+1}(v) ∖ B_k(v)| / |B_k(v)|`.
    pub folner_ratio: f64,
    pub window_radius: Option<usize>,
}

impl HulanickiReport {
    pub fn is_sound(&self) -> bool {
        self.residual * self.residual <= self.bound + 1e-9
    }

    pub fn is_exact_zero(&self) -> bool {
        self.residual <= EXACT_ZERO
    }
}

fn bfs(g: &crate::graph::Multigraph, v: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.vertex_count()];
    let mut queue = VecDeque::from([v]);
    dist[v] = 0;
    while let Some(x) = queue.pop_front() {
        for &e in g.incident(x) {
            let y = g.other_end(e, x);
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    dist
}

fn norm(f: &[Complex64]) -> f64 {
    f.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Residual of the pullback of `f` truncated to `B_cut(center)`:
/// `(‖H₁f_k - λf_k‖ / ‖f_k‖, support size)`.
fn truncated_residual(
    c: &CoveringMap,
    h1: &crate::graph::LinearOperator,
    f: &[Complex64],
    lambda: f64,
    dist: &[usize],
    cut: usize,
) -> (f64, usize) {
    let fk: Vec<Complex64> = (0..c.source.vertex_count())
        .map(|x| {
            if dist[x] <= cut {
                f[c.vertex_map[x]]
            } else {
                Complex64::default()
            }
        })
        .collect();
    let hf = h1.apply(&fk);
    let defect: Vec<Complex64> = hf.iter().zip(&fk).map(|(a, b)| a - b * lambda).collect();
    let support = fk.iter().filter(|z| z.norm() > 0.0).count();
    let total = norm(&fk);
    if total == 0.0 {
        return (f64::INFINITY, 0);
    }
    (norm(&defect) / total, support)
}

/// Runs the truncation construction of `mode` at radius `k` around the
/// window root (vertex 0 for complete sources).
pub fn hulanicki_residual(
    c: &CoveringMap,
    lambda: f64,
    f: &[Complex64],
    mode: HulanickiMode,
    k: usize,
) -> Result<HulanickiReport> {
    let target = c.weighted_target()?;
    if f.len() != c.target.vertex_count() {
        return Err(Error::DimensionMismatch {
            expected: c.target.vertex_count(),
            found: f.len(),
        });
    }
    let scale = norm(f);
    if scale == 0.0 || !scale.is_finite() {
        return Err(Error::InvalidArgument(
            "f must be a nonzero finite vector".into(),
        ));
    }
    let f: Vec<Complex64> = f.iter().map(|z| z / scale).collect();
    let h2 = laplace_type_operator(&target);
    let target_defect = norm(
        &h2.apply(&f)
            .iter()
            .zip(&f)
            .map(|(a, b)| a - b * lambda)
            .collect::<Vec<_>>(),
    );

    let source = c.weighted_source()?;
    let h1 = laplace_type_operator(&source);
    let center = c.root();
    let dist = bfs(&c.source, center);
    let reach_available = ball_reach(c, center);
    let ball = |r: usize| dist.iter().filter(|&&d| d <= r).count();
    let folner_ratio = (ball(k + 1) - ball(k)) as f64 / ball(k) as f64;
    let window_radius = c.window.as_ref().map(|w| w.radius);

    match mode {
        HulanickiMode::FiniteTarget => {
            if target_defect > EIGENPAIR_TOLERANCE {
                return Err(Error::NotAnEigenpair(target_defect));
            }
            let n = c.target.vertex_count();
            if k + n + 2 > reach_available {
                return Err(Error::WindowTooSmall(format!(
                    "radius k + N + 2 = {} exceeds the window",
                    k + n + 2
                )));
            }
            let (residual, support_size) = truncated_residual(c, &h1, &f, lambda, &dist, k + n + 1);
            let (w, fw) =
                f.iter()
                    .enumerate()
                    .map(|(i, z)| (i, z.norm()))
                    .fold(
                        (0, 0.0),
                        |best, cur| if cur.1 > best.1 { cur } else { best },
                    );
            let shell: Vec<usize> = (0..c.source.vertex_count())
                .filter(|&x| dist[x] > k + n && dist[x] <= k + n + 2)
                .collect();
            // stars of covering vertices carry the target's weights
            let row_sum = (0..c.target.vertex_count())
                .map(|y| {
                    c.target
                        .incident(y)
                        .iter()
                        .map(|&e| target.weight_at(e, y).norm())
                        .sum::<f64>()
                })
                .fold(0.0, f64::max);
            let alpha = (0..c.source.vertex_count())
                .filter(|&x| dist[x] <= k + n && c.vertex_map[x] == w)
                .count();
            let per_vertex = (fw * (row_sum + lambda.abs())).powi(2);
            let bound = if shell.is_empty() {
                0.0
            } else {
                shell.len() as f64 * per_vertex / (alpha as f64 * fw * fw)
            };
            Ok(HulanickiReport {
                mode,
                k,
                lambda,
                residual,
                bound,
                target_defect,
                reach: n,
                support_size,
                shell_size: shell.len(),
                fiber_counts: vec![((k + n) as i64, alpha)],
                folner_ratio,
                window_radius,
            })
        }
        HulanickiMode::Subexponential => {
            let base = c.vertex_map[center];
            let target_dist = bfs(&c.target, base);
            let support: Vec<usize> = (0..f.len()).filter(|&y| f[y].norm() > 0.0).collect();
            let n = support
                .iter()
                .map(|&y| target_dist[y])
                .max()
                .expect("f is nonzero");
            if n == usize::MAX {
                return Err(Error::InvalidArgument(
                    "supp f is not connected to the base vertex".into(),
                ));
            }
            let needed = (k + n).max(k + 1);
            if needed > reach_available {
                return Err(Error::WindowTooSmall(format!(
                    "radius {needed} exceeds the window"
                )));
            }
            let (residual, support_size) = truncated_residual(c, &h1, &f, lambda, &dist, k);
            let alphas = fiber_counts(c, center, k + n)?;
            let alpha = |j: i64| if j < 0 { 0 } else { alphas[j as usize] };
            let (k_i, n_i) = (k as i64, n as i64);
            let denominator = alpha(k_i - n_i) as f64;
            let bound = if denominator == 0.0 {
                f64::INFINITY
            } else {
                target_defect * target_defect * alpha(k_i) as f64 / denominator
                    + 2.0 * support.len() as f64 * (alpha(k_i + n_i) - alpha(k_i - 2 * n_i)) as f64
                        / denominator
            };
            let shell_size = dist.iter().filter(|&&d| d <= k + 1 && d + n > k).count();
            Ok(HulanickiReport {
                mode,
                k,
                lambda,
                residual,
                bound,
                target_defect,
                reach: n,
                support_size,
                shell_size,
                fiber_counts: [k_i - 2 * n_i, k_i - n_i, k_i, k_i + n_i]
                    .iter()
                    .map(|&j| (j, alpha(j)))
                    .collect(),
                folner_ratio,
                window_radius,
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InclusionEntry {
    pub lambda: f64,
    pub best_residual: f64,
    pub best_k: usize,
    pub runs: Vec<HulanickiReport>,
    pub sound: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InclusionReport {
    pub mode: HulanickiMode,
    pub schedule: Vec<usize>,
    pub entries: Vec<InclusionEntry>,
}

impl InclusionReport {
    pub fn max_best_residual(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.best_residual)
            .fold(0.0, f64::max)
    }

    pub fn all_sound(&self) -> bool {
        self.entries.iter().all(|e| e.sound)
    }
}

/// For every eigenpair of the target operator, the smallest residual the
/// construction reaches over `schedule`.
pub fn spectral_inclusion_report(
    c: &CoveringMap,
    schedule: &[usize],
    mode: HulanickiMode,
    limits: &Limits,
) -> Result<InclusionReport> {
    if schedule.is_empty() {
        return Err(Error::InvalidArgument("empty radius schedule".into()));
    }
    let h2 = laplace_type_operator(&c.weighted_target()?);
    let (values, vectors) = eigenpairs_selfadjoint(&h2, limits)?;
    let entries = values
        .iter()
        .enumerate()
        .map(|(i, &lambda)| {
            let f: Vec<Complex64> = vectors.column(i).iter().copied().collect();
            let runs = schedule
                .iter()
                .map(|&k| hulanicki_residual(c, lambda, &f, mode, k))
                .collect::<Result<Vec<_>>>()?;
            let best = runs
                .iter()
                .min_by(|a, b| a.residual.total_cmp(&b.residual))
                .expect("nonempty schedule");
            Ok(InclusionEntry {
                lambda,
                best_residual: best.residual,
                best_k: best.k,
                sound: runs.iter().all(HulanickiReport::is_sound),
                runs,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(InclusionReport {
        mode,
        schedule: schedule.to_vec(),
        entries,
    })
}
