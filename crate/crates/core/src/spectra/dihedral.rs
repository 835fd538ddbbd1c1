//! The operator `x·s + y·t` on `ℓ²(D_∞)` and the identity reducing the
//! Markov operator of `G_ω` to it.
//!
//! `D_∞ = ⟨s, t | s² = t² = 1⟩` has the bi-infinite line as Cayley graph,
//! with `s`- and `t`-edges alternating. Numbering the line so that the edge
//! `(i, i+1)` carries weight `x` for even `i` and `y` for odd `i`, the
//! operator is a Jacobi matrix with zero diagonal and period two.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::eigen::tridiagonal_eigenpairs;
use super::interval::IntervalUnion;
use crate::omega::{generator_action, Generator, OmegaWord};
use crate::{Error, Result};

fn check_weights(x: f64, y: f64) -> Result<()> {
    if !(x.is_finite() && y.is_finite()) || x < 0.0 || y < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "weights must be finite and nonnegative, got ({x}, {y})"
        )));
    }
    Ok(())
}

/// Trace of the transfer matrix over one period: a generalized eigenvector
/// with eigenvalue `λ` stays bounded iff `|tr| ≤ 2`.
fn transfer_trace(lambda: f64, x: f64, y: f64) -> f64 {
    (lambda * lambda - x * x - y * y) / (x * y)
}

/// Spectrum of `x·s + y·t`. For `x, y > 0` the band `|tr(λ)| ≤ 2` is
/// `(x−y)² ≤ λ² ≤ (x+y)²`. If one weight vanishes the operator is a
/// multiple of an involution and the spectrum is `{±(x+y)}`.
pub fn dihedral_exact_spectrum(x: f64, y: f64) -> Result<IntervalUnion> {
    check_weights(x, y)?;
    if x == 0.0 || y == 0.0 {
        let r = x + y;
        return IntervalUnion::new([(-r, -r), (r, r)]);
    }
    // band edges solve tr(λ) = ±2 for λ ≥ 0
    let inner = (x * x + y * y - 2.0 * x * y).max(0.0).sqrt();
    let outer = (x * x + y * y + 2.0 * x * y).sqrt();
    debug_assert!((transfer_trace(outer, x, y) - 2.0).abs() < 1e-9);
    IntervalUnion::new([(-outer, -inner), (inner, outer)])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncationCheck {
    pub length: usize,
    pub eigenvalues: Vec<f64>,
    /// Per eigenvalue: `‖(H − λ)ψ‖` for the zero extension of the truncated
    /// eigenvector, which bounds `dist(λ, σ(H))`.
    pub boundary_errors: Vec<f64>,
    /// All eigenvalues lie in the exact set fattened by their error.
    pub within: bool,
    /// `max_i |λ_i + λ_{L−1−i}|`.
    pub symmetry_defect: f64,
    /// `sup_λ dist(λ, exact)`. Edge states of the truncation sit in the gap,
    /// so this stays large; their boundary errors account for it.
    pub excess: f64,
    /// `sup_{t ∈ exact} dist(t, eigenvalues)`.
    pub gap: f64,
}

/// Eigenvalues of `x·s + y·t` restricted to the sites `0..length`.
pub fn dihedral_line_truncation(x: f64, y: f64, length: usize) -> Result<TruncationCheck> {
    check_weights(x, y)?;
    if length == 0 {
        return Err(Error::InvalidArgument(
            "truncation length must be positive".into(),
        ));
    }
    let exact = dihedral_exact_spectrum(x, y)?;
    let weight = |i: usize| if i.is_multiple_of(2) { x } else { y };
    let diag = vec![0.0; length];
    let off: Vec<f64> = (0..length - 1).map(weight).collect();
    let (values, vectors) = tridiagonal_eigenpairs(&diag, &off);
    let numerical: Vec<f64> = values
        .iter()
        .zip(&vectors)
        .map(|(&l, v)| {
            (0..length)
                .map(|i| {
                    let mut s = -l * v[i];
                    if i > 0 {
                        s += off[i - 1] * v[i - 1];
                    }
                    if i + 1 < length {
                        s += off[i] * v[i + 1];
                    }
                    s * s
                })
                .sum::<f64>()
                .sqrt()
        })
        .collect();
    // edges leaving the window: (-1, 0) has odd index, (L-1, L) has index L-1
    let (left, right) = (y, weight(length - 1));
    let boundary_errors: Vec<f64> = vectors
        .iter()
        .zip(&numerical)
        .map(|(v, r)| {
            let (first, last) = (v[0], v[length - 1]);
            ((left * first).powi(2) + (right * last).powi(2)).sqrt() + r
        })
        .collect();
    let within = values
        .iter()
        .zip(&boundary_errors)
        .all(|(&l, &e)| exact.distance(l) <= e + 1e-12);
    let symmetry_defect = (0..length)
        .map(|i| (values[i] + values[length - 1 - i]).abs())
        .fold(0.0, f64::max);
    let (excess, gap) = exact.hausdorff_parts(&values);
    Ok(TruncationCheck {
        length,
        eigenvalues: values,
        boundary_errors,
        within,
        symmetry_defect,
        excess,
        gap,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DihedralSpectrum {
    pub x: f64,
    pub y: f64,
    pub exact: IntervalUnion,
    pub truncation: TruncationCheck,
}

pub fn dihedral_weighted_spectrum(x: f64, y: f64, length: usize) -> Result<DihedralSpectrum> {
    Ok(DihedralSpectrum {
        x,
        y,
        exact: dihedral_exact_spectrum(x, y)?,
        truncation: dihedral_line_truncation(x, y, length)?,
    })
}

type SparseInt = Vec<BTreeMap<usize, i64>>;

fn permutation_matrix(images: &[u32]) -> SparseInt {
    // column convention: (P f)(v) = f(g v), so row v has a 1 at g(v)
    images
        .iter()
        .map(|&w| BTreeMap::from([(w as usize, 1)]))
        .collect()
}

fn combine(terms: &[(i64, &SparseInt)]) -> SparseInt {
    let n = terms[0].1.len();
    (0..n)
        .map(|i| {
            let mut row = BTreeMap::new();
            for &(c, m) in terms {
                for (&j, &v) in &m[i] {
                    *row.entry(j).or_insert(0) += c * v;
                }
            }
            row.retain(|_, v| *v != 0);
            row
        })
        .collect()
}

fn multiply(a: &SparseInt, b: &SparseInt) -> SparseInt {
    a.iter()
        .map(|row| {
            let mut out = BTreeMap::new();
            for (&k, &v) in row {
                for (&j, &w) in &b[k] {
                    *out.entry(j).or_insert(0) += v * w;
                }
            }
            out.retain(|_, v| *v != 0);
            out
        })
        .collect()
}

fn identity(n: usize) -> SparseInt {
    (0..n).map(|i| BTreeMap::from([(i, 1)])).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionReport {
    pub omega: String,
    pub depth: u32,
    /// `B + C + D − I` has only even entries, so `T` is an integer matrix.
    pub s_even: bool,
    pub t_squared_is_identity: bool,
    /// `A + B + C + D = A + 2T + I`, i.e. `4M = A + 2T + I`.
    pub markov_identity: bool,
    pub t_is_permutation: bool,
}

impl ReductionReport {
    pub fn holds(&self) -> bool {
        self.s_even && self.t_squared_is_identity && self.markov_identity
    }
}

/// Checks in exact integer arithmetic that `T = (B + C + D − I)/2` is an
/// involution and `4M = A + 2T + I` on level `depth`.
pub fn dihedral_reduction_check(omega: &OmegaWord, depth: u32) -> Result<ReductionReport> {
    if depth == 0 {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }
    let mats: Vec<SparseInt> = Generator::ALL
        .iter()
        .map(|&g| generator_action(g, omega, depth).map(|t| permutation_matrix(t.images())))
        .collect::<Result<_>>()?;
    let (a, b, c, d) = (&mats[0], &mats[1], &mats[2], &mats[3]);
    let n = a.len();
    let id = identity(n);
    let s = combine(&[(1, b), (1, c), (1, d), (-1, &id)]);
    let s_even = s.iter().all(|row| row.values().all(|v| v % 2 == 0));
    let t: SparseInt = s
        .iter()
        .map(|row| row.iter().map(|(&j, &v)| (j, v / 2)).collect())
        .collect();
    let t_squared_is_identity = s_even && multiply(&t, &t) == id;
    let lhs = combine(&[(1, a), (1, b), (1, c), (1, d)]);
    let rhs = combine(&[(1, a), (2, &t), (1, &id)]);
    let markov_identity = s_even && lhs == rhs;
    let t_is_permutation = t
        .iter()
        .all(|row| row.len() == 1 && row.values().all(|&v| v == 1));
    Ok(ReductionReport {
        omega: omega.to_string(),
        depth,
        s_even,
        t_squared_is_identity,
        markov_identity,
        t_is_permutation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;

    /// `σ = {±|x + y e^{iθ}|}`: on the two-site unit cell the Fourier symbol
    /// is `[[0, x + y e^{-iθ}], [x + y e^{iθ}, 0]]`.
    fn fourier_band(x: f64, y: f64, samples: usize) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi: f64 = 0.0;
        for k in 0..=samples {
            let theta = std::f64::consts::PI * k as f64 / samples as f64;
            let r = (Complex64::new(x, 0.0) + Complex64::from_polar(y, theta)).norm();
            lo = lo.min(r);
            hi = hi.max(r);
        }
        (lo, hi)
    }

    #[test]
    fn quarter_half_weights() {
        let exact = dihedral_exact_spectrum(0.25, 0.5).unwrap();
        assert_eq!(exact.intervals(), &[(-0.75, -0.25), (0.25, 0.75)]);
        let shifted = exact.affine(1.0, 0.25);
        assert_eq!(shifted, IntervalUnion::parse("[-0.5,0]u[0.5,1]").unwrap());
    }

    #[test]
    fn degenerate_weights() {
        let half = dihedral_exact_spectrum(0.5, 0.5).unwrap();
        assert_eq!(half.intervals(), &[(-1.0, 1.0)]);
        let single = dihedral_exact_spectrum(1.0, 0.0).unwrap();
        assert_eq!(single.intervals(), &[(-1.0, -1.0), (1.0, 1.0)]);
        assert!(dihedral_exact_spectrum(-1.0, 0.5).is_err());
    }

    #[test]
    fn truncations_converge_into_exact_set() {
        let mut distances = Vec::new();
        for length in [8, 32, 128, 512] {
            let check = dihedral_line_truncation(0.25, 0.5, length).unwrap();
            assert!(check.within, "length {length}");
            assert!(check.symmetry_defect < 1e-12);
            distances.push(check.gap);
        }
        assert!(distances[3] < 0.01 && distances[3] < distances[0]);
        let long = dihedral_line_truncation(0.25, 0.5, 512).unwrap();
        let exact = dihedral_exact_spectrum(0.25, 0.5).unwrap();
        for (l, e) in long.eigenvalues.iter().zip(&long.boundary_errors) {
            if exact.distance(*l) > 1e-9 {
                assert!(*e >= exact.distance(*l));
            }
        }
        // odd length forces a zero eigenvalue in the gap, with a large error
        let odd = dihedral_line_truncation(0.25, 0.5, 33).unwrap();
        assert!(odd.within);
        let zero = odd
            .eigenvalues
            .iter()
            .position(|l| l.abs() < 1e-12)
            .unwrap();
        assert!(odd.boundary_errors[zero] >= 0.25);
    }

    proptest! {
        #[test]
        fn exact_set_matches_fourier_band(x in 0.01f64..2.0, y in 0.01f64..2.0) {
            let exact = dihedral_exact_spectrum(x, y).unwrap();
            let (lo, hi) = fourier_band(x, y, 4096);
            let top = exact.intervals().last().unwrap();
            prop_assert!((top.0 - lo).abs() < 1e-9 && (top.1 - hi).abs() < 1e-9);
        }

        #[test]
        fn truncation_errors_are_sound(x in 0.05f64..1.0, y in 0.05f64..1.0, length in 2usize..80) {
            let check = dihedral_line_truncation(x, y, length).unwrap();
            prop_assert!(check.within);
            prop_assert!(check.symmetry_defect < 1e-10);
        }
    }

    #[test]
    fn reduction_identities() {
        for text in [":012", ":01", ":02", ":12", "0:12"] {
            let omega = OmegaWord::parse(text).unwrap();
            for depth in 1..=8 {
                let r = dihedral_reduction_check(&omega, depth).unwrap();
                assert!(r.holds(), "{text} depth {depth}: {r:?}");
                assert!(r.t_is_permutation);
            }
        }
        let r = dihedral_reduction_check(&OmegaWord::parse(":012").unwrap(), 1).unwrap();
        assert!(r.holds());
    }
}
