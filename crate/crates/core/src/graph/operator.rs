use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{EdgeWeight, Multigraph, WeightedGraph};
use crate::{Error, Result};

/// A bounded operator on `ℂ^dim` stored as sparse rows.
///
/// `apply` sums each row in stored column order, so results are
/// bit-reproducible.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearOperator {
    dim: usize,
    rows: Vec<Vec<(usize, Complex64)>>,
    self_adjoint: bool,
}

fn merge_row(mut row: Vec<(usize, Complex64)>) -> Vec<(usize, Complex64)> {
    row.sort_by_key(|&(j, _)| j);
    let mut merged: Vec<(usize, Complex64)> = Vec::with_capacity(row.len());
    for (j, z) in row {
        match merged.last_mut() {
            Some((k, acc)) if *k == j => *acc += z,
            _ => merged.push((j, z)),
        }
    }
    merged.retain(|&(_, z)| z != Complex64::new(0.0, 0.0));
    merged
}

impl LinearOperator {
    /// Builds an operator from row entries; repeated columns are summed.
    pub fn from_rows(rows: Vec<Vec<(usize, Complex64)>>) -> Self {
        let dim = rows.len();
        let rows: Vec<_> = rows.into_iter().map(merge_row).collect();
        let mut op = LinearOperator {
            dim,
            rows,
            self_adjoint: false,
        };
        op.self_adjoint = op.check_self_adjoint();
        op
    }

    pub fn from_dense(m: &DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        let rows = (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| (j, m[(i, j)])).collect())
            .collect();
        Ok(Self::from_rows(rows))
    }

    pub fn from_real_dense(m: &DMatrix<f64>) -> Result<Self> {
        Self::from_dense(&m.map(|x| Complex64::new(x, 0.0)))
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_rows(
            (0..dim)
                .map(|i| vec![(i, Complex64::new(1.0, 0.0))])
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[Vec<(usize, Complex64)>] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.rows[i]
            .binary_search_by_key(&j, |&(k, _)| k)
            .map(|pos| self.rows[i][pos].1)
            .unwrap_or_default()
    }

    fn check_self_adjoint(&self) -> bool {
        self.rows
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().all(|&(j, z)| self.entry(j, i) == z.conj()))
    }

    /// Exact equality with the conjugate transpose.
    pub fn is_self_adjoint(&self) -> bool {
        self.self_adjoint
    }

    pub fn is_real(&self) -> bool {
        self.rows.iter().flatten().all(|&(_, z)| z.im == 0.0)
    }

    pub fn apply(&self, f: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(f.len(), self.dim, "vector length does not match operator");
        self.rows
            .iter()
            .map(|row| row.iter().map(|&(j, z)| z * f[j]).sum())
            .collect()
    }

    pub fn apply_real(&self, f: &[f64]) -> Vec<Complex64> {
        let lifted: Vec<Complex64> = f.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.apply(&lifted)
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, z) in row {
                m[(i, j)] = z;
            }
        }
        m
    }

    /// Real part of the dense matrix, when the operator is real.
    pub fn to_dense_real(&self) -> Option<DMatrix<f64>> {
        self.is_real().then(|| self.to_dense().map(|z| z.re))
    }

    pub fn adjoint(&self) -> LinearOperator {
        let mut rows = vec![Vec::new(); self.dim];
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, z) in row {
                rows[j].push((i, z.conj()));
            }
        }
        Self::from_rows(rows)
    }

    /// `self · other`.
    pub fn compose(&self, other: &LinearOperator) -> LinearOperator {
        assert_eq!(self.dim, other.dim);
        let rows = self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .flat_map(|&(k, z)| other.rows[k].iter().map(move |&(j, w)| (j, z * w)))
                    .collect()
            })
            .collect();
        Self::from_rows(rows)
    }

    /// `α · self + β · I`.
    pub fn affine(&self, alpha: Complex64, beta: Complex64) -> LinearOperator {
        let rows = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut r: Vec<_> = row.iter().map(|&(j, z)| (j, alpha * z)).collect();
                r.push((i, beta));
                r
            })
            .collect();
        Self::from_rows(rows)
    }

    pub fn max_row_sum(&self) -> f64 {
        self.rows
            .iter()
            .map(|row| row.iter().map(|(_, z)| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.rows
            .iter()
            .flatten()
            .map(|(_, z)| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Upper bound for the operator norm: the smaller of the maximal absolute
    /// row sum and the Frobenius norm. The row-sum bound holds for the
    /// self-adjoint operators used here (row and column sums agree).
    pub fn norm_estimate(&self) -> f64 {
        let col_max = self.adjoint().max_row_sum();
        let schur = (self.max_row_sum() * col_max).sqrt();
        schur.min(self.frobenius())
    }
}

/// `(H_α f)(v) = Σ_{e ∈ E_v} α_{v,e} f(r_v(e))`.
pub fn laplace_type_operator(g: &WeightedGraph) -> LinearOperator {
    let graph = &g.graph;
    let rows = (0..graph.vertex_count())
        .map(|v| {
            graph
                .incident(v)
                .iter()
                .map(|&e| (graph.other_end(e, v), g.weight_at(e, v)))
                .collect()
        })
        .collect();
    LinearOperator::from_rows(rows)
}

/// `(M f)(v) = (1/d(v)) Σ_{e ∈ E_v} f(r_v(e))`.
pub fn markov_operator(g: &Multigraph) -> Result<LinearOperator> {
    Ok(laplace_type_operator(&WeightedGraph::markov(g)?))
}

/// `Δ = |S| (I − M)` for a graph regular of degree `|S|`.
pub fn cayley_laplacian(g: &Multigraph) -> Result<LinearOperator> {
    let expected = if g.vertex_count() == 0 {
        0
    } else {
        g.degree(0)
    };
    for v in 0..g.vertex_count() {
        if g.degree(v) != expected {
            return Err(Error::NotRegular {
                expected,
                vertex: v,
                found: g.degree(v),
            });
        }
    }
    let m = markov_operator(g)?;
    let s = expected as f64;
    Ok(m.affine(Complex64::new(-s, 0.0), Complex64::new(s, 0.0)))
}

fn check_radius(h: &LinearOperator, radius: f64) -> Result<()> {
    let norm_estimate = h.norm_estimate();
    if radius.is_nan() || radius < 2.0 * norm_estimate || radius <= 0.0 {
        return Err(Error::RadiusTooSmall {
            radius,
            norm_estimate,
        });
    }
    Ok(())
}

/// `I − (A − λ)(A − λ)^* / R²`, which has `1` in its spectrum exactly when
/// `λ ∈ σ(A)`.
pub fn shift_square_operator(
    h: &LinearOperator,
    lambda: Complex64,
    radius: f64,
) -> Result<LinearOperator> {
    check_radius(h, radius)?;
    let one = Complex64::new(1.0, 0.0);
    let shifted = h.affine(one, -lambda);
    let product = shifted.compose(&shifted.adjoint());
    let r2 = radius * radius;
    Ok(product.affine(Complex64::new(-1.0 / r2, 0.0), one))
}

/// The transform of [`shift_square_operator`] together with a weighted graph
/// `Γ'` on the same vertices realizing it.
///
/// `Γ'` has one identity loop per vertex and one edge per pair of edge-ends
/// meeting at a common vertex, where `A − λ` is read as `H_α` plus a loop of
/// weight `−λ` at every vertex: the pair `(e, e')` with `e ∈ E_v`,
/// `e' ∈ E_w`, `r_v(e) = r_w(e')` contributes `−α_{v,e} conj(α_{w,e'}) / R²`.
pub fn shift_square_transform(
    g: &WeightedGraph,
    lambda: Complex64,
    radius: f64,
) -> Result<(LinearOperator, WeightedGraph)> {
    let h = laplace_type_operator(g);
    let transform = shift_square_operator(&h, lambda, radius)?;

    let graph = &g.graph;
    let n = graph.vertex_count();
    // edge-ends arriving at each vertex u: (start vertex, weight at start)
    let mut arriving: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); n];
    for v in 0..n {
        for &e in graph.incident(v) {
            arriving[graph.other_end(e, v)].push((v, g.weight_at(e, v)));
        }
        arriving[v].push((v, -lambda));
    }
    let scale = -1.0 / (radius * radius);
    let mut prime = Multigraph::new(n);
    let mut weights = Vec::new();
    for v in 0..n {
        prime.add_edge(v, v, None);
        weights.push(EdgeWeight::symmetric(1.0));
    }
    for ends in &arriving {
        for (i, &(v, alpha)) in ends.iter().enumerate() {
            for (j, &(w, beta)) in ends.iter().enumerate() {
                if v == w && i <= j {
                    // the pairs (i, j) and (j, i) merge into one real loop
                    let z = alpha * beta.conj() * scale;
                    let re = if i == j { z.re } else { 2.0 * z.re };
                    prime.add_edge(v, v, None);
                    weights.push(EdgeWeight::symmetric(re));
                } else if v != w && i < j {
                    let z = alpha * beta.conj() * scale;
                    prime.add_edge(v, w, None);
                    weights.push(EdgeWeight {
                        at_u: z,
                        at_v: z.conj(),
                    });
                }
            }
        }
    }
    let realized = WeightedGraph::new(prime, weights)?;
    Ok((transform, realized))
}
