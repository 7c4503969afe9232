//! Dense symmetric linear algebra for small matrices (dimension <= ~8).
//!
//! [`SymMatrix`] stores the lower triangle only, so asymmetry is
//! unrepresentable. The eigensolver is a cyclic Jacobi sweep: for matrices
//! this small it is robust, dependency-free, and — with a fixed sweep order
//! and a fixed eigenvector sign convention — bit-deterministic across runs,
//! which keeps splits and JSON outputs reproducible.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Relative tolerance on the off-diagonal mass at which a sweep stops.
const JACOBI_TOL: f64 = 1e-14;
/// Sweep cap; non-convergence on n <= 8 signals a bug, not an input problem.
const JACOBI_MAX_SWEEPS: usize = 100;

/// Symmetric matrix with packed lower-triangle storage.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SymMatrixWire", into = "SymMatrixWire")]
pub struct SymMatrix {
    n: usize,
    lower: Vec<f64>,
}

/// Wire form: `{"n": k, "rows": [[...], ...]}`, full square.
/// Symmetry is validated on load (tolerance `1e-12` relative to the largest
/// entry) and the matrix is then symmetrized.
#[derive(Serialize, Deserialize)]
struct SymMatrixWire {
    n: usize,
    rows: Vec<Vec<f64>>,
}

impl TryFrom<SymMatrixWire> for SymMatrix {
    type Error = Error;
    fn try_from(w: SymMatrixWire) -> Result<Self> {
        SymMatrix::from_rows(w.n, &w.rows)
    }
}

impl From<SymMatrix> for SymMatrixWire {
    fn from(m: SymMatrix) -> Self {
        SymMatrixWire { n: m.n, rows: m.to_rows() }
    }
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "dimension must be at least 1");
        SymMatrix { n, lower: vec![0.0; n * (n + 1) / 2] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Validates shape, finiteness, and symmetry, then symmetrizes.
    pub fn from_rows(n: usize, rows: &[Vec<f64>]) -> Result<Self> {
        if rows.len() != n {
            return Err(Error::BadShape { expected: n, got: rows.len() });
        }
        for row in rows {
            if row.len() != n {
                return Err(Error::BadShape { expected: n, got: row.len() });
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite { what: "matrix entry" });
            }
        }
        let scale = rows
            .iter()
            .flatten()
            .fold(0.0f64, |acc, v| acc.max(v.abs()))
            .max(1.0);
        let mut max_asym = 0.0f64;
        for i in 0..n {
            for j in 0..i {
                max_asym = max_asym.max((rows[i][j] - rows[j][i]).abs());
            }
        }
        if max_asym > 1e-12 * scale {
            return Err(Error::NotSymmetric { max_asymmetry: max_asym });
        }
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                m.set(i, j, 0.5 * (rows[i][j] + rows[j][i]));
            }
        }
        Ok(m)
    }

    /// Convenience constructor from an entry function (queried on the lower triangle).
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        r * (r + 1) / 2 + c
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.lower[self.idx(i, j)]
    }

    /// Sets the symmetric pair `(i, j)` and `(j, i)`.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let k = self.idx(i, j);
        self.lower[k] = v;
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    pub fn add(&self, other: &SymMatrix) -> SymMatrix {
        assert_eq!(self.n, other.n);
        let lower = self.lower.iter().zip(&other.lower).map(|(a, b)| a + b).collect();
        SymMatrix { n: self.n, lower }
    }

    pub fn sub(&self, other: &SymMatrix) -> SymMatrix {
        assert_eq!(self.n, other.n);
        let lower = self.lower.iter().zip(&other.lower).map(|(a, b)| a - b).collect();
        SymMatrix { n: self.n, lower }
    }

    pub fn scale(&self, s: f64) -> SymMatrix {
        SymMatrix { n: self.n, lower: self.lower.iter().map(|a| a * s).collect() }
    }

    /// sqrt of the sum of squares over the full matrix.
    pub fn frobenius_norm(&self) -> f64 {
        let mut sum = 0.0;
        for i in 0..self.n {
            for j in 0..=i {
                let v = self.get(i, j);
                sum += if i == j { v * v } else { 2.0 * v * v };
            }
        }
        sum.sqrt()
    }

    /// Induced 1-norm: maximum absolute column sum.
    pub fn induced_one_norm(&self) -> f64 {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| self.get(i, j).abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Entrywise 1-norm: sum of absolute values of all entries.
    pub fn entrywise_one_norm(&self) -> f64 {
        let mut sum = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                sum += self.get(i, j).abs();
            }
        }
        sum
    }

    /// Cyclic Jacobi eigendecomposition.
    ///
    /// Eigenvalues are returned in descending order; each eigenvector is
    /// normalized so that its largest-magnitude component (first such index on
    /// ties) is positive.
    pub fn sym_eigen(&self) -> Result<EigenDecomposition> {
        let n = self.n;
        let scale = self.frobenius_norm();
        let tol = JACOBI_TOL * scale;

        // full working copy; rotations touch both triangles
        let mut a: Vec<Vec<f64>> = self.to_rows();
        let mut q = vec![vec![0.0; n]; n];
        for (i, row) in q.iter_mut().enumerate() {
            row[i] = 1.0;
        }

        let off = |a: &Vec<Vec<f64>>| -> f64 {
            let mut s = 0.0;
            for i in 0..n {
                for j in (i + 1)..n {
                    s += 2.0 * a[i][j] * a[i][j];
                }
            }
            s.sqrt()
        };

        let mut residual = off(&a);
        let mut converged = residual <= tol;
        for _ in 0..JACOBI_MAX_SWEEPS {
            if converged {
                break;
            }
            for p in 0..n {
                for r in (p + 1)..n {
                    let apr = a[p][r];
                    if apr == 0.0 {
                        continue;
                    }
                    // rotation annihilating a[p][r]
                    let theta = 0.5 * (a[r][r] - a[p][p]) / apr;
                    let t = if theta == 0.0 {
                        1.0
                    } else {
                        let t = 1.0 / (theta.abs() + (1.0 + theta * theta).sqrt());
                        if theta < 0.0 {
                            -t
                        } else {
                            t
                        }
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;

                    for k in 0..n {
                        let akp = a[k][p];
                        let akr = a[k][r];
                        a[k][p] = c * akp - s * akr;
                        a[k][r] = s * akp + c * akr;
                    }
                    for k in 0..n {
                        let apk = a[p][k];
                        let ark = a[r][k];
                        a[p][k] = c * apk - s * ark;
                        a[r][k] = s * apk + c * ark;
                    }
                    a[p][r] = 0.0;
                    a[r][p] = 0.0;
                    for row in q.iter_mut() {
                        let qp = row[p];
                        let qr = row[r];
                        row[p] = c * qp - s * qr;
                        row[r] = s * qp + c * qr;
                    }
                }
            }
            residual = off(&a);
            converged = residual <= tol;
        }
        if !converged {
            return Err(Error::NoConvergence { residual });
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| a[j][j].partial_cmp(&a[i][i]).expect("finite eigenvalues"));

        let values: Vec<f64> = order.iter().map(|&i| a[i][i]).collect();
        let mut vectors: Vec<Vec<f64>> = order
            .iter()
            .map(|&col| (0..n).map(|row| q[row][col]).collect())
            .collect();
        for v in &mut vectors {
            let mut best = 0;
            for (i, x) in v.iter().enumerate() {
                if x.abs() > v[best].abs() {
                    best = i;
                }
            }
            if v[best] < 0.0 {
                for x in v.iter_mut() {
                    *x = -*x;
                }
            }
        }
        Ok(EigenDecomposition { values, vectors })
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        let eig = self.sym_eigen()?;
        Ok(*eig.values.last().expect("n >= 1"))
    }

    /// Nearest PSD matrix in Frobenius norm: negative eigenvalues clipped to zero.
    pub fn psd_project(&self) -> Result<SymMatrix> {
        let eig = self.sym_eigen()?;
        let mut out = SymMatrix::zeros(self.n);
        for (lambda, v) in eig.values.iter().zip(&eig.vectors) {
            if *lambda > 0.0 {
                out.add_outer(*lambda, v);
            }
        }
        Ok(out)
    }

    /// Accumulates `scale * v v^T` into the matrix.
    pub(crate) fn add_outer(&mut self, scale: f64, v: &[f64]) {
        assert_eq!(v.len(), self.n);
        for i in 0..self.n {
            for j in 0..=i {
                let k = self.idx(i, j);
                self.lower[k] += scale * v[i] * v[j];
            }
        }
    }
}

/// Result of [`SymMatrix::sym_eigen`]: `values` descending, `vectors[i]`
/// the orthonormal eigenvector paired with `values[i]`.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

impl EigenDecomposition {
    /// Frobenius residual of `M - Q diag(values) Q^T`.
    pub fn reconstruction_residual(&self, m: &SymMatrix) -> f64 {
        let n = m.n();
        let mut rec = SymMatrix::zeros(n);
        for (lambda, v) in self.values.iter().zip(&self.vectors) {
            rec.add_outer(*lambda, v);
        }
        rec.sub(m).frobenius_norm()
    }

    /// Frobenius norm of `Q^T Q - I`.
    pub fn orthonormality_residual(&self) -> f64 {
        let n = self.values.len();
        let mut sum = 0.0;
        for i in 0..n {
            for j in 0..n {
                let dot: f64 = self.vectors[i]
                    .iter()
                    .zip(&self.vectors[j])
                    .map(|(a, b)| a * b)
                    .sum();
                let target = if i == j { 1.0 } else { 0.0 };
                sum += (dot - target) * (dot - target);
            }
        }
        sum.sqrt()
    }
}
