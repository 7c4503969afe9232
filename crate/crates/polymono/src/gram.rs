//! Gram-matrix parameterization of a polynomial.
//!
//! A polynomial `c(x)` of degree `d` equals `m(x)^T M m(x)` where
//! `m(x) = (1, x, ..., x^sigma)` and `M` ranges over an affine family
//! `G + L(alpha)`: a base matrix `G` plus the span of the symmetric matrices
//! whose quadratic form vanishes identically — exactly those whose
//! anti-diagonal sums are all zero. The family is what the PSD-split solver
//! optimizes over.

use crate::linalg::SymMatrix;
use crate::polynomial::Polynomial;
use crate::{Error, Result};

/// Monomial-vector degree for representing a polynomial of degree `d`:
/// `d/2` for even `d`, `(d+1)/2` for odd.
pub fn sigma_for_degree(d: usize) -> usize {
    d.div_ceil(2)
}

/// Base Gram matrix of `pprime`, dimension `sigma + 1`.
///
/// Convention: even coefficient `c_k` sits on the diagonal at `(k/2, k/2)`;
/// odd `c_k` is halved onto the adjacent symmetric pair
/// `((k-1)/2, (k+1)/2)`. All other entries are zero, so every
/// anti-diagonal sums to `c_k`.
pub fn base_gram(pprime: &Polynomial) -> SymMatrix {
    let sigma = sigma_for_degree(pprime.degree());
    let mut g = SymMatrix::zeros(sigma + 1);
    for (k, &c) in pprime.coeffs().iter().enumerate() {
        if k % 2 == 0 {
            g.set(k / 2, k / 2, c);
        } else {
            g.set((k - 1) / 2, (k + 1) / 2, c / 2.0);
        }
    }
    g
}

/// Canonical basis of the zero-quadratic-form space for monomial-vector
/// degree `sigma`: `(sigma+1)(sigma+2)/2 - (2*sigma+1)` matrices.
///
/// Per anti-diagonal `k`, the upper-triangle positions `(i, k-i)` with
/// `i <= k-i` are listed in increasing `i`; each consecutive pair yields one
/// basis matrix that moves weight from the earlier position to the later one
/// while keeping the anti-diagonal sum at zero:
/// `+1` on the later symmetric pair, `-1` on the earlier pair — or, when the
/// later position is the diagonal (weight counted once in the anti-diagonal
/// sum), `+1` on the earlier pair and `-2` on the diagonal.
pub fn null_basis(sigma: usize) -> Vec<SymMatrix> {
    let n = sigma + 1;
    let mut out = Vec::new();
    for k in 0..=(2 * sigma) {
        let lo = k.saturating_sub(sigma);
        let positions: Vec<(usize, usize)> = (lo..=(k / 2)).map(|i| (i, k - i)).collect();
        for pair in positions.windows(2) {
            let (i1, j1) = pair[0];
            let (i2, j2) = pair[1];
            let mut l = SymMatrix::zeros(n);
            if i2 == j2 {
                l.set(i1, j1, 1.0);
                l.set(i2, j2, -2.0);
            } else {
                l.set(i2, j2, 1.0);
                l.set(i1, j1, -1.0);
            }
            out.push(l);
        }
    }
    out
}

/// Coefficients of the quadratic form `m(x)^T M m(x)`: `c_k` is the `k`-th
/// anti-diagonal sum of `M`.
pub fn quadratic_form_poly(m: &SymMatrix) -> Polynomial {
    let n = m.n();
    let mut coeffs = vec![0.0; 2 * n - 1];
    for i in 0..n {
        for j in 0..n {
            coeffs[i + j] += m.get(i, j);
        }
    }
    Polynomial::new(coeffs)
}

/// The affine Gram family `G + L(alpha)` of a polynomial.
#[derive(Clone, Debug)]
pub struct GramParam {
    sigma: usize,
    base: SymMatrix,
    basis: Vec<SymMatrix>,
    source: Polynomial,
}

impl GramParam {
    /// Builds the family representing `pprime`. The degenerate case
    /// `pprime = 0` yields `sigma = 0`, `G = [0]`, and an empty basis.
    pub fn new(pprime: &Polynomial) -> Self {
        let sigma = sigma_for_degree(pprime.degree());
        GramParam {
            sigma,
            base: base_gram(pprime),
            basis: null_basis(sigma),
            source: pprime.clone(),
        }
    }

    pub fn sigma(&self) -> usize {
        self.sigma
    }

    pub fn base(&self) -> &SymMatrix {
        &self.base
    }

    pub fn basis(&self) -> &[SymMatrix] {
        &self.basis
    }

    /// Number of free parameters.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn source(&self) -> &Polynomial {
        &self.source
    }

    /// `G + sum(alpha_i * L_i)`.
    pub fn assemble(&self, alpha: &[f64]) -> Result<SymMatrix> {
        if alpha.len() != self.basis.len() {
            return Err(Error::DimensionMismatch {
                expected: self.basis.len(),
                got: alpha.len(),
            });
        }
        let mut m = self.base.clone();
        for (a, l) in alpha.iter().zip(&self.basis) {
            m = m.add(&l.scale(*a));
        }
        Ok(m)
    }
}
