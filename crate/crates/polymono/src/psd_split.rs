//! Splitting a symmetric matrix into a difference of PSD matrices.
//!
//! Three layers:
//!
//! - [`eigen_split`]: the constructive split `U = sum(max(l,0) u u^T)`,
//!   `V = -sum(min(l,0) u u^T)`. Always feasible, orthogonal ranges.
//! - [`solve_split_sdp`]: minimizes an objective over the whole family
//!   `G + L(alpha) = U - V`, `U, V >= 0`. The inner problem at fixed `alpha`
//!   is solved by ADMM (Frobenius objective: both prox maps are closed-form
//!   eigenvalue shrinkages) or projected subgradient (one-norm objectives);
//!   the outer problem over `alpha` by Nelder–Mead with fixed restarts.
//! - [`certify_monotone`]: maximizes the minimum eigenvalue of
//!   `+/-(G + L(alpha))`; a nonnegative optimum certifies that the
//!   antiderivative is globally monotone. Absence of a certificate is not
//!   a proof of non-monotonicity.
//!
//! For the Frobenius objective the inner optimum is exactly the eigen split
//! (Weyl: any feasible `U` has eigenvalues at least the clipped eigenvalues
//! of `A`), so ADMM warm-started there settles in a handful of iterations;
//! it is kept as the solve path so all objectives share one architecture.

use crate::gram::GramParam;
use crate::linalg::SymMatrix;
use crate::optim::{nelder_mead, nelder_mead_with_restarts};
use crate::{Error, Result};
use serde::Serialize;

/// ADMM settings for the smooth (Frobenius) inner problem.
const ADMM_RHO: f64 = 1.0;
const ADMM_TOL: f64 = 1e-9;
const ADMM_CAP: usize = 20_000;

/// Projected-subgradient settings for the nonsmooth one-norm inner problems.
const SUBGRAD_CAP: usize = 50_000;
/// Reduced cap used while the outer search only needs consistent estimates.
const SUBGRAD_SEARCH_CAP: usize = 4_000;
/// Iterations without improvement after which the best iterate has settled.
const SUBGRAD_STALL: usize = 4_000;

/// Outer Nelder–Mead: restart offset and convergence diameter.
const OUTER_RESTART: f64 = 1.0;
const OUTER_DIAMETER_TOL: f64 = 1e-7;
const OUTER_MAX_ITERS: usize = 400;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Objective {
    /// `||U||_F + ||V||_F`
    #[serde(rename = "frobenius")]
    Frobenius,
    /// Induced 1-norms (max absolute column sums)
    #[serde(rename = "one-norm")]
    OneNorm,
    /// Entrywise absolute sums; exposed for experimentation
    #[serde(rename = "one-norm-entrywise")]
    OneNormEntrywise,
}

impl Objective {
    fn value(&self, u: &SymMatrix, v: &SymMatrix) -> f64 {
        match self {
            Objective::Frobenius => u.frobenius_norm() + v.frobenius_norm(),
            Objective::OneNorm => u.induced_one_norm() + v.induced_one_norm(),
            Objective::OneNormEntrywise => u.entrywise_one_norm() + v.entrywise_one_norm(),
        }
    }

    /// Relative objective resolution of the inner solver; improvements below
    /// this are ties, broken in favour of the canonical `alpha = 0`.
    fn resolution(&self) -> f64 {
        match self {
            Objective::Frobenius => 1e-9,
            Objective::OneNorm | Objective::OneNormEntrywise => 1e-3,
        }
    }
}

/// How a split was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SplitMethod {
    #[serde(rename = "eigen")]
    Eigen,
    #[serde(rename = "sdp-frobenius")]
    SdpFrobenius,
    #[serde(rename = "sdp-one-norm")]
    SdpOneNorm,
    #[serde(rename = "sdp-one-norm-entrywise")]
    SdpOneNormEntrywise,
}

impl SplitMethod {
    pub fn objective(self) -> Option<Objective> {
        match self {
            SplitMethod::Eigen => None,
            SplitMethod::SdpFrobenius => Some(Objective::Frobenius),
            SplitMethod::SdpOneNorm => Some(Objective::OneNorm),
            SplitMethod::SdpOneNormEntrywise => Some(Objective::OneNormEntrywise),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SplitMethod::Eigen => "eigen",
            SplitMethod::SdpFrobenius => "sdp-frobenius",
            SplitMethod::SdpOneNorm => "sdp-one-norm",
            SplitMethod::SdpOneNormEntrywise => "sdp-one-norm-entrywise",
        }
    }
}

/// A certified difference-of-PSD split of `G + L(alpha)`.
#[derive(Clone, Debug, Serialize)]
pub struct PsdSplit {
    pub alpha: Vec<f64>,
    pub u: SymMatrix,
    pub v: SymMatrix,
    /// `||(U - V) - (G + L(alpha))||_F`
    pub feas_residual: f64,
    pub min_eig_u: f64,
    pub min_eig_v: f64,
    pub objective_value: f64,
    pub method: SplitMethod,
    /// Set when an inner iteration cap was exhausted; the split is still the
    /// best one found and satisfies the feasibility/PSD invariants.
    pub cap_reached: bool,
}

/// Constructive split from the eigendecomposition: `U` collects the
/// nonnegative eigenvalue terms, `V` the flipped negative ones. The two
/// ranges are orthogonal, so `||U||_F^2 + ||V||_F^2 = ||A||_F^2`.
pub fn eigen_split(a: &SymMatrix) -> Result<(SymMatrix, SymMatrix)> {
    let eig = a.sym_eigen()?;
    let mut u = SymMatrix::zeros(a.n());
    let mut v = SymMatrix::zeros(a.n());
    for (lambda, vec) in eig.values.iter().zip(&eig.vectors) {
        if *lambda > 0.0 {
            u.add_outer(*lambda, vec);
        } else if *lambda < 0.0 {
            v.add_outer(-*lambda, vec);
        }
    }
    Ok((u, v))
}

/// Shifts both sides of a split by a PSD matrix `R`; the difference is
/// preserved exactly. Rejects non-PSD shifts.
pub fn shift_split(
    u: &SymMatrix,
    v: &SymMatrix,
    r: &SymMatrix,
) -> Result<(SymMatrix, SymMatrix)> {
    let min_eig = r.min_eigenvalue()?;
    if min_eig < -1e-10 {
        return Err(Error::NotPsd { min_eig });
    }
    Ok((u.add(r), v.add(r)))
}

/// Inner solve outcome before packaging.
struct InnerSplit {
    u: SymMatrix,
    v: SymMatrix,
    objective: f64,
    cap_reached: bool,
}

/// ADMM for `min ||U||_F + ||V||_F` s.t. `U - V = A`, both PSD.
///
/// Scaled form with `rho = 1`; both prox maps are "project to the PSD cone,
/// then shrink the Frobenius norm by `1/rho`", evaluated on eigenvalues.
fn admm_frobenius(a: &SymMatrix) -> Result<InnerSplit> {
    let scale = a.frobenius_norm().max(1.0);
    if a.frobenius_norm() == 0.0 {
        let z = SymMatrix::zeros(a.n());
        return Ok(InnerSplit { u: z.clone(), v: z, objective: 0.0, cap_reached: false });
    }

    let prox = |m: &SymMatrix| -> Result<SymMatrix> {
        let p = m.psd_project()?;
        let norm = p.frobenius_norm();
        let shrink = 1.0 / ADMM_RHO;
        if norm <= shrink {
            Ok(SymMatrix::zeros(m.n()))
        } else {
            Ok(p.scale(1.0 - shrink / norm))
        }
    };

    let (mut u, mut v) = eigen_split(a)?;
    let mut w = SymMatrix::zeros(a.n());
    let mut cap_reached = true;
    for _ in 0..ADMM_CAP {
        u = prox(&v.add(a).sub(&w))?;
        let v_old = v.clone();
        v = prox(&u.sub(a).add(&w))?;
        let primal = u.sub(&v).sub(a);
        w = w.add(&primal);
        let r_primal = primal.frobenius_norm();
        let r_dual = ADMM_RHO * v.sub(&v_old).frobenius_norm();
        if r_primal <= ADMM_TOL * scale && r_dual <= ADMM_TOL * scale {
            cap_reached = false;
            break;
        }
    }
    let objective = Objective::Frobenius.value(&u, &v);
    Ok(InnerSplit { u, v, objective, cap_reached })
}

/// Projected subgradient for the one-norm objectives, with diminishing steps
/// `t0/sqrt(k)` and best-feasible-iterate tracking. Starts from the eigen
/// split, so the result is never worse than the constructive one.
fn subgradient_one_norm(a: &SymMatrix, objective: Objective, cap: usize) -> Result<InnerSplit> {
    let n = a.n();
    let scale = a.frobenius_norm().max(1.0);
    if a.frobenius_norm() == 0.0 {
        let z = SymMatrix::zeros(n);
        return Ok(InnerSplit { u: z.clone(), v: z, objective: 0.0, cap_reached: false });
    }

    // split-preserving feasibility restoration: exact affine correction,
    // then PSD projection, twice; ends PSD with a small affine residual
    let restore = |u: &mut SymMatrix, v: &mut SymMatrix| -> Result<f64> {
        for _ in 0..2 {
            let d = u.sub(v).sub(a).scale(0.5);
            *u = u.sub(&d).psd_project()?;
            *v = v.add(&d).psd_project()?;
        }
        Ok(u.sub(v).sub(a).frobenius_norm())
    };

    let (mut u, mut v) = eigen_split(a)?;
    let mut best_u = u.clone();
    let mut best_v = v.clone();
    let mut best_obj = objective.value(&u, &v);
    let mut last_improvement = 0usize;
    let t0 = 0.05 * scale;
    let mut cap_reached = true;

    for k in 1..=cap {
        let step = t0 / (k as f64).sqrt();
        let gu = one_norm_subgradient(&u, objective);
        let gv = one_norm_subgradient(&v, objective);
        u = u.sub(&gu.scale(step));
        v = v.sub(&gv.scale(step));
        let feas = restore(&mut u, &mut v)?;
        if feas <= 1e-8 * scale {
            let obj = objective.value(&u, &v);
            if obj < best_obj - 1e-10 * scale {
                best_obj = obj;
                best_u = u.clone();
                best_v = v.clone();
                last_improvement = k;
            }
        }
        if k >= 2 * SUBGRAD_STALL && k - last_improvement >= SUBGRAD_STALL {
            cap_reached = false;
            break;
        }
    }
    Ok(InnerSplit { u: best_u, v: best_v, objective: best_obj, cap_reached })
}

/// A subgradient of the chosen norm at `m`, symmetrized.
fn one_norm_subgradient(m: &SymMatrix, objective: Objective) -> SymMatrix {
    let n = m.n();
    match objective {
        Objective::OneNormEntrywise => SymMatrix::from_fn(n, |i, j| {
            let v = m.get(i, j);
            let s = if v > 0.0 { 1.0 } else if v < 0.0 { -1.0 } else { 0.0 };
            if i == j { s } else { 2.0 * s }
        }),
        Objective::OneNorm => {
            // steepest column: put signs down that column, symmetrized
            let mut best_col = 0;
            let mut best_sum = -1.0;
            for j in 0..n {
                let sum: f64 = (0..n).map(|i| m.get(i, j).abs()).sum();
                if sum > best_sum {
                    best_sum = sum;
                    best_col = j;
                }
            }
            let mut g = SymMatrix::zeros(n);
            for i in 0..n {
                let v = m.get(i, best_col);
                let s = if v > 0.0 { 1.0 } else if v < 0.0 { -1.0 } else { 0.0 };
                if i == best_col {
                    g.set(i, best_col, s);
                } else {
                    g.set(i, best_col, 0.5 * s);
                }
            }
            g
        }
        Objective::Frobenius => unreachable!("frobenius uses the ADMM path"),
    }
}

fn inner_solve(a: &SymMatrix, objective: Objective, search_phase: bool) -> Result<InnerSplit> {
    match objective {
        Objective::Frobenius => admm_frobenius(a),
        Objective::OneNorm | Objective::OneNormEntrywise => {
            let cap = if search_phase { SUBGRAD_SEARCH_CAP } else { SUBGRAD_CAP };
            subgradient_one_norm(a, objective, cap)
        }
    }
}

/// Packages a split at a given `alpha`, enforcing the never-worse-than-eigen
/// contract and the feasibility/PSD invariants by construction.
fn package(
    gp: &GramParam,
    alpha: Vec<f64>,
    inner: InnerSplit,
    method: SplitMethod,
    objective: Objective,
) -> Result<PsdSplit> {
    let a = gp.assemble(&alpha)?;
    let (eig_u, eig_v) = eigen_split(&a)?;
    let eig_obj = objective.value(&eig_u, &eig_v);

    let (mut u, mut v, mut cap_reached) = (inner.u, inner.v, inner.cap_reached);
    if inner.objective > eig_obj {
        u = eig_u;
        v = eig_v;
        cap_reached = false;
    }

    let u = u.psd_project()?;
    let v = v.psd_project()?;
    let feas_residual = u.sub(&v).sub(&a).frobenius_norm();
    let split = PsdSplit {
        min_eig_u: u.min_eigenvalue()?,
        min_eig_v: v.min_eigenvalue()?,
        objective_value: objective.value(&u, &v),
        alpha,
        u,
        v,
        feas_residual,
        method,
        cap_reached,
    };
    if split.cap_reached {
        log::warn!(
            "inner solver hit its iteration cap (feasibility residual {:e})",
            split.feas_residual
        );
    }
    Ok(split)
}

/// Optimized split over the whole Gram family.
///
/// Deterministic: fixed restarts, no randomized state. Among
/// resolution-equivalent optima the canonical `alpha = 0` is preferred.
/// The returned objective never exceeds the eigen split's objective at the
/// returned `alpha` (the eigen split is substituted if the iterative path
/// did worse).
pub fn solve_split_sdp(gp: &GramParam, objective: Objective) -> Result<PsdSplit> {
    let method = match objective {
        Objective::Frobenius => SplitMethod::SdpFrobenius,
        Objective::OneNorm => SplitMethod::SdpOneNorm,
        Objective::OneNormEntrywise => SplitMethod::SdpOneNormEntrywise,
    };
    let m = gp.dim();
    if m == 0 {
        let a = gp.assemble(&[])?;
        let inner = inner_solve(&a, objective, false)?;
        return package(gp, Vec::new(), inner, method, objective);
    }

    let mut eval = |alpha: &[f64]| -> f64 {
        match gp.assemble(alpha).and_then(|a| inner_solve(&a, objective, true)) {
            Ok(inner) => inner.objective,
            Err(_) => f64::INFINITY,
        }
    };
    let (alpha_found, _) = nelder_mead_with_restarts(
        &mut eval,
        m,
        OUTER_RESTART,
        OUTER_DIAMETER_TOL,
        OUTER_MAX_ITERS,
    );

    // full-accuracy solves at the located optimum and at the canonical origin
    let at_found = inner_solve(&gp.assemble(&alpha_found)?, objective, false)?;
    let zero = vec![0.0; m];
    let at_zero = inner_solve(&gp.assemble(&zero)?, objective, false)?;
    let tie_tol = objective.resolution() * at_found.objective.abs().max(1.0);
    if at_zero.objective <= at_found.objective + tie_tol {
        package(gp, zero, at_zero, method, objective)
    } else {
        package(gp, alpha_found, at_found, method, objective)
    }
}

/// Eigen split packaged at `alpha = 0`, reported with the Frobenius objective.
pub fn eigen_split_at_origin(gp: &GramParam) -> Result<PsdSplit> {
    let zero = vec![0.0; gp.dim()];
    let a = gp.assemble(&zero)?;
    let (u, v) = eigen_split(&a)?;
    let objective = Objective::Frobenius.value(&u, &v);
    package(
        gp,
        zero,
        InnerSplit { u, v, objective, cap_reached: false },
        SplitMethod::Eigen,
        Objective::Frobenius,
    )
}

/// Computes a split with the given method (constructive or optimized).
pub fn compute_split(gp: &GramParam, method: SplitMethod) -> Result<PsdSplit> {
    match method.objective() {
        None => eigen_split_at_origin(gp),
        Some(objective) => solve_split_sdp(gp, objective),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// An `alpha` making `G + L(alpha)` (or its negation) PSD within tolerance.
/// Sufficient for global monotonicity of the antiderivative of the
/// represented polynomial.
#[derive(Clone, Debug, Serialize)]
pub struct MonotonicityCertificate {
    pub direction: Direction,
    pub alpha: Vec<f64>,
    pub min_eig: f64,
}

/// Maximizes the minimum eigenvalue of `sign(direction) * (G + L(alpha))`.
/// Returns a certificate when the optimum is nonnegative within
/// `1e-8 * max(1, ||G + L(alpha)||_F)`; absence is NOT a proof of
/// non-monotonicity.
pub fn certify_monotone(
    gp: &GramParam,
    direction: Direction,
) -> Result<Option<MonotonicityCertificate>> {
    let sign = match direction {
        Direction::Increasing => 1.0,
        Direction::Decreasing => -1.0,
    };
    let min_eig_at = |alpha: &[f64]| -> Result<f64> {
        gp.assemble(alpha)?.scale(sign).min_eigenvalue()
    };

    let m = gp.dim();
    let alpha = if m == 0 {
        Vec::new()
    } else {
        let mut eval = |alpha: &[f64]| -> f64 {
            match min_eig_at(alpha) {
                Ok(v) => -v,
                Err(_) => f64::INFINITY,
            }
        };
        let (found, _) = nelder_mead_with_restarts(
            &mut eval,
            m,
            OUTER_RESTART,
            OUTER_DIAMETER_TOL,
            OUTER_MAX_ITERS,
        );
        // prefer the nearest integer point when it certifies at least as well
        let rounded: Vec<f64> = found.iter().map(|a| a.round()).collect();
        if min_eig_at(&rounded)? >= min_eig_at(&found)? - 1e-12 {
            rounded
        } else {
            found
        }
    };

    let matrix = gp.assemble(&alpha)?;
    let min_eig = matrix.scale(sign).min_eigenvalue()?;
    if min_eig >= -1e-8 * matrix.frobenius_norm().max(1.0) {
        Ok(Some(MonotonicityCertificate { direction, alpha, min_eig }))
    } else {
        Ok(None)
    }
}

/// Polishes an `alpha` that maximizes the minimum eigenvalue of a Gram
/// family; used to attach PSD witnesses to externally supplied coefficient
/// sets. Returns the assembled matrix and its minimum eigenvalue.
pub fn best_psd_gram(gp: &GramParam) -> Result<(Vec<f64>, SymMatrix, f64)> {
    let m = gp.dim();
    let alpha = if m == 0 {
        Vec::new()
    } else {
        let mut eval = |alpha: &[f64]| -> f64 {
            match gp.assemble(alpha).and_then(|g| g.min_eigenvalue()) {
                Ok(v) => -v,
                Err(_) => f64::INFINITY,
            }
        };
        nelder_mead(&mut eval, &vec![0.0; m], 0.5, OUTER_DIAMETER_TOL, OUTER_MAX_ITERS).0
    };
    let matrix = gp.assemble(&alpha)?;
    let min_eig = matrix.min_eigenvalue()?;
    Ok((alpha, matrix, min_eig))
}
