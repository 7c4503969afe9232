//! Mixed-monotone decomposition functions `g(x, y) = q(x) - r(y)`.
//!
//! A valid decomposition of `p` satisfies three properties: `p` is embedded
//! on the diagonal (`q - r = p`), `q` is nondecreasing, and `r` is
//! nondecreasing (so `g` decreases in its second argument). The polynomial
//! construction integrates a PSD split of the derivative's Gram family;
//! nonnegativity of `q'` and `r'` is certified by the PSD witness matrices,
//! not by sampling. The Jacobian-bound construction
//! `g(x, y) = p(x) + L (x - y)` is the classical domain-local alternative
//! used for tightness comparisons.

use crate::gram::{quadratic_form_poly, GramParam};
use crate::linalg::SymMatrix;
use crate::polynomial::Polynomial;
use crate::psd_split::{best_psd_gram, compute_split, SplitMethod};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// A closed interval with finite bounds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "(f64, f64)", into = "(f64, f64)")]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl TryFrom<(f64, f64)> for Interval {
    type Error = Error;
    fn try_from((lo, hi): (f64, f64)) -> Result<Self> {
        Interval::new(lo, hi)
    }
}

impl From<Interval> for (f64, f64) {
    fn from(i: Interval) -> Self {
        (i.lo, i.hi)
    }
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::NonFinite { what: "interval bound" });
        }
        if lo > hi {
            return Err(Error::EmptyInterval { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// How a decomposition was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Method {
    #[serde(rename = "eigen")]
    Eigen,
    #[serde(rename = "sdp-frobenius")]
    SdpFrobenius,
    #[serde(rename = "sdp-one-norm")]
    SdpOneNorm,
    #[serde(rename = "sdp-one-norm-entrywise")]
    SdpOneNormEntrywise,
    /// Externally supplied coefficients with recomputed PSD witnesses.
    #[serde(rename = "reference")]
    Reference,
}

impl From<SplitMethod> for Method {
    fn from(m: SplitMethod) -> Self {
        match m {
            SplitMethod::Eigen => Method::Eigen,
            SplitMethod::SdpFrobenius => Method::SdpFrobenius,
            SplitMethod::SdpOneNorm => Method::SdpOneNorm,
            SplitMethod::SdpOneNormEntrywise => Method::SdpOneNormEntrywise,
        }
    }
}

/// A polynomial decomposition function with PSD nonnegativity witnesses.
#[derive(Clone, Debug, Serialize)]
pub struct DecompositionFunction {
    pub method: Method,
    pub q: Polynomial,
    pub r: Polynomial,
    pub alpha: Vec<f64>,
    #[serde(rename = "U")]
    pub witness_u: SymMatrix,
    #[serde(rename = "V")]
    pub witness_v: SymMatrix,
    #[serde(skip)]
    pub source: Polynomial,
    pub cap_reached: bool,
}

impl DecompositionFunction {
    /// `g(x, y) = q(x) - r(y)`.
    pub fn evaluate(&self, x: f64, y: f64) -> f64 {
        self.q.eval(x) - self.r.eval(y)
    }

    /// Wraps externally supplied `(q, r)` coefficients for `p`, attaching PSD
    /// witnesses found by maximizing the minimum eigenvalue over each Gram
    /// family. Fails if the embedding is broken, `r(0) != 0`, or either
    /// derivative admits no PSD Gram matrix within tolerance.
    pub fn from_polynomials(p: &Polynomial, q: Polynomial, r: Polynomial) -> Result<Self> {
        let diff = q.sub(&r);
        for k in 0..=diff.degree().max(p.degree()) {
            let err = (diff.coeff(k) - p.coeff(k)).abs();
            if err > 1e-8 * p.coeff(k).abs().max(1.0) {
                return Err(Error::Invalid("q - r does not reproduce p"));
            }
        }
        if r.coeff(0) != 0.0 {
            return Err(Error::Invalid("r must have zero constant term"));
        }
        let witness = |side: &Polynomial| -> Result<SymMatrix> {
            let gp = GramParam::new(&side.derivative());
            let (_, matrix, min_eig) = best_psd_gram(&gp)?;
            if min_eig < -1e-8 * matrix.frobenius_norm().max(1.0) {
                return Err(Error::NotPsd { min_eig });
            }
            Ok(matrix)
        };
        Ok(DecompositionFunction {
            method: Method::Reference,
            witness_u: witness(&q)?,
            witness_v: witness(&r)?,
            alpha: Vec::new(),
            q,
            r,
            source: p.clone(),
            cap_reached: false,
        })
    }
}

/// Builds a global decomposition of `p`: split the derivative's Gram family,
/// then integrate (`q` absorbs `p(0)`, `r` has zero constant term).
pub fn decompose(p: &Polynomial, method: SplitMethod) -> Result<DecompositionFunction> {
    let gp = GramParam::new(&p.derivative());
    let split = compute_split(&gp, method)?;
    let q = quadratic_form_poly(&split.u).antiderivative(p.eval(0.0));
    let r = quadratic_form_poly(&split.v).antiderivative(0.0);
    Ok(DecompositionFunction {
        method: split.method.into(),
        q,
        r,
        alpha: split.alpha,
        witness_u: split.u,
        witness_v: split.v,
        source: p.clone(),
        cap_reached: split.cap_reached,
    })
}

/// `g(x, y) = p(x) + L (x - y)` with `L` bounding `|p'|` on a domain.
#[derive(Clone, Debug, Serialize)]
pub struct JacobianDecomposition {
    pub p: Polynomial,
    pub l: f64,
    pub domain: Interval,
}

impl JacobianDecomposition {
    pub fn evaluate(&self, x: f64, y: f64) -> f64 {
        self.p.eval(x) + self.l * (x - y)
    }
}

/// Derivative bound `L = max |p'|` over the domain, taken over the domain
/// endpoints, the sign-change roots of `p''`, and a dense scan grid (the
/// grid catches nothing new analytically — an interior maximum of `|p'|`
/// needs a sign change of `p''` — but keeps the bound safe against missed
/// tangential roots).
pub fn jacobian_decomposition(p: &Polynomial, domain: Interval) -> JacobianDecomposition {
    let pprime = p.derivative();
    let mut candidates = vec![domain.lo(), domain.hi()];
    let psecond = pprime.derivative();
    if !psecond.is_zero() {
        candidates.extend(real_roots_in_interval(&psecond, domain));
    }
    let mut l = candidates
        .iter()
        .map(|&x| pprime.eval(x).abs())
        .fold(0.0, f64::max);
    for i in 0..=SCAN_CELLS {
        let x = domain.lo() + domain.width() * i as f64 / SCAN_CELLS as f64;
        l = l.max(pprime.eval(x).abs());
    }
    JacobianDecomposition { p: p.clone(), l, domain }
}

const SCAN_CELLS: usize = 4096;

/// All sign-change roots of `p` inside the domain, located by bisection on a
/// uniform 4096-cell scan and deduplicated within `1e-8`. Roots of even
/// multiplicity (no sign change) are not reported.
pub fn real_roots_in_interval(p: &Polynomial, domain: Interval) -> Vec<f64> {
    assert!(!p.is_zero(), "root isolation needs a nonzero polynomial");
    let (lo, hi) = (domain.lo(), domain.hi());
    if lo == hi {
        return if p.eval(lo) == 0.0 { vec![lo] } else { Vec::new() };
    }
    let mut roots = Vec::new();
    let step = (hi - lo) / SCAN_CELLS as f64;
    let mut x0 = lo;
    let mut f0 = p.eval(x0);
    for i in 1..=SCAN_CELLS {
        let x1 = if i == SCAN_CELLS { hi } else { lo + step * i as f64 };
        let f1 = p.eval(x1);
        if f0 == 0.0 {
            roots.push(x0);
        } else if f1 != 0.0 && f0.signum() != f1.signum() {
            roots.push(bisect(p, x0, x1, f0));
        }
        x0 = x1;
        f0 = f1;
    }
    if f0 == 0.0 {
        roots.push(hi);
    }
    roots.sort_by(|a, b| a.partial_cmp(b).expect("finite roots"));
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-8);
    roots
}

fn bisect(p: &Polynomial, mut a: f64, mut b: f64, fa: f64) -> f64 {
    let mut sign_a = fa.signum();
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break; // interval at floating resolution
        }
        let fm = p.eval(mid);
        if fm == 0.0 || fm.abs() <= 1e-10 && (b - a) <= 1e-12 * mid.abs().max(1.0) {
            return mid;
        }
        if fm.signum() == sign_a {
            a = mid;
            sign_a = fm.signum();
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

/// Per-property validation outcome for a decomposition function.
#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    /// Max over coefficients of `|q_k - r_k - p_k| / max(1, |p_k|)`.
    pub embedding_residual: f64,
    /// Min of `q'` over 10^4 samples in [-10, 10].
    pub q_prime_sample_min: f64,
    /// Min of `r'` over the same samples.
    pub r_prime_sample_min: f64,
    pub witness_u_min_eig: f64,
    pub witness_v_min_eig: f64,
    pub embedding_ok: bool,
    pub increasing_ok: bool,
    pub decreasing_ok: bool,
}

impl ValidationReport {
    pub fn pass(&self) -> bool {
        self.embedding_ok && self.increasing_ok && self.decreasing_ok
    }
}

const VALIDATE_SAMPLES: usize = 10_000;

/// Checks the three decomposition properties: exact embedding, `q'` globally
/// nonnegative, `r'` globally nonnegative. Nonnegativity combines a dense
/// sample minimum with the witness matrix's minimum eigenvalue.
pub fn validate(df: &DecompositionFunction) -> Result<ValidationReport> {
    let p = &df.source;
    let diff = df.q.sub(&df.r);
    let mut embedding_residual = 0.0f64;
    for k in 0..=diff.degree().max(p.degree()) {
        let res = (diff.coeff(k) - p.coeff(k)).abs() / p.coeff(k).abs().max(1.0);
        embedding_residual = embedding_residual.max(res);
    }

    let sample_min = |poly: &Polynomial| -> f64 {
        let mut min = f64::INFINITY;
        for i in 0..VALIDATE_SAMPLES {
            let x = -10.0 + 20.0 * i as f64 / (VALIDATE_SAMPLES - 1) as f64;
            min = min.min(poly.eval(x));
        }
        min
    };
    let q_prime_sample_min = sample_min(&df.q.derivative());
    let r_prime_sample_min = sample_min(&df.r.derivative());
    let witness_u_min_eig = df.witness_u.min_eigenvalue()?;
    let witness_v_min_eig = df.witness_v.min_eigenvalue()?;

    let psd_ok = |min_eig: f64, m: &SymMatrix| min_eig >= -1e-8 * m.frobenius_norm().max(1.0);
    Ok(ValidationReport {
        embedding_residual,
        q_prime_sample_min,
        r_prime_sample_min,
        witness_u_min_eig,
        witness_v_min_eig,
        embedding_ok: embedding_residual <= 1e-8,
        increasing_ok: q_prime_sample_min >= -1e-8 && psd_ok(witness_u_min_eig, &df.witness_u),
        decreasing_ok: r_prime_sample_min >= -1e-8 && psd_ok(witness_v_min_eig, &df.witness_v),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[f64]) -> Polynomial {
        Polynomial::new(c.to_vec())
    }

    fn p1() -> Polynomial {
        poly(&[1.0, 0.0, 1.0])
    }

    #[test]
    fn decompose_quadratic_reproduces_cubic_pair() {
        for method in [SplitMethod::SdpFrobenius, SplitMethod::Eigen] {
            let df = decompose(&p1(), method).unwrap();
            let want_q = [1.0, 0.5, 0.5, 1.0 / 6.0];
            let want_r = [0.0, 0.5, -0.5, 1.0 / 6.0];
            for (k, w) in want_q.iter().enumerate() {
                assert!((df.q.coeff(k) - w).abs() < 1e-7, "{method:?} q[{k}]");
            }
            for (k, w) in want_r.iter().enumerate() {
                assert!((df.r.coeff(k) - w).abs() < 1e-7, "{method:?} r[{k}]");
            }
        }
    }

    #[test]
    fn decompose_quadratic_dynamics_matches_frozen_split() {
        // derivative Gram [[0.7, 0.32], [0.32, 0]], eigenvalues (0.7 +/- sqrt(0.8996))/2
        let f = poly(&[0.0, 0.7, 0.32]);
        let df = decompose(&f, SplitMethod::SdpFrobenius).unwrap();
        let want_q = [0.0, 0.716273156127985, 0.2780846099203637, 0.03598769064239656];
        let want_r = [0.0, 0.016273156127985362, -0.04191539007963628, 0.03598769064239656];
        for (k, w) in want_q.iter().enumerate() {
            assert!((df.q.coeff(k) - w).abs() < 1e-7, "q[{k}] = {}", df.q.coeff(k));
        }
        for (k, w) in want_r.iter().enumerate() {
            assert!((df.r.coeff(k) - w).abs() < 1e-7, "r[{k}] = {}", df.r.coeff(k));
        }
    }

    #[test]
    fn decompose_constant() {
        let df = decompose(&Polynomial::constant(5.0), SplitMethod::SdpFrobenius).unwrap();
        assert_eq!(df.q, Polynomial::constant(5.0));
        assert!(df.r.is_zero());
        assert_eq!(df.evaluate(3.0, -4.0), 5.0);
    }

    #[test]
    fn evaluate_examples() {
        let df = decompose(&p1(), SplitMethod::Eigen).unwrap();
        for x in [-2.0, 0.0, 3.0] {
            assert!((df.evaluate(x, x) - p1().eval(x)).abs() < 1e-9);
        }
        assert!((df.evaluate(1.0, -0.5) - 2.5625).abs() < 1e-9);
    }

    #[test]
    fn evaluate_printed_coefficients() {
        // direct summation oracle against the Horner-based evaluate
        let q = poly(&[0.0, 0.7163, 0.2781, 0.03599]);
        let r = poly(&[0.0, 0.0163, -0.0419, 0.03599]);
        let f = poly(&[0.0, 0.7, 0.32]);
        let df = DecompositionFunction::from_polynomials(&f, q, r).unwrap();
        let (x, y) = (0.1, -0.1);
        let direct: f64 = (0.7163 * x + 0.2781 * x * x + 0.03599 * x * x * x)
            - (0.0163 * y - 0.0419 * y * y + 0.03599 * y * y * y);
        assert!((direct - 0.07653198).abs() < 1e-12);
        assert!((df.evaluate(x, y) - direct).abs() < 1e-12);
    }

    #[test]
    fn jacobian_examples() {
        let domain = Interval::new(-2.0, 2.0).unwrap();
        let jd = jacobian_decomposition(&p1(), domain);
        assert!((jd.l - 4.0).abs() < 1e-9);
        assert_eq!(jd.evaluate(1.0, -0.5), p1().eval(1.0) + 4.0 * 1.5);

        let jd = jacobian_decomposition(&Polynomial::constant(3.0), domain);
        assert_eq!(jd.l, 0.0);

        let f = poly(&[0.0, 0.7, 0.32]);
        let jd = jacobian_decomposition(&f, Interval::new(0.0, 1.0).unwrap());
        assert!((jd.l - 1.34).abs() < 1e-12);
    }

    #[test]
    fn jacobian_bound_dominates_derivative_on_domain() {
        let p = poly(&[0.3, -1.0, 0.0, 2.0, -0.5]);
        let domain = Interval::new(-1.5, 2.0).unwrap();
        let jd = jacobian_decomposition(&p, domain);
        let pp = p.derivative();
        for i in 0..10_000 {
            let x = domain.lo() + domain.width() * i as f64 / 9999.0;
            assert!(jd.l - pp.eval(x).abs() >= -1e-9);
        }
    }

    #[test]
    fn roots_examples() {
        let domain = Interval::new(-2.0, 2.0).unwrap();
        let roots = real_roots_in_interval(&poly(&[-1.0, 0.0, 1.0]), domain);
        assert_eq!(roots.len(), 2);
        assert!((roots[0] + 1.0).abs() < 1e-9 && (roots[1] - 1.0).abs() < 1e-9);

        let roots = real_roots_in_interval(&poly(&[0.0, -7.5, 0.0, 17.5]), domain);
        let s = (3.0f64 / 7.0).sqrt();
        assert_eq!(roots.len(), 3);
        assert!((roots[0] + s).abs() < 1e-9);
        assert!(roots[1].abs() < 1e-9);
        assert!((roots[2] - s).abs() < 1e-9);

        assert!(real_roots_in_interval(&p1(), domain).is_empty());
    }

    #[test]
    fn validate_passes_on_construction_and_fails_on_tampering() {
        let df = decompose(&p1(), SplitMethod::SdpFrobenius).unwrap();
        let report = validate(&df).unwrap();
        assert!(report.pass(), "{report:?}");

        let mut tampered = df.clone();
        tampered.r = tampered.r.scale(1.1);
        let report = validate(&tampered).unwrap();
        assert!(!report.embedding_ok);
        assert!(!report.pass());
    }

    #[test]
    fn from_polynomials_rejects_broken_embedding() {
        let q = poly(&[1.0, 1.0]);
        let r = poly(&[0.0, 0.5]);
        assert!(DecompositionFunction::from_polynomials(&p1(), q, r).is_err());
        // nonzero r constant term
        let q = poly(&[1.0, 0.0, 1.0, 1.0]);
        let r = poly(&[0.5, 0.0, 0.0, 1.0]);
        assert!(DecompositionFunction::from_polynomials(&p1(), q, r).is_err());
    }

    #[test]
    fn interval_validation() {
        assert!(Interval::new(1.0, -1.0).is_err());
        assert!(Interval::new(f64::NEG_INFINITY, 0.0).is_err());
        let i = Interval::new(-1.0, 2.0).unwrap();
        assert_eq!(i.width(), 3.0);
        assert!(i.contains(0.0) && !i.contains(2.5));
    }
}
