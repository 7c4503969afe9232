//! Tightness analysis: exact envelopes, width profiles, and dominance
//! comparison between decomposition functions.

use crate::decomposition::{real_roots_in_interval, Interval};
use crate::polynomial::Polynomial;
use crate::util::format_g;
use crate::{Error, Result};
use serde::Serialize;

/// The tight two-argument envelope of `p`: minimum of `p` over `[x, y]` when
/// `x <= y`, maximum over `[y, x]` otherwise. This is the tightest possible
/// decomposition function; any valid one brackets it. Computed exactly from
/// `p` at the interval endpoints and at the sign-change roots of `p'`
/// (tangential roots of `p'` are not extrema, so they cannot move the
/// min/max).
pub fn tight_envelope(p: &Polynomial, x: f64, y: f64) -> f64 {
    if x == y {
        return p.eval(x);
    }
    let (lo, hi) = if x < y { (x, y) } else { (y, x) };
    let interval = Interval::new(lo, hi).expect("finite ordered bounds");
    let mut candidates = vec![p.eval(lo), p.eval(hi)];
    let pprime = p.derivative();
    if !pprime.is_zero() {
        candidates.extend(
            real_roots_in_interval(&pprime, interval)
                .into_iter()
                .map(|root| p.eval(root)),
        );
    }
    if x <= y {
        candidates.into_iter().fold(f64::INFINITY, f64::min)
    } else {
        candidates.into_iter().fold(f64::NEG_INFINITY, f64::max)
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct WidthRow {
    pub z: f64,
    pub g_hi: f64,
    pub g_lo: f64,
    pub width: f64,
}

/// Samples `g(z + a, z - b)` (upper) and `g(z - b, z + a)` (lower) over a
/// uniform grid.
#[derive(Clone, Debug, Serialize)]
pub struct WidthProfile {
    pub a: f64,
    pub b: f64,
    pub rows: Vec<WidthRow>,
}

impl WidthProfile {
    /// CSV with header `z,g_hi,g_lo,width`, 12 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("z,g_hi,g_lo,width\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{}\n",
                format_g(row.z, 12),
                format_g(row.g_hi, 12),
                format_g(row.g_lo, 12),
                format_g(row.width, 12),
            ));
        }
        out
    }
}

/// Builds a width profile for any decomposition evaluator. Requires
/// `z_lo < z_hi`, `n >= 2`, and `a > -b` (so the evaluated pair is ordered);
/// rejects evaluators whose upper curve dips below the lower one.
pub fn width_profile(
    g: impl Fn(f64, f64) -> f64,
    z_lo: f64,
    z_hi: f64,
    a: f64,
    b: f64,
    n: usize,
) -> Result<WidthProfile> {
    if !(z_lo.is_finite() && z_hi.is_finite() && a.is_finite() && b.is_finite()) {
        return Err(Error::NonFinite { what: "width profile parameter" });
    }
    if z_lo >= z_hi {
        return Err(Error::EmptyInterval { lo: z_lo, hi: z_hi });
    }
    if n < 2 {
        return Err(Error::Invalid("width profile needs at least 2 gridpoints"));
    }
    if a <= -b {
        return Err(Error::Invalid("offsets must satisfy a > -b"));
    }
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let z = z_lo + (z_hi - z_lo) * i as f64 / (n - 1) as f64;
        let g_hi = g(z + a, z - b);
        let g_lo = g(z - b, z + a);
        let width = g_hi - g_lo;
        if width < -1e-9 {
            return Err(Error::Invalid("evaluator is not a decomposition: negative width"));
        }
        rows.push(WidthRow { z, g_hi, g_lo, width });
    }
    Ok(WidthProfile { a, b, rows })
}

/// Row-wise dominance of profile `A` inside profile `B`.
#[derive(Clone, Debug, Serialize)]
pub struct DominanceReport {
    /// Fraction of rows with `[A.g_lo, A.g_hi]` inside `[B.g_lo, B.g_hi]`
    /// (tolerance 1e-9).
    pub fraction_inside: f64,
    /// Mean of `A.width / B.width` over rows where `B.width > 1e-12`.
    pub mean_width_ratio: Option<f64>,
    pub rows_inside: usize,
    pub rows_total: usize,
}

/// Compares two profiles built on identical grids and offsets.
pub fn compare(a: &WidthProfile, b: &WidthProfile) -> Result<DominanceReport> {
    if a.rows.len() != b.rows.len() || a.a != b.a || a.b != b.b {
        return Err(Error::GridMismatch);
    }
    let mut inside = 0usize;
    let mut ratio_sum = 0.0;
    let mut ratio_count = 0usize;
    for (ra, rb) in a.rows.iter().zip(&b.rows) {
        if (ra.z - rb.z).abs() > 1e-12 {
            return Err(Error::GridMismatch);
        }
        if ra.g_hi <= rb.g_hi + 1e-9 && ra.g_lo >= rb.g_lo - 1e-9 {
            inside += 1;
        }
        if rb.width > 1e-12 {
            ratio_sum += ra.width / rb.width;
            ratio_count += 1;
        }
    }
    Ok(DominanceReport {
        fraction_inside: inside as f64 / a.rows.len() as f64,
        mean_width_ratio: (ratio_count > 0).then(|| ratio_sum / ratio_count as f64),
        rows_inside: inside,
        rows_total: a.rows.len(),
    })
}

/// Published coefficient sets embedded as regression references: solver
/// digits legitimately differ from them, so tests compare behaviour (width
/// profiles, dominance) against these fixed decompositions.
pub mod references {
    use super::*;
    use crate::decomposition::DecompositionFunction;

    fn reference(p: &[f64], q: &[f64], r: &[f64]) -> DecompositionFunction {
        DecompositionFunction::from_polynomials(
            &Polynomial::new(p.to_vec()),
            Polynomial::new(q.to_vec()),
            Polynomial::new(r.to_vec()),
        )
        .expect("embedded reference coefficients are a valid decomposition")
    }

    /// Fourth Legendre polynomial, Frobenius-objective reference.
    pub fn legendre4_frobenius() -> DecompositionFunction {
        reference(
            &[0.375, 0.0, -3.75, 0.0, 4.375],
            &[0.375, 0.9206, -1.875, 0.4897, 2.1875, 0.8109],
            &[0.0, 0.9206, 1.875, 0.4897, -2.1875, 0.8109],
        )
    }

    /// Fourth Legendre polynomial, induced-one-norm-objective reference.
    pub fn legendre4_one_norm() -> DecompositionFunction {
        reference(
            &[0.375, 0.0, -3.75, 0.0, 4.375],
            &[0.375, 8.1767, -1.875, 1.2672, 2.1875, 1.1353],
            &[0.0, 8.1767, 1.875, 1.2672, -2.1875, 1.1353],
        )
    }

    /// Quadratic dynamics `0.7x + 0.32x^2` used in the reachability example.
    pub fn quadratic_dynamics() -> DecompositionFunction {
        reference(
            &[0.0, 0.7, 0.32],
            &[0.0, 0.7163, 0.2781, 0.03599],
            &[0.0, 0.0163, -0.0419, 0.03599],
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::{decompose, jacobian_decomposition, validate};
    use crate::psd_split::SplitMethod;
    use crate::rng::SplitMix64;

    fn poly(c: &[f64]) -> Polynomial {
        Polynomial::new(c.to_vec())
    }

    fn p1() -> Polynomial {
        poly(&[1.0, 0.0, 1.0])
    }

    #[test]
    fn tight_envelope_examples() {
        assert_eq!(tight_envelope(&p1(), -1.0, 2.0), 1.0); // interior minimum at 0
        assert_eq!(tight_envelope(&p1(), 2.0, -1.0), 5.0); // endpoint maximum
        for x in [-3.0, 0.0, 1.7] {
            assert_eq!(tight_envelope(&p1(), x, x), p1().eval(x));
        }
        // constant polynomial
        assert_eq!(tight_envelope(&Polynomial::constant(2.5), 0.0, 1.0), 2.5);
    }

    #[test]
    fn tight_envelope_matches_brute_force() {
        let mut rng = SplitMix64::new(0xe57);
        for trial in 0..100 {
            let deg = 1 + trial % 7;
            let p = Polynomial::new((0..=deg).map(|_| rng.uniform(-3.0, 3.0)).collect());
            let x = rng.uniform(-3.0, 3.0);
            let y = rng.uniform(-3.0, 3.0);
            let got = tight_envelope(&p, x, y);
            let (lo, hi) = if x < y { (x, y) } else { (y, x) };
            let mut scale = 1.0f64;
            let mut brute = if x <= y { f64::INFINITY } else { f64::NEG_INFINITY };
            for i in 0..100_000 {
                let t = lo + (hi - lo) * i as f64 / 99_999.0;
                let v = p.eval(t);
                scale = scale.max(v.abs());
                brute = if x <= y { brute.min(v) } else { brute.max(v) };
            }
            assert!(
                (got - brute).abs() <= 1e-6 * (1.0 + scale),
                "trial {trial}: {got} vs {brute}"
            );
        }
    }

    #[test]
    fn width_profile_cubic_pair_at_origin() {
        let df = decompose(&p1(), SplitMethod::Eigen).unwrap();
        let profile =
            width_profile(|x, y| df.evaluate(x, y), -5.0, 5.0, 1.0, 0.5, 11).unwrap();
        let mid = &profile.rows[5];
        assert_eq!(mid.z, 0.0);
        assert!((mid.g_hi - 2.5625).abs() < 1e-9);
        assert!((mid.g_lo - 0.6875).abs() < 1e-9);
        for row in &profile.rows {
            assert!(row.width >= -1e-9);
        }
    }

    #[test]
    fn width_profile_of_tight_envelope_is_nonnegative() {
        let p = poly(&[0.0, -1.0, 0.3, 0.5]);
        let profile =
            width_profile(|x, y| tight_envelope(&p, x, y), -2.0, 2.0, 0.4, 0.3, 51).unwrap();
        for row in &profile.rows {
            assert!(row.width >= 0.0);
        }
    }

    #[test]
    fn width_profile_jacobian_at_origin() {
        let jd = jacobian_decomposition(&p1(), Interval::new(-2.0, 2.0).unwrap());
        let profile =
            width_profile(|x, y| jd.evaluate(x, y), -1.0, 1.0, 1.0, 0.5, 3).unwrap();
        let mid = &profile.rows[1];
        assert_eq!(mid.z, 0.0);
        assert!((mid.g_hi - 8.0).abs() < 1e-12);
        assert!((mid.g_lo + 4.75).abs() < 1e-12);
    }

    #[test]
    fn width_profile_validates_inputs() {
        let g = |x: f64, y: f64| x - y;
        assert!(width_profile(g, 1.0, -1.0, 1.0, 0.5, 11).is_err());
        assert!(width_profile(g, -1.0, 1.0, 1.0, 0.5, 1).is_err());
        assert!(width_profile(g, -1.0, 1.0, -0.5, 0.5, 11).is_err());
        // anti-monotone evaluator rejected
        assert!(width_profile(|x, y| y - x, -1.0, 1.0, 1.0, 0.5, 11).is_err());
    }

    #[test]
    fn compare_profile_with_itself() {
        let df = decompose(&p1(), SplitMethod::Eigen).unwrap();
        let p = width_profile(|x, y| df.evaluate(x, y), -1.0, 1.0, 1.0, 0.5, 21).unwrap();
        let report = compare(&p, &p).unwrap();
        assert_eq!(report.fraction_inside, 1.0);
        assert!((report.mean_width_ratio.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn polynomial_decomposition_inside_jacobian_bound() {
        let df = decompose(&p1(), SplitMethod::SdpFrobenius).unwrap();
        let jd = jacobian_decomposition(&p1(), Interval::new(-2.0, 2.0).unwrap());
        let pa = width_profile(|x, y| df.evaluate(x, y), -1.0, 1.0, 1.0, 0.5, 201).unwrap();
        let pb = width_profile(|x, y| jd.evaluate(x, y), -1.0, 1.0, 1.0, 0.5, 201).unwrap();
        let report = compare(&pa, &pb).unwrap();
        assert_eq!(report.fraction_inside, 1.0);
    }

    #[test]
    fn reference_dominance_on_legendre_grid() {
        let g3 = references::legendre4_frobenius();
        let g4 = references::legendre4_one_norm();
        let pa = width_profile(|x, y| g3.evaluate(x, y), -1.5, 1.5, 0.25, 0.3, 201).unwrap();
        let pb = width_profile(|x, y| g4.evaluate(x, y), -1.5, 1.5, 0.25, 0.3, 201).unwrap();
        let report = compare(&pa, &pb).unwrap();
        assert_eq!(report.fraction_inside, 1.0);
    }

    #[test]
    fn compare_rejects_mismatched_grids() {
        let g = |x: f64, y: f64| x - y;
        let a = width_profile(g, -1.0, 1.0, 1.0, 0.5, 11).unwrap();
        let b = width_profile(g, -1.0, 1.0, 1.0, 0.5, 21).unwrap();
        assert!(matches!(compare(&a, &b), Err(Error::GridMismatch)));
        let c = width_profile(g, -1.0, 1.0, 0.9, 0.5, 11).unwrap();
        assert!(matches!(compare(&a, &c), Err(Error::GridMismatch)));
    }

    #[test]
    fn embedded_references_validate() {
        for df in [
            references::legendre4_frobenius(),
            references::legendre4_one_norm(),
            references::quadratic_dynamics(),
        ] {
            let report = validate(&df).unwrap();
            assert!(report.pass(), "{report:?}");
        }
    }

    #[test]
    fn sandwich_between_envelope_and_decomposition() {
        let mut rng = SplitMix64::new(0x5a4d);
        for trial in 0..50 {
            let deg = 1 + trial % 7;
            let p = Polynomial::new((0..=deg).map(|_| rng.uniform(-3.0, 3.0)).collect());
            let df = decompose(&p, SplitMethod::Eigen).unwrap();
            for _ in 0..10 {
                let (u, v) = (rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0));
                let (lo, hi) = if u < v { (u, v) } else { (v, u) };
                let env_lo = tight_envelope(&p, lo, hi);
                let env_hi = tight_envelope(&p, hi, lo);
                assert!(df.evaluate(lo, hi) <= env_lo + 1e-7, "trial {trial}");
                assert!(df.evaluate(hi, lo) >= env_hi - 1e-7, "trial {trial}");
            }
        }
    }

    #[test]
    fn csv_format() {
        let g = |x: f64, y: f64| x - y;
        let p = width_profile(g, 0.0, 1.0, 1.0, 0.5, 2).unwrap();
        let csv = p.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("z,g_hi,g_lo,width"));
        assert_eq!(lines.next(), Some("0,1.5,-1.5,3"));
        assert_eq!(lines.next(), Some("1,1.5,-1.5,3"));
    }
}
