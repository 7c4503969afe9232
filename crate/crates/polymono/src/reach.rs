//! Discrete-time reachable-set over-approximation.
//!
//! For dynamics `x[k+1] = f(x[k]) + u[k]` with interval-bounded input and
//! initial condition, the embedding system couples an upper and a lower
//! state through a decomposition function `g` of `f`:
//!
//! ```text
//! hi[k+1] = g(hi[k], lo[k]) + u_hi
//! lo[k+1] = g(lo[k], hi[k]) + u_lo
//! ```
//!
//! Every trajectory of the true system stays inside `[lo[k], hi[k]]`, so the
//! tube over-approximates the reachable set at each step. Monte Carlo
//! sampling with a seedable generator provides containment validation.

use crate::decomposition::{DecompositionFunction, Interval};
use crate::polynomial::Polynomial;
use crate::rng::SplitMix64;
use crate::util::format_g;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Problem data: dynamics, input bounds, initial set, horizon.
///
/// Wire form: `{"f":{"coeffs":...},"u":[lo,hi],"x0":[lo,hi],"steps":N}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReachSpec {
    pub f: Polynomial,
    #[serde(rename = "u")]
    pub u_bounds: Interval,
    #[serde(rename = "x0")]
    pub x0_bounds: Interval,
    pub steps: usize,
}

impl ReachSpec {
    pub fn new(f: Polynomial, u_bounds: Interval, x0_bounds: Interval, steps: usize) -> Result<Self> {
        if steps == 0 {
            return Err(Error::Invalid("horizon must be at least 1 step"));
        }
        Ok(ReachSpec { f, u_bounds, x0_bounds, steps })
    }
}

/// Per-step interval bounds `[lo[k], hi[k]]`, `k = 0..=N`.
#[derive(Clone, Debug, Serialize)]
pub struct ReachTube {
    pub bounds: Vec<(f64, f64)>,
    /// True when propagation overflowed and the tube stops early.
    pub truncated: bool,
}

impl ReachTube {
    pub fn horizon(&self) -> usize {
        self.bounds.len() - 1
    }

    /// CSV with header `k,x_lo,x_hi`, 12 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,x_lo,x_hi\n");
        for (k, (lo, hi)) in self.bounds.iter().enumerate() {
            out.push_str(&format!("{},{},{}\n", k, format_g(*lo, 12), format_g(*hi, 12)));
        }
        out
    }
}

/// Propagates the embedding system for `spec.steps` steps. The input enters
/// additively with its extreme value of matching sign. Requires `df` to
/// actually decompose `spec.f`; overflow truncates the tube and sets a flag.
pub fn propagate_embedding(df: &DecompositionFunction, spec: &ReachSpec) -> Result<ReachTube> {
    if spec.steps == 0 {
        return Err(Error::Invalid("horizon must be at least 1 step"));
    }
    let diff = df.q.sub(&df.r);
    for k in 0..=diff.degree().max(spec.f.degree()) {
        if (diff.coeff(k) - spec.f.coeff(k)).abs() > 1e-6 * spec.f.coeff(k).abs().max(1.0) {
            return Err(Error::Invalid("decomposition does not embed the spec dynamics"));
        }
    }

    let mut bounds = Vec::with_capacity(spec.steps + 1);
    let (mut lo, mut hi) = (spec.x0_bounds.lo(), spec.x0_bounds.hi());
    bounds.push((lo, hi));
    let mut truncated = false;
    for _ in 0..spec.steps {
        let next_hi = df.evaluate(hi, lo) + spec.u_bounds.hi();
        let next_lo = df.evaluate(lo, hi) + spec.u_bounds.lo();
        if !next_hi.is_finite() || !next_lo.is_finite() {
            truncated = true;
            log::warn!("embedding propagation overflowed after {} steps", bounds.len() - 1);
            break;
        }
        debug_assert!(next_lo <= next_hi + 1e-9);
        bounds.push((next_lo, next_hi));
        (lo, hi) = (next_lo, next_hi);
    }
    Ok(ReachTube { bounds, truncated })
}

/// One sampled trajectory of the true dynamics, `states[k]` for `k = 0..=N`.
#[derive(Clone, Debug, Serialize)]
pub struct Trajectory {
    pub states: Vec<f64>,
}

/// Samples trajectories with `x[0]` uniform in the initial set and inputs
/// i.i.d. uniform in the input bounds. Each trajectory draws from its own
/// seed substream, so results do not depend on evaluation order.
pub fn sample_trajectories(spec: &ReachSpec, samples: usize, seed: u64) -> Vec<Trajectory> {
    (0..samples)
        .map(|i| {
            let mut rng = SplitMix64::substream(seed, i as u64);
            let mut states = Vec::with_capacity(spec.steps + 1);
            let mut x = rng.uniform(spec.x0_bounds.lo(), spec.x0_bounds.hi());
            states.push(x);
            for _ in 0..spec.steps {
                let u = rng.uniform(spec.u_bounds.lo(), spec.u_bounds.hi());
                x = spec.f.eval(x) + u;
                states.push(x);
            }
            Trajectory { states }
        })
        .collect()
}

/// CSV with header `sample,k,x` covering all trajectories.
pub fn trajectories_to_csv(trajectories: &[Trajectory]) -> String {
    let mut out = String::from("sample,k,x\n");
    for (i, t) in trajectories.iter().enumerate() {
        for (k, x) in t.states.iter().enumerate() {
            out.push_str(&format!("{},{},{}\n", i, k, format_g(*x, 12)));
        }
    }
    out
}

/// Containment and tightness of a tube against sampled trajectories.
#[derive(Clone, Debug, Serialize)]
pub struct ContainmentReport {
    /// Sample states outside the tube at each step (slack 1e-9).
    pub violations_per_step: Vec<usize>,
    pub total_violations: usize,
    /// Tube width over empirical sample spread, where the spread exceeds 1e-12.
    pub tightness_ratio_per_step: Vec<Option<f64>>,
}

pub fn containment_report(
    tube: &ReachTube,
    trajectories: &[Trajectory],
) -> Result<ContainmentReport> {
    if trajectories.iter().any(|t| t.states.len() != tube.bounds.len()) {
        return Err(Error::Invalid("trajectory horizon does not match the tube"));
    }
    let steps = tube.bounds.len();
    let mut violations_per_step = vec![0usize; steps];
    let mut tightness = Vec::with_capacity(steps);
    for k in 0..steps {
        let (lo, hi) = tube.bounds[k];
        let mut min_x = f64::INFINITY;
        let mut max_x = f64::NEG_INFINITY;
        for t in trajectories {
            let x = t.states[k];
            if x < lo - 1e-9 || x > hi + 1e-9 {
                violations_per_step[k] += 1;
            }
            min_x = min_x.min(x);
            max_x = max_x.max(x);
        }
        let spread = max_x - min_x;
        tightness.push((spread > 1e-12).then(|| (hi - lo) / spread));
    }
    Ok(ContainmentReport {
        total_violations: violations_per_step.iter().sum(),
        violations_per_step,
        tightness_ratio_per_step: tightness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::references;
    use crate::decomposition::decompose;
    use crate::psd_split::SplitMethod;

    fn example_spec(steps: usize) -> ReachSpec {
        ReachSpec::new(
            Polynomial::new(vec![0.0, 0.7, 0.32]),
            Interval::new(-0.1, 0.1).unwrap(),
            Interval::new(0.0, 0.0).unwrap(),
            steps,
        )
        .unwrap()
    }

    #[test]
    fn tube_first_steps_with_printed_reference() {
        let df = references::quadratic_dynamics();
        let tube = propagate_embedding(&df, &example_spec(1)).unwrap();
        assert_eq!(tube.bounds.len(), 2);
        assert!((tube.bounds[1].0 + 0.1).abs() < 1e-12);
        assert!((tube.bounds[1].1 - 0.1).abs() < 1e-12);

        // step 2 from the printed coefficients: g(0.1,-0.1)+0.1 and g(-0.1,0.1)-0.1
        let tube = propagate_embedding(&df, &example_spec(2)).unwrap();
        assert!((tube.bounds[2].1 - 0.17653198).abs() < 1e-9);
        assert!((tube.bounds[2].0 + 0.17013198).abs() < 1e-9);
        assert!(!tube.truncated);
    }

    #[test]
    fn zero_input_point_start_follows_the_orbit() {
        let f = Polynomial::new(vec![0.0, 0.7, 0.32]);
        let df = decompose(&f, SplitMethod::SdpFrobenius).unwrap();
        let spec = ReachSpec::new(
            f.clone(),
            Interval::new(0.0, 0.0).unwrap(),
            Interval::new(0.2, 0.2).unwrap(),
            15,
        )
        .unwrap();
        let tube = propagate_embedding(&df, &spec).unwrap();
        let mut x = 0.2;
        for (k, (lo, hi)) in tube.bounds.iter().enumerate() {
            assert!(hi - lo <= 1e-7, "step {k} width {}", hi - lo);
            assert!((0.5 * (lo + hi) - x).abs() <= 1e-7, "step {k}");
            x = f.eval(x);
        }
    }

    #[test]
    fn propagation_rejects_mismatched_decomposition() {
        let df = decompose(&Polynomial::new(vec![1.0, 0.0, 1.0]), SplitMethod::Eigen).unwrap();
        assert!(propagate_embedding(&df, &example_spec(3)).is_err());
    }

    #[test]
    fn overflow_truncates_with_flag() {
        // x^2 + 1 from a point far out diverges within a few steps
        let f = Polynomial::new(vec![1.0, 0.0, 1.0]);
        let df = decompose(&f, SplitMethod::Eigen).unwrap();
        let spec = ReachSpec::new(
            f,
            Interval::new(0.0, 0.0).unwrap(),
            Interval::new(10.0, 10.0).unwrap(),
            500,
        )
        .unwrap();
        let tube = propagate_embedding(&df, &spec).unwrap();
        assert!(tube.truncated);
        assert!(tube.bounds.len() < 501);
        assert!(tube.bounds.iter().all(|(lo, hi)| lo.is_finite() && hi.is_finite()));
    }

    #[test]
    fn trajectories_are_deterministic_and_respect_dynamics() {
        let spec = example_spec(10);
        let a = sample_trajectories(&spec, 50, 4242);
        let b = sample_trajectories(&spec, 50, 4242);
        for (ta, tb) in a.iter().zip(&b) {
            assert_eq!(ta.states, tb.states);
        }
        let c = sample_trajectories(&spec, 50, 4243);
        assert!(a.iter().zip(&c).any(|(ta, tc)| ta.states != tc.states));

        // zero input, point start: all trajectories identical deterministic orbit
        let frozen = ReachSpec::new(
            spec.f.clone(),
            Interval::new(0.0, 0.0).unwrap(),
            Interval::new(0.1, 0.1).unwrap(),
            5,
        )
        .unwrap();
        let ts = sample_trajectories(&frozen, 10, 1);
        let mut x = 0.1;
        for k in 0..=5 {
            for t in &ts {
                assert_eq!(t.states[k], x);
            }
            x = spec.f.eval(x);
        }
    }

    #[test]
    fn containment_zero_violations_and_breaks_when_tube_shrunk() {
        let spec = example_spec(10);
        let df = decompose(&spec.f, SplitMethod::SdpFrobenius).unwrap();
        let tube = propagate_embedding(&df, &spec).unwrap();
        let trajectories = sample_trajectories(&spec, 1000, 2024);
        let report = containment_report(&tube, &trajectories).unwrap();
        assert_eq!(report.total_violations, 0);

        // tightness ratio against the sample spread at the final step;
        // the sampled spread understates the true reachable width, so this
        // sits well above 1
        let ratio = report.tightness_ratio_per_step[10].unwrap();
        assert!(ratio >= 1.0 && ratio <= 2.5, "ratio {ratio}");

        let mut shrunk = tube.clone();
        for (lo, hi) in shrunk.bounds.iter_mut() {
            let w = *hi - *lo;
            *hi -= 0.05 * w;
            *lo += 0.05 * w;
        }
        let report = containment_report(&shrunk, &trajectories).unwrap();
        assert!(report.total_violations > 0);
    }

    #[test]
    fn nesting_is_monotone_in_the_input_and_initial_sets() {
        let f = Polynomial::new(vec![0.0, 0.7, 0.32]);
        let df = decompose(&f, SplitMethod::SdpFrobenius).unwrap();
        let wide = ReachSpec::new(
            f.clone(),
            Interval::new(-0.1, 0.1).unwrap(),
            Interval::new(-0.05, 0.05).unwrap(),
            12,
        )
        .unwrap();
        let narrow = ReachSpec::new(
            f,
            Interval::new(-0.05, 0.05).unwrap(),
            Interval::new(-0.02, 0.03).unwrap(),
            12,
        )
        .unwrap();
        let tw = propagate_embedding(&df, &wide).unwrap();
        let tn = propagate_embedding(&df, &narrow).unwrap();
        for ((nlo, nhi), (wlo, whi)) in tn.bounds.iter().zip(&tw.bounds) {
            assert!(nlo >= &(wlo - 1e-9));
            assert!(nhi <= &(whi + 1e-9));
        }
    }

    #[test]
    fn spec_json_round_trip() {
        let json = r#"{"f":{"coeffs":[0.0,0.7,0.32]},"u":[-0.1,0.1],"x0":[0.0,0.0],"steps":10}"#;
        let spec: ReachSpec = serde_json::from_str(json).unwrap();
        assert_eq!(spec.steps, 10);
        assert_eq!(spec.u_bounds.lo(), -0.1);
        assert_eq!(spec.f.coeff(2), 0.32);
        let back = serde_json::to_string(&spec).unwrap();
        let again: ReachSpec = serde_json::from_str(&back).unwrap();
        assert_eq!(again.f, spec.f);

        // out-of-order interval rejected on load
        let bad = r#"{"f":{"coeffs":[0.0,1.0]},"u":[0.1,-0.1],"x0":[0.0,0.0],"steps":3}"#;
        assert!(serde_json::from_str::<ReachSpec>(bad).is_err());
    }
}
