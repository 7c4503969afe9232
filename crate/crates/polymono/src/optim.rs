//! Deterministic Nelder–Mead for the tiny outer problems over `alpha`
//! (dimension <= ~3). No randomized restarts; callers restart explicitly
//! from fixed points.

/// Minimizes `f` from `start` with an axis-aligned initial simplex of the
/// given `step`. Stops when the simplex diameter (max infinity-distance from
/// the best vertex) drops below `diameter_tol` or after `max_iters`
/// iterations. Returns the best vertex and its value.
pub(crate) fn nelder_mead(
    f: &mut dyn FnMut(&[f64]) -> f64,
    start: &[f64],
    step: f64,
    diameter_tol: f64,
    max_iters: usize,
) -> (Vec<f64>, f64) {
    let dim = start.len();
    if dim == 0 {
        let v = f(start);
        return (Vec::new(), v);
    }

    const REFLECT: f64 = 1.0;
    const EXPAND: f64 = 2.0;
    const CONTRACT: f64 = 0.5;
    const SHRINK: f64 = 0.5;

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    simplex.push((start.to_vec(), f(start)));
    for i in 0..dim {
        let mut v = start.to_vec();
        v[i] += step;
        let fv = f(&v);
        simplex.push((v, fv));
    }

    for _ in 0..max_iters {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).expect("finite objective"));

        let diameter = simplex[1..]
            .iter()
            .map(|(v, _)| {
                v.iter()
                    .zip(&simplex[0].0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if diameter < diameter_tol {
            break;
        }

        // centroid of all but the worst vertex
        let mut centroid = vec![0.0; dim];
        for (v, _) in &simplex[..dim] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / dim as f64;
            }
        }
        let worst = simplex[dim].clone();

        let at = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let reflected = at(REFLECT);
        let f_reflected = f(&reflected);

        if f_reflected < simplex[0].1 {
            let expanded = at(EXPAND);
            let f_expanded = f(&expanded);
            simplex[dim] = if f_expanded < f_reflected {
                (expanded, f_expanded)
            } else {
                (reflected, f_reflected)
            };
        } else if f_reflected < simplex[dim - 1].1 {
            simplex[dim] = (reflected, f_reflected);
        } else {
            let contracted = if f_reflected < worst.1 {
                at(CONTRACT) // outside
            } else {
                at(-CONTRACT) // inside
            };
            let f_contracted = f(&contracted);
            if f_contracted < worst.1.min(f_reflected) {
                simplex[dim] = (contracted, f_contracted);
            } else {
                // shrink toward the best vertex
                let best = simplex[0].0.clone();
                for entry in simplex.iter_mut().skip(1) {
                    let v: Vec<f64> = entry
                        .0
                        .iter()
                        .zip(&best)
                        .map(|(x, b)| b + SHRINK * (x - b))
                        .collect();
                    let fv = f(&v);
                    *entry = (v, fv);
                }
            }
        }
    }

    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).expect("finite objective"));
    simplex.swap_remove(0).into()
}

/// Minimizes `f` from `0` and from `+/-restart_offset` along each coordinate,
/// keeping the best result. Ties keep the earliest start, so the outcome is
/// deterministic.
pub(crate) fn nelder_mead_with_restarts(
    f: &mut dyn FnMut(&[f64]) -> f64,
    dim: usize,
    restart_offset: f64,
    diameter_tol: f64,
    max_iters: usize,
) -> (Vec<f64>, f64) {
    let mut starts = vec![vec![0.0; dim]];
    for i in 0..dim {
        for sign in [1.0, -1.0] {
            let mut s = vec![0.0; dim];
            s[i] = sign * restart_offset;
            starts.push(s);
        }
    }
    let mut best: Option<(Vec<f64>, f64)> = None;
    for start in starts {
        let (x, fx) = nelder_mead(f, &start, 0.5, diameter_tol, max_iters);
        if best.as_ref().is_none_or(|(_, bf)| fx < *bf) {
            best = Some((x, fx));
        }
    }
    best.expect("at least one start")
}
