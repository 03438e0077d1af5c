//! Box-bounded Nelder-Mead simplex search.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOptions<T> {
    pub max_iter: usize,
    /// Stop when the spread of objective values across the simplex is below this...
    pub f_tol: T,
    /// ...and every vertex lies within this distance (per coordinate) of the best.
    pub x_tol: T,
    /// Initial step as a fraction of the bound width (or of |x0| when unbounded).
    pub initial_step: T,
}

impl<T: Scalar> Default for NelderMeadOptions<T> {
    fn default() -> Self {
        Self {
            max_iter: 500,
            f_tol: T::lit(1e-12),
            x_tol: T::lit(1e-8),
            initial_step: T::lit(0.1),
        }
    }
}

/// Inclusive box constraints; points are clamped into the box.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounds<T> {
    pub lo: Vec<T>,
    pub hi: Vec<T>,
}

impl<T: Scalar> Bounds<T> {
    pub fn new(lo: Vec<T>, hi: Vec<T>) -> Result<Self> {
        if lo.len() != hi.len() || lo.iter().zip(&hi).any(|(l, h)| l.is_nan() || h.is_nan() || l > h) {
            return Err(Error::InvalidParameter(
                "bounds must satisfy lo <= hi".into(),
            ));
        }
        Ok(Self { lo, hi })
    }

    pub fn clamp(&self, x: &mut [T]) {
        for ((v, l), h) in x.iter_mut().zip(&self.lo).zip(&self.hi) {
            *v = v.max(*l).min(*h);
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum<T> {
    pub x: Vec<T>,
    pub fx: T,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

/// Minimizes `f` starting from `x0`.
///
/// Non-finite objective values are treated as +inf. The returned vertex is
/// the best one seen, so `fx <= f(x0)` whenever `f(x0)` is finite.
pub fn nelder_mead<T, F>(
    mut f: F,
    x0: &[T],
    bounds: Option<&Bounds<T>>,
    opts: NelderMeadOptions<T>,
) -> Result<Minimum<T>>
where
    T: Scalar,
    F: FnMut(&[T]) -> T,
{
    let dim = x0.len();
    if dim == 0 {
        return Err(Error::InvalidParameter("empty starting point".into()));
    }
    if let Some(b) = bounds {
        if b.lo.len() != dim {
            return Err(Error::InvalidParameter("bounds dimension mismatch".into()));
        }
    }
    let mut evals = 0usize;
    let mut eval = |x: &mut Vec<T>| -> T {
        if let Some(b) = bounds {
            b.clamp(x);
        }
        evals += 1;
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            T::infinity()
        }
    };

    let half = T::lit(0.5);
    let two = T::lit(2.0);

    let mut start = x0.to_vec();
    let f0 = eval(&mut start);
    let mut simplex: Vec<(Vec<T>, T)> = vec![(start.clone(), f0)];
    for i in 0..dim {
        let mut v = start.clone();
        let step = match bounds {
            Some(b) => {
                let width = b.hi[i] - b.lo[i];
                let s = opts.initial_step * width;
                // Step inward when x0 sits near the upper bound.
                if v[i] + s > b.hi[i] {
                    -s
                } else {
                    s
                }
            }
            None if v[i] != T::zero() => opts.initial_step * v[i].abs(),
            None => T::lit(2.5e-4),
        };
        v[i] += step;
        let fv = eval(&mut v);
        simplex.push((v, fv));
    }
    if simplex.iter().all(|(_, fv)| !fv.is_finite()) {
        return Err(Error::NonFiniteObjective);
    }

    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iter {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
        let best = simplex[0].1;
        let worst = simplex[dim].1;
        let f_spread = if worst.is_finite() {
            (worst - best).abs()
        } else {
            T::infinity()
        };
        let x_spread = simplex[1..]
            .iter()
            .flat_map(|(v, _)| v.iter().zip(&simplex[0].0).map(|(a, b)| (*a - *b).abs()))
            .fold(T::zero(), T::max);
        if f_spread <= opts.f_tol && x_spread <= opts.x_tol {
            converged = true;
            break;
        }
        iterations += 1;

        let mut centroid = vec![T::zero(); dim];
        for (v, _) in &simplex[..dim] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += *x;
            }
        }
        let nd = T::from_usize_lossy(dim);
        centroid.iter_mut().for_each(|c| *c /= nd);

        let along = |coef: T, from: &[T]| -> Vec<T> {
            centroid
                .iter()
                .zip(from)
                .map(|(c, w)| *c + coef * (*c - *w))
                .collect()
        };

        let worst_x = simplex[dim].0.clone();
        let mut xr = along(T::one(), &worst_x);
        let fr = eval(&mut xr);
        if fr < simplex[0].1 {
            let mut xe = along(two, &worst_x);
            let fe = eval(&mut xe);
            simplex[dim] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[dim - 1].1 {
            simplex[dim] = (xr, fr);
            continue;
        }
        // Contraction: outside if the reflection improved on the worst, else inside.
        let (mut xc, target) = if fr < worst {
            (along(half, &worst_x), fr)
        } else {
            (along(-half, &worst_x), worst)
        };
        let fc = eval(&mut xc);
        if fc < target {
            simplex[dim] = (xc, fc);
            continue;
        }
        let best_x = simplex[0].0.clone();
        for (v, fv) in simplex.iter_mut().skip(1) {
            let mut shrunk: Vec<T> = best_x
                .iter()
                .zip(v.iter())
                .map(|(b, x)| *b + half * (*x - *b))
                .collect();
            *fv = eval(&mut shrunk);
            *v = shrunk;
        }
    }
    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
    let (x, fx) = simplex.swap_remove(0);
    Ok(Minimum {
        x,
        fx,
        iterations,
        evaluations: evals,
        converged,
    })
}
