//! Small derivative-free searches: Nelder–Mead simplex, golden-section and
//! predicate bisection.

use std::cell::Cell;

/// Stopping rules for [`nelder_mead`].
#[derive(Debug, Clone, Copy)]
pub struct NelderMeadOptions {
    /// Edge length of the initial right-angled simplex.
    pub initial_step: f64,
    /// Stop once every vertex is within this distance of the best one.
    pub diameter_tol: f64,
    pub max_evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct Minimum<const N: usize> {
    pub x: [f64; N],
    pub value: f64,
    pub evaluations: usize,
}

fn distance<const N: usize>(a: &[f64; N], b: &[f64; N]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn lerp<const N: usize>(from: &[f64; N], to: &[f64; N], t: f64) -> [f64; N] {
    let mut out = *from;
    for i in 0..N {
        out[i] = from[i] + t * (to[i] - from[i]);
    }
    out
}

/// Minimizes `f` starting from `x0` with the standard reflection (1), expansion (2),
/// contraction (½) and shrink (½) coefficients.
pub fn nelder_mead<const N: usize>(
    mut f: impl FnMut(&[f64; N]) -> f64,
    x0: [f64; N],
    opts: NelderMeadOptions,
) -> Minimum<N> {
    let evaluations = Cell::new(0usize);
    let mut eval = |x: &[f64; N]| {
        evaluations.set(evaluations.get() + 1);
        f(x)
    };

    let mut simplex: Vec<([f64; N], f64)> = Vec::with_capacity(N + 1);
    let v0 = eval(&x0);
    simplex.push((x0, v0));
    for i in 0..N {
        let mut x = x0;
        x[i] += opts.initial_step;
        let v = eval(&x);
        simplex.push((x, v));
    }

    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].0;
        let diameter = simplex[1..]
            .iter()
            .map(|(x, _)| distance(x, &best))
            .fold(0.0, f64::max);
        if diameter < opts.diameter_tol || evaluations.get() >= opts.max_evaluations {
            break;
        }

        let mut centroid = [0.0; N];
        for (x, _) in &simplex[..N] {
            for i in 0..N {
                centroid[i] += x[i] / N as f64;
            }
        }
        let (worst, f_worst) = simplex[N];
        let f_best = simplex[0].1;
        let f_second = simplex[N - 1].1;

        let xr = lerp(&centroid, &worst, -1.0);
        let fr = eval(&xr);
        if fr < f_best {
            let xe = lerp(&centroid, &worst, -2.0);
            let fe = eval(&xe);
            simplex[N] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < f_second {
            simplex[N] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < f_worst {
            let xc = lerp(&centroid, &xr, 0.5);
            (xc, eval(&xc))
        } else {
            let xc = lerp(&centroid, &worst, 0.5);
            (xc, eval(&xc))
        };
        if fc < fr.min(f_worst) {
            simplex[N] = (xc, fc);
            continue;
        }
        // shrink toward the best vertex
        for k in 1..=N {
            let x = lerp(&best, &simplex[k].0, 0.5);
            let v = eval(&x);
            simplex[k] = (x, v);
        }
    }

    Minimum {
        x: simplex[0].0,
        value: simplex[0].1,
        evaluations: evaluations.get(),
    }
}

#[derive(Debug, Clone, Copy)]
pub struct GoldenResult {
    pub x: f64,
    pub value: f64,
    pub bracket: (f64, f64),
    pub iterations: usize,
}

/// Maximizes a unimodal `f` on `[a, b]` until the bracket is narrower than `tol`.
pub fn golden_section_max(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, tol: f64) -> GoldenResult {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut iterations = 0;
    while hi - lo > tol {
        iterations += 1;
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    let (x, value) = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    let x = x.clamp(lo, hi);
    GoldenResult {
        x,
        value,
        bracket: (lo, hi),
        iterations,
    }
}

/// Shrinks `[lo, hi]` with `pred(lo)` true and `pred(hi)` false until `hi − lo ≤ tol`.
/// Returns the final bracket and the number of halvings.
pub fn bisect_predicate(
    mut pred: impl FnMut(f64) -> bool,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> ((f64, f64), usize) {
    let mut iterations = 0;
    while hi - lo > tol {
        let mid = lo + (hi - lo) / 2.0;
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    ((lo, hi), iterations)
}
