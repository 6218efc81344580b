//! Deterministic 1D numerical kernels: adaptive Gauss–Kronrod quadrature, periodic
//! trapezoid refinement and convex line minimization.
//!
//! All refinement orders are fixed, so repeated calls with the same inputs perform
//! the same floating-point operations in the same order.

use std::f64::consts::PI;

/// Result of a quadrature call.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub err: f64,
    pub n_evals: usize,
}

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Globally adaptive Gauss–Kronrod (7/15) integration of `f` over `[a, b]`.
///
/// Stops when the summed error estimate drops below `max(abs_tol, rel_tol * |I|)` or
/// when `max_intervals` subintervals are in use. Among intervals with equal error the
/// earliest one is split first.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_intervals: usize,
) -> Quadrature {
    if a == b {
        return Quadrature { value: 0.0, err: 0.0, n_evals: 0 };
    }
    let (v, e) = kronrod15(&f, a, b);
    let mut intervals = vec![(a, b, v, e)];
    let mut n_evals = 15;
    loop {
        let total: f64 = intervals.iter().map(|iv| iv.2).sum();
        let err: f64 = intervals.iter().map(|iv| iv.3).sum();
        if err <= abs_tol.max(rel_tol * total.abs()) || intervals.len() >= max_intervals {
            return Quadrature { value: total, err, n_evals };
        }
        let (worst, _) = intervals
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |(bi, be), (i, iv)| if iv.3 > be { (i, iv.3) } else { (bi, be) });
        let (lo, hi, _, _) = intervals[worst];
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            // Interval can no longer be split in floating point.
            return Quadrature { value: total, err, n_evals };
        }
        let (vl, el) = kronrod15(&f, lo, mid);
        let (vr, er) = kronrod15(&f, mid, hi);
        n_evals += 30;
        intervals[worst] = (lo, mid, vl, el);
        intervals.insert(worst + 1, (mid, hi, vr, er));
    }
}

/// Result of a periodic integration of a vector-valued integrand.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PeriodicQuadrature<const K: usize> {
    pub values: [f64; K],
    /// Absolute change of each component over the last doubling.
    pub errs: [f64; K],
    /// Number of nodes of the final rule.
    pub nodes: usize,
}

/// Integrates a `2π`-periodic vector-valued function with the trapezoid rule,
/// doubling the node count (reusing previous nodes) from `n0` until every
/// component changed by at most `rel_tol * scale_k`, where `scale_k` is the largest
/// component magnitude of the integral. Converges geometrically for analytic
/// integrands.
pub fn integrate_periodic<const K: usize, F: Fn(f64) -> [f64; K]>(
    f: F,
    n0: usize,
    rel_tol: f64,
    max_nodes: usize,
) -> PeriodicQuadrature<K> {
    let mut n = n0.max(4);
    let mut sums = [0.0; K];
    for i in 0..n {
        let v = f(2.0 * PI * i as f64 / n as f64);
        for k in 0..K {
            sums[k] += v[k];
        }
    }
    let mut current = sums.map(|s| s * 2.0 * PI / n as f64);
    loop {
        // New nodes sit halfway between the old ones.
        for i in 0..n {
            let v = f(2.0 * PI * (i as f64 + 0.5) / n as f64);
            for k in 0..K {
                sums[k] += v[k];
            }
        }
        n *= 2;
        let next = sums.map(|s| s * 2.0 * PI / n as f64);
        let mut errs = [0.0; K];
        for k in 0..K {
            errs[k] = (next[k] - current[k]).abs();
        }
        let scale = next.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let converged = errs.iter().all(|e| *e <= rel_tol * scale);
        if converged || n >= max_nodes {
            return PeriodicQuadrature { values: next, errs, nodes: n };
        }
        current = next;
    }
}

/// Minimizer of a convex function of one variable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineMin {
    pub x: f64,
    pub value: f64,
    pub n_evals: usize,
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Minimizes a convex, coercive `f` starting from `x0` with initial step `step > 0`.
///
/// The minimum is bracketed by step doubling and then located by golden-section
/// search until the bracket is narrower than `x_tol * max(1, |x|)`. If the function
/// keeps decreasing past `|x| = 1e15` (not coercive) the last point reached is
/// returned as the error value.
pub fn minimize_convex<F: Fn(f64) -> f64>(f: F, x0: f64, step: f64, x_tol: f64) -> Result<LineMin, LineMin> {
    let mut eval = |x: f64| f(x);
    let mut evals = 2usize;
    let f0 = eval(x0);
    let fp = eval(x0 + step);
    let (dir, mut f_near) = if fp < f0 {
        (1.0, fp)
    } else {
        evals += 1;
        let fm = eval(x0 - step);
        if fm < f0 {
            (-1.0, fm)
        } else {
            // Minimum already bracketed by x0 - step and x0 + step.
            return Ok(golden(&mut eval, x0 - step, x0 + step, x_tol, evals));
        }
    };
    let mut a = x0;
    let mut b = x0 + dir * step;
    let mut h = step;
    loop {
        h *= 2.0;
        let c = b + dir * h;
        if c.abs() > 1e15 {
            return Err(LineMin { x: b, value: f_near, n_evals: evals });
        }
        let fc = eval(c);
        evals += 1;
        if fc >= f_near {
            let (lo, hi) = if a < c { (a, c) } else { (c, a) };
            return Ok(golden(&mut eval, lo, hi, x_tol, evals));
        }
        a = b;
        b = c;
        f_near = fc;
    }
}

fn golden<F: FnMut(f64) -> f64>(eval: &mut F, mut lo: f64, mut hi: f64, x_tol: f64, mut evals: usize) -> LineMin {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = eval(x1);
    let mut f2 = eval(x2);
    evals += 2;
    while hi - lo > x_tol * (1.0_f64).max(x1.abs()) {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = eval(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = eval(x2);
        }
        evals += 1;
        if x1 >= x2 {
            break;
        }
    }
    let (x, value) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    LineMin { x, value, n_evals: evals }
}
