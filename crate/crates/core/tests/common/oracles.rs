//! Brute-force reference computations that share no code with the library: plain
//! bisection on explicit boundary equations and composite Gauss–Legendre sums.

#![allow(dead_code)]

/// 16-point Gauss–Legendre nodes and weights on [-1, 1] (positive half).
const GL_X: [f64; 8] = [
    0.095_012_509_837_637_44,
    0.281_603_550_779_258_9,
    0.458_016_777_657_227_4,
    0.617_876_244_402_643_7,
    0.755_404_408_355_003,
    0.865_631_202_387_831_8,
    0.944_575_023_073_232_6,
    0.989_400_934_991_649_9,
];
const GL_W: [f64; 8] = [
    0.189_450_610_455_068_5,
    0.182_603_415_044_923_6,
    0.169_156_519_395_002_5,
    0.149_595_988_816_576_7,
    0.124_628_971_255_533_9,
    0.095_158_511_682_492_78,
    0.062_253_523_938_647_89,
    0.027_152_459_411_754_09,
];

/// Composite 16-point Gauss–Legendre over `panels` equal panels of `[a, b]`.
pub fn gauss_legendre<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        let half = 0.5 * h;
        let mut s = 0.0;
        for (x, w) in GL_X.iter().zip(GL_W) {
            s += w * (f(mid - half * x) + f(mid + half * x));
        }
        total += s * half;
    }
    total
}

/// Root of `f` in `[lo, hi]` by bisection, assuming a sign change.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid) < 0.0) == (flo < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Midpoint of the chord `y = m x + c` of the parabola `y = x^2` (quadratic formula).
pub fn parabola_chord_midpoint(m: f64, c: f64) -> (f64, f64) {
    let disc = (m * m + 4.0 * c).sqrt();
    let (x1, x2) = ((m - disc) / 2.0, (m + disc) / 2.0);
    let x = 0.5 * (x1 + x2);
    (x, m * x + c)
}

/// Area between `y = line(x)` and a convex graph `y = g(x)` where the line is above,
/// given a point `x_in` where it is above. Endpoints found by bracketing outward.
pub fn area_under_line<G: Fn(f64) -> f64, L: Fn(f64) -> f64>(g: G, line: L, x_in: f64) -> f64 {
    let gap = |x: f64| line(x) - g(x);
    assert!(gap(x_in) > 0.0);
    let mut step = 1e-3;
    let mut right = x_in + step;
    while gap(right) > 0.0 {
        step *= 2.0;
        right = x_in + step;
    }
    let mut step = 1e-3;
    let mut left = x_in - step;
    while gap(left) > 0.0 {
        step *= 2.0;
        left = x_in - step;
    }
    let a = bisect(gap, left, x_in);
    let b = bisect(gap, x_in, right);
    gauss_legendre(|x| gap(x).max(0.0), a, b, 200)
}

/// Chord midpoint of `|x|^p + |y|^p <= 1` along the line `{<u, z> = t}`, found by
/// bisection on the boundary equation along the line from its closest point to 0.
pub fn superellipse_chord_midpoint(p: f64, u: (f64, f64), t: f64) -> (f64, f64) {
    let w = (-u.1, u.0);
    let at = |s: f64| (t * u.0 + s * w.0, t * u.1 + s * w.1);
    let level = |s: f64| {
        let (x, y) = at(s);
        x.abs().powf(p) + y.abs().powf(p) - 1.0
    };
    // Inside point: minimize the level along the line by dense scanning + bisection.
    let mut best = (0.0, level(0.0));
    for k in -2000..=2000 {
        let s = k as f64 * 1e-3;
        let v = level(s);
        if v < best.1 {
            best = (s, v);
        }
    }
    assert!(best.1 < 0.0, "line misses the superellipse");
    let hi = bisect(level, best.0, 3.0);
    let lo = bisect(level, -3.0, best.0);
    at(0.5 * (lo + hi))
}

/// Residual of the principal-axis line through 2D points, normalized by the spread
/// along it (closed-form 2x2 eigen-decomposition).
pub fn pca_residual_norm(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for p in points {
        let (dx, dy) = (p.0 - mx, p.1 - my);
        sxx += dx * dx / n;
        sxy += dx * dy / n;
        syy += dy * dy / n;
    }
    let tr = sxx + syy;
    let det = sxx * syy - sxy * sxy;
    let disc = (0.25 * tr * tr - det).max(0.0).sqrt();
    let big = 0.5 * tr + disc;
    let small = (0.5 * tr - disc).max(0.0);
    (small / big).sqrt()
}

/// Area of `{x^2 + (y - cy)^2 <= 1, a_x x + a_y y <= 1}` by rows in `y`: each row's
/// extent is exact, rows are summed with composite Gauss–Legendre split at every
/// height where the row structure changes.
pub fn disk_cut_area(cy: f64, a: (f64, f64)) -> f64 {
    let row = |y: f64| -> f64 {
        let h2 = 1.0 - (y - cy).powi(2);
        if h2 <= 0.0 {
            return 0.0;
        }
        let (mut lo, mut hi) = (-h2.sqrt(), h2.sqrt());
        // a_x x <= 1 - a_y y
        let rhs = 1.0 - a.1 * y;
        if a.0 > 0.0 {
            hi = hi.min(rhs / a.0);
        } else if a.0 < 0.0 {
            lo = lo.max(rhs / a.0);
        } else if rhs < 0.0 {
            return 0.0;
        }
        (hi - lo).max(0.0)
    };
    let mut breaks = vec![cy - 1.0, cy + 1.0];
    // Heights where the line crosses the circle.
    let (ax, ay) = a;
    if ax.abs() > 1e-14 {
        // x = (1 - ay y)/ax on the circle: ((1 - ay y)/ax)^2 + (y - cy)^2 = 1
        let qa = (ay / ax).powi(2) + 1.0;
        let qb = -2.0 * ay / (ax * ax) - 2.0 * cy;
        let qc = 1.0 / (ax * ax) + cy * cy - 1.0;
        let disc = qb * qb - 4.0 * qa * qc;
        if disc > 0.0 {
            breaks.push((-qb - disc.sqrt()) / (2.0 * qa));
            breaks.push((-qb + disc.sqrt()) / (2.0 * qa));
        }
    } else if ay.abs() > 1e-14 {
        breaks.push(1.0 / ay);
    }
    breaks.retain(|y| *y >= cy - 1.0 && *y <= cy + 1.0);
    breaks.sort_by(f64::total_cmp);
    let mut total = 0.0;
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            // Substitution removing the square-root endpoint behaviour of the rows.
            let (y0, y1) = (w[0], w[1]);
            let len = y1 - y0;
            total += gauss_legendre(
                |s| {
                    let y = y0 + len * s * s * (3.0 - 2.0 * s);
                    row(y) * 6.0 * len * s * (1.0 - s)
                },
                0.0,
                1.0,
                64,
            );
        }
    }
    total
}
