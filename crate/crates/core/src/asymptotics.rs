//! Distances between a body boundary and a cone on large spheres.
//!
//! `∂X ∩ S_R` is found on the graph parameterization `x' ↦ T + (x', g(x'))`: in the
//! plane by root finding along both half-lines of `x'`, in space by one root per
//! azimuth of `x'` (720 azimuths plus one refinement pass). Cone boundaries on
//! spheres are closed form. Distances are symmetric Hausdorff distances between
//! the sampled sets; one-sided values are kept for reporting.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bodies::{BodyKind, BodySpec, ConeDescriptor, ConeShape, ConvexSet};
use crate::error::GeomError;
use crate::vector::{Point, Vector};

/// Azimuthal samples of a spatial shell curve before refinement.
pub const SHELL_SAMPLES: usize = 720;

/// Distances between `∂X ∩ S_R` and `∂C ∩ S_R`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShellDistance {
    #[serde(rename = "R")]
    pub r: f64,
    /// Symmetric Hausdorff distance.
    pub d_asym: f64,
    /// `d_asym / R`: the same distance after scaling both sets to the unit sphere.
    pub d_blowdown: f64,
    /// `sup` over body shell points of the distance to the cone shell.
    pub body_to_cone: f64,
    /// `sup` over cone shell points of the distance to the body shell.
    pub cone_to_body: f64,
    /// Sampling error bound (half the largest gap between neighbouring samples).
    pub err: f64,
    pub n_body_points: usize,
    pub n_cone_points: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AsymptoticVerdict {
    Asymptotic,
    NotAsymptotic,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticReport {
    pub verdict: AsymptoticVerdict,
    pub distances: Vec<ShellDistance>,
}

type Eval<'a> = Box<dyn Fn(f64) -> Option<Point> + Sync + 'a>;

/// Shell component: an isolated point, or a parameterized curve sampled at
/// increasing parameters (closed curves have period `2π`).
struct Curve<'a> {
    params: Vec<f64>,
    points: Vec<Point>,
    closed: bool,
    eval: Option<Eval<'a>>,
}

impl<'a> Curve<'a> {
    fn point(p: Point) -> Self {
        Self { params: vec![0.0], points: vec![p], closed: false, eval: None }
    }

    fn sampled(params: Vec<f64>, closed: bool, eval: Eval<'a>) -> Option<Self> {
        let points = params.iter().map(|&t| eval(t)).collect::<Option<Vec<_>>>()?;
        Some(Self { params, points, closed, eval: Some(eval) })
    }

    fn len(&self) -> usize {
        self.points.len()
    }

    /// Neighbour of sample `i` in direction `step` (±1) with its parameter,
    /// unwrapped across the period of closed curves.
    fn neighbour(&self, i: usize, step: isize) -> Option<f64> {
        let n = self.len() as isize;
        let j = i as isize + step;
        if (0..n).contains(&j) {
            Some(self.params[j as usize])
        } else if self.closed {
            let wrapped = self.params[j.rem_euclid(n) as usize];
            Some(wrapped + if step > 0 { 2.0 * PI } else { -2.0 * PI })
        } else {
            None
        }
    }

    /// Distance from `p`: nearest sample, then a golden-section search on the
    /// exact curve between the neighbouring samples.
    fn distance_to(&self, p: &Point) -> f64 {
        let (i, best) = self
            .points
            .iter()
            .enumerate()
            .map(|(i, q)| (i, q.distance(p)))
            .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
        let Some(eval) = &self.eval else { return best };
        let lo = self.neighbour(i, -1).unwrap_or(self.params[i]);
        let hi = self.neighbour(i, 1).unwrap_or(self.params[i]);
        let f = |t: f64| eval(t).map_or(f64::INFINITY, |q| q.distance(p));
        best.min(golden_min(f, lo, hi))
    }
}

fn golden_min<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..80 {
        if hi - lo <= 1e-13 * (1.0 + lo.abs().max(hi.abs())) {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    f1.min(f2)
}

fn set_distance(p: &Point, set: &[Curve]) -> f64 {
    set.iter().map(|c| c.distance_to(p)).fold(f64::INFINITY, f64::min)
}

/// Sup over the samples of `from` of the distance to `to`, with the Lipschitz
/// bound on what the sup between neighbouring samples can add.
fn one_sided(from: &[Curve], to: &[Curve]) -> (f64, f64) {
    let mut sup: f64 = 0.0;
    let mut err: f64 = 0.0;
    for curve in from {
        let d: Vec<f64> = curve.points.par_iter().map(|p| set_distance(p, to)).collect();
        sup = d.iter().copied().fold(sup, f64::max);
        let n = d.len();
        let pairs = if curve.closed { n } else { n.saturating_sub(1) };
        for i in 0..pairs {
            err = err.max(0.5 * (d[(i + 1) % n] - d[i]).abs());
        }
    }
    (sup, err)
}

/// First root of `|p(s)| = R` along `s >= 0`, for a path starting inside the ball.
fn radial_root<F: Fn(f64) -> Point>(path: F, r: f64) -> Option<Point> {
    let excess = |s: f64| path(s).norm() - r;
    let mut lo = 0.0;
    let mut hi = 1.0;
    while excess(hi) < 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > 1e15 * r.max(1.0) {
            return None;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if excess(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(path(0.5 * (lo + hi)))
}

fn uniform_angles(n: usize) -> Vec<f64> {
    (0..n).map(|k| 2.0 * PI * k as f64 / n as f64).collect()
}

fn body_shell(body: &BodySpec, r: f64) -> Result<Vec<Curve<'_>>, GeomError> {
    let d = body.dim();
    let t = body.translation();
    if body.height(&vec![0.0; d - 1]).is_none() {
        return Err(GeomError::EmptyShellIntersection);
    }
    let lift = move |xp: &[f64]| -> Point {
        let mut p = Vector::zeros(d);
        for (i, x) in xp.iter().enumerate() {
            p[i] = *x;
        }
        p[d - 1] = body.height(xp).unwrap();
        p + t
    };
    if lift(&vec![0.0; d - 1]).norm() >= r {
        return Err(GeomError::EmptyShellIntersection);
    }
    if d == 2 {
        let mut out = Vec::new();
        for sign in [-1.0, 1.0] {
            let p = radial_root(|s| lift(&[sign * s]), r).ok_or(GeomError::EmptyShellIntersection)?;
            out.push(Curve::point(p));
        }
        return Ok(out);
    }
    let at = move |phi: f64| {
        let (s, c) = phi.sin_cos();
        radial_root(|rho| lift(&[rho * c, rho * s]), r)
    };
    let coarse = Curve::sampled(uniform_angles(SHELL_SAMPLES), true, Box::new(at))
        .ok_or(GeomError::EmptyShellIntersection)?;
    Ok(vec![refine(coarse).ok_or(GeomError::EmptyShellIntersection)?])
}

/// One refinement pass: bisect the parameter of every gap longer than twice the
/// mean gap.
fn refine(curve: Curve<'_>) -> Option<Curve<'_>> {
    let n = curve.len();
    let gap = |i: usize| curve.points[i].distance(&curve.points[(i + 1) % n]);
    let mean = (0..n).map(gap).sum::<f64>() / n as f64;
    let mut params = Vec::with_capacity(2 * n);
    for i in 0..n {
        params.push(curve.params[i]);
        if gap(i) > 2.0 * mean {
            params.push(0.5 * (curve.params[i] + curve.neighbour(i, 1)?));
        }
    }
    Curve::sampled(params, true, curve.eval?)
}

fn cone_shell(cone: &ConeDescriptor, r: f64) -> Result<Vec<Curve<'static>>, GeomError> {
    let d = cone.ambient_dim;
    match cone.shape {
        ConeShape::Origin => Err(GeomError::EmptyShellIntersection),
        ConeShape::Ray { direction } => Ok(vec![Curve::point(direction * r)]),
        ConeShape::Elliptic { axes } => {
            if d == 2 {
                let y = r / (1.0 + axes[0] * axes[0]).sqrt();
                return Ok(vec![Curve::point(Vector::xy(-axes[0] * y, y)), Curve::point(Vector::xy(axes[0] * y, y))]);
            }
            let at = move |phi: f64| {
                let (s, c) = phi.sin_cos();
                let (x1, x2) = (axes[0] * c, axes[1] * s);
                let y = r / (1.0 + x1 * x1 + x2 * x2).sqrt();
                Some(Vector::xyz(x1 * y, x2 * y, y))
            };
            Ok(vec![Curve::sampled(uniform_angles(SHELL_SAMPLES), true, Box::new(at)).unwrap()])
        }
        ConeShape::NegativeOrthant => {
            let top = Vector::basis(d, d - 1) * r;
            if d == 2 {
                return Ok(vec![Curve::point(Vector::xy(-r, 0.0)), Curve::point(top)]);
            }
            let a = Vector::xyz(-r, 0.0, 0.0);
            let b = Vector::xyz(0.0, -r, 0.0);
            let n = SHELL_SAMPLES / 3;
            let params: Vec<f64> = (0..=n).map(|k| FRAC_PI_2 * k as f64 / n as f64).collect();
            // Quarter great circles between orthogonal points of S_R.
            let arc = |from: Point, to: Point| {
                let at = move |s: f64| Some(from * s.cos() + to * s.sin());
                Curve::sampled(params.clone(), false, Box::new(at)).unwrap()
            };
            Ok(vec![arc(top, a), arc(top, b), arc(a, b)])
        }
    }
}

/// Hausdorff distances between `∂X ∩ S_R` and `∂C ∩ S_R`.
pub fn shell_distance(body: &BodySpec, cone: &ConeDescriptor, r: f64) -> Result<ShellDistance, GeomError> {
    if cone.ambient_dim != body.dim() {
        return Err(GeomError::DimensionMismatch { expected: body.dim(), got: cone.ambient_dim });
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(GeomError::InvalidArgument(format!("radius must be positive, got {r}")));
    }
    if body.is_bounded() {
        return Err(GeomError::EmptyShellIntersection);
    }
    let body_pts = body_shell(body, r)?;
    let cone_pts = cone_shell(cone, r)?;
    let (body_to_cone, e1) = one_sided(&body_pts, &cone_pts);
    let (cone_to_body, e2) = one_sided(&cone_pts, &body_pts);
    let d_asym = body_to_cone.max(cone_to_body);
    Ok(ShellDistance {
        r,
        d_asym,
        d_blowdown: d_asym / r,
        body_to_cone,
        cone_to_body,
        err: e1.max(e2) + 1e-12 * r,
        n_body_points: body_pts.iter().map(Curve::len).sum(),
        n_cone_points: cone_pts.iter().map(Curve::len).sum(),
    })
}

/// Anchor `x0` of the blow-down: the cone apex (local origin) for bodies asymptotic
/// to a cone, the interior point otherwise.
pub fn blowdown_anchor(body: &BodySpec) -> Point {
    match body.kind() {
        BodyKind::HyperboloidSheet { .. } | BodyKind::CircularCone { .. } => body.translation(),
        _ => body.interior_point(),
    }
}

/// Blow-down distance of `(X - x0)/R` from the recession cone on the unit sphere,
/// with `x0` from [`blowdown_anchor`].
pub fn blowdown_check(body: &BodySpec, r: f64) -> Result<f64, GeomError> {
    if body.is_bounded() {
        return Err(GeomError::EmptyShellIntersection);
    }
    let x0 = blowdown_anchor(body);
    let shifted = body.clone().translated(-x0)?;
    Ok(shell_distance(&shifted, &body.recession_cone(), r)?.d_blowdown)
}

/// Trend of `d_asym(R)` against the recession cone over increasing radii.
///
/// Asymptotic when the distances decrease strictly and end below a tenth of the
/// first value (or at the sampling-error floor); not asymptotic when the last three
/// are nondecreasing; inconclusive otherwise.
pub fn asymptotic_diagnostic(body: &BodySpec, radii: &[f64]) -> Result<AsymptoticReport, GeomError> {
    if radii.len() < 4 {
        return Err(GeomError::InvalidArgument("need at least 4 radii".into()));
    }
    if radii.windows(2).any(|w| !(w[1] > w[0])) || !(radii[0] > 0.0) {
        return Err(GeomError::InvalidArgument("radii must be positive and increasing".into()));
    }
    if radii[radii.len() - 1] < 100.0 * radii[0] {
        return Err(GeomError::InvalidArgument("radii must span at least two decades".into()));
    }
    let cone = body.recession_cone();
    let distances = radii
        .par_iter()
        .map(|&r| shell_distance(body, &cone, r))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(AsymptoticReport { verdict: distance_trend(&distances)?, distances })
}

/// Verdict rule of [`asymptotic_diagnostic`] applied to precomputed distances in
/// increasing-radius order (at least three).
pub fn distance_trend(distances: &[ShellDistance]) -> Result<AsymptoticVerdict, GeomError> {
    if distances.len() < 3 {
        return Err(GeomError::InvalidArgument("need at least 3 distances".into()));
    }
    Ok(trend_verdict(distances))
}

fn trend_verdict(distances: &[ShellDistance]) -> AsymptoticVerdict {
    let last = distances[distances.len() - 1];
    if last.d_asym <= last.err {
        return AsymptoticVerdict::Asymptotic;
    }
    let d: Vec<f64> = distances.iter().map(|s| s.d_asym).collect();
    let decreasing = d.windows(2).all(|w| w[1] < w[0]);
    if decreasing && d[d.len() - 1] < 0.1 * d[0] {
        return AsymptoticVerdict::Asymptotic;
    }
    let tail = &d[d.len() - 3..];
    if tail[0] <= tail[1] && tail[1] <= tail[2] {
        AsymptoticVerdict::NotAsymptotic
    } else {
        AsymptoticVerdict::Inconclusive
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::Profile;

    fn hyperbola() -> BodySpec {
        BodySpec::hyperboloid_sheet(&[1.0]).unwrap()
    }

    fn exp() -> BodySpec {
        BodySpec::function_epigraph(2, Profile::Exp).unwrap()
    }

    #[test]
    fn shell_examples() {
        let h = hyperbola();
        let s = shell_distance(&h, &h.recession_cone(), 100.0).unwrap();
        assert!(s.d_asym <= 0.01, "{s:?}");
        assert!((s.d_blowdown * s.r - s.d_asym).abs() <= 1e-12 * s.d_asym.max(1.0));

        let e = exp();
        let s = shell_distance(&e, &e.recession_cone(), 100.0).unwrap();
        assert!(s.d_asym >= 2.0, "{s:?}");

        let cone = BodySpec::circular_cone(2, 1.0).unwrap();
        assert!(shell_distance(&cone, &cone.recession_cone(), 50.0).unwrap().d_asym < 1e-12);
        let cone3 = BodySpec::circular_cone(3, 2.0).unwrap();
        assert!(shell_distance(&cone3, &cone3.recession_cone(), 50.0).unwrap().d_asym < 1e-10);
    }

    #[test]
    fn shell_errors() {
        let ball = BodySpec::ball(2, 1.0).unwrap();
        assert_eq!(shell_distance(&ball, &ball.recession_cone(), 10.0), Err(GeomError::EmptyShellIntersection));
        assert_eq!(blowdown_check(&ball, 10.0), Err(GeomError::EmptyShellIntersection));
        let far = hyperbola().translated(Vector::xy(0.0, 50.0)).unwrap();
        assert_eq!(shell_distance(&far, &far.recession_cone(), 10.0), Err(GeomError::EmptyShellIntersection));
    }

    #[test]
    fn blowdown_examples() {
        assert!(blowdown_check(&exp(), 1e4).unwrap() <= 1e-3);
        assert!(blowdown_check(&hyperbola(), 1e3).unwrap() <= 1e-5);
        let p = BodySpec::paraboloid(&[1.0]).unwrap();
        let ratio = blowdown_check(&p, 1e2).unwrap() / blowdown_check(&p, 1e4).unwrap();
        assert!(ratio >= 10.0, "{ratio}");
    }

    #[test]
    fn blowdown_ignores_translation() {
        let moved = hyperbola().translated(Vector::xy(3.0, -7.0)).unwrap();
        let a = blowdown_check(&hyperbola(), 1e3).unwrap();
        let b = blowdown_check(&moved, 1e3).unwrap();
        assert!((a - b).abs() <= 1e-12, "{a} vs {b}");
    }

    #[test]
    fn diagnostic_examples() {
        let radii = [10.0, 1e2, 1e3, 1e4];
        assert_eq!(asymptotic_diagnostic(&hyperbola(), &radii).unwrap().verdict, AsymptoticVerdict::Asymptotic);
        assert_eq!(asymptotic_diagnostic(&exp(), &radii).unwrap().verdict, AsymptoticVerdict::NotAsymptotic);
        let p = BodySpec::paraboloid(&[1.0]).unwrap();
        assert_eq!(asymptotic_diagnostic(&p, &radii).unwrap().verdict, AsymptoticVerdict::NotAsymptotic);
        assert!(asymptotic_diagnostic(&p, &radii[..3]).is_err());
    }

    #[test]
    fn spatial_hyperboloid_approaches_its_cone() {
        let h = BodySpec::hyperboloid_sheet(&[1.0, 2.0]).unwrap();
        let near = shell_distance(&h, &h.recession_cone(), 100.0).unwrap();
        let far = shell_distance(&h, &h.recession_cone(), 1000.0).unwrap();
        assert!(far.d_asym < near.d_asym, "{near:?} {far:?}");
        assert!(far.d_asym <= 0.05 + far.err, "{far:?}");
    }
}
