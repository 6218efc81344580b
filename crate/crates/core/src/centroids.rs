//! Centroid curves, principal-direction line fits, the collinearity residual and
//! verdicts on families of centroid lines.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bodies::ConvexSet;
use crate::error::GeomError;
use crate::sections::{admissible_levels, section_bounded, section_stats, LevelInterval, SectionStats};
use crate::vector::{Point, Vector};

/// Default tolerance of [`classify_lines`], relative to the centroid-cloud scale.
pub const CLASSIFY_TOL: f64 = 1e-5;

/// Ratio of the geometric level grid on half-infinite level intervals.
pub const GEOMETRIC_RATIO: f64 = 1.7;

/// Below this normalized eigenvalue the common-point system is treated as singular.
const SINGULAR_EIGENVALUE: f64 = 1e-10;

/// Least-squares line through a point set.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    /// Mean of the points.
    pub base: Point,
    /// Unit direction, largest-magnitude component positive.
    pub dir: Vector,
    /// RMS distance of the points from the line.
    pub residual_rms: f64,
    /// `residual_rms / spread_rms`, clamped to `[0, 1]`.
    pub residual_norm: f64,
    /// RMS spread of the points along `dir`.
    pub spread_rms: f64,
    pub n_points: usize,
}

impl LineFit {
    /// Distance from `p` to the fitted line.
    pub fn distance(&self, p: &Point) -> f64 {
        let d = *p - self.base;
        (d - self.dir * d.dot(&self.dir)).norm()
    }

    pub fn point_at(&self, s: f64) -> Point {
        self.base + self.dir * s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictTag {
    Concurrent,
    Parallel,
    Neither,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineFamilyVerdict {
    pub tag: VerdictTag,
    /// Common point (concurrent) or common direction (parallel); `None` otherwise.
    pub witness: Option<Vector>,
    /// Max line distance from the common point for concurrent/neither, max pairwise
    /// angle for parallel, worst line residual when a line fit failed the tolerance.
    pub score: f64,
    /// Set on a concurrent verdict whose lines also pass the parallel test.
    pub also_parallel: bool,
    /// Length scale the concurrency tolerance is multiplied by.
    pub scale: f64,
}

/// Centroids of the sections `Π(u, t) ∩ X` for the given levels, in order.
pub fn centroid_curve<S: ConvexSet + ?Sized>(set: &S, u: &Vector, levels: &[f64]) -> Result<Vec<Point>, GeomError> {
    Ok(centroid_curve_stats(set, u, levels)?.into_iter().map(|s| s.centroid).collect())
}

/// As [`centroid_curve`] but keeping the full section statistics.
pub fn centroid_curve_stats<S: ConvexSet + ?Sized>(
    set: &S,
    u: &Vector,
    levels: &[f64],
) -> Result<Vec<SectionStats>, GeomError> {
    if levels.len() < 3 {
        return Err(GeomError::InvalidArgument("a centroid curve needs at least 3 levels".into()));
    }
    levels.iter().map(|&t| section_stats(set, u, t)).collect()
}

/// Principal-direction least-squares line through `points`.
pub fn fit_line(points: &[Point]) -> Result<LineFit, GeomError> {
    let n = points.len();
    if n < 3 {
        return Err(GeomError::DegeneratePointSet);
    }
    let dim = points[0].dim();
    if points.iter().any(|p| p.dim() != dim || !p.is_finite()) {
        return Err(GeomError::DegeneratePointSet);
    }
    let mut mean = Vector::zeros(dim);
    for p in points {
        mean += *p;
    }
    let mean = mean / n as f64;
    let mut cov = DMatrix::<f64>::zeros(dim, dim);
    for p in points {
        let d = DVector::from_column_slice((*p - mean).as_slice());
        cov += &d * d.transpose();
    }
    cov /= n as f64;
    let eig = cov.symmetric_eigen();
    let top = eig.eigenvalues.imax();
    let spread2 = eig.eigenvalues[top];
    if !(spread2 > 0.0) {
        return Err(GeomError::DegeneratePointSet);
    }
    let dir = Vector::from_slice(eig.eigenvectors.column(top).as_slice())?.normalize().canonical_sign();

    let mut perp2 = 0.0;
    let mut along2 = 0.0;
    for p in points {
        let d = *p - mean;
        let s = d.dot(&dir);
        along2 += s * s;
        perp2 += (d - dir * s).norm_squared();
    }
    let spread_rms = (along2 / n as f64).sqrt();
    let residual_rms = (perp2 / n as f64).sqrt();
    Ok(LineFit {
        base: mean,
        dir,
        residual_rms,
        residual_norm: (residual_rms / spread_rms).min(1.0),
        spread_rms,
        n_points: n,
    })
}

/// Levels used to sample a centroid curve.
///
/// A bounded interval gets `n` Chebyshev nodes; a half-infinite interval
/// `(t0, ∞)` gets the geometric grid `t0 + δ r^k` (mirrored for `(-∞, t0)`), with
/// `δ = 0.1 max(1, |t0|)` and `r = 1.7`.
pub fn sample_levels(interval: &LevelInterval, n: usize) -> Result<Vec<f64>, GeomError> {
    let geometric = |t0: f64, sign: f64| -> Vec<f64> {
        let delta = 0.1 * t0.abs().max(1.0);
        (0..n).map(|k| t0 + sign * delta * GEOMETRIC_RATIO.powi(k as i32)).collect()
    };
    match (interval.lower, interval.upper) {
        (Some(lo), Some(hi)) => {
            let mid = 0.5 * (lo + hi);
            let half = 0.5 * (hi - lo);
            Ok((0..n)
                .rev()
                .map(|k| mid + half * ((2 * k + 1) as f64 * std::f64::consts::PI / (2 * n) as f64).cos())
                .collect())
        }
        (Some(lo), None) => Ok(geometric(lo, 1.0)),
        (None, Some(hi)) => Ok(geometric(hi, -1.0)),
        (None, None) => Err(GeomError::InvalidArgument("level interval is unbounded on both sides".into())),
    }
}

/// Samples the centroid curve of direction `u` and fits a line; `residual_norm`
/// measures how far the centroids are from collinear.
pub fn sccp_residual<S: ConvexSet + ?Sized>(set: &S, u: &Vector, n_levels: usize) -> Result<LineFit, GeomError> {
    if n_levels < 8 {
        return Err(GeomError::InvalidArgument(format!("n_levels must be at least 8, got {n_levels}")));
    }
    let interval = admissible_levels(set, u)?;
    let levels = sample_levels(&interval, n_levels)?;
    fit_line(&centroid_curve(set, u, &levels)?)
}

/// [`sccp_residual`] over several directions, evaluated in parallel; results keep
/// the input order.
pub fn sccp_residuals<S: ConvexSet + ?Sized>(
    set: &S,
    directions: &[Vector],
    n_levels: usize,
) -> Vec<Result<LineFit, GeomError>> {
    directions.par_iter().map(|u| sccp_residual(set, u, n_levels)).collect()
}

fn angle_between(a: &Vector, b: &Vector) -> f64 {
    // Undirected angle in [0, π/2].
    let dot = a.dot(b).abs();
    let cross = if a.dim() == 2 { (a[0] * b[1] - a[1] * b[0]).abs() } else { a.cross(b).norm() };
    cross.atan2(dot)
}

fn max_pairwise_angle(lines: &[LineFit]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, a) in lines.iter().enumerate() {
        for b in &lines[i + 1..] {
            worst = worst.max(angle_between(&a.dir, &b.dir));
        }
    }
    worst
}

fn mean_direction(lines: &[LineFit]) -> Vector {
    let reference = lines[0].dir;
    let mut sum = Vector::zeros(reference.dim());
    for l in lines {
        sum += if l.dir.dot(&reference) < 0.0 { -l.dir } else { l.dir };
    }
    sum.normalize().canonical_sign()
}

/// Decides whether a family of lines is concurrent, parallel or neither.
///
/// Lines whose own `residual_norm` exceeds `tol` are not lines at all, and the
/// family is then reported as `neither`. Otherwise the least-squares common point is
/// tried first (distance ≤ `tol·scale`), then parallelism (max pairwise angle ≤ `tol`).
pub fn classify_lines(lines: &[LineFit], tol: f64) -> Result<LineFamilyVerdict, GeomError> {
    if lines.len() < 3 {
        return Err(GeomError::InvalidArgument("classification needs at least 3 lines".into()));
    }
    let dim = lines[0].dir.dim();
    if lines.iter().any(|l| l.dir.dim() != dim) {
        return Err(GeomError::DimensionMismatch { expected: dim, got: lines.iter().map(|l| l.dir.dim()).find(|&d| d != dim).unwrap_or(dim) });
    }

    let mut centre = Vector::zeros(dim);
    for l in lines {
        centre += l.base;
    }
    let centre = centre / lines.len() as f64;
    let scale = lines
        .iter()
        .map(|l| l.spread_rms.max(l.base.distance(&centre)))
        .fold(1.0_f64, f64::max);

    let worst_residual = lines.iter().map(|l| l.residual_norm).fold(0.0_f64, f64::max);
    if worst_residual > tol {
        return Ok(LineFamilyVerdict { tag: VerdictTag::Neither, witness: None, score: worst_residual, also_parallel: false, scale });
    }

    let angle = max_pairwise_angle(lines);
    let parallel = angle <= tol;

    // Normal equations Σ P_i p = Σ P_i b_i with P_i = I - d_i d_iᵀ, in coordinates
    // relative to the family centre for conditioning.
    let mut m = DMatrix::<f64>::zeros(dim, dim);
    let mut rhs = DVector::<f64>::zeros(dim);
    for l in lines {
        let d = DVector::from_column_slice(l.dir.as_slice());
        let p = DMatrix::<f64>::identity(dim, dim) - &d * d.transpose();
        let b = DVector::from_column_slice((l.base - centre).as_slice());
        rhs += &p * b;
        m += p;
    }
    m /= lines.len() as f64;
    rhs /= lines.len() as f64;
    let eig = m.clone().symmetric_eigen();
    let smallest = eig.eigenvalues.min();
    if smallest >= SINGULAR_EIGENVALUE {
        let inv = &eig.eigenvectors
            * DMatrix::from_diagonal(&eig.eigenvalues.map(|v| 1.0 / v))
            * eig.eigenvectors.transpose();
        let sol = inv * rhs;
        let p = centre + Vector::from_slice(sol.as_slice())?;
        let max_dist = lines.iter().map(|l| l.distance(&p)).fold(0.0_f64, f64::max);
        if max_dist <= tol * scale {
            return Ok(LineFamilyVerdict { tag: VerdictTag::Concurrent, witness: Some(p), score: max_dist, also_parallel: parallel, scale });
        }
        if !parallel {
            return Ok(LineFamilyVerdict { tag: VerdictTag::Neither, witness: None, score: max_dist, also_parallel: false, scale });
        }
    }
    if parallel {
        Ok(LineFamilyVerdict { tag: VerdictTag::Parallel, witness: Some(mean_direction(lines)), score: angle, also_parallel: false, scale })
    } else {
        Ok(LineFamilyVerdict { tag: VerdictTag::Neither, witness: None, score: angle, also_parallel: false, scale })
    }
}

/// Angle (radians, in `[0, π/2]`) between the centroid line of `set` in direction
/// `u` and the centroid line of its recession cone in the same direction.
pub fn cone_direction_check<S: ConvexSet + ?Sized>(set: &S, u: &Vector) -> Result<f64, GeomError> {
    let cone = set.recession();
    if !cone.is_full_dimensional() || !section_bounded(&cone, u) {
        return Err(GeomError::ConeSectionUnbounded);
    }
    let body_line = sccp_residual(set, u, 12)?;
    let interval = admissible_levels(&cone, u).map_err(|_| GeomError::ConeSectionUnbounded)?;
    let (t1, t2) = match (interval.lower, interval.upper) {
        (Some(lo), None) => (lo + 1.0, lo + 2.0),
        (None, Some(hi)) => (hi - 1.0, hi - 2.0),
        _ => return Err(GeomError::ConeSectionUnbounded),
    };
    let c1 = section_stats(&cone, u, t1).map_err(|_| GeomError::ConeSectionUnbounded)?;
    let c2 = section_stats(&cone, u, t2).map_err(|_| GeomError::ConeSectionUnbounded)?;
    let cone_dir = (c2.centroid - c1.centroid).try_normalize().ok_or(GeomError::ConeSectionUnbounded)?;
    Ok(angle_between(&body_line.dir, &cone_dir))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::BodySpec;
    use approx::assert_relative_eq;

    #[test]
    fn centroid_curve_examples() {
        let disk = BodySpec::ball(2, 1.0).unwrap();
        let pts = centroid_curve(&disk, &Vector::xy(1.0, 0.0), &[-0.5, 0.0, 0.5]).unwrap();
        for (p, x) in pts.iter().zip([-0.5, 0.0, 0.5]) {
            assert_relative_eq!(p.as_slice(), &[x, 0.0][..], epsilon = 1e-12);
        }
        // Chords y = x + c of y = x^2 have midpoint abscissa 1/2.
        let parabola = BodySpec::paraboloid(&[1.0]).unwrap();
        let u = Vector::xy(-1.0, 1.0).normalize();
        let levels: Vec<f64> = [0.5, 1.0, 3.0].iter().map(|c| c / 2f64.sqrt()).collect();
        for p in centroid_curve(&parabola, &u, &levels).unwrap() {
            assert_relative_eq!(p[0], 0.5, epsilon = 1e-12);
        }
        // Chords of slope 1/2 of y = sqrt(1 + x^2): midpoints c/(1 - m^2) (m, 1).
        let hyperbola = BodySpec::hyperboloid_sheet(&[1.0]).unwrap();
        let u = Vector::xy(-0.5, 1.0).normalize();
        for c in [1.0, 2.0, 5.0] {
            let p = centroid_curve(&hyperbola, &u, &[c * u[1], c * u[1] * 1.5, c * u[1] * 2.0]).unwrap()[0];
            let expect = Vector::xy(0.5, 1.0) * (c / 0.75);
            assert_relative_eq!(p.as_slice(), expect.as_slice(), epsilon = 1e-10);
        }
    }

    #[test]
    fn fit_line_examples() {
        let f = fit_line(&[Vector::xy(0.0, 0.0), Vector::xy(1.0, 1.0), Vector::xy(2.0, 2.0)]).unwrap();
        assert_relative_eq!(f.dir.as_slice(), Vector::xy(1.0, 1.0).normalize().as_slice(), epsilon = 1e-14);
        assert!(f.residual_rms < 1e-15);
        let f = fit_line(&[Vector::xy(0.0, 0.0), Vector::xy(1.0, 0.0), Vector::xy(0.0, 1.0)]).unwrap();
        assert!(f.residual_norm > 0.3, "{}", f.residual_norm);
        assert_eq!(fit_line(&[Vector::xy(1.0, 1.0); 4]), Err(GeomError::DegeneratePointSet));
        assert_eq!(fit_line(&[Vector::xy(1.0, 1.0); 2]), Err(GeomError::DegeneratePointSet));
    }

    #[test]
    fn chebyshev_and_geometric_levels() {
        let l = sample_levels(&LevelInterval { lower: Some(-1.0), upper: Some(1.0) }, 16).unwrap();
        assert_eq!(l.len(), 16);
        assert!(l.windows(2).all(|w| w[0] < w[1]));
        assert!(l[0] > -1.0 && l[15] < 1.0);
        let g = sample_levels(&LevelInterval { lower: Some(1.0), upper: None }, 12).unwrap();
        assert_relative_eq!(g[0], 1.1);
        assert_relative_eq!(g[11], 1.0 + 0.1 * 1.7f64.powi(11));
    }

    #[test]
    fn sccp_examples() {
        let ellipse = BodySpec::ellipsoid(&[2.0, 1.0]).unwrap();
        let f = sccp_residual(&ellipse, &Vector::xy(1.0, 1.0).normalize(), 16).unwrap();
        assert!(f.residual_norm <= 1e-6, "{}", f.residual_norm);

        let superellipse = BodySpec::superellipsoid(4.0, &[1.0, 1.0]).unwrap();
        let f = sccp_residual(&superellipse, &Vector::xy(1.0, 2.0).normalize(), 16).unwrap();
        assert!(f.residual_norm >= 1e-3, "{}", f.residual_norm);

        let parabola = BodySpec::paraboloid(&[1.0]).unwrap();
        let f = sccp_residual(&parabola, &Vector::xy(0.3, 1.0).normalize(), 12).unwrap();
        assert!(f.residual_norm <= 1e-6);
        assert_relative_eq!(f.dir.as_slice(), &[0.0, 1.0][..], epsilon = 1e-9);

        assert!(matches!(sccp_residual(&parabola, &Vector::xy(0.0, 1.0), 4), Err(GeomError::InvalidArgument(_))));
    }

    #[test]
    fn classify_examples() {
        let sphere = BodySpec::ball(3, 1.0).unwrap();
        let dirs = sphere.admissible_normal_grid(20);
        let lines: Vec<LineFit> = sccp_residuals(&sphere, &dirs, 16).into_iter().map(Result::unwrap).collect();
        let v = classify_lines(&lines, CLASSIFY_TOL).unwrap();
        assert_eq!(v.tag, VerdictTag::Concurrent);
        assert!(v.witness.unwrap().norm() < 1e-8);

        let parabola = BodySpec::paraboloid(&[1.0]).unwrap();
        let dirs = parabola.admissible_normal_grid(10);
        let lines: Vec<LineFit> = sccp_residuals(&parabola, &dirs, 12).into_iter().map(Result::unwrap).collect();
        let v = classify_lines(&lines, CLASSIFY_TOL).unwrap();
        assert_eq!(v.tag, VerdictTag::Parallel);
        assert_relative_eq!(v.witness.unwrap().as_slice(), &[0.0, 1.0][..], epsilon = 1e-8);

        let hyperbola = BodySpec::hyperboloid_sheet(&[1.0]).unwrap();
        let dirs = hyperbola.admissible_normal_grid(10);
        let lines: Vec<LineFit> = sccp_residuals(&hyperbola, &dirs, 12).into_iter().map(Result::unwrap).collect();
        let v = classify_lines(&lines, CLASSIFY_TOL).unwrap();
        assert_eq!(v.tag, VerdictTag::Concurrent);
        assert!(v.witness.unwrap().norm() < 1e-5 * v.scale);
    }

    #[test]
    fn cone_direction_examples() {
        let hyperbola = BodySpec::hyperboloid_sheet(&[1.0]).unwrap();
        assert!(cone_direction_check(&hyperbola, &Vector::xy(0.0, 1.0)).unwrap() < 1e-9);
        let u = hyperbola.outer_normal(&Vector::xy(1.0, 2f64.sqrt())).unwrap();
        assert!(cone_direction_check(&hyperbola, &-u).unwrap() <= 1e-6);
        let parabola = BodySpec::paraboloid(&[1.0]).unwrap();
        assert_eq!(cone_direction_check(&parabola, &Vector::xy(0.0, 1.0)), Err(GeomError::ConeSectionUnbounded));
    }
}
