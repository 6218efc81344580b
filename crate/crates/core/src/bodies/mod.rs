//! Catalog of convex bodies with exact oracles.
//!
//! Every body is described in local coordinates `(x', y)`, `y` being the last axis,
//! and then translated. Unbounded kinds are epigraphs `y >= g(x')` of convex
//! functions, so "vertical" always means the last coordinate axis.
//!
//! | kind | local set | params |
//! |------|-----------|--------|
//! | `ellipsoid` | `sum (x_i/a_i)^2 <= 1` | `a_1..a_d` |
//! | `elliptic-paraboloid-epigraph` | `y >= sum c_i x_i^2` | `c_1..c_n` |
//! | `hyperboloid-upper-sheet` | `y >= sqrt(1 + sum (x_i/a_i)^2)` | `a_1..a_n` |
//! | `circular-cone` | `y >= c |x'|` | `c` |
//! | `function-epigraph` | `y >= sum f(x_i)`, `f` in {square, quartic, exp, cosh} | none |
//! | `superellipsoid` | `sum |x_i/a_i|^p <= 1` | `p` or `p, a_1..a_d` |

mod cone;
mod repr;

pub use cone::{ConeDescriptor, ConeShape};
pub use repr::BodySpecRepr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::GeomError;
use crate::ext_real::ExtReal;
use crate::quadrature::minimize_convex;
use crate::vector::{Point, Vector};

/// Running maxima above this value are declared divergent when computing the
/// support function of a function epigraph numerically.
pub const SUPPORT_DIVERGENCE: f64 = 1e12;

/// Relative radius of the ball that must fit inside a body around a ray origin.
pub const INTERIOR_MARGIN: f64 = 1e-6;

const UNIT_TOL: f64 = 1e-12;

/// Oracles shared by bodies and by recession cones, so that the section machinery
/// can run on either.
pub trait ConvexSet: Sync {
    fn dim(&self) -> usize;

    /// A convex function that is `<= 0` exactly on the set.
    fn defining_function(&self, x: &Point) -> f64;

    fn contains(&self, x: &Point) -> bool {
        self.defining_function(x) <= 0.0
    }

    /// `sup <u, y>` over the set.
    fn support(&self, u: &Vector) -> ExtReal;

    /// True iff `d` lies in the recession cone.
    fn recedes_along(&self, d: &Vector) -> bool;

    fn recession(&self) -> ConeDescriptor;

    /// Characteristic length used for tolerances and initial step sizes.
    fn scale(&self) -> f64;
}

/// Profiles `f` for the function-epigraph kind.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Square,
    Quartic,
    Exp,
    Cosh,
}

impl Profile {
    pub fn value(self, x: f64) -> f64 {
        match self {
            Profile::Square => x * x,
            Profile::Quartic => (x * x) * (x * x),
            Profile::Exp => x.exp(),
            Profile::Cosh => x.cosh(),
        }
    }

    pub fn slope(self, x: f64) -> f64 {
        match self {
            Profile::Square => 2.0 * x,
            Profile::Quartic => 4.0 * x * x * x,
            Profile::Exp => x.exp(),
            Profile::Cosh => x.sinh(),
        }
    }

    /// The unique `x` with `f'(x) = r`, if any.
    pub fn slope_inverse(self, r: f64) -> Option<f64> {
        match self {
            Profile::Square => Some(r / 2.0),
            Profile::Quartic => Some((r / 4.0).cbrt()),
            Profile::Exp => (r > 0.0).then(|| r.ln()),
            Profile::Cosh => Some(r.asinh()),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Profile::Square => "square",
            Profile::Quartic => "quartic",
            Profile::Exp => "exp",
            Profile::Cosh => "cosh",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "square" => Some(Profile::Square),
            "quartic" => Some(Profile::Quartic),
            "exp" => Some(Profile::Exp),
            "cosh" => Some(Profile::Cosh),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum BodyKind {
    Ellipsoid { semi_axes: Vec<f64> },
    Paraboloid { coeffs: Vec<f64> },
    HyperboloidSheet { semi_axes: Vec<f64> },
    CircularCone { slope: f64 },
    FunctionEpigraph { profile: Profile },
    Superellipsoid { exponent: f64, semi_axes: Vec<f64> },
}

impl BodyKind {
    pub fn name(&self) -> &'static str {
        match self {
            BodyKind::Ellipsoid { .. } => "ellipsoid",
            BodyKind::Paraboloid { .. } => "elliptic-paraboloid-epigraph",
            BodyKind::HyperboloidSheet { .. } => "hyperboloid-upper-sheet",
            BodyKind::CircularCone { .. } => "circular-cone",
            BodyKind::FunctionEpigraph { .. } => "function-epigraph",
            BodyKind::Superellipsoid { .. } => "superellipsoid",
        }
    }
}

/// Immutable parametric description of a closed convex body in R^2 or R^3.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BodySpecRepr", into = "BodySpecRepr")]
pub struct BodySpec {
    kind: BodyKind,
    translation: Vector,
}

fn check_positive(name: &str, values: &[f64]) -> Result<(), GeomError> {
    if values.iter().all(|v| v.is_finite() && *v > 0.0) {
        Ok(())
    } else {
        Err(GeomError::InvalidSpec(format!("{name} must be finite and strictly positive, got {values:?}")))
    }
}

fn check_len(name: &str, values: &[f64], expected: usize) -> Result<(), GeomError> {
    if values.len() == expected {
        Ok(())
    } else {
        Err(GeomError::InvalidSpec(format!("{name} needs {expected} values, got {}", values.len())))
    }
}

fn check_dim(dim: usize) -> Result<(), GeomError> {
    if dim == 2 || dim == 3 {
        Ok(())
    } else {
        Err(GeomError::InvalidSpec(format!("ambient dimension must be 2 or 3, got {dim}")))
    }
}

impl BodySpec {
    /// Validates and builds a body centered at the origin of its local frame.
    pub fn new(kind: BodyKind, dim: usize) -> Result<Self, GeomError> {
        check_dim(dim)?;
        match &kind {
            BodyKind::Ellipsoid { semi_axes } => {
                check_len("ellipsoid semi-axes", semi_axes, dim)?;
                check_positive("ellipsoid semi-axes", semi_axes)?;
            }
            BodyKind::Paraboloid { coeffs } => {
                check_len("paraboloid coefficients", coeffs, dim - 1)?;
                check_positive("paraboloid coefficients", coeffs)?;
            }
            BodyKind::HyperboloidSheet { semi_axes } => {
                check_len("hyperboloid semi-axes", semi_axes, dim - 1)?;
                check_positive("hyperboloid semi-axes", semi_axes)?;
            }
            BodyKind::CircularCone { slope } => check_positive("cone slope", &[*slope])?,
            BodyKind::FunctionEpigraph { .. } => {}
            BodyKind::Superellipsoid { exponent, semi_axes } => {
                check_len("superellipsoid semi-axes", semi_axes, dim)?;
                check_positive("superellipsoid semi-axes", semi_axes)?;
                if !(exponent.is_finite() && *exponent >= 2.0) {
                    return Err(GeomError::InvalidSpec(format!("superellipsoid exponent must be >= 2, got {exponent}")));
                }
            }
        }
        Ok(Self { kind, translation: Vector::zeros(dim) })
    }

    pub fn ellipsoid(semi_axes: &[f64]) -> Result<Self, GeomError> {
        Self::new(BodyKind::Ellipsoid { semi_axes: semi_axes.to_vec() }, semi_axes.len())
    }

    pub fn ball(dim: usize, radius: f64) -> Result<Self, GeomError> {
        Self::ellipsoid(&vec![radius; dim])
    }

    /// `y >= sum c_i x_i^2`.
    pub fn paraboloid(coeffs: &[f64]) -> Result<Self, GeomError> {
        Self::new(BodyKind::Paraboloid { coeffs: coeffs.to_vec() }, coeffs.len() + 1)
    }

    /// `y >= sqrt(1 + sum (x_i/a_i)^2)`.
    pub fn hyperboloid_sheet(semi_axes: &[f64]) -> Result<Self, GeomError> {
        Self::new(BodyKind::HyperboloidSheet { semi_axes: semi_axes.to_vec() }, semi_axes.len() + 1)
    }

    /// `y >= slope * |x'|`.
    pub fn circular_cone(dim: usize, slope: f64) -> Result<Self, GeomError> {
        Self::new(BodyKind::CircularCone { slope }, dim)
    }

    /// `y >= sum f(x_i)`.
    pub fn function_epigraph(dim: usize, profile: Profile) -> Result<Self, GeomError> {
        Self::new(BodyKind::FunctionEpigraph { profile }, dim)
    }

    /// `sum |x_i/a_i|^p <= 1`.
    pub fn superellipsoid(exponent: f64, semi_axes: &[f64]) -> Result<Self, GeomError> {
        Self::new(BodyKind::Superellipsoid { exponent, semi_axes: semi_axes.to_vec() }, semi_axes.len())
    }

    pub fn translated(mut self, offset: Vector) -> Result<Self, GeomError> {
        if offset.dim() != self.dim() {
            return Err(GeomError::DimensionMismatch { expected: self.dim(), got: offset.dim() });
        }
        if !offset.is_finite() {
            return Err(GeomError::InvalidSpec("translation must be finite".into()));
        }
        self.translation += offset;
        Ok(self)
    }

    pub fn kind(&self) -> &BodyKind {
        &self.kind
    }

    pub fn translation(&self) -> Vector {
        self.translation
    }

    /// Same body with its local frame moved back to the origin.
    pub fn centered(&self) -> Self {
        Self { kind: self.kind.clone(), translation: Vector::zeros(self.dim()) }
    }

    pub fn is_bounded(&self) -> bool {
        matches!(self.kind, BodyKind::Ellipsoid { .. } | BodyKind::Superellipsoid { .. })
    }

    /// Epigraph of a smooth function over the `x'` hyperplane.
    pub fn is_graph_like(&self) -> bool {
        matches!(
            self.kind,
            BodyKind::Paraboloid { .. } | BodyKind::FunctionEpigraph { .. } | BodyKind::HyperboloidSheet { .. }
        )
    }

    /// Height function `g(x')` of the graph-like and conical kinds.
    pub fn height(&self, xp: &[f64]) -> Option<f64> {
        match &self.kind {
            BodyKind::Paraboloid { coeffs } => Some(coeffs.iter().zip(xp).map(|(c, x)| c * x * x).sum()),
            BodyKind::HyperboloidSheet { semi_axes } => {
                Some((1.0 + semi_axes.iter().zip(xp).map(|(a, x)| (x / a).powi(2)).sum::<f64>()).sqrt())
            }
            BodyKind::CircularCone { slope } => Some(slope * xp.iter().map(|x| x * x).sum::<f64>().sqrt()),
            BodyKind::FunctionEpigraph { profile } => Some(xp.iter().map(|x| profile.value(*x)).sum()),
            _ => None,
        }
    }

    fn local(&self, x: &Point) -> Vector {
        *x - self.translation
    }

    fn n(&self) -> usize {
        self.dim() - 1
    }

    fn check_point(&self, x: &Vector) -> Result<(), GeomError> {
        if x.dim() != self.dim() {
            Err(GeomError::DimensionMismatch { expected: self.dim(), got: x.dim() })
        } else {
            Ok(())
        }
    }

    fn check_unit(&self, u: &Vector) -> Result<(), GeomError> {
        self.check_point(u)?;
        let n = u.norm();
        if (n - 1.0).abs() > UNIT_TOL {
            Err(GeomError::NotUnit(n))
        } else {
            Ok(())
        }
    }

    fn local_level(&self, y: &Vector) -> f64 {
        let n = self.n();
        match &self.kind {
            BodyKind::Ellipsoid { semi_axes } => {
                semi_axes.iter().enumerate().map(|(i, a)| (y[i] / a).powi(2)).sum::<f64>() - 1.0
            }
            BodyKind::Superellipsoid { exponent, semi_axes } => {
                semi_axes.iter().enumerate().map(|(i, a)| (y[i] / a).abs().powf(*exponent)).sum::<f64>() - 1.0
            }
            _ => self.height(&y.as_slice()[..n]).expect("graph-like kind") - y.last(),
        }
    }

    fn local_gradient(&self, y: &Vector) -> Result<Vector, GeomError> {
        let n = self.n();
        let mut g = Vector::zeros(self.dim());
        match &self.kind {
            BodyKind::Ellipsoid { semi_axes } => {
                for (i, a) in semi_axes.iter().enumerate() {
                    g[i] = 2.0 * y[i] / (a * a);
                }
                return Ok(g);
            }
            BodyKind::Superellipsoid { exponent, semi_axes } => {
                let p = *exponent;
                for (i, a) in semi_axes.iter().enumerate() {
                    let z = y[i] / a;
                    g[i] = p * z.abs().powf(p - 1.0) * z.signum() / a;
                }
                return Ok(g);
            }
            BodyKind::Paraboloid { coeffs } => {
                for (i, c) in coeffs.iter().enumerate() {
                    g[i] = 2.0 * c * y[i];
                }
            }
            BodyKind::HyperboloidSheet { semi_axes } => {
                let root = self.height(&y.as_slice()[..n]).unwrap();
                for (i, a) in semi_axes.iter().enumerate() {
                    g[i] = y[i] / (a * a * root);
                }
            }
            BodyKind::CircularCone { slope } => {
                let r = (0..n).map(|i| y[i] * y[i]).sum::<f64>().sqrt();
                if r == 0.0 {
                    return Err(GeomError::NonSmoothPoint);
                }
                for i in 0..n {
                    g[i] = slope * y[i] / r;
                }
            }
            BodyKind::FunctionEpigraph { profile } => {
                for i in 0..n {
                    g[i] = profile.slope(y[i]);
                }
            }
        }
        g[n] = -1.0;
        Ok(g)
    }

    /// Membership in the closed set (exact up to evaluation of the defining inequality).
    pub fn contains_point(&self, x: &Point) -> Result<bool, GeomError> {
        self.check_point(x)?;
        Ok(self.contains(x))
    }

    /// `h(u) = sup <u, y>`; closed form for every kind except function epigraphs,
    /// which use a concave 1D maximization per coordinate.
    pub fn support_fn(&self, u: &Vector) -> Result<ExtReal, GeomError> {
        self.check_unit(u)?;
        Ok(ConvexSet::support(self, u))
    }

    fn local_support(&self, u: &Vector) -> ExtReal {
        let n = self.n();
        let ul = u.last();
        match &self.kind {
            BodyKind::Ellipsoid { semi_axes } => ExtReal::Finite(
                semi_axes.iter().enumerate().map(|(i, a)| (a * u[i]).powi(2)).sum::<f64>().sqrt(),
            ),
            BodyKind::Superellipsoid { exponent, semi_axes } => {
                let q = exponent / (exponent - 1.0);
                let s: f64 = semi_axes.iter().enumerate().map(|(i, a)| (a * u[i]).abs().powf(q)).sum();
                ExtReal::Finite(s.powf(1.0 / q))
            }
            BodyKind::Paraboloid { coeffs } => {
                if ul >= 0.0 {
                    return ExtReal::PosInfinity;
                }
                ExtReal::Finite(coeffs.iter().enumerate().map(|(i, c)| u[i] * u[i] / (-4.0 * ul * c)).sum())
            }
            BodyKind::HyperboloidSheet { semi_axes } => {
                let b2: f64 = semi_axes.iter().enumerate().map(|(i, a)| (a * u[i]).powi(2)).sum();
                if ul >= 0.0 || b2 > ul * ul {
                    ExtReal::PosInfinity
                } else {
                    ExtReal::Finite(-(ul * ul - b2).sqrt())
                }
            }
            BodyKind::CircularCone { slope } => {
                let b = (0..n).map(|i| u[i] * u[i]).sum::<f64>().sqrt() / slope;
                if ul < 0.0 && b <= -ul {
                    ExtReal::Finite(0.0)
                } else {
                    ExtReal::PosInfinity
                }
            }
            BodyKind::FunctionEpigraph { profile } => {
                if ul >= 0.0 {
                    return ExtReal::PosInfinity;
                }
                let mut total = 0.0;
                for i in 0..n {
                    match concave_sup(|x| u[i] * x + ul * profile.value(x)) {
                        ExtReal::Finite(v) => total += v,
                        ExtReal::PosInfinity => return ExtReal::PosInfinity,
                    }
                }
                if total > SUPPORT_DIVERGENCE {
                    ExtReal::PosInfinity
                } else {
                    ExtReal::Finite(total)
                }
            }
        }
    }

    /// Minkowski functional `inf {λ > 0 : x ∈ λK}` by bisection on `λ`.
    pub fn gauge(&self, x: &Point) -> Result<f64, GeomError> {
        self.check_point(x)?;
        let d = self.dim();
        let r = INTERIOR_MARGIN * self.scale();
        let origin = Vector::zeros(d);
        for i in 0..d {
            let e = Vector::basis(d, i) * r;
            if !self.contains(&(origin + e)) || !self.contains(&(origin - e)) {
                return Err(GeomError::OriginNotInterior);
            }
        }
        if x.norm() == 0.0 || self.recedes_along(x) {
            return Ok(0.0);
        }
        let inside = |lambda: f64| self.contains(&(*x / lambda));
        let (mut lo, mut hi) = if inside(1.0) {
            let mut lo = 0.5;
            while inside(lo) {
                lo *= 0.5;
                if lo < 1e-300 {
                    return Ok(0.0);
                }
            }
            (lo, lo * 2.0)
        } else {
            let mut hi = 2.0;
            while !inside(hi) {
                hi *= 2.0;
            }
            (hi * 0.5, hi)
        };
        while hi - lo > 1e-15 * hi {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if inside(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Outer unit normal at a boundary point (normalized gradient of the defining
    /// function).
    pub fn outer_normal(&self, x: &Point) -> Result<Vector, GeomError> {
        self.check_point(x)?;
        let y = self.local(x);
        let f = self.local_level(&y);
        if !(f.abs() <= 1e-8 * y.norm().max(1.0)) {
            return Err(GeomError::NotOnBoundary(f));
        }
        let g = self.local_gradient(&y)?;
        g.try_normalize().ok_or(GeomError::NonSmoothPoint)
    }

    /// The boundary point whose outer normal is `u`.
    pub fn inverse_gauss(&self, u: &Vector) -> Result<Point, GeomError> {
        self.check_unit(u)?;
        let d = self.dim();
        let n = self.n();
        let ul = u.last();
        let mut y = Vector::zeros(d);
        match &self.kind {
            BodyKind::Ellipsoid { semi_axes } => {
                let h = semi_axes.iter().enumerate().map(|(i, a)| (a * u[i]).powi(2)).sum::<f64>().sqrt();
                for (i, a) in semi_axes.iter().enumerate() {
                    y[i] = a * a * u[i] / h;
                }
            }
            BodyKind::Superellipsoid { exponent, semi_axes } => {
                let q = exponent / (exponent - 1.0);
                let norm_q = semi_axes
                    .iter()
                    .enumerate()
                    .map(|(i, a)| (a * u[i]).abs().powf(q))
                    .sum::<f64>()
                    .powf(1.0 / q);
                for (i, a) in semi_axes.iter().enumerate() {
                    let b = a * u[i];
                    y[i] = a * b.signum() * (b.abs() / norm_q).powf(q - 1.0);
                }
            }
            BodyKind::Paraboloid { coeffs } => {
                if !(ul < 0.0) {
                    return Err(GeomError::InadmissibleNormal);
                }
                for (i, c) in coeffs.iter().enumerate() {
                    y[i] = u[i] / (-2.0 * ul * c);
                }
                y[n] = self.height(&y.as_slice()[..n]).unwrap();
            }
            BodyKind::HyperboloidSheet { semi_axes } => {
                let b2: f64 = semi_axes.iter().enumerate().map(|(i, a)| (a * u[i]).powi(2)).sum();
                if !(ul < 0.0 && b2 < ul * ul) {
                    return Err(GeomError::InadmissibleNormal);
                }
                let denom = (ul * ul - b2).sqrt();
                for (i, a) in semi_axes.iter().enumerate() {
                    y[i] = a * (a * u[i]) / denom;
                }
                y[n] = self.height(&y.as_slice()[..n]).unwrap();
            }
            BodyKind::CircularCone { slope } => {
                let b = (0..n).map(|i| u[i] * u[i]).sum::<f64>().sqrt() / slope;
                if !(ul < 0.0 && b < -ul) {
                    return Err(GeomError::InadmissibleNormal);
                }
            }
            BodyKind::FunctionEpigraph { profile } => {
                if !(ul < 0.0) {
                    return Err(GeomError::InadmissibleNormal);
                }
                for i in 0..n {
                    y[i] = profile.slope_inverse(u[i] / -ul).ok_or(GeomError::InadmissibleNormal)?;
                }
                y[n] = self.height(&y.as_slice()[..n]).unwrap();
            }
        }
        Ok(y + self.translation)
    }

    /// Closed-form recession cone.
    pub fn recession_cone(&self) -> ConeDescriptor {
        let d = self.dim();
        match &self.kind {
            BodyKind::Ellipsoid { .. } | BodyKind::Superellipsoid { .. } => ConeDescriptor::origin(d),
            BodyKind::Paraboloid { .. } => ConeDescriptor::ray(Vector::basis(d, d - 1)),
            BodyKind::HyperboloidSheet { semi_axes } => ConeDescriptor::elliptic(semi_axes),
            BodyKind::CircularCone { slope } => ConeDescriptor::elliptic(&vec![1.0 / slope; d - 1]),
            BodyKind::FunctionEpigraph { profile } => match profile {
                Profile::Exp => ConeDescriptor::negative_orthant(d),
                _ => ConeDescriptor::ray(Vector::basis(d, d - 1)),
            },
        }
    }

    /// A point well inside the body: the center of bounded kinds, one unit above the
    /// bottom of the graph-like ones.
    pub fn interior_point(&self) -> Point {
        let d = self.dim();
        let local = match &self.kind {
            BodyKind::Ellipsoid { .. } | BodyKind::Superellipsoid { .. } => Vector::zeros(d),
            _ => {
                let h = self.height(&vec![0.0; d - 1]).unwrap();
                Vector::zeros(d).with_last(h + 1.0)
            }
        };
        local + self.translation
    }

    /// Random outer normal attained by the Gauss map whose orthogonal sections are
    /// bounded. Bounded bodies draw uniformly from the sphere; unbounded ones draw
    /// the tangent slope from a disk well inside the admissible set.
    pub fn random_admissible_normal<R: Rng + ?Sized>(&self, rng: &mut R) -> Vector {
        let d = self.dim();
        if self.is_bounded() {
            loop {
                let mut v = Vector::zeros(d);
                for i in 0..d {
                    v[i] = rng.random_range(-1.0..1.0);
                }
                let n = v.norm();
                if n > 0.1 && n <= 1.0 {
                    return v / n;
                }
            }
        }
        let (radius, positive) = self.slope_sampling_range();
        loop {
            let mut s = Vector::zeros(d);
            for i in 0..d - 1 {
                s[i] = rng.random_range(-radius..radius);
                if positive {
                    s[i] = s[i].abs() + 0.05;
                }
            }
            if (0..d - 1).map(|i| s[i] * s[i]).sum::<f64>().sqrt() <= radius {
                return self.normal_from_slope(&s);
            }
        }
    }

    /// `count` admissible normals on a deterministic low-discrepancy grid of slopes.
    pub fn admissible_normal_grid(&self, count: usize) -> Vec<Vector> {
        let d = self.dim();
        let (radius, positive) = if self.is_bounded() { (3.0, false) } else { self.slope_sampling_range() };
        (0..count)
            .map(|k| {
                let mut s = Vector::zeros(d);
                if d == 2 {
                    let frac = if count == 1 { 0.5 } else { k as f64 / (count - 1) as f64 };
                    s[0] = if positive { 0.05 + frac * radius } else { radius * (2.0 * frac - 1.0) };
                } else {
                    let rho = radius * ((k as f64 + 0.5) / count as f64).sqrt();
                    let psi = k as f64 * 2.399_963_229_728_653;
                    s[0] = rho * psi.cos();
                    s[1] = rho * psi.sin();
                    if positive {
                        s[0] = s[0].abs() + 0.05;
                        s[1] = s[1].abs() + 0.05;
                    }
                }
                if self.is_bounded() {
                    // Tilted copies of the downward normal, alternating hemispheres.
                    let u = self.normal_from_slope(&s);
                    if k % 2 == 1 { -u } else { u }
                } else {
                    self.normal_from_slope(&s)
                }
            })
            .collect()
    }

    /// Maximal slope magnitude for sampling and whether slopes must be positive.
    fn slope_sampling_range(&self) -> (f64, bool) {
        match &self.kind {
            BodyKind::HyperboloidSheet { .. } | BodyKind::CircularCone { .. } => (0.8, false),
            BodyKind::FunctionEpigraph { profile: Profile::Exp } => (2.0, true),
            _ => (2.0, false),
        }
    }

    /// Outer normal of the tangent plane with slope vector `s` (in the scaled
    /// coordinates of the hyperboloid and cone kinds).
    fn normal_from_slope(&self, s: &Vector) -> Vector {
        let d = self.dim();
        let mut v = Vector::zeros(d);
        for i in 0..d - 1 {
            v[i] = match &self.kind {
                BodyKind::HyperboloidSheet { semi_axes } => s[i] / semi_axes[i],
                BodyKind::CircularCone { slope } => s[i] * slope,
                _ => s[i],
            };
        }
        v[d - 1] = -1.0;
        v.normalize()
    }
}

/// `sup g` for a concave `g` on the real line, declaring divergence once the running
/// maximum exceeds [`SUPPORT_DIVERGENCE`] or the maximizer escapes to infinity
/// while `g` is still increasing.
fn concave_sup<G: Fn(f64) -> f64>(g: G) -> ExtReal {
    match minimize_convex(|x| -g(x), 0.0, 1.0, 1e-12) {
        Ok(m) => {
            if -m.value > SUPPORT_DIVERGENCE {
                ExtReal::PosInfinity
            } else {
                ExtReal::Finite(-m.value)
            }
        }
        Err(escape) => {
            let far = g(2.0 * escape.x);
            let near = -escape.value;
            if far > SUPPORT_DIVERGENCE || far - near > 1e-9 * (1.0 + near.abs()) {
                ExtReal::PosInfinity
            } else {
                ExtReal::Finite(near.max(far))
            }
        }
    }
}

impl ConvexSet for BodySpec {
    fn dim(&self) -> usize {
        self.translation.dim()
    }

    fn defining_function(&self, x: &Point) -> f64 {
        self.local_level(&self.local(x))
    }

    fn support(&self, u: &Vector) -> ExtReal {
        self.local_support(u).offset(u.dot(&self.translation))
    }

    fn recedes_along(&self, d: &Vector) -> bool {
        match &self.kind {
            BodyKind::Ellipsoid { .. } | BodyKind::Superellipsoid { .. } => false,
            _ => self.recession_cone().contains(d),
        }
    }

    fn recession(&self) -> ConeDescriptor {
        self.recession_cone()
    }

    fn scale(&self) -> f64 {
        match &self.kind {
            BodyKind::Ellipsoid { semi_axes } | BodyKind::Superellipsoid { semi_axes, .. } => {
                semi_axes.iter().cloned().fold(0.0, f64::max)
            }
            BodyKind::HyperboloidSheet { semi_axes } => semi_axes.iter().cloned().fold(1.0, f64::max),
            _ => 1.0,
        }
    }
}

/// Distance from `origin` along the unit vector `dir` to the boundary, or `+inf`
/// when `dir` is a recession direction. `origin` must be strictly inside.
///
/// The exit is bracketed by doubling from `hint` and then bisected to full
/// precision (`|Δt| <= 1e-15 t`).
pub(crate) fn ray_exit<S: ConvexSet + ?Sized>(set: &S, origin: &Point, dir: &Vector, hint: f64) -> (ExtReal, usize) {
    if set.recedes_along(dir) {
        return (ExtReal::PosInfinity, 0);
    }
    let mut evals = 0;
    let mut inside = |t: f64| {
        evals += 1;
        set.contains(&(*origin + *dir * t))
    };
    let mut lo = 0.0;
    let mut hi = if hint > 0.0 && hint.is_finite() { hint } else { set.scale() };
    if inside(hi) {
        loop {
            lo = hi;
            hi *= 2.0;
            if hi > 1e300 {
                return (ExtReal::PosInfinity, evals);
            }
            if !inside(hi) {
                break;
            }
        }
    } else {
        // Shrink the bracket from above; stop once the inside end is found.
        loop {
            let probe = 0.5 * hi;
            if probe < 1e-300 {
                break;
            }
            if inside(probe) {
                lo = probe;
                break;
            }
            hi = probe;
        }
    }
    while hi - lo > 1e-15 * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if inside(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (ExtReal::Finite(0.5 * (lo + hi)), evals)
}

/// Distance from an interior `origin` along unit `dir` to the boundary.
///
/// Requires a ball of radius `1e-6 * scale` around `origin` inside the set (tested on
/// the coordinate cross-polytope). Returns `+inf` iff `dir` is a recession direction.
pub fn boundary_hit<S: ConvexSet + ?Sized>(set: &S, origin: &Point, dir: &Vector) -> Result<ExtReal, GeomError> {
    let d = set.dim();
    if origin.dim() != d || dir.dim() != d {
        return Err(GeomError::DimensionMismatch { expected: d, got: origin.dim().min(dir.dim()) });
    }
    let n = dir.norm();
    if (n - 1.0).abs() > UNIT_TOL {
        return Err(GeomError::NotUnit(n));
    }
    let r = INTERIOR_MARGIN * set.scale();
    for i in 0..d {
        let e = Vector::basis(d, i) * r;
        if !set.contains(&(*origin + e)) || !set.contains(&(*origin - e)) {
            return Err(GeomError::NotInterior);
        }
    }
    Ok(ray_exit(set, origin, dir, set.scale()).0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn disk() -> BodySpec {
        BodySpec::ball(2, 1.0).unwrap()
    }

    fn parabola() -> BodySpec {
        BodySpec::paraboloid(&[1.0]).unwrap()
    }

    fn hyperbola() -> BodySpec {
        BodySpec::hyperboloid_sheet(&[1.0]).unwrap()
    }

    #[test]
    fn validation_rejects_bad_parameters() {
        assert!(BodySpec::ellipsoid(&[1.0, -2.0]).is_err());
        assert!(BodySpec::ellipsoid(&[1.0]).is_err());
        assert!(BodySpec::superellipsoid(1.5, &[1.0, 1.0]).is_err());
        assert!(BodySpec::circular_cone(4, 1.0).is_err());
        assert!(disk().translated(Vector::xyz(0.0, 0.0, 1.0)).is_err());
    }

    #[test]
    fn contains_examples() {
        assert!(disk().contains_point(&Vector::xy(0.0, 0.0)).unwrap());
        assert!(!parabola().contains_point(&Vector::xy(1.0, 0.5)).unwrap());
        assert!(hyperbola().contains_point(&Vector::xy(0.0, 1.0)).unwrap());
        assert!(disk().contains_point(&Vector::xyz(0.0, 0.0, 0.0)).is_err());
    }

    #[test]
    fn support_examples() {
        assert_eq!(disk().support_fn(&Vector::xy(1.0, 0.0)).unwrap(), ExtReal::Finite(1.0));
        assert_eq!(parabola().support_fn(&Vector::xy(0.0, -1.0)).unwrap(), ExtReal::Finite(0.0));
        assert_eq!(parabola().support_fn(&Vector::xy(0.0, 1.0)).unwrap(), ExtReal::PosInfinity);
        assert!(matches!(disk().support_fn(&Vector::xy(1.0, 1.0)), Err(GeomError::NotUnit(_))));
    }

    #[test]
    fn numeric_support_matches_closed_form_argmax() {
        for profile in [Profile::Square, Profile::Quartic, Profile::Exp, Profile::Cosh] {
            let body = BodySpec::function_epigraph(2, profile).unwrap();
            for slope in [0.3, 1.0, 2.5] {
                let u = Vector::xy(slope, -1.0).normalize();
                let x = profile.slope_inverse(slope).unwrap();
                let expected = u[0] * x + u[1] * profile.value(x);
                let h = body.support_fn(&u).unwrap().finite().unwrap();
                assert_relative_eq!(h, expected, epsilon = 1e-12, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn numeric_support_detects_divergence() {
        let exp = BodySpec::function_epigraph(2, Profile::Exp).unwrap();
        // Negative slope: u_1 x grows without bound as x -> -inf.
        assert_eq!(exp.support_fn(&Vector::xy(-1e-4, -1.0).normalize()).unwrap(), ExtReal::PosInfinity);
        // Zero slope: supremum 0 approached but not attained.
        let h = exp.support_fn(&Vector::xy(0.0, -1.0)).unwrap().finite().unwrap();
        assert!(h.abs() < 1e-9, "{h}");
        assert_eq!(exp.support_fn(&Vector::xy(0.6, 0.8)).unwrap(), ExtReal::PosInfinity);
    }

    #[test]
    fn gauge_examples() {
        assert_relative_eq!(disk().gauge(&Vector::xy(2.0, 0.0)).unwrap(), 2.0, max_relative = 1e-13);
        assert_eq!(disk().gauge(&Vector::xy(0.0, 0.0)).unwrap(), 0.0);
        let shifted = parabola().translated(Vector::xy(0.0, -1.0)).unwrap();
        assert_eq!(shifted.gauge(&Vector::xy(0.0, 5.0)).unwrap(), 0.0);
        assert_eq!(parabola().gauge(&Vector::xy(1.0, 0.0)), Err(GeomError::OriginNotInterior));
        // Boundary point of the shifted parabola has gauge 1.
        assert_relative_eq!(shifted.gauge(&Vector::xy(2.0, 3.0)).unwrap(), 1.0, max_relative = 1e-13);
    }

    #[test]
    fn boundary_hit_examples() {
        let o = Vector::xy(0.0, 0.0);
        let t = boundary_hit(&disk(), &o, &Vector::xy(1.0, 0.0)).unwrap().finite().unwrap();
        assert_relative_eq!(t, 1.0, max_relative = 1e-14);
        let shifted = parabola().translated(Vector::xy(0.0, -1.0)).unwrap();
        assert_eq!(boundary_hit(&shifted, &o, &Vector::xy(0.0, 1.0)).unwrap(), ExtReal::PosInfinity);
        let ellipse = BodySpec::ellipsoid(&[2.0, 1.0]).unwrap();
        let t = boundary_hit(&ellipse, &o, &Vector::xy(1.0, 0.0)).unwrap().finite().unwrap();
        assert_relative_eq!(t, 2.0, max_relative = 1e-14);
        assert_eq!(boundary_hit(&parabola(), &o, &Vector::xy(1.0, 0.0)), Err(GeomError::NotInterior));
    }

    #[test]
    fn outer_normal_examples() {
        let sphere = BodySpec::ball(3, 1.0).unwrap();
        let n = sphere.outer_normal(&Vector::xyz(0.0, 0.0, 1.0)).unwrap();
        assert_relative_eq!(n.as_slice(), &[0.0, 0.0, 1.0][..]);
        let n = parabola().outer_normal(&Vector::xy(1.0, 1.0)).unwrap();
        let s5 = 5.0_f64.sqrt();
        assert_relative_eq!(n.as_slice(), &[2.0 / s5, -1.0 / s5][..], epsilon = 1e-15);
        let n = hyperbola().outer_normal(&Vector::xy(0.0, 1.0)).unwrap();
        assert_relative_eq!(n.as_slice(), &[0.0, -1.0][..]);
        assert!(matches!(parabola().outer_normal(&Vector::xy(0.0, 1.0)), Err(GeomError::NotOnBoundary(_))));
        let cone = BodySpec::circular_cone(2, 1.0).unwrap();
        assert_eq!(cone.outer_normal(&Vector::xy(0.0, 0.0)), Err(GeomError::NonSmoothPoint));
    }

    #[test]
    fn inverse_gauss_examples() {
        let p = disk().inverse_gauss(&Vector::xy(0.0, 1.0)).unwrap();
        assert_relative_eq!(p.as_slice(), &[0.0, 1.0][..]);
        let u = Vector::xy(2.0, -1.0).normalize();
        let p = parabola().inverse_gauss(&u).unwrap();
        assert_relative_eq!(p.as_slice(), &[1.0, 1.0][..], epsilon = 1e-14);
        assert_eq!(parabola().inverse_gauss(&Vector::xy(0.0, 1.0)), Err(GeomError::InadmissibleNormal));
        let exp = BodySpec::function_epigraph(2, Profile::Exp).unwrap();
        assert_eq!(exp.inverse_gauss(&Vector::xy(-0.6, -0.8)), Err(GeomError::InadmissibleNormal));
    }

    #[test]
    fn inverse_gauss_attains_support() {
        let bodies = [
            BodySpec::ellipsoid(&[2.0, 1.0, 0.5]).unwrap().translated(Vector::xyz(1.0, -2.0, 0.5)).unwrap(),
            BodySpec::superellipsoid(4.0, &[1.0, 2.0]).unwrap(),
            BodySpec::hyperboloid_sheet(&[1.0, 2.0]).unwrap(),
            BodySpec::paraboloid(&[1.0, 0.5]).unwrap(),
            BodySpec::function_epigraph(3, Profile::Cosh).unwrap(),
        ];
        for body in &bodies {
            for u in body.admissible_normal_grid(9) {
                let p = body.inverse_gauss(&u).unwrap();
                let h = body.support_fn(&u).unwrap().finite().unwrap();
                assert!((u.dot(&p) - h).abs() <= 1e-10 * h.abs().max(1.0), "{} {u:?}", body.kind().name());
            }
        }
    }

    #[test]
    fn recession_cone_examples() {
        let exp = BodySpec::function_epigraph(2, Profile::Exp).unwrap().recession_cone();
        assert_eq!(exp.shape, ConeShape::NegativeOrthant);
        assert_eq!(exp.dim(), 2);
        let par = parabola().recession_cone();
        assert_eq!(par.dim(), 1);
        assert!(par.contains(&Vector::xy(0.0, 3.0)));
        assert!(!par.contains(&Vector::xy(0.1, 3.0)));
        let hyp = hyperbola().recession_cone();
        assert!(hyp.contains(&Vector::xy(1.0, 1.0)));
        assert!(hyp.contains(&Vector::xy(-2.0, 3.0)));
        assert!(!hyp.contains(&Vector::xy(1.1, 1.0)));
        assert_eq!(disk().recession_cone().dim(), 0);
    }

    #[test]
    fn random_normals_are_admissible() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let bodies = [
            hyperbola(),
            BodySpec::function_epigraph(3, Profile::Exp).unwrap(),
            BodySpec::ellipsoid(&[1.0, 2.0, 3.0]).unwrap(),
            BodySpec::paraboloid(&[2.0]).unwrap(),
        ];
        for body in &bodies {
            for _ in 0..50 {
                let u = body.random_admissible_normal(&mut rng);
                assert!(body.inverse_gauss(&u).is_ok(), "{} {u:?}", body.kind().name());
                assert!(body.recession_cone().meets_orthogonal_only_at_apex(&u));
            }
        }
    }
}
