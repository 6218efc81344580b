//! Hyperplane sections `Π(u, t) ∩ X`: boundedness, admissible levels and section
//! measure/centroid.
//!
//! In the plane a section is a chord, located by minimizing the (convex) defining
//! function along the line and then shooting to the boundary in both directions. In
//! space a section is a planar convex set; an interior anchor is found the same way
//! (nested line minimizations), re-centred on chord midpoints, and the boundary is
//! parameterized by polar angle around it:
//!
//! ```text
//! area = 1/2 ∮ r(θ)^2 dθ,     first moments = 1/3 ∮ r(θ)^3 (cos θ, sin θ) dθ
//! ```
//!
//! The periodic integrals use the trapezoid rule with node doubling, which converges
//! geometrically for smooth boundaries and gives a reliable error estimate.

use std::cell::Cell;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::bodies::{ray_exit, ConvexSet};
use crate::error::GeomError;
use crate::ext_real::ExtReal;
use crate::quadrature::{integrate_periodic, minimize_convex};
use crate::vector::{Point, Vector};

/// Relative distance from the ends of `I(u)` below which levels are rejected.
pub const LEVEL_BUFFER: f64 = 1e-9;

const UNIT_TOL: f64 = 1e-12;

/// The hyperplane `{x : <u, x> = t}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hyperplane {
    u: Vector,
    t: f64,
}

impl Hyperplane {
    pub fn new(u: Vector, t: f64) -> Result<Self, GeomError> {
        check_unit(&u)?;
        Ok(Self { u, t })
    }

    /// `{<a, x> = 1}` in normalized form `Π(a/|a|, 1/|a|)`.
    pub fn from_cut(a: &Vector) -> Result<Self, GeomError> {
        let n = a.norm();
        if !(n > 0.0 && n.is_finite()) {
            return Err(GeomError::InvalidArgument("cut parameter must be a nonzero finite vector".into()));
        }
        Ok(Self { u: *a / n, t: 1.0 / n })
    }

    pub fn normal(&self) -> Vector {
        self.u
    }

    pub fn level(&self) -> f64 {
        self.t
    }
}

/// Measure and centroid of one section.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectionStats {
    pub u: Vector,
    pub t: f64,
    /// `H^n` measure: length in the plane, area in space.
    pub measure: f64,
    pub centroid: Point,
    /// Absolute error estimate of `measure`.
    pub err_estimate: f64,
    /// Error estimate of the centroid position (length units).
    pub centroid_err: f64,
    /// Number of defining-function evaluations.
    pub n_evals: usize,
}

/// Interval `I(u) = (-h(-u), h(u))`; `None` marks an infinite end.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelInterval {
    pub lower: Option<f64>,
    pub upper: Option<f64>,
}

impl LevelInterval {
    pub fn contains(&self, t: f64) -> bool {
        self.lower.is_none_or(|lo| t > lo) && self.upper.is_none_or(|hi| t < hi)
    }

    pub fn is_bounded(&self) -> bool {
        self.lower.is_some() && self.upper.is_some()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectionOptions {
    /// Relative tolerance of the polar quadrature (spatial sections).
    pub rel_tol: f64,
    /// Node cap of the polar quadrature.
    pub max_nodes: usize,
    /// Starting node count; the first convergence check compares it with its double.
    pub initial_nodes: usize,
}

impl Default for SectionOptions {
    fn default() -> Self {
        Self { rel_tol: 1e-8, max_nodes: 1 << 14, initial_nodes: 16 }
    }
}

fn check_unit(u: &Vector) -> Result<(), GeomError> {
    let n = u.norm();
    if (n - 1.0).abs() > UNIT_TOL {
        Err(GeomError::NotUnit(n))
    } else {
        Ok(())
    }
}

fn check_dims<S: ConvexSet + ?Sized>(set: &S, u: &Vector) -> Result<(), GeomError> {
    if u.dim() != set.dim() {
        return Err(GeomError::DimensionMismatch { expected: set.dim(), got: u.dim() });
    }
    check_unit(u)
}

/// True iff `rec(X) ∩ u^⊥ = {0}`, i.e. every section orthogonal to `u` is bounded.
/// Independent of the level.
pub fn section_bounded<S: ConvexSet + ?Sized>(set: &S, u: &Vector) -> bool {
    set.recession().meets_orthogonal_only_at_apex(u)
}

/// Levels with sections of positive finite measure: `(-h(-u), h(u))`.
pub fn admissible_levels<S: ConvexSet + ?Sized>(set: &S, u: &Vector) -> Result<LevelInterval, GeomError> {
    check_dims(set, u)?;
    if !section_bounded(set, u) {
        return Err(GeomError::UnboundedSection);
    }
    let lower = set.support(&-*u).finite().map(|h| -h);
    let upper = set.support(u).finite();
    Ok(LevelInterval { lower, upper })
}

/// Section measure and centroid at `(u, t)` with default options.
pub fn section_stats<S: ConvexSet + ?Sized>(set: &S, u: &Vector, t: f64) -> Result<SectionStats, GeomError> {
    section_stats_with(set, u, t, &SectionOptions::default())
}

pub fn section_stats_with<S: ConvexSet + ?Sized>(
    set: &S,
    u: &Vector,
    t: f64,
    opts: &SectionOptions,
) -> Result<SectionStats, GeomError> {
    let interval = admissible_levels(set, u)?;
    let buffer = LEVEL_BUFFER * set.scale();
    let inside = interval.lower.is_none_or(|lo| t > lo + buffer) && interval.upper.is_none_or(|hi| t < hi - buffer);
    if !inside || !t.is_finite() {
        return Err(GeomError::LevelOutOfRange {
            t,
            lo: interval.lower.unwrap_or(f64::NEG_INFINITY),
            hi: interval.upper.unwrap_or(f64::INFINITY),
        });
    }
    section_core(set, u, t, opts)
}

/// Section statistics without the admissibility checks; the caller guarantees a
/// unit `u` with bounded sections.
pub(crate) fn section_core<S: ConvexSet + ?Sized>(
    set: &S,
    u: &Vector,
    t: f64,
    opts: &SectionOptions,
) -> Result<SectionStats, GeomError> {
    match set.dim() {
        2 => chord_section(set, u, t),
        _ => planar_section(set, u, t, opts),
    }
}

/// Largest chord of the section through its centroid, sampled over 64 directions
/// in space (exact for centrally symmetric sections).
pub fn section_diameter<S: ConvexSet + ?Sized>(set: &S, u: &Vector, t: f64) -> Result<f64, GeomError> {
    let stats = section_stats(set, u, t)?;
    if set.dim() == 2 {
        return Ok(stats.measure);
    }
    let (e1, e2) = plane_basis(u);
    let evals = Cell::new(0usize);
    let hint = stats.measure.sqrt();
    let mut best: f64 = 0.0;
    for k in 0..64 {
        let (s, c) = (PI * k as f64 / 64.0).sin_cos();
        let d = e1 * c + e2 * s;
        let chord = finite_exit(set, &stats.centroid, &d, hint, &evals)? + finite_exit(set, &stats.centroid, &-d, hint, &evals)?;
        best = best.max(chord);
    }
    Ok(best)
}

/// Orthonormal basis of `u^⊥` in R^3.
pub(crate) fn plane_basis(u: &Vector) -> (Vector, Vector) {
    let mut k = 0;
    for i in 1..3 {
        if u[i].abs() < u[k].abs() {
            k = i;
        }
    }
    let e = Vector::basis(3, k);
    let e1 = (e - *u * u[k]).normalize();
    let e2 = u.cross(&e1);
    (e1, e2)
}

fn finite_exit<S: ConvexSet + ?Sized>(set: &S, p: &Point, dir: &Vector, hint: f64, evals: &Cell<usize>) -> Result<f64, GeomError> {
    let (t, n) = ray_exit(set, p, dir, hint);
    evals.set(evals.get() + n);
    match t {
        ExtReal::Finite(v) => Ok(v),
        ExtReal::PosInfinity => Err(GeomError::UnboundedSection),
    }
}

fn chord_section<S: ConvexSet + ?Sized>(set: &S, u: &Vector, t: f64) -> Result<SectionStats, GeomError> {
    let w = Vector::xy(-u[1], u[0]);
    let base = *u * t;
    let scale = set.scale();
    let evals = Cell::new(0usize);
    let line = |s: f64| {
        evals.set(evals.get() + 1);
        set.defining_function(&(base + w * s))
    };
    let m = minimize_convex(line, 0.0, scale, 1e-12).map_err(|_| GeomError::UnboundedSection)?;
    if !(m.value < 0.0) {
        return Err(GeomError::DegenerateSection);
    }
    let p = base + w * m.x;
    let forward = finite_exit(set, &p, &w, scale, &evals)?;
    let backward = finite_exit(set, &p, &-w, forward.max(1e-300), &evals)?;
    let measure = forward + backward;
    if measure < 1e-12 * scale {
        return Err(GeomError::DegenerateSection);
    }
    let err = 4e-15 * measure;
    Ok(SectionStats {
        u: *u,
        t,
        measure,
        centroid: p + w * (0.5 * (forward - backward)),
        err_estimate: err,
        centroid_err: err,
        n_evals: evals.get(),
    })
}

fn planar_section<S: ConvexSet + ?Sized>(
    set: &S,
    u: &Vector,
    t: f64,
    opts: &SectionOptions,
) -> Result<SectionStats, GeomError> {
    let (e1, e2) = plane_basis(u);
    let base = *u * t;
    let scale = set.scale();
    let evals = Cell::new(0usize);
    let f = |s1: f64, s2: f64| {
        evals.set(evals.get() + 1);
        set.defining_function(&(base + e1 * s1 + e2 * s2))
    };
    // Partial minimization of a jointly convex function stays convex in s1.
    let inner = |s1: f64| match minimize_convex(|s2| f(s1, s2), 0.0, scale, 1e-9) {
        Ok(m) => m.value,
        Err(_) => f64::NEG_INFINITY,
    };
    let outer = minimize_convex(inner, 0.0, scale, 1e-9).map_err(|_| GeomError::UnboundedSection)?;
    let s2 = minimize_convex(|s2| f(outer.x, s2), 0.0, scale, 1e-9).map_err(|_| GeomError::UnboundedSection)?;
    if !(s2.value < 0.0) {
        return Err(GeomError::DegenerateSection);
    }
    let mut anchor = base + e1 * outer.x + e2 * s2.x;

    // Move the anchor to chord midpoints so the radial function is well balanced.
    let mut hint = scale;
    for _ in 0..2 {
        for e in [e1, e2] {
            let fwd = finite_exit(set, &anchor, &e, hint, &evals)?;
            let bwd = finite_exit(set, &anchor, &-e, fwd.max(1e-300), &evals)?;
            anchor += e * (0.5 * (fwd - bwd));
            hint = 0.5 * (fwd + bwd);
        }
    }
    if !(set.defining_function(&anchor) < 0.0) || !(hint > 0.0) {
        return Err(GeomError::DegenerateSection);
    }

    let failed = Cell::new(false);
    let radial = |theta: f64| {
        let (s, c) = theta.sin_cos();
        let dir = e1 * c + e2 * s;
        match finite_exit(set, &anchor, &dir, hint, &evals) {
            Ok(r) => {
                let r2 = r * r;
                let r3 = r2 * r;
                [r2, r3 * c, r3 * s]
            }
            Err(_) => {
                failed.set(true);
                [0.0; 3]
            }
        }
    };
    let q = integrate_periodic(radial, opts.initial_nodes, opts.rel_tol, opts.max_nodes);
    if failed.get() {
        return Err(GeomError::UnboundedSection);
    }
    let area = 0.5 * q.values[0];
    if !(area > 1e-12 * scale * scale) {
        return Err(GeomError::DegenerateSection);
    }
    let m1 = q.values[1] / 3.0;
    let m2 = q.values[2] / 3.0;
    let offset = (e1 * m1 + e2 * m2) / area;
    let area_err = 0.5 * q.errs[0] + 1e-15 * area;
    let moment_err = (q.errs[1].powi(2) + q.errs[2].powi(2)).sqrt() / 3.0;
    let centroid_err = (moment_err + offset.norm() * area_err) / area + 1e-15 * hint;
    Ok(SectionStats {
        u: *u,
        t,
        measure: area,
        centroid: anchor + offset,
        err_estimate: area_err,
        centroid_err,
        n_evals: evals.get(),
    })
}
