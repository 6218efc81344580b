//! The cut-volume functional `V(a) = vol(Ω ∩ {<a, x> <= 1})`, its gradient and
//! the constancy scans built on it.
//!
//! Volumes are computed by Fubini slicing along `â = a/|a|`:
//! `V(a) = ∫ measure(Σ(â, s)) ds` over `s` from `-h(-â)` to `min(1/|a|, h(â))`. The
//! substitution `s = s0 + L (3τ² - 2τ³)` removes the square-root behaviour of the
//! section measure at tangential endpoints, so Gauss–Kronrod converges quickly.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bodies::{BodyKind, BodySpec, ConvexSet, Profile};
use crate::error::GeomError;
use crate::ext_real::ExtReal;
use crate::quadrature::integrate;
use crate::sections::{section_core, section_stats, SectionOptions};
use crate::vector::{Point, Vector};

/// A nonzero cut parameter `a`; the hyperplane is `H(a) = {<a, x> = 1}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vector", into = "Vector")]
pub struct CutParam {
    a: Vector,
}

impl CutParam {
    pub fn new(a: Vector) -> Result<Self, GeomError> {
        let n = a.norm();
        if !(n > 0.0 && n.is_finite()) {
            return Err(GeomError::InvalidArgument("cut parameter must be a nonzero finite vector".into()));
        }
        Ok(Self { a })
    }

    pub fn vector(&self) -> Vector {
        self.a
    }

    /// Unit normal `â` of the cut hyperplane.
    pub fn normal(&self) -> Vector {
        self.a / self.a.norm()
    }

    /// Level `1/|a|` of the cut hyperplane along `â`.
    pub fn level(&self) -> f64 {
        1.0 / self.a.norm()
    }
}

impl TryFrom<Vector> for CutParam {
    type Error = GeomError;

    fn try_from(a: Vector) -> Result<Self, GeomError> {
        Self::new(a)
    }
}

impl From<CutParam> for Vector {
    fn from(c: CutParam) -> Vector {
        c.a
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutOptions {
    /// Relative tolerance of the slicing quadrature.
    pub rel_tol: f64,
    pub max_intervals: usize,
    pub section: SectionOptions,
}

impl Default for CutOptions {
    fn default() -> Self {
        Self { rel_tol: 1e-8, max_intervals: 200, section: SectionOptions::default() }
    }
}

/// A volume together with its quadrature error estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeEstimate {
    pub value: ExtReal,
    pub err: f64,
    pub n_evals: usize,
}

/// Gradient of `V` at `a` and the quantities of the gradient–centroid identity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutVolumeResult {
    pub a: Vector,
    #[serde(rename = "V")]
    pub volume: f64,
    pub grad: Vector,
    /// `<a, grad>`.
    pub lambda: f64,
    /// Centroid `x(a)` of `H(a) ∩ Ω`.
    pub centroid: Point,
    /// Measure of `H(a) ∩ Ω`.
    pub section_measure: f64,
    /// `|x(a) - grad / lambda|`.
    pub identity_residual: f64,
    /// `|grad + measure · x(a) / |a||`.
    pub moment_residual: f64,
    /// Section measure recovered from the gradient, `-lambda |a|`.
    pub measure_from_gradient: f64,
    pub err_estimate: f64,
}

/// True iff `{x ∈ Ω : <n, x> <= c}` is bounded for every `c`, i.e. `<n, v> > 0` for
/// all nonzero recession directions `v`.
fn slab_bounded<S: ConvexSet + ?Sized>(set: &S, n: &Vector) -> bool {
    let cone = set.recession();
    cone.meets_orthogonal_only_at_apex(n) && cone.support(&-*n) == ExtReal::Finite(0.0)
}

/// `vol{x ∈ Ω : <n, x> <= c}` for a unit `n`.
pub fn volume_below<S: ConvexSet + ?Sized>(set: &S, n: &Vector, c: f64, opts: &CutOptions) -> VolumeEstimate {
    if !slab_bounded(set, n) {
        return VolumeEstimate { value: ExtReal::PosInfinity, err: 0.0, n_evals: 0 };
    }
    let s0 = match set.support(&-*n) {
        ExtReal::Finite(h) => -h,
        ExtReal::PosInfinity => return VolumeEstimate { value: ExtReal::PosInfinity, err: 0.0, n_evals: 0 },
    };
    let s1 = match set.support(n) {
        ExtReal::Finite(h) => h.min(c),
        ExtReal::PosInfinity => c,
    };
    if !(s1 > s0) {
        return VolumeEstimate { value: ExtReal::Finite(0.0), err: 0.0, n_evals: 0 };
    }
    let len = s1 - s0;
    let integrand = |tau: f64| {
        let s = s0 + len * tau * tau * (3.0 - 2.0 * tau);
        let ds = 6.0 * len * tau * (1.0 - tau);
        if ds == 0.0 {
            return 0.0;
        }
        section_core(set, n, s, &opts.section).map_or(0.0, |st| st.measure) * ds
    };
    let q = integrate(integrand, 0.0, 1.0, opts.rel_tol, 0.0, opts.max_intervals);
    VolumeEstimate { value: ExtReal::Finite(q.value.max(0.0)), err: q.err, n_evals: q.n_evals }
}

/// `V(a)`: volume of the part of `Ω` on the origin side of `H(a)`; `+∞` when that
/// part is unbounded, `0` when `Ω` lies entirely beyond `H(a)`.
pub fn cut_volume<S: ConvexSet + ?Sized>(set: &S, a: &CutParam) -> ExtReal {
    cut_volume_with(set, a, &CutOptions::default()).value
}

pub fn cut_volume_with<S: ConvexSet + ?Sized>(set: &S, a: &CutParam, opts: &CutOptions) -> VolumeEstimate {
    volume_below(set, &a.normal(), a.level(), opts)
}

fn finite_volume<S: ConvexSet + ?Sized>(set: &S, a: Vector, opts: &CutOptions) -> Result<(f64, f64), GeomError> {
    let cut = CutParam::new(a).map_err(|_| GeomError::DegenerateCut)?;
    let v = cut_volume_with(set, &cut, opts);
    match v.value {
        ExtReal::Finite(x) if x > 0.0 => Ok((x, v.err)),
        _ => Err(GeomError::DegenerateCut),
    }
}

/// Numerical gradient of `V` at `a` and the gradient–centroid identity.
///
/// The gradient uses the fourth-order central stencil with step
/// `max(1, |a|) · tol^{1/3}` on volumes computed to relative tolerance `tol = 1e-10`.
pub fn cut_gradient<S: ConvexSet + ?Sized>(set: &S, a: &CutParam) -> Result<CutVolumeResult, GeomError> {
    let d = set.dim();
    if set.defining_function(&Vector::zeros(d)) <= 0.0 {
        return Err(GeomError::OriginInsideBody);
    }
    let a_vec = a.vector();
    if a_vec.dim() != d {
        return Err(GeomError::DimensionMismatch { expected: d, got: a_vec.dim() });
    }
    let opts = CutOptions { rel_tol: 1e-10, ..CutOptions::default() };
    let (volume, vol_err) = finite_volume(set, a_vec, &opts)?;
    let norm_a = a_vec.norm();
    let h = norm_a.max(1.0) * opts.rel_tol.cbrt();

    let mut grad = Vector::zeros(d);
    let mut err: f64 = vol_err;
    for i in 0..d {
        let e = Vector::basis(d, i) * h;
        let mut values = [0.0; 4];
        for (slot, k) in values.iter_mut().zip([-2.0, -1.0, 1.0, 2.0]) {
            let (v, ve) = finite_volume(set, a_vec + e * k, &opts)?;
            *slot = v;
            err = err.max(ve);
        }
        grad[i] = (values[0] - 8.0 * values[1] + 8.0 * values[2] - values[3]) / (12.0 * h);
    }
    let lambda = a_vec.dot(&grad);
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(GeomError::DegenerateCut);
    }
    let section = section_stats(set, &a.normal(), a.level())?;
    let x = section.centroid;
    let identity_residual = (x - grad / lambda).norm();
    let moment_residual = (grad + x * (section.measure / norm_a)).norm();
    Ok(CutVolumeResult {
        a: a_vec,
        volume,
        grad,
        lambda,
        centroid: x,
        section_measure: section.measure,
        identity_residual,
        moment_residual,
        measure_from_gradient: -lambda * norm_a,
        err_estimate: err,
    })
}

/// Volume of `{x ∈ Ω : <u, x> >= c}` for a unit `u`: the part of `Ω` beyond a
/// hyperplane with outward normal `u`.
fn volume_beyond(body: &BodySpec, u: &Vector, c: f64, opts: &CutOptions) -> Result<VolumeEstimate, GeomError> {
    let v = volume_below(body, &-*u, -c, opts);
    match v.value {
        ExtReal::Finite(_) => Ok(v),
        ExtReal::PosInfinity => Err(GeomError::DegenerateCut),
    }
}

fn values(estimates: Vec<VolumeEstimate>) -> Vec<f64> {
    estimates.iter().map(|v| v.value.to_f64()).collect()
}

/// For each boundary anchor `x`, the volume between the graph and its tangent
/// plane at `x` lifted by `k` along the last axis.
pub fn parallel_cut_scan(body: &BodySpec, k: f64, anchors: &[Point]) -> Result<Vec<f64>, GeomError> {
    parallel_cut_estimates(body, k, anchors).map(values)
}

/// [`parallel_cut_scan`] with per-anchor error estimates.
pub fn parallel_cut_estimates(body: &BodySpec, k: f64, anchors: &[Point]) -> Result<Vec<VolumeEstimate>, GeomError> {
    if !body.is_graph_like() {
        return Err(GeomError::NotGraphLike);
    }
    if !(k > 0.0 && k.is_finite()) {
        return Err(GeomError::InvalidArgument(format!("k must be positive, got {k}")));
    }
    let d = body.dim();
    let opts = CutOptions::default();
    anchors
        .par_iter()
        .map(|x0| {
            let normal = body.outer_normal(x0)?;
            let lifted = *x0 + Vector::basis(d, d - 1) * k;
            volume_beyond(body, &normal, normal.dot(&lifted), &opts)
        })
        .collect()
}

/// For each boundary anchor `x`, the volume cut off by the tangent plane at `x`
/// scaled by `k` about the local origin (the apex of the asymptotic cone).
///
/// Accepted bodies: hyperboloid sheets and the cosh epigraph (as a control without
/// an asymptotic cone). Anchors whose tangent plane passes through or behind the
/// origin cannot be scaled and are rejected.
pub fn homothety_cut_scan(body: &BodySpec, k: f64, anchors: &[Point]) -> Result<Vec<f64>, GeomError> {
    homothety_cut_estimates(body, k, anchors).map(values)
}

/// [`homothety_cut_scan`] with per-anchor error estimates.
pub fn homothety_cut_estimates(body: &BodySpec, k: f64, anchors: &[Point]) -> Result<Vec<VolumeEstimate>, GeomError> {
    let apex_centered = matches!(
        body.kind(),
        BodyKind::HyperboloidSheet { .. } | BodyKind::FunctionEpigraph { profile: Profile::Cosh }
    );
    if !apex_centered {
        return Err(GeomError::NotApexCentered);
    }
    if !(k > 1.0 && k.is_finite()) {
        return Err(GeomError::InvalidArgument(format!("k must exceed 1, got {k}")));
    }
    let local = body.centered();
    let shift = body.translation();
    let opts = CutOptions::default();
    anchors
        .par_iter()
        .map(|x0| {
            let normal = body.outer_normal(x0)?;
            let h = normal.dot(&(*x0 - shift));
            if !(h < 0.0) {
                return Err(GeomError::NotApexCentered);
            }
            let cut = CutParam::new(normal / (h * k))?;
            let v = cut_volume_with(&local, &cut, &opts);
            match v.value {
                ExtReal::Finite(_) => Ok(v),
                ExtReal::PosInfinity => Err(GeomError::DegenerateCut),
            }
        })
        .collect()
}

/// Auxiliary body `B` of the constancy test.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum FloatingMode {
    /// `B = Ω + λ e`.
    Translate { lambda: f64, e: Vector },
    /// `B = λ Ω` about the local origin.
    Scale { lambda: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FloatingStats {
    pub normals: Vec<Vector>,
    pub values: Vec<f64>,
    pub errs: Vec<f64>,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    /// `(max - min) / mean`.
    pub spread: f64,
}

/// Volumes of `Ω` beyond the support hyperplanes of `B` over a grid of admissible
/// normals.
pub fn floating_constancy(body: &BodySpec, mode: FloatingMode, n_normals: usize) -> Result<FloatingStats, GeomError> {
    match mode {
        FloatingMode::Translate { lambda, e } => {
            if !(lambda > 0.0) {
                return Err(GeomError::InvalidArgument(format!("translation needs lambda > 0, got {lambda}")));
            }
            if e.dim() != body.dim() {
                return Err(GeomError::DimensionMismatch { expected: body.dim(), got: e.dim() });
            }
        }
        FloatingMode::Scale { lambda } => {
            if !(lambda > 1.0) {
                return Err(GeomError::InvalidArgument(format!("scaling needs lambda > 1, got {lambda}")));
            }
        }
    }
    if n_normals == 0 {
        return Err(GeomError::InvalidArgument("n_normals must be positive".into()));
    }
    let normals = body.admissible_normal_grid(n_normals);
    let shift = body.translation();
    let opts = CutOptions::default();
    let estimates = normals
        .par_iter()
        .map(|u| {
            let p = body.inverse_gauss(u)?;
            let contact = match mode {
                FloatingMode::Translate { lambda, e } => p + e * lambda,
                FloatingMode::Scale { lambda } => shift + (p - shift) * lambda,
            };
            volume_beyond(body, u, u.dot(&contact), &opts)
        })
        .collect::<Result<Vec<VolumeEstimate>, GeomError>>()?;
    let errs = estimates.iter().map(|v| v.err).collect();
    let values = values(estimates);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    Ok(FloatingStats { normals, values, errs, min, max, mean, spread: (max - min) / mean })
}

/// `(max - min) / mean` of a list of volumes.
pub fn relative_spread(values: &[f64]) -> f64 {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    (max - min) / mean
}
