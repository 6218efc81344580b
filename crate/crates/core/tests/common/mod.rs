#![allow(dead_code)]

pub mod oracles;

use rand::Rng;
use sccp_core::{BodySpec, ConvexSet, Vector};

pub const SEED: u64 = 0x5ecc_0a11;

/// Uniform unit vector in R^dim.
pub fn random_unit<R: Rng>(rng: &mut R, dim: usize) -> Vector {
    loop {
        let mut v = Vector::zeros(dim);
        for i in 0..dim {
            v[i] = rng.random_range(-1.0..1.0);
        }
        let n = v.norm();
        if n > 1e-3 && n <= 1.0 {
            return v / n;
        }
    }
}

/// Level strictly inside the admissible interval of `u`, away from both ends.
pub fn random_level<R: Rng>(rng: &mut R, body: &impl ConvexSet, u: &Vector) -> f64 {
    let i = sccp_core::sections::admissible_levels(body, u).unwrap();
    match (i.lower, i.upper) {
        (Some(lo), Some(hi)) => lo + (hi - lo) * rng.random_range(0.05..0.95),
        (Some(lo), None) => lo + rng.random_range(0.05..5.0),
        (None, Some(hi)) => hi - rng.random_range(0.05..5.0),
        (None, None) => unreachable!(),
    }
}

/// Catalog used by the body-level property suites.
pub fn catalog() -> Vec<(&'static str, BodySpec)> {
    use sccp_core::Profile::*;
    vec![
        ("ellipse", BodySpec::ellipsoid(&[2.0, 0.7]).unwrap().translated(Vector::xy(0.3, -0.4)).unwrap()),
        ("ellipsoid", BodySpec::ellipsoid(&[1.0, 2.0, 0.5]).unwrap()),
        ("parabola", BodySpec::paraboloid(&[0.7]).unwrap().translated(Vector::xy(-0.2, 0.5)).unwrap()),
        ("paraboloid", BodySpec::paraboloid(&[1.0, 0.4]).unwrap()),
        ("hyperbola", BodySpec::hyperboloid_sheet(&[1.5]).unwrap().translated(Vector::xy(0.1, 0.2)).unwrap()),
        ("hyperboloid", BodySpec::hyperboloid_sheet(&[1.0, 2.0]).unwrap()),
        ("cone", BodySpec::circular_cone(3, 1.5).unwrap()),
        ("quartic", BodySpec::function_epigraph(2, Quartic).unwrap()),
        ("exp", BodySpec::function_epigraph(2, Exp).unwrap()),
        ("cosh", BodySpec::function_epigraph(3, Cosh).unwrap()),
        ("square", BodySpec::function_epigraph(3, Square).unwrap()),
        ("superellipse", BodySpec::superellipsoid(4.0, &[1.0, 1.5]).unwrap()),
        ("superellipsoid", BodySpec::superellipsoid(3.0, &[1.0, 1.0, 2.0]).unwrap()),
    ]
}

/// Random point in a box around the body's interior point.
pub fn random_nearby_point<R: Rng>(rng: &mut R, body: &BodySpec, half_width: f64) -> Vector {
    let c = body.interior_point();
    let mut p = c;
    for i in 0..body.dim() {
        p[i] += rng.random_range(-half_width..half_width);
    }
    p
}
