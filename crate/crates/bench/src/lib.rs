//! Bodies shared by the benchmarks.

use sccp_core::{BodySpec, Vector};

pub fn ellipse() -> BodySpec {
    BodySpec::ellipsoid(&[2.0, 0.7]).unwrap().translated(Vector::xy(0.3, -0.4)).unwrap()
}

pub fn ellipsoid() -> BodySpec {
    BodySpec::ellipsoid(&[1.0, 2.0, 3.0]).unwrap().translated(Vector::xyz(0.5, -1.0, 2.0)).unwrap()
}

pub fn paraboloid() -> BodySpec {
    BodySpec::paraboloid(&[1.0, 0.5]).unwrap()
}

pub fn oblique_3d() -> Vector {
    Vector::xyz(0.3, -0.4, 0.866).normalize()
}
