//! Recession cones with apex at the origin.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bodies::ConvexSet;
use crate::ext_real::ExtReal;
use crate::vector::Vector;

const CONE_TOL: f64 = 1e-12;

/// Closed-form shape of a recession cone. Coordinates split as `(x', y)` with `y`
/// the last axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "kebab-case")]
pub enum ConeShape {
    /// `{0}`.
    Origin,
    /// `{s d : s >= 0}` for a unit vector `d`.
    Ray { direction: Vector },
    /// `{y >= sqrt(sum (x_i / a_i)^2)}`; `axes` holds `a_1..a_n` (unused slots zero).
    Elliptic { axes: [f64; 2] },
    /// `{x_i <= 0 for all i, y >= 0}`.
    NegativeOrthant,
}

/// Recession cone of a body: membership and support oracles plus its linear
/// dimension.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeDescriptor {
    pub ambient_dim: usize,
    pub shape: ConeShape,
}

impl ConeDescriptor {
    pub fn origin(ambient_dim: usize) -> Self {
        Self { ambient_dim, shape: ConeShape::Origin }
    }

    pub fn ray(direction: Vector) -> Self {
        Self { ambient_dim: direction.dim(), shape: ConeShape::Ray { direction: direction.normalize() } }
    }

    /// Elliptic cone `y >= sqrt(sum (x_i/a_i)^2)` with `axes.len() == ambient_dim - 1`.
    pub fn elliptic(axes: &[f64]) -> Self {
        let mut a = [0.0; 2];
        a[..axes.len()].copy_from_slice(axes);
        Self { ambient_dim: axes.len() + 1, shape: ConeShape::Elliptic { axes: a } }
    }

    pub fn negative_orthant(ambient_dim: usize) -> Self {
        Self { ambient_dim, shape: ConeShape::NegativeOrthant }
    }

    /// Linear dimension of the cone.
    pub fn dim(&self) -> usize {
        match self.shape {
            ConeShape::Origin => 0,
            ConeShape::Ray { .. } => 1,
            ConeShape::Elliptic { .. } | ConeShape::NegativeOrthant => self.ambient_dim,
        }
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    fn n(&self) -> usize {
        self.ambient_dim - 1
    }

    /// `sqrt(sum (x_i/a_i)^2)` for the elliptic shape.
    fn elliptic_radius(&self, axes: &[f64; 2], v: &Vector) -> f64 {
        (0..self.n()).map(|i| (v[i] / axes[i]).powi(2)).sum::<f64>().sqrt()
    }

    /// Membership with a relative tolerance of `1e-12 * |v|`, so boundary rays
    /// computed in floating point are accepted.
    pub fn contains(&self, v: &Vector) -> bool {
        let tol = CONE_TOL * v.norm();
        match &self.shape {
            ConeShape::Origin => v.norm() <= CONE_TOL,
            ConeShape::Ray { direction } => {
                let s = v.dot(direction);
                s >= -tol && (*v - *direction * s).norm() <= tol
            }
            ConeShape::Elliptic { axes } => self.elliptic_radius(axes, v) <= v.last() + tol,
            ConeShape::NegativeOrthant => (0..self.n()).all(|i| v[i] <= tol) && v.last() >= -tol,
        }
    }

    /// Support function of the cone: `0` on the polar cone, `+inf` elsewhere.
    pub fn support(&self, u: &Vector) -> ExtReal {
        let finite = match &self.shape {
            ConeShape::Origin => true,
            ConeShape::Ray { direction } => u.dot(direction) <= 0.0,
            ConeShape::Elliptic { axes } => {
                let b = (0..self.n()).map(|i| (axes[i] * u[i]).powi(2)).sum::<f64>().sqrt();
                b + u.last() <= 0.0
            }
            ConeShape::NegativeOrthant => (0..self.n()).all(|i| u[i] >= 0.0) && u.last() <= 0.0,
        };
        if finite {
            ExtReal::Finite(0.0)
        } else {
            ExtReal::PosInfinity
        }
    }

    /// True iff the cone meets the hyperplane `u^⊥` only at the origin, i.e. `<u, v>`
    /// has a strict constant sign on the cone minus the apex.
    pub fn meets_orthogonal_only_at_apex(&self, u: &Vector) -> bool {
        match &self.shape {
            ConeShape::Origin => true,
            ConeShape::Ray { direction } => u.dot(direction).abs() > CONE_TOL,
            ConeShape::Elliptic { axes } => {
                let b = (0..self.n()).map(|i| (axes[i] * u[i]).powi(2)).sum::<f64>().sqrt();
                b < u.last().abs() * (1.0 - CONE_TOL)
            }
            ConeShape::NegativeOrthant => {
                // Generators are -e_i (i < n) and e_n.
                let signs: Vec<f64> = (0..self.n()).map(|i| -u[i]).chain(std::iter::once(u.last())).collect();
                signs.iter().all(|s| *s > CONE_TOL) || signs.iter().all(|s| *s < -CONE_TOL)
            }
        }
    }

    /// Extreme rays (unit vectors) of polyhedral cones; a sample of the boundary
    /// generators for the round ones.
    pub fn generators(&self) -> Vec<Vector> {
        let d = self.ambient_dim;
        match &self.shape {
            ConeShape::Origin => Vec::new(),
            ConeShape::Ray { direction } => vec![*direction],
            ConeShape::NegativeOrthant => {
                let mut g: Vec<Vector> = (0..d - 1).map(|i| -Vector::basis(d, i)).collect();
                g.push(Vector::basis(d, d - 1));
                g
            }
            ConeShape::Elliptic { axes } => {
                if d == 2 {
                    vec![Vector::xy(-axes[0], 1.0).normalize(), Vector::xy(axes[0], 1.0).normalize()]
                } else {
                    (0..8)
                        .map(|k| {
                            let psi = std::f64::consts::TAU * k as f64 / 8.0;
                            Vector::xyz(axes[0] * psi.cos(), axes[1] * psi.sin(), 1.0).normalize()
                        })
                        .collect()
                }
            }
        }
    }
}

impl fmt::Display for ConeDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.shape {
            ConeShape::Origin => write!(f, "{{0}}"),
            ConeShape::Ray { direction } => write!(f, "ray along {direction}"),
            ConeShape::Elliptic { axes } => {
                write!(f, "elliptic cone y >= |(x_i / a_i)| with a = {:?}", &axes[..self.n()])
            }
            ConeShape::NegativeOrthant => write!(f, "orthant {{x_i <= 0, y >= 0}}"),
        }
    }
}

impl ConvexSet for ConeDescriptor {
    fn dim(&self) -> usize {
        self.ambient_dim
    }

    fn defining_function(&self, x: &Vector) -> f64 {
        match &self.shape {
            ConeShape::Origin => x.norm(),
            ConeShape::Ray { direction } => {
                let s = x.dot(direction).max(0.0);
                (*x - *direction * s).norm()
            }
            ConeShape::Elliptic { axes } => self.elliptic_radius(axes, x) - x.last(),
            ConeShape::NegativeOrthant => (0..self.n()).map(|i| x[i]).fold(-x.last(), f64::max),
        }
    }

    fn support(&self, u: &Vector) -> ExtReal {
        ConeDescriptor::support(self, u)
    }

    fn recedes_along(&self, d: &Vector) -> bool {
        self.contains(d)
    }

    fn recession(&self) -> ConeDescriptor {
        *self
    }

    fn scale(&self) -> f64 {
        1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrant_membership_and_support() {
        let c = ConeDescriptor::negative_orthant(2);
        assert!(c.contains(&Vector::xy(-1.0, 3.0)));
        assert!(!c.contains(&Vector::xy(0.5, 3.0)));
        assert_eq!(c.support(&Vector::xy(1.0, -1.0).normalize()), ExtReal::Finite(0.0));
        assert_eq!(c.support(&Vector::xy(0.0, 1.0)), ExtReal::PosInfinity);
        assert_eq!(c.dim(), 2);
    }

    #[test]
    fn elliptic_cone_boundary_directions() {
        let c = ConeDescriptor::elliptic(&[1.0]);
        assert!(c.contains(&Vector::xy(1.0, 1.0).normalize()));
        assert!(!c.meets_orthogonal_only_at_apex(&Vector::xy(1.0, 1.0).normalize()));
        assert!(c.meets_orthogonal_only_at_apex(&Vector::xy(0.0, 1.0)));
        assert!(c.meets_orthogonal_only_at_apex(&Vector::xy(0.3, -1.0).normalize()));
    }

    #[test]
    fn ray_orthogonality() {
        let c = ConeDescriptor::ray(Vector::xy(0.0, 1.0));
        assert!(!c.meets_orthogonal_only_at_apex(&Vector::xy(1.0, 0.0)));
        assert!(c.meets_orthogonal_only_at_apex(&Vector::xy(1.0, 1.0).normalize()));
        assert_eq!(c.dim(), 1);
    }
}
