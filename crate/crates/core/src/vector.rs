//! Small fixed-capacity vectors for ambient dimensions 2 and 3.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::GeomError;

/// A point or direction in R^2 or R^3.
///
/// Components beyond `dim` are kept at zero so that arithmetic between vectors of
/// equal dimension never needs a branch.
#[derive(Clone, Copy, PartialEq, Default)]
pub struct Vector {
    coords: [f64; 3],
    dim: usize,
}

/// Points and directions share one representation.
pub type Point = Vector;

impl Vector {
    pub fn xy(x: f64, y: f64) -> Self {
        Self { coords: [x, y, 0.0], dim: 2 }
    }

    pub fn xyz(x: f64, y: f64, z: f64) -> Self {
        Self { coords: [x, y, z], dim: 3 }
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim == 2 || dim == 3, "ambient dimension must be 2 or 3, got {dim}");
        Self { coords: [0.0; 3], dim }
    }

    /// Unit vector along coordinate `axis`.
    pub fn basis(dim: usize, axis: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.coords[axis] = 1.0;
        v
    }

    pub fn from_slice(values: &[f64]) -> Result<Self, GeomError> {
        match values.len() {
            2 => Ok(Self::xy(values[0], values[1])),
            3 => Ok(Self::xyz(values[0], values[1], values[2])),
            n => Err(GeomError::InvalidSpec(format!(
                "vectors must have 2 or 3 components, got {n}"
            ))),
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.coords[..self.dim]
    }

    /// Last coordinate, the "vertical" axis of the graph-like bodies.
    #[inline]
    pub fn last(&self) -> f64 {
        self.coords[self.dim - 1]
    }

    #[inline]
    pub fn dot(&self, other: &Self) -> f64 {
        self.coords[0] * other.coords[0]
            + self.coords[1] * other.coords[1]
            + self.coords[2] * other.coords[2]
    }

    #[inline]
    pub fn norm_squared(&self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    /// Returns `None` for the zero vector (or anything with non-finite length).
    pub fn try_normalize(&self) -> Option<Self> {
        let n = self.norm();
        if n > 0.0 && n.is_finite() {
            Some(*self / n)
        } else {
            None
        }
    }

    pub fn normalize(&self) -> Self {
        self.try_normalize().expect("cannot normalize a zero vector")
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (*self - *other).norm()
    }

    /// Cross product; only meaningful in three dimensions.
    pub fn cross(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim, 3);
        let [a1, a2, a3] = self.coords;
        let [b1, b2, b3] = other.coords;
        Self::xyz(a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1)
    }

    pub fn is_finite(&self) -> bool {
        self.as_slice().iter().all(|c| c.is_finite())
    }

    /// Same vector with the last coordinate replaced.
    pub fn with_last(mut self, value: f64) -> Self {
        self.coords[self.dim - 1] = value;
        self
    }

    pub fn max_abs(&self) -> f64 {
        self.as_slice().iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    /// Orientation in which the largest-magnitude component is positive.
    pub fn canonical_sign(&self) -> Self {
        let mut best = 0;
        for i in 1..self.dim {
            if self.coords[i].abs() > self.coords[best].abs() {
                best = i;
            }
        }
        if self.coords[best] < 0.0 {
            -*self
        } else {
            *self
        }
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.as_slice()).finish()
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.as_slice().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Index<usize> for Vector {
    type Output = f64;

    #[inline]
    fn index(&self, i: usize) -> &f64 {
        &self.as_slice()[i]
    }
}

impl IndexMut<usize> for Vector {
    #[inline]
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.coords[..self.dim][i]
    }
}

impl Add for Vector {
    type Output = Self;

    #[inline]
    fn add(self, rhs: Self) -> Self {
        debug_assert_eq!(self.dim, rhs.dim);
        Self {
            coords: [
                self.coords[0] + rhs.coords[0],
                self.coords[1] + rhs.coords[1],
                self.coords[2] + rhs.coords[2],
            ],
            dim: self.dim,
        }
    }
}

impl Sub for Vector {
    type Output = Self;

    #[inline]
    fn sub(self, rhs: Self) -> Self {
        debug_assert_eq!(self.dim, rhs.dim);
        Self {
            coords: [
                self.coords[0] - rhs.coords[0],
                self.coords[1] - rhs.coords[1],
                self.coords[2] - rhs.coords[2],
            ],
            dim: self.dim,
        }
    }
}

impl AddAssign for Vector {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl SubAssign for Vector {
    #[inline]
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl Mul<f64> for Vector {
    type Output = Self;

    #[inline]
    fn mul(self, s: f64) -> Self {
        Self {
            coords: [self.coords[0] * s, self.coords[1] * s, self.coords[2] * s],
            dim: self.dim,
        }
    }
}

impl Mul<Vector> for f64 {
    type Output = Vector;

    #[inline]
    fn mul(self, v: Vector) -> Vector {
        v * self
    }
}

impl Div<f64> for Vector {
    type Output = Self;

    #[inline]
    fn div(self, s: f64) -> Self {
        self * (1.0 / s)
    }
}

impl Neg for Vector {
    type Output = Self;

    #[inline]
    fn neg(self) -> Self {
        self * -1.0
    }
}

impl Serialize for Vector {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.as_slice().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Vector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let values = Vec::<f64>::deserialize(deserializer)?;
        Vector::from_slice(&values).map_err(D::Error::custom)
    }
}
