//! Euclidean points/vectors of dimension 1..=3 with copy semantics.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::de::{SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A point (or free vector) of ℝ^d, d ∈ {1,2,3}, stored inline.
///
/// Coordinates beyond `dim` are kept at exactly 0 so that the inner-product
/// kernels can run over the full array without branching.
#[derive(Clone, Copy, PartialEq)]
pub struct Point {
    coords: [f64; 3],
    dim: usize,
}

impl Point {
    pub fn new(coords: &[f64]) -> Result<Self> {
        let dim = coords.len();
        if !(1..=3).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("non-finite coordinate"));
        }
        let mut a = [0.0; 3];
        a[..dim].copy_from_slice(coords);
        Ok(Point { coords: a, dim })
    }

    pub fn x1(x: f64) -> Self {
        Point { coords: [x, 0.0, 0.0], dim: 1 }
    }

    pub fn xy(x: f64, y: f64) -> Self {
        Point { coords: [x, y, 0.0], dim: 2 }
    }

    pub fn xyz(x: f64, y: f64, z: f64) -> Self {
        Point { coords: [x, y, z], dim: 3 }
    }

    pub fn zero(dim: usize) -> Self {
        Point { coords: [0.0; 3], dim }
    }

    /// The i-th canonical basis vector of ℝ^dim.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut c = [0.0; 3];
        c[i] = 1.0;
        Point { coords: c, dim }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn coord(&self, i: usize) -> f64 {
        self.coords[i]
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords[..self.dim]
    }

    #[inline]
    pub fn dot(&self, other: &Point) -> f64 {
        self.coords[0] * other.coords[0]
            + self.coords[1] * other.coords[1]
            + self.coords[2] * other.coords[2]
    }

    #[inline]
    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    #[inline]
    pub fn dist(&self, other: &Point) -> f64 {
        (*self - *other).norm()
    }

    #[inline]
    pub fn scale(&self, s: f64) -> Point {
        Point {
            coords: [self.coords[0] * s, self.coords[1] * s, self.coords[2] * s],
            dim: self.dim,
        }
    }

    /// Unit vector in the same direction; `None` for (near-)zero vectors.
    pub fn unit(&self) -> Option<Point> {
        let n = self.norm();
        if n <= 1e-300 {
            None
        } else {
            Some(self.scale(1.0 / n))
        }
    }

    /// Cross product (ambient dimension promoted to 3).
    pub fn cross(&self, other: &Point) -> Point {
        let a = self.coords;
        let b = other.coords;
        Point {
            coords: [
                a[1] * b[2] - a[2] * b[1],
                a[2] * b[0] - a[0] * b[2],
                a[0] * b[1] - a[1] * b[0],
            ],
            dim: 3,
        }
    }

    /// Counterclockwise quarter turn; meaningful for dim 2.
    pub fn perp(&self) -> Point {
        Point {
            coords: [-self.coords[1], self.coords[0], 0.0],
            dim: self.dim,
        }
    }

    /// Angle of a planar vector in [0, 2π).
    pub fn angle(&self) -> f64 {
        let a = self.coords[1].atan2(self.coords[0]);
        if a < 0.0 {
            a + 2.0 * std::f64::consts::PI
        } else {
            a
        }
    }

    /// Lexicographic comparison, used for canonical orderings.
    pub fn lex_cmp(&self, other: &Point) -> std::cmp::Ordering {
        for i in 0..3 {
            match self.coords[i].partial_cmp(&other.coords[i]) {
                Some(std::cmp::Ordering::Equal) | None => continue,
                Some(o) => return o,
            }
        }
        std::cmp::Ordering::Equal
    }
}

impl Add for Point {
    type Output = Point;
    #[inline]
    fn add(self, rhs: Point) -> Point {
        Point {
            coords: [
                self.coords[0] + rhs.coords[0],
                self.coords[1] + rhs.coords[1],
                self.coords[2] + rhs.coords[2],
            ],
            dim: self.dim.max(rhs.dim),
        }
    }
}

impl Sub for Point {
    type Output = Point;
    #[inline]
    fn sub(self, rhs: Point) -> Point {
        Point {
            coords: [
                self.coords[0] - rhs.coords[0],
                self.coords[1] - rhs.coords[1],
                self.coords[2] - rhs.coords[2],
            ],
            dim: self.dim.max(rhs.dim),
        }
    }
}

impl Neg for Point {
    type Output = Point;
    #[inline]
    fn neg(self) -> Point {
        self.scale(-1.0)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    #[inline]
    fn mul(self, rhs: f64) -> Point {
        self.scale(rhs)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coords())
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.dim))?;
        for c in self.coords() {
            seq.serialize_element(c)?;
        }
        seq.end()
    }
}

struct PointVisitor;

impl<'de> Visitor<'de> for PointVisitor {
    type Value = Point;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("a sequence of 1 to 3 finite numbers")
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<Point, A::Error> {
        let mut coords = Vec::with_capacity(3);
        while let Some(c) = seq.next_element::<f64>()? {
            coords.push(c);
        }
        Point::new(&coords).map_err(serde::de::Error::custom)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Point, D::Error> {
        deserializer.deserialize_seq(PointVisitor)
    }
}
