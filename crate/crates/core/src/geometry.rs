//! Small plane-geometry types: Cartesian vectors, polar points, rectangles.

use std::f64::consts::PI;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

/// A point or displacement in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Angle of the vector in `[-pi, pi)`; the `atan2` seam value `pi` is
    /// folded to `-pi` so the barrier ray has a single representative.
    pub fn angle(self) -> f64 {
        let theta = self.y.atan2(self.x);
        if theta >= PI {
            theta - 2.0 * PI
        } else {
            theta
        }
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl AddAssign for Vec2 {
    fn add_assign(&mut self, rhs: Vec2) {
        self.x += rhs.x;
        self.y += rhs.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    fn mul(self, v: Vec2) -> Vec2 {
        v * self
    }
}

impl Div<f64> for Vec2 {
    type Output = Vec2;
    fn div(self, s: f64) -> Vec2 {
        Vec2::new(self.x / s, self.y / s)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// Polar coordinates with `r >= 0` and `theta` in `[-pi, pi)`. The half-line
/// barrier occupies the `theta = +/-pi` seam (`y = 0`, `x <= 0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarPoint {
    pub r: f64,
    pub theta: f64,
}

/// Half-width of the strip around `y = 0` treated as "on the barrier" when
/// classifying Cartesian points with `x < 0`.
pub const BARRIER_EPS: f64 = 1e-12;

impl PolarPoint {
    pub fn new(r: f64, theta: f64) -> Self {
        Self { r, theta }
    }

    pub fn from_cartesian(v: Vec2) -> Self {
        Self {
            r: v.norm(),
            theta: v.angle(),
        }
    }

    pub fn to_cartesian(self) -> Vec2 {
        Vec2::new(self.r * self.theta.cos(), self.r * self.theta.sin())
    }

    /// True when the point lies on the half-line barrier `y = 0`, `x <= 0`
    /// (within [`BARRIER_EPS`] of the seam).
    pub fn on_barrier(self) -> bool {
        let v = self.to_cartesian();
        v.x < 0.0 && v.y.abs() < BARRIER_EPS
    }
}

/// Axis-aligned rectangle (bounding boxes for sampling and density grids).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x_lo: f64,
    pub x_hi: f64,
    pub y_lo: f64,
    pub y_hi: f64,
}

impl Rect {
    pub fn new(x_lo: f64, x_hi: f64, y_lo: f64, y_hi: f64) -> Self {
        Self {
            x_lo,
            x_hi,
            y_lo,
            y_hi,
        }
    }

    pub fn area(&self) -> f64 {
        (self.x_hi - self.x_lo) * (self.y_hi - self.y_lo)
    }

    pub fn contains(&self, p: Vec2) -> bool {
        p.x >= self.x_lo && p.x <= self.x_hi && p.y >= self.y_lo && p.y <= self.y_hi
    }
}
