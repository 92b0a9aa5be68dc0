//! Planar points, vectors and angle helpers.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::num::Scalar;

/// A point or displacement in the plane, meters (or m/s for velocities).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Point2<T> {
    #[inline]
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero())
    }

    /// Unit vector with heading `angle` (radians, counter-clockwise from +x).
    #[inline]
    pub fn from_angle(angle: T) -> Self {
        Self::new(angle.cos(), angle.sin())
    }

    #[inline]
    pub fn dot(self, other: Self) -> T {
        self.x * other.x + self.y * other.y
    }

    #[inline]
    pub fn norm(self) -> T {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn distance(self, other: Self) -> T {
        (self - other).norm()
    }

    /// Heading of the vector in `(-π, π]`.
    #[inline]
    pub fn angle(self) -> T {
        self.y.atan2(self.x)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl<T: Scalar> Add for Point2<T> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl<T: Scalar> AddAssign for Point2<T> {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<T: Scalar> Sub for Point2<T> {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl<T: Scalar> SubAssign for Point2<T> {
    #[inline]
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl<T: Scalar> Mul<T> for Point2<T> {
    type Output = Self;
    #[inline]
    fn mul(self, k: T) -> Self {
        Self::new(self.x * k, self.y * k)
    }
}

impl<T: Scalar> Div<T> for Point2<T> {
    type Output = Self;
    #[inline]
    fn div(self, k: T) -> Self {
        Self::new(self.x / k, self.y / k)
    }
}

impl<T: Scalar> Neg for Point2<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

/// Axis-aligned rectangle `[x_min, x_max] × [y_min, y_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect<T> {
    pub min: Point2<T>,
    pub max: Point2<T>,
}

impl<T: Scalar> Rect<T> {
    pub fn new(min: Point2<T>, max: Point2<T>) -> Self {
        Self { min, max }
    }

    /// Rectangle anchored at the origin.
    pub fn from_size(width: T, height: T) -> Self {
        Self::new(Point2::zero(), Point2::new(width, height))
    }

    pub fn width(&self) -> T {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> T {
        self.max.y - self.min.y
    }

    pub fn diagonal(&self) -> T {
        self.width().hypot(self.height())
    }

    pub fn contains(&self, p: Point2<T>) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    pub fn clamp(&self, p: Point2<T>) -> Point2<T> {
        Point2::new(
            p.x.max(self.min.x).min(self.max.x),
            p.y.max(self.min.y).min(self.max.y),
        )
    }
}

/// Wraps an angle into `(-π, π]`.
pub fn wrap_angle<T: Scalar>(angle: T) -> T {
    let tau = T::TAU();
    let mut a = angle % tau;
    if a <= -T::PI() {
        a = a + tau;
    } else if a > T::PI() {
        a = a - tau;
    }
    a
}

/// Projects `p` onto the closed disk of radius `radius` about `center`.
pub fn project_to_disk<T: Scalar>(p: Point2<T>, center: Point2<T>, radius: T) -> Point2<T> {
    let offset = p - center;
    let dist = offset.norm();
    if dist <= radius {
        p
    } else {
        center + offset * (radius / dist)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn wrap_angle_range() {
        assert_eq!(wrap_angle(PI), PI);
        assert!((wrap_angle(-PI) - PI).abs() < 1e-12);
        assert!((wrap_angle(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-12);
        assert!((wrap_angle(7.0 * PI) - PI).abs() < 1e-9);
        assert_eq!(wrap_angle(0.25f32), 0.25f32);
    }

    #[test]
    fn clamp_and_project() {
        let r = Rect::from_size(10.0, 5.0);
        assert_eq!(r.clamp(Point2::new(-1.0, 7.0)), Point2::new(0.0, 5.0));
        assert!(r.contains(Point2::new(10.0, 0.0)));
        let p: Point2<f64> = project_to_disk(Point2::new(10.0, 0.0), Point2::zero(), 2.0);
        assert!((p.x - 2.0).abs() < 1e-12 && p.y == 0.0);
    }
}
