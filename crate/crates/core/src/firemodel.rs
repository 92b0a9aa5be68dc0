//! Elliptical fire fronts: spread, quench bookkeeping and equal-area sectors.
//!
//! Fires are axis-aligned ellipses with the semi-major axis `a` along +x.
//! Both semi-axes grow at the same constant rate, so `a - b` is fixed for
//! the lifetime of a fire, and quenching shrinks the ellipse while keeping
//! that difference.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::Point2;
use crate::num::Scalar;

/// Net area below which a fire counts as extinguished, m².
pub const EXTINGUISHED_AREA: f64 = 1.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FireError {
    #[error("sector bounds [{lo}, {hi}] must satisfy 0 <= lo < hi <= 2π")]
    AngleOutOfRange { lo: f64, hi: f64 },
    #[error("cannot partition a fire into zero sectors")]
    ZeroSectors,
    #[error("fire {0} is not active")]
    Inactive(usize),
}

/// Byram-type fireline intensity `α·L_f^β`, kW/m.
pub fn fireline_intensity<T: Scalar>(flame_length: T, alpha: T, beta: T) -> T {
    alpha * flame_length.powf(beta)
}

/// Constant spread rate `I_l / (H_c·F_m)`, m/s.
pub fn spread_rate<T: Scalar>(intensity: T, heat_of_combustion: T, fuel_load: T) -> T {
    intensity / (heat_of_combustion * fuel_load)
}

/// Lifecycle of a fire. Transitions only move forward.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FireState {
    Burning,
    UnderMitigation,
    Extinguished,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FireFront<T> {
    pub id: usize,
    pub center: Point2<T>,
    /// Semi-major axis, m.
    pub a: T,
    /// Semi-minor axis, m.
    pub b: T,
    /// Growth rate of both semi-axes, m/s.
    pub spread_rate: T,
    state: FireState,
    /// `(uav id, join time)` for every UAV that started quenching.
    joined_uavs: Vec<(usize, T)>,
    quenched_area_total: T,
}

impl<T: Scalar> FireFront<T> {
    pub fn new(id: usize, center: Point2<T>, a: T, b: T, spread_rate: T) -> Self {
        debug_assert!(a >= b && b > T::zero(), "fire axes must satisfy a >= b > 0");
        Self {
            id,
            center,
            a,
            b,
            spread_rate,
            state: FireState::Burning,
            joined_uavs: Vec::new(),
            quenched_area_total: T::zero(),
        }
    }

    pub fn state(&self) -> FireState {
        self.state
    }

    pub fn is_active(&self) -> bool {
        self.state != FireState::Extinguished
    }

    pub fn joined_uavs(&self) -> &[(usize, T)] {
        &self.joined_uavs
    }

    pub fn quenched_area_total(&self) -> T {
        self.quenched_area_total
    }

    /// Marks the fire as detected and under mitigation. No-op unless burning.
    pub fn begin_mitigation(&mut self) {
        if self.state == FireState::Burning {
            self.state = FireState::UnderMitigation;
        }
    }

    /// Records the first time a UAV starts quenching this fire.
    pub fn record_join(&mut self, uav: usize, time: T) {
        if !self.joined_uavs.iter().any(|&(id, _)| id == uav) {
            self.joined_uavs.push((uav, time));
        }
    }

    /// Ellipse area `π·a·b`, m².
    pub fn area(&self) -> T {
        T::PI() * self.a * self.b
    }

    /// Area still burning: zero once extinguished.
    pub fn active_area(&self) -> T {
        if self.is_active() {
            self.area()
        } else {
            T::zero()
        }
    }

    /// Grows both semi-axes by `R·dt`. Extinguished fires do not change.
    pub fn grow(&mut self, dt: T) {
        if self.is_active() {
            let d = self.spread_rate * dt;
            self.a = self.a + d;
            self.b = self.b + d;
        }
    }

    /// Area the fire would gain over `dt` if unquenched.
    pub fn growth_area(&self, dt: T) -> T {
        let d = self.spread_rate * dt;
        T::PI() * ((self.a + d) * (self.b + d) - self.a * self.b)
    }

    /// Advances a fire under mitigation by `dt` with `n_active` UAVs each
    /// removing `quench_rate` m²/s. Growth over the step is included, so
    /// callers must not also call [`grow`](Self::grow) for this step.
    ///
    /// Returns the area actually removed.
    pub fn apply_quench(&mut self, n_active: usize, quench_rate: T, dt: T) -> T {
        if !self.is_active() {
            return T::zero();
        }
        let n = T::from_usize(n_active).unwrap_or_else(T::zero);
        let available = self.area() + self.growth_area(dt);
        let removed = (n * quench_rate * dt).min(available);
        let remaining = (available - removed).max(T::zero());
        let axis_gap = self.a - self.b;
        let (a, b) = axes_for_area(remaining, axis_gap);
        self.a = a;
        self.b = b;
        self.quenched_area_total = self.quenched_area_total + removed;
        if remaining <= T::lit(EXTINGUISHED_AREA) {
            self.state = FireState::Extinguished;
        }
        removed
    }

    /// Point on the front at ellipse parameter `theta`.
    pub fn point_on_front(&self, theta: T) -> Point2<T> {
        self.center + Point2::new(self.a * theta.cos(), self.b * theta.sin())
    }

    /// Rate of change of [`point_on_front`](Self::point_on_front) when the
    /// parameter moves at `theta_rate` and both axes grow at `axis_rate`.
    pub fn front_velocity(&self, theta: T, theta_rate: T, axis_rate: T) -> Point2<T> {
        let (s, c) = theta.sin_cos();
        Point2::new(
            -self.a * s * theta_rate + axis_rate * c,
            self.b * c * theta_rate + axis_rate * s,
        )
    }

    /// Tangential length per radian of the ellipse parameter at `theta`.
    pub fn local_radius(&self, theta: T) -> T {
        let (s, c) = theta.sin_cos();
        (self.a * s).hypot(self.b * c)
    }

    pub fn contains(&self, p: Point2<T>) -> bool {
        let q = p - self.center;
        let u = q.x / self.a;
        let v = q.y / self.b;
        u * u + v * v <= T::one()
    }

    /// Nearest point of the fire boundary to `p`. For points inside the
    /// ellipse this returns `p` itself.
    pub fn nearest_front_point(&self, p: Point2<T>) -> Point2<T> {
        if self.contains(p) {
            return p;
        }
        let q = p - self.center;
        let x = q.x.abs();
        let y = q.y.abs();
        let phi = nearest_parameter(self.a, self.b, x, y);
        let fx = self.a * phi.cos();
        let fy = self.b * phi.sin();
        self.center + Point2::new(fx.copysign(q.x), fy.copysign(q.y))
    }

    /// Euclidean distance from `p` to the fire boundary, zero inside.
    pub fn distance_to_front(&self, p: Point2<T>) -> T {
        if self.contains(p) {
            T::zero()
        } else {
            p.distance(self.nearest_front_point(p))
        }
    }

    /// Area of the polar sector `[lo, hi]` measured from the fire center.
    pub fn sector_area(&self, lo: T, hi: T) -> Result<T, FireError> {
        if !(lo >= T::zero() && lo < hi && hi <= T::TAU()) {
            return Err(FireError::AngleOutOfRange {
                lo: lo.to_f64().unwrap_or(f64::NAN),
                hi: hi.to_f64().unwrap_or(f64::NAN),
            });
        }
        let half_ab = self.a * self.b * T::half();
        Ok(half_ab * (sector_parameter(self.a, self.b, hi) - sector_parameter(self.a, self.b, lo)))
    }

    /// Polar boundaries `[Γ_1 = 0, .., Γ_{N+1} = 2π]` splitting the fire into
    /// `n` sectors of equal area.
    pub fn partition_sectors(&self, n: usize) -> Result<Vec<T>, FireError> {
        if n == 0 {
            return Err(FireError::ZeroSectors);
        }
        if !self.is_active() {
            return Err(FireError::Inactive(self.id));
        }
        let step = T::TAU() / T::from_usize(n).unwrap();
        let mut bounds = Vec::with_capacity(n + 1);
        bounds.push(T::zero());
        for m in 1..n {
            let phi = step * T::from_usize(m).unwrap();
            bounds.push(polar_angle(self.a, self.b, phi));
        }
        bounds.push(T::TAU());
        Ok(bounds)
    }
}

/// Continuous, strictly increasing extension of `atan((a/b)·tan Γ)` on
/// `[0, 2π]`: the ellipse parameter of the boundary point at polar angle Γ.
/// Sector area between polar angles is `(a·b/2)·ΔF`.
pub fn sector_parameter<T: Scalar>(a: T, b: T, polar: T) -> T {
    let (s, c) = polar.sin_cos();
    let principal = (a * s).atan2(b * c);
    unwrap_near(principal, polar)
}

/// Inverse of [`sector_parameter`]: polar angle of the boundary point with
/// ellipse parameter `phi`.
pub fn polar_angle<T: Scalar>(a: T, b: T, phi: T) -> T {
    let (s, c) = phi.sin_cos();
    let principal = (b * s).atan2(a * c);
    unwrap_near(principal, phi)
}

// Shifts `angle` by a multiple of 2π so it lies within π of `reference`.
fn unwrap_near<T: Scalar>(angle: T, reference: T) -> T {
    let turns = ((reference - angle) / T::TAU()).round();
    angle + turns * T::TAU()
}

/// Semi-axes `(a, b)` with `π·a·b = area` and `a - b = gap`.
pub fn axes_for_area<T: Scalar>(area: T, gap: T) -> (T, T) {
    let area = area.max(T::zero());
    let four = T::lit(4.0);
    let b = (-gap + (gap * gap + four * area / T::PI()).sqrt()) * T::half();
    (b + gap, b)
}

// Root of the squared-distance derivative on [0, π/2] for a point (x, y)
// outside the ellipse in the first quadrant. Newton with a bisection bracket.
fn nearest_parameter<T: Scalar>(a: T, b: T, x: T, y: T) -> T {
    let g = |phi: T| {
        let (s, c) = phi.sin_cos();
        (b * b - a * a) * s * c + a * x * s - b * y * c
    };
    let dg = |phi: T| {
        let (s, c) = phi.sin_cos();
        (b * b - a * a) * (c * c - s * s) + a * x * c + b * y * s
    };
    let mut lo = T::zero();
    let mut hi = T::FRAC_PI_2();
    if g(lo) >= T::zero() {
        return lo;
    }
    if g(hi) <= T::zero() {
        return hi;
    }
    let tol = T::epsilon() * T::lit(8.0);
    let mut phi = (y * a).atan2(x * b).max(lo).min(hi);
    for _ in 0..128 {
        let gv = g(phi);
        if gv == T::zero() {
            return phi;
        }
        if gv < T::zero() {
            lo = phi;
        } else {
            hi = phi;
        }
        let slope = dg(phi);
        let newton = phi - gv / slope;
        let prev = phi;
        phi = if slope > T::zero() && newton > lo && newton < hi {
            newton
        } else {
            (lo + hi) * T::half()
        };
        if hi - lo <= tol || (phi - prev).abs() <= tol {
            break;
        }
    }
    phi
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, PI, TAU};

    fn ellipse(a: f64, b: f64) -> FireFront<f64> {
        FireFront::new(0, Point2::zero(), a, b, 0.0)
    }

    #[test]
    fn intensity_and_spread() {
        assert_relative_eq!(fireline_intensity(1.0, 10.0, 2.0), 10.0);
        assert_relative_eq!(fireline_intensity(2.0, 1.0, 1.0), 2.0);
        let i = fireline_intensity(4.0, 259.833, 2.174);
        // 259.833 · 4^2.174, evaluated independently as exp(2.174·ln 4).
        assert_relative_eq!(i, 259.833 * (2.174 * 4f64.ln()).exp(), max_relative = 1e-12);
        assert!((i - 5291.5).abs() < 1.0);
        assert!((spread_rate(i, 18600.0, 4.0) - 0.0711).abs() < 5e-4);
        assert_eq!(spread_rate(0.0, 18600.0, 4.0), 0.0);
        assert_relative_eq!(spread_rate(100.0, 100.0, 1.0), 1.0);
    }

    #[test]
    fn grow_examples() {
        let mut f = FireFront::new(1, Point2::zero(), 300.0, 250.0, 0.0711);
        f.grow(10.0);
        assert_relative_eq!(f.a, 300.711, epsilon = 1e-9);
        assert_relative_eq!(f.b, 250.711, epsilon = 1e-9);

        let mut still = ellipse(300.0, 250.0);
        still.grow(10.0);
        assert_eq!((still.a, still.b), (300.0, 250.0));

        let mut out = FireFront::new(1, Point2::zero(), 100.0, 100.0, 0.0);
        out.apply_quench(1, PI * 100.0 * 100.0 / 10.0, 10.0);
        assert_eq!(out.state(), FireState::Extinguished);
        out.spread_rate = 1.0;
        let before = (out.a, out.b);
        out.grow(5.0);
        assert_eq!((out.a, out.b), before);
    }

    #[test]
    fn area_examples() {
        assert_relative_eq!(ellipse(300.0, 250.0).area(), 235_619.449, epsilon = 1e-3);
        assert_relative_eq!(ellipse(50.0, 50.0).area(), 7_853.98, epsilon = 1e-2);
        assert_eq!(axes_for_area(0.0, 0.0), (0.0, 0.0));
    }

    #[test]
    fn sector_area_examples() {
        let c = ellipse(200.0, 200.0);
        assert_relative_eq!(
            c.sector_area(0.0, FRAC_PI_2).unwrap(),
            PI * 200.0 * 200.0 / 4.0,
            max_relative = 1e-12
        );
        let e = ellipse(300.0, 250.0);
        assert_relative_eq!(
            e.sector_area(0.0, FRAC_PI_2).unwrap(),
            e.area() / 4.0,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            e.sector_area(0.0, TAU).unwrap(),
            e.area(),
            max_relative = 1e-12
        );
        // Past π/2 the principal-branch formula would go negative.
        assert!(e.sector_area(0.0, 2.0).unwrap() > e.area() / 4.0);
        assert!(e.sector_area(-0.1, 1.0).is_err());
        assert!(e.sector_area(1.0, 1.0).is_err());
        assert!(e.sector_area(0.0, 7.0).is_err());
    }

    #[test]
    fn partition_examples() {
        let c = ellipse(150.0, 150.0);
        let g = c.partition_sectors(4).unwrap();
        for (got, want) in g.iter().zip([0.0, FRAC_PI_2, PI, 1.5 * PI, TAU]) {
            assert_relative_eq!(*got, want, epsilon = 1e-12);
        }
        assert_eq!(
            ellipse(300.0, 250.0).partition_sectors(1).unwrap(),
            vec![0.0, TAU]
        );
        assert_eq!(c.partition_sectors(0), Err(FireError::ZeroSectors));
    }

    #[test]
    fn quench_preserves_axis_gap() {
        let mut f = ellipse(300.0, 250.0);
        let a0 = f.area();
        let removed = f.apply_quench(5, 2.0, 1.0);
        assert_relative_eq!(removed, 10.0);
        assert_relative_eq!(f.area(), a0 - 10.0, max_relative = 1e-12);
        assert!((f.a - f.b - 50.0).abs() < 1e-9);
        assert_relative_eq!(f.quenched_area_total(), 10.0);

        let mut g = ellipse(300.0, 250.0);
        g.spread_rate = 0.0711;
        let mut h = g.clone();
        g.apply_quench(0, 2.0, 10.0);
        h.grow(10.0);
        assert_relative_eq!(g.a, h.a, max_relative = 1e-12);
        assert_relative_eq!(g.b, h.b, max_relative = 1e-12);
    }

    #[test]
    fn front_points() {
        let e = ellipse(300.0, 250.0);
        let p = e.point_on_front(0.0);
        assert_relative_eq!(p.x, 300.0);
        let q = e.point_on_front(FRAC_PI_2);
        assert!(q.x.abs() < 1e-9 && (q.y - 250.0).abs() < 1e-9);
        let r = ellipse(200.0, 200.0).point_on_front(PI / 4.0);
        assert_relative_eq!(r.x, 141.421356, epsilon = 1e-5);
        assert_relative_eq!(r.y, 141.421356, epsilon = 1e-5);
    }

    #[test]
    fn distance_examples() {
        assert_relative_eq!(
            ellipse(100.0, 100.0).distance_to_front(Point2::new(250.0, 0.0)),
            150.0,
            epsilon = 1e-9
        );
        assert_eq!(
            ellipse(300.0, 250.0).distance_to_front(Point2::new(10.0, -20.0)),
            0.0
        );
        assert_relative_eq!(
            ellipse(300.0, 250.0).distance_to_front(Point2::new(400.0, 0.0)),
            100.0,
            epsilon = 1e-9
        );
        assert_relative_eq!(
            ellipse(300.0, 250.0).distance_to_front(Point2::new(0.0, -400.0)),
            150.0,
            epsilon = 1e-9
        );
    }

    #[test]
    fn works_in_single_precision() {
        let f: FireFront<f32> = FireFront::new(0, Point2::zero(), 300.0, 250.0, 0.0);
        let g = f.partition_sectors(3).unwrap();
        let s = f.sector_area(g[0], g[1]).unwrap();
        assert!((s / (f.area() / 3.0) - 1.0).abs() < 1e-5);
        assert!((f.distance_to_front(Point2::new(400.0, 0.0)) - 100.0).abs() < 1e-3);
    }
}
