//! First-order UAV kinematics driven by position-to-velocity feedback.

use serde::{Deserialize, Serialize};

use crate::geometry::Point2;
use crate::num::Scalar;

/// Operating mode of a single UAV.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum UavMode {
    Explore,
    Exploit,
    /// Pulled back toward the swarm center.
    Attracted,
    /// Flying to an alignment point on a fire front.
    Align,
    Mitigate,
    Repelled,
}

/// Sweep direction along a fire front, `μ ∈ {-1, +1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sweep {
    Forward,
    Backward,
}

impl Sweep {
    pub fn sign<T: Scalar>(self) -> T {
        match self {
            Sweep::Forward => T::one(),
            Sweep::Backward => -T::one(),
        }
    }

    pub fn reversed(self) -> Self {
        match self {
            Sweep::Forward => Sweep::Backward,
            Sweep::Backward => Sweep::Forward,
        }
    }
}

/// Sector a UAV sweeps while mitigating. `lo`/`hi` are the sector bounds in
/// the ellipse-parameter domain the angles `theta`/`theta_ref` live in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorAssignment<T> {
    pub fire: usize,
    pub sector: usize,
    pub lo: T,
    pub hi: T,
    pub theta: T,
    pub theta_ref: T,
    pub sweep: Sweep,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UavState<T> {
    pub id: usize,
    pub swarm: usize,
    pub position: Point2<T>,
    pub velocity: Point2<T>,
    pub mode: UavMode,
    pub waypoint: Point2<T>,
    pub waypoint_velocity: Point2<T>,
    pub assignment: Option<SectorAssignment<T>>,
}

impl<T: Scalar> UavState<T> {
    /// A UAV at rest at `position`, holding station there.
    pub fn at_rest(id: usize, swarm: usize, position: Point2<T>) -> Self {
        Self {
            id,
            swarm,
            position,
            velocity: Point2::zero(),
            mode: UavMode::Explore,
            waypoint: position,
            waypoint_velocity: Point2::zero(),
            assignment: None,
        }
    }

    /// Advances the first-order velocity lag `v̇ = -λ(v - v_r)` by `dt` using
    /// its exact solution, with `v_r` held over the step.
    pub fn step(&mut self, reference: Point2<T>, pole: T, dt: T) {
        let decay = (-pole * dt).exp();
        let lag = self.velocity - reference;
        // ∫₀^dt e^{-λs} ds = (1 - e^{-λdt}) / λ
        let lag_integral = (T::one() - decay) / pole;
        self.position += reference * dt + lag * lag_integral;
        self.velocity = reference + lag * decay;
    }

    /// Value-returning form of [`step`](Self::step).
    pub fn stepped(&self, reference: Point2<T>, pole: T, dt: T) -> Self {
        let mut next = self.clone();
        next.step(reference, pole, dt);
        next
    }

    /// Heading of the current velocity, if the UAV is moving.
    pub fn heading(&self) -> Option<T> {
        (self.velocity.norm() > T::lit(1e-9)).then(|| self.velocity.angle())
    }
}

/// Reference velocity `V0·e/(τ + ‖e‖) + ṗ_r` with `e = p_r - p`.
pub fn reference_velocity<T: Scalar>(
    position: Point2<T>,
    waypoint: Point2<T>,
    waypoint_velocity: Point2<T>,
    cruise_speed: T,
    tau: T,
) -> Point2<T> {
    let error = waypoint - position;
    error * (cruise_speed / (tau + error.norm())) + waypoint_velocity
}

/// Whether `position` is close enough to `waypoint` to issue the next one:
/// within `max(2·V0·dt, 5 m)`.
pub fn waypoint_reached<T: Scalar>(
    position: Point2<T>,
    waypoint: Point2<T>,
    cruise_speed: T,
    dt: T,
) -> bool {
    position.distance(waypoint) < reach_radius(cruise_speed, dt)
}

pub fn reach_radius<T: Scalar>(cruise_speed: T, dt: T) -> T {
    (T::two() * cruise_speed * dt).max(T::lit(5.0))
}
