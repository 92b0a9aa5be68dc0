//! Waypoint generation for the cooperative information-driven search and
//! for the independent-UAV baseline strategies.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::geometry::{project_to_disk, wrap_angle, Point2, Rect};
use crate::scenario::{ScenarioConfig, Strategy};
use crate::sensing::SensorReading;

type Point = Point2<f64>;

/// Search level of a swarm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SwarmMode {
    Explore,
    Exploit,
    /// Committed to a detected fire.
    Locked,
}

/// Pooled view a swarm has of its members.
#[derive(Debug, Clone, PartialEq)]
pub struct SwarmSearchState {
    pub id: usize,
    pub members: Vec<usize>,
    /// Mean member position.
    pub center: Point,
    /// Mean member velocity.
    pub mean_velocity: Point,
    /// Member with the largest temperature rate.
    pub max_info_member: Option<usize>,
    /// Largest temperature sensed by any member, K.
    pub max_temperature: f64,
    pub mode: SwarmMode,
}

impl SwarmSearchState {
    pub fn new(id: usize, members: Vec<usize>) -> Self {
        Self {
            id,
            members,
            center: Point::zero(),
            mean_velocity: Point::zero(),
            max_info_member: None,
            max_temperature: f64::NEG_INFINITY,
            mode: SwarmMode::Explore,
        }
    }

    /// Refreshes center, mean velocity, `T_s` and `k*` from member states.
    /// `members` yields `(id, position, velocity, latest reading)`.
    pub fn pool<'a>(
        &mut self,
        members: impl IntoIterator<Item = (usize, Point, Point, &'a SensorReading<f64>)>,
    ) {
        let mut n = 0usize;
        let mut sum_p = Point::zero();
        let mut sum_v = Point::zero();
        let mut t_max = f64::NEG_INFINITY;
        let mut rates = Vec::with_capacity(self.members.len());
        for (id, p, v, reading) in members {
            n += 1;
            sum_p += p;
            sum_v += v;
            t_max = t_max.max(reading.temperature);
            rates.push((id, reading.temperature_rate));
        }
        if n > 0 {
            self.center = sum_p / n as f64;
            self.mean_velocity = sum_v / n as f64;
        }
        self.max_temperature = t_max;
        self.max_info_member = max_info_member(&rates);
    }

    /// Swarm center advanced along the mean member velocity by `horizon` s.
    pub fn predicted_center(&self, horizon: f64) -> Point {
        self.center + self.mean_velocity * horizon
    }
}

/// Member with the largest temperature rate; ties go to the lowest id.
pub fn max_info_member(rates: &[(usize, f64)]) -> Option<usize> {
    rates
        .iter()
        .copied()
        .reduce(|best, cur| {
            if cur.1 > best.1 || (cur.1 == best.1 && cur.0 < best.0) {
                cur
            } else {
                best
            }
        })
        .map(|(id, _)| id)
}

/// Half-width of the heading cone, `K_φ / (1 + exp(-K_e·T_s))`.
pub fn search_cone_halfwidth(max_temperature: f64, k_phi: f64, k_e: f64) -> f64 {
    k_phi / (1.0 + (-k_e * max_temperature).exp())
}

/// Heading drawn uniformly from `[φ* - φ0, φ* + φ0]`, wrapped to `(-π, π]`.
pub fn sample_heading<R: Rng + ?Sized>(center: f64, half_width: f64, rng: &mut R) -> f64 {
    if half_width <= 0.0 {
        return wrap_angle(center);
    }
    let u: f64 = rng.random();
    wrap_angle(center - half_width + 2.0 * half_width * u)
}

/// Pareto-tailed step lengths `P(l > x) = x^{-α}` on `[1, max]`, drawn by
/// inverting the truncated CDF.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevySampler {
    pub tail_exponent: f64,
    pub max: f64,
}

impl LevySampler {
    pub fn new(tail_exponent: f64, max: f64) -> Self {
        Self {
            tail_exponent,
            max: max.max(1.0),
        }
    }
}

impl Distribution<f64> for LevySampler {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        let tail_mass = 1.0 - self.max.powf(-self.tail_exponent);
        (1.0 - u * tail_mass)
            .powf(-1.0 / self.tail_exponent)
            .min(self.max)
    }
}

/// Step-length parameters shared by the searchers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepParams {
    pub levy_step: f64,
    pub brownian_step: f64,
    pub levy: LevySampler,
}

impl StepParams {
    pub fn from_config(cfg: &ScenarioConfig) -> Self {
        let max = cfg.area().diagonal() / cfg.search.levy_step;
        Self {
            levy_step: cfg.search.levy_step,
            brownian_step: cfg.search.brownian_step,
            levy: LevySampler::new(cfg.search.levy_tail_exponent, max),
        }
    }

    /// Dimensional step `L_s` for a search level.
    pub fn step_scale(&self, mode: SwarmMode) -> f64 {
        match mode {
            SwarmMode::Exploit => self.brownian_step,
            _ => self.levy_step,
        }
    }
}

/// Dimensionless leg length: truncated Levy while exploring, `|N(0,1)|`
/// while exploiting.
pub fn sample_step_length<R: Rng + ?Sized>(
    mode: SwarmMode,
    rng: &mut R,
    params: &StepParams,
) -> f64 {
    match mode {
        SwarmMode::Exploit => {
            let z: f64 = StandardNormal.sample(rng);
            z.abs()
        }
        _ => params.levy.sample(rng),
    }
}

/// `p_k* + L_s·l·(cos Ψ, sin Ψ)`, clamped into Ω and then projected onto the
/// disk of radius `r_s` about `swarm_center`.
pub fn next_waypoint(
    anchor: Point,
    heading: f64,
    step_scale: f64,
    length: f64,
    area: &Rect<f64>,
    swarm_center: Point,
    swarm_radius: f64,
) -> Point {
    let raw = anchor + Point::from_angle(heading) * (step_scale * length);
    let clamped = area.clamp(raw);
    area.clamp(project_to_disk(
        clamped,
        area.clamp(swarm_center),
        swarm_radius,
    ))
}

/// Exploration below ξ, exploitation at or above it.
pub fn select_mode(max_temperature: f64, xi: f64) -> SwarmMode {
    if max_temperature < xi {
        SwarmMode::Explore
    } else {
        SwarmMode::Exploit
    }
}

/// A member's detection that locks its swarm onto a fire.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FireLock {
    pub detector: usize,
    pub fire: usize,
}

/// Outcome of the intra-swarm attraction rules.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LocalAttraction {
    /// Members outside the swarm disk, sent back to the center.
    pub recalls: Vec<(usize, Point)>,
    /// First member (by id) reporting a detection, if any. All other members
    /// are redirected to that fire and the swarm locks.
    pub lock: Option<FireLock>,
}

/// Applies containment and detection attraction. `members` yields
/// `(id, position, latest reading)` in id order; `eligible` filters which
/// detected fires may lock the swarm.
pub fn local_attraction<'a>(
    swarm: &SwarmSearchState,
    swarm_radius: f64,
    members: impl IntoIterator<Item = (usize, Point, &'a SensorReading<f64>)>,
    mut eligible: impl FnMut(usize) -> bool,
) -> LocalAttraction {
    let mut out = LocalAttraction::default();
    for (id, p, reading) in members {
        if out.lock.is_none() {
            if let Some(desc) = reading.detected.filter(|d| eligible(d.fire)) {
                out.lock = Some(FireLock {
                    detector: id,
                    fire: desc.fire,
                });
            }
        }
        if p.distance(swarm.center) > swarm_radius {
            out.recalls.push((id, swarm.center));
        }
    }
    if out.lock.is_some() {
        out.recalls.clear();
    }
    out
}

/// Independent per-UAV waypoint for a baseline strategy.
#[allow(clippy::too_many_arguments)]
pub fn baseline_waypoint<R: Rng + ?Sized>(
    strategy: Strategy,
    position: Point,
    heading: Option<f64>,
    reading: &SensorReading<f64>,
    xi: f64,
    rng: &mut R,
    area: &Rect<f64>,
    params: &StepParams,
) -> Point {
    let uniform_heading = |rng: &mut R| rng.random_range(-PI..PI);
    let raw = match strategy {
        Strategy::Uniform => Point::new(
            rng.random_range(area.min.x..=area.max.x),
            rng.random_range(area.min.y..=area.max.y),
        ),
        Strategy::Normal => {
            let h = uniform_heading(rng);
            let l = sample_step_length(SwarmMode::Exploit, rng, params);
            position + Point::from_angle(h) * (params.brownian_step * l)
        }
        Strategy::Levy | Strategy::Mscidc => {
            let h = uniform_heading(rng);
            let l = sample_step_length(SwarmMode::Explore, rng, params);
            position + Point::from_angle(h) * (params.levy_step * l)
        }
        Strategy::Oms => {
            // Levy legs in cool air; gradient-biased Brownian legs once the
            // UAV's own temperature crosses ξ (keep heading while warming,
            // turn back while cooling).
            let mode = select_mode(reading.temperature, xi);
            let h = match (mode, heading) {
                (SwarmMode::Exploit, Some(h)) => {
                    let base = if reading.temperature_rate >= 0.0 {
                        h
                    } else {
                        h + PI
                    };
                    sample_heading(base, PI / 4.0, rng)
                }
                _ => uniform_heading(rng),
            };
            let l = sample_step_length(mode, rng, params);
            position + Point::from_angle(h) * (params.step_scale(mode) * l)
        }
    };
    area.clamp(raw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;
    use approx::assert_relative_eq;

    fn reading(t: f64, rate: f64) -> SensorReading<f64> {
        SensorReading {
            uav: 0,
            time: 0.0,
            temperature: t,
            temperature_rate: rate,
            candidate: None,
            probability: 0.0,
            heading_to_fire: None,
            detected: None,
        }
    }

    #[test]
    fn max_info_examples() {
        assert_eq!(max_info_member(&[(1, 0.1), (2, 0.5), (3, 0.2)]), Some(2));
        assert_eq!(max_info_member(&[(4, 0.0), (2, 0.0), (3, 0.0)]), Some(2));
        assert_eq!(max_info_member(&[(9, -1.0)]), Some(9));
        assert_eq!(max_info_member(&[]), None);
    }

    #[test]
    fn cone_examples() {
        assert_relative_eq!(search_cone_halfwidth(1e6, PI, 0.05), PI);
        assert_relative_eq!(search_cone_halfwidth(0.0, PI, 0.05), PI / 2.0);
        assert_relative_eq!(
            search_cone_halfwidth(300.0, PI, 0.05),
            PI / (1.0 + (-15f64).exp())
        );
    }

    #[test]
    fn heading_degenerate_and_full() {
        let mut rng = RngStream::new(1, 0, 1);
        assert_eq!(sample_heading(0.7, 0.0, &mut rng), 0.7);
        let draws: Vec<f64> = (0..10_000)
            .map(|_| sample_heading(0.0, PI, &mut rng))
            .collect();
        assert!(draws.iter().any(|&h| h > 3.0) && draws.iter().any(|&h| h < -3.0));
    }

    #[test]
    fn waypoint_examples() {
        let area = Rect::from_size(10_000.0, 10_000.0);
        let p = Point::new(5000.0, 5000.0);
        assert_eq!(next_waypoint(p, 1.0, 500.0, 0.0, &area, p, 250.0), p);
        let w = next_waypoint(p, 0.0, 500.0, 1.0, &area, Point::new(5500.0, 5000.0), 250.0);
        assert_relative_eq!(w.x, 5500.0);
        assert_relative_eq!(w.y, 5000.0);
        let edge = next_waypoint(
            Point::new(9900.0, 10.0),
            0.0,
            500.0,
            1.0,
            &area,
            Point::new(9900.0, 10.0),
            1e9,
        );
        assert_eq!(edge, Point::new(10_000.0, 10.0));
        let held = next_waypoint(p, 0.0, 500.0, 4.0, &area, p, 250.0);
        assert_relative_eq!(held.x, 5250.0);
    }

    #[test]
    fn mode_threshold() {
        assert_eq!(select_mode(329.0, 330.0), SwarmMode::Explore);
        assert_eq!(select_mode(330.0, 330.0), SwarmMode::Exploit);
        assert_eq!(select_mode(430.0, 330.0), SwarmMode::Exploit);
    }

    #[test]
    fn attraction_rules() {
        let mut swarm = SwarmSearchState::new(0, vec![1, 2, 3]);
        swarm.center = Point::zero();
        let quiet = reading(300.0, 0.0);
        let inside = [
            (1, Point::new(10.0, 0.0), &quiet),
            (2, Point::new(0.0, 20.0), &quiet),
        ];
        assert_eq!(
            local_attraction(&swarm, 250.0, inside, |_| true),
            LocalAttraction::default()
        );

        let out = [
            (1, Point::new(260.0, 0.0), &quiet),
            (2, Point::new(0.0, 20.0), &quiet),
        ];
        let res = local_attraction(&swarm, 250.0, out, |_| true);
        assert_eq!(res.recalls, vec![(1, Point::zero())]);
        assert!(res.lock.is_none());

        let mut hot = reading(1200.0, 1.0);
        hot.detected = Some(crate::sensing::FireDescriptor {
            fire: 1,
            center: Point::zero(),
            a: 10.0,
            b: 10.0,
        });
        let det = [
            (1, Point::new(0.0, 0.0), &quiet),
            (2, Point::new(0.0, 0.0), &quiet),
            (3, Point::new(0.0, 0.0), &hot),
        ];
        let res = local_attraction(&swarm, 250.0, det, |_| true);
        assert_eq!(
            res.lock,
            Some(FireLock {
                detector: 3,
                fire: 1
            })
        );
        let det2 = [(3, Point::new(0.0, 0.0), &hot)];
        assert!(local_attraction(&swarm, 250.0, det2, |_| false)
            .lock
            .is_none());
    }

    #[test]
    fn levy_truncation() {
        let params = StepParams {
            levy_step: 500.0,
            brownian_step: 50.0,
            levy: LevySampler::new(1.5, 28.28),
        };
        let mut rng = RngStream::new(7, 0, 3);
        for _ in 0..100_000 {
            let l = sample_step_length(SwarmMode::Explore, &mut rng, &params);
            assert!((1.0..=28.28).contains(&l));
        }
    }

    #[test]
    fn oms_uses_levy_when_cool() {
        let params = StepParams {
            levy_step: 500.0,
            brownian_step: 50.0,
            levy: LevySampler::new(1.5, 28.0),
        };
        let area = Rect::from_size(1e6, 1e6);
        let mut rng = RngStream::new(7, 0, 3);
        let p = Point::new(5e5, 5e5);
        for _ in 0..1000 {
            let w = baseline_waypoint(
                Strategy::Oms,
                p,
                Some(0.0),
                &reading(300.0, 0.0),
                330.0,
                &mut rng,
                &area,
                &params,
            );
            assert!(w.distance(p) >= 500.0 - 1e-6);
        }
        let hot = reading(400.0, 1.0);
        let w = baseline_waypoint(
            Strategy::Oms,
            p,
            Some(0.0),
            &hot,
            330.0,
            &mut rng,
            &area,
            &params,
        );
        assert!(w.distance(p) < 500.0);
    }
}
