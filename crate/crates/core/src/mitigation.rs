//! Divide-and-conquer sector mitigation and inter-swarm coordination rules.
//!
//! Each fire under mitigation is split into equal-area polar sectors, one per
//! quenching UAV. A UAV sweeps its sector to and fro along the front. Sweeps
//! are integrated in the ellipse-parameter domain, where equal-area sectors
//! are equal-width intervals, so the sweep covers exactly the front arc of
//! its polar sector.

use thiserror::Error;

use crate::firemodel::{sector_parameter, FireError, FireFront};
use crate::geometry::{wrap_angle, Point2};
use crate::num::Scalar;
use crate::scenario::ControlLaw;
use crate::vehicle::Sweep;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MitigationError {
    #[error("cannot assign sectors of fire {0} to an empty member list")]
    NoMembers(usize),
    #[error(transparent)]
    Fire(#[from] FireError),
}

/// Area quenched per UAV per second, `W_r / (c·L_f^ν)`, m²/s.
pub fn quench_area_rate<T: Scalar>(water_rate: T, c: T, nu: T, flame_length: T) -> T {
    water_rate / (c * flame_length.powf(nu))
}

/// Quench time of area `A_f` by `n` UAVs joining together, `A_f/(n·r_q)`.
pub fn closed_form_quench_time<T: Scalar>(area: T, n: usize, quench_rate: T) -> T {
    area / (T::from_usize(n).unwrap() * quench_rate)
}

/// Angular state of a sweeping UAV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepState<T> {
    pub theta: T,
    pub theta_ref: T,
    pub sweep: Sweep,
}

impl<T: Scalar> SweepState<T> {
    pub fn new(theta_ref: T) -> Self {
        Self {
            theta: theta_ref,
            theta_ref,
            sweep: Sweep::Forward,
        }
    }

    /// Instantaneous `θ̇` under `law`.
    pub fn theta_rate(&self, omega: T, k_m: T, law: ControlLaw) -> T {
        let feed = match law {
            ControlLaw::Corrected => self.sweep.sign::<T>() * omega,
            ControlLaw::Printed => omega,
        };
        feed + k_m * (self.theta - self.theta_ref)
    }
}

/// Advances the sweep law by `dt`:
///
/// `θ̇_r = μω`, `θ̇ = μω + K_m(θ - θ_r)` (or `ω + K_m(θ - θ_r)` for
/// [`ControlLaw::Printed`]), with μ reversing within `δ_θ` of a bound while
/// heading toward it. θ_r is held inside `[lo, hi]`.
#[allow(clippy::too_many_arguments)]
pub fn angular_control<T: Scalar>(
    state: SweepState<T>,
    lo: T,
    hi: T,
    omega: T,
    k_m: T,
    delta_theta: T,
    dt: T,
    law: ControlLaw,
) -> SweepState<T> {
    let mut sweep = state.sweep;
    match sweep {
        Sweep::Backward if state.theta_ref - lo < delta_theta => sweep = Sweep::Forward,
        Sweep::Forward if hi - state.theta_ref < delta_theta => sweep = Sweep::Backward,
        _ => {}
    }
    let mu = sweep.sign::<T>();
    let decay = (k_m * dt).exp();
    let error = state.theta - state.theta_ref;
    // Error dynamics ė = K_m·e + drift, drift = (1 - μ)ω for the printed law.
    let next_error = match law {
        ControlLaw::Corrected => error * decay,
        ControlLaw::Printed => {
            let steady = -(T::one() - mu) * omega / k_m;
            steady + (error - steady) * decay
        }
    };
    let mut theta_ref = state.theta_ref + mu * omega * dt;
    if theta_ref > hi {
        theta_ref = hi;
        sweep = Sweep::Backward;
    } else if theta_ref < lo {
        theta_ref = lo;
        sweep = Sweep::Forward;
    }
    SweepState {
        theta: theta_ref + next_error,
        theta_ref,
        sweep,
    }
}

/// Nominal sweep rate `V_mit / r_local(θ)` keeping the tangential ground
/// speed at `V_mit`.
pub fn nominal_angular_velocity<T: Scalar>(
    fire: &FireFront<T>,
    mitigation_speed: T,
    theta: T,
) -> T {
    mitigation_speed / fire.local_radius(theta).max(T::lit(1e-6))
}

/// `(A_f > δ_A or F_r < δ_f) and N_qs < δ_s`.
pub fn merging_decision<T: Scalar>(
    fire_area: T,
    remaining_fires: usize,
    quenching_swarms: usize,
    delta_area: T,
    delta_fires: usize,
    delta_swarms: usize,
) -> bool {
    (fire_area > delta_area || remaining_fires < delta_fires) && quenching_swarms < delta_swarms
}

/// A swarm sensing a fire another swarm is already mitigating, with
/// `γ0 < P < γ`, is repelled unless it could merge.
pub fn repulsion_decision<T: Scalar>(
    probability: T,
    gamma0: T,
    gamma: T,
    fire_under_mitigation: bool,
    same_swarm: bool,
    merge: bool,
) -> bool {
    fire_under_mitigation && !same_swarm && probability > gamma0 && probability < gamma && !merge
}

/// Heading opposite to the maximum-information direction, in `(-π, π]`.
pub fn repulsion_heading<T: Scalar>(max_info_heading: T) -> T {
    wrap_angle(max_info_heading + T::PI())
}

/// One quenching UAV's slot in a fire's sector partition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorSlot<T> {
    pub uav: usize,
    pub sector: usize,
    pub state: SweepState<T>,
    /// Time the UAV reached its alignment point and started quenching.
    pub joined_at: Option<T>,
}

/// A UAV of a merging swarm on its way to the front. It holds the front
/// point at ellipse parameter `theta` until every arrival has joined, then
/// the fire is re-partitioned.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arrival<T> {
    pub uav: usize,
    pub theta: T,
    pub joined_at: Option<T>,
}

/// Mitigation bookkeeping for one fire.
#[derive(Debug, Clone, PartialEq)]
pub struct FireMitigationRecord<T> {
    pub fire: usize,
    /// Polar sector boundaries `Γ_1 = 0 .. Γ_{N+1} = 2π`.
    pub bounds: Vec<T>,
    /// Sector slots, indexed by sector.
    pub slots: Vec<SectorSlot<T>>,
    /// Merging UAVs not yet part of the partition.
    pub arrivals: Vec<Arrival<T>>,
    /// Swarms quenching this fire; the first is the detecting swarm.
    pub swarms: Vec<usize>,
}

impl<T: Scalar> FireMitigationRecord<T> {
    /// `N_qu`: UAVs committed to this fire, including arrivals.
    pub fn quenching_uavs(&self) -> usize {
        self.slots.len() + self.arrivals.len()
    }

    /// `N_qs`.
    pub fn quenching_swarms(&self) -> usize {
        self.swarms.len()
    }

    /// UAVs that have reached the front and are quenching.
    pub fn active_uavs(&self) -> usize {
        self.slots.iter().filter(|s| s.joined_at.is_some()).count()
            + self
                .arrivals
                .iter()
                .filter(|a| a.joined_at.is_some())
                .count()
    }

    /// Every UAV committed to the fire, in slot then arrival order.
    pub fn uavs(&self) -> impl Iterator<Item = usize> + '_ {
        self.slots
            .iter()
            .map(|s| s.uav)
            .chain(self.arrivals.iter().map(|a| a.uav))
    }

    pub fn slot(&self, uav: usize) -> Option<&SectorSlot<T>> {
        self.slots.iter().find(|s| s.uav == uav)
    }

    pub fn slot_mut(&mut self, uav: usize) -> Option<&mut SectorSlot<T>> {
        self.slots.iter_mut().find(|s| s.uav == uav)
    }

    /// Sector bounds of `sector` in the ellipse-parameter domain.
    pub fn parameter_bounds(&self, sector: usize) -> (T, T) {
        parameter_bounds(self.slots.len(), sector)
    }

    /// Recomputes the polar boundaries for the fire's current shape.
    pub fn refresh_bounds(&mut self, fire: &FireFront<T>) -> Result<(), FireError> {
        if fire.is_active() {
            self.bounds = fire.partition_sectors(self.slots.len())?;
        }
        Ok(())
    }

    /// Re-partitions the fire among the current slots plus all pending
    /// arrivals, preserving the cyclic angular order of all members. Join
    /// times and sweep errors are kept; reference angles are clamped into
    /// the new sectors and arrivals start at their sector midpoints.
    pub fn repartition(&mut self, fire: &FireFront<T>) -> Result<(), MitigationError> {
        let mut members: Vec<Member<T>> = self
            .slots
            .iter()
            .map(|s| (s.uav, s.state.theta, s.joined_at, Some(s.state)))
            .collect();
        for a in self.arrivals.drain(..) {
            if members.iter().all(|m| m.0 != a.uav) {
                members.push((a.uav, a.theta, a.joined_at, None));
            }
        }
        if members.is_empty() {
            return Err(MitigationError::NoMembers(fire.id));
        }
        let n = members.len();
        self.bounds = fire.partition_sectors(n)?;
        members.sort_by(|x, y| {
            normalize(x.1)
                .partial_cmp(&normalize(y.1))
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(x.0.cmp(&y.0))
        });
        let angles: Vec<T> = members.iter().map(|m| normalize(m.1)).collect();
        let offset = best_rotation(&angles);
        self.slots = members
            .into_iter()
            .enumerate()
            .map(|(k, (uav, _, joined_at, prev))| {
                let sector = (k + offset) % n;
                let (lo, hi) = parameter_bounds(n, sector);
                let state = match prev {
                    Some(mut s) => {
                        let target = unwrap_into(s.theta, lo, hi);
                        let shift = target - s.theta;
                        s.theta = target;
                        s.theta_ref = (s.theta_ref + shift).max(lo).min(hi);
                        s
                    }
                    None => SweepState::new((lo + hi) * T::half()),
                };
                SectorSlot {
                    uav,
                    sector,
                    state,
                    joined_at,
                }
            })
            .collect();
        self.slots.sort_by_key(|s| s.sector);
        Ok(())
    }
}

/// Initial sector assignment for a newly detected fire: one equal-area
/// sector per member, members taken in cyclic angular order about the fire
/// center, each starting at its sector midpoint with μ = +1.
pub fn assign_sectors<T: Scalar>(
    fire: &FireFront<T>,
    members: &[(usize, Point2<T>)],
    swarm: usize,
) -> Result<FireMitigationRecord<T>, MitigationError> {
    if members.is_empty() {
        return Err(MitigationError::NoMembers(fire.id));
    }
    let arrivals = members
        .iter()
        .map(|&(uav, p)| Arrival {
            uav,
            theta: position_parameter(fire, p),
            joined_at: None,
        })
        .collect();
    let mut rec = FireMitigationRecord {
        fire: fire.id,
        bounds: Vec::new(),
        slots: Vec::new(),
        arrivals,
        swarms: vec![swarm],
    };
    rec.repartition(fire)?;
    Ok(rec)
}

// (uav, θ, joined_at, sweep state carried over from an existing slot)
type Member<T> = (usize, T, Option<T>, Option<SweepState<T>>);

/// Equal-width sector `sector` of `n` in the ellipse-parameter domain.
pub fn parameter_bounds<T: Scalar>(n: usize, sector: usize) -> (T, T) {
    let width = T::TAU() / T::from_usize(n).unwrap();
    let lo = width * T::from_usize(sector).unwrap();
    let hi = if sector + 1 == n {
        T::TAU()
    } else {
        width * T::from_usize(sector + 1).unwrap()
    };
    (lo, hi)
}

/// Ellipse parameter of the front point in the direction of `p` from the center.
pub fn position_parameter<T: Scalar>(fire: &FireFront<T>, p: Point2<T>) -> T {
    let d = p - fire.center;
    let polar = if d.norm() > T::zero() {
        normalize(d.angle())
    } else {
        T::zero()
    };
    sector_parameter(fire.a, fire.b, polar)
}

fn normalize<T: Scalar>(angle: T) -> T {
    let r = angle % T::TAU();
    if r < T::zero() {
        r + T::TAU()
    } else {
        r
    }
}

// Representative of `angle` (mod 2π) closest to the interval [lo, hi].
fn unwrap_into<T: Scalar>(angle: T, lo: T, hi: T) -> T {
    let mid = (lo + hi) * T::half();
    let turns = ((mid - angle) / T::TAU()).round();
    angle + turns * T::TAU()
}

// Cyclic shift of sorted member angles onto sector midpoints with the least
// total angular travel; ties go to the smallest shift.
fn best_rotation<T: Scalar>(angles: &[T]) -> usize {
    let n = angles.len();
    let mut best = (0, T::infinity());
    for r in 0..n {
        let cost = angles
            .iter()
            .enumerate()
            .map(|(k, &a)| {
                let (lo, hi) = parameter_bounds::<T>(n, (k + r) % n);
                wrap_angle(a - (lo + hi) * T::half()).abs()
            })
            .fold(T::zero(), |acc, c| acc + c);
        if cost < best.1 {
            best = (r, cost);
        }
    }
    best.0
}
