//! Discrete-time orchestration of search, detection, mitigation and
//! inter-swarm coordination, plus per-run metrics.
//!
//! One tick runs, in order: fire growth, sensing, per-swarm search and
//! attraction (swarms by id, members by id), the mitigation coordinator
//! (fires by id), sweep control, vehicle kinematics and quenching. All state
//! is mutated by a single thread, so a `(config, run_index)` pair always
//! produces the same run.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::firemodel::{FireFront, FireState};
use crate::geometry::{Point2, Rect};
use crate::mitigation::{self, Arrival, FireMitigationRecord};
use crate::rng::RngStream;
use crate::scenario::{ScenarioConfig, Strategy};
use crate::search::{self, StepParams, SwarmMode, SwarmSearchState};
use crate::sensing::{SensorModel, SensorReading};
use crate::vehicle::{self, SectorAssignment, UavMode, UavState};

type Point = Point2<f64>;

/// Timestamped coordination events.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Event {
    Detection {
        t: f64,
        fire: usize,
        swarm: usize,
        uav: usize,
    },
    Join {
        t: f64,
        fire: usize,
        uav: usize,
    },
    Merge {
        t: f64,
        fire: usize,
        swarm: usize,
        host: usize,
    },
    Repulsion {
        t: f64,
        fire: usize,
        swarm: usize,
    },
    Extinction {
        t: f64,
        fire: usize,
    },
}

impl Event {
    pub fn time(&self) -> f64 {
        match *self {
            Event::Detection { t, .. }
            | Event::Join { t, .. }
            | Event::Merge { t, .. }
            | Event::Repulsion { t, .. }
            | Event::Extinction { t, .. } => t,
        }
    }
}

/// Aggregate counters at one logged step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub t: f64,
    /// Fires detected so far.
    pub f_d: usize,
    /// Fires under mitigation.
    pub f_f: usize,
    /// Fires not yet extinguished.
    pub f_r: usize,
    pub extinguished: usize,
    /// Live swarms searching.
    pub s_s: usize,
    /// Live swarms mitigating.
    pub s_q: usize,
    pub live_swarms: usize,
    /// Total active fire area, m².
    pub total_area: f64,
    /// Largest number of swarms on any single fire.
    pub max_quenching_swarms: usize,
}

/// Per-fire outcome.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FireOutcome {
    pub fire: usize,
    pub detected_at: Option<f64>,
    pub area_at_detection: Option<f64>,
    pub extinguished_at: Option<f64>,
    /// Area still burning when the run ended, m².
    pub final_area: f64,
}

impl FireOutcome {
    /// Time from detection to extinction (or to `end` if still burning).
    pub fn quench_time(&self, end: f64) -> Option<f64> {
        self.detected_at
            .map(|d| self.extinguished_at.unwrap_or(end) - d)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub run_index: u64,
    pub base_seed: u64,
    pub strategy: Strategy,
    /// Independent search entities at the start of the run.
    pub n_swarms: usize,
    /// Time the last fire was detected (end time if some fire never was), s.
    pub detection_time: f64,
    /// Time the last fire was extinguished (end time if incomplete), s.
    pub mission_time: f64,
    pub fer: f64,
    pub objective: f64,
    /// All fires extinguished before `t_max`.
    pub complete: bool,
    pub end_time: f64,
    pub fires: Vec<FireOutcome>,
    /// Fires whose quench time reached `Q_tmax`.
    pub quench_time_violations: Vec<usize>,
    pub series: Vec<StepRecord>,
    pub events: Vec<Event>,
}

/// `w1·Σ A_detected + w2·Σ A_undetected + w3·Σ Q_t`, with detected areas
/// taken at detection and undetected ones at the end of the run.
pub fn weighted_objective(result: &RunResult, w1: f64, w2: f64, w3: f64) -> f64 {
    let mut detected = 0.0;
    let mut undetected = 0.0;
    let mut quench = 0.0;
    for f in &result.fires {
        match f.area_at_detection {
            Some(a) => {
                detected += a;
                quench += f.quench_time(result.end_time).unwrap_or(0.0);
            }
            None => undetected += f.final_area,
        }
    }
    w1 * detected + w2 * undetected + w3 * quench
}

/// Fires whose quench time is not below `q_tmax`.
pub fn quench_time_violations(result: &RunResult, q_tmax: f64) -> Vec<usize> {
    result
        .fires
        .iter()
        .filter(|f| f.quench_time(result.end_time).is_some_and(|q| q >= q_tmax))
        .map(|f| f.fire)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RepelState {
    /// Cone center while repelled, rad.
    pub heading: f64,
    pub until: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Swarm {
    /// Original roster plus pooled search state.
    pub search: SwarmSearchState,
    /// Host swarm this one merged into while mitigating.
    pub merged_into: Option<usize>,
    /// Fire this swarm is committed to.
    pub fire: Option<usize>,
    pub repel: Option<RepelState>,
}

impl Swarm {
    pub fn is_live(&self) -> bool {
        self.merged_into.is_none()
    }
}

/// Full simulation state.
#[derive(Debug, Clone)]
pub struct WorldState {
    pub time: f64,
    pub tick: u64,
    pub fires: Vec<FireFront<f64>>,
    pub uavs: Vec<UavState<f64>>,
    pub swarms: Vec<Swarm>,
    /// Mitigation record per fire (same indexing as `fires`).
    pub records: Vec<Option<FireMitigationRecord<f64>>>,
    pub readings: Vec<Option<SensorReading<f64>>>,
    pub events: Vec<Event>,
    pub outcomes: Vec<FireOutcome>,
    pub initial_area: f64,
    pub peak_area: f64,
    last_heading: Vec<Option<f64>>,
    rngs: Vec<RngStream>,
    prev_minor_axis: Vec<f64>,
}

impl WorldState {
    pub fn total_area(&self) -> f64 {
        self.fires.iter().map(FireFront::active_area).sum()
    }

    pub fn all_extinguished(&self) -> bool {
        self.fires.iter().all(|f| !f.is_active())
    }

    pub fn step_record(&self) -> StepRecord {
        let f_d = self
            .fires
            .iter()
            .filter(|f| f.state() != FireState::Burning)
            .count();
        let f_f = self
            .fires
            .iter()
            .filter(|f| f.state() == FireState::UnderMitigation)
            .count();
        let extinguished = self
            .fires
            .iter()
            .filter(|f| f.state() == FireState::Extinguished)
            .count();
        let live: Vec<&Swarm> = self.swarms.iter().filter(|s| s.is_live()).collect();
        let s_q = live.iter().filter(|s| s.fire.is_some()).count();
        StepRecord {
            t: self.time,
            f_d,
            f_f,
            f_r: self.fires.len() - extinguished,
            extinguished,
            s_s: live.len() - s_q,
            s_q,
            live_swarms: live.len(),
            total_area: self.total_area(),
            max_quenching_swarms: self
                .records
                .iter()
                .flatten()
                .map(|r| r.quenching_swarms())
                .max()
                .unwrap_or(0),
        }
    }
}

/// Constants derived once from the configuration.
#[derive(Debug, Clone)]
struct Derived {
    area: Rect<f64>,
    sensor: SensorModel<f64>,
    steps: StepParams,
    quench_rate: f64,
    reach: f64,
}

/// One simulation run.
#[derive(Debug, Clone)]
pub struct Simulation {
    cfg: ScenarioConfig,
    run_index: u64,
    derived: Derived,
    pub world: WorldState,
}

impl Simulation {
    /// Builds the initial world: swarm centers uniform in Ω, members uniform
    /// within `r_s` of their center. Baseline strategies split every swarm
    /// into single-UAV searchers placed identically.
    pub fn new(cfg: &ScenarioConfig, run_index: u64) -> Self {
        let area = cfg.area();
        let seed = cfg.engine.base_seed;
        let mut init = RngStream::new(seed, run_index, RngStream::WORLD);
        let r_s = cfg.swarms.radius;

        let mut positions = Vec::with_capacity(cfg.total_uavs());
        for &size in &cfg.swarms.sizes {
            let center = Point::new(
                init.random_range(area.min.x..=area.max.x),
                init.random_range(area.min.y..=area.max.y),
            );
            let members: Vec<Point> = (0..size)
                .map(|_| {
                    let r = r_s * init.random::<f64>().sqrt();
                    let h = init.random_range(-std::f64::consts::PI..std::f64::consts::PI);
                    area.clamp(center + Point::from_angle(h) * r)
                })
                .collect();
            positions.push(members);
        }
        Self::with_positions(cfg, run_index, positions)
    }

    /// Builds a world with explicit member positions, one list per swarm of
    /// the configured layout.
    pub fn with_positions(
        cfg: &ScenarioConfig,
        run_index: u64,
        positions: Vec<Vec<Point>>,
    ) -> Self {
        let strategy = cfg.engine.strategy;
        let seed = cfg.engine.base_seed;
        let spread = cfg.spread_rate();
        let fires: Vec<FireFront<f64>> = cfg
            .fires
            .iter()
            .enumerate()
            .map(|(i, f)| FireFront::new(i, Point::new(f.center[0], f.center[1]), f.a, f.b, spread))
            .collect();

        let mut uavs = Vec::new();
        let mut swarms = Vec::new();
        for group in positions {
            let groups: Vec<Vec<Point>> = if strategy.is_baseline() {
                group.into_iter().map(|p| vec![p]).collect()
            } else {
                vec![group]
            };
            for members in groups {
                let sid = swarms.len();
                let ids: Vec<usize> = members
                    .into_iter()
                    .map(|p| {
                        let id = uavs.len();
                        uavs.push(UavState::at_rest(id, sid, p));
                        id
                    })
                    .collect();
                swarms.push(Swarm {
                    search: SwarmSearchState::new(sid, ids),
                    merged_into: None,
                    fire: None,
                    repel: None,
                });
            }
        }

        let n_uavs = uavs.len();
        let n_fires = fires.len();
        let initial_area: f64 = fires.iter().map(FireFront::area).sum();
        let outcomes = fires
            .iter()
            .map(|f| FireOutcome {
                fire: f.id,
                detected_at: None,
                area_at_detection: None,
                extinguished_at: None,
                final_area: f.area(),
            })
            .collect();
        let prev_minor_axis = fires.iter().map(|f| f.b).collect();

        let se = &cfg.sensing;
        let derived = Derived {
            area: cfg.area(),
            sensor: SensorModel {
                t_ambient: se.t_ambient,
                t_fire: se.t_fire,
                plume_width: se.plume_width,
                sigma: se.sigma,
                sensing_radius: se.sensing_radius,
                gamma: se.gamma,
            },
            steps: StepParams::from_config(cfg),
            quench_rate: cfg.quench_rate(),
            reach: vehicle::reach_radius(cfg.kinematics.cruise_speed, cfg.engine.dt),
        };

        let world = WorldState {
            time: 0.0,
            tick: 0,
            fires,
            uavs,
            swarms,
            records: vec![None; n_fires],
            readings: vec![None; n_uavs],
            events: Vec::new(),
            outcomes,
            initial_area,
            peak_area: initial_area,
            last_heading: vec![None; n_uavs],
            rngs: (0..n_uavs)
                .map(|u| RngStream::for_agent(seed, run_index, u))
                .collect(),
            prev_minor_axis,
        };
        Self {
            cfg: cfg.clone(),
            run_index,
            derived,
            world,
        }
    }

    pub fn config(&self) -> &ScenarioConfig {
        &self.cfg
    }

    /// Commits swarm `swarm` to fire `fire` as if one of its members had
    /// just detected it. Returns false if the swarm or fire is unavailable.
    pub fn lock_swarm(&mut self, swarm: usize, fire: usize, detector: usize) -> bool {
        let ok = self
            .world
            .swarms
            .get(swarm)
            .is_some_and(|s| s.is_live() && s.fire.is_none())
            && self
                .world
                .fires
                .get(fire)
                .is_some_and(|f| f.state() == FireState::Burning);
        if ok {
            self.detect(swarm, fire, detector);
        }
        ok
    }

    /// Advances the world by one `dt`.
    pub fn tick(&mut self) {
        let dt = self.cfg.engine.dt;
        if self.world.all_extinguished() {
            self.advance_clock();
            return;
        }
        for f in self
            .world
            .fires
            .iter_mut()
            .filter(|f| f.state() == FireState::Burning)
        {
            f.grow(dt);
        }
        self.sense();
        for s in 0..self.world.swarms.len() {
            if self.cfg.engine.strategy.is_baseline() {
                self.baseline_search(s);
            } else {
                self.swarm_search(s);
            }
        }
        for j in 0..self.world.fires.len() {
            self.coordinate_fire(j);
        }
        self.fly();
        self.quench();
        self.advance_clock();
    }

    fn advance_clock(&mut self) {
        self.world.tick += 1;
        self.world.time = self.world.tick as f64 * self.cfg.engine.dt;
        let area = self.world.total_area();
        if area > self.world.peak_area {
            self.world.peak_area = area;
        }
    }

    fn sense(&mut self) {
        let dt = self.cfg.engine.dt;
        let noise_std = self.cfg.sensing.noise_std;
        let w = &mut self.world;
        for u in 0..w.uavs.len() {
            let prev = w.readings[u].as_ref();
            let mut r =
                self.derived
                    .sensor
                    .sample(u, w.uavs[u].position, &w.fires, prev, w.time, dt);
            if noise_std > 0.0 {
                let z: f64 = w.rngs[u].sample(rand_distr::StandardNormal);
                r.perturb(noise_std * z, prev, dt);
            }
            w.readings[u] = Some(r);
            if let Some(h) = w.uavs[u].heading() {
                w.last_heading[u] = Some(h);
            }
        }
    }

    fn remaining_fires(&self) -> usize {
        self.world.fires.iter().filter(|f| f.is_active()).count()
    }

    fn merge_allowed(&self, fire: usize) -> bool {
        let Some(rec) = self.world.records[fire].as_ref() else {
            return false;
        };
        let m = &self.cfg.mitigation;
        mitigation::merging_decision(
            self.world.fires[fire].area(),
            self.remaining_fires(),
            rec.quenching_swarms(),
            m.delta_area,
            m.delta_fires,
            m.delta_swarms,
        )
    }

    // Fires a searching swarm may commit to: undetected ones, or ones under
    // mitigation that still accept a merge.
    fn lockable(&self, fire: usize) -> bool {
        match self.world.fires[fire].state() {
            FireState::Burning => true,
            FireState::UnderMitigation => self.merge_allowed(fire),
            FireState::Extinguished => false,
        }
    }

    fn swarm_search(&mut self, s: usize) {
        let swarm = &self.world.swarms[s];
        if !swarm.is_live() || swarm.fire.is_some() {
            return;
        }
        let members = swarm.search.members.clone();
        let now = self.world.time;
        {
            let w = &mut self.world;
            let (uavs, readings) = (&w.uavs, &w.readings);
            w.swarms[s].search.pool(members.iter().map(|&u| {
                (
                    u,
                    uavs[u].position,
                    uavs[u].velocity,
                    readings[u].as_ref().expect("sensed this tick"),
                )
            }));
        }

        let attraction = {
            let w = &self.world;
            search::local_attraction(
                &w.swarms[s].search,
                self.cfg.swarms.radius,
                members
                    .iter()
                    .map(|&u| (u, w.uavs[u].position, w.readings[u].as_ref().unwrap())),
                |fire| self.lockable(fire),
            )
        };
        if let Some(lock) = attraction.lock {
            match self.world.fires[lock.fire].state() {
                FireState::Burning => self.detect(s, lock.fire, lock.detector),
                _ => self.merge(s, lock.fire),
            }
            return;
        }

        let cooling = self.world.swarms[s].repel.is_some_and(|r| now < r.until);
        if !cooling {
            self.world.swarms[s].repel = None;
            if let Some(fire) = self.repulsion_source(&members) {
                let heading = self.max_info_heading(s).unwrap_or(0.0);
                self.world.swarms[s].repel = Some(RepelState {
                    heading: mitigation::repulsion_heading(heading),
                    until: now + self.cfg.mitigation.repel_cooldown,
                });
                self.world.events.push(Event::Repulsion {
                    t: now,
                    fire,
                    swarm: s,
                });
            }
        }

        let repel = self.world.swarms[s].repel;
        let mode = if repel.is_some() {
            SwarmMode::Explore
        } else {
            search::select_mode(
                self.world.swarms[s].search.max_temperature,
                self.cfg.sensing.xi,
            )
        };
        self.world.swarms[s].search.mode = mode;

        for &(u, center) in &attraction.recalls {
            let uav = &mut self.world.uavs[u];
            uav.mode = UavMode::Attracted;
            uav.waypoint = self.derived.area.clamp(center);
            uav.waypoint_velocity = Point::zero();
        }

        let sp = &self.cfg.search;
        let half_width = search::search_cone_halfwidth(
            self.world.swarms[s].search.max_temperature,
            sp.k_phi,
            sp.k_e,
        );
        let anchor_id = self.world.swarms[s]
            .search
            .max_info_member
            .unwrap_or(members[0]);
        for &u in &members {
            let uav = &self.world.uavs[u];
            let attracted = attraction.recalls.iter().any(|&(r, _)| r == u);
            if attracted
                || !vehicle::waypoint_reached(
                    uav.position,
                    uav.waypoint,
                    self.cfg.kinematics.cruise_speed,
                    self.cfg.engine.dt,
                )
            {
                continue;
            }
            let cone_center = match repel {
                Some(r) => r.heading,
                None => match self.max_info_heading(s) {
                    Some(h) => h,
                    None => {
                        let h = self.world.rngs[u]
                            .random_range(-std::f64::consts::PI..std::f64::consts::PI);
                        self.world.last_heading[anchor_id] = Some(h);
                        h
                    }
                },
            };
            let rng = &mut self.world.rngs[u];
            let heading = search::sample_heading(cone_center, half_width, rng);
            let length = search::sample_step_length(mode, rng, &self.derived.steps);
            let scale = self.derived.steps.step_scale(mode);
            let anchor = self.world.uavs[anchor_id].position;
            let horizon = scale * length / self.cfg.kinematics.cruise_speed;
            let predicted = self.world.swarms[s].search.predicted_center(horizon);
            let wp = search::next_waypoint(
                anchor,
                heading,
                scale,
                length,
                &self.derived.area,
                predicted,
                self.cfg.swarms.radius,
            );
            let uav = &mut self.world.uavs[u];
            uav.waypoint = wp;
            uav.waypoint_velocity = Point::zero();
            uav.mode = match (repel, mode) {
                (Some(_), _) => UavMode::Repelled,
                (None, SwarmMode::Exploit) => UavMode::Exploit,
                _ => UavMode::Explore,
            };
        }
    }

    // Velocity direction of the swarm's max-information member, falling
    // back to its last known heading.
    fn max_info_heading(&self, s: usize) -> Option<f64> {
        let k = self.world.swarms[s].search.max_info_member?;
        self.world.uavs[k].heading().or(self.world.last_heading[k])
    }

    // First fire (scanning members by id) that should repel a searching swarm.
    fn repulsion_source(&self, members: &[usize]) -> Option<usize> {
        let se = &self.cfg.sensing;
        members.iter().find_map(|&u| {
            let r = self.world.readings[u].as_ref()?;
            let fire = r.candidate?;
            let busy = self.world.fires[fire].state() == FireState::UnderMitigation;
            let same = self.world.records[fire]
                .as_ref()
                .is_some_and(|rec| rec.swarms.contains(&self.world.uavs[u].swarm));
            let merge = busy && self.merge_allowed(fire);
            let repel = mitigation::repulsion_decision(
                r.probability,
                se.gamma0,
                se.gamma,
                busy,
                same,
                merge,
            ) || (busy && !same && !merge && r.probability >= se.gamma);
            repel.then_some(fire)
        })
    }

    fn baseline_search(&mut self, s: usize) {
        let swarm = &self.world.swarms[s];
        if !swarm.is_live() || swarm.fire.is_some() {
            return;
        }
        let u = swarm.search.members[0];
        let reading = self.world.readings[u].clone().expect("sensed this tick");
        if let Some(desc) = reading.detected {
            if self.lockable(desc.fire) {
                match self.world.fires[desc.fire].state() {
                    FireState::Burning => self.detect(s, desc.fire, u),
                    _ => self.merge(s, desc.fire),
                }
                return;
            }
        }
        let uav = &self.world.uavs[u];
        if !vehicle::waypoint_reached(
            uav.position,
            uav.waypoint,
            self.cfg.kinematics.cruise_speed,
            self.cfg.engine.dt,
        ) {
            return;
        }
        let heading = uav.heading().or(self.world.last_heading[u]);
        let position = uav.position;
        let wp = search::baseline_waypoint(
            self.cfg.engine.strategy,
            position,
            heading,
            &reading,
            self.cfg.sensing.xi,
            &mut self.world.rngs[u],
            &self.derived.area,
            &self.derived.steps,
        );
        let uav = &mut self.world.uavs[u];
        uav.waypoint = wp;
        uav.waypoint_velocity = Point::zero();
        uav.mode = UavMode::Explore;
    }

    // First detection of a burning fire: the whole swarm locks onto it and
    // every member flies to the midpoint of its own equal-area sector.
    fn detect(&mut self, s: usize, fire: usize, detector: usize) {
        let now = self.world.time;
        let w = &mut self.world;
        let f = &mut w.fires[fire];
        f.begin_mitigation();
        w.outcomes[fire].detected_at = Some(now);
        w.outcomes[fire].area_at_detection = Some(f.area());
        w.events.push(Event::Detection {
            t: now,
            fire,
            swarm: s,
            uav: detector,
        });

        let members: Vec<(usize, Point)> = w.swarms[s]
            .search
            .members
            .iter()
            .map(|&u| (u, w.uavs[u].position))
            .collect();
        let rec = mitigation::assign_sectors(&w.fires[fire], &members, s)
            .expect("swarm has members and fire is active");
        let swarm = &mut w.swarms[s];
        swarm.fire = Some(fire);
        swarm.repel = None;
        swarm.search.mode = SwarmMode::Locked;
        for slot in &rec.slots {
            let uav = &mut w.uavs[slot.uav];
            uav.mode = UavMode::Align;
            uav.waypoint = self
                .derived
                .area
                .clamp(w.fires[fire].point_on_front(slot.state.theta_ref));
            uav.waypoint_velocity = Point::zero();
        }
        w.records[fire] = Some(rec);
    }

    // A searching swarm joins the swarms already mitigating `fire`. Its
    // members hold the front point facing them until all have arrived.
    fn merge(&mut self, s: usize, fire: usize) {
        let now = self.world.time;
        let w = &mut self.world;
        let rec = w.records[fire]
            .as_mut()
            .expect("fire under mitigation has a record");
        let host = rec.swarms[0];
        rec.swarms.push(s);
        for &u in &w.swarms[s].search.members {
            let theta = mitigation::position_parameter(&w.fires[fire], w.uavs[u].position);
            rec.arrivals.push(Arrival {
                uav: u,
                theta,
                joined_at: None,
            });
            let uav = &mut w.uavs[u];
            uav.mode = UavMode::Align;
            uav.waypoint = self.derived.area.clamp(w.fires[fire].point_on_front(theta));
            uav.waypoint_velocity = Point::zero();
        }
        let swarm = &mut w.swarms[s];
        swarm.merged_into = Some(host);
        swarm.fire = Some(fire);
        swarm.repel = None;
        swarm.search.mode = SwarmMode::Locked;
        w.events.push(Event::Merge {
            t: now,
            fire,
            swarm: s,
            host,
        });
    }

    fn coordinate_fire(&mut self, j: usize) {
        let Some(mut rec) = self.world.records[j].take() else {
            return;
        };
        let now = self.world.time;
        let dt = self.cfg.engine.dt;
        let m = &self.cfg.mitigation;
        let w = &mut self.world;
        let reach = self.derived.reach;

        for slot in rec.slots.iter_mut().filter(|s| s.joined_at.is_none()) {
            if w.uavs[slot.uav]
                .position
                .distance(w.uavs[slot.uav].waypoint)
                < reach
            {
                slot.joined_at = Some(now);
                w.fires[j].record_join(slot.uav, now);
                w.events.push(Event::Join {
                    t: now,
                    fire: j,
                    uav: slot.uav,
                });
            }
        }
        for a in rec.arrivals.iter_mut().filter(|a| a.joined_at.is_none()) {
            if w.uavs[a.uav].position.distance(w.uavs[a.uav].waypoint) < reach {
                a.joined_at = Some(now);
                w.fires[j].record_join(a.uav, now);
                w.events.push(Event::Join {
                    t: now,
                    fire: j,
                    uav: a.uav,
                });
            }
        }
        let fire = &w.fires[j];
        if !rec.arrivals.is_empty() && rec.arrivals.iter().all(|a| a.joined_at.is_some()) {
            rec.repartition(fire).expect("active fire with members");
        }
        rec.refresh_bounds(fire).expect("active fire with members");

        let axis_rate = (fire.b - w.prev_minor_axis[j]) / dt;
        let n = rec.slots.len();
        for slot in rec.slots.iter_mut() {
            let (lo, hi) = mitigation::parameter_bounds(n, slot.sector);
            let uav = &mut w.uavs[slot.uav];
            if slot.joined_at.is_some() {
                let omega = mitigation::nominal_angular_velocity(
                    fire,
                    m.mitigation_speed,
                    slot.state.theta,
                );
                slot.state = mitigation::angular_control(
                    slot.state,
                    lo,
                    hi,
                    omega,
                    m.k_m,
                    m.delta_theta,
                    dt,
                    m.control_law,
                );
                let rate = slot.state.theta_rate(omega, m.k_m, m.control_law);
                uav.mode = UavMode::Mitigate;
                uav.waypoint = fire.point_on_front(slot.state.theta);
                uav.waypoint_velocity = fire.front_velocity(slot.state.theta, rate, axis_rate);
            } else {
                uav.mode = UavMode::Align;
                uav.waypoint = fire.point_on_front(slot.state.theta_ref);
                uav.waypoint_velocity = Point::zero();
            }
            uav.waypoint = self.derived.area.clamp(uav.waypoint);
            uav.assignment = Some(SectorAssignment {
                fire: j,
                sector: slot.sector,
                lo,
                hi,
                theta: slot.state.theta,
                theta_ref: slot.state.theta_ref,
                sweep: slot.state.sweep,
            });
        }
        for a in &rec.arrivals {
            let uav = &mut w.uavs[a.uav];
            uav.mode = if a.joined_at.is_some() {
                UavMode::Mitigate
            } else {
                UavMode::Align
            };
            uav.waypoint = self.derived.area.clamp(fire.point_on_front(a.theta));
            uav.waypoint_velocity = Point::zero();
        }
        w.records[j] = Some(rec);
    }

    fn fly(&mut self) {
        let k = &self.cfg.kinematics;
        let dt = self.cfg.engine.dt;
        for uav in &mut self.world.uavs {
            let v_r = vehicle::reference_velocity(
                uav.position,
                uav.waypoint,
                uav.waypoint_velocity,
                k.cruise_speed,
                k.tau,
            );
            uav.step(v_r, k.pole, dt);
            uav.position = self.derived.area.clamp(uav.position);
        }
    }

    fn quench(&mut self) {
        let dt = self.cfg.engine.dt;
        let now = self.world.time + dt;
        for j in 0..self.world.fires.len() {
            self.world.prev_minor_axis[j] = self.world.fires[j].b;
            let Some(rec) = self.world.records[j].as_ref() else {
                continue;
            };
            let n = rec.active_uavs();
            let fire = &mut self.world.fires[j];
            fire.apply_quench(n, self.derived.quench_rate, dt);
            if !fire.is_active() {
                self.world.outcomes[j].extinguished_at = Some(now);
                self.world
                    .events
                    .push(Event::Extinction { t: now, fire: j });
                let rec = self.world.records[j].take().expect("checked above");
                self.split(&rec);
            }
        }
    }

    // Merged swarms regain their identities and resume searching.
    fn split(&mut self, rec: &FireMitigationRecord<f64>) {
        let w = &mut self.world;
        for &s in &rec.swarms {
            let swarm = &mut w.swarms[s];
            swarm.merged_into = None;
            swarm.fire = None;
            swarm.repel = None;
            swarm.search.mode = SwarmMode::Explore;
            for &u in &swarm.search.members {
                let uav = &mut w.uavs[u];
                uav.mode = UavMode::Explore;
                uav.assignment = None;
                uav.waypoint = uav.position;
                uav.waypoint_velocity = Point::zero();
            }
        }
    }

    /// Runs until every fire is out or `t_max`, calling `observe` on the
    /// initial state and on every logged step.
    pub fn run_with<F: FnMut(&WorldState)>(mut self, mut observe: F) -> RunResult {
        let stride = self.cfg.engine.trace_stride as u64;
        let t_max = self.cfg.engine.t_max;
        let mut series = vec![self.world.step_record()];
        observe(&self.world);
        while !self.world.all_extinguished() && self.world.time < t_max - 1e-9 {
            self.tick();
            if self.world.tick.is_multiple_of(stride) {
                series.push(self.world.step_record());
                observe(&self.world);
            }
        }
        if !self.world.tick.is_multiple_of(stride) {
            series.push(self.world.step_record());
            observe(&self.world);
        }
        self.finish(series)
    }

    pub fn run(self) -> RunResult {
        self.run_with(|_| {})
    }

    fn finish(self, series: Vec<StepRecord>) -> RunResult {
        let w = self.world;
        let end = w.time;
        let complete = w.all_extinguished();
        let mut fires = w.outcomes;
        for (o, f) in fires.iter_mut().zip(&w.fires) {
            o.final_area = f.active_area();
        }
        let all_detected = fires.iter().all(|f| f.detected_at.is_some());
        let detection_time = if all_detected {
            fires
                .iter()
                .filter_map(|f| f.detected_at)
                .fold(0.0, f64::max)
        } else {
            end
        };
        let mission_time = if complete {
            fires
                .iter()
                .filter_map(|f| f.extinguished_at)
                .fold(0.0, f64::max)
        } else {
            end
        };
        let fer = if w.initial_area > 0.0 {
            ((w.peak_area - w.initial_area) / w.initial_area).max(0.0)
        } else {
            0.0
        };
        let n_swarms = w.swarms.len();
        let mut result = RunResult {
            run_index: self.run_index,
            base_seed: self.cfg.engine.base_seed,
            strategy: self.cfg.engine.strategy,
            n_swarms,
            detection_time,
            mission_time,
            fer,
            objective: 0.0,
            complete,
            end_time: end,
            fires,
            quench_time_violations: Vec::new(),
            series,
            events: w.events,
        };
        let o = &self.cfg.objective;
        result.objective = weighted_objective(&result, o.w1, o.w2, o.w3);
        result.quench_time_violations = quench_time_violations(&result, o.q_tmax);
        result
    }
}

/// Runs one seeded simulation.
pub fn run(cfg: &ScenarioConfig, run_index: u64) -> RunResult {
    Simulation::new(cfg, run_index).run()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::FireSpec;

    fn static_cfg() -> ScenarioConfig {
        let mut cfg = ScenarioConfig::default();
        cfg.fuel.alpha = 0.0;
        cfg
    }

    #[test]
    fn zero_fires() {
        let mut cfg = ScenarioConfig::default();
        cfg.fires.clear();
        let r = run(&cfg, 0);
        assert_eq!(r.mission_time, 0.0);
        assert_eq!(r.detection_time, 0.0);
        assert_eq!(r.fer, 0.0);
        assert!(r.complete);
    }

    #[test]
    fn extinguished_world_only_advances_time() {
        let mut cfg = ScenarioConfig::default();
        cfg.fires.clear();
        let mut sim = Simulation::new(&cfg, 0);
        let before: Vec<_> = sim.world.uavs.clone();
        sim.tick();
        assert_eq!(sim.world.time, cfg.engine.dt);
        assert_eq!(sim.world.uavs, before);
    }

    #[test]
    fn detection_is_logged_at_current_time() {
        let mut cfg = static_cfg();
        cfg.fires = vec![FireSpec::new(5000.0, 5000.0, 100.0, 100.0)];
        cfg.swarms.sizes = vec![1];
        // Parked 30 m outside the front: P = exp(-0.045) ≥ γ.
        let mut sim = Simulation::with_positions(&cfg, 0, vec![vec![Point::new(5130.0, 5000.0)]]);
        sim.tick();
        let det: Vec<_> = sim
            .world
            .events
            .iter()
            .filter(|e| matches!(e, Event::Detection { .. }))
            .collect();
        assert_eq!(det.len(), 1);
        assert_eq!(det[0].time(), 0.0);
        assert_eq!(sim.world.fires[0].state(), FireState::UnderMitigation);
    }

    #[test]
    fn objective_terms() {
        let mut cfg = static_cfg();
        cfg.fires = vec![FireSpec::new(5000.0, 5000.0, 100.0, 100.0)];
        cfg.swarms.sizes = vec![1];
        let mut sim = Simulation::with_positions(&cfg, 0, vec![vec![Point::new(5100.0, 5000.0)]]);
        assert!(sim.lock_swarm(0, 0, 0));
        let r = sim.run();
        assert!(r.complete);
        let q = r.fires[0].quench_time(r.end_time).unwrap();
        assert_eq!(weighted_objective(&r, 0.0, 0.0, 0.0), 0.0);
        assert!((weighted_objective(&r, 0.0, 0.0, 1.0) - q).abs() < 1e-9);
        assert_eq!(weighted_objective(&r, 0.0, 1.0, 0.0), 0.0);
    }

    #[test]
    fn static_fires_have_zero_fer() {
        let mut cfg = static_cfg();
        cfg.engine.t_max = 600.0;
        let r = run(&cfg, 3);
        assert_eq!(r.fer, 0.0);
    }
}
