//! Scenario configuration: JSON schema, defaults, presets and validation.
//!
//! A configuration is one JSON document. Every section and field is
//! optional; missing values take the defaults below, and unknown keys are
//! rejected. The default scenario is the five-fire pine forest layout
//! (`pine-table1`).

use std::f64::consts::{FRAC_PI_3, PI};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::firemodel;
use crate::geometry::{Point2, Rect};
use crate::mitigation;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config not found: {0}")]
    NotFound(PathBuf),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("config parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid config field `{field}`: {message}")]
    Invalid {
        field: &'static str,
        message: String,
    },
}

fn invalid(field: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        field,
        message: message.into(),
    }
}

/// Search strategy driving waypoint generation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Strategy {
    #[serde(rename = "MSCIDC")]
    Mscidc,
    #[serde(rename = "UNIFORM")]
    Uniform,
    #[serde(rename = "NORMAL")]
    Normal,
    #[serde(rename = "LEVY")]
    Levy,
    #[serde(rename = "OMS")]
    Oms,
}

impl Strategy {
    pub const ALL: [Strategy; 5] = [
        Strategy::Mscidc,
        Strategy::Uniform,
        Strategy::Normal,
        Strategy::Levy,
        Strategy::Oms,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Mscidc => "MSCIDC",
            Strategy::Uniform => "UNIFORM",
            Strategy::Normal => "NORMAL",
            Strategy::Levy => "LEVY",
            Strategy::Oms => "OMS",
        }
    }

    /// Baselines treat every UAV as an independent searcher.
    pub fn is_baseline(self) -> bool {
        self != Strategy::Mscidc
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown strategy `{0}` (valid: MSCIDC, UNIFORM, NORMAL, LEVY, OMS)")]
pub struct UnknownStrategy(pub String);

impl FromStr for Strategy {
    type Err = UnknownStrategy;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| UnknownStrategy(s.to_string()))
    }
}

/// Which form of the angular sweep law to integrate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ControlLaw {
    /// `θ̇ = μω + K_m(θ - θ_r)`: tracks θ_r in both sweep directions.
    #[default]
    Corrected,
    /// `θ̇ = ω + K_m(θ - θ_r)`: leaves a steady offset while sweeping backward.
    Printed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SearchArea {
    pub width: f64,
    pub height: f64,
}

impl Default for SearchArea {
    fn default() -> Self {
        Self {
            width: 10_000.0,
            height: 10_000.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FireSpec {
    pub center: [f64; 2],
    pub a: f64,
    pub b: f64,
}

impl FireSpec {
    pub fn new(x: f64, y: f64, a: f64, b: f64) -> Self {
        Self {
            center: [x, y],
            a,
            b,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SwarmLayout {
    /// Members per swarm.
    pub sizes: Vec<usize>,
    /// Swarm radius r_s, m.
    pub radius: f64,
    /// Optional cross-check: must equal the sum of `sizes` when present.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub total_uavs: Option<usize>,
}

impl Default for SwarmLayout {
    fn default() -> Self {
        Self {
            sizes: vec![3, 2, 2, 2, 2, 2, 2],
            radius: 250.0,
            total_uavs: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FuelParams {
    pub alpha: f64,
    pub beta: f64,
    pub flame_length: f64,
    pub heat_of_combustion: f64,
    pub fuel_load: f64,
}

impl Default for FuelParams {
    fn default() -> Self {
        Self {
            alpha: 259.833,
            beta: 2.174,
            flame_length: 4.0,
            heat_of_combustion: 18_600.0,
            fuel_load: 4.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuenchParams {
    /// Critical-flow coefficient c.
    pub c: f64,
    /// Critical-flow exponent ν.
    pub nu: f64,
    /// Water flow per UAV W_r, kg/s.
    pub water_rate: f64,
}

impl Default for QuenchParams {
    fn default() -> Self {
        Self {
            c: 0.1,
            nu: 1.0,
            water_rate: DEFAULT_WATER_RATE,
        }
    }
}

/// Default per-UAV water flow, kg/s.
pub const DEFAULT_WATER_RATE: f64 = 60.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct KinematicParams {
    /// Cruise speed V0, m/s.
    pub cruise_speed: f64,
    /// First-order pole λ, 1/s.
    pub pole: f64,
    /// Feedback softening length τ, m.
    pub tau: f64,
}

impl Default for KinematicParams {
    fn default() -> Self {
        Self {
            cruise_speed: 20.0,
            pole: 1.0,
            tau: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SensingParams {
    pub sensing_radius: f64,
    pub sigma: f64,
    pub gamma: f64,
    pub gamma0: f64,
    /// Temperature threshold ξ between exploration and exploitation, K.
    pub xi: f64,
    pub plume_width: f64,
    pub t_ambient: f64,
    pub t_fire: f64,
    /// Standard deviation of additive temperature noise, K (0 disables).
    pub noise_std: f64,
}

impl Default for SensingParams {
    fn default() -> Self {
        Self {
            sensing_radius: 300.0,
            sigma: 100.0,
            gamma: 0.9,
            gamma0: 0.5,
            xi: 330.0,
            plume_width: 250.0,
            t_ambient: 300.0,
            t_fire: 1200.0,
            noise_std: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SearchParams {
    /// Cone gain K_φ, rad. At π the search degenerates to an undirected Levy walk.
    pub k_phi: f64,
    /// Cone temperature gain K_e, 1/K.
    pub k_e: f64,
    pub levy_step: f64,
    pub brownian_step: f64,
    pub levy_tail_exponent: f64,
}

impl Default for SearchParams {
    fn default() -> Self {
        Self {
            k_phi: FRAC_PI_3,
            k_e: 0.05,
            levy_step: 500.0,
            brownian_step: 50.0,
            levy_tail_exponent: 1.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MitigationParams {
    /// Angular tracking gain K_m, 1/s (negative).
    pub k_m: f64,
    /// Sweep reversal margin δ_θ, rad.
    pub delta_theta: f64,
    /// Tangential speed along the front V_mit, m/s.
    pub mitigation_speed: f64,
    /// Merge area threshold δ_A, m².
    pub delta_area: f64,
    /// Merge remaining-fire threshold δ_f.
    pub delta_fires: usize,
    /// Cap on swarms per fire δ_s.
    pub delta_swarms: usize,
    /// Time a repelled swarm keeps its reversed heading, s.
    pub repel_cooldown: f64,
    pub control_law: ControlLaw,
}

impl Default for MitigationParams {
    fn default() -> Self {
        Self {
            k_m: -1.0,
            delta_theta: 0.05,
            mitigation_speed: 10.0,
            delta_area: 1e5,
            delta_fires: 2,
            delta_swarms: 2,
            repel_cooldown: 60.0,
            control_law: ControlLaw::Corrected,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ObjectiveParams {
    pub w1: f64,
    pub w2: f64,
    pub w3: f64,
    /// Per-fire quench-time limit, s.
    pub q_tmax: f64,
}

impl Default for ObjectiveParams {
    fn default() -> Self {
        Self {
            w1: 1.0,
            w2: 1.0,
            w3: 1.0,
            q_tmax: 3600.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EngineParams {
    pub dt: f64,
    pub t_max: f64,
    pub base_seed: u64,
    pub strategy: Strategy,
    /// Ticks between logged steps.
    pub trace_stride: usize,
}

impl Default for EngineParams {
    fn default() -> Self {
        Self {
            dt: 0.5,
            t_max: 4.0 * 3600.0,
            base_seed: 0,
            strategy: Strategy::Mscidc,
            trace_stride: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub search_area: SearchArea,
    pub fires: Vec<FireSpec>,
    pub swarms: SwarmLayout,
    pub fuel: FuelParams,
    pub quench: QuenchParams,
    pub kinematics: KinematicParams,
    pub sensing: SensingParams,
    pub search: SearchParams,
    pub mitigation: MitigationParams,
    pub objective: ObjectiveParams,
    pub engine: EngineParams,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            search_area: SearchArea::default(),
            fires: pine_fires(),
            swarms: SwarmLayout::default(),
            fuel: FuelParams::default(),
            quench: QuenchParams::default(),
            kinematics: KinematicParams::default(),
            sensing: SensingParams::default(),
            search: SearchParams::default(),
            mitigation: MitigationParams::default(),
            objective: ObjectiveParams::default(),
            engine: EngineParams::default(),
        }
    }
}

/// The five pine-forest fires: centers, semi-major and semi-minor axes (m).
pub fn pine_fires() -> Vec<FireSpec> {
    vec![
        FireSpec::new(2000.0, 6000.0, 300.0, 250.0),
        FireSpec::new(3000.0, 9000.0, 150.0, 100.0),
        FireSpec::new(4000.0, 3000.0, 200.0, 200.0),
        FireSpec::new(8000.0, 2000.0, 100.0, 100.0),
        FireSpec::new(9000.0, 8000.0, 50.0, 50.0),
    ]
}

/// Names accepted by [`preset`].
pub const PRESETS: [&str; 5] = [
    "pine-table1",
    "pine-3swarms",
    "pine-5swarms",
    "pine-6swarms",
    "pine-7swarms",
];

/// Built-in scenarios. All share the pine-forest fires and 15 UAVs and
/// differ only in how the UAVs are grouped into swarms.
pub fn preset(name: &str) -> Option<ScenarioConfig> {
    let sizes = match name {
        "pine-table1" | "pine-7swarms" => vec![3, 2, 2, 2, 2, 2, 2],
        "pine-3swarms" => vec![5, 5, 5],
        "pine-5swarms" => vec![3, 3, 3, 3, 3],
        "pine-6swarms" => vec![3, 3, 3, 2, 2, 2],
        _ => return None,
    };
    let mut cfg = ScenarioConfig::default();
    cfg.swarms.sizes = sizes;
    cfg.swarms.total_uavs = Some(15);
    Some(cfg)
}

/// Loads a preset by name, or a JSON config file from `path`.
pub fn load_config(path: impl AsRef<Path>) -> Result<ScenarioConfig, ConfigError> {
    let path = path.as_ref();
    if let Some(cfg) = path.to_str().and_then(preset) {
        return Ok(cfg);
    }
    if !path.exists() {
        return Err(ConfigError::NotFound(path.to_path_buf()));
    }
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    ScenarioConfig::from_json(&text)
}

/// Writes `cfg` as pretty JSON.
pub fn write_config(cfg: &ScenarioConfig, path: impl AsRef<Path>) -> Result<(), ConfigError> {
    let path = path.as_ref();
    fs::write(path, cfg.to_json()).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })
}

impl ScenarioConfig {
    /// Parses and validates a JSON document.
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let cfg: ScenarioConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises")
    }

    pub fn area(&self) -> Rect<f64> {
        Rect::from_size(self.search_area.width, self.search_area.height)
    }

    pub fn total_uavs(&self) -> usize {
        self.swarms.sizes.iter().sum()
    }

    /// Fire spread rate from the fuel model, m/s.
    pub fn spread_rate(&self) -> f64 {
        let f = &self.fuel;
        let intensity = firemodel::fireline_intensity(f.flame_length, f.alpha, f.beta);
        firemodel::spread_rate(intensity, f.heat_of_combustion, f.fuel_load)
    }

    /// Area each quenching UAV removes per second, m²/s.
    pub fn quench_rate(&self) -> f64 {
        mitigation::quench_area_rate(
            self.quench.water_rate,
            self.quench.c,
            self.quench.nu,
            self.fuel.flame_length,
        )
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        fn positive(field: &'static str, v: f64) -> Result<(), ConfigError> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(invalid(field, format!("must be finite and > 0 (got {v})")))
            }
        }
        fn finite(field: &'static str, v: f64) -> Result<(), ConfigError> {
            if v.is_finite() {
                Ok(())
            } else {
                Err(invalid(field, format!("must be finite (got {v})")))
            }
        }

        positive("search_area.width", self.search_area.width)?;
        positive("search_area.height", self.search_area.height)?;

        let omega = self.area();
        for (i, f) in self.fires.iter().enumerate() {
            positive("fires.b", f.b)?;
            if f.a < f.b {
                return Err(invalid(
                    "fires.a",
                    format!("fire {i}: a >= b violated ({} < {})", f.a, f.b),
                ));
            }
            let c = Point2::new(f.center[0], f.center[1]);
            if !c.is_finite() || !omega.contains(c) {
                return Err(invalid(
                    "fires.center",
                    format!("fire {i} center {:?} outside search area", f.center),
                ));
            }
        }

        let s = &self.swarms;
        if s.sizes.is_empty() {
            return Err(invalid("swarms.sizes", "at least one swarm is required"));
        }
        if s.sizes.contains(&0) {
            return Err(invalid(
                "swarms.sizes",
                "every swarm needs at least one member",
            ));
        }
        if let Some(total) = s.total_uavs {
            if total != self.total_uavs() {
                return Err(invalid(
                    "swarms.total_uavs",
                    format!(
                        "sum of swarm sizes {} != total_uavs {total}",
                        self.total_uavs()
                    ),
                ));
            }
        }
        positive("swarms.radius", s.radius)?;

        let f = &self.fuel;
        if !(f.alpha.is_finite() && f.alpha >= 0.0) {
            return Err(invalid(
                "fuel.alpha",
                format!("must be finite and >= 0 (got {})", f.alpha),
            ));
        }
        finite("fuel.beta", f.beta)?;
        positive("fuel.flame_length", f.flame_length)?;
        positive("fuel.heat_of_combustion", f.heat_of_combustion)?;
        positive("fuel.fuel_load", f.fuel_load)?;

        positive("quench.c", self.quench.c)?;
        finite("quench.nu", self.quench.nu)?;
        positive("quench.water_rate", self.quench.water_rate)?;

        let k = &self.kinematics;
        positive("kinematics.cruise_speed", k.cruise_speed)?;
        positive("kinematics.pole", k.pole)?;
        positive("kinematics.tau", k.tau)?;

        let se = &self.sensing;
        positive("sensing.sensing_radius", se.sensing_radius)?;
        positive("sensing.sigma", se.sigma)?;
        positive("sensing.plume_width", se.plume_width)?;
        positive("sensing.t_ambient", se.t_ambient)?;
        positive("sensing.t_fire", se.t_fire)?;
        finite("sensing.xi", se.xi)?;
        if !(se.noise_std.is_finite() && se.noise_std >= 0.0) {
            return Err(invalid("sensing.noise_std", "must be >= 0"));
        }
        if se.t_fire <= se.t_ambient {
            return Err(invalid("sensing.t_fire", "t_fire > t_ambient violated"));
        }
        if !(se.gamma > 0.0 && se.gamma <= 1.0) {
            return Err(invalid("sensing.gamma", "0 < γ <= 1 violated"));
        }
        if !(se.gamma0 > 0.0 && se.gamma0 < se.gamma) {
            return Err(invalid("sensing.gamma0", "0 < γ0 < γ violated"));
        }

        let sp = &self.search;
        if !(sp.k_phi > 0.0 && sp.k_phi <= PI) {
            return Err(invalid("search.k_phi", "0 < K_φ <= π violated"));
        }
        finite("search.k_e", sp.k_e)?;
        positive("search.levy_step", sp.levy_step)?;
        positive("search.brownian_step", sp.brownian_step)?;
        positive("search.levy_tail_exponent", sp.levy_tail_exponent)?;
        if sp.levy_step < 5.0 * sp.brownian_step {
            return Err(invalid(
                "search.brownian_step",
                "brownian_step must be at most levy_step / 5",
            ));
        }

        let m = &self.mitigation;
        if !(m.k_m.is_finite() && m.k_m < 0.0) {
            return Err(invalid("mitigation.k_m", "K_m < 0 violated"));
        }
        positive("mitigation.delta_theta", m.delta_theta)?;
        positive("mitigation.mitigation_speed", m.mitigation_speed)?;
        if m.mitigation_speed > k.cruise_speed {
            return Err(invalid(
                "mitigation.mitigation_speed",
                "must not exceed kinematics.cruise_speed",
            ));
        }
        positive("mitigation.delta_area", m.delta_area)?;
        if m.delta_swarms == 0 {
            return Err(invalid("mitigation.delta_swarms", "must be >= 1"));
        }
        if !(m.repel_cooldown.is_finite() && m.repel_cooldown >= 0.0) {
            return Err(invalid("mitigation.repel_cooldown", "must be >= 0"));
        }

        let o = &self.objective;
        for (field, w) in [
            ("objective.w1", o.w1),
            ("objective.w2", o.w2),
            ("objective.w3", o.w3),
        ] {
            finite(field, w)?;
        }
        positive("objective.q_tmax", o.q_tmax)?;

        let e = &self.engine;
        positive("engine.dt", e.dt)?;
        positive("engine.t_max", e.t_max)?;
        if e.trace_stride == 0 {
            return Err(invalid("engine.trace_stride", "must be >= 1"));
        }
        Ok(())
    }
}
