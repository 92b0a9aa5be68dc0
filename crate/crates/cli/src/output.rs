//! File formats written by the command-line tool.

use std::fmt::Write as _;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use swarmfire::montecarlo::Aggregate;
use swarmfire::{FireState, RunResult, ScenarioConfig, Strategy, WorldState};

pub const SCHEMA_VERSION: u32 = 1;

pub const SUMMARY_HEADER: &str =
    "run_index,strategy,n_swarms,detection_time_s,mission_time_s,fer,objective,complete_flag";

pub const COMPARE_HEADER: &str =
    "row,strategy,runs,completed,mean_detection_time_s,mean_mission_time_s,mean_fer,mean_objective";

/// Formats `x` with 6 significant digits, without trailing zeros.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..=14).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        // Rounding can carry into a new leading digit (999999.5 -> 1000000).
        let s = if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        };
        if s == "-0" {
            "0".into()
        } else {
            s
        }
    } else {
        format!("{x:.5e}")
    }
}

pub fn summary_row(r: &RunResult) -> String {
    format!(
        "{},{},{},{},{},{},{},{}",
        r.run_index,
        r.strategy,
        r.n_swarms,
        sig6(r.detection_time),
        sig6(r.mission_time),
        sig6(r.fer),
        sig6(r.objective),
        u8::from(r.complete)
    )
}

pub fn summary_csv(results: &[RunResult]) -> String {
    let mut out = String::from(SUMMARY_HEADER);
    out.push('\n');
    for r in results {
        out.push_str(&summary_row(r));
        out.push('\n');
    }
    out
}

fn mean_of(a: &Option<swarmfire::Summary>) -> f64 {
    a.map_or(f64::NAN, |s| s.mean)
}

/// Aggregate rows per strategy followed by one difference row per pair
/// (first strategy minus each later one).
pub fn compare_csv(groups: &[(Strategy, Aggregate)]) -> String {
    let mut out = String::from(COMPARE_HEADER);
    out.push('\n');
    for (s, a) in groups {
        let _ = writeln!(
            out,
            "aggregate,{s},{},{},{},{},{},{}",
            a.runs,
            a.completed,
            sig6(mean_of(&a.detection_time)),
            sig6(mean_of(&a.mission_time)),
            sig6(mean_of(&a.fer)),
            sig6(mean_of(&a.objective))
        );
    }
    for i in 0..groups.len() {
        for j in i + 1..groups.len() {
            let ((si, ai), (sj, aj)) = (&groups[i], &groups[j]);
            let d = |f: fn(&Aggregate) -> &Option<swarmfire::Summary>| {
                sig6(mean_of(f(ai)) - mean_of(f(aj)))
            };
            let _ = writeln!(
                out,
                "difference,{si}-{sj},{},{},{},{},{},{}",
                ai.runs.min(aj.runs),
                ai.completed as i64 - aj.completed as i64,
                d(|a| &a.detection_time),
                d(|a| &a.mission_time),
                d(|a| &a.fer),
                d(|a| &a.objective)
            );
        }
    }
    out
}

#[derive(Debug, Serialize)]
pub struct Manifest<'a> {
    pub schema_version: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'a str,
    pub base_seed: u64,
    pub runs: u64,
    pub strategies: Vec<Strategy>,
    pub config: &'a ScenarioConfig,
}

impl<'a> Manifest<'a> {
    pub fn new(
        command: &'a str,
        cfg: &'a ScenarioConfig,
        runs: u64,
        strategies: Vec<Strategy>,
    ) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command,
            base_seed: cfg.engine.base_seed,
            runs,
            strategies,
            config: cfg,
        }
    }
}

#[derive(Debug, Serialize)]
struct TraceUav {
    id: usize,
    swarm: usize,
    x: f64,
    y: f64,
    mode: swarmfire::vehicle::UavMode,
}

#[derive(Debug, Serialize)]
struct TraceFire {
    id: usize,
    a: f64,
    b: f64,
    state: FireState,
}

#[derive(Debug, Serialize)]
struct TraceRecord {
    t: f64,
    f_d: usize,
    f_f: usize,
    f_r: usize,
    s_s: usize,
    s_q: usize,
    total_area: f64,
    uavs: Vec<TraceUav>,
    fires: Vec<TraceFire>,
}

pub fn trace_line(w: &WorldState) -> String {
    let s = w.step_record();
    let rec = TraceRecord {
        t: s.t,
        f_d: s.f_d,
        f_f: s.f_f,
        f_r: s.f_r,
        s_s: s.s_s,
        s_q: s.s_q,
        total_area: s.total_area,
        uavs: w
            .uavs
            .iter()
            .map(|u| TraceUav {
                id: u.id,
                swarm: u.swarm,
                x: u.position.x,
                y: u.position.y,
                mode: u.mode,
            })
            .collect(),
        fires: w
            .fires
            .iter()
            .map(|f| TraceFire {
                id: f.id,
                a: f.a,
                b: f.b,
                state: f.state(),
            })
            .collect(),
    };
    serde_json::to_string(&rec).expect("trace records serialize")
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_text(path, &text)
}

pub fn create_writer(path: &Path) -> Result<BufWriter<fs::File>> {
    let file =
        fs::File::create(path).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(BufWriter::new(file))
}

pub fn finish(mut w: BufWriter<fs::File>, path: &Path) -> Result<()> {
    w.flush()
        .with_context(|| format!("cannot write {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(sig6(2328.4567), "2328.46");
        assert_eq!(sig6(0.4031127), "0.403113");
        assert_eq!(sig6(14400.0), "14400");
        assert_eq!(sig6(946_612.345), "946612");
        assert_eq!(sig6(0.0), "0");
        assert_eq!(sig6(1.5e-7), "1.50000e-7");
        assert_eq!(sig6(-0.25), "-0.25");
    }
}
