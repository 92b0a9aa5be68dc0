mod output;

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use swarmfire::montecarlo::Aggregate;
use swarmfire::{load_config, monte_carlo, ScenarioConfig, Simulation, Strategy};

/// Multi-swarm UAV forest firefighting simulator.
#[derive(Debug, Parser)]
#[command(name = "swarmfire", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one simulation.
    Run {
        #[command(flatten)]
        common: Common,
        /// Run index within the seeded sequence.
        #[arg(long, default_value_t = 0)]
        run_index: u64,
        /// Write a JSON Lines trace of the logged steps to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Run a seeded Monte-Carlo batch.
    Mc {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 100, value_parser = positive_runs)]
        runs: u64,
        /// Worker threads (0 = one per core).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Compare strategies on paired seeds.
    Compare {
        #[command(flatten)]
        common: Common,
        /// Comma-separated strategy names.
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "MSCIDC,UNIFORM,NORMAL,LEVY,OMS"
        )]
        strategies: Vec<Strategy>,
        #[arg(long, default_value_t = 30, value_parser = positive_runs)]
        runs: u64,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
}

#[derive(Debug, Args)]
struct Common {
    /// Config file, or one of the built-in presets (pine-table1, pine-3swarms,
    /// pine-5swarms, pine-6swarms, pine-7swarms).
    config: String,
    /// Base seed (overrides the config value).
    #[arg(long, env = "SWARMFIRE_SEED")]
    seed: Option<u64>,
    /// Search strategy (overrides the config value).
    #[arg(long)]
    strategy: Option<Strategy>,
    /// Output directory.
    #[arg(long, default_value = "swarmfire-out")]
    out: PathBuf,
}

fn positive_runs(s: &str) -> Result<u64, String> {
    match s.parse::<u64>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

/// Errors that exit with the usage status.
#[derive(Debug)]
struct UsageError(String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

impl Common {
    fn load(&self) -> Result<ScenarioConfig> {
        let mut cfg = load_config(&self.config).map_err(|e| UsageError(e.to_string()))?;
        if let Some(seed) = self.seed {
            cfg.engine.base_seed = seed;
        }
        if let Some(s) = self.strategy {
            cfg.engine.strategy = s;
        }
        Ok(cfg)
    }

    fn out_dir(&self) -> Result<&Path> {
        std::fs::create_dir_all(&self.out)
            .with_context(|| format!("cannot create {}", self.out.display()))?;
        Ok(&self.out)
    }
}

fn print_result(r: &swarmfire::RunResult) {
    println!(
        "run {} [{}] swarms={} detection={:.1}s mission={:.1}s fer={:.4} objective={:.4e}{}",
        r.run_index,
        r.strategy,
        r.n_swarms,
        r.detection_time,
        r.mission_time,
        r.fer,
        r.objective,
        if r.complete { "" } else { " INCOMPLETE" }
    );
}

fn print_aggregate(label: &str, a: &Aggregate) {
    let m = |s: &Option<swarmfire::Summary>| s.map_or(f64::NAN, |s| s.mean);
    println!(
        "{label}: runs={} completed={} mean detection={:.1}s mission={:.1}s fer={:.4}",
        a.runs,
        a.completed,
        m(&a.detection_time),
        m(&a.mission_time),
        m(&a.fer)
    );
}

fn cmd_run(common: &Common, run_index: u64, trace: Option<&Path>) -> Result<()> {
    let cfg = common.load()?;
    let out = common.out_dir()?;
    let sim = Simulation::new(&cfg, run_index);
    let result = match trace {
        Some(path) => {
            let mut w = output::create_writer(path)?;
            let mut err = None;
            let r = sim.run_with(|world| {
                if err.is_none() {
                    err = writeln!(w, "{}", output::trace_line(world)).err();
                }
            });
            if let Some(e) = err {
                return Err(e).with_context(|| format!("cannot write {}", path.display()));
            }
            output::finish(w, path)?;
            r
        }
        None => sim.run(),
    };
    output::write_text(
        &out.join("summary.csv"),
        &output::summary_csv(std::slice::from_ref(&result)),
    )?;
    output::write_json(
        &out.join("manifest.json"),
        &output::Manifest::new("run", &cfg, 1, vec![cfg.engine.strategy]),
    )?;
    print_result(&result);
    Ok(())
}

fn cmd_mc(common: &Common, runs: u64, jobs: usize) -> Result<()> {
    let cfg = common.load()?;
    let out = common.out_dir()?;
    let results = monte_carlo(&cfg, runs, jobs);
    let aggregate = Aggregate::of(&results);
    output::write_text(&out.join("summary.csv"), &output::summary_csv(&results))?;
    output::write_json(&out.join("aggregate.json"), &aggregate)?;
    output::write_json(
        &out.join("manifest.json"),
        &output::Manifest::new("mc", &cfg, runs, vec![cfg.engine.strategy]),
    )?;
    print_aggregate(cfg.engine.strategy.name(), &aggregate);
    Ok(())
}

fn cmd_compare(common: &Common, strategies: &[Strategy], runs: u64, jobs: usize) -> Result<()> {
    if strategies.is_empty() {
        return Err(UsageError("at least one strategy is required".into()).into());
    }
    let base = common.load()?;
    let out = common.out_dir()?;
    let mut all = Vec::new();
    let mut groups = Vec::new();
    for &s in strategies {
        let mut cfg = base.clone();
        cfg.engine.strategy = s;
        let results = monte_carlo(&cfg, runs, jobs);
        let aggregate = Aggregate::of(&results);
        print_aggregate(s.name(), &aggregate);
        groups.push((s, aggregate));
        all.extend(results);
    }
    output::write_text(&out.join("summary.csv"), &output::summary_csv(&all))?;
    output::write_text(&out.join("compare.csv"), &output::compare_csv(&groups))?;
    let by_name: serde_json::Map<String, serde_json::Value> = groups
        .iter()
        .map(|(s, a)| {
            (
                s.name().to_string(),
                serde_json::to_value(a).expect("aggregates serialize"),
            )
        })
        .collect();
    output::write_json(&out.join("aggregate.json"), &by_name)?;
    output::write_json(
        &out.join("manifest.json"),
        &output::Manifest::new("compare", &base, runs, strategies.to_vec()),
    )?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Run {
            common,
            run_index,
            trace,
        } => cmd_run(common, *run_index, trace.as_deref()),
        Command::Mc { common, runs, jobs } => cmd_mc(common, *runs, *jobs),
        Command::Compare {
            common,
            strategies,
            runs,
            jobs,
        } => cmd_compare(common, strategies, *runs, *jobs),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<UsageError>() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
