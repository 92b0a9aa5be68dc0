//! Prints mean metrics of a seeded batch.
//!
//! ```text
//! cargo run --release --example batch -- pine-5swarms LEVY 50
//! ```

use swarmfire::{monte_carlo, scenario, Aggregate, Strategy};

fn main() {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "pine-table1".into());
    let strategy: Strategy = args
        .next()
        .map_or(Ok(Strategy::Mscidc), |s| s.parse())
        .unwrap_or_else(|e| {
            eprintln!("{e}");
            std::process::exit(2);
        });
    let runs: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(30);

    let Ok(mut cfg) = scenario::load_config(&name) else {
        eprintln!("cannot load {name}");
        std::process::exit(2);
    };
    cfg.engine.strategy = strategy;
    let a = Aggregate::of(&monte_carlo(&cfg, runs, 0));
    let mean = |s: Option<swarmfire::Summary>| s.map_or(f64::NAN, |s| s.mean);
    println!(
        "{name} {strategy}: {}/{} complete, detection {:.0} s, mission {:.0} s, FER {:.3}",
        a.completed,
        a.runs,
        mean(a.detection_time),
        mean(a.mission_time),
        mean(a.fer)
    );
}
