//! Run a small experiment and print its checks and JSON report.

use immlab::experiments::{run, ExperimentConfig};

fn main() -> immlab::Result<()> {
    let cfg = ExperimentConfig { d: 32, trials: 2000, seed: 11, ..ExperimentConfig::named("color_paths") };
    let report = run(&cfg)?;
    for s in &report.stats {
        println!("{:<22} {:.4} expected {} (±{:.4}) {}", s.name, s.estimate, s.expected, s.radius, if s.passed { "PASS" } else { "FAIL" });
    }
    for c in &report.checks {
        println!("{:<22} {} of {} failed {}", c.name, c.failures, c.checked, if c.passed { "PASS" } else { "FAIL" });
    }
    println!("aggregates: {}", serde_json::to_string(&report.aggregates).expect("serializable"));
    Ok(())
}
