//! How fast the binomial confidence in a nonclassical win rate grows.
//!
//! Runs 25 independent event streams with the double-click discard rule
//! and prints the ensemble median, quartiles and residual.

use superposition_xor::harness::{cmd_confidence, RunConfig};

fn main() -> superposition_xor::Result<()> {
    let cfg = RunConfig {
        out_dir: std::env::temp_dir().join("xorgame-confidence"),
        confidence_events: 200,
        ..RunConfig::default()
    };
    let report = cmd_confidence(&cfg)?;
    println!("{:>6} {:>8} {:>8} {:>8} {:>10}", "event", "median", "q1", "q3", "1-median");
    for p in report.curve.iter().filter(|p| p.event_index % 10 == 0 || p.event_index < 5) {
        println!("{:>6} {:>8.4} {:>8.4} {:>8.4} {:>10.3e}", p.event_index, p.median, p.q1, p.q3, p.residual);
    }
    match report.first_above_target {
        Some(n) => println!("\nmedian passes 0.99 at event {n}"),
        None => println!("\nmedian never passes 0.99"),
    }
    let fit = report.residual_fit;
    println!("ln(1 - median) ~ {:.4} n + {:.3}   (R^2 = {:.4})", fit.slope, fit.intercept, fit.r_squared);
    Ok(())
}
