//! Win rate against test-photon purity, simulated and predicted.
//!
//! Writes `purity_sweep.csv` into a temporary directory.

use superposition_xor::harness::{cmd_purity_sweep, RunConfig};

fn main() -> superposition_xor::Result<()> {
    let cfg = RunConfig {
        out_dir: std::env::temp_dir().join("xorgame-purity-sweep"),
        sweep_points: 8,
        ..RunConfig::default()
    };
    let report = cmd_purity_sweep(&cfg)?;
    println!("{:>8} {:>10} {:>8} {:>8}", "purity", "simulated", "sem", "model");
    for p in &report.points {
        println!("{:>8.4} {:>10.4} {:>8.4} {:>8.4}", p.purity, p.simulated.mean, p.simulated.sem, p.model);
    }
    for f in &report.files {
        println!("wrote {}", f.display());
    }
    Ok(())
}
