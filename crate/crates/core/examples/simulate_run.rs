//! One seeded experimental run: 240 instances, efficiency-normalized win
//! rates and the correlated / anticorrelated counts of the first few.

use superposition_xor::game::{pwin_lambda, run_experiment, ExperimentParams};
use superposition_xor::stats::{normalized_win_rate, EfficiencyMap};

fn main() -> superposition_xor::Result<()> {
    let params = ExperimentParams {
        seed: 2024,
        ..ExperimentParams::default()
    };
    let run = run_experiment(&params, 0)?;
    let eta = EfficiencyMap::uniform();

    println!("{:>4} {:>2} {:>2} {:>6} {:>6} {:>9}", "idx", "x", "y", "corr", "anti", "win rate");
    let mut rates = Vec::new();
    for inst in &run.instances {
        let w = normalized_win_rate(inst, &eta, &params.interferometer)?;
        rates.push(w);
        if inst.index < 8 {
            let c = inst.coincidences;
            println!(
                "{:>4} {:>2} {:>2} {:>6} {:>6} {:>9.4}",
                inst.index, inst.x as u8, inst.y as u8, c[0] + c[3], c[1] + c[2], w
            );
        }
    }
    let n = rates.len() as f64;
    let mean = rates.iter().sum::<f64>() / n;
    let std = (rates.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    println!("\nmean win rate {mean:.4}, per-instance std {std:.4}");
    println!("model         {:.4}", pwin_lambda(1.0, params.visibility, &params.interferometer));
    Ok(())
}
