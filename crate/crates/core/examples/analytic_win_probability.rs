//! Closed-form win probability against visibility, dephasing and purity.

use superposition_xor::game::{pwin_lambda, pwin_purity};
use superposition_xor::optics::InterferometerConfig;
use superposition_xor::state::{purity_floor, DecoherenceSpec};

fn main() -> superposition_xor::Result<()> {
    let cfg = InterferometerConfig::default();
    println!("Preparation splitters T:R = 0.35:0.65, balanced detection");
    println!("  pure state, V = 0.94 : {:.5}", pwin_lambda(1.0, 0.94, &cfg));
    println!("  pure state, V = 0.95 : {:.5}", pwin_lambda(1.0, 0.95, &cfg));
    println!("  balanced, ideal      : {:.5}", pwin_lambda(1.0, 1.0, &InterferometerConfig::balanced()));

    let floor = purity_floor(&cfg.test);
    println!("\npurity floor {floor:.4}");
    println!("{:>8} {:>8} {:>8} {:>10} {:>10}", "purity", "lambda", "sigma", "V=0.94", "V=1");
    for i in 0..=10 {
        let purity = floor + (1.0 - floor) * i as f64 / 10.0;
        let d = DecoherenceSpec::from_purity(purity, &cfg.test)?;
        println!(
            "{:>8.4} {:>8.4} {:>8.4} {:>10.5} {:>10.5}",
            purity,
            d.lambda,
            d.sigma,
            pwin_purity(purity, 0.94, &cfg)?,
            pwin_purity(purity, 1.0, &cfg)?
        );
    }
    Ok(())
}
