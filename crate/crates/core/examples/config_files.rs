//! The flat TOML config: defaults, a partial override file, derived
//! dephasing parameters and the lossless round trip.

use superposition_xor::harness::RunConfig;

fn main() -> superposition_xor::Result<()> {
    let text = "visibility = 0.97\npurity = 0.8\nseed = 12\n";
    let cfg = RunConfig::from_toml(text)?;
    let d = cfg.decoherence()?;
    println!("purity {} -> lambda {:.6}, sigma {:.6} rad", d.purity, d.lambda, d.sigma);

    let serialized = cfg.to_toml()?;
    println!("\n{serialized}");
    assert_eq!(RunConfig::from_toml(&serialized)?, cfg);
    println!("round trip ok");
    Ok(())
}
