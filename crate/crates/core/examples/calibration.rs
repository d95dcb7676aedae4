//! Calibration workflow on simulated scans: HOM-dip visibility, piezo phase
//! setpoints and relative detector efficiencies.

use std::f64::consts::TAU;

use superposition_xor::calibration::{
    find_phase_setpoints, fit_hom_dip, fit_relative_efficiencies, linspace, simulate_efficiency_scan,
    simulate_hom_scan, simulate_phase_scan, FringeScanParams, HomScanParams,
};
use superposition_xor::rng::{substream, Domain};

fn main() -> superposition_xor::Result<()> {
    let mut rng = substream(7, Domain::Calibration, 0);

    let hom = HomScanParams::default();
    let delays = linspace(-150.0, 150.0, 61);
    let scan = simulate_hom_scan(&delays, &hom, Some(&mut rng))?;
    let fit = fit_hom_dip(&scan)?;
    println!("HOM dip: V = {:.4} +- {:.4} (injected {})", fit.visibility, fit.visibility_uncertainty, hom.visibility);
    println!("         x0 = {:.2} um, width = {:.2} um", fit.fit.params[2], fit.fit.params[3].abs());

    let fringe = FringeScanParams::default();
    let volts = linspace(0.0, 3.0 * TAU * fringe.volts_per_radian, 150);
    let scan = simulate_phase_scan(&volts, &fringe, Some(&mut rng))?;
    let sp = find_phase_setpoints(&scan)?;
    println!("\nPhase reference: 0 at {:.4} V, pi at {:.4} V, period {:.4} V", sp.zero, sp.pi, sp.period);

    let injected = [1.0, 0.9, 0.8, 0.95];
    let eff = FringeScanParams {
        efficiencies: injected,
        ..fringe
    };
    let scan = simulate_efficiency_scan(&volts, &eff, Some(&mut rng))?;
    let eta = fit_relative_efficiencies(&scan)?;
    println!("\nEfficiencies (A0B0, A0B1, A1B0, A1B1):");
    for (k, (got, want)) in eta.as_array().iter().zip(injected).enumerate() {
        println!("  {k}: {got:.4} (injected {want})");
    }
    Ok(())
}
