//! Exact two-photon output statistics of the four-mode interferometer.
//!
//! Prints the unitary for one Referee setting, a permanent, and the full
//! outcome distribution for a partially distinguishable, partially
//! dephased photon pair.

use num_complex::Complex64;
use superposition_xor::optics::{
    build_unitary, outcome_distribution, permanent, submatrix, InterferometerConfig, OccupationVector, Pattern,
    PhaseSetting,
};

fn main() -> superposition_xor::Result<()> {
    let cfg = InterferometerConfig::default();
    let setting = PhaseSetting::from_bits(false, true);
    let u = build_unitary(&cfg, &setting);
    println!("U for x=0, y=1:");
    for i in 0..4 {
        let row: Vec<String> = (0..4).map(|j| format!("{:+.3}{:+.3}i", u[(i, j)].re, u[(i, j)].im)).collect();
        println!("  {}", row.join("  "));
    }

    let out = OccupationVector([1, 0, 0, 1]);
    let sub = submatrix(&u, &OccupationVector::INPUT, &out)?;
    let per: Complex64 = permanent(&sub)?;
    println!("\nPer(U_sub) for output {out}: {per:.6}");

    let dist = outcome_distribution(&cfg, &setting, 0.8, 0.94)?;
    println!("\nOutcome distribution (lambda = 0.8, V = 0.94):");
    for p in Pattern::ALL {
        println!("  {:<5} {:>4}  {:.6}", p.label(), p.occupation().to_string(), dist.get(p));
    }
    println!("  total           {:.12}", dist.total());
    println!("  same-lab total  {:.6}", dist.same_lab_total());
    Ok(())
}
