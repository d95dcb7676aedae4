//! Simulated calibration scans and the fits that turn them into device
//! parameters: HOM visibility, piezo phase setpoints and relative detector
//! efficiencies.

mod fringe;
mod hom;
mod lm;
mod scan;

pub use fringe::{
    find_phase_setpoints, fit_relative_efficiencies, simulate_efficiency_scan, simulate_fringe_scan,
    simulate_phase_scan, Fringe, FringeScanParams, PhaseSetpoints, CROSS_CHANNELS,
};
pub use hom::{fit_hom_dip, fit_hom_dip_with, simulate_hom_scan, GaussianDip, HomFit, HomScanParams, HOM_CHANNEL};
pub use lm::{levenberg_marquardt, CurveModel, FitResult, LmOptions};
pub use scan::{linspace, Abscissa, ScanRecord};
