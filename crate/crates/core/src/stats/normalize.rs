use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::InstanceRecord;
use crate::optics::InterferometerConfig;

/// Detection efficiency of each cross-lab pattern relative to the most
/// efficient one, `(a, b)` order `00, 01, 10, 11`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EfficiencyMap {
    eta: [f64; 4],
}

impl EfficiencyMap {
    /// Rescales `raw` so its largest entry is 1.
    pub fn from_relative(raw: [f64; 4]) -> Result<Self> {
        let max = raw.iter().cloned().fold(f64::NAN, f64::max);
        if !(max > 0.0) || raw.iter().any(|&e| !(e > 0.0 && e.is_finite())) {
            return Err(Error::Config(format!("efficiencies must be positive and finite: {raw:?}")));
        }
        Ok(Self {
            eta: raw.map(|e| e / max),
        })
    }

    pub fn uniform() -> Self {
        Self { eta: [1.0; 4] }
    }

    pub fn get(&self, a: u8, b: u8) -> f64 {
        self.eta[(a * 2 + b) as usize]
    }

    pub fn as_array(&self) -> [f64; 4] {
        self.eta
    }
}

/// Efficiency-corrected win rate of one instance.
///
/// With `C_tot = sum eta_ab^-1 C_ab` and `C_win` the same sum over winning
/// patterns, returns `(C_win / C_tot)(1 - P_b) + P_b / 2` where `P_b` is
/// the same-lab probability; for identical preparation splitters
/// `P_b = 2TR`, i.e. `(C_win / C_tot)(1 - 2TR) + TR`.
pub fn normalized_win_rate(counts: &InstanceRecord, eta: &EfficiencyMap, cfg: &InterferometerConfig) -> Result<f64> {
    let parity = u8::from(counts.parity());
    let mut total = 0.0;
    let mut wins = 0.0;
    for a in 0..2u8 {
        for b in 0..2u8 {
            let c = counts.coincidences[(a * 2 + b) as usize] as f64 / eta.get(a, b);
            total += c;
            if a ^ b == parity {
                wins += c;
            }
        }
    }
    if total == 0.0 {
        return Err(Error::ZeroCounts);
    }
    let pb = cfg.same_lab_probability();
    Ok(wins / total * (1.0 - pb) + pb / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(x: bool, y: bool, c: [u64; 4]) -> InstanceRecord {
        InstanceRecord {
            index: 0,
            x,
            y,
            phi_x: 0.0,
            start_time: 0.0,
            coincidences: c,
            in_lab: [0; 2],
            unresolved_double_clicks: [0; 4],
            rounds: 0,
            rounds_won: 0,
        }
    }

    #[test]
    fn equal_counts_give_classical_rate() {
        for t in [0.2, 0.35, 0.5] {
            let cfg = InterferometerConfig::symmetric(crate::optics::BeamsplitterSpec::from_transmission(t).unwrap());
            let r = normalized_win_rate(&record(true, false, [10, 10, 10, 10]), &EfficiencyMap::uniform(), &cfg).unwrap();
            assert!((r - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn only_winning_patterns_balanced() {
        let cfg = InterferometerConfig::balanced();
        let r = normalized_win_rate(&record(false, false, [40, 0, 0, 37]), &EfficiencyMap::uniform(), &cfg).unwrap();
        assert!((r - 0.75).abs() < 1e-15);
    }

    #[test]
    fn single_pattern_efficiency_cancels() {
        let cfg = InterferometerConfig::default();
        let rec = record(true, true, [25, 0, 0, 0]);
        let a = normalized_win_rate(&rec, &EfficiencyMap::uniform(), &cfg).unwrap();
        let b = normalized_win_rate(&rec, &EfficiencyMap::from_relative([0.8, 1.0, 1.0, 1.0]).unwrap(), &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn identical_splitters_match_two_tr_form() {
        let cfg = InterferometerConfig::default();
        let tr = cfg.test.transmission() * cfg.test.reflection();
        let rec = record(false, true, [3, 50, 44, 6]);
        let r = normalized_win_rate(&rec, &EfficiencyMap::uniform(), &cfg).unwrap();
        let expected = 94.0 / 103.0 * (1.0 - 2.0 * tr) + tr;
        assert!((r - expected).abs() < 1e-15);
    }

    #[test]
    fn zero_counts_error() {
        let r = normalized_win_rate(&record(false, false, [0; 4]), &EfficiencyMap::uniform(), &InterferometerConfig::default());
        assert!(matches!(r, Err(Error::ZeroCounts)));
    }

    #[test]
    fn map_is_relative() {
        let m = EfficiencyMap::from_relative([0.5, 0.45, 0.4, 0.475]).unwrap();
        assert_eq!(m.as_array(), [1.0, 0.9, 0.8, 0.95]);
        assert!(EfficiencyMap::from_relative([0.0, 1.0, 1.0, 1.0]).is_err());
    }
}
