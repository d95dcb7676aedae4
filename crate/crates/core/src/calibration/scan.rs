use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// What the scan's abscissa measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Abscissa {
    /// Delay-stage position in micrometres.
    DelayMicrons,
    /// Piezo drive voltage in volts.
    Volts,
}

impl Abscissa {
    pub fn column_name(self) -> &'static str {
        match self {
            Abscissa::DelayMicrons => "delay_um",
            Abscissa::Volts => "voltage_v",
        }
    }

    pub fn from_column_name(name: &str) -> Option<Self> {
        match name {
            "delay_um" => Some(Abscissa::DelayMicrons),
            "voltage_v" => Some(Abscissa::Volts),
            _ => None,
        }
    }
}

/// Counts per channel at each scan point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub abscissa_kind: Abscissa,
    pub abscissa: Vec<f64>,
    pub channels: Vec<String>,
    /// `counts[point][channel]`.
    pub counts: Vec<Vec<u64>>,
    /// Seconds of integration per point.
    pub integration_time: f64,
}

impl ScanRecord {
    pub fn validate(&self) -> Result<()> {
        if self.abscissa.len() != self.counts.len() {
            return Err(Error::InsufficientData(format!(
                "{} abscissa values but {} count rows",
                self.abscissa.len(),
                self.counts.len()
            )));
        }
        if self.counts.iter().any(|row| row.len() != self.channels.len()) {
            return Err(Error::InsufficientData("count row width differs from channel list".into()));
        }
        let increasing = self.abscissa.windows(2).all(|w| w[1] > w[0]);
        let decreasing = self.abscissa.windows(2).all(|w| w[1] < w[0]);
        if !(increasing || decreasing) {
            return Err(Error::InsufficientData("abscissa must be strictly monotone".into()));
        }
        Ok(())
    }

    pub fn channel(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.channels.iter().position(|c| c == name)?;
        Some(self.counts.iter().map(|row| row[i] as f64).collect())
    }

    pub fn len(&self) -> usize {
        self.abscissa.len()
    }

    pub fn is_empty(&self) -> bool {
        self.abscissa.is_empty()
    }

    /// Same scan with every abscissa value shifted by `offset`.
    pub fn shifted(&self, offset: f64) -> Self {
        Self {
            abscissa: self.abscissa.iter().map(|a| a + offset).collect(),
            ..self.clone()
        }
    }
}

/// Poisson draw around `mean`, or the rounded mean when no generator is given.
pub(crate) fn draw_count<R: Rng + ?Sized>(mean: f64, rng: Option<&mut R>) -> u64 {
    let mean = mean.max(0.0);
    match rng {
        Some(rng) if mean > 0.0 => Poisson::new(mean).expect("positive mean").sample(rng) as u64,
        Some(_) => 0,
        None => mean.round() as u64,
    }
}

/// `n` evenly spaced points from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..n).map(|i| start + (stop - start) * i as f64 / (n - 1) as f64).collect(),
    }
}
