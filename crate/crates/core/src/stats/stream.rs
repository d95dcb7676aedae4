use rand::Rng;

use super::binomial::{confidence, ConfidenceResult};
use crate::error::{check_unit_interval, Result};
use crate::game::RoundResult;
use crate::optics::Arrival;

/// Fraction of two-photons-in-one-lab events that threshold detectors
/// register as an in-lab coincidence, `(1 - V)/2`.
pub fn effective_double_click_efficiency(visibility: f64) -> Result<f64> {
    check_unit_interval("visibility", visibility)?;
    Ok((1.0 - visibility) / 2.0)
}

/// Running confidence over a stream of detection events.
///
/// Unresolved double clicks are invisible and skipped. In-lab coincidences
/// are always kept and scored by the players' fair guess. Cross-lab
/// coincidences are kept with probability `(1 - V)/2`, which balances their
/// weight against the in-lab events that double clicks hide. One
/// [`ConfidenceResult`] is emitted per retained event.
pub fn confidence_event_stream<I, R>(events: I, visibility: f64, rng: &mut R) -> Result<Vec<ConfidenceResult>>
where
    I: IntoIterator<Item = RoundResult>,
    R: Rng + ?Sized,
{
    confidence_trajectory(events.into_iter().map(Ok), visibility, rng, usize::MAX)
}

/// [`confidence_event_stream`] over a fallible, possibly endless source,
/// stopping after `len` retained events.
pub fn confidence_trajectory<I, R>(events: I, visibility: f64, rng: &mut R, len: usize) -> Result<Vec<ConfidenceResult>>
where
    I: IntoIterator<Item = Result<RoundResult>>,
    R: Rng + ?Sized,
{
    let keep = effective_double_click_efficiency(visibility)?;
    let mut games = 0u64;
    let mut wins = 0u64;
    let mut out = Vec::new();
    for event in events {
        if out.len() >= len {
            break;
        }
        let event = event?;
        let retained = match event.pattern.arrival() {
            Arrival::SameLab { resolved: false, .. } => false,
            Arrival::SameLab { resolved: true, .. } => true,
            Arrival::CrossLab { .. } => rng.random::<f64>() < keep,
        };
        if retained {
            games += 1;
            wins += u64::from(event.win);
            out.push(confidence(games, wins)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::strategy_outputs;
    use crate::optics::{Pattern, PhaseSetting};
    use crate::rng::{substream, Domain};

    #[test]
    fn double_click_efficiency_values() {
        assert_eq!(effective_double_click_efficiency(1.0).unwrap(), 0.0);
        assert_eq!(effective_double_click_efficiency(0.0).unwrap(), 0.5);
        assert!((effective_double_click_efficiency(0.94).unwrap() - 0.03).abs() < 1e-15);
        assert!(effective_double_click_efficiency(1.5).is_err());
    }

    #[test]
    fn perfect_visibility_discards_all_cross_lab_events() {
        let ps = PhaseSetting::from_bits(false, false);
        let mut guess_rng = substream(1, Domain::Instance, 0);
        let events: Vec<RoundResult> = (0..400)
            .map(|i| {
                let p = if i % 4 == 0 { Pattern::A0A1 } else { Pattern::A0B0 };
                strategy_outputs(p, &ps, &mut guess_rng)
            })
            .collect();
        let mut rng = substream(1, Domain::Discard, 0);
        let out = confidence_event_stream(events, 1.0, &mut rng).unwrap();
        assert_eq!(out.len(), 100);
        let wins = out.last().unwrap().n_wins;
        assert!((30..=70).contains(&wins), "{wins}");
    }

    #[test]
    fn all_winning_stream_follows_closed_form() {
        let ps = PhaseSetting::from_bits(true, false);
        let mut guess_rng = substream(2, Domain::Instance, 0);
        let events: Vec<RoundResult> = (0..2000).map(|_| strategy_outputs(Pattern::A0B1, &ps, &mut guess_rng)).collect();
        let mut rng = substream(2, Domain::Discard, 0);
        let out = confidence_event_stream(events, 0.0, &mut rng).unwrap();
        assert!(out.len() > 800);
        for (i, c) in out.iter().take(30).enumerate() {
            let k = (i + 1) as u32;
            assert_eq!(c.n_games, k as u64);
            assert_eq!(c.n_wins, k as u64);
            // sum_{j<k} C(k, j) / 2^k = 1 - 2^-k
            assert_eq!(c.confidence, 1.0 - 0.5f64.powi(k as i32));
        }
    }

    #[test]
    fn double_clicks_never_count() {
        let ps = PhaseSetting::from_bits(false, false);
        let mut guess_rng = substream(3, Domain::Instance, 0);
        let events: Vec<RoundResult> = [Pattern::A0A0, Pattern::B1B1, Pattern::A1A1, Pattern::B0B0]
            .iter()
            .map(|&p| strategy_outputs(p, &ps, &mut guess_rng))
            .collect();
        let mut rng = substream(3, Domain::Discard, 0);
        assert!(confidence_event_stream(events, 0.5, &mut rng).unwrap().is_empty());
    }
}
