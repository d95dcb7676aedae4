//! Exact one-sided binomial test against the classical bound `P_win = 1/2`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest number of games accepted.
pub const MAX_GAMES: u64 = 1_000_000;

/// Up to this many games the tail is summed exactly in integer arithmetic.
const EXACT_LIMIT: u64 = 30;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceResult {
    pub n_games: u64,
    pub n_wins: u64,
    pub p_value: f64,
    pub confidence: f64,
}

fn validate(n_games: u64, n_wins: u64) -> Result<()> {
    if n_wins > n_games || n_games > MAX_GAMES {
        return Err(Error::InvalidCounts {
            games: n_games,
            wins: n_wins,
        });
    }
    Ok(())
}

fn ln_factorial(n: u64) -> f64 {
    if n < 256 {
        return (2..=n).map(|k| (k as f64).ln()).sum();
    }
    let x = n as f64;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    x * x.ln() - x + 0.5 * (std::f64::consts::TAU * x).ln() + inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 / 1260.0))
}

fn ln_binomial(n: u64, k: u64) -> f64 {
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// `sum_{k=from}^{n} C(n, k) / 2^n`, walking away from the mode.
fn upper_tail(n: u64, from: u64) -> f64 {
    let ln_first = ln_binomial(n, from) - n as f64 * std::f64::consts::LN_2;
    let (mut term, mut sum) = (1.0, 1.0);
    for j in from..n {
        term *= (n - j) as f64 / (j + 1) as f64;
        sum += term;
        if term < sum * 1e-18 {
            break;
        }
    }
    (ln_first + sum.ln()).exp()
}

/// `sum_{k=0}^{to} C(n, k) / 2^n`.
fn lower_tail(n: u64, to: u64) -> f64 {
    // Symmetric under k -> n - k at p = 1/2.
    upper_tail(n, n - to)
}

/// `(P(X < wins), P(X >= wins))` for `X ~ Binomial(games, 1/2)`.
fn split_tails(n_games: u64, n_wins: u64) -> (f64, f64) {
    if n_wins == 0 {
        return (0.0, 1.0);
    }
    if n_games <= EXACT_LIMIT {
        let mut below: u64 = 0;
        let mut c: u64 = 1;
        for k in 0..n_wins {
            below += c;
            c = c * (n_games - k) / (k + 1);
        }
        let total = 1u64 << n_games;
        let scale = total as f64;
        return (below as f64 / scale, (total - below) as f64 / scale);
    }
    if 2 * n_wins > n_games {
        let p = upper_tail(n_games, n_wins).min(1.0);
        (1.0 - p, p)
    } else {
        let below = lower_tail(n_games, n_wins - 1).min(1.0);
        (below, 1.0 - below)
    }
}

/// Probability that a classical resource (`P_win = 1/2`) wins at least
/// `n_wins` of `n_games`.
pub fn p_value(n_games: u64, n_wins: u64) -> Result<f64> {
    validate(n_games, n_wins)?;
    Ok(split_tails(n_games, n_wins).1)
}

/// Confidence `1 - p` that the game was played with a superposed resource.
pub fn confidence(n_games: u64, n_wins: u64) -> Result<ConfidenceResult> {
    validate(n_games, n_wins)?;
    let (below, p) = split_tails(n_games, n_wins);
    Ok(ConfidenceResult {
        n_games,
        n_wins,
        p_value: p,
        confidence: below,
    })
}
