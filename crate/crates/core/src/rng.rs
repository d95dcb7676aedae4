//! Deterministic random-number substreams.
//!
//! Every random draw in the crate comes from a ChaCha8 generator keyed by
//! the run's master seed. Independent consumers (the Referee schedule, each
//! game instance, the double-click discard rule, ...) get their own stream
//! number, so results do not depend on evaluation order or thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// Name of the generator algorithm recorded in configs and outputs.
pub const GENERATOR: &str = "chacha8";

/// Consumer classes; the tag occupies the top 16 bits of the stream id.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u16)]
pub enum Domain {
    Schedule = 1,
    Instance = 2,
    Discard = 3,
    Repetition = 4,
    Calibration = 5,
    SweepPoint = 6,
}

/// Generator for `(domain, index)` under `master`.
pub fn substream(master: u64, domain: Domain, index: u64) -> SimRng {
    let mut rng = SimRng::seed_from_u64(master);
    rng.set_stream(((domain as u64) << 48) | (index & ((1 << 48) - 1)));
    rng
}

/// Derives a child master seed, for nesting whole runs inside a sweep.
pub fn child_seed(master: u64, domain: Domain, index: u64) -> u64 {
    use rand::Rng;
    substream(master, domain, index).random()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn draw(mut rng: SimRng) -> Vec<u64> {
        (0..4).map(|_| rng.random()).collect()
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a = draw(substream(7, Domain::Instance, 3));
        assert_eq!(a, draw(substream(7, Domain::Instance, 3)));
        assert_ne!(a, draw(substream(7, Domain::Instance, 4)));
        assert_ne!(a, draw(substream(7, Domain::Discard, 3)));
        assert_ne!(a, draw(substream(8, Domain::Instance, 3)));
    }
}
