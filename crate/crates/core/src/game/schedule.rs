use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::rng::{substream, Domain};

pub const ALL_SETTINGS: [(bool, bool); 4] = [(false, false), (false, true), (true, false), (true, true)];

/// Order in which the Referee applies the four `(x, y)` settings.
///
/// Each setting occupies one contiguous block of `instances_per_setting`
/// instances; the block order is shuffled per run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefereeSchedule {
    pub block_order: [(bool, bool); 4],
    pub instances_per_setting: usize,
    pub seed: u64,
}

impl RefereeSchedule {
    pub fn new(instances_per_setting: usize, seed: u64) -> Self {
        let mut block_order = ALL_SETTINGS;
        block_order.shuffle(&mut substream(seed, Domain::Schedule, 0));
        Self {
            block_order,
            instances_per_setting,
            seed,
        }
    }

    pub fn len(&self) -> usize {
        4 * self.instances_per_setting
    }

    pub fn is_empty(&self) -> bool {
        self.instances_per_setting == 0
    }

    /// Setting of instance `index`; wraps around past the end.
    pub fn setting(&self, index: usize) -> (bool, bool) {
        let block = (index / self.instances_per_setting.max(1)) % 4;
        self.block_order[block]
    }

    pub fn iter(&self) -> impl Iterator<Item = (bool, bool)> + '_ {
        (0..self.len()).map(|i| self.setting(i))
    }
}
