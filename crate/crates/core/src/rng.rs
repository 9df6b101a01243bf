//! Counter-based uniform streams for the Monte-Carlo engine.
//!
//! Every random quantity is addressed by `(seed, trial, slot)`: the seed
//! keys a ChaCha8 generator, the trial index selects the ChaCha stream and
//! the slot is the word offset inside it. Values therefore do not depend on
//! evaluation order or on how trials are spread across threads.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Slot of the transmitter orientation draw in random-angle runs.
pub const SLOT_TX_ANGLE: u64 = 0;
/// Slot of the receiver orientation draw in random-angle runs.
pub const SLOT_RX_ANGLE: u64 = 1;
/// Slot of the SISO reference phase.
pub const SLOT_SISO: u64 = 2;
/// First slot of the per-pair phases, laid out row-major.
pub const SLOT_PAIR_BASE: u64 = 3;

fn unit_interval(x: u64) -> f64 {
    (x >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform value in `[0, 1)` for `(seed, trial, slot)`.
pub fn derive_trial_stream(seed: u64, trial_index: u64, pair_index: u64) -> f64 {
    let mut s = TrialStream::new(seed, trial_index);
    s.seek(pair_index);
    s.next_unit()
}

/// Sequential reader over one trial's stream. Reading slot `p` after
/// [`TrialStream::seek`]`(p)` returns the same value as [`derive_trial_stream`].
#[derive(Debug, Clone)]
pub struct TrialStream {
    rng: ChaCha8Rng,
}

impl TrialStream {
    pub fn new(seed: u64, trial_index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial_index);
        Self { rng }
    }

    /// Positions the stream at `slot`; each slot is one 64-bit word pair.
    pub fn seek(&mut self, slot: u64) {
        self.rng.set_word_pos(2 * u128::from(slot));
    }

    pub fn next_unit(&mut self) -> f64 {
        unit_interval(self.rng.next_u64())
    }
}
