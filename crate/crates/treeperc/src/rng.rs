//! Per-trial random streams.
//!
//! Each trial draws from its own ChaCha stream: the key comes from the
//! master seed and the 64-bit stream number is the trial index. Streams for
//! distinct indices are independent keystreams of the same cipher, so the
//! schedule of trials across threads can never change what a trial sees.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// The RNG handed to each trial.
pub type TrialRng = ChaCha12Rng;

/// Deterministic, independent stream for `(master_seed, trial_index)`.
pub fn derive_trial_rng(master_seed: u64, trial_index: u64) -> TrialRng {
    let mut rng = ChaCha12Rng::seed_from_u64(master_seed);
    rng.set_stream(trial_index);
    rng
}
