//! Deterministic per-trial random streams.
//!
//! Every trial draws from ChaCha8 keyed by the master seed, with the stream
//! number `trial * 256 + stream`. Trials are therefore independent of one
//! another and of the order (or thread) in which they are run.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Sub-stream identifiers. Distinct purposes never share a stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u8)]
pub enum Stream {
    Edges = 0,
    Matching = 1,
    Orientation = 2,
    Start = 3,
    Aux = 4,
}

/// A (master seed, trial index) pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrialSeed {
    pub master: u64,
    pub trial: u64,
}

impl TrialSeed {
    pub const fn new(master: u64, trial: u64) -> Self {
        Self { master, trial }
    }

    pub fn rng(self, stream: Stream) -> ChaCha8Rng {
        trial_rng(self.master, self.trial, stream)
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// ChaCha8 keyed by `master`, positioned on stream `trial * 256 + stream`.
pub fn trial_rng(master: u64, trial: u64, stream: Stream) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    let mut s = master;
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut s).to_le_bytes());
    }
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(trial.wrapping_mul(256).wrapping_add(stream as u64));
    rng
}
