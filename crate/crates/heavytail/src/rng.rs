//! Deterministic stream derivation for Monte Carlo trials.
//!
//! Every trial draws from a stream derived as `derive(master_seed, salt, trial)`,
//! so results depend only on the configuration and never on worker count or
//! scheduling order. Workers can pick up any subset of trials in any order.

use rand_chacha::ChaCha8Rng;
use rand_chacha::rand_core::SeedableRng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// splitmix64 finalizer; mixes a 64-bit word into a well distributed one.
#[inline]
pub fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stable 64-bit hash of a label (experiment names, ensemble tags).
pub fn hash_label(label: &str) -> u64 {
    // FNV-1a over the bytes, then one splitmix round to spread the bits.
    let mut h: u64 = 0xCBF2_9CE4_8422_2325;
    for &b in label.as_bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x1000_0000_01B3);
    }
    splitmix64(h)
}

/// The per-trial random stream used by all samplers.
pub type TrialRng = ChaCha8Rng;

/// Derives the independent stream for trial `trial` of the experiment
/// identified by `salt` under `master_seed`.
///
/// The derivation is a splitmix64 chain over (master_seed, salt, trial), so
/// any external tool can replay a single trial.
pub fn derive_stream(master_seed: u64, salt: u64, trial: u64) -> TrialRng {
    let mut words = [0u64; 4];
    let mut state = splitmix64(master_seed ^ splitmix64(salt));
    state = splitmix64(state ^ trial.wrapping_mul(GOLDEN_GAMMA));
    for w in &mut words {
        state = splitmix64(state);
        *w = state;
    }
    let mut seed = [0u8; 32];
    for (chunk, w) in seed.chunks_exact_mut(8).zip(words.iter()) {
        chunk.copy_from_slice(&w.to_le_bytes());
    }
    TrialRng::from_seed(seed)
}
