//! Deterministic, platform-independent random streams.
//!
//! Every randomized routine in this crate draws from a ChaCha8 generator
//! whose seed is derived from a user seed and a stream index (trajectory
//! number, corpus word index, Monte Carlo chunk index, …) via the SplitMix64
//! finalizer. Identical `(seed, index)` pairs therefore produce bit-identical
//! streams on every platform and under any thread schedule, and distinct
//! indices give statistically independent streams.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// SplitMix64 finalizer (Steele–Lea–Flood); a high-quality 64-bit mixer.
#[inline]
pub fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the seed of stream `index` from the user seed.
#[inline]
pub fn derive_stream_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index))
}

/// A ChaCha8 generator for stream `index` of the given seed.
pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_stream_seed(seed, index))
}

/// Uniform integer in `[0, n)`, unbiased via rejection sampling.
pub fn uniform_below(rng: &mut impl RngCore, n: u64) -> u64 {
    debug_assert!(n > 0);
    // Reject draws below 2^64 mod n so the remaining range splits evenly.
    let threshold = n.wrapping_neg() % n;
    loop {
        let x = rng.next_u64();
        if x >= threshold {
            return x % n;
        }
    }
}

/// Uniform `f64` in `[0, 1)` with 53 random bits (the standard construction).
#[inline]
pub fn unit_f64(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
}

/// A random word built from `letters` uniform draws over
/// `{a, a⁻¹, b, b⁻¹}`, freely reduced as it is built. Cancellation can make
/// the result shorter than `letters`, or even empty.
pub fn random_letter_word(rng: &mut impl RngCore, letters: u64) -> crate::words::Word {
    let mut word = crate::words::Word::identity();
    for _ in 0..letters {
        let (base, sign) = match uniform_below(rng, 4) {
            0 => (crate::words::Generator::A, 1),
            1 => (crate::words::Generator::A, -1),
            2 => (crate::words::Generator::B, 1),
            _ => (crate::words::Generator::B, -1),
        };
        word.push_part(base, sign);
    }
    word
}
