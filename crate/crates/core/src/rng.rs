//! Counter-based random bits.
//!
//! A draw is a pure function of `(seed, sample, block)`, so any partition of
//! the sample range across threads reproduces the serial stream exactly.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
#[inline]
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// 64 random bits for block `block` of sample `sample` under `seed`.
#[inline]
pub fn counter_word(seed: u64, sample: u64, block: u64) -> u64 {
    let key = splitmix64(seed);
    let stream = splitmix64(key ^ sample.wrapping_mul(GOLDEN));
    splitmix64(stream ^ splitmix64(block ^ key.rotate_left(32)))
}

/// One unbiased coin for factor `factor` of sample `sample`.
#[inline]
pub fn coin(seed: u64, sample: u64, factor: u64) -> bool {
    counter_word(seed, sample, factor / 64) >> (factor % 64) & 1 == 1
}
