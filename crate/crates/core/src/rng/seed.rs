/// Seed for sub-stream `stream` of a run seeded with `base`, valid for a
/// `width`-bit register (nonzero, below `2^width`).
///
/// SplitMix64 finalizer over the pair, so neighbouring streams and
/// neighbouring base seeds land far apart.
pub fn derive_seed(base: u64, stream: u64, width: u32) -> u64 {
    let mut z = base
        .wrapping_mul(0x9e37_79b9_7f4a_7c15)
        .wrapping_add(stream.wrapping_add(1).wrapping_mul(0xbf58_476d_1ce4_e5b9));
    loop {
        z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut x = z;
        x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        x ^= x >> 31;
        let seed = if width >= 64 { x } else { x & ((1u64 << width) - 1) };
        if seed != 0 {
            return seed;
        }
    }
}
