//! Per-replication seed derivation.

/// SplitMix64 finalizer (Steele, Lea and Flood, 2014): a bijective 64-bit
/// avalanche mix.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of replication `rep` at budget `budget`:
/// `splitmix64(splitmix64(splitmix64(base) ^ budget) ^ rep)`.
pub fn mix64(base: u64, budget: u64, rep: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(base) ^ budget) ^ rep)
}
