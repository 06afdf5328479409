//! Deterministic derivation of per-task RNG seeds.
//!
//! Nested procedures (bootstrap iterations, simulation trials) each get their
//! own seed derived from a master seed and a stream index, so the work can be
//! reordered or parallelized without changing any result.

/// SplitMix64 finalizer; a bijective mixer with good avalanche behavior.
fn mix(z: u64) -> u64 {
    let mut z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives an independent child seed from `master` for stream `stream`.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    mix(master ^ mix(stream))
}
