//! Splittable seed derivation for reproducible ensembles.

/// Derives an independent child seed from a master seed and a task index.
///
/// This is the SplitMix64 finalizer applied to `master + (index+1) * phi64`,
/// where `phi64` is the 64-bit golden-ratio constant. Child streams for
/// different indices are decorrelated, and the mapping is pure, so ensemble
/// members can be generated in any order (or in parallel) and still
/// reproduce bit-identically.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
