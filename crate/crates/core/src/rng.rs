//! Seeded, portable randomness.
//!
//! Every randomized routine in this crate draws from a [`SplitMix64`] stream
//! whose 64-bit state is the seed itself, so a seed pins the entire output
//! bit-for-bit across platforms. Two conventions make that portable:
//!
//! * uniform doubles come from the top 53 bits of the next output word,
//!   `u = (x >> 11) · 2⁻⁵³ ∈ [0, 1)` ([`next_unit`]);
//! * sub-streams (per trial, per sweep cell, …) use [`derive_seed`], a fixed
//!   chain of SplitMix64 finalizer mixes over `(master, parts…)`, rather than
//!   consuming draws from the parent stream.

use rand_xoshiro::rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

/// The generator behind all sampling in this crate.
pub type Stream = SplitMix64;

/// Stream whose internal state starts at exactly `seed`.
pub fn stream(seed: u64) -> Stream {
    SplitMix64::from_seed(seed.to_le_bytes())
}

/// Next uniform double in `[0, 1)`: top 53 bits of the next word.
pub fn next_unit(rng: &mut Stream) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// SplitMix64's golden-gamma increment.
const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output finalizer (Stafford mix13).
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic seed for a sub-stream identified by `parts`.
///
/// Defined as `s₀ = mix(master + γ)`, then `sᵢ = mix(sᵢ₋₁ ^ mix(partᵢ + γ))`
/// with γ the golden-gamma constant. The chaining is order-sensitive, so
/// `[1, 2]` and `[2, 1]` land in different streams, and `derive_seed(m, &[])`
/// equals the first output of `stream(m)`.
pub fn derive_seed(master: u64, parts: &[u64]) -> u64 {
    let mut s = mix(master.wrapping_add(GAMMA));
    for &p in parts {
        s = mix(s ^ mix(p.wrapping_add(GAMMA)));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Reference outputs of canonical splitmix64 with the state taken
    /// literally as the seed (first vector is Vigna's published one).
    #[test]
    fn reference_vectors() {
        let cases: [(u64, [u64; 3]); 3] = [
            (
                0,
                [0xe220a8397b1dcdaf, 0x6e789e6aa1b965f4, 0x06c45d188009454f],
            ),
            (
                42,
                [0xbdd732262feb6e95, 0x28efe333b266f103, 0x47526757130f9f52],
            ),
            (
                0x123456789abcdef0,
                [0x161922c645ce50e8, 0xad760cafa1697b60, 0x3501ff44902ca50d],
            ),
        ];
        for (seed, expect) in cases {
            let mut g = stream(seed);
            for e in expect {
                assert_eq!(g.next_u64(), e, "seed {seed:#x}");
            }
        }
    }

    #[test]
    fn unit_draw_uses_top_53_bits() {
        let mut g = stream(42);
        assert_eq!(next_unit(&mut g), 0.7415648787718233);
        let mut g = stream(42);
        let raw = g.next_u64();
        assert_eq!((raw >> 11) as f64 * 2f64.powi(-53), 0.7415648787718233);
    }

    #[test]
    fn unit_draws_stay_in_half_open_interval() {
        let mut g = stream(7);
        for _ in 0..10_000 {
            let u = next_unit(&mut g);
            assert!((0.0..1.0).contains(&u));
        }
    }

    #[test]
    fn derive_seed_pinned_and_order_sensitive() {
        assert_eq!(derive_seed(0, &[]), 0xe220a8397b1dcdaf);
        assert_eq!(derive_seed(7, &[1, 2]), 0x3eb40b70734ed4fb);
        assert_eq!(derive_seed(7, &[2, 1]), 0xbe489d0ac896a4dc);
        assert_ne!(derive_seed(7, &[1, 2]), derive_seed(7, &[2, 1]));
        assert_ne!(derive_seed(7, &[1]), derive_seed(8, &[1]));
    }

    #[test]
    fn derived_streams_diverge() {
        let mut a = stream(derive_seed(1, &[0]));
        let mut b = stream(derive_seed(1, &[1]));
        let same = (0..16).filter(|_| a.next_u64() == b.next_u64()).count();
        assert_eq!(same, 0);
    }
}
