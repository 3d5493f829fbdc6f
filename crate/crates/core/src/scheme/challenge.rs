use sha3::digest::{ExtendableOutput, Update, XofReader};
use sha3::Shake256;

use crate::ring::{RingContext, RingElement, XofStream};

const HASH_DOMAIN: &[u8] = b"ntt-dilithium/H/v1";
const BALL_TAG: &[u8] = b"ball";

/// An element of `B_tau`: exactly `tau` coefficients in `{-1, 1}`, the rest zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Challenge {
    coeffs: Vec<i8>,
}

impl Challenge {
    pub(crate) fn from_coeffs(coeffs: Vec<i8>) -> Self {
        Challenge { coeffs }
    }

    pub fn coeffs(&self) -> &[i8] {
        &self.coeffs
    }

    pub fn weight(&self) -> usize {
        self.coeffs.iter().filter(|&&c| c != 0).count()
    }

    /// `(position, is_negative)` for every nonzero coefficient, positions ascending.
    pub fn support(&self) -> impl Iterator<Item = (usize, bool)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (i, c < 0))
    }

    pub fn is_in_ball(&self, tau: usize) -> bool {
        self.weight() == tau && self.coeffs.iter().all(|&c| (-1..=1).contains(&c))
    }

    pub fn to_element(&self, ctx: &RingContext) -> RingElement {
        let m = ctx.modulus();
        ctx.from_raw(self.coeffs.iter().map(|&c| m.from_i64(c as i64)).collect())
    }
}

/// Fisher-Yates placement of `tau` signed ones, driven by `XofStream(seed, "ball")`.
///
/// For `i = n - tau .. n`: draw `j <= i` uniformly, move `c[j]` to `c[i]`,
/// then set `c[j] = +-1` from the next stream bit (1 means negative).
pub fn sample_in_ball(seed: &[u8], n: usize, tau: usize) -> Challenge {
    assert!(tau <= n, "tau = {tau} exceeds n = {n}");
    let mut stream = XofStream::new(seed, BALL_TAG);
    let mut coeffs = vec![0i8; n];
    for i in n - tau..n {
        let j = stream
            .uniform_below(i as u64 + 1)
            .expect("unbounded stream") as usize;
        let negative = stream.next_bits(1).expect("unbounded stream") == 1;
        coeffs[i] = coeffs[j];
        coeffs[j] = if negative { -1 } else { 1 };
    }
    Challenge { coeffs }
}

/// `H: {0,1}* -> B_tau`: a 32-byte SHAKE256 digest of `HASH_DOMAIN || input`
/// seeds [`sample_in_ball`].
pub fn hash_to_challenge(input: &[u8], n: usize, tau: usize) -> Challenge {
    let mut h = Shake256::default();
    h.update(HASH_DOMAIN);
    h.update(input);
    let mut digest = [0u8; 32];
    h.finalize_xof().read(&mut digest);
    sample_in_ball(&digest, n, tau)
}

/// `|B_tau| = 2^tau * C(n, tau)`.
pub fn ball_size(n: usize, tau: usize) -> num_bigint::BigUint {
    use num_bigint::BigUint;
    let mut binom = BigUint::from(1u32);
    for i in 0..tau {
        binom = binom * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    binom << tau
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    #[test]
    fn always_in_ball() {
        for s in 0u32..1000 {
            let c = sample_in_ball(&s.to_le_bytes(), 512, 40);
            assert!(c.is_in_ball(40));
            let h = hash_to_challenge(&s.to_le_bytes(), 256, 39);
            assert!(h.is_in_ball(39));
        }
    }

    #[test]
    fn deterministic() {
        assert_eq!(sample_in_ball(b"abc", 512, 40), sample_in_ball(b"abc", 512, 40));
        assert_ne!(sample_in_ball(b"abc", 512, 40), sample_in_ball(b"abd", 512, 40));
        assert_eq!(hash_to_challenge(b"m", 512, 40), hash_to_challenge(b"m", 512, 40));
    }

    #[test]
    fn ball_cardinality() {
        assert_eq!(ball_size(8, 2), 112u32.into());
        assert_eq!(ball_size(4, 0), 1u32.into());
        assert_eq!(ball_size(4, 4), 16u32.into());
    }

    #[test]
    fn uniform_over_small_ball() {
        // n = 8, tau = 2: 112 elements, 10^6 seeds, every cell within 3 sigma.
        const SAMPLES: u32 = 1_000_000;
        let mut counts: HashMap<Vec<i8>, u32> = HashMap::new();
        for s in 0..SAMPLES {
            let c = sample_in_ball(&s.to_le_bytes(), 8, 2);
            *counts.entry(c.coeffs).or_default() += 1;
        }
        assert_eq!(counts.len(), 112);
        let p = 1.0 / 112.0;
        let mean = SAMPLES as f64 * p;
        let sigma = (SAMPLES as f64 * p * (1.0 - p)).sqrt();
        for (cell, &c) in &counts {
            assert!(
                (c as f64 - mean).abs() <= 3.0 * sigma,
                "cell {cell:?}: {c} vs {mean:.1} +- {sigma:.1}"
            );
        }
    }
}
