//! `HighBits` / `LowBits`: `r = 2*gamma2*high + low (mod q)` with `|low| <= gamma2`.

use super::SchemeError;
use crate::ring::{mod_pm, RingContext, RingElement, RingVector};

/// Decomposition of residues mod `q` with respect to `alpha = 2 * gamma2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Decomposer {
    q: u64,
    alpha: u64,
    /// `(q - 1) / alpha`; high parts live in `[0, buckets)`.
    buckets: u64,
}

impl Decomposer {
    pub fn new(q: u64, gamma2: u64) -> Result<Self, SchemeError> {
        let alpha = 2 * gamma2;
        if gamma2 == 0 || (q - 1) % alpha != 0 {
            return Err(SchemeError::BadParams(format!(
                "2*gamma2 = {alpha} does not divide q - 1 = {}",
                q - 1
            )));
        }
        Ok(Decomposer {
            q,
            alpha,
            buckets: (q - 1) / alpha,
        })
    }

    pub fn buckets(&self) -> u64 {
        self.buckets
    }

    /// Returns `(high, low)` for a residue `r < q`.
    pub fn decompose(&self, r: u64) -> (u64, i64) {
        let low = mod_pm(r, self.alpha);
        let diff = (r as i64 - low) as u64;
        if diff == self.q - 1 {
            (0, low - 1)
        } else {
            (diff / self.alpha, low)
        }
    }

    pub fn high_bits(&self, ctx: &RingContext, v: &RingVector) -> RingVector {
        v.iter()
            .map(|e| ctx.from_raw(e.coeffs().iter().map(|&c| self.decompose(c).0).collect()))
            .collect()
    }

    /// Low parts re-encoded as residues mod `q`.
    pub fn low_bits(&self, ctx: &RingContext, v: &RingVector) -> RingVector {
        v.iter().map(|e| self.low_bits_elem(ctx, e)).collect()
    }

    pub(crate) fn low_bits_elem(&self, ctx: &RingContext, e: &RingElement) -> RingElement {
        let m = ctx.modulus();
        ctx.from_raw(
            e.coeffs()
                .iter()
                .map(|&c| m.from_i64(self.decompose(c).1))
                .collect(),
        )
    }

    /// `max |low|` over all coefficients, without materializing the vector.
    pub(crate) fn low_norm(&self, v: &RingVector) -> u64 {
        v.iter()
            .flat_map(|e| e.coeffs().iter())
            .map(|&c| self.decompose(c).1.unsigned_abs())
            .max()
            .unwrap_or(0)
    }
}
