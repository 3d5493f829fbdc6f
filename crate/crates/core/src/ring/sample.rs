use super::{RingContext, RingElement, RingError, XofStream};

impl RingContext {
    /// Uniform element of `R_q`: each coefficient by rejection from
    /// `ceil(log2 q)`-bit chunks.
    pub fn sample_uniform(&self, stream: &mut XofStream) -> Result<RingElement, RingError> {
        let coeffs = (0..self.n)
            .map(|_| stream.uniform_below(self.q))
            .collect::<Result<_, _>>()?;
        Ok(self.from_raw(coeffs))
    }

    /// Uniform element of `S_eta` (centered coefficients in `[-eta, eta]`).
    pub fn sample_bounded(&self, stream: &mut XofStream, eta: u64) -> Result<RingElement, RingError> {
        if eta == 0 {
            return Err(RingError::ZeroBound);
        }
        let width = 2 * eta + 1;
        let coeffs = (0..self.n)
            .map(|_| {
                let v = stream.uniform_below(width)?;
                Ok(self.modulus.from_i64(v as i64 - eta as i64))
            })
            .collect::<Result<_, RingError>>()?;
        Ok(self.from_raw(coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{inf_norm, mod_pm};

    const Q0: u64 = 12439554041857;

    #[test]
    fn deterministic() {
        let ctx = RingContext::new(Q0, 512).unwrap();
        let a = ctx.sample_uniform(&mut XofStream::new(b"x", b"u")).unwrap();
        let b = ctx.sample_uniform(&mut XofStream::new(b"x", b"u")).unwrap();
        assert_eq!(a, b);
        assert!(a.coeffs().iter().all(|&c| c < Q0));
        let c = ctx.sample_uniform(&mut XofStream::new(b"y", b"u")).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn bounded_frequencies() {
        // 10^5 coefficients at eta = 2; each of the 5 values should land at 0.2 +- 0.01.
        let ctx = RingContext::new(Q0, 512).unwrap();
        let mut stream = XofStream::new(b"freq", b"eta2");
        let mut counts = [0u64; 5];
        let mut total = 0u64;
        while total < 100_000 {
            let e = ctx.sample_bounded(&mut stream, 2).unwrap();
            assert!(inf_norm(&e, Q0) <= 2);
            for &c in e.coeffs() {
                if total == 100_000 {
                    break;
                }
                counts[(mod_pm(c, Q0) + 2) as usize] += 1;
                total += 1;
            }
        }
        for c in counts {
            let f = c as f64 / total as f64;
            assert!((f - 0.2).abs() < 0.01, "frequency {f}");
        }
    }

    #[test]
    fn bounded_norm_holds_for_many_bounds() {
        let ctx = RingContext::new(17, 4).unwrap();
        let mut s = XofStream::new(b"n", b"b");
        for eta in 1..=8 {
            for _ in 0..50 {
                assert!(inf_norm(&ctx.sample_bounded(&mut s, eta).unwrap(), 17) <= eta);
            }
        }
        assert_eq!(ctx.sample_bounded(&mut s, 0), Err(RingError::ZeroBound));
    }

    #[test]
    fn exhausted_stream_is_reported() {
        let ctx = RingContext::new(Q0, 512).unwrap();
        let mut s = XofStream::new(b"n", b"b").with_limit(16);
        assert_eq!(ctx.sample_uniform(&mut s), Err(RingError::StreamExhausted(16)));
    }
}
