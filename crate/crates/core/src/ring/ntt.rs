//! Negacyclic number-theoretic transform.
//!
//! `ntt_forward(a)[j] = a(w^(2j+1))` for `j = 0..n`, i.e. evaluation at the
//! odd powers of the primitive `2n`-th root `w`, in natural order. The
//! butterflies work in bit-reversed order internally and permute at the end.

use super::{bit_reverse, RingContext, RingElement, RingError};

impl RingContext {
    pub fn ntt_forward(&self, a: &RingElement) -> Result<RingElement, RingError> {
        self.check_len(a.len())?;
        let mut c = a.coeffs().to_vec();
        self.forward_in_place(&mut c);
        Ok(self.from_raw(c))
    }

    pub fn ntt_inverse(&self, a_hat: &RingElement) -> Result<RingElement, RingError> {
        self.check_len(a_hat.len())?;
        let mut c = a_hat.coeffs().to_vec();
        self.inverse_in_place(&mut c);
        Ok(self.from_raw(c))
    }

    pub(crate) fn forward_in_place(&self, a: &mut [u64]) {
        let m = &self.modulus;
        let n = self.n;
        let mut k = 0;
        let mut len = n / 2;
        while len >= 1 {
            for start in (0..n).step_by(2 * len) {
                k += 1;
                let zeta = self.zetas[k];
                for j in start..start + len {
                    let t = m.mont_mul(zeta, a[j + len]);
                    a[j + len] = m.sub(a[j], t);
                    a[j] = m.add(a[j], t);
                }
            }
            len /= 2;
        }
        self.permute(a);
    }

    pub(crate) fn inverse_in_place(&self, a: &mut [u64]) {
        let m = &self.modulus;
        let n = self.n;
        self.permute(a);
        let mut len = 1;
        while len < n {
            // Block b at this stage was produced by forward twiddle index n/(2 len) + b.
            let first = n / (2 * len);
            for (b, start) in (0..n).step_by(2 * len).enumerate() {
                let zeta = self.zetas_inv[first + b];
                for j in start..start + len {
                    let t = a[j];
                    a[j] = m.add(t, a[j + len]);
                    a[j + len] = m.mont_mul(zeta, m.sub(t, a[j + len]));
                }
            }
            len *= 2;
        }
        let scale = m.to_mont(self.n_inv);
        for x in a.iter_mut() {
            *x = m.mont_mul(*x, scale);
        }
    }

    fn permute(&self, a: &mut [u64]) {
        for i in 0..self.n {
            let j = bit_reverse(i, self.log_n);
            if i < j {
                a.swap(i, j);
            }
        }
    }
}

/// `O(n^2)` negacyclic product `a(X) b(X) mod (X^n + 1, q)`, reduced with `u128`.
///
/// Independent of the NTT path; used as a reference.
pub fn schoolbook_mul(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    assert_eq!(a.len(), b.len());
    let n = a.len();
    let q128 = q as u128;
    let mut pos = vec![0u128; n];
    let mut neg = vec![0u128; n];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            let p = (x as u128 * y as u128) % q128;
            if i + j < n {
                pos[i + j] = (pos[i + j] + p) % q128;
            } else {
                neg[i + j - n] = (neg[i + j - n] + p) % q128;
            }
        }
    }
    pos.iter()
        .zip(&neg)
        .map(|(&p, &m)| ((p + q128 - m) % q128) as u64)
        .collect()
}
