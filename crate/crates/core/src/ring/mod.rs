//! Arithmetic in `R_q = Z_q[X]/(X^n + 1)` for primes `q = 1 mod 2n`.
//!
//! [`RingContext`] owns the modulus, a primitive `2n`-th root of unity and
//! the NTT twiddle tables. Elements are plain coefficient vectors; every
//! operation goes through the context that created them.

mod ntt;
mod sample;
mod xof;

pub use ntt::schoolbook_mul;
pub use xof::XofStream;

use thiserror::Error;

use crate::arith::{self, Modulus};

/// Largest modulus accepted by [`RingContext`].
pub const MAX_Q: u64 = 1 << 50;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("q = {q} is not 1 mod 2n = {two_n}")]
    BadCongruence { q: u64, two_n: u64 },
    #[error("modulus {0} exceeds 2^50")]
    ModulusTooLarge(u64),
    #[error("expected {expected} coefficients, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("coefficient {value} is not reduced mod {q}")]
    Unreduced { value: u64, q: u64 },
    #[error("bounded sampling needs eta >= 1")]
    ZeroBound,
    #[error("xof stream exhausted after {0} bytes")]
    StreamExhausted(u64),
}

/// Centered representative of `r mod alpha`.
///
/// Odd `alpha` maps into `[-(alpha-1)/2, (alpha-1)/2]`; even `alpha` into
/// the half-open `(-alpha/2, alpha/2]`.
pub fn mod_pm(r: u64, alpha: u64) -> i64 {
    let r = r % alpha;
    let half = alpha / 2;
    if r > half {
        r as i64 - alpha as i64
    } else {
        r as i64
    }
}

/// A polynomial of degree `< n` with coefficients in `[0, q)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingElement {
    coeffs: Vec<u64>,
}

impl RingElement {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [u64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<u64> {
        self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Coefficients as centered integers.
    pub fn centered(&self, q: u64) -> Vec<i64> {
        self.coeffs.iter().map(|&c| mod_pm(c, q)).collect()
    }
}

/// A vector in `R_q^k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingVector {
    elems: Vec<RingElement>,
}

impl RingVector {
    pub fn new(elems: Vec<RingElement>) -> Self {
        RingVector { elems }
    }

    pub fn elems(&self) -> &[RingElement] {
        &self.elems
    }

    pub fn elems_mut(&mut self) -> &mut [RingElement] {
        &mut self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.elems.iter().all(RingElement::is_zero)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, RingElement> {
        self.elems.iter()
    }
}

impl FromIterator<RingElement> for RingVector {
    fn from_iter<I: IntoIterator<Item = RingElement>>(iter: I) -> Self {
        RingVector::new(iter.into_iter().collect())
    }
}

/// `R_q` for a fixed `(q, n)` with `q` prime and `q = 1 mod 2n`.
///
/// Immutable after construction; share it freely across threads.
#[derive(Clone, Debug)]
pub struct RingContext {
    q: u64,
    n: usize,
    log_n: u32,
    modulus: Modulus,
    generator: u64,
    root: u64,
    n_inv: u64,
    /// `root^{bitrev(i)}` in Montgomery form, indexed as in the forward butterflies.
    zetas: Vec<u64>,
    /// `root^{-bitrev(i)}` in Montgomery form.
    zetas_inv: Vec<u64>,
}

impl RingContext {
    pub fn new(q: u64, n: usize) -> Result<Self, RingError> {
        if n == 0 || !n.is_power_of_two() {
            return Err(RingError::NotPowerOfTwo(n));
        }
        if q > MAX_Q {
            return Err(RingError::ModulusTooLarge(q));
        }
        if !arith::is_prime(q) || q == 2 {
            return Err(RingError::NotPrime(q));
        }
        let two_n = 2 * n as u64;
        if q % two_n != 1 {
            return Err(RingError::BadCongruence { q, two_n });
        }
        let modulus = Modulus::new(q);
        let generator = smallest_generator(&modulus);
        let root = modulus.pow(generator, (q - 1) / two_n);
        // Order of root divides 2n (a power of two); root^n = -1 pins it to exactly 2n.
        assert_eq!(modulus.pow(root, n as u64), q - 1);

        let log_n = n.trailing_zeros();
        let root_inv = modulus.inv(root);
        let mut zetas = vec![0u64; n];
        let mut zetas_inv = vec![0u64; n];
        for (i, (z, zi)) in zetas.iter_mut().zip(zetas_inv.iter_mut()).enumerate() {
            let e = bit_reverse(i, log_n) as u64;
            *z = modulus.to_mont(modulus.pow(root, e));
            *zi = modulus.to_mont(modulus.pow(root_inv, e));
        }
        let n_inv = modulus.inv(n as u64 % q);
        Ok(RingContext {
            q,
            n,
            log_n,
            modulus,
            generator,
            root,
            n_inv,
            zetas,
            zetas_inv,
        })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    /// Smallest generator of `Z_q^*`.
    pub fn generator(&self) -> u64 {
        self.generator
    }

    /// Primitive `2n`-th root of unity `g^((q-1)/2n)`.
    pub fn root(&self) -> u64 {
        self.root
    }

    pub fn n_inv(&self) -> u64 {
        self.n_inv
    }

    pub fn zero(&self) -> RingElement {
        RingElement {
            coeffs: vec![0; self.n],
        }
    }

    pub fn one(&self) -> RingElement {
        self.constant(1)
    }

    pub fn constant(&self, c: u64) -> RingElement {
        let mut e = self.zero();
        e.coeffs[0] = c % self.q;
        e
    }

    /// `X^i` (negacyclic, so `i >= n` wraps with a sign flip).
    pub fn monomial(&self, i: usize) -> RingElement {
        let mut e = self.zero();
        let wraps = (i / self.n) % 2 == 1;
        e.coeffs[i % self.n] = if wraps { self.q - 1 } else { 1 };
        e
    }

    /// Checks length and reduction of raw coefficients.
    pub fn element(&self, coeffs: Vec<u64>) -> Result<RingElement, RingError> {
        self.check_len(coeffs.len())?;
        if let Some(&value) = coeffs.iter().find(|&&c| c >= self.q) {
            return Err(RingError::Unreduced { value, q: self.q });
        }
        Ok(RingElement { coeffs })
    }

    /// Builds an element from signed coefficients, reducing each mod `q`.
    pub fn from_signed(&self, coeffs: &[i64]) -> Result<RingElement, RingError> {
        self.check_len(coeffs.len())?;
        Ok(RingElement {
            coeffs: coeffs.iter().map(|&c| self.modulus.from_i64(c)).collect(),
        })
    }

    pub(crate) fn from_raw(&self, coeffs: Vec<u64>) -> RingElement {
        debug_assert_eq!(coeffs.len(), self.n);
        RingElement { coeffs }
    }

    fn check_len(&self, got: usize) -> Result<(), RingError> {
        if got != self.n {
            return Err(RingError::DimensionMismatch {
                expected: self.n,
                got,
            });
        }
        Ok(())
    }

    pub fn add(&self, a: &RingElement, b: &RingElement) -> Result<RingElement, RingError> {
        self.check_len(a.len())?;
        self.check_len(b.len())?;
        Ok(self.from_raw(
            a.coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| self.modulus.add(x, y))
                .collect(),
        ))
    }

    pub fn sub(&self, a: &RingElement, b: &RingElement) -> Result<RingElement, RingError> {
        self.check_len(a.len())?;
        self.check_len(b.len())?;
        Ok(self.from_raw(
            a.coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| self.modulus.sub(x, y))
                .collect(),
        ))
    }

    pub fn neg(&self, a: &RingElement) -> RingElement {
        self.from_raw(a.coeffs.iter().map(|&x| self.modulus.neg(x)).collect())
    }

    /// Negacyclic product through the NTT.
    pub fn mul(&self, a: &RingElement, b: &RingElement) -> Result<RingElement, RingError> {
        let fa = self.ntt_forward(a)?;
        let fb = self.ntt_forward(b)?;
        self.ntt_inverse(&self.pointwise(&fa, &fb))
    }

    /// Component-wise product of two NTT-domain vectors.
    pub fn pointwise(&self, a: &RingElement, b: &RingElement) -> RingElement {
        self.from_raw(
            a.coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| self.modulus.mul(x, y))
                .collect(),
        )
    }

    /// `acc += a * b` component-wise (NTT domain).
    pub(crate) fn pointwise_acc(&self, acc: &mut RingElement, a: &RingElement, b: &RingElement) {
        for ((c, &x), &y) in acc.coeffs.iter_mut().zip(&a.coeffs).zip(&b.coeffs) {
            *c = self.modulus.add(*c, self.modulus.mul(x, y));
        }
    }

    pub fn add_vec(&self, a: &RingVector, b: &RingVector) -> Result<RingVector, RingError> {
        if a.len() != b.len() {
            return Err(RingError::DimensionMismatch {
                expected: a.len(),
                got: b.len(),
            });
        }
        a.iter().zip(b.iter()).map(|(x, y)| self.add(x, y)).collect()
    }

    pub fn sub_vec(&self, a: &RingVector, b: &RingVector) -> Result<RingVector, RingError> {
        if a.len() != b.len() {
            return Err(RingError::DimensionMismatch {
                expected: a.len(),
                got: b.len(),
            });
        }
        a.iter().zip(b.iter()).map(|(x, y)| self.sub(x, y)).collect()
    }

    /// `c * v` for a ring scalar `c`.
    pub fn scale_vec(&self, c: &RingElement, v: &RingVector) -> Result<RingVector, RingError> {
        let fc = self.ntt_forward(c)?;
        v.iter()
            .map(|e| {
                let fe = self.ntt_forward(e)?;
                self.ntt_inverse(&self.pointwise(&fc, &fe))
            })
            .collect()
    }

    /// `A * v` for a `rows x cols` matrix given row-major.
    pub fn mat_vec(&self, a: &[Vec<RingElement>], v: &RingVector) -> Result<RingVector, RingError> {
        let fv: Vec<RingElement> = v
            .iter()
            .map(|e| self.ntt_forward(e))
            .collect::<Result<_, _>>()?;
        a.iter()
            .map(|row| {
                if row.len() != fv.len() {
                    return Err(RingError::DimensionMismatch {
                        expected: row.len(),
                        got: fv.len(),
                    });
                }
                let mut acc = self.zero();
                for (aij, vj) in row.iter().zip(&fv) {
                    let faij = self.ntt_forward(aij)?;
                    self.pointwise_acc(&mut acc, &faij, vj);
                }
                self.ntt_inverse(&acc)
            })
            .collect()
    }
}

/// `max_i |coeff_i mod± q|`.
pub fn inf_norm(a: &RingElement, q: u64) -> u64 {
    a.coeffs
        .iter()
        .map(|&c| mod_pm(c, q).unsigned_abs())
        .max()
        .unwrap_or(0)
}

/// Max of [`inf_norm`] over the components.
pub fn inf_norm_vec(v: &RingVector, q: u64) -> u64 {
    v.iter().map(|e| inf_norm(e, q)).max().unwrap_or(0)
}

fn smallest_generator(m: &Modulus) -> u64 {
    let q = m.value();
    let factors = arith::prime_factors(q - 1);
    (2..q)
        .find(|&g| factors.iter().all(|&p| m.pow(g, (q - 1) / p) != 1))
        .expect("Z_q^* is cyclic for prime q")
}

pub(crate) fn bit_reverse(i: usize, bits: u32) -> usize {
    if bits == 0 {
        0
    } else {
        i.reverse_bits() >> (usize::BITS - bits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const Q0: u64 = 12439554041857;

    #[test]
    fn toy_context() {
        let ctx = RingContext::new(17, 4).unwrap();
        assert_eq!(ctx.generator(), 3);
        assert_eq!(ctx.root(), 9);
        let m = ctx.modulus();
        assert_eq!(m.pow(9, 4), 16);
        assert_eq!(m.pow(9, 8), 1);
        for j in 1..8 {
            assert_ne!(m.pow(9, j), 1);
        }
        assert_eq!(m.mul(4, ctx.n_inv()), 1);
    }

    #[test]
    fn q0_context() {
        let ctx = RingContext::new(Q0, 512).unwrap();
        let m = ctx.modulus();
        assert_eq!(m.pow(ctx.root(), 1024), 1);
        assert_eq!(m.pow(ctx.root(), 512), Q0 - 1);
        assert_eq!(m.mul(512, ctx.n_inv()), 1);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            RingContext::new(13, 4).unwrap_err(),
            RingError::BadCongruence { q: 13, two_n: 8 }
        );
        assert_eq!(RingContext::new(15, 4).unwrap_err(), RingError::NotPrime(15));
        assert_eq!(RingContext::new(17, 6).unwrap_err(), RingError::NotPowerOfTwo(6));
        // Dilithium-QROM modulus is 5 mod 8.
        assert!(matches!(
            RingContext::new((1 << 45) - 21283, 512),
            Err(RingError::BadCongruence { .. })
        ));
    }

    #[test]
    fn centered_reduction() {
        assert_eq!(mod_pm(0, 17), 0);
        assert_eq!(mod_pm(9, 17), -8);
        assert_eq!(mod_pm(8, 17), 8);
        assert_eq!(mod_pm(4, 8), 4);
        assert_eq!(mod_pm(5, 8), -3);
        for r in 0..17 {
            assert!(mod_pm(r, 17).unsigned_abs() <= 8);
        }
    }

    #[test]
    fn norms() {
        let ctx = RingContext::new(17, 4).unwrap();
        assert_eq!(inf_norm(&ctx.zero(), 17), 0);
        assert_eq!(inf_norm(&ctx.constant(16), 17), 1);
        assert_eq!(inf_norm(&ctx.element(vec![0, 8, 0, 1]).unwrap(), 17), 8);
        let v = RingVector::new(vec![ctx.constant(2), ctx.constant(14)]);
        assert_eq!(inf_norm_vec(&v, 17), 3);
        assert_eq!(inf_norm_vec(&RingVector::new(vec![]), 17), 0);
    }

    #[test]
    fn element_validation() {
        let ctx = RingContext::new(17, 4).unwrap();
        assert!(matches!(
            ctx.element(vec![1, 2, 3]),
            Err(RingError::DimensionMismatch { expected: 4, got: 3 })
        ));
        assert!(matches!(ctx.element(vec![0, 17, 0, 0]), Err(RingError::Unreduced { .. })));
        assert_eq!(ctx.monomial(5), ctx.element(vec![0, 16, 0, 0]).unwrap());
    }
}
