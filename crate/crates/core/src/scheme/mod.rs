//! The simplified Dilithium signature scheme over `R_q`, `q = 1 mod 2n`.
//!
//! Key generation, signing and verification follow the textbook
//! Fiat-Shamir-with-aborts description: no public-key compression, no hints,
//! `t = A s1 + s2` is published in full. All randomness comes from explicit
//! seeds, so every operation is deterministic.

mod challenge;
pub mod encoding;
pub mod params;
mod rounding;

pub use challenge::{ball_size, hash_to_challenge, sample_in_ball, Challenge};
pub use params::{builtin, builtin_sets, BuiltinSet, ParameterSet, SourceTable};
pub use rounding::Decomposer;

use thiserror::Error;

use crate::ring::{inf_norm_vec, RingContext, RingElement, RingError, RingVector, XofStream};
use encoding::{pack_high_bits, Layout};

/// Default cap on signing attempts.
pub const DEFAULT_MAX_ATTEMPTS: u32 = 1024;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SchemeError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("signing gave up after {0} attempts")]
    MaxAttemptsExceeded(u32),
    #[error("bad magic {0:02x?}")]
    BadMagic([u8; 4]),
    #[error("unsupported format version {0}")]
    UnsupportedVersion(u8),
    #[error("params id {got} does not match expected {expected}")]
    BadParamsId { expected: u8, got: u8 },
    #[error("input truncated")]
    TruncatedInput,
    #[error("non-canonical encoding: {0}")]
    NonCanonical(String),
    #[error("malformed signature: {0}")]
    MalformedSignature(Box<SchemeError>),
}

pub type Matrix = Vec<Vec<RingElement>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PublicKey {
    pub rho: [u8; 32],
    pub t: RingVector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecretKey {
    pub rho: [u8; 32],
    /// Signing seed `K`.
    pub key: [u8; 32],
    pub s1: RingVector,
    pub s2: RingVector,
    pub t: RingVector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeyPair {
    pub pk: PublicKey,
    pub sk: SecretKey,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    pub z: RingVector,
    pub c: Challenge,
}

/// A parameter set bound to its ring. Cheap to share across threads.
#[derive(Clone, Debug)]
pub struct Dilithium {
    params: ParameterSet,
    ctx: RingContext,
    decomposer: Decomposer,
    layout: Layout,
    w1_bits: u32,
    max_attempts: u32,
}

impl Dilithium {
    /// Checks the structural requirements the scheme itself relies on; see
    /// `estimator::validate` for the full list including security hypotheses.
    pub fn new(params: ParameterSet) -> Result<Self, SchemeError> {
        let p = &params;
        let bad = |msg: String| Err(SchemeError::BadParams(msg));
        if p.beta != p.tau as u64 * p.eta {
            return bad(format!("beta = {} but tau * eta = {}", p.beta, p.tau as u64 * p.eta));
        }
        if p.gamma1 <= p.beta || p.gamma2 <= p.beta {
            return bad("gamma1 and gamma2 must exceed beta".into());
        }
        if p.q <= 4 * p.gamma2 {
            return bad(format!("q must exceed 4 * gamma2 = {}", 4 * p.gamma2));
        }
        if p.tau > p.n || p.k == 0 || p.l == 0 || p.eta == 0 {
            return bad("need tau <= n and k, l, eta >= 1".into());
        }
        let ctx = RingContext::new(p.q, p.n)?;
        let decomposer = Decomposer::new(p.q, p.gamma2)?;
        let layout = Layout {
            q: p.q,
            n: p.n,
            k: p.k,
            l: p.l,
            tau: p.tau,
            eta: p.eta,
            gamma1: p.gamma1,
            params_id: params.params_id(),
        };
        Ok(Dilithium {
            w1_bits: crate::arith::bits_for(decomposer.buckets()),
            params,
            ctx,
            decomposer,
            layout,
            max_attempts: DEFAULT_MAX_ATTEMPTS,
        })
    }

    pub fn with_max_attempts(mut self, max_attempts: u32) -> Self {
        self.max_attempts = max_attempts;
        self
    }

    pub fn params(&self) -> &ParameterSet {
        &self.params
    }

    pub fn ring(&self) -> &RingContext {
        &self.ctx
    }

    pub fn decomposer(&self) -> &Decomposer {
        &self.decomposer
    }

    /// `A in R_q^{k x l}`; entry `(i, j)` comes from `XofStream(rho, "A" || i || j)`.
    pub fn expand_a(&self, rho: &[u8; 32]) -> Matrix {
        (0..self.params.k)
            .map(|i| {
                (0..self.params.l)
                    .map(|j| {
                        let mut tag = b"A".to_vec();
                        tag.extend_from_slice(&(i as u16).to_le_bytes());
                        tag.extend_from_slice(&(j as u16).to_le_bytes());
                        self.ctx
                            .sample_uniform(&mut XofStream::new(rho, &tag))
                            .expect("unbounded stream")
                    })
                    .collect()
            })
            .collect()
    }

    fn expand_a_ntt(&self, rho: &[u8; 32]) -> Matrix {
        let mut a = self.expand_a(rho);
        for row in a.iter_mut() {
            for e in row.iter_mut() {
                self.ctx.forward_in_place(e.coeffs_mut());
            }
        }
        a
    }

    fn ntt_vec(&self, v: &RingVector) -> Vec<RingElement> {
        v.iter()
            .map(|e| {
                let mut c = e.clone();
                self.ctx.forward_in_place(c.coeffs_mut());
                c
            })
            .collect()
    }

    /// `A v` with `A` and `v` both already in the NTT domain; result in coefficient form.
    fn mat_vec_ntt(&self, a_hat: &Matrix, v_hat: &[RingElement]) -> RingVector {
        a_hat
            .iter()
            .map(|row| {
                let mut acc = self.ctx.zero();
                for (aij, vj) in row.iter().zip(v_hat) {
                    self.ctx.pointwise_acc(&mut acc, aij, vj);
                }
                self.ctx.inverse_in_place(acc.coeffs_mut());
                acc
            })
            .collect()
    }

    /// `c * v` with `c` and `v` in the NTT domain; result in coefficient form.
    fn scale_ntt(&self, c_hat: &RingElement, v_hat: &[RingElement]) -> RingVector {
        v_hat
            .iter()
            .map(|e| {
                let mut p = self.ctx.pointwise(c_hat, e);
                self.ctx.inverse_in_place(p.coeffs_mut());
                p
            })
            .collect()
    }

    pub fn keygen(&self, seed: &[u8; 32]) -> KeyPair {
        let p = &self.params;
        let mut rho = [0u8; 32];
        let mut key = [0u8; 32];
        XofStream::new(seed, b"keygen/rho").fill(&mut rho).expect("unbounded stream");
        XofStream::new(seed, b"keygen/K").fill(&mut key).expect("unbounded stream");
        let mut s1_stream = XofStream::new(seed, b"keygen/s1");
        let s1: RingVector = (0..p.l)
            .map(|_| self.ctx.sample_bounded(&mut s1_stream, p.eta).expect("unbounded stream"))
            .collect();
        let mut s2_stream = XofStream::new(seed, b"keygen/s2");
        let s2: RingVector = (0..p.k)
            .map(|_| self.ctx.sample_bounded(&mut s2_stream, p.eta).expect("unbounded stream"))
            .collect();
        let a_hat = self.expand_a_ntt(&rho);
        let as1 = self.mat_vec_ntt(&a_hat, &self.ntt_vec(&s1));
        let t = self.ctx.add_vec(&as1, &s2).expect("matching lengths");
        KeyPair {
            pk: PublicKey { rho, t: t.clone() },
            sk: SecretKey { rho, key, s1, s2, t },
        }
    }

    fn challenge_for(&self, w1: &RingVector, msg: &[u8]) -> Challenge {
        let mut input = pack_high_bits(w1, self.w1_bits);
        input.extend_from_slice(msg);
        hash_to_challenge(&input, self.params.n, self.params.tau)
    }

    pub fn sign(&self, sk: &SecretKey, msg: &[u8]) -> Result<Signature, SchemeError> {
        self.sign_with_attempts(sk, msg).map(|(sig, _)| sig)
    }

    /// Signs and also reports how many attempts the rejection loop took.
    pub fn sign_with_attempts(
        &self,
        sk: &SecretKey,
        msg: &[u8],
    ) -> Result<(Signature, u32), SchemeError> {
        let p = &self.params;
        let a_hat = self.expand_a_ntt(&sk.rho);
        let s1_hat = self.ntt_vec(&sk.s1);
        let s2_hat = self.ntt_vec(&sk.s2);

        let mut seed = sk.key.to_vec();
        let mut digest = [0u8; 64];
        XofStream::new(msg, b"sign/digest").fill(&mut digest)?;
        seed.extend_from_slice(&digest);

        let z_bound = p.gamma1 - p.beta;
        let low_bound = p.gamma2 - p.beta;
        for attempt in 0..self.max_attempts {
            let mut tag = b"sign/y".to_vec();
            tag.extend_from_slice(&attempt.to_le_bytes());
            let mut stream = XofStream::new(&seed, &tag);
            let y: RingVector = (0..p.l)
                .map(|_| self.ctx.sample_bounded(&mut stream, p.gamma1 - 1))
                .collect::<Result<_, _>>()?;

            let w = self.mat_vec_ntt(&a_hat, &self.ntt_vec(&y));
            let w1 = self.decomposer.high_bits(&self.ctx, &w);
            let c = self.challenge_for(&w1, msg);
            let c_hat = self.ctx.ntt_forward(&c.to_element(&self.ctx))?;

            let z = self.ctx.add_vec(&y, &self.scale_ntt(&c_hat, &s1_hat))?;
            if inf_norm_vec(&z, p.q) >= z_bound {
                continue;
            }
            let r = self.ctx.sub_vec(&w, &self.scale_ntt(&c_hat, &s2_hat))?;
            if self.decomposer.low_norm(&r) >= low_bound {
                continue;
            }
            return Ok((Signature { z, c }, attempt + 1));
        }
        Err(SchemeError::MaxAttemptsExceeded(self.max_attempts))
    }

    pub fn verify(&self, pk: &PublicKey, msg: &[u8], sig: &Signature) -> bool {
        let p = &self.params;
        if sig.z.len() != p.l
            || sig.z.iter().any(|e| e.len() != p.n)
            || sig.c.coeffs().len() != p.n
            || !sig.c.is_in_ball(p.tau)
            || pk.t.len() != p.k
        {
            return false;
        }
        if inf_norm_vec(&sig.z, p.q) >= p.gamma1 - p.beta {
            return false;
        }
        let a_hat = self.expand_a_ntt(&pk.rho);
        let az = self.mat_vec_ntt(&a_hat, &self.ntt_vec(&sig.z));
        let c_hat = match self.ctx.ntt_forward(&sig.c.to_element(&self.ctx)) {
            Ok(c) => c,
            Err(_) => return false,
        };
        let ct = self.scale_ntt(&c_hat, &self.ntt_vec(&pk.t));
        let Ok(w) = self.ctx.sub_vec(&az, &ct) else {
            return false;
        };
        let w1 = self.decomposer.high_bits(&self.ctx, &w);
        self.challenge_for(&w1, msg) == sig.c
    }

    /// Decodes then verifies; decoding failures surface as
    /// [`SchemeError::MalformedSignature`] rather than a plain reject.
    pub fn verify_bytes(&self, pk: &PublicKey, msg: &[u8], sig: &[u8]) -> Result<bool, SchemeError> {
        let sig = self
            .decode_signature(sig)
            .map_err(|e| SchemeError::MalformedSignature(Box::new(e)))?;
        Ok(self.verify(pk, msg, &sig))
    }

    pub fn encode_public_key(&self, pk: &PublicKey) -> Vec<u8> {
        self.layout.encode_pk(pk)
    }

    pub fn decode_public_key(&self, bytes: &[u8]) -> Result<PublicKey, SchemeError> {
        self.layout.decode_pk(&self.ctx, bytes)
    }

    pub fn encode_secret_key(&self, sk: &SecretKey) -> Vec<u8> {
        self.layout.encode_sk(sk)
    }

    pub fn decode_secret_key(&self, bytes: &[u8]) -> Result<SecretKey, SchemeError> {
        self.layout.decode_sk(&self.ctx, bytes)
    }

    pub fn encode_signature(&self, sig: &Signature) -> Vec<u8> {
        self.layout.encode_sig(sig)
    }

    pub fn decode_signature(&self, bytes: &[u8]) -> Result<Signature, SchemeError> {
        self.layout.decode_sig(&self.ctx, bytes)
    }

    pub fn public_key_len(&self) -> usize {
        self.layout.pk_len()
    }

    pub fn secret_key_len(&self) -> usize {
        self.layout.sk_len()
    }

    pub fn signature_len(&self) -> usize {
        self.layout.sig_len()
    }

    /// Bits per coefficient of `z` in the signature encoding.
    pub fn z_bits(&self) -> u32 {
        self.layout.z_bits()
    }

    /// Bits per coefficient of `HighBits` output fed to `H`.
    pub fn w1_bits(&self) -> u32 {
        self.w1_bits
    }
}
