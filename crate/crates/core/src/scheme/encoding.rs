//! Little-endian bit packing and the v1 key/signature file formats.
//!
//! Every file starts with a 4-byte magic, a version byte and a params-id byte.
//!
//! ```text
//! pk  = "NDPK" | 01 | id | rho[32] | t  (ceil(log2 q) bits/coeff)
//! sk  = "NDSK" | 01 | id | rho[32] | K[32] | s1, s2 (eta - c in ceil(log2(2eta+1)) bits) | t
//! sig = "NDSG" | 01 | id | z (c + gamma1 - 1 in ceil(log2(2 gamma1)) bits)
//!                        | tau x (position: ceil(log2 n) bits, sign: 1 bit), positions increasing
//! ```
//!
//! Bit `i` of the packed stream is bit `i % 8` of byte `i / 8`; each field is
//! written least-significant bit first. Unused bits of the final byte are zero.

use super::{Challenge, PublicKey, SchemeError, SecretKey, Signature};
use crate::arith::bits_for;
use crate::ring::{mod_pm, RingContext, RingVector};

pub const FORMAT_VERSION: u8 = 1;
pub const PK_MAGIC: [u8; 4] = *b"NDPK";
pub const SK_MAGIC: [u8; 4] = *b"NDSK";
pub const SIG_MAGIC: [u8; 4] = *b"NDSG";
pub const HEADER_LEN: usize = 6;

#[derive(Default)]
pub struct BitWriter {
    out: Vec<u8>,
    acc: u64,
    nbits: u32,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn write(&mut self, value: u64, bits: u32) {
        debug_assert!(bits <= 56 && value >> bits == 0);
        self.acc |= value << self.nbits;
        self.nbits += bits;
        while self.nbits >= 8 {
            self.out.push(self.acc as u8);
            self.acc >>= 8;
            self.nbits -= 8;
        }
    }

    pub fn write_bytes(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.write(b as u64, 8);
        }
    }

    pub fn finish(mut self) -> Vec<u8> {
        if self.nbits > 0 {
            self.out.push(self.acc as u8);
        }
        self.out
    }
}

pub struct BitReader<'a> {
    data: &'a [u8],
    pos: usize,
    acc: u64,
    nbits: u32,
}

impl<'a> BitReader<'a> {
    pub fn new(data: &'a [u8]) -> Self {
        BitReader {
            data,
            pos: 0,
            acc: 0,
            nbits: 0,
        }
    }

    pub fn read(&mut self, bits: u32) -> Result<u64, SchemeError> {
        debug_assert!(bits <= 56);
        while self.nbits < bits {
            let b = *self.data.get(self.pos).ok_or(SchemeError::TruncatedInput)?;
            self.acc |= (b as u64) << self.nbits;
            self.nbits += 8;
            self.pos += 1;
        }
        let v = self.acc & ((1u64 << bits) - 1);
        self.acc >>= bits;
        self.nbits -= bits;
        Ok(v)
    }

    pub fn read_array<const N: usize>(&mut self) -> Result<[u8; N], SchemeError> {
        let mut out = [0u8; N];
        for b in out.iter_mut() {
            *b = self.read(8)? as u8;
        }
        Ok(out)
    }

    /// Fails unless all input is consumed and padding bits are zero.
    pub fn finish(self) -> Result<(), SchemeError> {
        if self.acc != 0 {
            return Err(SchemeError::NonCanonical("nonzero padding bits".into()));
        }
        if self.pos != self.data.len() {
            return Err(SchemeError::NonCanonical(format!(
                "{} trailing bytes",
                self.data.len() - self.pos
            )));
        }
        Ok(())
    }
}

/// Layout widths derived from one parameter set.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Layout {
    pub q: u64,
    pub n: usize,
    pub k: usize,
    pub l: usize,
    pub tau: usize,
    pub eta: u64,
    pub gamma1: u64,
    pub params_id: u8,
}

impl Layout {
    pub fn t_bits(&self) -> u32 {
        bits_for(self.q)
    }

    pub fn s_bits(&self) -> u32 {
        bits_for(2 * self.eta + 1)
    }

    pub fn z_bits(&self) -> u32 {
        bits_for(2 * self.gamma1)
    }

    pub fn pos_bits(&self) -> u32 {
        bits_for(self.n as u64)
    }

    pub fn pk_len(&self) -> usize {
        HEADER_LEN + 32 + (self.n * self.k * self.t_bits() as usize).div_ceil(8)
    }

    pub fn sig_len(&self) -> usize {
        let bits = self.n * self.l * self.z_bits() as usize + self.tau * (self.pos_bits() as usize + 1);
        HEADER_LEN + bits.div_ceil(8)
    }

    pub fn sk_len(&self) -> usize {
        let bits = self.n * (self.k + self.l) * self.s_bits() as usize
            + self.n * self.k * self.t_bits() as usize;
        HEADER_LEN + 64 + bits.div_ceil(8)
    }

    fn header(&self, w: &mut BitWriter, magic: [u8; 4]) {
        w.write_bytes(&magic);
        w.write_bytes(&[FORMAT_VERSION, self.params_id]);
    }

    fn check_header(&self, r: &mut BitReader<'_>, magic: [u8; 4]) -> Result<(), SchemeError> {
        let got: [u8; 4] = r.read_array()?;
        if got != magic {
            return Err(SchemeError::BadMagic(got));
        }
        let [version, id] = r.read_array::<2>()?;
        if version != FORMAT_VERSION {
            return Err(SchemeError::UnsupportedVersion(version));
        }
        if id != self.params_id {
            return Err(SchemeError::BadParamsId {
                expected: self.params_id,
                got: id,
            });
        }
        Ok(())
    }

    fn write_vec(&self, w: &mut BitWriter, v: &RingVector, bits: u32, enc: impl Fn(u64) -> u64) {
        for e in v.iter() {
            for &c in e.coeffs() {
                w.write(enc(c), bits);
            }
        }
    }

    fn read_vec(
        &self,
        r: &mut BitReader<'_>,
        ctx: &RingContext,
        len: usize,
        bits: u32,
        dec: impl Fn(u64) -> Option<u64>,
    ) -> Result<RingVector, SchemeError> {
        (0..len)
            .map(|_| {
                let coeffs = (0..self.n)
                    .map(|_| {
                        let raw = r.read(bits)?;
                        dec(raw).ok_or_else(|| {
                            SchemeError::NonCanonical(format!("coefficient encoding {raw} out of range"))
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(ctx.from_raw(coeffs))
            })
            .collect()
    }

    fn write_t(&self, w: &mut BitWriter, t: &RingVector) {
        self.write_vec(w, t, self.t_bits(), |c| c);
    }

    fn read_t(&self, r: &mut BitReader<'_>, ctx: &RingContext) -> Result<RingVector, SchemeError> {
        let q = self.q;
        self.read_vec(r, ctx, self.k, self.t_bits(), |v| (v < q).then_some(v))
    }

    fn write_small(&self, w: &mut BitWriter, v: &RingVector) {
        let (q, eta) = (self.q, self.eta as i64);
        self.write_vec(w, v, self.s_bits(), |c| (eta - mod_pm(c, q)) as u64);
    }

    fn read_small(
        &self,
        r: &mut BitReader<'_>,
        ctx: &RingContext,
        len: usize,
    ) -> Result<RingVector, SchemeError> {
        let m = *ctx.modulus();
        let eta = self.eta;
        self.read_vec(r, ctx, len, self.s_bits(), |v| {
            (v <= 2 * eta).then(|| m.from_i64(eta as i64 - v as i64))
        })
    }

    pub fn encode_pk(&self, pk: &PublicKey) -> Vec<u8> {
        let mut w = BitWriter::new();
        self.header(&mut w, PK_MAGIC);
        w.write_bytes(&pk.rho);
        self.write_t(&mut w, &pk.t);
        w.finish()
    }

    pub fn decode_pk(&self, ctx: &RingContext, bytes: &[u8]) -> Result<PublicKey, SchemeError> {
        let mut r = BitReader::new(bytes);
        self.check_header(&mut r, PK_MAGIC)?;
        let rho = r.read_array()?;
        let t = self.read_t(&mut r, ctx)?;
        r.finish()?;
        Ok(PublicKey { rho, t })
    }

    pub fn encode_sk(&self, sk: &SecretKey) -> Vec<u8> {
        let mut w = BitWriter::new();
        self.header(&mut w, SK_MAGIC);
        w.write_bytes(&sk.rho);
        w.write_bytes(&sk.key);
        self.write_small(&mut w, &sk.s1);
        self.write_small(&mut w, &sk.s2);
        self.write_t(&mut w, &sk.t);
        w.finish()
    }

    pub fn decode_sk(&self, ctx: &RingContext, bytes: &[u8]) -> Result<SecretKey, SchemeError> {
        let mut r = BitReader::new(bytes);
        self.check_header(&mut r, SK_MAGIC)?;
        let rho = r.read_array()?;
        let key = r.read_array()?;
        let s1 = self.read_small(&mut r, ctx, self.l)?;
        let s2 = self.read_small(&mut r, ctx, self.k)?;
        let t = self.read_t(&mut r, ctx)?;
        r.finish()?;
        Ok(SecretKey { rho, key, s1, s2, t })
    }

    pub fn encode_sig(&self, sig: &Signature) -> Vec<u8> {
        let mut w = BitWriter::new();
        self.header(&mut w, SIG_MAGIC);
        let (q, offset) = (self.q, self.gamma1 as i64 - 1);
        self.write_vec(&mut w, &sig.z, self.z_bits(), |c| (mod_pm(c, q) + offset) as u64);
        for (pos, negative) in sig.c.support() {
            w.write(pos as u64, self.pos_bits());
            w.write(negative as u64, 1);
        }
        w.finish()
    }

    pub fn decode_sig(&self, ctx: &RingContext, bytes: &[u8]) -> Result<Signature, SchemeError> {
        let mut r = BitReader::new(bytes);
        self.check_header(&mut r, SIG_MAGIC)?;
        let m = *ctx.modulus();
        let offset = self.gamma1 - 1;
        let z = self.read_vec(&mut r, ctx, self.l, self.z_bits(), |v| {
            (v <= 2 * offset).then(|| m.from_i64(v as i64 - offset as i64))
        })?;
        let mut coeffs = vec![0i8; self.n];
        let mut prev: Option<u64> = None;
        for _ in 0..self.tau {
            let pos = r.read(self.pos_bits())?;
            let negative = r.read(1)? == 1;
            if pos >= self.n as u64 || prev.is_some_and(|p| pos <= p) {
                return Err(SchemeError::NonCanonical(format!(
                    "challenge position {pos} not strictly increasing"
                )));
            }
            prev = Some(pos);
            coeffs[pos as usize] = if negative { -1 } else { 1 };
        }
        r.finish()?;
        Ok(Signature {
            z,
            c: Challenge::from_coeffs(coeffs),
        })
    }
}

/// Packs `HighBits` output at `width` bits per coefficient; injective because
/// every high part is below `2^width`.
pub(crate) fn pack_high_bits(w1: &RingVector, width: u32) -> Vec<u8> {
    let mut w = BitWriter::new();
    for e in w1.iter() {
        for &c in e.coeffs() {
            w.write(c, width);
        }
    }
    w.finish()
}
