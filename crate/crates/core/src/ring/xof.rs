use sha3::digest::{ExtendableOutput, Update, XofReader};
use sha3::{Shake256, Shake256Reader};

use super::RingError;

const DOMAIN: &[u8] = b"ntt-dilithium/xof/v1";

/// Deterministic SHAKE256 byte stream keyed by `(seed, tag)`.
///
/// The absorbed input is `DOMAIN || len(tag) as u16-le || tag || seed`, so
/// distinct tags never collide regardless of seed length. Bits are consumed
/// least-significant first within each byte.
pub struct XofStream {
    reader: Shake256Reader,
    buf: [u8; 136],
    pos: usize,
    bit_acc: u64,
    bit_len: u32,
    consumed: u64,
    limit: Option<u64>,
}

impl XofStream {
    pub fn new(seed: &[u8], tag: &[u8]) -> Self {
        let tag_len = u16::try_from(tag.len()).expect("tag longer than 64 KiB");
        let mut h = Shake256::default();
        h.update(DOMAIN);
        h.update(&tag_len.to_le_bytes());
        h.update(tag);
        h.update(seed);
        XofStream {
            reader: h.finalize_xof(),
            buf: [0; 136],
            pos: 136,
            bit_acc: 0,
            bit_len: 0,
            consumed: 0,
            limit: None,
        }
    }

    /// Caps the number of bytes the stream will hand out. Only useful for
    /// exercising exhaustion handling; real streams are unbounded.
    pub fn with_limit(mut self, bytes: u64) -> Self {
        self.limit = Some(bytes);
        self
    }

    pub fn bytes_consumed(&self) -> u64 {
        self.consumed
    }

    pub fn next_byte(&mut self) -> Result<u8, RingError> {
        if let Some(limit) = self.limit {
            if self.consumed >= limit {
                return Err(RingError::StreamExhausted(limit));
            }
        }
        if self.pos == self.buf.len() {
            self.reader.read(&mut self.buf);
            self.pos = 0;
        }
        let b = self.buf[self.pos];
        self.pos += 1;
        self.consumed += 1;
        Ok(b)
    }

    pub fn fill(&mut self, out: &mut [u8]) -> Result<(), RingError> {
        for b in out.iter_mut() {
            *b = self.next_byte()?;
        }
        Ok(())
    }

    /// Next `bits` bits (at most 57) as an integer, little-endian bit order.
    pub fn next_bits(&mut self, bits: u32) -> Result<u64, RingError> {
        assert!(bits <= 57, "chunk width {bits} too large");
        while self.bit_len < bits {
            let b = self.next_byte()? as u64;
            self.bit_acc |= b << self.bit_len;
            self.bit_len += 8;
        }
        let v = if bits == 0 {
            0
        } else {
            self.bit_acc & ((1u64 << bits) - 1)
        };
        self.bit_acc >>= bits;
        self.bit_len -= bits;
        Ok(v)
    }

    /// Uniform integer in `[0, bound)` by rejection from `ceil(log2 bound)`-bit chunks.
    pub fn uniform_below(&mut self, bound: u64) -> Result<u64, RingError> {
        assert!(bound > 0);
        let bits = crate::arith::bits_for(bound);
        loop {
            let v = self.next_bits(bits)?;
            if v < bound {
                return Ok(v);
            }
        }
    }
}
