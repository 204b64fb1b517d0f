//! Counter-based randomness.
//!
//! Every random draw in the crate is a pure function of `(seed, stream, index)`:
//! the seed is the Philox key, and the 128-bit counter carries the draw index
//! and the stream identifier. Draws therefore do not depend on evaluation
//! order, and trials are independent streams that can be added without
//! reshuffling earlier ones.

use rand::RngCore;

const PHILOX_M0: u32 = 0xD251_1F53;
const PHILOX_M1: u32 = 0xCD9E_8D57;
const PHILOX_W0: u32 = 0x9E37_79B9;
const PHILOX_W1: u32 = 0xBB67_AE85;

#[inline(always)]
fn mulhilo(a: u32, b: u32) -> (u32, u32) {
    let prod = u64::from(a) * u64::from(b);
    ((prod >> 32) as u32, prod as u32)
}

/// Philox4x32 with 10 rounds.
#[inline]
pub fn philox4x32_10(mut ctr: [u32; 4], mut key: [u32; 2]) -> [u32; 4] {
    for round in 0..10 {
        if round > 0 {
            key[0] = key[0].wrapping_add(PHILOX_W0);
            key[1] = key[1].wrapping_add(PHILOX_W1);
        }
        let (hi0, lo0) = mulhilo(PHILOX_M0, ctr[0]);
        let (hi1, lo1) = mulhilo(PHILOX_M1, ctr[2]);
        ctr = [hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0];
    }
    ctr
}

/// Purpose tag mixed into the counter so unrelated consumers sharing a seed
/// never see the same words.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u16)]
pub enum Domain {
    Edges = 0,
    Bernoulli = 1,
    Orders = 2,
}

const STREAM_BITS: u32 = 48;

/// Keyed family of random words addressed by `(stream, index)`.
#[derive(Clone, Copy, Debug)]
pub struct CounterRng {
    key: [u32; 2],
    stream_lo: u32,
    stream_hi: u32,
}

impl CounterRng {
    /// `stream` must fit in 48 bits; the top 16 bits of the counter hold the domain tag.
    pub fn new(seed: u64, domain: Domain, stream: u64) -> Self {
        assert!(stream < (1 << STREAM_BITS), "stream id exceeds 48 bits");
        let tagged = stream | ((domain as u64) << STREAM_BITS);
        CounterRng {
            key: [seed as u32, (seed >> 32) as u32],
            stream_lo: tagged as u32,
            stream_hi: (tagged >> 32) as u32,
        }
    }

    #[inline]
    pub fn block(&self, index: u64) -> [u32; 4] {
        philox4x32_10(
            [index as u32, (index >> 32) as u32, self.stream_lo, self.stream_hi],
            self.key,
        )
    }

    #[inline]
    pub fn word(&self, index: u64) -> u64 {
        let b = self.block(index);
        u64::from(b[0]) | (u64::from(b[1]) << 32)
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    #[inline]
    pub fn uniform(&self, index: u64) -> f64 {
        (self.word(index) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// `true` with probability `p`; exact for `p = 0` and `p = 1`.
    #[inline]
    pub fn bernoulli(&self, index: u64, p: f64) -> bool {
        self.uniform(index) < p
    }

    pub fn sequential(self) -> CounterStream {
        CounterStream {
            rng: self,
            next: 0,
            spare: None,
        }
    }
}

/// Sequential view over a [`CounterRng`] stream, for consumers that want an
/// ordinary [`RngCore`].
#[derive(Clone, Debug)]
pub struct CounterStream {
    rng: CounterRng,
    next: u64,
    spare: Option<u64>,
}

impl CounterStream {
    pub fn new(seed: u64, domain: Domain, stream: u64) -> Self {
        CounterRng::new(seed, domain, stream).sequential()
    }
}

impl RngCore for CounterStream {
    fn next_u32(&mut self) -> u32 {
        self.next_u64() as u32
    }

    fn next_u64(&mut self) -> u64 {
        if let Some(w) = self.spare.take() {
            return w;
        }
        let b = self.rng.block(self.next);
        self.next += 1;
        self.spare = Some(u64::from(b[2]) | (u64::from(b[3]) << 32));
        u64::from(b[0]) | (u64::from(b[1]) << 32)
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        for chunk in dst.chunks_mut(8) {
            let w = self.next_u64().to_le_bytes();
            chunk.copy_from_slice(&w[..chunk.len()]);
        }
    }
}
