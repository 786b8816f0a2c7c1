//! Adaptive multi-symbol range coder.
//!
//! The coder keeps a 32-bit range and a 33-bit low register with byte-wise
//! renormalization and deferred carry propagation. Probabilities are
//! expressed as integer frequencies whose total never exceeds
//! [`PROB_TOTAL`] (15 bits).

use alloc::vec;
use alloc::vec::Vec;

pub const PROB_BITS: u32 = 15;
pub const PROB_TOTAL: u32 = 1 << PROB_BITS;

const TOP: u32 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EntropyError {
    #[error("truncated")]
    Truncated,
    #[error("invalid symbol")]
    InvalidSymbol,
    #[error("value {value} does not fit in {nbits} bits")]
    ValueOutOfRange { value: u64, nbits: u32 },
}

/// Adaptive frequency table.
///
/// Each coded symbol adds `increment` to its frequency. Before the total
/// would exceed [`PROB_TOTAL`] every frequency is halved (rounding up, so
/// none reaches zero).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymbolModel {
    freqs: Vec<u16>,
    total: u32,
    increment: u16,
}

impl SymbolModel {
    pub const DEFAULT_INCREMENT: u16 = 32;

    /// Adaptive model over `n` symbols starting from a flat distribution.
    pub fn new(n: usize) -> Self {
        Self::with_increment(n, Self::DEFAULT_INCREMENT)
    }

    /// Flat model that never adapts.
    pub fn uniform(n: usize) -> Self {
        Self::with_increment(n, 0)
    }

    pub fn with_increment(n: usize, increment: u16) -> Self {
        assert!(n >= 1 && n as u32 * 16 <= PROB_TOTAL, "alphabet size {n}");
        SymbolModel {
            freqs: vec![16; n],
            total: 16 * n as u32,
            increment,
        }
    }

    pub fn len(&self) -> usize {
        self.freqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freqs.is_empty()
    }

    pub fn total(&self) -> u32 {
        self.total
    }

    pub fn freq(&self, symbol: usize) -> u32 {
        self.freqs[symbol] as u32
    }

    fn cumulative(&self, symbol: usize) -> u32 {
        self.freqs[..symbol].iter().map(|&f| f as u32).sum()
    }

    fn update(&mut self, symbol: usize) {
        if self.increment == 0 {
            return;
        }
        let inc = self.increment as u32;
        if self.total + inc > PROB_TOTAL {
            self.total = 0;
            for f in self.freqs.iter_mut() {
                *f = (*f + 1) >> 1;
                self.total += *f as u32;
            }
        }
        self.freqs[symbol] += self.increment;
        self.total += inc;
    }

    /// FNV-1a digest of the adaptive state.
    pub fn checksum(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for &f in &self.freqs {
            for b in f.to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x0100_0000_01b3);
            }
        }
        h
    }
}

#[derive(Debug, Clone)]
pub struct RangeEncoder {
    low: u64,
    range: u32,
    cache: u8,
    cache_size: u64,
    out: Vec<u8>,
}

impl Default for RangeEncoder {
    fn default() -> Self {
        Self::new()
    }
}

impl RangeEncoder {
    pub fn new() -> Self {
        RangeEncoder {
            low: 0,
            range: u32::MAX,
            cache: 0,
            cache_size: 1,
            out: Vec::new(),
        }
    }

    /// Code the interval `[cum, cum + freq)` out of `total`. The last
    /// symbol of an alphabet absorbs the division remainder.
    fn encode_interval(&mut self, cum: u32, freq: u32, total: u32) {
        debug_assert!(freq > 0 && cum + freq <= total && total <= PROB_TOTAL);
        let r = self.range / total;
        self.low += r as u64 * cum as u64;
        if cum + freq < total {
            self.range = r * freq;
        } else {
            self.range -= r * cum;
        }
        while self.range < TOP {
            self.range <<= 8;
            self.shift_low();
        }
    }

    fn shift_low(&mut self) {
        if self.low < 0xFF00_0000 || self.low >= 1 << 32 {
            let carry = (self.low >> 32) as u8;
            let mut byte = self.cache;
            loop {
                self.out.push(byte.wrapping_add(carry));
                byte = 0xFF;
                self.cache_size -= 1;
                if self.cache_size == 0 {
                    break;
                }
            }
            self.cache = (self.low >> 24) as u8;
        }
        self.cache_size += 1;
        self.low = (self.low & 0x00FF_FFFF) << 8;
    }

    pub fn encode_symbol(&mut self, model: &mut SymbolModel, symbol: usize) {
        let cum = model.cumulative(symbol);
        self.encode_interval(cum, model.freq(symbol), model.total());
        model.update(symbol);
    }

    pub fn encode_bool(&mut self, model: &mut SymbolModel, bit: bool) {
        self.encode_symbol(model, bit as usize);
    }

    /// Equiprobable symbol in `[0, n)`, `n <= 2^15`.
    pub fn encode_uniform(&mut self, value: u32, n: u32) {
        debug_assert!(value < n && n <= PROB_TOTAL);
        if n > 1 {
            self.encode_interval(value, 1, n);
        }
    }

    /// Raw bits, most significant chunk first.
    pub fn encode_bits(&mut self, value: u64, nbits: u32) -> Result<(), EntropyError> {
        if nbits < 64 && value >> nbits != 0 {
            return Err(EntropyError::ValueOutOfRange { value, nbits });
        }
        let mut left = nbits;
        while left > 0 {
            let n = left.min(PROB_BITS);
            left -= n;
            let chunk = ((value >> left) & ((1 << n) - 1)) as u32;
            self.encode_interval(chunk, 1, 1 << n);
        }
        Ok(())
    }

    /// Uniformly distributed integer in `[0, bound)`.
    pub fn encode_uint(&mut self, value: u128, bound: u128) {
        debug_assert!(value < bound);
        if bound <= 1 {
            return;
        }
        let ft = bound - 1;
        let bits = 128 - ft.leading_zeros();
        if bits <= PROB_BITS {
            self.encode_uniform(value as u32, bound as u32);
        } else {
            let shift = bits - PROB_BITS;
            self.encode_uniform((value >> shift) as u32, (ft >> shift) as u32 + 1);
            let low = value & ((1u128 << shift) - 1);
            let mut left = shift;
            while left > 0 {
                let n = left.min(60);
                left -= n;
                self.encode_bits(((low >> left) as u64) & ((1u64 << n) - 1), n)
                    .expect("masked");
            }
        }
    }

    /// Bytes produced so far, not counting the pending carry bytes.
    pub fn len(&self) -> usize {
        self.out.len()
    }

    pub fn is_empty(&self) -> bool {
        self.out.is_empty()
    }

    pub fn finish(mut self) -> Vec<u8> {
        for _ in 0..5 {
            self.shift_low();
        }
        self.out
    }
}

#[derive(Debug, Clone)]
pub struct RangeDecoder<'a> {
    code: u32,
    range: u32,
    buf: &'a [u8],
    pos: usize,
}

impl<'a> RangeDecoder<'a> {
    pub fn new(buf: &'a [u8]) -> Result<Self, EntropyError> {
        let mut dec = RangeDecoder {
            code: 0,
            range: u32::MAX,
            buf,
            pos: 0,
        };
        if dec.next_byte()? != 0 {
            return Err(EntropyError::InvalidSymbol);
        }
        for _ in 0..4 {
            dec.code = (dec.code << 8) | dec.next_byte()? as u32;
        }
        if dec.code == u32::MAX {
            return Err(EntropyError::InvalidSymbol);
        }
        Ok(dec)
    }

    fn next_byte(&mut self) -> Result<u8, EntropyError> {
        let b = *self.buf.get(self.pos).ok_or(EntropyError::Truncated)?;
        self.pos += 1;
        Ok(b)
    }

    /// Position of the coded target within `[0, total)`.
    fn target(&mut self, total: u32) -> (u32, u32) {
        let r = self.range / total;
        ((self.code / r).min(total - 1), r)
    }

    fn consume(&mut self, r: u32, cum: u32, freq: u32, total: u32) -> Result<(), EntropyError> {
        self.code -= r * cum;
        if cum + freq < total {
            self.range = r * freq;
        } else {
            self.range -= r * cum;
        }
        while self.range < TOP {
            self.code = (self.code << 8) | self.next_byte()? as u32;
            self.range <<= 8;
        }
        if self.code >= self.range {
            return Err(EntropyError::InvalidSymbol);
        }
        Ok(())
    }

    pub fn decode_symbol(&mut self, model: &mut SymbolModel) -> Result<usize, EntropyError> {
        let total = model.total();
        let (v, r) = self.target(total);
        let mut cum = 0;
        let mut symbol = 0;
        loop {
            let f = model.freq(symbol);
            if v < cum + f {
                break;
            }
            cum += f;
            symbol += 1;
        }
        self.consume(r, cum, model.freq(symbol), total)?;
        model.update(symbol);
        Ok(symbol)
    }

    pub fn decode_bool(&mut self, model: &mut SymbolModel) -> Result<bool, EntropyError> {
        Ok(self.decode_symbol(model)? != 0)
    }

    pub fn decode_uniform(&mut self, n: u32) -> Result<u32, EntropyError> {
        if n <= 1 {
            return Ok(0);
        }
        let (v, r) = self.target(n);
        self.consume(r, v, 1, n)?;
        Ok(v)
    }

    pub fn decode_bits(&mut self, nbits: u32) -> Result<u64, EntropyError> {
        let mut value = 0u64;
        let mut left = nbits;
        while left > 0 {
            let n = left.min(PROB_BITS);
            left -= n;
            value = (value << n) | self.decode_uniform(1 << n)? as u64;
        }
        Ok(value)
    }

    pub fn decode_uint(&mut self, bound: u128) -> Result<u128, EntropyError> {
        if bound <= 1 {
            return Ok(0);
        }
        let ft = bound - 1;
        let bits = 128 - ft.leading_zeros();
        if bits <= PROB_BITS {
            return Ok(self.decode_uniform(bound as u32)? as u128);
        }
        let shift = bits - PROB_BITS;
        let mut value = self.decode_uniform((ft >> shift) as u32 + 1)? as u128;
        let mut left = shift;
        while left > 0 {
            let n = left.min(60);
            left -= n;
            value = (value << n) | self.decode_bits(n)? as u128;
        }
        if value > ft {
            return Err(EntropyError::InvalidSymbol);
        }
        Ok(value)
    }

    /// Bytes consumed so far.
    pub fn position(&self) -> usize {
        self.pos
    }
}

/// Unbounded non-negative integers: an adaptive head symbol for small
/// values, an escape followed by an Elias-gamma style tail otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UintModel {
    head: SymbolModel,
}

impl UintModel {
    const ESCAPE: usize = 15;

    pub fn new() -> Self {
        UintModel {
            head: SymbolModel::new(Self::ESCAPE + 1),
        }
    }

    pub fn encode(&mut self, enc: &mut RangeEncoder, value: u64) {
        if value < Self::ESCAPE as u64 {
            enc.encode_symbol(&mut self.head, value as usize);
            return;
        }
        enc.encode_symbol(&mut self.head, Self::ESCAPE);
        let rest = value - Self::ESCAPE as u64 + 1;
        let len = 64 - rest.leading_zeros();
        enc.encode_uniform(len - 1, 64);
        enc.encode_bits(rest & !(1 << (len - 1)), len - 1)
            .expect("masked");
    }

    pub fn decode(&mut self, dec: &mut RangeDecoder<'_>) -> Result<u64, EntropyError> {
        let head = dec.decode_symbol(&mut self.head)?;
        if head < Self::ESCAPE {
            return Ok(head as u64);
        }
        let len = dec.decode_uniform(64)? + 1;
        let rest = (1u64 << (len - 1)) | dec.decode_bits(len - 1)?;
        rest.checked_add(Self::ESCAPE as u64 - 1)
            .ok_or(EntropyError::InvalidSymbol)
    }

    pub fn checksum(&self) -> u64 {
        self.head.checksum()
    }
}

impl Default for UintModel {
    fn default() -> Self {
        Self::new()
    }
}
