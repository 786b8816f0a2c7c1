//! Encoder and decoder.
//!
//! # Bitstream
//!
//! ```text
//! magic    8 bytes  "LAPPIX01" (the last two bytes are the version)
//! width    u32 LE
//! height   u32 LE
//! flags    u8       bits 0-1 chroma (0 mono, 1 4:2:0, 2 4:4:4)
//!                   bit 2 eight-point exterior lapping
//!                   bit 3 deringing off, bit 4 smoothing off
//!                   bits 5-7 zero
//! q        u16 LE   1..=512
//! payload           range coded symbols
//! ```
//!
//! Payload symbols, superblocks in raster order:
//!
//! 1. split flags of the luma quadtree, depth first;
//! 2. the deringing flag (unless deringing is off);
//! 3. for every leaf, luma leaves first, then Cb, then Cr: skip flag, intra
//!    mode (luma, not skipped), DC residual, then unless skipped every AC
//!    band: noref flag (when a predictor exists), gain index, and when
//!    coded against the predictor the chroma-from-luma sign (chroma only)
//!    and the angle index, then the pulses.

mod decoder;
mod encoder;
mod frame;

use alloc::vec::Vec;

pub use decoder::{analyze, decode, Analysis};
pub use encoder::{encode, encode_with_reconstruction};

use crate::entropy::EntropyError;
use crate::plane::{ChromaFormat, Image, PlaneError};
use crate::transform::LapConfig;

pub const MAGIC_PREFIX: &[u8; 6] = b"LAPPIX";
pub const VERSION: &[u8; 2] = b"01";
pub const HEADER_LEN: usize = 19;

pub const MIN_Q: u16 = 1;
pub const MAX_Q: u16 = 512;
/// Largest accepted width or height.
pub const MAX_DIMENSION: usize = 1 << 15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EncoderOptions {
    /// Quantizer step in internal units (16 per 8-bit sample step).
    pub q: u16,
    pub lap: LapConfig,
    pub dering: bool,
    pub smooth: bool,
}

impl EncoderOptions {
    pub fn new(q: u16) -> Self {
        EncoderOptions {
            q,
            lap: LapConfig::FourPoint,
            dering: true,
            smooth: true,
        }
    }
}

impl Default for EncoderOptions {
    fn default() -> Self {
        Self::new(32)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EncodeError {
    #[error("quantizer {0} outside 1..=512")]
    Quantizer(u16),
    #[error("image is {width}x{height}, limit is 32768 per side")]
    TooLarge { width: usize, height: usize },
    #[error(transparent)]
    Plane(#[from] PlaneError),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecodeError {
    #[error("bad magic")]
    BadMagic,
    #[error("unsupported version {0:?}")]
    UnsupportedVersion([u8; 2]),
    #[error("truncated")]
    Truncated,
    #[error("invalid header: {0}")]
    InvalidHeader(&'static str),
    #[error("invalid symbol")]
    InvalidSymbol,
}

impl From<EntropyError> for DecodeError {
    fn from(e: EntropyError) -> Self {
        match e {
            EntropyError::Truncated => DecodeError::Truncated,
            _ => DecodeError::InvalidSymbol,
        }
    }
}

/// Fixed-size frame header.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FrameHeader {
    pub width: u32,
    pub height: u32,
    pub format: ChromaFormat,
    pub lap: LapConfig,
    pub dering: bool,
    pub smooth: bool,
    pub q: u16,
}

impl FrameHeader {
    pub fn write(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(MAGIC_PREFIX);
        out.extend_from_slice(VERSION);
        out.extend_from_slice(&self.width.to_le_bytes());
        out.extend_from_slice(&self.height.to_le_bytes());
        let mut flags = match self.format {
            ChromaFormat::Mono => 0u8,
            ChromaFormat::Yuv420 => 1,
            ChromaFormat::Yuv444 => 2,
        };
        if self.lap == LapConfig::EightExterior {
            flags |= 1 << 2;
        }
        if !self.dering {
            flags |= 1 << 3;
        }
        if !self.smooth {
            flags |= 1 << 4;
        }
        out.push(flags);
        out.extend_from_slice(&self.q.to_le_bytes());
    }

    pub fn read(buf: &[u8]) -> Result<Self, DecodeError> {
        if buf.len() < MAGIC_PREFIX.len() {
            return Err(if MAGIC_PREFIX.starts_with(buf) {
                DecodeError::Truncated
            } else {
                DecodeError::BadMagic
            });
        }
        if &buf[..6] != MAGIC_PREFIX {
            return Err(DecodeError::BadMagic);
        }
        if buf.len() < HEADER_LEN {
            return Err(DecodeError::Truncated);
        }
        let version = [buf[6], buf[7]];
        if &version != VERSION {
            return Err(DecodeError::UnsupportedVersion(version));
        }
        let u32_at = |i: usize| u32::from_le_bytes([buf[i], buf[i + 1], buf[i + 2], buf[i + 3]]);
        let (width, height) = (u32_at(8), u32_at(12));
        let flags = buf[16];
        let q = u16::from_le_bytes([buf[17], buf[18]]);
        let format = match flags & 3 {
            0 => ChromaFormat::Mono,
            1 => ChromaFormat::Yuv420,
            2 => ChromaFormat::Yuv444,
            _ => return Err(DecodeError::InvalidHeader("chroma format")),
        };
        if flags >> 5 != 0 {
            return Err(DecodeError::InvalidHeader("reserved flags"));
        }
        if width == 0 || height == 0 {
            return Err(DecodeError::InvalidHeader("empty image"));
        }
        if width as usize > MAX_DIMENSION || height as usize > MAX_DIMENSION {
            return Err(DecodeError::InvalidHeader("dimensions"));
        }
        if !(MIN_Q..=MAX_Q).contains(&q) {
            return Err(DecodeError::InvalidHeader("quantizer"));
        }
        Ok(FrameHeader {
            width,
            height,
            format,
            lap: if flags & 4 != 0 {
                LapConfig::EightExterior
            } else {
                LapConfig::FourPoint
            },
            dering: flags & 8 == 0,
            smooth: flags & 16 == 0,
            q,
        })
    }
}

/// Per-plane and overall PSNR in dB; `f64::INFINITY` for identical data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Psnr {
    pub planes: [Option<f64>; 3],
    pub combined: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("images differ in size or format")]
pub struct DimensionMismatch;

fn psnr_from(sse: u64, count: u64) -> f64 {
    if sse == 0 {
        f64::INFINITY
    } else {
        let mse = sse as f64 / count as f64;
        10.0 * libm::log10(255.0 * 255.0 / mse)
    }
}

/// PSNR of `b` against `a`.
pub fn psnr(a: &Image, b: &Image) -> Result<Psnr, DimensionMismatch> {
    if a.format != b.format || a.width() != b.width() || a.height() != b.height() {
        return Err(DimensionMismatch);
    }
    let mut planes = [None; 3];
    let (mut total_sse, mut total_count) = (0u64, 0u64);
    for (i, (pa, pb)) in a.planes().zip(b.planes()).enumerate() {
        if pa.width() != pb.width() || pa.height() != pb.height() {
            return Err(DimensionMismatch);
        }
        let sse: u64 = pa
            .samples()
            .iter()
            .zip(pb.samples())
            .map(|(&x, &y)| {
                let d = x as i64 - y as i64;
                (d * d) as u64
            })
            .sum();
        let count = pa.samples().len() as u64;
        planes[i] = Some(psnr_from(sse, count));
        total_sse += sse;
        total_count += count;
    }
    Ok(Psnr {
        planes,
        combined: psnr_from(total_sse, total_count),
    })
}
