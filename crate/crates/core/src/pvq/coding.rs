//! Entropy coding of quantized bands.

use alloc::vec::Vec;

use super::{codebook_bits, derive_params, pvq_decode_index, pvq_encode_index, ActivityParams, PvqBand};
use crate::entropy::{EntropyError, RangeDecoder, RangeEncoder, SymbolModel, UintModel};

// Direct enumeration is used while the codebook comfortably fits a u128.
const MAX_DIRECT_BITS: f64 = 120.0;

fn direct(n: usize, k: u32) -> bool {
    n <= 1 || codebook_bits(n, k) < MAX_DIRECT_BITS
}

/// Code a pulse vector whose L1 norm `k` is known to the decoder. Large
/// codebooks are split in half: the pulse count of the first half is sent
/// uniformly and each half is coded recursively.
pub fn encode_pulses(enc: &mut RangeEncoder, pulses: &[i32], k: u32) {
    let n = pulses.len();
    if k == 0 || n == 0 {
        return;
    }
    if direct(n, k) {
        let size = super::pvq_codebook_size(n, k).expect("fits");
        let index = pvq_encode_index(pulses, k).expect("norm matches");
        enc.encode_uint(index, size);
        return;
    }
    let (a, b) = pulses.split_at(n / 2);
    let ka: u32 = a.iter().map(|p| p.unsigned_abs()).sum();
    enc.encode_uniform(ka, k + 1);
    encode_pulses(enc, a, ka);
    encode_pulses(enc, b, k - ka);
}

pub fn decode_pulses(dec: &mut RangeDecoder<'_>, n: usize, k: u32) -> Result<Vec<i32>, EntropyError> {
    if k == 0 || n == 0 {
        return Ok(alloc::vec![0; n]);
    }
    if direct(n, k) {
        let size = super::pvq_codebook_size(n, k).ok_or(EntropyError::InvalidSymbol)?;
        let index = dec.decode_uint(size)?;
        return pvq_decode_index(index, n, k).map_err(|_| EntropyError::InvalidSymbol);
    }
    let ka = dec.decode_uniform(k + 1)?;
    let mut out = decode_pulses(dec, n / 2, ka)?;
    out.extend(decode_pulses(dec, n - n / 2, k - ka)?);
    Ok(out)
}

/// Adaptive contexts for one class of band (plane type, block size, band
/// index).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BandModels {
    gain: UintModel,
    noref: Option<SymbolModel>,
}

impl BandModels {
    pub fn new() -> Self {
        Self::default()
    }

    fn noref_model(&mut self) -> &mut SymbolModel {
        self.noref.get_or_insert_with(|| SymbolModel::new(2))
    }

    /// Write one band. `has_prediction` and `cfl` must match what the
    /// decoder will know before reading the band.
    #[allow(clippy::too_many_arguments)]
    pub fn encode(
        &mut self,
        enc: &mut RangeEncoder,
        band: &PvqBand,
        n: usize,
        has_prediction: bool,
        cfl: bool,
        q: f64,
        act: &ActivityParams,
    ) {
        if has_prediction {
            enc.encode_bool(self.noref_model(), band.noref);
        }
        self.gain.encode(enc, band.gain_index as u64);
        if band.gain_index == 0 {
            return;
        }
        let with_ref = has_prediction && !band.noref;
        let theta = if with_ref {
            if cfl {
                enc.encode_uniform((band.cfl_sign < 0) as u32, 2);
            }
            let levels = derive_params(band.gain_index, Some(0), n, q, act).theta_levels;
            enc.encode_uint(band.theta_index as u128, levels as u128 + 1);
            Some(band.theta_index)
        } else {
            None
        };
        let params = derive_params(band.gain_index, theta, n, q, act);
        encode_pulses(enc, &band.pulses, params.k);
    }

    pub fn decode(
        &mut self,
        dec: &mut RangeDecoder<'_>,
        n: usize,
        has_prediction: bool,
        cfl: bool,
        q: f64,
        act: &ActivityParams,
    ) -> Result<PvqBand, EntropyError> {
        let noref = if has_prediction {
            dec.decode_bool(self.noref_model())?
        } else {
            true
        };
        let gain_index =
            u32::try_from(self.gain.decode(dec)?).map_err(|_| EntropyError::InvalidSymbol)?;
        let mut band = PvqBand::zero(noref);
        band.gain_index = gain_index;
        if gain_index == 0 {
            return Ok(band);
        }
        let theta = if !noref {
            if cfl {
                band.cfl_sign = if dec.decode_uniform(2)? == 1 { -1 } else { 1 };
            }
            let levels = derive_params(gain_index, Some(0), n, q, act).theta_levels;
            let t = dec.decode_uint(levels as u128 + 1)?;
            band.theta_index = t as u32;
            Some(band.theta_index)
        } else {
            None
        };
        let params = derive_params(gain_index, theta, n, q, act);
        if params.k > 0 {
            let dims = if noref { n } else { n - 1 };
            band.pulses = decode_pulses(dec, dims, params.k)?;
        }
        Ok(band)
    }
}
