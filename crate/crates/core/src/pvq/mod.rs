//! Gain-shape vector quantization of AC bands.
//!
//! A band is coded as a companded gain, then (when a predictor is used) the
//! angle between the band and the predictor after a Householder reflection
//! has moved the predictor onto a coordinate axis, then a pulse vector from
//! the pyramid codebook for the remaining direction. All math here works on
//! orthonormally scaled coefficients.

mod bands;
mod codebook;
mod coding;

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

pub use bands::{band_count, band_layout};
pub use codebook::{codebook_bits, pvq_codebook_size, pvq_decode_index, pvq_encode_index};
pub use coding::{decode_pulses, encode_pulses, BandModels};

/// Companding exponent used when activity masking is on.
pub const MASKING_EXPONENT: f64 = 1.5;

/// Upper bound on pulses per band.
pub const MAX_PULSES: u32 = 1024;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PvqError {
    #[error("pulse vector norm does not match K")]
    NormMismatch,
    #[error("codebook index out of range")]
    IndexOutOfRange,
    #[error("codebook size overflows 128 bits")]
    Overflow,
}

/// Activity masking parameters for one block size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActivityParams {
    pub masking_exponent: f64,
    pub enabled: bool,
}

impl ActivityParams {
    /// Masking is off for 4x4 blocks.
    pub fn for_block_size(n: usize) -> Self {
        ActivityParams {
            masking_exponent: MASKING_EXPONENT,
            enabled: n > 4,
        }
    }

    pub fn disabled() -> Self {
        ActivityParams {
            masking_exponent: MASKING_EXPONENT,
            enabled: false,
        }
    }

    fn beta(&self) -> f64 {
        if self.enabled {
            self.masking_exponent
        } else {
            1.0
        }
    }

    /// Step in the companded domain. Chosen so that the reconstructed
    /// gain step equals `q` at gain `q`.
    fn companded_step(&self, q: f64) -> f64 {
        let b = self.beta();
        libm::pow(q, 1.0 / b) / b
    }
}

/// Companded gain index: `round(g^(1/beta) / s)`.
pub fn activity_gain_compand(g: f64, q: f64, act: &ActivityParams) -> u32 {
    let b = act.beta();
    let v = libm::pow(g, 1.0 / b) / act.companded_step(q);
    libm::round(v) as u32
}

/// Reconstructed gain `(s * index)^beta`.
pub fn activity_gain_expand(index: u32, q: f64, act: &ActivityParams) -> f64 {
    expand_real(index as f64, q, act)
}

fn expand_real(index: f64, q: f64, act: &ActivityParams) -> f64 {
    libm::pow(act.companded_step(q) * index, act.beta())
}

/// Width of the gain quantization cell around `index`; the effective
/// quantizer for angle and shape at that gain.
pub fn effective_step(index: u32, q: f64, act: &ActivityParams) -> f64 {
    let i = index as f64;
    expand_real(i + 0.5, q, act) - expand_real((i - 0.5).max(0.0), q, act)
}

/// Number of angle intervals over `[0, pi/2]` at a gain index.
pub fn theta_levels(gain_index: u32, q: f64, act: &ActivityParams) -> u32 {
    let g = activity_gain_expand(gain_index, q, act);
    let step = effective_step(gain_index, q, act);
    (libm::round(FRAC_PI_2 * g / step) as u32).max(1)
}

pub fn theta_value(theta_index: u32, levels: u32) -> f64 {
    FRAC_PI_2 * theta_index as f64 / levels as f64
}

/// Pulse budget for a shape of `dims` dimensions on a sphere of radius
/// `radius`. Monotone in the radius.
pub fn pulse_count(radius: f64, dims: usize, step: f64) -> u32 {
    if radius <= 0.0 || dims == 0 {
        return 0;
    }
    let k = libm::round(radius * libm::sqrt(dims as f64) / step);
    (k as u32).clamp(1, MAX_PULSES)
}

/// Householder reflection taking a prediction onto a signed axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Reflection {
    v: Vec<f64>,
    vv: f64,
    /// Axis the prediction lands on.
    pub axis: usize,
    /// Sign of that axis: the reflected prediction is `sign * |r| * e_axis`.
    pub sign: f64,
}

impl Reflection {
    /// `None` for an all-zero prediction.
    pub fn new(prediction: &[f64]) -> Option<Self> {
        let norm = libm::sqrt(prediction.iter().map(|r| r * r).sum::<f64>());
        if norm == 0.0 {
            return None;
        }
        let mut axis = 0;
        for (i, r) in prediction.iter().enumerate() {
            if r.abs() > prediction[axis].abs() {
                axis = i;
            }
        }
        let s = if prediction[axis] >= 0.0 { 1.0 } else { -1.0 };
        let mut v: Vec<f64> = prediction.iter().map(|r| r / norm).collect();
        v[axis] += s;
        let vv = v.iter().map(|x| x * x).sum();
        Some(Reflection {
            v,
            vv,
            axis,
            sign: -s,
        })
    }

    /// Apply the reflection in place. The reflection is its own inverse.
    pub fn apply(&self, x: &mut [f64]) {
        let dot: f64 = x.iter().zip(&self.v).map(|(a, b)| a * b).sum();
        let f = 2.0 * dot / self.vv;
        for (xi, vi) in x.iter_mut().zip(&self.v) {
            *xi -= f * vi;
        }
    }
}

/// Reflect `band` with the reflection that takes `prediction` onto an axis.
pub fn householder_reflect(band: &[f64], prediction: &[f64]) -> Option<(Vec<f64>, Reflection)> {
    let r = Reflection::new(prediction)?;
    let mut out = band.to_vec();
    r.apply(&mut out);
    Some((out, r))
}

/// Integer vector with `Σ|y| == k` closest in angle to `target`.
pub fn pvq_search(target: &[f64], k: u32) -> Vec<i32> {
    let n = target.len();
    let mut y = vec![0i32; n];
    if k == 0 || n == 0 {
        return y;
    }
    let abs: Vec<f64> = target.iter().map(|v| v.abs()).collect();
    let sum: f64 = abs.iter().sum();
    let mut placed = 0u32;
    if sum > 0.0 {
        let scale = k as f64 / sum;
        for (yi, a) in y.iter_mut().zip(&abs) {
            *yi = libm::floor(a * scale) as i32;
            placed += *yi as u32;
        }
    }
    if placed > k {
        // Rounding pushed the projection over budget; restart from zero.
        y.iter_mut().for_each(|v| *v = 0);
        placed = 0;
    }
    let mut xy: f64 = y.iter().zip(&abs).map(|(&yi, a)| yi as f64 * a).sum();
    let mut yy: f64 = y.iter().map(|&yi| (yi as f64) * (yi as f64)).sum();
    while placed < k {
        let mut best = 0;
        let mut best_num = -1.0;
        let mut best_den = 1.0;
        for i in 0..n {
            let num = (xy + abs[i]) * (xy + abs[i]);
            let den = yy + 2.0 * y[i] as f64 + 1.0;
            if num * best_den > best_num * den {
                best = i;
                best_num = num;
                best_den = den;
            }
        }
        xy += abs[best];
        yy += 2.0 * y[best] as f64 + 1.0;
        y[best] += 1;
        placed += 1;
    }
    for (yi, t) in y.iter_mut().zip(target) {
        if *t < 0.0 {
            *yi = -*yi;
        }
    }
    y
}

/// One quantized band.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PvqBand {
    pub gain_index: u32,
    pub theta_index: u32,
    /// Pulse vector; length N-1 with a predictor, N without.
    pub pulses: Vec<i32>,
    /// True when the band is coded without a predictor.
    pub noref: bool,
    /// Sign applied to a chroma-from-luma predictor, 0 when unused.
    pub cfl_sign: i8,
}

impl PvqBand {
    pub fn zero(noref: bool) -> Self {
        PvqBand {
            gain_index: 0,
            theta_index: 0,
            pulses: Vec::new(),
            noref,
            cfl_sign: 0,
        }
    }

    pub fn k(&self) -> u32 {
        self.pulses.iter().map(|p| p.unsigned_abs()).sum()
    }
}

/// Parameters the decoder derives from the gain (and angle).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedParams {
    pub gain: f64,
    pub theta_levels: u32,
    pub k: u32,
}

/// Decoder-side derivation of the angle resolution and pulse budget.
pub fn derive_params(
    gain_index: u32,
    theta_index: Option<u32>,
    n: usize,
    q: f64,
    act: &ActivityParams,
) -> DerivedParams {
    let gain = activity_gain_expand(gain_index, q, act);
    if gain_index == 0 {
        return DerivedParams {
            gain,
            theta_levels: 0,
            k: 0,
        };
    }
    let step = effective_step(gain_index, q, act);
    match theta_index {
        None => DerivedParams {
            gain,
            theta_levels: 0,
            k: pulse_count(gain, n, step),
        },
        Some(t) => {
            let levels = theta_levels(gain_index, q, act);
            let radius = gain * libm::sin(theta_value(t, levels));
            let k = if t == 0 {
                0
            } else {
                pulse_count(radius, n - 1, step)
            };
            DerivedParams {
                gain,
                theta_levels: levels,
                k,
            }
        }
    }
}

fn unit(pulses: &[i32]) -> Vec<f64> {
    let norm = libm::sqrt(pulses.iter().map(|&p| (p as f64) * (p as f64)).sum::<f64>());
    pulses.iter().map(|&p| p as f64 / norm).collect()
}

/// Reconstruct a band. `prediction` must be the one used by the encoder and
/// is ignored for noref bands.
pub fn dequantize_band(
    pb: &PvqBand,
    n: usize,
    prediction: Option<&[f64]>,
    q: f64,
    act: &ActivityParams,
) -> Result<Vec<f64>, PvqError> {
    let reflection = match (pb.noref, prediction) {
        (false, Some(p)) => Some(Reflection::new(p).ok_or(PvqError::NormMismatch)?),
        _ => None,
    };
    let theta = if reflection.is_some() {
        Some(pb.theta_index)
    } else {
        None
    };
    let params = derive_params(pb.gain_index, theta, n, q, act);
    if pb.k() != params.k {
        return Err(PvqError::NormMismatch);
    }
    let mut out = vec![0.0; n];
    if pb.gain_index == 0 {
        return Ok(out);
    }
    match reflection {
        None => {
            if pb.pulses.len() != n {
                return Err(PvqError::NormMismatch);
            }
            for (o, u) in out.iter_mut().zip(unit(&pb.pulses)) {
                *o = params.gain * u;
            }
        }
        Some(r) => {
            let theta = theta_value(pb.theta_index, params.theta_levels);
            out[r.axis] = r.sign * params.gain * libm::cos(theta);
            if params.k > 0 {
                if pb.pulses.len() != n - 1 {
                    return Err(PvqError::NormMismatch);
                }
                let shape = unit(&pb.pulses);
                let radius = params.gain * libm::sin(theta);
                let others = (0..n).filter(|&i| i != r.axis);
                for (i, u) in others.zip(shape) {
                    out[i] = radius * u;
                }
            }
            r.apply(&mut out);
        }
    }
    Ok(out)
}

/// Quantize one band at a fixed gain index.
fn quantize_at_gain(
    band: &[f64],
    reflected: Option<(&[f64], &Reflection)>,
    gain_index: u32,
    q: f64,
    act: &ActivityParams,
) -> PvqBand {
    let n = band.len();
    if gain_index == 0 {
        return PvqBand::zero(reflected.is_none());
    }
    match reflected {
        None => {
            let params = derive_params(gain_index, None, n, q, act);
            PvqBand {
                gain_index,
                theta_index: 0,
                pulses: pvq_search(band, params.k),
                noref: true,
                cfl_sign: 0,
            }
        }
        Some((z, r)) => {
            let norm = libm::sqrt(z.iter().map(|v| v * v).sum::<f64>());
            let cos = if norm > 0.0 {
                (r.sign * z[r.axis] / norm).clamp(-1.0, 1.0)
            } else {
                1.0
            };
            let theta = libm::acos(cos).min(FRAC_PI_2);
            let levels = theta_levels(gain_index, q, act);
            let t = (libm::round(theta / FRAC_PI_2 * levels as f64) as u32).min(levels);
            let params = derive_params(gain_index, Some(t), n, q, act);
            let rest: Vec<f64> = (0..n).filter(|&i| i != r.axis).map(|i| z[i]).collect();
            let pulses = if params.k > 0 {
                pvq_search(&rest, params.k)
            } else {
                Vec::new()
            };
            PvqBand {
                gain_index,
                theta_index: t,
                pulses,
                noref: false,
                cfl_sign: 0,
            }
        }
    }
}

/// Quantize a band, optionally against a prediction.
pub fn quantize_band(
    band: &[f64],
    prediction: Option<&[f64]>,
    q: f64,
    act: &ActivityParams,
) -> PvqBand {
    let g = libm::sqrt(band.iter().map(|v| v * v).sum::<f64>());
    let gain_index = activity_gain_compand(g, q, act);
    let reflection = prediction.and_then(Reflection::new);
    let reflected = reflection.as_ref().map(|r| {
        let mut z = band.to_vec();
        r.apply(&mut z);
        (z, r)
    });
    quantize_at_gain(
        band,
        reflected.as_ref().map(|(z, r)| (z.as_slice(), *r)),
        gain_index,
        q,
        act,
    )
}

/// Estimated cost of a band in bits, matching the symbol layout.
pub fn band_rate(pb: &PvqBand, n: usize, has_prediction: bool, q: f64, act: &ActivityParams) -> f64 {
    let mut bits = if has_prediction { 1.0 } else { 0.0 };
    bits += 1.0 + 2.0 * libm::log2(1.0 + pb.gain_index as f64);
    if pb.gain_index == 0 {
        return bits;
    }
    let k = pb.k();
    if pb.noref {
        bits += codebook_bits(n, k);
    } else {
        if pb.cfl_sign != 0 {
            bits += 1.0;
        }
        let levels = theta_levels(pb.gain_index, q, act);
        bits += libm::log2(levels as f64 + 1.0);
        bits += codebook_bits(n - 1, k);
    }
    bits
}

/// Outcome of a rate-distortion quantization.
#[derive(Debug, Clone)]
pub struct BandChoice {
    pub band: PvqBand,
    pub recon: Vec<f64>,
    pub distortion: f64,
    pub rate: f64,
}

/// Quantize trying the nominal gain index and the one below it (gain
/// relaxation), keeping the lower `D + lambda * R`. A zero `lambda` keeps
/// the nominal index.
pub fn quantize_band_rdo(
    band: &[f64],
    prediction: Option<&[f64]>,
    q: f64,
    act: &ActivityParams,
    lambda: f64,
) -> BandChoice {
    let n = band.len();
    let g = libm::sqrt(band.iter().map(|v| v * v).sum::<f64>());
    let nominal = activity_gain_compand(g, q, act);
    let reflection = prediction.and_then(Reflection::new);
    let z = reflection.as_ref().map(|r| {
        let mut z = band.to_vec();
        r.apply(&mut z);
        z
    });
    let has_pred = reflection.is_some();
    let mut best: Option<BandChoice> = None;
    let candidates = if lambda > 0.0 && nominal > 0 {
        [Some(nominal), Some(nominal - 1)]
    } else {
        [Some(nominal), None]
    };
    for gi in candidates.into_iter().flatten() {
        let reflected = match (&z, &reflection) {
            (Some(z), Some(r)) => Some((z.as_slice(), r)),
            _ => None,
        };
        let pb = quantize_at_gain(band, reflected, gi, q, act);
        let recon = dequantize_band(&pb, n, prediction, q, act).expect("encoder band is valid");
        let distortion: f64 = band.iter().zip(&recon).map(|(a, b)| (a - b) * (a - b)).sum();
        let rate = band_rate(&pb, n, has_pred, q, act);
        let better = match &best {
            None => true,
            Some(b) => distortion + lambda * rate < b.distortion + lambda * b.rate,
        };
        if better {
            best = Some(BandChoice {
                band: pb,
                recon,
                distortion,
                rate,
            });
        }
    }
    best.expect("at least one candidate")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn norm(x: &[f64]) -> f64 {
        libm::sqrt(x.iter().map(|v| v * v).sum())
    }

    #[test]
    fn zero_band_has_zero_gain() {
        let pb = quantize_band(&[0.0; 15], None, 32.0, &ActivityParams::for_block_size(8));
        assert_eq!(pb.gain_index, 0);
        assert!(pb.pulses.is_empty());
    }

    #[test]
    fn band_equal_to_prediction_has_zero_angle() {
        let x: Vec<f64> = (0..16).map(|i| (i as f64 - 7.5) * 40.0).collect();
        let pb = quantize_band(&x, Some(&x), 16.0, &ActivityParams::for_block_size(8));
        assert_eq!(pb.theta_index, 0);
        assert_eq!(pb.k(), 0);
        assert!(!pb.noref);
    }

    #[test]
    fn noref_single_pulse_reconstructs_gain_on_axis() {
        let act = ActivityParams::disabled();
        let mut x = vec![0.0; 15];
        x[3] = -10.0 * 16.0;
        let pb = quantize_band(&x, None, 16.0, &act);
        let r = dequantize_band(&pb, 15, None, 16.0, &act).unwrap();
        let g = activity_gain_expand(pb.gain_index, 16.0, &act);
        assert!((r[3] + g).abs() < 1e-9);
        assert!(r.iter().enumerate().all(|(i, &v)| i == 3 || v == 0.0));
    }

    #[test]
    fn reflection_properties() {
        let pred = [3.0, -4.0, 1.0, 0.5];
        let r = Reflection::new(&pred).unwrap();
        let mut p = pred.to_vec();
        r.apply(&mut p);
        assert_eq!(r.axis, 1);
        assert!((p[1] * r.sign - norm(&pred)).abs() < 1e-12);
        for (i, v) in p.iter().enumerate() {
            if i != 1 {
                assert!(v.abs() < 1e-12);
            }
        }
        let x = [1.0, 2.0, -3.0, 7.0];
        let mut y = x.to_vec();
        r.apply(&mut y);
        r.apply(&mut y);
        for (a, b) in x.iter().zip(&y) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn axis_prediction_only_flips_that_axis() {
        let pred = [0.0, 0.0, 5.0];
        let (out, r) = householder_reflect(&[1.0, 2.0, 3.0], &pred).unwrap();
        assert_eq!(r.axis, 2);
        assert_eq!(out, vec![1.0, 2.0, -3.0]);
    }

    #[test]
    fn zero_prediction_has_no_reflection() {
        assert!(Reflection::new(&[0.0; 4]).is_none());
    }

    #[test]
    fn companding_identity_when_disabled() {
        let act = ActivityParams::disabled();
        for i in 0..50 {
            let g = i as f64 * 16.0;
            assert_eq!(activity_gain_compand(g, 16.0, &act), i);
            assert_eq!(activity_gain_expand(i, 16.0, &act), g);
        }
    }

    #[test]
    fn search_spends_exact_budget() {
        let t = [0.3, -0.1, 0.0, 2.0, -0.7];
        for k in 0..20 {
            let y = pvq_search(&t, k);
            assert_eq!(y.iter().map(|v| v.unsigned_abs()).sum::<u32>(), k);
        }
        assert_eq!(pvq_search(&[0.0; 3], 2), vec![2, 0, 0]);
    }

    #[test]
    fn theta_levels_at_least_one() {
        let act = ActivityParams::for_block_size(16);
        for i in 1..100 {
            assert!(theta_levels(i, 64.0, &act) >= 1);
        }
    }
}
