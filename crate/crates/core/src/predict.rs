//! Frequency-domain intra prediction.
//!
//! Luma blocks may copy the first row (vertical mode) or first column
//! (horizontal mode) of AC coefficients from a same-sized neighbor. Chroma
//! AC bands are predicted from the co-located reconstructed luma
//! coefficients, with only a sign sent per band.

use alloc::vec::Vec;

use crate::transform::{to_orthonormal, CoeffBlock};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum IntraMode {
    #[default]
    None,
    Horizontal,
    Vertical,
}

impl IntraMode {
    pub const ALL: [IntraMode; 3] = [IntraMode::None, IntraMode::Horizontal, IntraMode::Vertical];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }
}

/// AC predictor for a luma block. `above` and `left` are the reconstructed
/// coefficients of same-sized neighbors, if any. The DC of the result is 0;
/// see [`predict_dc`]. A mode whose neighbor is missing yields zeros.
pub fn predict_luma(
    n: usize,
    mode: IntraMode,
    above: Option<&CoeffBlock>,
    left: Option<&CoeffBlock>,
) -> CoeffBlock {
    let mut out = CoeffBlock::zeros(n);
    match (mode, above, left) {
        (IntraMode::Vertical, Some(a), _) if a.n == n => {
            for c in 1..n {
                out.set(0, c, a.get(0, c));
            }
        }
        (IntraMode::Horizontal, _, Some(l)) if l.n == n => {
            for r in 1..n {
                out.set(r, 0, l.get(r, 0));
            }
        }
        _ => {}
    }
    out
}

/// DC predictor from the DC values (block means) of the neighbors above
/// and to the left.
pub fn predict_dc(above: Option<i32>, left: Option<i32>) -> i32 {
    match (above, left) {
        (Some(a), Some(l)) => (a + l).div_euclid(2) + (a + l).rem_euclid(2),
        (Some(v), None) | (None, Some(v)) => v,
        (None, None) => 0,
    }
}

/// Luma coefficients restricted to chroma resolution: the top-left
/// `chroma_n`x`chroma_n` corner of the co-located luma block, in
/// orthonormal units. With no subsampling this is the whole block.
pub fn subsample_luma_for_cfl(luma: &CoeffBlock, chroma_n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(chroma_n * chroma_n);
    for r in 0..chroma_n {
        for c in 0..chroma_n {
            out.push(luma.get(r, c) as f64 * to_orthonormal(luma.n, r, c));
        }
    }
    out
}

/// Chroma-from-luma predictor for one band: the co-located luma values at
/// the band positions, or `None` when they are all zero.
pub fn cfl_predict(luma: &[f64], chroma_n: usize, band: &[(usize, usize)]) -> Option<Vec<f64>> {
    let r: Vec<f64> = band.iter().map(|&(y, x)| luma[y * chroma_n + x]).collect();
    if r.iter().all(|&v| v == 0.0) {
        None
    } else {
        Some(r)
    }
}

/// Sign of the linear relation between a chroma band and its luma
/// predictor.
pub fn cfl_sign(chroma: &[f64], luma: &[f64]) -> i8 {
    let dot: f64 = chroma.iter().zip(luma).map(|(a, b)| a * b).sum();
    if dot < 0.0 {
        -1
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn no_neighbors_gives_zero() {
        for mode in IntraMode::ALL {
            assert_eq!(predict_luma(8, mode, None, None), CoeffBlock::zeros(8));
        }
        assert_eq!(predict_dc(None, None), 0);
    }

    #[test]
    fn vertical_copies_first_row() {
        let mut above = CoeffBlock::zeros(8);
        for c in 0..8 {
            above.set(0, c, c as i32 * 10 - 30);
        }
        let p = predict_luma(8, IntraMode::Vertical, Some(&above), None);
        for c in 1..8 {
            assert_eq!(p.get(0, c), above.get(0, c));
        }
        assert_eq!(p.dc(), 0);
        assert!(p.coeffs[8..].iter().all(|&v| v == 0));
    }

    #[test]
    fn horizontal_copies_first_column() {
        let mut left = CoeffBlock::zeros(4);
        for r in 0..4 {
            left.set(r, 0, 7 - r as i32);
            left.set(r, 2, 99);
        }
        let p = predict_luma(4, IntraMode::Horizontal, None, Some(&left));
        assert_eq!(p.coeffs, vec![0, 0, 0, 0, 6, 0, 0, 0, 5, 0, 0, 0, 4, 0, 0, 0]);
    }

    #[test]
    fn size_mismatch_gives_zero() {
        let above = CoeffBlock { n: 4, coeffs: vec![5; 16] };
        assert_eq!(predict_luma(8, IntraMode::Vertical, Some(&above), None), CoeffBlock::zeros(8));
    }

    #[test]
    fn dc_average_rounds_half_up() {
        assert_eq!(predict_dc(Some(3), Some(4)), 4);
        assert_eq!(predict_dc(Some(-3), Some(-4)), -3);
        assert_eq!(predict_dc(Some(-5), None), -5);
    }

    #[test]
    fn subsampling_is_linear_and_identity_at_full_size() {
        let a = CoeffBlock { n: 8, coeffs: (0..64).collect() };
        let b = CoeffBlock { n: 8, coeffs: (0..64).map(|v| 3 - v * 2).collect() };
        let sum = CoeffBlock { n: 8, coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect() };
        let (sa, sb, ss) = (
            subsample_luma_for_cfl(&a, 4),
            subsample_luma_for_cfl(&b, 4),
            subsample_luma_for_cfl(&sum, 4),
        );
        for i in 0..16 {
            assert!((sa[i] + sb[i] - ss[i]).abs() < 1e-9);
        }
        let full = subsample_luma_for_cfl(&a, 8);
        for r in 0..8 {
            for c in 0..8 {
                assert_eq!(full[r * 8 + c], a.get(r, c) as f64 * to_orthonormal(8, r, c));
            }
        }
    }

    #[test]
    fn zero_luma_band_has_no_predictor() {
        let luma = vec![0.0; 16];
        let band: Vec<_> = (1..16).map(|i| (i / 4, i % 4)).collect();
        assert!(cfl_predict(&luma, 4, &band).is_none());
    }
}
