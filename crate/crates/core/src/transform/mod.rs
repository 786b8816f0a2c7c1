//! Reversible block transforms and lapping filters.

mod dct;
mod lapping;
mod tables;

use alloc::vec::Vec;

pub use dct::scale_exp;
pub(crate) use lapping::superblock_edges;
pub use lapping::{
    apply_edge, lap_edges, lap_node_cross, postfilter_edges, prefilter_edges, EdgeOp, LapConfig, Orientation,
};

/// Extra fractional bits carried by transform inputs.
pub const COEFF_SHIFT: u32 = 4;

pub const BLOCK_SIZES: [usize; 4] = [4, 8, 16, 32];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TransformError {
    #[error("unsupported block size {0}")]
    UnsupportedSize(usize),
    #[error("block holds {got} values, expected {expected}")]
    Length { expected: usize, got: usize },
    #[error("plane is {width}x{height}, partition covers {want_w}x{want_h}")]
    TreeMismatch {
        width: usize,
        height: usize,
        want_w: usize,
        want_h: usize,
    },
}

/// Transform coefficients of one `n`x`n` block, row-major, vertical
/// frequency along rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoeffBlock {
    pub n: usize,
    pub coeffs: Vec<i32>,
}

impl CoeffBlock {
    pub fn zeros(n: usize) -> Self {
        CoeffBlock {
            n,
            coeffs: alloc::vec![0; n * n],
        }
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> i32 {
        self.coeffs[row * self.n + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, v: i32) {
        self.coeffs[row * self.n + col] = v;
    }

    pub fn dc(&self) -> i32 {
        self.coeffs[0]
    }
}

fn check(n: usize, len: usize) -> Result<(), TransformError> {
    if !BLOCK_SIZES.contains(&n) {
        return Err(TransformError::UnsupportedSize(n));
    }
    if len != n * n {
        return Err(TransformError::Length {
            expected: n * n,
            got: len,
        });
    }
    Ok(())
}

/// Forward 2-D transform of a row-major `n`x`n` block.
pub fn fdct(n: usize, block: &[i32]) -> Result<CoeffBlock, TransformError> {
    check(n, block.len())?;
    let mut coeffs = block.to_vec();
    dct::fdct_2d(&mut coeffs, n);
    Ok(CoeffBlock { n, coeffs })
}

/// Exact inverse of [`fdct`].
pub fn idct(n: usize, coeffs: &CoeffBlock) -> Result<Vec<i32>, TransformError> {
    check(n, coeffs.coeffs.len())?;
    if coeffs.n != n {
        return Err(TransformError::UnsupportedSize(coeffs.n));
    }
    let mut out = coeffs.coeffs.clone();
    dct::idct_2d(&mut out, n);
    Ok(out)
}

pub(crate) fn fdct_in_place(block: &mut [i32], n: usize) {
    dct::fdct_2d(block, n);
}

pub(crate) fn idct_in_place(block: &mut [i32], n: usize) {
    dct::idct_2d(block, n);
}

/// Multiplier taking coefficient (`row`, `col`) of an `n`-point block to
/// the orthonormal DCT scale.
pub fn to_orthonormal(n: usize, row: usize, col: usize) -> f64 {
    let e = -(scale_exp(n, row) + scale_exp(n, col));
    let half = e.div_euclid(2);
    let base = if e.rem_euclid(2) == 1 {
        core::f64::consts::SQRT_2
    } else {
        1.0
    };
    libm::ldexp(base, half)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn constant_block_has_only_dc() {
        for n in BLOCK_SIZES {
            let c = fdct(n, &vec![173 << COEFF_SHIFT; n * n]).unwrap();
            assert_ne!(c.dc(), 0);
            assert!(c.coeffs[1..].iter().all(|&v| v == 0), "n={n}");
        }
    }

    #[test]
    fn zero_coeffs_give_zero_block() {
        for n in BLOCK_SIZES {
            assert!(idct(n, &CoeffBlock::zeros(n)).unwrap().iter().all(|&v| v == 0));
        }
    }

    #[test]
    fn corner_cases_4x4() {
        let checker: Vec<i32> = (0..16).map(|i| if (i / 4 + i % 4) % 2 == 0 { 255 } else { 0 }).collect();
        for block in [vec![0; 16], vec![255; 16], checker] {
            let c = fdct(4, &block).unwrap();
            assert_eq!(idct(4, &c).unwrap(), block);
        }
    }

    #[test]
    fn rejects_bad_size() {
        assert_eq!(fdct(6, &[0; 36]), Err(TransformError::UnsupportedSize(6)));
        assert_eq!(
            fdct(4, &[0; 15]),
            Err(TransformError::Length {
                expected: 16,
                got: 15
            })
        );
    }

    #[test]
    fn orthonormal_scale_of_dc() {
        // DC of the integer transform is the block mean.
        assert!((to_orthonormal(32, 0, 0) - 32.0).abs() < 1e-12);
        assert!((to_orthonormal(4, 0, 0) - 4.0).abs() < 1e-12);
        assert!((to_orthonormal(4, 1, 1) - 0.5).abs() < 1e-12);
    }
}
