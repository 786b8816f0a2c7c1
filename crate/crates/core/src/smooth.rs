//! Bilinear smoothing of large blocks.
//!
//! A block is blended toward the bilinear surface through its four corner
//! samples. The blend weight is the square of a Wiener-style gain
//! `w = min(1, alpha Q^2 / (12 D^2))`, where `D^2` is the mean squared
//! difference between the block and the surface. Only the block itself is
//! read.
//!
//! `Q` and `D^2` are taken in the internal sample scale (16 units per 8-bit
//! step).

use alloc::vec::Vec;

use crate::plane::Plane;

pub const LUMA_ALPHA: u32 = 5;
pub const CHROMA_ALPHA: u32 = 20;

/// Blend weights are in Q15.
pub const WEIGHT_BITS: u32 = 15;
const WEIGHT_ONE: u128 = 1 << WEIGHT_BITS;

/// Bilinear surface through the corners of a row-major `n`x`n` block,
/// scaled by `(n - 1)^2` so it is exact.
pub fn bilinear_fit_scaled(block: &[u8], n: usize) -> Vec<i64> {
    let m = (n - 1) as i64;
    let c = |x: usize, y: usize| block[y * n + x] as i64;
    let (c00, c10, c01, c11) = (c(0, 0), c(n - 1, 0), c(0, n - 1), c(n - 1, n - 1));
    let mut out = Vec::with_capacity(n * n);
    for y in 0..n as i64 {
        for x in 0..n as i64 {
            out.push(
                c00 * (m - x) * (m - y) + c10 * x * (m - y) + c01 * (m - x) * y + c11 * x * y,
            );
        }
    }
    out
}

/// Bilinear surface rounded to whole samples.
pub fn bilinear_fit(block: &[u8], n: usize) -> Vec<u8> {
    let scale = ((n - 1) * (n - 1)) as i64;
    bilinear_fit_scaled(block, n)
        .into_iter()
        .map(|v| ((2 * v + scale) / (2 * scale)) as u8)
        .collect()
}

/// `w^2` in Q15 for `D^2 = d2_num / d2_den`.
pub fn weight_sq_q15(alpha: u32, q: u32, d2_num: u128, d2_den: u128) -> u32 {
    if d2_num == 0 {
        return WEIGHT_ONE as u32;
    }
    // w = alpha Q^2 d2_den / (12 d2_num)
    let mut num = alpha as u128 * (q as u128) * (q as u128) * d2_den;
    let mut den = 12 * d2_num;
    if num >= den {
        return WEIGHT_ONE as u32;
    }
    // Keep the squares below 2^110 so the Q15 product cannot overflow.
    let excess = (128 - den.leading_zeros()).saturating_sub(55);
    num >>= excess;
    den >>= excess;
    let (nn, dd) = (num * num, den * den);
    let w2 = (WEIGHT_ONE * nn + dd / 2) / dd;
    w2.min(WEIGHT_ONE) as u32
}

/// Smooth a row-major `n`x`n` block in place; returns the Q15 weight used.
pub fn smooth_block(block: &mut [u8], n: usize, alpha: u32, q: u32) -> u32 {
    let scale = ((n - 1) * (n - 1)) as i64;
    let fit = bilinear_fit_scaled(block, n);
    let err: u128 = block
        .iter()
        .zip(&fit)
        .map(|(&x, &p)| {
            let e = x as i64 * scale - p;
            (e * e) as u128
        })
        .sum();
    let unit = 1u128 << (2 * crate::transform::COEFF_SHIFT);
    let err = err * unit;
    let d2_den = (scale as u128) * (scale as u128) * (n * n) as u128;
    let w2 = weight_sq_q15(alpha, q, err, d2_den);
    let w2i = w2 as i64;
    let one = WEIGHT_ONE as i64;
    let den = one * scale;
    for (x, &p) in block.iter_mut().zip(&fit) {
        let v = w2i * p + (one - w2i) * scale * *x as i64;
        *x = ((2 * v + den) / (2 * den)).clamp(0, 255) as u8;
    }
    w2
}

/// Smooth every `n`x`n` block of `plane` whose top-left corner is listed.
/// Blocks running past the plane edge are skipped.
pub fn smooth_plane(plane: &mut Plane, blocks: &[(usize, usize)], n: usize, alpha: u32, q: u32) {
    let mut buf = alloc::vec![0u8; n * n];
    for &(bx, by) in blocks {
        if bx + n > plane.width() || by + n > plane.height() {
            continue;
        }
        for y in 0..n {
            for x in 0..n {
                buf[y * n + x] = plane.get(bx + x, by + y);
            }
        }
        smooth_block(&mut buf, n, alpha, q);
        for y in 0..n {
            for x in 0..n {
                plane.set(bx + x, by + y, buf[y * n + x]);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn constant_block_is_fixed() {
        let mut b = vec![93u8; 32 * 32];
        assert_eq!(bilinear_fit(&b, 32), b);
        assert_eq!(smooth_block(&mut b, 32, LUMA_ALPHA, 40), 1 << 15);
        assert!(b.iter().all(|&v| v == 93));
    }

    #[test]
    fn zero_corners_give_zero_surface() {
        let mut b = vec![200u8; 16 * 16];
        for (x, y) in [(0, 0), (15, 0), (0, 15), (15, 15)] {
            b[y * 16 + x] = 0;
        }
        assert!(bilinear_fit(&b, 16).iter().all(|&v| v == 0));
    }

    #[test]
    fn ramp_is_reproduced() {
        let b: Vec<u8> = (0..32 * 32).map(|i| ((i % 32) * 3 + (i / 32) * 5) as u8).collect();
        assert_eq!(bilinear_fit(&b, 32), b);
        let mut c = b.clone();
        assert_eq!(smooth_block(&mut c, 32, 5, 16), 1 << 15);
        assert_eq!(c, b);
    }

    #[test]
    fn worked_weight() {
        // alpha 5, Q 12, D^2 120: w = 0.5, w^2 = 0.25.
        assert_eq!(weight_sq_q15(5, 12, 120, 1), 8192);
        assert_eq!(weight_sq_q15(5, 12, 0, 1), 32768);
        assert_eq!(weight_sq_q15(5, 12, u64::MAX as u128, 1), 0);
    }
}
