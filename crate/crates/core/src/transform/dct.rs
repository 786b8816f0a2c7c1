//! Integer lifting DCT-II for 4, 8, 16 and 32 points.
//!
//! The N-point DCT-II splits into an N/2-point DCT-II of the mirrored sums
//! and an N/2-point DCT-IV of the mirrored differences. The butterflies are
//! integer S-transforms (`d = a - b`, `m = b + (d >> 1)`), so constant input
//! yields exactly zero AC. Each DCT-IV is a fixed sequence of plane rotations,
//! every rotation realized as three rounded lifting shears. All steps are
//! exactly invertible.
//!
//! The S-transform leaves each output scaled by a power of sqrt(2) relative
//! to the orthonormal DCT; [`scale_exp`] gives that power.

use super::tables::*;

const LIFT_SHIFT: u32 = 14;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Rotation {
    i: u8,
    j: u8,
    neg: bool,
    tan_half: i32,
    sin: i32,
}

impl Rotation {
    pub(crate) const fn new(i: usize, j: usize, neg: bool, tan_half: i32, sin: i32) -> Self {
        Rotation {
            i: i as u8,
            j: j as u8,
            neg,
            tan_half,
            sin,
        }
    }
}

#[inline(always)]
fn lift(v: i32, c: i32) -> i32 {
    ((v as i64 * c as i64 + (1 << (LIFT_SHIFT - 1))) >> LIFT_SHIFT) as i32
}

#[inline(always)]
fn rotate(x: &mut [i32], r: &Rotation) {
    let (i, j) = (r.i as usize, r.j as usize);
    if r.neg {
        x[i] = -x[i];
        x[j] = -x[j];
    }
    x[i] -= lift(x[j], r.tan_half);
    x[j] += lift(x[i], r.sin);
    x[i] -= lift(x[j], r.tan_half);
}

#[inline(always)]
fn unrotate(x: &mut [i32], r: &Rotation) {
    let (i, j) = (r.i as usize, r.j as usize);
    x[i] += lift(x[j], r.tan_half);
    x[j] -= lift(x[i], r.sin);
    x[i] += lift(x[j], r.tan_half);
    if r.neg {
        x[i] = -x[i];
        x[j] = -x[j];
    }
}

fn dct4_tables(m: usize) -> (&'static [i8], &'static [Rotation]) {
    match m {
        2 => (&DCT4_2_SIGNS, &DCT4_2_ROTATIONS),
        4 => (&DCT4_4_SIGNS, &DCT4_4_ROTATIONS),
        8 => (&DCT4_8_SIGNS, &DCT4_8_ROTATIONS),
        16 => (&DCT4_16_SIGNS, &DCT4_16_ROTATIONS),
        _ => unreachable!("dct-iv size {m}"),
    }
}

fn fdct4(x: &mut [i32]) {
    if x.len() == 1 {
        return;
    }
    let (signs, rots) = dct4_tables(x.len());
    for (v, &s) in x.iter_mut().zip(signs) {
        if s < 0 {
            *v = -*v;
        }
    }
    for r in rots {
        rotate(x, r);
    }
}

fn idct4(x: &mut [i32]) {
    if x.len() == 1 {
        return;
    }
    let (signs, rots) = dct4_tables(x.len());
    for r in rots.iter().rev() {
        unrotate(x, r);
    }
    for (v, &s) in x.iter_mut().zip(signs) {
        if s < 0 {
            *v = -*v;
        }
    }
}

/// In-place forward 1-D transform; `x.len()` is a power of two up to 32.
pub(crate) fn fdct_1d(x: &mut [i32]) {
    let n = x.len();
    if n == 1 {
        return;
    }
    let h = n / 2;
    let mut sums = [0i32; 16];
    let mut diffs = [0i32; 16];
    for k in 0..h {
        let d = x[k] - x[n - 1 - k];
        diffs[k] = d;
        sums[k] = x[n - 1 - k] + (d >> 1);
    }
    fdct_1d(&mut sums[..h]);
    fdct4(&mut diffs[..h]);
    for k in 0..h {
        x[2 * k] = sums[k];
        x[2 * k + 1] = diffs[k];
    }
}

pub(crate) fn idct_1d(x: &mut [i32]) {
    let n = x.len();
    if n == 1 {
        return;
    }
    let h = n / 2;
    let mut sums = [0i32; 16];
    let mut diffs = [0i32; 16];
    for k in 0..h {
        sums[k] = x[2 * k];
        diffs[k] = x[2 * k + 1];
    }
    idct_1d(&mut sums[..h]);
    idct4(&mut diffs[..h]);
    for k in 0..h {
        let b = sums[k] - (diffs[k] >> 1);
        x[k] = b + diffs[k];
        x[n - 1 - k] = b;
    }
}

/// Separable 2-D forward transform of a row-major `n`x`n` block.
pub(crate) fn fdct_2d(block: &mut [i32], n: usize) {
    for row in block.chunks_exact_mut(n) {
        fdct_1d(row);
    }
    let mut col = [0i32; 32];
    for c in 0..n {
        for r in 0..n {
            col[r] = block[r * n + c];
        }
        fdct_1d(&mut col[..n]);
        for r in 0..n {
            block[r * n + c] = col[r];
        }
    }
}

pub(crate) fn idct_2d(block: &mut [i32], n: usize) {
    let mut col = [0i32; 32];
    for c in 0..n {
        for r in 0..n {
            col[r] = block[r * n + c];
        }
        idct_1d(&mut col[..n]);
        for r in 0..n {
            block[r * n + c] = col[r];
        }
    }
    for row in block.chunks_exact_mut(n) {
        idct_1d(row);
    }
}

/// Scale of 1-D output `k` of the `n`-point transform relative to the
/// orthonormal DCT-II, as a power of sqrt(2).
pub fn scale_exp(n: usize, k: usize) -> i32 {
    if n == 1 {
        0
    } else if k.is_multiple_of(2) {
        scale_exp(n / 2, k / 2) - 1
    } else {
        1
    }
}
