//! Directional deringing.
//!
//! Each 8x8 block gets a direction: the one whose lines best explain the
//! block as constant along them. A 7-tap conditional replacement filter then
//! runs along that direction, followed by a 5-tap pass across it (vertical
//! or horizontal) with a tighter threshold. Reads that leave the current
//! superblock see unfiltered pixels, so superblocks can be processed in any
//! order.
//!
//! The quantizer, thresholds and directionality are expressed in the
//! codec's internal sample scale, 16 units per 8-bit step. Thresholds carry
//! four more fractional bits on top, so one 8-bit step is 256 threshold
//! units.

use alloc::vec;
use alloc::vec::Vec;

use crate::plane::Plane;

pub const BLOCK: usize = 8;

/// Fractional bits of thresholds relative to the internal sample scale.
pub const THRESH_SHIFT: u32 = 4;
/// Threshold units per 8-bit sample step.
pub const THRESH_PER_SAMPLE: i32 = 1 << (THRESH_SHIFT + crate::transform::COEFF_SHIFT);

/// Direction steps `(dx, dy)` in half-pixel units.
pub const DIRECTIONS: [(i32, i32); 8] = [
    (2, -2),
    (2, -1),
    (2, 0),
    (2, 1),
    (2, 2),
    (1, 2),
    (0, 2),
    (-1, 2),
];

/// Second-stage steps, in half-pixel units, per first-stage direction.
pub const SECOND_STAGE: [(i32, i32); 8] = [
    (0, 2),
    (0, 2),
    (0, 2),
    (0, 2),
    (0, 2),
    (2, 0),
    (2, 0),
    (2, 0),
];

const STAGE1_TAPS: [i32; 3] = [3, 2, 2];
const STAGE2_TAPS: [i32; 2] = [3, 3];
const WEIGHT_SHIFT: u32 = 4;

/// Common multiple of every line length, so `1/N` is exact.
pub const LINE_SCALE: i64 = 840;

const BETA: f64 = 0.842;
const ALPHA1: f64 = 1.0;
const ALPHA2: f64 = 1.02;
const DELTA_EXPONENT: f64 = 0.16;

/// Line of pixel (`row`, `col`) for each direction.
pub fn line_index(dir: usize, row: usize, col: usize) -> usize {
    let (i, j) = (row, col);
    match dir {
        0 => i + j,
        1 => i + j / 2,
        2 => i,
        3 => 3 + i - j / 2,
        4 => 7 + i - j,
        5 => 3 - i / 2 + j,
        6 => j,
        7 => i / 2 + j,
        _ => unreachable!("direction {dir}"),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DirectionInfo {
    pub d_opt: usize,
    /// `s_d` per direction, times [`LINE_SCALE`].
    pub s: [i64; 8],
    /// `s_opt - s_orth`, times [`LINE_SCALE`].
    pub delta: i64,
}

impl DirectionInfo {
    /// Directionality in squared internal sample units.
    pub fn delta_real(&self) -> f64 {
        let s = (1u32 << (2 * crate::transform::COEFF_SHIFT)) as f64;
        self.delta as f64 * s / LINE_SCALE as f64
    }
}

/// Direction of a row-major 8x8 block.
pub fn find_direction(block: &[i32; 64]) -> DirectionInfo {
    let mut sums = [[0i64; 15]; 8];
    let mut counts = [[0i64; 15]; 8];
    for i in 0..BLOCK {
        for j in 0..BLOCK {
            let x = block[i * BLOCK + j] as i64;
            for d in 0..8 {
                let k = line_index(d, i, j);
                sums[d][k] += x;
                counts[d][k] += 1;
            }
        }
    }
    let mut s = [0i64; 8];
    for d in 0..8 {
        for k in 0..15 {
            if counts[d][k] > 0 {
                s[d] += sums[d][k] * sums[d][k] * (LINE_SCALE / counts[d][k]);
            }
        }
    }
    let mut d_opt = 0;
    for d in 1..8 {
        if s[d] > s[d_opt] {
            d_opt = d;
        }
    }
    DirectionInfo {
        d_opt,
        s,
        delta: s[d_opt] - s[(d_opt + 4) % 8],
    }
}

/// `d` when `|d| < t`, else 0.
#[inline]
pub fn thresh(d: i32, t: i32) -> i32 {
    if d.abs() < t {
        d
    } else {
        0
    }
}

#[inline]
fn thresh_px(d: i32, t_q4: i32) -> i32 {
    if d.abs() * THRESH_PER_SAMPLE < t_q4 {
        d
    } else {
        0
    }
}

/// Filter thresholds for one block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DeringParams {
    pub t0: i32,
    pub td: i32,
}

/// Base threshold `Q^0.842`, in threshold units.
pub fn base_threshold(q: u32) -> i32 {
    libm::round(ALPHA1 * libm::pow(q as f64, BETA) * (1 << THRESH_SHIFT) as f64) as i32
}

/// Thresholds for a block with directionality `delta` in a superblock of
/// mean directionality `delta_sb` (both in squared internal sample units).
pub fn compute_thresholds(q: u32, delta: f64, delta_sb: f64) -> DeringParams {
    let t0 = base_threshold(q);
    let prod = (delta * delta_sb).max(0.0);
    let scale = (ALPHA2 * libm::pow(prod, DELTA_EXPONENT)).clamp(0.5, 3.0);
    DeringParams {
        t0,
        td: libm::round(t0 as f64 * scale) as i32,
    }
}

/// Second-stage threshold `min(Td, Td/3 + |y - x|)` for 8-bit samples
/// `y` and `x`, in threshold units.
pub fn second_stage_threshold(td: i32, y: i32, x: i32) -> i32 {
    td.min(td / 3 + (y - x).abs() * THRESH_PER_SAMPLE)
}

#[inline]
fn round_shift(sum: i32) -> i32 {
    (sum + (1 << (WEIGHT_SHIFT - 1)) - (sum < 0) as i32) >> WEIGHT_SHIFT
}

/// Tap offsets `(forward, backward)` as `(drow, dcol)` for step `k`. Half
/// pixel positions round toward the center, so the two taps are mirror
/// images.
pub fn tap_offsets(step: (i32, i32), k: i32) -> ((i32, i32), (i32, i32)) {
    let (dx, dy) = step;
    let fwd = (k * dy / 2, k * dx / 2);
    (fwd, (-fwd.0, -fwd.1))
}

/// Which 8x8 blocks may be filtered, from a per-4x4 skip grid of `w4`x`h4`
/// units. A block is left alone when it and the ring of 4x4 units around
/// it were all skipped.
pub fn filter_mask_from_skips(skips: &[bool], w4: usize, h4: usize) -> Vec<bool> {
    let (w8, h8) = (w4 / 2, h4 / 2);
    let mut mask = vec![true; w8 * h8];
    for by in 0..h8 {
        for bx in 0..w8 {
            let mut all = true;
            for uy in (2 * by) as isize - 1..=(2 * by) as isize + 2 {
                for ux in (2 * bx) as isize - 1..=(2 * bx) as isize + 2 {
                    if uy < 0 || ux < 0 || uy >= h4 as isize || ux >= w4 as isize {
                        continue;
                    }
                    all &= skips[uy as usize * w4 + ux as usize];
                }
            }
            mask[by * w8 + bx] = !all;
        }
    }
    mask
}

/// Per-plane deringing inputs.
#[derive(Debug, Clone)]
pub struct DeringContext<'a> {
    /// Frame quantizer in internal sample units.
    pub q: u32,
    /// Superblock size in this plane.
    pub sb_size: usize,
    /// Per-superblock enable flags, raster order. Empty means all enabled.
    pub sb_enabled: &'a [bool],
    /// Per-8x8 filter eligibility, raster order. Empty means all eligible.
    pub block_mask: &'a [bool],
}

/// Direction and thresholds chosen for one 8x8 block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockAnalysis {
    pub bx: usize,
    pub by: usize,
    pub direction: DirectionInfo,
    pub params: DeringParams,
}

fn block_pixels(plane: &Plane, bx: usize, by: usize) -> [i32; 64] {
    let mut b = [0i32; 64];
    for i in 0..BLOCK {
        for j in 0..BLOCK {
            b[i * BLOCK + j] = plane.get(bx * BLOCK + j, by * BLOCK + i) as i32;
        }
    }
    b
}

fn check_dims(plane: &Plane, sb: usize) {
    assert!(
        plane.width().is_multiple_of(BLOCK) && plane.height().is_multiple_of(BLOCK),
        "dering needs whole 8x8 blocks"
    );
    assert!(sb.is_multiple_of(BLOCK) && sb > 0, "superblock size {sb}");
}

/// Direction and thresholds for every 8x8 block of one superblock.
pub fn analyze_superblock(plane: &Plane, q: u32, sb: usize, sbx: usize, sby: usize) -> Vec<BlockAnalysis> {
    let per = sb / BLOCK;
    let (w8, h8) = (plane.width() / BLOCK, plane.height() / BLOCK);
    let mut dirs = Vec::new();
    for by in sby * per..((sby + 1) * per).min(h8) {
        for bx in sbx * per..((sbx + 1) * per).min(w8) {
            dirs.push((bx, by, find_direction(&block_pixels(plane, bx, by))));
        }
    }
    let delta_sb = if dirs.is_empty() {
        0.0
    } else {
        dirs.iter().map(|d| d.2.delta_real()).sum::<f64>() / dirs.len() as f64
    };
    dirs.into_iter()
        .map(|(bx, by, direction)| BlockAnalysis {
            bx,
            by,
            direction,
            params: compute_thresholds(q, direction.delta_real(), delta_sb),
        })
        .collect()
}

/// Directions and thresholds for every 8x8 block of the plane, superblocks
/// in raster order.
pub fn analyze_plane(plane: &Plane, q: u32, sb: usize) -> Vec<BlockAnalysis> {
    check_dims(plane, sb);
    let (cols, rows) = (plane.width().div_ceil(sb), plane.height().div_ceil(sb));
    let mut out = Vec::new();
    for sby in 0..rows {
        for sbx in 0..cols {
            out.extend(analyze_superblock(plane, q, sb, sbx, sby));
        }
    }
    out
}

/// Stage-1 output for one block at (`bx`, `by`).
pub fn directional_filter(input: &Plane, bx: usize, by: usize, dir: usize, td: i32) -> [i32; 64] {
    let mut y = [0i32; 64];
    let (w, h) = (input.width() as i32, input.height() as i32);
    for i in 0..BLOCK {
        for j in 0..BLOCK {
            let (r, c) = ((by * BLOCK + i) as i32, (bx * BLOCK + j) as i32);
            let x = input.get(c as usize, r as usize) as i32;
            let mut sum = 0;
            for (k, &wk) in STAGE1_TAPS.iter().enumerate() {
                let (fwd, bwd) = tap_offsets(DIRECTIONS[dir], k as i32 + 1);
                for (dr, dc) in [fwd, bwd] {
                    let (rr, cc) = (r + dr, c + dc);
                    if rr < 0 || cc < 0 || rr >= h || cc >= w {
                        continue;
                    }
                    let v = input.get(cc as usize, rr as usize) as i32;
                    sum += wk * thresh_px(v - x, td);
                }
            }
            y[i * BLOCK + j] = x + round_shift(sum);
        }
    }
    y
}

/// Stage-2 output for one block. `stage1(col, row)` returns the first-stage
/// value for a pixel or `None` when it must be read unfiltered.
pub fn second_stage_filter(
    input: &Plane,
    stage1: impl Fn(usize, usize) -> Option<i32>,
    bx: usize,
    by: usize,
    dir: usize,
    td: i32,
) -> [i32; 64] {
    let mut z = [0i32; 64];
    let (w, h) = (input.width() as i32, input.height() as i32);
    for i in 0..BLOCK {
        for j in 0..BLOCK {
            let (r, c) = ((by * BLOCK + i) as i32, (bx * BLOCK + j) as i32);
            let x = input.get(c as usize, r as usize) as i32;
            let yc = stage1(c as usize, r as usize).unwrap_or(x);
            let t2 = second_stage_threshold(td, yc, x);
            let mut sum = 0;
            for (k, &wk) in STAGE2_TAPS.iter().enumerate() {
                let (fwd, bwd) = tap_offsets(SECOND_STAGE[dir], k as i32 + 1);
                for (dr, dc) in [fwd, bwd] {
                    let (rr, cc) = (r + dr, c + dc);
                    if rr < 0 || cc < 0 || rr >= h || cc >= w {
                        continue;
                    }
                    let (ru, cu) = (rr as usize, cc as usize);
                    let v = stage1(cu, ru).unwrap_or_else(|| input.get(cu, ru) as i32);
                    sum += wk * thresh_px(v - yc, t2);
                }
            }
            z[i * BLOCK + j] = yc + round_shift(sum);
        }
    }
    z
}

/// Filter one superblock of `input`, writing its pixels into `out`.
pub fn dering_superblock(input: &Plane, ctx: &DeringContext<'_>, sbx: usize, sby: usize, out: &mut Plane) {
    let sb = ctx.sb_size;
    let cols = input.width().div_ceil(sb);
    if !ctx.sb_enabled.is_empty() && !ctx.sb_enabled[sby * cols + sbx] {
        return;
    }
    let w8 = input.width() / BLOCK;
    let blocks: Vec<BlockAnalysis> = analyze_superblock(input, ctx.q, sb, sbx, sby)
        .into_iter()
        .filter(|b| ctx.block_mask.is_empty() || ctx.block_mask[b.by * w8 + b.bx])
        .collect();
    let (x0, y0) = (sbx * sb, sby * sb);
    let sw = sb.min(input.width() - x0);
    let sh = sb.min(input.height() - y0);
    // Stage-1 results inside this superblock; unfiltered blocks keep x.
    let mut y1: Vec<i32> = (0..sw * sh)
        .map(|i| input.get(x0 + i % sw, y0 + i / sw) as i32)
        .collect();
    for b in &blocks {
        let y = directional_filter(input, b.bx, b.by, b.direction.d_opt, b.params.td);
        for i in 0..BLOCK {
            for j in 0..BLOCK {
                let (px, py) = (b.bx * BLOCK + j - x0, b.by * BLOCK + i - y0);
                y1[py * sw + px] = y[i * BLOCK + j];
            }
        }
    }
    let lookup = |c: usize, r: usize| -> Option<i32> {
        if c >= x0 && c < x0 + sw && r >= y0 && r < y0 + sh {
            Some(y1[(r - y0) * sw + (c - x0)])
        } else {
            None
        }
    };
    for b in &blocks {
        let z = second_stage_filter(input, lookup, b.bx, b.by, b.direction.d_opt, b.params.td);
        for i in 0..BLOCK {
            for j in 0..BLOCK {
                out.set(b.bx * BLOCK + j, b.by * BLOCK + i, z[i * BLOCK + j].clamp(0, 255) as u8);
            }
        }
    }
}

/// Dering a plane, visiting superblocks in `order` (raster indices).
pub fn dering_plane_ordered(
    input: &Plane,
    ctx: &DeringContext<'_>,
    order: impl IntoIterator<Item = usize>,
) -> Plane {
    check_dims(input, ctx.sb_size);
    let cols = input.width().div_ceil(ctx.sb_size);
    let mut out = input.clone();
    for idx in order {
        dering_superblock(input, ctx, idx % cols, idx / cols, &mut out);
    }
    out
}

/// Dering a plane whose dimensions are multiples of 8.
pub fn dering_plane(input: &Plane, ctx: &DeringContext<'_>) -> Plane {
    let cols = input.width().div_ceil(ctx.sb_size);
    let rows = input.height().div_ceil(ctx.sb_size);
    dering_plane_ordered(input, ctx, 0..cols * rows)
}
