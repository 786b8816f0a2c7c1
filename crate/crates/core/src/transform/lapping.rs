//! Time-domain lapping pre/post filters.
//!
//! A lapping filter straddles one block edge and touches `taps / 2` samples
//! on either side. Mirrored sample pairs go through an S-transform, the
//! difference channel is sheared (differences nearer the edge are adjusted
//! by a multiple of the outermost difference) and the butterfly is undone.
//! The prefilter turns a linear ramp across the edge into a step; the
//! postfilter turns a step back into a ramp. Constant input passes through
//! unchanged.
//!
//! Edges are filtered in a recursive order: superblock edges first, then
//! for every split node its interior cross, parent before children.

use alloc::vec::Vec;

use super::TransformError;
use crate::partition::PartitionMap;
use crate::plane::IntPlane;

/// Lapping configuration, fixed per bitstream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum LapConfig {
    /// 4-point lapping on every block edge.
    #[default]
    FourPoint,
    /// 8-point lapping on every edge except the interior edges of split
    /// 8x8 blocks, which get 4-point lapping.
    EightExterior,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// Edge is a vertical line; the filter runs along rows.
    Vertical,
    /// Edge is a horizontal line; the filter runs down columns.
    Horizontal,
}

/// One edge segment to lap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EdgeOp {
    pub orientation: Orientation,
    /// Column (vertical edges) or row (horizontal edges) of the first sample
    /// after the edge.
    pub pos: usize,
    /// Extent along the edge, `[start, end)`.
    pub start: usize,
    pub end: usize,
    pub taps: usize,
    /// 0 for superblock edges, otherwise the depth of the split node.
    pub level: usize,
}

// Shear weights, Q6, applied to the outermost difference.
const SHEAR4: [i32; 1] = [43];
const SHEAR8: [i32; 3] = [18, 37, 55];

#[inline(always)]
fn shear(v: i32, c: i32) -> i32 {
    ((v as i64 * c as i64 + 32) >> 6) as i32
}

fn prefilter_line<const T: usize>(x: &mut [i32; T]) {
    let h = T / 2;
    let mut d = [0i32; 4];
    let mut m = [0i32; 4];
    for k in 0..h {
        d[k] = x[k] - x[T - 1 - k];
        m[k] = x[T - 1 - k] + (d[k] >> 1);
    }
    let weights: &[i32] = if T == 4 { &SHEAR4 } else { &SHEAR8 };
    for k in 1..h {
        d[k] += shear(d[0], weights[k - 1]);
    }
    for k in 0..h {
        let b = m[k] - (d[k] >> 1);
        x[k] = b + d[k];
        x[T - 1 - k] = b;
    }
}

fn postfilter_line<const T: usize>(x: &mut [i32; T]) {
    let h = T / 2;
    let mut d = [0i32; 4];
    let mut m = [0i32; 4];
    for k in 0..h {
        d[k] = x[k] - x[T - 1 - k];
        m[k] = x[T - 1 - k] + (d[k] >> 1);
    }
    let weights: &[i32] = if T == 4 { &SHEAR4 } else { &SHEAR8 };
    for k in 1..h {
        d[k] -= shear(d[0], weights[k - 1]);
    }
    for k in 0..h {
        let b = m[k] - (d[k] >> 1);
        x[k] = b + d[k];
        x[T - 1 - k] = b;
    }
}

fn apply_op<const T: usize>(plane: &mut IntPlane, op: &EdgeOp, inverse: bool) {
    let h = T / 2;
    let mut buf = [0i32; T];
    for along in op.start..op.end {
        let coord = |i: usize| match op.orientation {
            Orientation::Vertical => (op.pos - h + i, along),
            Orientation::Horizontal => (along, op.pos - h + i),
        };
        for (i, v) in buf.iter_mut().enumerate() {
            let (x, y) = coord(i);
            *v = plane.get(x, y);
        }
        if inverse {
            postfilter_line(&mut buf);
        } else {
            prefilter_line(&mut buf);
        }
        for (i, &v) in buf.iter().enumerate() {
            let (x, y) = coord(i);
            plane.set(x, y, v);
        }
    }
}

/// Apply one edge operation, forward (pre) or inverse (post).
pub fn apply_edge(plane: &mut IntPlane, op: &EdgeOp, inverse: bool) {
    match op.taps {
        4 => apply_op::<4>(plane, op, inverse),
        8 => apply_op::<8>(plane, op, inverse),
        t => unreachable!("{t}-point lapping"),
    }
}

fn tap_count(cfg: LapConfig, subsampled: bool, node_size: usize) -> usize {
    match cfg {
        LapConfig::FourPoint => 4,
        LapConfig::EightExterior if subsampled || node_size == 8 => 4,
        LapConfig::EightExterior => 8,
    }
}

/// Superblock edges of a `width`x`height` plane tiled by `sb`-sized blocks.
pub(crate) fn superblock_edges(
    width: usize,
    height: usize,
    sb: usize,
    cfg: LapConfig,
    subsampled: bool,
) -> Vec<EdgeOp> {
    let taps = tap_count(cfg, subsampled, usize::MAX);
    let mut ops = Vec::new();
    for x in (sb..width).step_by(sb) {
        ops.push(EdgeOp {
            orientation: Orientation::Vertical,
            pos: x,
            start: 0,
            end: height,
            taps,
            level: 0,
        });
    }
    for y in (sb..height).step_by(sb) {
        ops.push(EdgeOp {
            orientation: Orientation::Horizontal,
            pos: y,
            start: 0,
            end: width,
            taps,
            level: 0,
        });
    }
    ops
}

/// Interior edges of the split nodes of one superblock, parent first.
pub(crate) fn interior_edges(
    map: &PartitionMap,
    sbx: usize,
    sby: usize,
    cfg: LapConfig,
    subsampled: bool,
    ops: &mut Vec<EdgeOp>,
) {
    let sb = map.sb_size();
    map.tree(sbx, sby).visit_splits(sb, |x, y, n, depth| {
        let (x, y) = (sbx * sb + x, sby * sb + y);
        let taps = tap_count(cfg, subsampled, n);
        ops.push(EdgeOp {
            orientation: Orientation::Vertical,
            pos: x + n / 2,
            start: y,
            end: y + n,
            taps,
            level: depth + 1,
        });
        ops.push(EdgeOp {
            orientation: Orientation::Horizontal,
            pos: y + n / 2,
            start: x,
            end: x + n,
            taps,
            level: depth + 1,
        });
    });
}

/// Lap the interior cross of a single `n`x`n` node held row-major in
/// `data`, as done when that node is split.
pub fn lap_node_cross(data: &[i32], n: usize, cfg: LapConfig, subsampled: bool) -> Vec<i32> {
    let mut plane = IntPlane::from_fn(n, n, |x, y| data[y * n + x]);
    let taps = tap_count(cfg, subsampled, n);
    for orientation in [Orientation::Vertical, Orientation::Horizontal] {
        let op = EdgeOp {
            orientation,
            pos: n / 2,
            start: 0,
            end: n,
            taps,
            level: 1,
        };
        apply_edge(&mut plane, &op, false);
    }
    plane.data
}

/// Every edge operation of the plane in prefilter order.
pub fn lap_edges(
    width: usize,
    height: usize,
    map: &PartitionMap,
    cfg: LapConfig,
    subsampled: bool,
) -> Result<Vec<EdgeOp>, TransformError> {
    let sb = map.sb_size();
    let (want_w, want_h) = (map.cols() * sb, map.rows() * sb);
    if width != want_w || height != want_h {
        return Err(TransformError::TreeMismatch {
            width,
            height,
            want_w,
            want_h,
        });
    }
    let mut ops = superblock_edges(width, height, sb, cfg, subsampled);
    for sby in 0..map.rows() {
        for sbx in 0..map.cols() {
            interior_edges(map, sbx, sby, cfg, subsampled, &mut ops);
        }
    }
    Ok(ops)
}

/// Lap every block edge of `plane` following the partition, outer edges
/// first. `subsampled` selects the chroma rule (always 4-point).
pub fn prefilter_edges(
    plane: &IntPlane,
    map: &PartitionMap,
    cfg: LapConfig,
    subsampled: bool,
) -> Result<IntPlane, TransformError> {
    let mut out = plane.clone();
    for op in lap_edges(plane.width, plane.height, map, cfg, subsampled)? {
        apply_edge(&mut out, &op, false);
    }
    Ok(out)
}

/// Exact inverse of [`prefilter_edges`], inner edges first.
pub fn postfilter_edges(
    plane: &IntPlane,
    map: &PartitionMap,
    cfg: LapConfig,
    subsampled: bool,
) -> Result<IntPlane, TransformError> {
    let mut out = plane.clone();
    for op in lap_edges(plane.width, plane.height, map, cfg, subsampled)?
        .iter()
        .rev()
    {
        apply_edge(&mut out, op, true);
    }
    Ok(out)
}
