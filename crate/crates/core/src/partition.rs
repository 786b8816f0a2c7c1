//! Block-size decisions: quadtrees over superblocks and the bottom-up
//! rate-distortion search that picks them.

use alloc::vec;
use alloc::vec::Vec;

use crate::pvq::{band_layout, quantize_band_rdo, ActivityParams};
use crate::transform::{self, LapConfig};

/// Superblock size in luma samples.
pub const SB_SIZE: usize = 32;

/// Smallest block size; nodes of this size are never split.
pub const MIN_BLOCK: usize = 4;

/// Quadtree over one superblock. Bit `(4^l - 1) / 3 + j` holds the split
/// flag of node `j` at depth `l`, where the children of node `j` are
/// `4j..4j+4` in raster order (top-left, top-right, bottom-left,
/// bottom-right). Flags below an unsplit node are always clear.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct SbTree(u32);

fn node_bit(level: usize, index: usize) -> usize {
    ((1usize << (2 * level)) - 1) / 3 + index
}

fn child_origin(x: usize, y: usize, n: usize, q: usize) -> (usize, usize) {
    let h = n / 2;
    (x + (q & 1) * h, y + (q >> 1) * h)
}

impl SbTree {
    pub fn unsplit() -> Self {
        SbTree(0)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn is_split(self, level: usize, index: usize) -> bool {
        self.0 >> node_bit(level, index) & 1 == 1
    }

    pub fn set_split(&mut self, level: usize, index: usize, split: bool) {
        let bit = 1u32 << node_bit(level, index);
        if split {
            self.0 |= bit;
        } else {
            self.0 &= !bit;
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn walk(
        self,
        level: usize,
        index: usize,
        x: usize,
        y: usize,
        n: usize,
        on_split: &mut impl FnMut(usize, usize, usize, usize),
        on_leaf: &mut impl FnMut(usize, usize, usize),
    ) {
        if n > MIN_BLOCK && self.is_split(level, index) {
            on_split(x, y, n, level);
            for q in 0..4 {
                let (cx, cy) = child_origin(x, y, n, q);
                self.walk(level + 1, 4 * index + q, cx, cy, n / 2, on_split, on_leaf);
            }
        } else {
            on_leaf(x, y, n);
        }
    }

    /// Call `f(x, y, size, depth)` for every split node, parent before
    /// children, children in raster order.
    pub fn visit_splits(self, root: usize, mut f: impl FnMut(usize, usize, usize, usize)) {
        self.walk(0, 0, 0, 0, root, &mut f, &mut |_, _, _| {});
    }

    /// Leaves `(x, y, size)` in depth-first order.
    pub fn leaves(self, root: usize) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        self.walk(0, 0, 0, 0, root, &mut |_, _, _, _| {}, &mut |x, y, n| {
            out.push((x, y, n))
        });
        out
    }

    /// `(depth, split)` for every splittable node in coding order.
    pub fn flags(self, root: usize) -> Vec<(usize, bool)> {
        let mut out = Vec::new();
        self.collect_flags(0, 0, root, &mut out);
        out
    }

    fn collect_flags(self, level: usize, index: usize, n: usize, out: &mut Vec<(usize, bool)>) {
        if n <= MIN_BLOCK {
            return;
        }
        let split = self.is_split(level, index);
        out.push((level, split));
        if split {
            for q in 0..4 {
                self.collect_flags(level + 1, 4 * index + q, n / 2, out);
            }
        }
    }

    /// Rebuild a tree from split flags supplied in coding order; `next`
    /// receives the depth of the node whose flag it returns.
    pub fn from_flags<E>(
        root: usize,
        mut next: impl FnMut(usize) -> Result<bool, E>,
    ) -> Result<Self, E> {
        let mut tree = SbTree::unsplit();
        tree.read_flags(0, 0, root, &mut next)?;
        Ok(tree)
    }

    fn read_flags<E>(
        &mut self,
        level: usize,
        index: usize,
        n: usize,
        next: &mut impl FnMut(usize) -> Result<bool, E>,
    ) -> Result<(), E> {
        if n <= MIN_BLOCK || !next(level)? {
            return Ok(());
        }
        self.set_split(level, index, true);
        for q in 0..4 {
            self.read_flags(level + 1, 4 * index + q, n / 2, next)?;
        }
        Ok(())
    }

    /// Tree for a plane whose superblocks are `root >> shift` wide: node
    /// sizes halve and splits that would go below the minimum block size
    /// are dropped.
    pub fn scaled(self, root: usize, shift: usize) -> SbTree {
        let mut out = SbTree::unsplit();
        let small_root = root >> shift;
        let mut levels = 0;
        while (small_root >> levels) > MIN_BLOCK {
            levels += 1;
        }
        for level in 0..levels {
            for index in 0..1usize << (2 * level) {
                if self.is_split(level, index) {
                    out.set_split(level, index, true);
                }
            }
        }
        out
    }

    /// Every legal tree over a `root`-sized superblock.
    pub fn enumerate(root: usize) -> Vec<SbTree> {
        fn subtrees(level: usize, index: usize, n: usize) -> Vec<u32> {
            let mut out = vec![0u32];
            if n <= MIN_BLOCK {
                return out;
            }
            let mut combos = vec![1u32 << node_bit(level, index)];
            for q in 0..4 {
                let kids = subtrees(level + 1, 4 * index + q, n / 2);
                combos = combos
                    .iter()
                    .flat_map(|&c| kids.iter().map(move |&k| c | k))
                    .collect();
            }
            out.extend(combos);
            out
        }
        subtrees(0, 0, root).into_iter().map(SbTree).collect()
    }
}

/// Trees for every superblock of a plane.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartitionMap {
    sb_size: usize,
    cols: usize,
    rows: usize,
    trees: Vec<SbTree>,
}

impl PartitionMap {
    pub fn new(cols: usize, rows: usize, sb_size: usize) -> Self {
        PartitionMap {
            sb_size,
            cols,
            rows,
            trees: vec![SbTree::unsplit(); cols * rows],
        }
    }

    pub fn sb_size(&self) -> usize {
        self.sb_size
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn tree(&self, sbx: usize, sby: usize) -> SbTree {
        self.trees[sby * self.cols + sbx]
    }

    pub fn set_tree(&mut self, sbx: usize, sby: usize, tree: SbTree) {
        self.trees[sby * self.cols + sbx] = tree;
    }

    /// Map for a chroma plane decimated by `shift` in both directions.
    pub fn scaled(&self, shift: usize) -> PartitionMap {
        PartitionMap {
            sb_size: self.sb_size >> shift,
            cols: self.cols,
            rows: self.rows,
            trees: self
                .trees
                .iter()
                .map(|t| t.scaled(self.sb_size, shift))
                .collect(),
        }
    }

    /// Leaves `(x, y, size)` in plane coordinates, superblocks in raster
    /// order.
    pub fn leaves(&self, sbx: usize, sby: usize) -> Vec<(usize, usize, usize)> {
        let (ox, oy) = (sbx * self.sb_size, sby * self.sb_size);
        self.tree(sbx, sby)
            .leaves(self.sb_size)
            .into_iter()
            .map(|(x, y, n)| (ox + x, oy + y, n))
            .collect()
    }

    /// Size of the block covering each 4x4 unit, row-major.
    pub fn size_grid(&self) -> Vec<u8> {
        let w = self.cols * self.sb_size / MIN_BLOCK;
        let h = self.rows * self.sb_size / MIN_BLOCK;
        let mut grid = vec![0u8; w * h];
        for sby in 0..self.rows {
            for sbx in 0..self.cols {
                for (x, y, n) in self.leaves(sbx, sby) {
                    for gy in y / MIN_BLOCK..(y + n) / MIN_BLOCK {
                        for gx in x / MIN_BLOCK..(x + n) / MIN_BLOCK {
                            grid[gy * w + gx] = n as u8;
                        }
                    }
                }
            }
        }
        grid
    }
}

/// Rate and distortion of a coding choice. Rates are in 1/256 bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct RdCost {
    pub distortion: u64,
    pub rate: u64,
}

impl RdCost {
    pub const RATE_SCALE: u64 = 256;

    pub fn from_real(distortion: f64, bits: f64) -> Self {
        RdCost {
            distortion: libm::round(distortion.max(0.0)) as u64,
            rate: libm::round(bits.max(0.0) * Self::RATE_SCALE as f64) as u64,
        }
    }

    /// `distortion + lambda * rate`, scaled by [`Self::RATE_SCALE`].
    pub fn cost(self, lambda: u64) -> u128 {
        self.distortion as u128 * Self::RATE_SCALE as u128 + lambda as u128 * self.rate as u128
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(self, other: RdCost) -> RdCost {
        RdCost {
            distortion: self.distortion + other.distortion,
            rate: self.rate + other.rate,
        }
    }
}

/// Cost in bits of one split flag.
pub const SPLIT_FLAG_BITS: f64 = 1.0;
/// Cost in bits of the skip flag.
pub const SKIP_FLAG_BITS: f64 = 1.0;

/// Lagrange multiplier for a quantizer step, in squared coefficient units
/// per bit.
pub fn lambda_for_q(q: f64) -> u64 {
    libm::round(0.115 * q * q).max(1.0) as u64
}

/// Estimated bits for a scalar DC index.
pub fn dc_bits(index: i32) -> f64 {
    if index == 0 {
        1.0
    } else {
        2.0 + 2.0 * libm::log2(1.0 + index.unsigned_abs() as f64)
    }
}

/// Cost of coding a lapped `n`x`n` block on its own, without prediction.
pub fn rd_cost(block: &[i32], n: usize, q: f64, lambda: u64) -> RdCost {
    let mut coeffs = block.to_vec();
    transform::fdct_in_place(&mut coeffs, n);
    coeff_rd_cost(&coeffs, n, q, lambda)
}

/// [`rd_cost`] on already transformed coefficients.
pub fn coeff_rd_cost(coeffs: &[i32], n: usize, q: f64, lambda: u64) -> RdCost {
    if coeffs.iter().all(|&c| c == 0) {
        return RdCost::from_real(0.0, SKIP_FLAG_BITS);
    }
    let dc = coeffs[0] as f64 * transform::to_orthonormal(n, 0, 0);
    let dc_index = libm::round(dc / q) as i32;
    let dc_err = dc - dc_index as f64 * q;
    let mut distortion = dc_err * dc_err;
    let mut bits = SKIP_FLAG_BITS + dc_bits(dc_index);
    let act = ActivityParams::for_block_size(n);
    let mut any_ac = false;
    let mut ac_bits = 0.0;
    let mut ac_energy = 0.0;
    for band in band_layout(n) {
        let x: Vec<f64> = band
            .iter()
            .map(|&(r, c)| coeffs[r * n + c] as f64 * transform::to_orthonormal(n, r, c))
            .collect();
        ac_energy += x.iter().map(|v| v * v).sum::<f64>();
        let choice = quantize_band_rdo(&x, None, q, &act, lambda as f64);
        any_ac |= choice.band.gain_index > 0;
        distortion += choice.distortion;
        ac_bits += choice.rate;
    }
    if any_ac {
        bits += ac_bits;
    } else {
        distortion = dc_err * dc_err + ac_energy;
    }
    RdCost::from_real(distortion, bits)
}

/// Result of [`choose_partition`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartitionChoice {
    pub tree: SbTree,
    pub cost: RdCost,
}

/// Pick the superblock quadtree with the lowest `D + lambda * R`.
///
/// `block` is the `root`x`root` superblock, row-major, with superblock edges
/// already lapped. Each node compares coding itself whole against the best
/// split, where the split has its interior cross lapped first. Ties keep the
/// larger block.
pub fn choose_partition(
    block: &[i32],
    root: usize,
    cfg: LapConfig,
    subsampled: bool,
    q: f64,
    lambda: u64,
) -> PartitionChoice {
    choose_partition_with(block, root, cfg, subsampled, lambda, |data, n| {
        rd_cost(data, n, q, lambda)
    })
}

/// [`choose_partition`] with a caller-supplied leaf cost.
pub fn choose_partition_with(
    block: &[i32],
    root: usize,
    cfg: LapConfig,
    subsampled: bool,
    lambda: u64,
    mut leaf_cost: impl FnMut(&[i32], usize) -> RdCost,
) -> PartitionChoice {
    let mut tree = SbTree::unsplit();
    let cost = search(block, root, 0, 0, cfg, subsampled, lambda, &mut leaf_cost, &mut tree);
    PartitionChoice { tree, cost }
}

#[allow(clippy::too_many_arguments)]
fn search(
    data: &[i32],
    n: usize,
    level: usize,
    index: usize,
    cfg: LapConfig,
    subsampled: bool,
    lambda: u64,
    leaf_cost: &mut impl FnMut(&[i32], usize) -> RdCost,
    tree: &mut SbTree,
) -> RdCost {
    let whole = leaf_cost(data, n);
    if n <= MIN_BLOCK {
        return whole;
    }
    let flag = RdCost::from_real(0.0, SPLIT_FLAG_BITS);
    let whole = whole.add(flag);
    let lapped = transform::lap_node_cross(data, n, cfg, subsampled);
    let h = n / 2;
    let mut split_cost = flag;
    let mut sub = *tree;
    for q in 0..4 {
        let (cx, cy) = child_origin(0, 0, n, q);
        let mut child = vec![0i32; h * h];
        for y in 0..h {
            child[y * h..(y + 1) * h].copy_from_slice(&lapped[(cy + y) * n + cx..(cy + y) * n + cx + h]);
        }
        let c = search(&child, h, level + 1, 4 * index + q, cfg, subsampled, lambda, leaf_cost, &mut sub);
        split_cost = split_cost.add(c);
    }
    if split_cost.cost(lambda) < whole.cost(lambda) {
        sub.set_split(level, index, true);
        *tree = sub;
        split_cost
    } else {
        whole
    }
}
