//! State shared by the encoder and decoder: geometry, adaptive models,
//! block reconstruction and the post filters.

use alloc::vec;
use alloc::vec::Vec;

use super::{DecodeError, FrameHeader};
use crate::dering::{self, DeringContext};
use crate::entropy::{SymbolModel, UintModel};
use crate::partition::{PartitionMap, MIN_BLOCK, SB_SIZE};
use crate::plane::{chroma_dims, ChromaFormat, Image, IntPlane, Plane};
use crate::predict::{self, IntraMode};
use crate::pvq::{band_count, band_layout, dequantize_band, ActivityParams, BandModels, PvqBand};
use crate::smooth;
use crate::transform::{self, to_orthonormal, CoeffBlock, COEFF_SHIFT};

/// Bound on reconstructed coefficient magnitudes. Valid streams stay far
/// below it; it keeps corrupt streams from overflowing.
const COEFF_LIMIT: i32 = 1 << 20;
/// Bound on inverse transform outputs, for the same reason.
const SPATIAL_LIMIT: i32 = 1 << 16;
/// Bound on DC residual indices.
pub(crate) const DC_LIMIT: i64 = 1 << 20;

pub(crate) fn size_index(n: usize) -> usize {
    n.trailing_zeros() as usize - 2
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Geometry {
    pub width: usize,
    pub height: usize,
    pub cols: usize,
    pub rows: usize,
    pub format: ChromaFormat,
}

impl Geometry {
    pub fn new(width: usize, height: usize, format: ChromaFormat) -> Self {
        Geometry {
            width,
            height,
            cols: width.div_ceil(SB_SIZE),
            rows: height.div_ceil(SB_SIZE),
            format,
        }
    }

    pub fn num_planes(&self) -> usize {
        if self.format.has_chroma() {
            3
        } else {
            1
        }
    }

    /// Decimation shift of plane `p` (both axes are equal for the formats
    /// supported).
    pub fn shift(&self, p: usize) -> usize {
        if p == 0 {
            0
        } else {
            self.format.decimation().0 as usize
        }
    }

    pub fn padded(&self, p: usize) -> (usize, usize) {
        let s = self.shift(p);
        ((self.cols * SB_SIZE) >> s, (self.rows * SB_SIZE) >> s)
    }

    pub fn visible(&self, p: usize) -> (usize, usize) {
        if p == 0 {
            (self.width, self.height)
        } else {
            chroma_dims(self.width, self.height, self.format)
        }
    }

    pub fn sb_size(&self, p: usize) -> usize {
        SB_SIZE >> self.shift(p)
    }
}

/// Adaptive contexts for every symbol class.
#[derive(Debug, Clone)]
pub(crate) struct Models {
    pub split: [SymbolModel; 3],
    pub dering: SymbolModel,
    pub skip: [[SymbolModel; 4]; 2],
    pub mode: [SymbolModel; 4],
    pub dc: [UintModel; 2],
    bands: Vec<BandModels>,
}

fn band_offset(n: usize) -> usize {
    (4..n).filter(|s| s.is_power_of_two()).map(band_count).sum()
}

impl Models {
    pub fn new() -> Self {
        let per_class = band_offset(64);
        Models {
            split: core::array::from_fn(|_| SymbolModel::new(2)),
            dering: SymbolModel::new(2),
            skip: core::array::from_fn(|_| core::array::from_fn(|_| SymbolModel::new(2))),
            mode: core::array::from_fn(|_| SymbolModel::new(3)),
            dc: [UintModel::new(), UintModel::new()],
            bands: vec![BandModels::new(); 2 * per_class],
        }
    }

    pub fn band(&mut self, chroma: bool, n: usize, band: usize) -> &mut BandModels {
        let per_class = band_offset(64);
        &mut self.bands[chroma as usize * per_class + band_offset(n) + band]
    }
}

pub(crate) fn zigzag(v: i64) -> u64 {
    ((v << 1) ^ (v >> 63)) as u64
}

pub(crate) fn unzigzag(v: u64) -> i64 {
    (v >> 1) as i64 ^ -((v & 1) as i64)
}

/// Coded decisions of one leaf block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct LeafSymbols {
    pub skip: bool,
    pub mode: IntraMode,
    pub dc: i64,
    pub bands: Vec<PvqBand>,
}

/// What the decoder knows about a leaf before reading its symbols.
#[derive(Debug, Clone)]
pub(crate) struct LeafContext {
    pub dc_pred: i32,
    pub above: Option<CoeffBlock>,
    pub left: Option<CoeffBlock>,
    /// Co-located luma coefficients, chroma only.
    pub cfl: Option<Vec<f64>>,
    pub chroma: bool,
}

impl LeafContext {
    pub fn mode_available(&self, mode: IntraMode) -> bool {
        match mode {
            IntraMode::None => true,
            IntraMode::Horizontal => self.left.is_some(),
            IntraMode::Vertical => self.above.is_some(),
        }
    }

    /// Per-band predictors in orthonormal units for a mode.
    pub fn predictors(&self, n: usize, mode: IntraMode) -> Vec<Option<Vec<f64>>> {
        let layout = band_layout(n);
        if self.chroma {
            return layout
                .iter()
                .map(|band| {
                    self.cfl
                        .as_ref()
                        .and_then(|l| predict::cfl_predict(l, n, band))
                })
                .collect();
        }
        let pred = predict::predict_luma(n, mode, self.above.as_ref(), self.left.as_ref());
        layout
            .iter()
            .map(|band| {
                let v: Vec<f64> = band
                    .iter()
                    .map(|&(r, c)| pred.get(r, c) as f64 * to_orthonormal(n, r, c))
                    .collect();
                v.iter().any(|&x| x != 0.0).then_some(v)
            })
            .collect()
    }
}

/// Reconstruction state of one plane.
#[derive(Debug, Clone)]
pub(crate) struct PlaneState {
    pub w4: usize,
    pub h4: usize,
    /// Leaf size covering each 4x4 unit, 0 until reconstructed.
    pub size: Vec<u8>,
    pub dc: Vec<i32>,
    pub skip: Vec<bool>,
    /// Reconstructed coefficients, each block stored over its own area.
    pub coeffs: IntPlane,
}

impl PlaneState {
    pub fn new(width: usize, height: usize) -> Self {
        let (w4, h4) = (width / MIN_BLOCK, height / MIN_BLOCK);
        PlaneState {
            w4,
            h4,
            size: vec![0; w4 * h4],
            dc: vec![0; w4 * h4],
            skip: vec![false; w4 * h4],
            coeffs: IntPlane::new(width, height),
        }
    }

    fn unit(&self, x: usize, y: usize) -> usize {
        (y / MIN_BLOCK) * self.w4 + x / MIN_BLOCK
    }

    pub fn block(&self, x: usize, y: usize, n: usize) -> CoeffBlock {
        let mut b = CoeffBlock::zeros(n);
        for r in 0..n {
            for c in 0..n {
                b.set(r, c, self.coeffs.get(x + c, y + r));
            }
        }
        b
    }

    fn neighbor(&self, x: usize, y: usize, n: usize) -> Option<CoeffBlock> {
        let u = self.unit(x, y);
        (self.size[u] as usize == n).then(|| self.block(x, y, n))
    }

    fn coded_dc(&self, x: usize, y: usize) -> Option<i32> {
        let u = self.unit(x, y);
        (self.size[u] != 0).then_some(self.dc[u])
    }
}

pub(crate) struct FrameState {
    pub geom: Geometry,
    pub planes: Vec<PlaneState>,
    pub q: u16,
}

impl FrameState {
    pub fn new(geom: Geometry, q: u16) -> Self {
        let planes = (0..geom.num_planes())
            .map(|p| {
                let (w, h) = geom.padded(p);
                PlaneState::new(w, h)
            })
            .collect();
        FrameState { geom, planes, q }
    }

    /// Quantizer step in coefficient units.
    pub fn step(&self) -> f64 {
        self.q as f64
    }

    fn step_int(&self) -> i64 {
        self.q as i64
    }

    pub fn context(&self, p: usize, x: usize, y: usize, n: usize) -> LeafContext {
        let st = &self.planes[p];
        let above = (y >= n).then(|| st.neighbor(x, y - n, n)).flatten();
        let left = (x >= n).then(|| st.neighbor(x - n, y, n)).flatten();
        let dc_above = (y > 0).then(|| st.coded_dc(x, y - 1)).flatten();
        let dc_left = (x > 0).then(|| st.coded_dc(x - 1, y)).flatten();
        let cfl = if p > 0 {
            let s = self.geom.shift(p);
            let luma = &self.planes[0];
            let (lx, ly, ln) = (x << s, y << s, n << s);
            (luma.size[luma.unit(lx, ly)] as usize == ln)
                .then(|| predict::subsample_luma_for_cfl(&luma.block(lx, ly, ln), n))
        } else {
            None
        };
        LeafContext {
            dc_pred: predict::predict_dc(dc_above, dc_left),
            above,
            left,
            cfl,
            chroma: p > 0,
        }
    }

    /// DC residual index for a block whose DC coefficient is `dc`.
    pub fn quantize_dc(&self, dc: i32, ctx: &LeafContext, n: usize) -> i64 {
        let diff = (dc as i64 - ctx.dc_pred as i64) * n as i64;
        let q = self.step_int();
        let idx = (2 * diff.abs() + q) / (2 * q);
        (if diff < 0 { -idx } else { idx }).clamp(-DC_LIMIT, DC_LIMIT)
    }

    fn dequantize_dc(&self, idx: i64, ctx: &LeafContext, n: usize) -> i32 {
        let v = ctx.dc_pred as i64 * n as i64 + idx * self.step_int();
        let n = n as i64;
        let r = (2 * v.abs() + n) / (2 * n);
        let r = if v < 0 { -r } else { r };
        r.clamp(-(COEFF_LIMIT as i64), COEFF_LIMIT as i64) as i32
    }

    /// Rebuild a leaf from its symbols and record it. Shared by the encoder
    /// and decoder so both hold identical state.
    pub fn reconstruct(
        &mut self,
        p: usize,
        x: usize,
        y: usize,
        n: usize,
        ctx: &LeafContext,
        sym: &LeafSymbols,
    ) -> Result<(), DecodeError> {
        let mut block = CoeffBlock::zeros(n);
        block.set(0, 0, self.dequantize_dc(sym.dc, ctx, n));
        if !sym.skip {
            let preds = ctx.predictors(n, sym.mode);
            let act = ActivityParams::for_block_size(n);
            let q = self.step();
            for ((band, pb), pred) in band_layout(n).iter().zip(&sym.bands).zip(&preds) {
                let signed: Option<Vec<f64>> = pred.as_ref().map(|r| {
                    let s = if pb.cfl_sign < 0 { -1.0 } else { 1.0 };
                    r.iter().map(|v| v * s).collect()
                });
                let recon = dequantize_band(pb, band.len(), signed.as_deref(), q, &act)
                    .map_err(|_| DecodeError::InvalidSymbol)?;
                for (&(r, c), v) in band.iter().zip(recon) {
                    let k = libm::round(v / to_orthonormal(n, r, c));
                    let k = k.clamp(-(COEFF_LIMIT as f64), COEFF_LIMIT as f64) as i32;
                    block.set(r, c, k);
                }
            }
        }
        let st = &mut self.planes[p];
        for r in 0..n {
            for c in 0..n {
                st.coeffs.set(x + c, y + r, block.get(r, c));
            }
        }
        for uy in y / MIN_BLOCK..(y + n) / MIN_BLOCK {
            for ux in x / MIN_BLOCK..(x + n) / MIN_BLOCK {
                let u = uy * st.w4 + ux;
                st.size[u] = n as u8;
                st.dc[u] = block.dc();
                st.skip[u] = sym.skip;
            }
        }
        Ok(())
    }
}

/// Partition maps for every plane.
pub(crate) fn plane_maps(geom: &Geometry, luma: &PartitionMap) -> Vec<PartitionMap> {
    (0..geom.num_planes())
        .map(|p| luma.scaled(geom.shift(p)))
        .collect()
}

/// Inverse transform, unlap and convert to 8-bit. Returns padded planes.
pub(crate) fn unlapped_planes(
    state: &FrameState,
    maps: &[PartitionMap],
    header: &FrameHeader,
) -> Vec<Plane> {
    let geom = &state.geom;
    (0..geom.num_planes())
        .map(|p| {
            let (w, h) = geom.padded(p);
            let map = &maps[p];
            let st = &state.planes[p];
            let mut spatial = IntPlane::new(w, h);
            for sby in 0..map.rows() {
                for sbx in 0..map.cols() {
                    for (x, y, n) in map.leaves(sbx, sby) {
                        let mut b = st.block(x, y, n).coeffs;
                        transform::idct_in_place(&mut b, n);
                        for r in 0..n {
                            for c in 0..n {
                                let v = b[r * n + c].clamp(-SPATIAL_LIMIT, SPATIAL_LIMIT);
                                spatial.set(x + c, y + r, v);
                            }
                        }
                    }
                }
            }
            let spatial = transform::postfilter_edges(&spatial, map, header.lap, geom.shift(p) > 0)
                .expect("map covers the padded plane");
            let s = geom.shift(p) as u8;
            let px = IntPlane::from_fn(w, h, |x, y| {
                ((spatial.get(x, y) + (1 << (COEFF_SHIFT - 1))) >> COEFF_SHIFT) + 128
            });
            px.to_plane(w, h, s, s)
        })
        .collect()
}

/// Deringing of padded planes with per-superblock flags.
pub(crate) fn dering_planes(
    state: &FrameState,
    planes: &[Plane],
    flags: &[bool],
    q: u16,
) -> Vec<Plane> {
    planes
        .iter()
        .enumerate()
        .map(|(p, plane)| {
            let st = &state.planes[p];
            let mask = dering::filter_mask_from_skips(&st.skip, st.w4, st.h4);
            let ctx = DeringContext {
                q: q as u32,
                sb_size: state.geom.sb_size(p),
                sb_enabled: flags,
                block_mask: &mask,
            };
            dering::dering_plane(plane, &ctx)
        })
        .collect()
}

/// Smoothing of 32x32 luma leaves and their chroma blocks, then crop.
pub(crate) fn finish(
    state: &FrameState,
    luma_map: &PartitionMap,
    mut planes: Vec<Plane>,
    header: &FrameHeader,
) -> Image {
    let geom = &state.geom;
    if header.smooth {
        let mut big = Vec::new();
        for sby in 0..luma_map.rows() {
            for sbx in 0..luma_map.cols() {
                big.extend(
                    luma_map
                        .leaves(sbx, sby)
                        .into_iter()
                        .filter(|&(_, _, n)| n == SB_SIZE)
                        .map(|(x, y, _)| (x, y)),
                );
            }
        }
        for (p, plane) in planes.iter_mut().enumerate() {
            let s = geom.shift(p);
            let blocks: Vec<_> = big.iter().map(|&(x, y)| (x >> s, y >> s)).collect();
            let alpha = if p == 0 {
                smooth::LUMA_ALPHA
            } else {
                smooth::CHROMA_ALPHA
            };
            smooth::smooth_plane(plane, &blocks, SB_SIZE >> s, alpha, header.q as u32);
        }
    }
    let cropped: Vec<Plane> = planes
        .iter()
        .enumerate()
        .map(|(p, plane)| crop(plane, geom.visible(p)))
        .collect();
    let mut it = cropped.into_iter();
    let y = it.next().expect("luma");
    match (it.next(), it.next()) {
        (Some(cb), Some(cr)) => Image::new(y, cb, cr, geom.format).expect("consistent sizes"),
        _ => Image::mono(y).expect("non-empty"),
    }
}

fn crop(plane: &Plane, (w, h): (usize, usize)) -> Plane {
    let mut samples = Vec::with_capacity(w * h);
    for y in 0..h {
        samples.extend_from_slice(&plane.row(y)[..w]);
    }
    Plane::new(w, h, plane.xdec(), plane.ydec(), samples).expect("sample count matches")
}
