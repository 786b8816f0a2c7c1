use alloc::vec;
use alloc::vec::Vec;

use super::frame::{
    dering_planes, finish, plane_maps, size_index, unlapped_planes, zigzag, FrameState, Geometry,
    LeafContext, LeafSymbols, Models,
};
use super::{EncodeError, EncoderOptions, FrameHeader, MAX_DIMENSION, MAX_Q, MIN_Q};
use crate::entropy::RangeEncoder;
use crate::partition::{choose_partition, lambda_for_q, PartitionMap, SbTree, SB_SIZE};
use crate::plane::{Image, IntPlane, Plane};
use crate::predict::{cfl_sign, IntraMode};
use crate::pvq::{band_layout, quantize_band_rdo, ActivityParams, BandChoice, PvqBand};
use crate::transform::{self, apply_edge, to_orthonormal, COEFF_SHIFT};

/// One coded leaf, kept until the entropy coding pass.
struct LeafRecord {
    p: usize,
    n: usize,
    sym: LeafSymbols,
    /// Per band: predictor present, chroma-from-luma.
    band_flags: Vec<(bool, bool)>,
}

struct SbRecord {
    tree: SbTree,
    leaves: Vec<LeafRecord>,
}

/// Encode an image.
pub fn encode(img: &Image, opts: &EncoderOptions) -> Result<Vec<u8>, EncodeError> {
    encode_with_reconstruction(img, opts).map(|(bytes, _)| bytes)
}

fn centered(plane: &Plane, w: usize, h: usize) -> IntPlane {
    let mut p = IntPlane::padded_from(plane, w, h);
    for v in p.data.iter_mut() {
        *v = (*v - 128) << COEFF_SHIFT;
    }
    p
}

fn region(plane: &IntPlane, x: usize, y: usize, n: usize) -> Vec<i32> {
    let mut out = Vec::with_capacity(n * n);
    for r in 0..n {
        out.extend_from_slice(&plane.data[(y + r) * plane.width + x..(y + r) * plane.width + x + n]);
    }
    out
}

/// Encode an image and also return the decoder's reconstruction.
pub fn encode_with_reconstruction(
    img: &Image,
    opts: &EncoderOptions,
) -> Result<(Vec<u8>, Image), EncodeError> {
    if !(MIN_Q..=MAX_Q).contains(&opts.q) {
        return Err(EncodeError::Quantizer(opts.q));
    }
    let (width, height) = (img.width(), img.height());
    if width > MAX_DIMENSION || height > MAX_DIMENSION {
        return Err(EncodeError::TooLarge { width, height });
    }
    if width == 0 || height == 0 {
        return Err(EncodeError::Plane(crate::plane::PlaneError::Empty));
    }
    let header = FrameHeader {
        width: width as u32,
        height: height as u32,
        format: img.format,
        lap: opts.lap,
        dering: opts.dering,
        smooth: opts.smooth,
        q: opts.q,
    };
    let geom = Geometry::new(width, height, img.format);
    let mut state = FrameState::new(geom, opts.q);
    let q = state.step();
    let lambda = lambda_for_q(q);

    let source: Vec<IntPlane> = (0..geom.num_planes())
        .map(|p| {
            let (w, h) = geom.padded(p);
            centered(img.plane(p), w, h)
        })
        .collect();

    // Block sizes from the luma plane with only superblock edges lapped.
    let (lw, lh) = geom.padded(0);
    let mut sb_lapped = source[0].clone();
    for op in transform::superblock_edges(lw, lh, SB_SIZE, opts.lap, false) {
        apply_edge(&mut sb_lapped, &op, false);
    }
    let mut luma_map = PartitionMap::new(geom.cols, geom.rows, SB_SIZE);
    for sby in 0..geom.rows {
        for sbx in 0..geom.cols {
            let block = region(&sb_lapped, sbx * SB_SIZE, sby * SB_SIZE, SB_SIZE);
            let choice = choose_partition(&block, SB_SIZE, opts.lap, false, q, lambda);
            luma_map.set_tree(sbx, sby, choice.tree);
        }
    }
    let maps = plane_maps(&geom, &luma_map);
    let lapped: Vec<IntPlane> = source
        .iter()
        .enumerate()
        .map(|(p, plane)| {
            transform::prefilter_edges(plane, &maps[p], opts.lap, geom.shift(p) > 0)
                .expect("map covers the padded plane")
        })
        .collect();

    let mut records = Vec::with_capacity(geom.cols * geom.rows);
    for sby in 0..geom.rows {
        for sbx in 0..geom.cols {
            let mut leaves = Vec::new();
            for (p, map) in maps.iter().enumerate() {
                for (x, y, n) in map.leaves(sbx, sby) {
                    let mut coeffs = region(&lapped[p], x, y, n);
                    transform::fdct_in_place(&mut coeffs, n);
                    let ctx = state.context(p, x, y, n);
                    let (sym, band_flags) = choose_leaf(&state, &ctx, &coeffs, n, lambda);
                    state
                        .reconstruct(p, x, y, n, &ctx, &sym)
                        .expect("encoder symbols are valid");
                    leaves.push(LeafRecord {
                        p,
                        n,
                        sym,
                        band_flags,
                    });
                }
            }
            records.push(SbRecord {
                tree: luma_map.tree(sbx, sby),
                leaves,
            });
        }
    }

    let plain = unlapped_planes(&state, &maps, &header);
    let flags = if opts.dering {
        let all_on = vec![true; geom.cols * geom.rows];
        let filtered = dering_planes(&state, &plain, &all_on, opts.q);
        choose_dering_flags(&geom, img, &plain, &filtered)
    } else {
        Vec::new()
    };
    let post = if opts.dering {
        dering_planes(&state, &plain, &flags, opts.q)
    } else {
        plain
    };
    let recon = finish(&state, &luma_map, post, &header);

    let mut out = Vec::new();
    header.write(&mut out);
    out.extend(write_payload(&records, &flags, opts, q));
    Ok((out, recon))
}

/// Enable deringing on superblocks where it lowers the squared error
/// against the source.
fn choose_dering_flags(geom: &Geometry, img: &Image, plain: &[Plane], filtered: &[Plane]) -> Vec<bool> {
    let mut flags = Vec::with_capacity(geom.cols * geom.rows);
    for sby in 0..geom.rows {
        for sbx in 0..geom.cols {
            let (mut before, mut after) = (0u64, 0u64);
            for p in 0..geom.num_planes() {
                let sb = geom.sb_size(p);
                let (vw, vh) = geom.visible(p);
                let src = img.plane(p);
                for y in sby * sb..((sby + 1) * sb).min(vh) {
                    for x in sbx * sb..((sbx + 1) * sb).min(vw) {
                        let s = src.get(x, y) as i64;
                        let a = plain[p].get(x, y) as i64 - s;
                        let b = filtered[p].get(x, y) as i64 - s;
                        before += (a * a) as u64;
                        after += (b * b) as u64;
                    }
                }
            }
            flags.push(after < before);
        }
    }
    flags
}

fn band_values(coeffs: &[i32], n: usize, band: &[(usize, usize)]) -> Vec<f64> {
    band.iter()
        .map(|&(r, c)| coeffs[r * n + c] as f64 * to_orthonormal(n, r, c))
        .collect()
}

/// Best quantization of one band given its optional predictor.
fn choose_band(
    x: &[f64],
    pred: Option<&Vec<f64>>,
    cfl: bool,
    q: f64,
    act: &ActivityParams,
    lambda: f64,
) -> BandChoice {
    let Some(r) = pred else {
        return quantize_band_rdo(x, None, q, act, lambda);
    };
    let sign = if cfl { cfl_sign(x, r) } else { 1 };
    let signed: Vec<f64> = r.iter().map(|v| v * sign as f64).collect();
    let mut with_ref = quantize_band_rdo(x, Some(&signed), q, act, lambda);
    if cfl && !with_ref.band.noref && with_ref.band.gain_index > 0 {
        with_ref.band.cfl_sign = sign;
    }
    let mut noref = quantize_band_rdo(x, None, q, act, lambda);
    // Both candidates carry the noref flag; `band_rate` already counts it
    // for the predicted path.
    noref.rate += 1.0;
    if noref.distortion + lambda * noref.rate < with_ref.distortion + lambda * with_ref.rate {
        noref
    } else {
        with_ref
    }
}

/// Cost, mode, bands and per-band flags of one intra mode.
type ModeChoice = (f64, IntraMode, Vec<PvqBand>, Vec<(bool, bool)>);

fn choose_leaf(
    state: &FrameState,
    ctx: &LeafContext,
    coeffs: &[i32],
    n: usize,
    lambda: u64,
) -> (LeafSymbols, Vec<(bool, bool)>) {
    let q = state.step();
    let lambda = lambda as f64;
    let act = ActivityParams::for_block_size(n);
    let layout = band_layout(n);
    let dc = state.quantize_dc(coeffs[0], ctx, n);
    let modes: &[IntraMode] = if ctx.chroma {
        &[IntraMode::None]
    } else {
        &IntraMode::ALL
    };
    let mut best: Option<ModeChoice> = None;
    for &mode in modes {
        if !ctx.mode_available(mode) {
            continue;
        }
        let preds = ctx.predictors(n, mode);
        let mut cost = 0.0;
        let mut bands = Vec::with_capacity(layout.len());
        let mut flags = Vec::with_capacity(layout.len());
        for (band, pred) in layout.iter().zip(&preds) {
            let x = band_values(coeffs, n, band);
            let choice = choose_band(&x, pred.as_ref(), ctx.chroma, q, &act, lambda);
            cost += choice.distortion + lambda * choice.rate;
            bands.push(choice.band);
            flags.push((pred.is_some(), ctx.chroma));
        }
        if best.as_ref().is_none_or(|b| cost < b.0) {
            best = Some((cost, mode, bands, flags));
        }
    }
    let (_, mode, bands, flags) = best.expect("mode none is always available");
    if bands.iter().all(|b| b.gain_index == 0) {
        return (
            LeafSymbols {
                skip: true,
                mode: IntraMode::None,
                dc,
                bands: Vec::new(),
            },
            Vec::new(),
        );
    }
    (
        LeafSymbols {
            skip: false,
            mode,
            dc,
            bands,
        },
        flags,
    )
}

fn write_payload(records: &[SbRecord], dering: &[bool], opts: &EncoderOptions, q: f64) -> Vec<u8> {
    let mut enc = RangeEncoder::new();
    let mut models = Models::new();
    for (i, sb) in records.iter().enumerate() {
        for (level, split) in sb.tree.flags(SB_SIZE) {
            enc.encode_bool(&mut models.split[level], split);
        }
        if opts.dering {
            enc.encode_bool(&mut models.dering, dering[i]);
        }
        for leaf in &sb.leaves {
            let chroma = leaf.p > 0;
            let si = size_index(leaf.n);
            let sym = &leaf.sym;
            enc.encode_bool(&mut models.skip[chroma as usize][si], sym.skip);
            if !chroma && !sym.skip {
                enc.encode_symbol(&mut models.mode[si], sym.mode.index());
            }
            models.dc[chroma as usize].encode(&mut enc, zigzag(sym.dc));
            if sym.skip {
                continue;
            }
            let act = ActivityParams::for_block_size(leaf.n);
            for (b, (band, &(has_pred, cfl))) in band_layout(leaf.n)
                .iter()
                .zip(&leaf.band_flags)
                .enumerate()
            {
                models.band(chroma, leaf.n, b).encode(
                    &mut enc,
                    &sym.bands[b],
                    band.len(),
                    has_pred,
                    cfl,
                    q,
                    &act,
                );
            }
        }
    }
    enc.finish()
}
