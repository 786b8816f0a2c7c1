use alloc::vec::Vec;

use super::frame::{
    dering_planes, finish, plane_maps, size_index, unlapped_planes, unzigzag, FrameState, Geometry,
    LeafSymbols, Models, DC_LIMIT,
};
use super::{DecodeError, FrameHeader, HEADER_LEN};
use crate::dering::{analyze_plane, BlockAnalysis};
use crate::entropy::RangeDecoder;
use crate::partition::{PartitionMap, SbTree, SB_SIZE};
use crate::plane::{Image, Plane};
use crate::predict::IntraMode;
use crate::pvq::{band_layout, ActivityParams};

/// Everything recovered from a bitstream before the final image is built.
struct Decoded {
    header: FrameHeader,
    state: FrameState,
    luma_map: PartitionMap,
    /// Padded planes before deringing.
    plain: Vec<Plane>,
    dering_flags: Vec<bool>,
}

fn decode_symbols(buf: &[u8]) -> Result<Decoded, DecodeError> {
    let header = FrameHeader::read(buf)?;
    let geom = Geometry::new(header.width as usize, header.height as usize, header.format);
    let mut state = FrameState::new(geom, header.q);
    let q = state.step();
    let mut dec = RangeDecoder::new(&buf[HEADER_LEN..])?;
    let mut models = Models::new();
    let mut luma_map = PartitionMap::new(geom.cols, geom.rows, SB_SIZE);
    let mut dering_flags = Vec::new();
    for sby in 0..geom.rows {
        for sbx in 0..geom.cols {
            let tree = SbTree::from_flags(SB_SIZE, |level| dec.decode_bool(&mut models.split[level]))?;
            luma_map.set_tree(sbx, sby, tree);
            if header.dering {
                dering_flags.push(dec.decode_bool(&mut models.dering)?);
            }
            for p in 0..geom.num_planes() {
                let map = luma_map.scaled(geom.shift(p));
                for (x, y, n) in map.leaves(sbx, sby) {
                    let ctx = state.context(p, x, y, n);
                    let chroma = p > 0;
                    let si = size_index(n);
                    let skip = dec.decode_bool(&mut models.skip[chroma as usize][si])?;
                    let mode = if !chroma && !skip {
                        IntraMode::from_index(dec.decode_symbol(&mut models.mode[si])?)
                            .ok_or(DecodeError::InvalidSymbol)?
                    } else {
                        IntraMode::None
                    };
                    let dc = unzigzag(models.dc[chroma as usize].decode(&mut dec)?);
                    if !(-DC_LIMIT..=DC_LIMIT).contains(&dc) {
                        return Err(DecodeError::InvalidSymbol);
                    }
                    let mut bands = Vec::new();
                    if !skip {
                        let act = ActivityParams::for_block_size(n);
                        let preds = ctx.predictors(n, mode);
                        for (b, (band, pred)) in band_layout(n).iter().zip(&preds).enumerate() {
                            bands.push(models.band(chroma, n, b).decode(
                                &mut dec,
                                band.len(),
                                pred.is_some(),
                                chroma,
                                q,
                                &act,
                            )?);
                        }
                    }
                    let sym = LeafSymbols {
                        skip,
                        mode,
                        dc,
                        bands,
                    };
                    state.reconstruct(p, x, y, n, &ctx, &sym)?;
                }
            }
        }
    }
    let maps = plane_maps(&geom, &luma_map);
    let plain = unlapped_planes(&state, &maps, &header);
    Ok(Decoded {
        header,
        state,
        luma_map,
        plain,
        dering_flags,
    })
}

/// Decode a bitstream.
pub fn decode(buf: &[u8]) -> Result<Image, DecodeError> {
    let d = decode_symbols(buf)?;
    let post = if d.header.dering {
        dering_planes(&d.state, &d.plain, &d.dering_flags, d.header.q)
    } else {
        d.plain
    };
    Ok(finish(&d.state, &d.luma_map, post, &d.header))
}

/// Decoder-side view of a bitstream for inspection.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub header: FrameHeader,
    /// Luma leaves `(x, y, size)` that touch the visible image.
    pub leaves: Vec<(usize, usize, usize)>,
    /// Per-superblock deringing flags (empty when deringing is off).
    pub dering_flags: Vec<bool>,
    /// Direction and thresholds of every visible 8x8 luma block, computed
    /// on the image entering the deringing filter.
    pub directions: Vec<BlockAnalysis>,
}

/// Decode the symbols of a bitstream and report block sizes and deringing
/// directions.
pub fn analyze(buf: &[u8]) -> Result<Analysis, DecodeError> {
    let d = decode_symbols(buf)?;
    let (w, h) = (d.header.width as usize, d.header.height as usize);
    let mut leaves = Vec::new();
    for sby in 0..d.luma_map.rows() {
        for sbx in 0..d.luma_map.cols() {
            leaves.extend(
                d.luma_map
                    .leaves(sbx, sby)
                    .into_iter()
                    .filter(|&(x, y, _)| x < w && y < h),
            );
        }
    }
    let directions = analyze_plane(&d.plain[0], d.header.q as u32, SB_SIZE)
        .into_iter()
        .filter(|b| b.bx * 8 < w && b.by * 8 < h)
        .collect();
    Ok(Analysis {
        header: d.header,
        leaves,
        dering_flags: d.dering_flags,
        directions,
    })
}
