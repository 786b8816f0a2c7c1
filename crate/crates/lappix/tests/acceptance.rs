//! Acceptance suite. Every criterion prints one PASS or FAIL line; the
//! process exits non-zero if any criterion fails.

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use lappix::io::{read_auto, serialize_image, ImageFormat};
use lappix_core::dering::{
    base_threshold, compute_thresholds, dering_plane_ordered, dering_superblock, find_direction,
    line_index, thresh, DeringContext, DIRECTIONS,
};
use lappix_core::entropy::{RangeDecoder, RangeEncoder, SymbolModel};
use lappix_core::partition::{choose_partition, lambda_for_q, rd_cost, PartitionMap, RdCost, SbTree, SB_SIZE};
use lappix_core::plane::IntPlane;
use lappix_core::pvq::{pvq_codebook_size, pvq_decode_index, pvq_encode_index};
use lappix_core::smooth::{bilinear_fit_scaled, smooth_block, weight_sq_q15, LUMA_ALPHA};
use lappix_core::transform::{fdct, idct, postfilter_edges, prefilter_edges, LapConfig, COEFF_SHIFT};
use lappix_core::{decode, encode, psnr, ChromaFormat, EncoderOptions, Image, Plane};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

// Transform reversibility.

fn random_tree(rng: &mut ChaCha8Rng, p_split: f64) -> SbTree {
    fn grow(rng: &mut ChaCha8Rng, t: &mut SbTree, level: usize, index: usize, n: usize, p: f64) {
        if n > 4 && rng.gen_bool(p) {
            t.set_split(level, index, true);
            for q in 0..4 {
                grow(rng, t, level + 1, 4 * index + q, n / 2, p);
            }
        }
    }
    let mut t = SbTree::unsplit();
    grow(rng, &mut t, 0, 0, SB_SIZE, p_split);
    t
}

fn transform_reversibility() -> Outcome {
    const PER_SIZE: usize = 10_000;
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut planes = 0;
    for cfg in [LapConfig::FourPoint, LapConfig::EightExterior] {
        let mut counts: HashMap<usize, usize> = HashMap::new();
        while [4, 8, 16, 32].iter().any(|n| counts.get(n).copied().unwrap_or(0) < PER_SIZE) {
            let (cols, rows) = (3, 2);
            let (w, h) = (cols * SB_SIZE, rows * SB_SIZE);
            let mut map = PartitionMap::new(cols, rows, SB_SIZE);
            // Favour whichever sizes are still short.
            let short32 = counts.get(&32).copied().unwrap_or(0) < PER_SIZE;
            for sby in 0..rows {
                for sbx in 0..cols {
                    let p = if short32 && rng.gen_bool(0.5) { 0.0 } else { rng.gen_range(0.3..1.0) };
                    map.set_tree(sbx, sby, random_tree(&mut rng, p));
                }
            }
            let extreme = rng.gen_bool(0.1);
            let src = IntPlane::from_fn(w, h, |_, _| {
                let v: i32 = if extreme { *[0, 255].choose(&mut rng).unwrap() } else { rng.gen_range(0..256) };
                (v - 128) << COEFF_SHIFT
            });
            let subsampled = rng.gen_bool(0.25);
            let lapped = prefilter_edges(&src, &map, cfg, subsampled).map_err(|e| e.to_string())?;
            let mut rebuilt = IntPlane::new(w, h);
            for sby in 0..rows {
                for sbx in 0..cols {
                    for (x, y, n) in map.leaves(sbx, sby) {
                        let block: Vec<i32> =
                            (0..n * n).map(|i| lapped.get(x + i % n, y + i / n)).collect();
                        let coeffs = fdct(n, &block).map_err(|e| e.to_string())?;
                        let back = idct(n, &coeffs).map_err(|e| e.to_string())?;
                        ensure(back == block, || format!("{n}x{n} DCT at ({x},{y}) not exact"))?;
                        for (i, v) in back.into_iter().enumerate() {
                            rebuilt.set(x + i % n, y + i / n, v);
                        }
                        *counts.entry(n).or_default() += 1;
                    }
                }
            }
            let out = postfilter_edges(&rebuilt, &map, cfg, subsampled).map_err(|e| e.to_string())?;
            ensure(out == src, || format!("{cfg:?} lapping not exact"))?;
            planes += 1;
        }
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(30), || format!("took {t:?}"))?;
    Ok(format!(">= {PER_SIZE} blocks per size and lap mode over {planes} planes in {t:.1?}"))
}

// PVQ codebook.

fn lattice(n: usize, k: i32) -> Vec<Vec<i32>> {
    if n == 0 {
        return if k == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for v in -k..=k {
        for mut rest in lattice(n - 1, k - v.abs()) {
            rest.insert(0, v);
            out.push(rest);
        }
    }
    out
}

fn pvq_codebook() -> Outcome {
    ensure(pvq_codebook_size(2, 1) == Some(4), || "V(2,1) != 4".into())?;
    ensure(pvq_codebook_size(3, 2) == Some(18), || "V(3,2) != 18".into())?;
    for n in 1..=8 {
        for k in 0..=6 {
            let all = lattice(n, k as i32);
            let v = pvq_codebook_size(n, k).unwrap();
            ensure(v == all.len() as u128, || format!("V({n},{k}) = {v}, lattice has {}", all.len()))?;
            if n <= 6 && k <= 5 {
                let mut seen = vec![false; all.len()];
                for x in &all {
                    let i = pvq_encode_index(x, k).map_err(|e| e.to_string())?;
                    ensure(i < v && !seen[i as usize], || format!("index {i} for {x:?} repeated or out of range"))?;
                    seen[i as usize] = true;
                    ensure(pvq_decode_index(i, n, k).as_ref() == Ok(x), || format!("decode({i}) != {x:?}"))?;
                }
            }
        }
    }
    Ok("sizes match the lattice for N<=8, K<=6; bijective for N<=6, K<=5".into())
}

// Direction estimator.

fn direction_estimator() -> Outcome {
    // Every line groups pixels that sit on one line of the (dx, dy) table,
    // up to the half-pixel quantization of the odd directions.
    for (d, &(dx, dy)) in DIRECTIONS.iter().enumerate() {
        let mut span: HashMap<usize, (i32, i32)> = HashMap::new();
        for i in 0..8 {
            for j in 0..8 {
                let c = i as i32 * dx - j as i32 * dy;
                let e = span.entry(line_index(d, i, j)).or_insert((c, c));
                e.0 = e.0.min(c);
                e.1 = e.1.max(c);
            }
        }
        let worst = span.values().map(|(a, b)| b - a).max().unwrap();
        ensure(worst <= 1, || format!("direction {d}: a line spans {worst} half-pixels across"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for d in 0..8 {
        for _ in 0..20 {
            let levels: Vec<i32> = (0..15).map(|_| rng.gen_range(0..256)).collect();
            let mut block = [0i32; 64];
            for i in 0..8 {
                for j in 0..8 {
                    block[i * 8 + j] = levels[line_index(d, i, j)];
                }
            }
            let info = find_direction(&block);
            ensure(info.d_opt == d, || format!("pattern {d} estimated as {}", info.d_opt))?;
            let energy: i64 = block.iter().map(|&x| (x * x) as i64).sum::<i64>() * 840;
            ensure(info.s[d] == energy, || format!("direction {d}: residual variance not zero"))?;
        }
    }
    for _ in 0..1000 {
        let block: [i32; 64] = std::array::from_fn(|_| rng.gen_range(0..256));
        let info = find_direction(&block);
        let energy: i64 = block.iter().map(|&x| (x * x) as i64).sum();
        for d in 0..8 {
            let mut groups: HashMap<usize, Vec<f64>> = HashMap::new();
            for i in 0..8 {
                for j in 0..8 {
                    groups.entry(line_index(d, i, j)).or_default().push(block[i * 8 + j] as f64);
                }
            }
            let direct: f64 = groups
                .values()
                .map(|g| {
                    let mu = g.iter().sum::<f64>() / g.len() as f64;
                    g.iter().map(|x| (x - mu) * (x - mu)).sum::<f64>()
                })
                .sum();
            let expanded = energy as f64 - info.s[d] as f64 / 840.0;
            ensure((direct - expanded).abs() < 1e-6, || format!("variance {direct} vs {expanded}"))?;
        }
    }
    Ok("8/8 ideal patterns found with zero variance; variance identity on 1000 blocks".into())
}

// Threshold math.

fn threshold_math() -> Outcome {
    for t in 1..=64 {
        for d in -255i32..=255 {
            let want = if d.abs() < t { d } else { 0 };
            ensure(thresh(d, t) == want, || format!("thresh({d},{t})"))?;
        }
    }
    for q in [5u32, 40, 400] {
        let t0 = base_threshold(q);
        let low = compute_thresholds(q, 0.0, 1e6);
        ensure(low.td == ((t0 as f64 * 0.5).round() as i32), || format!("Q={q}: lower clamp {}", low.td))?;
        let high = compute_thresholds(q, 1e9, 1e9);
        ensure(high.td == 3 * t0, || format!("Q={q}: upper clamp {}", high.td))?;
        let mid = compute_thresholds(q, 8.0, 8.0);
        let want = t0 as f64 * 1.02 * 64f64.powf(0.16);
        ensure((mid.td as f64 - want).abs() <= 0.5 + 1e-9, || format!("Q={q}: unclamped td {}", mid.td))?;
    }
    let mut worst = 0f64;
    for q in [5u32, 400] {
        let exact = (q as f64).powf(0.842);
        // Thresholds carry four fractional bits.
        let err = (base_threshold(q) as f64 / 16.0 - exact).abs();
        ensure(err <= 1.0 / 32.0, || format!("T0({q}) off by {err}"))?;
        worst = worst.max(err);
    }
    Ok(format!("thresh exhaustive; clamps hit; T0 within {worst:.4} of Q^0.842"))
}

// Deringing efficacy.

/// A ramp constant along one of the eight directions, and a copy with a
/// rounded uniform error of at most `noise` samples.
fn synthetic_pair(rng: &mut ChaCha8Rng, w: usize, h: usize, noise: f64) -> (Plane, Plane) {
    let (dx, dy) = DIRECTIONS[rng.gen_range(0..8)];
    let (dx, dy) = (dx as f64, dy as f64);
    let slope = rng.gen_range(0.3..2.5) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    let (cx, cy) = (w as f64 / 2.0, h as f64 / 2.0);
    let mut clean = Vec::with_capacity(w * h);
    let mut noisy = Vec::with_capacity(w * h);
    for y in 0..h {
        for x in 0..w {
            // Distance across the direction; constant along (dx, dy).
            let u = ((x as f64 - cx) * dy - (y as f64 - cy) * dx) / (dx * dx + dy * dy).sqrt();
            let c = (128.0 + slope * u).round().clamp(16.0, 240.0);
            clean.push(c as u8);
            let n = rng.gen_range(-noise..=noise);
            noisy.push((c + n).round().clamp(0.0, 255.0) as u8);
        }
    }
    (
        Plane::new(w, h, 0, 0, clean).unwrap(),
        Plane::new(w, h, 0, 0, noisy).unwrap(),
    )
}

fn mse(a: &Plane, b: &Plane) -> f64 {
    let s: f64 = a
        .samples()
        .iter()
        .zip(b.samples())
        .map(|(&x, &y)| (x as f64 - y as f64).powi(2))
        .sum();
    s / a.samples().len() as f64
}

fn dering_efficacy() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut improved, mut worst) = (0, 0f64);
    const Q: u32 = 200;
    // Keep the error below the smallest threshold the filter can pick.
    let min_td = compute_thresholds(Q, 0.0, 0.0).td as f64 / 256.0;
    for _ in 0..50 {
        let noise = rng.gen_range(0.5..min_td - 0.5);
        let (clean, noisy) = synthetic_pair(&mut rng, 96, 64, noise);
        let ctx = DeringContext {
            q: Q,
            sb_size: SB_SIZE,
            sb_enabled: &[],
            block_mask: &[],
        };
        let out = dering_plane_ordered(&noisy, &ctx, 0..6);
        let (before, after) = (mse(&clean, &noisy), mse(&clean, &out));
        if after < before {
            improved += 1;
        } else {
            worst = worst.max(after / before - 1.0);
        }
    }
    let t = start.elapsed();
    ensure(improved >= 45, || format!("only {improved}/50 improved"))?;
    ensure(worst <= 0.01, || format!("worst increase {:.2}%", worst * 100.0))?;
    ensure(t < Duration::from_secs(60), || format!("took {t:?}"))?;
    Ok(format!("{improved}/50 improved, worst increase {:.2}%, {t:.1?}", worst * 100.0))
}

// Parallel determinism.

fn parallel_determinism() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for img in 0..10 {
        let (w, h) = (8 * rng.gen_range(6..20), 8 * rng.gen_range(6..14));
        let (_, noisy) = synthetic_pair(&mut rng, w, h, 3.0);
        let (cols, rows) = (w.div_ceil(SB_SIZE), h.div_ceil(SB_SIZE));
        let flags: Vec<bool> = (0..cols * rows).map(|_| rng.gen_bool(0.8)).collect();
        let ctx = DeringContext {
            q: rng.gen_range(20..400),
            sb_size: SB_SIZE,
            sb_enabled: &flags,
            block_mask: &[],
        };
        let serial = dering_plane_ordered(&noisy, &ctx, 0..cols * rows);
        let reversed = dering_plane_ordered(&noisy, &ctx, (0..cols * rows).rev());
        let mut perm: Vec<usize> = (0..cols * rows).collect();
        perm.shuffle(&mut rng);
        let shuffled = dering_plane_ordered(&noisy, &ctx, perm.iter().copied());
        // Threads each filter a share of the superblocks into their own copy.
        let threaded = std::thread::scope(|s| {
            let handles: Vec<_> = (0..4)
                .map(|t| {
                    let (noisy, ctx) = (&noisy, &ctx);
                    s.spawn(move || {
                        let mut out = noisy.clone();
                        for idx in (t..cols * rows).step_by(4) {
                            dering_superblock(noisy, ctx, idx % cols, idx / cols, &mut out);
                        }
                        (t, out)
                    })
                })
                .collect();
            let mut merged = noisy.clone();
            for hdl in handles {
                let (t, part) = hdl.join().unwrap();
                for idx in (t..cols * rows).step_by(4) {
                    let (sx, sy) = (idx % cols * SB_SIZE, idx / cols * SB_SIZE);
                    for y in sy..(sy + SB_SIZE).min(h) {
                        for x in sx..(sx + SB_SIZE).min(w) {
                            merged.set(x, y, part.get(x, y));
                        }
                    }
                }
            }
            merged
        });
        ensure(serial == reversed && serial == shuffled && serial == threaded, || {
            format!("image {img}: outputs differ across orders")
        })?;
    }
    Ok("serial, reversed, shuffled and threaded outputs identical on 10 images".into())
}

// Partition DP oracle.

/// Data of every possible leaf, produced by running the full prefilter on
/// the smallest tree that has that leaf.
fn leaf_data(sb: &IntPlane, cfg: LapConfig) -> HashMap<(usize, usize, usize), Vec<i32>> {
    let mut out = HashMap::new();
    fn visit(
        sb: &IntPlane,
        cfg: LapConfig,
        tree: SbTree,
        level: usize,
        index: usize,
        (x, y, n): (usize, usize, usize),
        out: &mut HashMap<(usize, usize, usize), Vec<i32>>,
    ) {
        let mut map = PartitionMap::new(1, 1, SB_SIZE);
        map.set_tree(0, 0, tree);
        let lapped = prefilter_edges(sb, &map, cfg, false).unwrap();
        out.insert((x, y, n), (0..n * n).map(|i| lapped.get(x + i % n, y + i / n)).collect());
        if n > 4 {
            let mut t = tree;
            t.set_split(level, index, true);
            for q in 0..4 {
                let (cx, cy) = (x + (q & 1) * n / 2, y + (q >> 1) * n / 2);
                visit(sb, cfg, t, level + 1, 4 * index + q, (cx, cy, n / 2), out);
            }
        }
    }
    visit(sb, cfg, SbTree::unsplit(), 0, 0, (0, 0, SB_SIZE), &mut out);
    out
}

fn partition_oracle() -> Outcome {
    let trees = SbTree::enumerate(SB_SIZE);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut splits = 0;
    for i in 0..20 {
        let cfg = if i % 2 == 0 { LapConfig::FourPoint } else { LapConfig::EightExterior };
        // Mix of flat areas, edges and noise so different trees win.
        let base = rng.gen_range(40..200);
        let edge = rng.gen_range(0..32);
        let noise = rng.gen_range(0..60);
        let sb = IntPlane::from_fn(SB_SIZE, SB_SIZE, |x, y| {
            let v = base + if x + y / 2 > edge { 50 } else { 0 } + rng.gen_range(-noise..=noise) * ((x / 8 + y / 8) % 2) as i32;
            (v.clamp(0, 255) - 128) << COEFF_SHIFT
        });
        let leaves = leaf_data(&sb, cfg);
        for q in [24.0, 96.0, 320.0] {
            let lambda = lambda_for_q(q);
            let costs: HashMap<_, RdCost> =
                leaves.iter().map(|(&k, data)| (k, rd_cost(data, k.2, q, lambda))).collect();
            let flag = RdCost::from_real(0.0, 1.0);
            let mut best: Option<(u128, SbTree)> = None;
            let mut ties = 0;
            for &tree in &trees {
                let mut total = RdCost::default();
                tree.visit_splits(SB_SIZE, |_, _, _, _| total = total.add(flag));
                for (x, y, n) in tree.leaves(SB_SIZE) {
                    total = total.add(costs[&(x, y, n)]);
                    if n > 4 {
                        total = total.add(flag);
                    }
                }
                let c = total.cost(lambda);
                match best {
                    Some((b, _)) if c == b => ties += 1,
                    Some((b, _)) if c > b => {}
                    _ => {
                        best = Some((c, tree));
                        ties = 1;
                    }
                }
            }
            let (want, want_tree) = best.unwrap();
            let got = choose_partition(&leaves[&(0, 0, SB_SIZE)], SB_SIZE, cfg, false, q, lambda);
            ensure(got.cost.cost(lambda) == want, || {
                format!("block {i} q={q}: DP cost {} vs exhaustive {want}", got.cost.cost(lambda))
            })?;
            ensure(ties > 1 || got.tree == want_tree, || format!("block {i} q={q}: tree differs"))?;
            splits += got.tree.leaves(SB_SIZE).len() - 1;
        }
    }
    Ok(format!("20 superblocks x 3 lambdas match {} exhaustive trees ({splits} extra leaves chosen)", trees.len()))
}

// Smoothing.

fn smoothing() -> Outcome {
    ensure(weight_sq_q15(LUMA_ALPHA, 40, 0, 1) == 1 << 15, || "D^2 = 0 must give w = 1".into())?;
    let w2 = weight_sq_q15(5, 12, 120, 1);
    ensure(w2 == 1 << 13, || format!("worked example gave w^2 = {w2}/32768"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..1000 {
        let n = *[8usize, 16, 32].choose(&mut rng).unwrap();
        let spread = rng.gen_range(0..128);
        let base = rng.gen_range(0..256 - spread);
        let block: Vec<u8> = (0..n * n).map(|_| (base + rng.gen_range(0..=spread)) as u8).collect();
        let mut out = block.clone();
        let q = rng.gen_range(1..=512);
        smooth_block(&mut out, n, LUMA_ALPHA, q);
        let scale = ((n - 1) * (n - 1)) as f64;
        for ((&x, &y), &p) in block.iter().zip(&out).zip(&bilinear_fit_scaled(&block, n)) {
            let p = p as f64 / scale;
            let (lo, hi) = ((x as f64).min(p), (x as f64).max(p));
            ensure(y as f64 >= lo.floor() && y as f64 <= hi.ceil(), || {
                format!("output {y} outside [{lo}, {hi}]")
            })?;
        }
    }
    Ok("w=1 at D^2=0, worked example exact, convex bound on 1000 blocks".into())
}

// End to end.

fn end_to_end() -> Outcome {
    let dir = fixtures();
    let manifest = std::fs::read_to_string(dir.join("golden/manifest.tsv")).map_err(|e| e.to_string())?;
    let mut by_image: HashMap<String, Vec<(u16, f64)>> = HashMap::new();
    let mut checked = 0;
    for line in manifest.lines().filter(|l| !l.is_empty()) {
        let f: Vec<&str> = line.split('\t').collect();
        let (name, q, stream_hash, image_hash) = (f[0], f[1].parse::<u16>().unwrap(), f[2], f[3]);
        let src = read_auto(&dir.join(name)).map_err(|e| format!("{name}: {e}"))?;
        let bytes = encode(&src, &EncoderOptions::new(q)).map_err(|e| e.to_string())?;
        let hex = |d: &[u8]| d.iter().map(|b| format!("{b:02x}")).collect::<String>();
        ensure(hex(&Sha256::digest(&bytes)) == stream_hash, || format!("{name} q={q}: bitstream differs from golden"))?;
        let stem = name.split('.').next().unwrap();
        let golden = std::fs::read(dir.join(format!("golden/{stem}_q{q}.lpx"))).map_err(|e| e.to_string())?;
        let decoded = decode(&golden).map_err(|e| format!("{name} q={q}: {e}"))?;
        let y4m = serialize_image(&decoded, ImageFormat::Y4m).map_err(|e| e.to_string())?;
        ensure(hex(&Sha256::digest(&y4m)) == image_hash, || format!("{name} q={q}: decoded image differs from golden"))?;
        let p = psnr(&src, &decoded).map_err(|e| e.to_string())?.combined;
        by_image.entry(name.into()).or_default().push((q, p));
        checked += 1;
    }
    ensure(checked == 15, || format!("manifest lists {checked} cases"))?;
    for (name, mut v) in by_image {
        v.sort_by_key(|&(q, _)| std::cmp::Reverse(q));
        for pair in v.windows(2) {
            ensure(pair[1].1 >= pair[0].1, || format!("{name}: PSNR {:?} then {:?}", pair[0], pair[1]))?;
        }
    }
    let flat = Image::constant(256, 192, ChromaFormat::Yuv420, [90, 110, 150]).unwrap();
    let raw = 256 * 192 * 3 / 2;
    let bytes = encode(&flat, &EncoderOptions::new(32)).map_err(|e| e.to_string())?;
    ensure(bytes.len() * 100 < raw, || format!("constant image took {} bytes", bytes.len()))?;
    ensure(decode(&bytes).as_ref() == Ok(&flat), || "constant image not reproduced".into())?;
    Ok(format!(
        "15 golden streams and decodes bit-exact, PSNR monotone, constant image {} bytes ({:.2}% of raw)",
        bytes.len(),
        bytes.len() as f64 * 100.0 / raw as f64
    ))
}

// Entropy coder.

fn entropy_coder() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let sizes = [2usize, 3, 8, 16, 64];
    let symbols: Vec<(usize, usize)> = (0..100_000)
        .map(|_| {
            let m = rng.gen_range(0..sizes.len());
            (m, rng.gen_range(0..sizes[m]))
        })
        .collect();
    let mut enc = RangeEncoder::new();
    let mut models: Vec<SymbolModel> = sizes.iter().map(|&n| SymbolModel::new(n)).collect();
    for &(m, s) in &symbols {
        enc.encode_symbol(&mut models[m], s);
    }
    let buf = enc.finish();
    let mut dec = RangeDecoder::new(&buf).map_err(|e| e.to_string())?;
    let mut models: Vec<SymbolModel> = sizes.iter().map(|&n| SymbolModel::new(n)).collect();
    for (i, &(m, s)) in symbols.iter().enumerate() {
        let got = dec.decode_symbol(&mut models[m]).map_err(|e| format!("symbol {i}: {e}"))?;
        ensure(got == s, || format!("symbol {i}: {got} != {s}"))?;
    }

    // Skewed 8-symbol source.
    let probs = [0.6, 0.2, 0.08, 0.05, 0.03, 0.02, 0.015, 0.005];
    let data: Vec<usize> = (0..100_000)
        .map(|_| {
            let mut u: f64 = rng.gen();
            probs.iter().position(|&p| {
                u -= p;
                u < 0.0
            }).unwrap_or(7)
        })
        .collect();
    let mut counts = [0usize; 8];
    for &s in &data {
        counts[s] += 1;
    }
    let total = data.len() as f64;
    let entropy_bits: f64 = counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| -(c as f64) * (c as f64 / total).log2())
        .sum();
    let mut enc = RangeEncoder::new();
    let mut model = SymbolModel::new(8);
    for &s in &data {
        enc.encode_symbol(&mut model, s);
    }
    let coded_bits = enc.finish().len() as f64 * 8.0;
    let excess = coded_bits / entropy_bits - 1.0;
    ensure(excess.abs() <= 0.02, || format!("rate {coded_bits} bits vs entropy {entropy_bits:.0} ({:.2}%)", excess * 100.0))?;
    Ok(format!("100000 symbols round trip; skewed source {:+.2}% from entropy", excess * 100.0))
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 10] = [
        ("transform reversibility", transform_reversibility),
        ("pvq codebook oracle", pvq_codebook),
        ("direction estimator", direction_estimator),
        ("threshold math", threshold_math),
        ("deringing efficacy", dering_efficacy),
        ("parallel determinism", parallel_determinism),
        ("partition dp oracle", partition_oracle),
        ("smoothing", smoothing),
        ("end to end", end_to_end),
        ("entropy coder", entropy_coder),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, f) in criteria {
        if !filter.is_empty() && !filter.iter().any(|p| name.contains(p.as_str())) {
            continue;
        }
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let t = start.elapsed();
        match result {
            Ok(detail) => println!("PASS  {name}: {detail} [{t:.1?}]"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why} [{t:.1?}]");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
