//! Fixed AC band layout per block size.
//!
//! Band 0 is the 15 AC coefficients of the top-left 4x4. Each further
//! octave `[s, 2s)` contributes three `s`x`s` bands: high horizontal
//! frequency, high vertical frequency, then diagonal.

use alloc::vec::Vec;

/// Coefficient positions `(row, col)` of each band of an `n`x`n` block.
pub fn band_layout(n: usize) -> Vec<Vec<(usize, usize)>> {
    let mut bands = Vec::new();
    let low: Vec<_> = (0..4)
        .flat_map(|r| (0..4).map(move |c| (r, c)))
        .skip(1)
        .collect();
    bands.push(low);
    let mut s = 4;
    while 2 * s <= n {
        let rect = |r0: usize, c0: usize| -> Vec<(usize, usize)> {
            (r0..r0 + s)
                .flat_map(|r| (c0..c0 + s).map(move |c| (r, c)))
                .collect()
        };
        bands.push(rect(0, s));
        bands.push(rect(s, 0));
        bands.push(rect(s, s));
        s *= 2;
    }
    bands
}

pub fn band_count(n: usize) -> usize {
    1 + 3 * (n.trailing_zeros() as usize - 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn bands_tile_the_ac_coefficients() {
        for n in [4usize, 8, 16, 32] {
            let layout = band_layout(n);
            assert_eq!(layout.len(), band_count(n));
            let all: BTreeSet<_> = layout.iter().flatten().copied().collect();
            assert_eq!(all.len(), n * n - 1);
            assert_eq!(layout.iter().map(Vec::len).sum::<usize>(), n * n - 1);
            assert!(!all.contains(&(0, 0)));
        }
        assert_eq!(band_layout(4)[0].len(), 15);
    }
}
