//! Pyramid codebook: integer vectors of dimension `n` with L1 norm `k`.

use alloc::vec;
use alloc::vec::Vec;

use super::PvqError;

/// Number of codewords V(n, k), or `None` when it does not fit in a `u128`.
///
/// V(n, k) = V(n-1, k) + V(n, k-1) + V(n-1, k-1), V(n, 0) = 1, V(0, k>0) = 0.
pub fn pvq_codebook_size(n: usize, k: u32) -> Option<u128> {
    let table = size_table(n, k)?;
    Some(table[n][k as usize])
}

/// `table[m][j]` = V(m, j) for m <= n, j <= k.
fn size_table(n: usize, k: u32) -> Option<Vec<Vec<u128>>> {
    let k = k as usize;
    let mut table = Vec::with_capacity(n + 1);
    let mut row = vec![0u128; k + 1];
    row[0] = 1;
    table.push(row);
    for m in 1..=n {
        let prev = &table[m - 1];
        let mut row = vec![0u128; k + 1];
        row[0] = 1;
        for j in 1..=k {
            row[j] = prev[j].checked_add(row[j - 1])?.checked_add(prev[j - 1])?;
        }
        table.push(row);
    }
    Some(table)
}

/// log2 V(n, k) without overflow, used for rate estimates.
pub fn codebook_bits(n: usize, k: u32) -> f64 {
    if k == 0 || n == 0 {
        return 0.0;
    }
    // V(n, k) = sum_i 2^i C(n, i) C(k - 1, i - 1)
    let (nf, kf) = (n as f64, k as f64);
    let terms = n.min(k as usize);
    let lg = |x: f64| libm::lgamma(x);
    let mut max = f64::NEG_INFINITY;
    let mut logs = Vec::with_capacity(terms);
    for i in 1..=terms {
        let fi = i as f64;
        let l = fi * core::f64::consts::LN_2 + lg(nf + 1.0) - lg(fi + 1.0) - lg(nf - fi + 1.0)
            + lg(kf) - lg(fi) - lg(kf - fi + 1.0);
        max = max.max(l);
        logs.push(l);
    }
    let sum: f64 = logs.iter().map(|&l| libm::exp(l - max)).sum();
    (max + libm::log(sum)) / core::f64::consts::LN_2
}

fn l1(pulses: &[i32]) -> u64 {
    pulses.iter().map(|&p| p.unsigned_abs() as u64).sum()
}

/// Enumerative index of `pulses` among all vectors of the same dimension
/// and norm. Smaller magnitudes in the leading coordinate come first, and
/// for a given magnitude the positive sign precedes the negative.
pub fn pvq_encode_index(pulses: &[i32], k: u32) -> Result<u128, PvqError> {
    if l1(pulses) != k as u64 {
        return Err(PvqError::NormMismatch);
    }
    let n = pulses.len();
    let table = size_table(n, k).ok_or(PvqError::Overflow)?;
    let mut index = 0u128;
    let mut left = k as usize;
    for (i, &p) in pulses.iter().enumerate() {
        let rest = n - i - 1;
        let a = p.unsigned_abs() as usize;
        if a > 0 {
            index += table[rest][left];
            for j in 1..a {
                index += 2 * table[rest][left - j];
            }
            if p < 0 {
                index += table[rest][left - a];
            }
        }
        left -= a;
    }
    Ok(index)
}

/// Inverse of [`pvq_encode_index`].
pub fn pvq_decode_index(index: u128, n: usize, k: u32) -> Result<Vec<i32>, PvqError> {
    let table = size_table(n, k).ok_or(PvqError::Overflow)?;
    if index >= table[n][k as usize] {
        return Err(PvqError::IndexOutOfRange);
    }
    let mut pulses = vec![0i32; n];
    let mut left = k as usize;
    let mut idx = index;
    for (i, p) in pulses.iter_mut().enumerate() {
        let rest = n - i - 1;
        let zero = table[rest][left];
        if idx < zero {
            continue;
        }
        idx -= zero;
        let mut a = 1;
        loop {
            let block = table[rest][left - a];
            if idx < block {
                *p = a as i32;
                break;
            }
            idx -= block;
            if idx < block {
                *p = -(a as i32);
                break;
            }
            idx -= block;
            a += 1;
        }
        left -= a;
    }
    Ok(pulses)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(pvq_codebook_size(2, 1), Some(4));
        assert_eq!(pvq_codebook_size(3, 2), Some(18));
        for n in 0..20 {
            assert_eq!(pvq_codebook_size(n, 0), Some(1));
        }
        assert_eq!(pvq_codebook_size(1, 5), Some(2));
    }

    #[test]
    fn overflow_is_reported() {
        assert_eq!(pvq_codebook_size(256, 200), None);
        let mut v = vec![0; 256];
        v[0] = 200;
        assert_eq!(pvq_encode_index(&v, 200), Err(PvqError::Overflow));
    }

    #[test]
    fn one_dimension_indices() {
        assert_eq!(pvq_encode_index(&[5], 5), Ok(0));
        assert_eq!(pvq_encode_index(&[-5], 5), Ok(1));
        assert_eq!(pvq_decode_index(1, 1, 5).unwrap(), vec![-5]);
    }

    #[test]
    fn codebook_bits_tracks_exact_size() {
        for (n, k) in [(4usize, 3u32), (15, 7), (64, 20), (256, 10)] {
            let exact = pvq_codebook_size(n, k).unwrap() as f64;
            let approx = codebook_bits(n, k);
            assert!((libm::log2(exact) - approx).abs() < 1e-6, "n={n} k={k}");
        }
    }

    #[test]
    fn errors() {
        assert_eq!(pvq_encode_index(&[1, 1], 3), Err(PvqError::NormMismatch));
        assert_eq!(pvq_decode_index(4, 2, 1), Err(PvqError::IndexOutOfRange));
    }
}
