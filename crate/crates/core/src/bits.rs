//! Word-level kernels on cube bitmaps.
//!
//! A family on `P([n])` is a bitmap with one bit per position
//! `0..2^n`. Coordinate `i` toggles position bit `k = n - i`. For `n <= 6`
//! the whole family is one `u64`; larger cubes use several words, where
//! position bits `k >= 6` select words.

/// `HIGH[k]` has bit `x` set iff position `x` has bit `k` set (`x < 64`).
pub(crate) const HIGH: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

/// Positions with bit `k` clear.
#[inline]
pub(crate) fn low(k: usize) -> u64 {
    !HIGH[k]
}

/// Mask of the valid positions of a single-word cube.
#[inline]
pub(crate) fn full_mask(n: usize) -> u64 {
    debug_assert!(n <= 6);
    if n == 6 {
        u64::MAX
    } else {
        (1u64 << (1u32 << n)) - 1
    }
}

/// Number of words backing a cube of dimension `n`.
#[inline]
pub(crate) fn word_count(n: usize) -> usize {
    if n <= 6 {
        1
    } else {
        1 << (n - 6)
    }
}

/// Number of pairs `{x, x ^ 2^k}` split by `m` (in-word, `k < 6`).
#[inline]
pub(crate) fn cut_in_word(m: u64, k: usize) -> u32 {
    let b = 1u32 << k;
    (((m >> b) ^ m) & low(k)).count_ones()
}

/// Swaps each position `x` with `x ^ 2^k` (in-word, `k < 6`).
#[inline]
pub(crate) fn flip_in_word(m: u64, k: usize) -> u64 {
    let b = 1u32 << k;
    ((m & low(k)) << b) | ((m >> b) & low(k))
}

/// Exchanges position bits `k1 < k2` of every position (in-word).
#[inline]
pub(crate) fn transpose_in_word(m: u64, k1: usize, k2: usize) -> u64 {
    debug_assert!(k1 < k2 && k2 < 6);
    let d = (1u32 << k2) - (1u32 << k1);
    let sel = HIGH[k1] & low(k2);
    let t = ((m >> d) ^ m) & sel;
    m ^ t ^ (t << d)
}

/// Edge boundary of a single-word family.
#[inline]
pub(crate) fn boundary_u64(n: usize, m: u64) -> u32 {
    (0..n).map(|k| cut_in_word(m, k)).sum()
}

/// Every position bitmap with `k` ones among `bits` positions, in increasing
/// numeric order (Gosper's hack).
pub(crate) fn combinations(bits: u32, k: u32) -> impl Iterator<Item = u64> {
    debug_assert!(bits <= 64);
    let limit = if bits == 64 { u64::MAX } else { (1u64 << bits) - 1 };
    let mut next = if k == 0 {
        Some(0u64)
    } else if k > bits {
        None
    } else if k == 64 {
        Some(u64::MAX)
    } else {
        Some((1u64 << k) - 1)
    };
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 || cur == limit {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur.wrapping_add(c);
            if r == 0 {
                None
            } else {
                let nxt = (((r ^ cur) >> 2) / c) | r;
                (nxt <= limit && nxt.count_ones() == k).then_some(nxt)
            }
        };
        Some(cur)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flip_slow(n: usize, m: u64, k: usize) -> u64 {
        (0..1u64 << n)
            .filter(|&x| m >> x & 1 == 1)
            .fold(0, |acc, x| acc | 1 << (x ^ (1 << k)))
    }

    fn swap_bits(x: u64, a: usize, b: usize) -> u64 {
        let (ba, bb) = (x >> a & 1, x >> b & 1);
        (x & !(1 << a) & !(1 << b)) | (ba << b) | (bb << a)
    }

    #[test]
    fn flip_and_transpose_match_positionwise() {
        let n = 6;
        let samples = [0u64, 1, 0xDEAD_BEEF_0123_4567, u64::MAX, 0x8000_0000_0000_0001];
        for &m in &samples {
            for k in 0..n {
                assert_eq!(flip_in_word(m, k), flip_slow(n, m, k));
                for k2 in (k + 1)..n {
                    let slow = (0..64u64)
                        .filter(|&x| m >> x & 1 == 1)
                        .fold(0, |acc, x| acc | 1 << swap_bits(x, k, k2));
                    assert_eq!(transpose_in_word(m, k, k2), slow);
                }
            }
        }
    }

    #[test]
    fn gosper_counts() {
        assert_eq!(combinations(4, 2).count(), 6);
        assert_eq!(combinations(16, 0).count(), 1);
        assert_eq!(combinations(16, 16).count(), 1);
        assert_eq!(combinations(16, 7).count(), 11440);
        assert_eq!(combinations(8, 9).count(), 0);
        assert!(combinations(16, 7).all(|m| m.count_ones() == 7 && m < 1 << 16));
        let v: Vec<_> = combinations(16, 3).collect();
        assert!(v.windows(2).all(|w| w[0] < w[1]));
    }
}
