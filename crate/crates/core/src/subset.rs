use std::fmt;

use crate::error::{Error, Result};

/// A subset of `[n] = {1, …, n}`, stored with element `i` at bit `i - 1`.
///
/// A `Subset` does not know `n`; conversions to and from cube positions take
/// the dimension explicitly. Position of `S` in `P([n])` is
/// `Σ_{i∈S} 2^(n-i)`, so coordinate 1 is the most significant bit and
/// position order coincides with the lexicographic order on `P([n])`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Subset(u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn from_bits(bits: u32) -> Subset {
        Subset(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// Builds a subset from 1-based elements. Panics on element 0 or > 32.
    pub fn of(elements: &[usize]) -> Subset {
        elements.iter().fold(Subset::EMPTY, |s, &e| s.with(e))
    }

    /// Builds a subset of `[n]`, rejecting out-of-range elements.
    pub fn try_of(elements: &[usize], n: usize) -> Result<Subset> {
        let mut s = Subset::EMPTY;
        for &e in elements {
            if e == 0 || e > n {
                return Err(Error::ElementOutOfRange { element: e, n });
            }
            s = s.with(e);
        }
        Ok(s)
    }

    pub fn singleton(i: usize) -> Subset {
        Subset::EMPTY.with(i)
    }

    /// `[n]`
    pub fn full(n: usize) -> Subset {
        if n >= 32 {
            Subset(u32::MAX)
        } else {
            Subset((1u32 << n) - 1)
        }
    }

    /// `{a, a+1, …, b}`; empty when `a > b`.
    pub fn range(a: usize, b: usize) -> Subset {
        (a..=b).fold(Subset::EMPTY, |s, e| s.with(e))
    }

    pub fn with(self, i: usize) -> Subset {
        assert!((1..=32).contains(&i), "element {i} out of range");
        Subset(self.0 | (1 << (i - 1)))
    }

    pub fn without(self, i: usize) -> Subset {
        assert!((1..=32).contains(&i), "element {i} out of range");
        Subset(self.0 & !(1 << (i - 1)))
    }

    pub fn contains(self, i: usize) -> bool {
        (1..=32).contains(&i) && self.0 & (1 << (i - 1)) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Largest element, or 0 for the empty set.
    pub fn max_element(self) -> usize {
        32 - self.0.leading_zeros() as usize
    }

    /// Smallest element, if any.
    pub fn min_element(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize + 1)
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn difference(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    pub fn symmetric_difference(self, other: Subset) -> Subset {
        Subset(self.0 ^ other.0)
    }

    pub fn elements(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let e = bits.trailing_zeros() as usize + 1;
            bits &= bits - 1;
            Some(e)
        })
    }

    /// Cube position of this subset in `P([n])`.
    pub fn index(self, n: usize) -> usize {
        debug_assert!(self.max_element() <= n);
        self.elements().map(|i| 1usize << (n - i)).sum()
    }

    /// Inverse of [`Subset::index`].
    pub fn from_index(index: usize, n: usize) -> Subset {
        debug_assert!(n == 0 || index < (1 << n));
        let mut s = Subset::EMPTY;
        for i in 1..=n {
            if index & (1 << (n - i)) != 0 {
                s = s.with(i);
            }
        }
        s
    }

    /// `n`-character 0/1 string, character `i-1` for coordinate `i`.
    pub fn bitstring(self, n: usize) -> String {
        (1..=n)
            .map(|i| if self.contains(i) { '1' } else { '0' })
            .collect()
    }

    pub fn parse_bitstring(s: &str, n: usize) -> Result<Subset> {
        if s.chars().count() != n {
            return Err(Error::Parse(format!(
                "subset string {s:?} must have exactly {n} characters"
            )));
        }
        let mut out = Subset::EMPTY;
        for (pos, c) in s.chars().enumerate() {
            match c {
                '1' => out = out.with(pos + 1),
                '0' => {}
                _ => return Err(Error::Parse(format!("bad character {c:?} in {s:?}"))),
            }
        }
        Ok(out)
    }

    /// All subsets of `self`, in increasing order of their bit pattern.
    pub fn subsets(self) -> impl Iterator<Item = Subset> {
        let full = self.0;
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full {
                None
            } else {
                Some((cur.wrapping_sub(full)) & full)
            };
            Some(Subset(cur))
        })
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("{}");
        }
        f.write_str("{")?;
        for (k, e) in self.elements().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Serialized as the sorted list of elements.
impl serde::Serialize for Subset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.elements())
    }
}
