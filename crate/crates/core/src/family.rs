//! Set families on the discrete cube and their boundary, influence and slice
//! primitives.

use std::collections::HashSet;
use std::fmt;

use crate::bits::{self, word_count};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::lex::lex_influence;
use crate::subset::Subset;

/// Largest supported cube dimension.
pub const MAX_DIM: usize = 12;

/// A family `F ⊆ P([n])`, stored as a membership bitmap over the `2^n`
/// positions (see [`Subset::index`]).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetFamily {
    n: usize,
    words: Vec<u64>,
}

/// Slice statistics of a family along one coordinate `i`.
///
/// `mu_plus`/`mu_minus` are the measures of the slices `F_{i}^{i}` and
/// `F_{i}^{∅}`; `eps_plus`/`eps_minus` are the isoperimetric excesses of those
/// slices over the lexicographic segment of the same measure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SliceStats {
    pub coord: usize,
    pub mu_plus: Dyadic,
    pub mu_minus: Dyadic,
    pub eps_plus: Dyadic,
    pub eps_minus: Dyadic,
}

/// Slice statistics along an ordered pair of coordinates `(i, j)`.
///
/// Suffix `pm` means `i` present and `j` absent, and so on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairSliceStats {
    pub coords: (usize, usize),
    pub mu_pp: Dyadic,
    pub mu_pm: Dyadic,
    pub mu_mp: Dyadic,
    pub mu_mm: Dyadic,
    pub eps_pp: Dyadic,
    pub eps_pm: Dyadic,
    pub eps_mp: Dyadic,
    pub eps_mm: Dyadic,
}

fn check_dim(n: usize) -> Result<()> {
    if n > MAX_DIM {
        Err(Error::Dimension { n, max: MAX_DIM })
    } else {
        Ok(())
    }
}

impl SetFamily {
    pub fn empty(n: usize) -> Result<SetFamily> {
        check_dim(n)?;
        Ok(SetFamily {
            n,
            words: vec![0; word_count(n)],
        })
    }

    pub fn full(n: usize) -> Result<SetFamily> {
        let mut f = SetFamily::empty(n)?;
        if n <= 6 {
            f.words[0] = bits::full_mask(n);
        } else {
            f.words.fill(u64::MAX);
        }
        Ok(f)
    }

    /// The family with exactly the listed members.
    pub fn from_sets(sets: &[Subset], n: usize) -> Result<SetFamily> {
        let mut f = SetFamily::empty(n)?;
        for &s in sets {
            if let Some(e) = s.elements().find(|&e| e > n) {
                return Err(Error::ElementOutOfRange { element: e, n });
            }
            let idx = s.index(n);
            if f.contains_index(idx) {
                return Err(Error::DuplicateSubset(s.to_string()));
            }
            f.insert_index(idx);
        }
        Ok(f)
    }

    /// Like [`SetFamily::from_sets`] but with element lists.
    pub fn from_element_lists(sets: &[&[usize]], n: usize) -> Result<SetFamily> {
        let subsets = sets
            .iter()
            .map(|els| {
                let mut seen = HashSet::new();
                for &e in els.iter() {
                    if !seen.insert(e) {
                        return Err(Error::Parse(format!("element {e} repeated in a set")));
                    }
                }
                Subset::try_of(els, n)
            })
            .collect::<Result<Vec<_>>>()?;
        SetFamily::from_sets(&subsets, n)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(n: usize, indices: I) -> Result<SetFamily> {
        let mut f = SetFamily::empty(n)?;
        for idx in indices {
            if idx >= 1 << n {
                return Err(Error::SizeOutOfRange {
                    m: idx as u64,
                    max: (1u64 << n) - 1,
                });
            }
            f.insert_index(idx);
        }
        Ok(f)
    }

    /// Single-word constructor for `n <= 6`; bits beyond `2^n` must be clear.
    pub fn from_mask(n: usize, mask: u64) -> Result<SetFamily> {
        if n > 6 {
            return Err(Error::Dimension { n, max: 6 });
        }
        if mask & !bits::full_mask(n) != 0 {
            return Err(Error::Parse(format!(
                "mask {mask:#x} has bits beyond 2^{n} positions"
            )));
        }
        Ok(SetFamily {
            n,
            words: vec![mask],
        })
    }

    pub(crate) fn from_words(n: usize, words: Vec<u64>) -> SetFamily {
        debug_assert_eq!(words.len(), word_count(n));
        SetFamily { n, words }
    }

    /// The single-word bitmap, for `n <= 6`.
    pub fn mask(&self) -> Option<u64> {
        (self.n <= 6).then(|| self.words[0])
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// `D_j = {S : j ∈ S}`.
    pub fn dictatorship(n: usize, j: usize) -> Result<SetFamily> {
        check_coord(n, j)?;
        SetFamily::from_indices(n, (0..1usize << n).filter(|x| x & (1 << (n - j)) != 0))
    }

    /// `S_B^C = {S : S ∩ B = C}`.
    pub fn subcube(n: usize, b: Subset, c: Subset) -> Result<SetFamily> {
        check_dim(n)?;
        check_within(b, n)?;
        if !c.is_subset_of(b) {
            return Err(Error::NotSubset(c.to_string(), b.to_string()));
        }
        let (bi, ci) = (b.index(n), c.index(n));
        SetFamily::from_indices(n, (0..1usize << n).filter(|x| x & bi == ci))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `|F|`
    pub fn len(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn contains_index(&self, idx: usize) -> bool {
        self.words[idx >> 6] >> (idx & 63) & 1 == 1
    }

    pub fn contains(&self, s: Subset) -> bool {
        s.max_element() <= self.n && self.contains_index(s.index(self.n))
    }

    pub(crate) fn insert_index(&mut self, idx: usize) {
        self.words[idx >> 6] |= 1 << (idx & 63);
    }

    pub(crate) fn remove_index(&mut self, idx: usize) {
        self.words[idx >> 6] &= !(1 << (idx & 63));
    }

    pub(crate) fn set_index(&mut self, idx: usize, present: bool) {
        if present {
            self.insert_index(idx)
        } else {
            self.remove_index(idx)
        }
    }

    /// Member positions in increasing order.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }

    /// Members in increasing lexicographic order.
    pub fn sets(&self) -> impl Iterator<Item = Subset> + '_ {
        let n = self.n;
        self.indices().map(move |i| Subset::from_index(i, n))
    }

    /// `μ(F) = |F| / 2^n`
    pub fn measure(&self) -> Dyadic {
        Dyadic::new(self.len() as i128, self.n as u32)
    }

    /// Number of cube edges in direction `i` with exactly one endpoint in `F`.
    pub fn boundary_in_direction(&self, i: usize) -> Result<u64> {
        check_coord(self.n, i)?;
        Ok(self.cut(self.n - i))
    }

    fn cut(&self, k: usize) -> u64 {
        if k < 6 {
            self.words
                .iter()
                .map(|&w| bits::cut_in_word(w, k) as u64)
                .sum()
        } else {
            let stride = 1 << (k - 6);
            (0..self.words.len())
                .filter(|wi| wi & stride == 0)
                .map(|wi| (self.words[wi] ^ self.words[wi + stride]).count_ones() as u64)
                .sum()
        }
    }

    /// `|∂F|`
    pub fn edge_boundary_size(&self) -> u64 {
        (0..self.n).map(|k| self.cut(k)).sum()
    }

    /// `I[F] = |∂F| / 2^(n-1)`
    pub fn total_influence(&self) -> Dyadic {
        if self.n == 0 {
            return Dyadic::ZERO;
        }
        Dyadic::new(self.edge_boundary_size() as i128, self.n as u32 - 1)
    }

    /// `Inf_i[F]`
    pub fn influence(&self, i: usize) -> Result<Dyadic> {
        let cut = self.boundary_in_direction(i)?;
        Ok(Dyadic::new(cut as i128, self.n as u32 - 1))
    }

    /// The image of `F` under `X_{{i}}` (toggle coordinate `i` in every member).
    pub fn flip_coord(&self, i: usize) -> Result<SetFamily> {
        check_coord(self.n, i)?;
        Ok(self.flip_bit(self.n - i))
    }

    pub(crate) fn flip_bit(&self, k: usize) -> SetFamily {
        let words = if k < 6 {
            self.words.iter().map(|&w| bits::flip_in_word(w, k)).collect()
        } else {
            let stride = 1 << (k - 6);
            (0..self.words.len())
                .map(|wi| self.words[wi ^ stride])
                .collect()
        };
        SetFamily::from_words(self.n, words)
    }

    /// `I_i(F) = {A ∈ F : A Δ {i} ∉ F}`
    pub fn pivotal_family(&self, i: usize) -> Result<SetFamily> {
        let flipped = self.flip_coord(i)?;
        Ok(self.zip(&flipped, |a, b| a & !b))
    }

    fn zip(&self, other: &SetFamily, op: impl Fn(u64, u64) -> u64) -> SetFamily {
        debug_assert_eq!(self.n, other.n);
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(&a, &b)| op(a, b))
            .collect();
        SetFamily::from_words(self.n, words)
    }

    fn same_dim(&self, other: &SetFamily) -> Result<()> {
        if self.n != other.n {
            Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            })
        } else {
            Ok(())
        }
    }

    pub fn union(&self, other: &SetFamily) -> Result<SetFamily> {
        self.same_dim(other)?;
        Ok(self.zip(other, |a, b| a | b))
    }

    pub fn intersection(&self, other: &SetFamily) -> Result<SetFamily> {
        self.same_dim(other)?;
        Ok(self.zip(other, |a, b| a & b))
    }

    pub fn difference(&self, other: &SetFamily) -> Result<SetFamily> {
        self.same_dim(other)?;
        Ok(self.zip(other, |a, b| a & !b))
    }

    /// `|F Δ G|`
    pub fn symmetric_difference_size(&self, other: &SetFamily) -> Result<u64> {
        self.same_dim(other)?;
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as u64)
            .sum())
    }

    pub fn is_subset_of(&self, other: &SetFamily) -> Result<bool> {
        self.same_dim(other)?;
        Ok(self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0))
    }

    /// `P([n]) ∖ F`
    pub fn complement(&self) -> SetFamily {
        let full = SetFamily::full(self.n).expect("dimension already checked");
        self.zip(&full, |a, b| !a & b)
    }

    /// True iff `F` is closed under taking supersets.
    pub fn is_increasing(&self) -> bool {
        (0..self.n).all(|k| {
            if k < 6 {
                let b = 1u32 << k;
                self.words
                    .iter()
                    .all(|&w| w & bits::low(k) & !(w >> b) == 0)
            } else {
                let stride = 1 << (k - 6);
                (0..self.words.len())
                    .filter(|wi| wi & stride == 0)
                    .all(|wi| self.words[wi] & !self.words[wi + stride] == 0)
            }
        })
    }

    /// `F_B^C = {S ∖ C : S ∈ F, S ∩ B = C}`, as a family on `[n] ∖ B`
    /// re-indexed to `1, …, n - |B|` in increasing coordinate order.
    pub fn slice(&self, b: Subset, c: Subset) -> Result<SetFamily> {
        check_within(b, self.n)?;
        if !c.is_subset_of(b) {
            return Err(Error::NotSubset(c.to_string(), b.to_string()));
        }
        let n = self.n;
        let m = n - b.len();
        let free: Vec<usize> = (1..=n).filter(|&i| !b.contains(i)).collect();
        let base = c.index(n);
        let mut out = SetFamily::empty(m)?;
        for p in 0..1usize << m {
            let mut full = base;
            for (t, &coord) in free.iter().enumerate() {
                if p & (1 << (m - 1 - t)) != 0 {
                    full |= 1 << (n - coord);
                }
            }
            if self.contains_index(full) {
                out.insert_index(p);
            }
        }
        Ok(out)
    }

    /// One-coordinate slice statistics.
    pub fn slice_stats(&self, i: usize) -> Result<SliceStats> {
        check_coord(self.n, i)?;
        let s = Subset::singleton(i);
        let plus = self.slice(s, s)?;
        let minus = self.slice(s, Subset::EMPTY)?;
        let (mu_plus, mu_minus) = (plus.measure(), minus.measure());
        Ok(SliceStats {
            coord: i,
            mu_plus,
            mu_minus,
            eps_plus: plus.total_influence() - lex_influence(mu_plus)?,
            eps_minus: minus.total_influence() - lex_influence(mu_minus)?,
        })
    }

    /// Two-coordinate slice statistics.
    pub fn slice_stats2(&self, i: usize, j: usize) -> Result<PairSliceStats> {
        check_coord(self.n, i)?;
        check_coord(self.n, j)?;
        if i == j {
            return Err(Error::RepeatedCoordinate(i));
        }
        let b = Subset::of(&[i, j]);
        let stat = |c: Subset| -> Result<(Dyadic, Dyadic)> {
            let s = self.slice(b, c)?;
            let mu = s.measure();
            Ok((mu, s.total_influence() - lex_influence(mu)?))
        };
        let (mu_pp, eps_pp) = stat(b)?;
        let (mu_pm, eps_pm) = stat(Subset::singleton(i))?;
        let (mu_mp, eps_mp) = stat(Subset::singleton(j))?;
        let (mu_mm, eps_mm) = stat(Subset::EMPTY)?;
        Ok(PairSliceStats {
            coords: (i, j),
            mu_pp,
            mu_pm,
            mu_mp,
            mu_mm,
            eps_pp,
            eps_pm,
            eps_mp,
            eps_mm,
        })
    }

    /// Splits `I[F]` over the coordinates of `S`: returns
    /// `(E_{B⊆S} I[F_S^B], Σ_{i∈S} Inf_i[F])`, whose sum is `I[F]`.
    pub fn decompose_influence(&self, s: Subset) -> Result<(Dyadic, Dyadic)> {
        check_within(s, self.n)?;
        let slices: Dyadic = s
            .subsets()
            .map(|b| self.slice(s, b).map(|f| f.total_influence()))
            .sum::<Result<Dyadic>>()?;
        let expectation = slices.scale_pow2(-(s.len() as i32));
        let infl = s
            .elements()
            .map(|i| self.influence(i))
            .sum::<Result<Dyadic>>()?;
        Ok((expectation, infl))
    }
}

pub(crate) fn check_coord(n: usize, i: usize) -> Result<()> {
    if i == 0 || i > n {
        Err(Error::CoordinateOutOfRange { coord: i, n })
    } else {
        Ok(())
    }
}

pub(crate) fn check_within(s: Subset, n: usize) -> Result<()> {
    match s.elements().find(|&e| e > n) {
        Some(e) => Err(Error::ElementOutOfRange { element: e, n }),
        None => Ok(()),
    }
}

impl fmt::Debug for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SetFamily(n={}, ", self.n)?;
        f.debug_set().entries(self.sets()).finish()?;
        f.write_str(")")
    }
}

impl fmt::Display for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, s) in self.sets().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lex::lex_segment;

    fn remark44() -> SetFamily {
        // {S ⊆ [4] : {1,2} ⊆ S, S ∩ {3,4} ≠ ∅} ∪ {S : {3,4} ⊆ S}
        SetFamily::from_indices(
            4,
            (0..16).filter(|&x| {
                let s = Subset::from_index(x, 4);
                (s.contains(1) && s.contains(2) && (s.contains(3) || s.contains(4)))
                    || (s.contains(3) && s.contains(4))
            }),
        )
        .unwrap()
    }

    /// Counts boundary edges by walking every edge of the cube.
    fn boundary_by_edges(f: &SetFamily) -> u64 {
        let n = f.dim();
        let mut count = 0;
        for x in 0..1usize << n {
            for k in 0..n {
                let y = x | 1 << k;
                if y != x && f.contains_index(x) != f.contains_index(y) {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn family_from_sets_examples() {
        let e = SetFamily::from_sets(&[], 3).unwrap();
        assert_eq!(e.len(), 0);
        let all: Vec<_> = (0..8).map(|x| Subset::from_index(x, 3)).collect();
        assert_eq!(SetFamily::from_sets(&all, 3).unwrap().len(), 8);
        let f = SetFamily::from_element_lists(&[&[1, 2], &[1, 3], &[1, 2, 3]], 3).unwrap();
        assert_eq!(f.indices().collect::<Vec<_>>(), vec![5, 6, 7]);
        assert_eq!(f.mask(), Some(0b1110_0000));
    }

    #[test]
    fn family_from_sets_errors() {
        assert!(matches!(
            SetFamily::from_element_lists(&[&[4]], 3),
            Err(Error::ElementOutOfRange { element: 4, n: 3 })
        ));
        assert!(matches!(
            SetFamily::from_element_lists(&[&[1], &[1]], 3),
            Err(Error::DuplicateSubset(_))
        ));
        assert!(SetFamily::empty(13).is_err());
    }

    #[test]
    fn measure_examples() {
        assert_eq!(SetFamily::empty(4).unwrap().measure(), Dyadic::ZERO);
        assert_eq!(
            SetFamily::dictatorship(4, 1).unwrap().measure(),
            Dyadic::HALF
        );
        assert_eq!(remark44().measure(), Dyadic::new(3, 3));
    }

    #[test]
    fn boundary_examples() {
        // d-dimensional subcube: (n - d) 2^d
        for n in 1..=6 {
            for d in 0..=n {
                let fixed = Subset::range(1, n - d);
                let cube = SetFamily::subcube(n, fixed, fixed).unwrap();
                assert_eq!(cube.edge_boundary_size(), ((n - d) << d) as u64);
            }
        }
        assert_eq!(lex_segment(3, 3).unwrap().edge_boundary_size(), 5);
        assert_eq!(remark44().edge_boundary_size(), 12);
    }

    #[test]
    fn influence_examples() {
        for n in 1..=8 {
            let d1 = SetFamily::dictatorship(n, 1).unwrap();
            assert_eq!(d1.total_influence(), Dyadic::ONE);
            assert_eq!(d1.influence(1).unwrap(), Dyadic::ONE);
            if n > 1 {
                assert_eq!(d1.influence(2).unwrap(), Dyadic::ZERO);
            }
        }
        let full = SetFamily::full(3).unwrap();
        for i in 1..=3 {
            assert_eq!(full.influence(i).unwrap(), Dyadic::ZERO);
        }
        assert_eq!(remark44().total_influence(), Dyadic::new(3, 1));
        let l33 = lex_segment(3, 3).unwrap();
        assert_eq!(l33.total_influence(), Dyadic::new(5, 2));
        assert_eq!(l33.influence(1).unwrap(), Dyadic::new(3, 2));
        assert!(l33.influence(0).is_err());
        assert!(l33.influence(4).is_err());
    }

    #[test]
    fn pivotal_examples() {
        let d1 = SetFamily::dictatorship(4, 1).unwrap();
        assert_eq!(d1.pivotal_family(1).unwrap(), d1);
        assert!(SetFamily::full(3).unwrap().pivotal_family(2).unwrap().is_empty());
        let l33 = lex_segment(3, 3).unwrap();
        // {1,2,3} Δ {2} = {1,3} is still in the segment
        let expected = SetFamily::from_element_lists(&[&[1, 2]], 3).unwrap();
        assert_eq!(l33.pivotal_family(2).unwrap(), expected);
        for i in 1..=3 {
            let piv = l33.pivotal_family(i).unwrap();
            assert_eq!(Dyadic::new(piv.len() as i128, 2), l33.influence(i).unwrap());
        }
        assert!(l33.pivotal_family(5).is_err());
    }

    #[test]
    fn slice_examples() {
        let one = Subset::singleton(1);
        for n in 1..=5 {
            let d1 = SetFamily::dictatorship(n, 1).unwrap();
            assert_eq!(d1.slice(one, one).unwrap(), SetFamily::full(n - 1).unwrap());
            assert!(d1.slice(one, Subset::EMPTY).unwrap().is_empty());
        }
        let s = remark44().slice(one, Subset::EMPTY).unwrap();
        // {3,4} and {2,3,4} re-indexed to {2,3} and {1,2,3} on [3]
        let expected = SetFamily::from_element_lists(&[&[2, 3], &[1, 2, 3]], 3).unwrap();
        assert_eq!(s, expected);
        assert_eq!(s.measure(), Dyadic::new(1, 2));
        assert!(remark44().slice(one, Subset::singleton(2)).is_err());
    }

    #[test]
    fn slice_stats_examples() {
        let d1 = SetFamily::dictatorship(4, 1).unwrap().slice_stats(1).unwrap();
        assert_eq!((d1.mu_plus, d1.mu_minus), (Dyadic::ONE, Dyadic::ZERO));
        assert_eq!((d1.eps_plus, d1.eps_minus), (Dyadic::ZERO, Dyadic::ZERO));
        let r = remark44().slice_stats(1).unwrap();
        assert_eq!(r.mu_plus, Dyadic::HALF);
        assert_eq!(r.eps_plus, Dyadic::HALF);
        assert_eq!(r.mu_minus, Dyadic::new(1, 2));
        assert!(remark44().slice_stats2(1, 1).is_err());
        let p = remark44().slice_stats2(1, 2).unwrap();
        assert_eq!(p.mu_pp, Dyadic::new(3, 2));
        assert_eq!(p.eps_pp, Dyadic::ZERO);
        assert_eq!(
            (p.mu_pp + p.mu_pm + p.mu_mp + p.mu_mm).scale_pow2(-2),
            remark44().measure()
        );
    }

    #[test]
    fn increasing_examples() {
        assert!(SetFamily::dictatorship(3, 2).unwrap().is_increasing());
        for n in 1..=8 {
            let f = SetFamily::from_sets(&[Subset::EMPTY], n).unwrap();
            assert!(!f.is_increasing());
        }
        assert!(remark44().is_increasing());
        assert!(SetFamily::empty(7).unwrap().is_increasing());
        assert!(SetFamily::full(7).unwrap().is_increasing());
        assert!(SetFamily::dictatorship(8, 1).unwrap().is_increasing());
        assert!(!SetFamily::dictatorship(8, 1).unwrap().complement().is_increasing());
    }

    #[test]
    fn decompose_influence_examples() {
        let f = remark44();
        let i = f.total_influence();
        assert_eq!(f.decompose_influence(Subset::EMPTY).unwrap(), (i, Dyadic::ZERO));
        assert_eq!(f.decompose_influence(Subset::full(4)).unwrap(), (Dyadic::ZERO, i));
        let (a, b) = f.decompose_influence(Subset::singleton(1)).unwrap();
        assert_eq!(a + b, Dyadic::new(3, 1));
    }

    #[test]
    fn multiword_kernels_agree_with_edge_walk() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for n in [7, 8, 9] {
            for _ in 0..5 {
                let f = SetFamily::from_indices(n, (0..1 << n).filter(|_| rng.random_bool(0.4)))
                    .unwrap();
                assert_eq!(f.edge_boundary_size(), boundary_by_edges(&f));
                assert_eq!(f.complement().edge_boundary_size(), f.edge_boundary_size());
                for i in 1..=n {
                    let flipped = f.flip_coord(i).unwrap();
                    assert_eq!(flipped.len(), f.len());
                    assert_eq!(flipped.flip_coord(i).unwrap(), f);
                    let k = n - i;
                    assert!(flipped.indices().all(|x| f.contains_index(x ^ (1 << k))));
                }
            }
        }
    }
}
