//! The automorphism group of `Q_n` acting on families: weak isomorphism,
//! canonical forms and distance to the lexicographic class.
//!
//! An automorphism is a pair `(π, D)` acting by `F ↦ X_D(π(F))`, where
//! `π(F) = {π(S) : S ∈ F}` and `X_D(F) = {S Δ D : S ∈ F}`. The group has
//! order `n!·2^n`; exact group walks are supported up to `n = 6`.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bits;
use crate::error::{Error, Result};
use crate::family::SetFamily;
use crate::lex::lex_segment;
use crate::subset::Subset;

/// Largest dimension for which the whole group is enumerated.
pub const MAX_GROUP_DIM: usize = 6;

/// A cube automorphism `(π, D)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CubeAutomorphism {
    pi: Vec<usize>,
    flip: Subset,
}

impl CubeAutomorphism {
    /// `pi[i - 1]` is the image of coordinate `i`.
    pub fn new(pi: Vec<usize>, flip: Subset) -> Result<CubeAutomorphism> {
        let n = pi.len();
        let mut seen = Subset::EMPTY;
        for &p in &pi {
            if p == 0 || p > n || seen.contains(p) {
                return Err(Error::InvalidPermutation(pi));
            }
            seen = seen.with(p);
        }
        crate::family::check_within(flip, n)?;
        Ok(CubeAutomorphism { pi, flip })
    }

    pub fn identity(n: usize) -> CubeAutomorphism {
        CubeAutomorphism {
            pi: (1..=n).collect(),
            flip: Subset::EMPTY,
        }
    }

    /// The transposition of coordinates `i` and `j`.
    pub fn transposition(n: usize, i: usize, j: usize) -> Result<CubeAutomorphism> {
        crate::family::check_coord(n, i)?;
        crate::family::check_coord(n, j)?;
        let mut pi: Vec<usize> = (1..=n).collect();
        pi.swap(i - 1, j - 1);
        Ok(CubeAutomorphism {
            pi,
            flip: Subset::EMPTY,
        })
    }

    /// `X_D` alone.
    pub fn flip(n: usize, d: Subset) -> Result<CubeAutomorphism> {
        CubeAutomorphism::new((1..=n).collect(), d)
    }

    pub fn dim(&self) -> usize {
        self.pi.len()
    }

    pub fn pi(&self) -> &[usize] {
        &self.pi
    }

    pub fn flip_set(&self) -> Subset {
        self.flip
    }

    pub fn apply_subset(&self, s: Subset) -> Subset {
        let image = s
            .elements()
            .fold(Subset::EMPTY, |acc, i| acc.with(self.pi[i - 1]));
        image.symmetric_difference(self.flip)
    }

    fn permute(&self, s: Subset) -> Subset {
        s.elements()
            .fold(Subset::EMPTY, |acc, i| acc.with(self.pi[i - 1]))
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &CubeAutomorphism) -> Result<CubeAutomorphism> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(CubeAutomorphism {
            pi: other.pi.iter().map(|&p| self.pi[p - 1]).collect(),
            flip: self.flip.symmetric_difference(self.permute(other.flip)),
        })
    }

    pub fn inverse(&self) -> CubeAutomorphism {
        let mut inv = vec![0; self.dim()];
        for (i, &p) in self.pi.iter().enumerate() {
            inv[p - 1] = i + 1;
        }
        let inverse = CubeAutomorphism {
            pi: inv,
            flip: Subset::EMPTY,
        };
        CubeAutomorphism {
            flip: inverse.permute(self.flip),
            ..inverse
        }
    }

    /// `(π, D)·F = X_D(π(F))`.
    pub fn apply(&self, f: &SetFamily) -> Result<SetFamily> {
        let n = f.dim();
        if n != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: n,
            });
        }
        let mut out = SetFamily::empty(n)?;
        for s in f.sets() {
            out.insert_index(self.apply_subset(s).index(n));
        }
        Ok(out)
    }
}

impl fmt::Debug for CubeAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(π={:?}, D={})", self.pi, self.flip)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WitnessLiteral {
    pi: Vec<usize>,
    #[serde(rename = "D")]
    d: String,
}

/// Serializes as `{"pi": [...], "D": "bitstring"}`.
impl Serialize for CubeAutomorphism {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WitnessLiteral {
            pi: self.pi.clone(),
            d: self.flip.bitstring(self.dim()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CubeAutomorphism {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<CubeAutomorphism, D::Error> {
        let lit = WitnessLiteral::deserialize(d)?;
        let flip = Subset::parse_bitstring(&lit.d, lit.pi.len()).map_err(serde::de::Error::custom)?;
        CubeAutomorphism::new(lit.pi, flip).map_err(serde::de::Error::custom)
    }
}

fn check_group_dim(n: usize) -> Result<()> {
    if n > MAX_GROUP_DIM {
        Err(Error::Dimension {
            n,
            max: MAX_GROUP_DIM,
        })
    } else {
        Ok(())
    }
}

/// Current position of a group walk: the automorphism that maps the start
/// mask to the current mask.
pub(crate) struct WalkState {
    n: usize,
    pi: [usize; MAX_GROUP_DIM],
    flip: u32,
}

impl WalkState {
    pub(crate) fn automorphism(&self) -> CubeAutomorphism {
        CubeAutomorphism {
            pi: self.pi[..self.n].to_vec(),
            flip: Subset::from_bits(self.flip),
        }
    }

    fn transpose(&mut self, a: usize, b: usize) {
        for p in &mut self.pi[..self.n] {
            if *p == a {
                *p = b;
            } else if *p == b {
                *p = a;
            }
        }
        let (ba, bb) = (self.flip >> (a - 1) & 1, self.flip >> (b - 1) & 1);
        if ba != bb {
            self.flip ^= (1 << (a - 1)) | (1 << (b - 1));
        }
    }
}

/// Visits `a·F` for every automorphism `a` exactly once (`n <= 6`, single
/// word). The callback returns `false` to stop early.
///
/// Permutations come from Heap's algorithm, each step a transposition applied
/// on the left; inside each permutation a Gray code walks all flip sets.
pub(crate) fn walk_group(n: usize, mask: u64, mut visit: impl FnMut(u64, &WalkState) -> bool) {
    debug_assert!(n <= MAX_GROUP_DIM);
    let mut state = WalkState {
        n,
        pi: [1, 2, 3, 4, 5, 6],
        flip: 0,
    };
    let mut m = mask;
    let gray = |m: &mut u64, state: &mut WalkState, visit: &mut dyn FnMut(u64, &WalkState) -> bool| {
        if !visit(*m, state) {
            return false;
        }
        for s in 1u32..(1 << n) {
            let c = s.trailing_zeros() as usize + 1;
            *m = bits::flip_in_word(*m, n - c);
            state.flip ^= 1 << (c - 1);
            if !visit(*m, state) {
                return false;
            }
        }
        true
    };
    if !gray(&mut m, &mut state, &mut visit) {
        return;
    }
    let mut c = [0usize; MAX_GROUP_DIM];
    let mut i = 1;
    while i < n {
        if c[i] < i {
            let (p, q) = if i % 2 == 0 { (0, i) } else { (c[i], i) };
            let (a, b) = (p + 1, q + 1);
            // coordinates a < b sit at position bits n-b < n-a
            m = bits::transpose_in_word(m, n - b, n - a);
            state.transpose(a, b);
            if !gray(&mut m, &mut state, &mut visit) {
                return;
            }
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Every automorphism of `Q_n` (`n <= 6`), in group-walk order.
pub fn all_automorphisms(n: usize) -> Result<Vec<CubeAutomorphism>> {
    check_group_dim(n)?;
    let mut out = Vec::new();
    walk_group(n, 0, |_, st| {
        out.push(st.automorphism());
        true
    });
    Ok(out)
}

/// `n!·2^n`
pub fn group_order(n: usize) -> u64 {
    (1..=n as u64).product::<u64>() << n
}

/// Smallest mask in the orbit of a single-word family.
pub(crate) fn canonical_mask(n: usize, mask: u64) -> u64 {
    let mut best = mask;
    walk_group(n, mask, |m, _| {
        best = best.min(m);
        true
    });
    best
}

/// The orbit member with the smallest mask. Two families have the same
/// canonical form exactly when they are weakly isomorphic.
pub fn canonical_form(f: &SetFamily) -> Result<SetFamily> {
    let n = f.dim();
    check_group_dim(n)?;
    let mask = f.mask().expect("single word");
    SetFamily::from_mask(n, canonical_mask(n, mask))
}

/// Orbit size of a single-word family.
pub(crate) fn orbit_size(n: usize, mask: u64) -> u64 {
    let mut stab = 0u64;
    walk_group(n, mask, |m, _| {
        stab += (m == mask) as u64;
        true
    });
    group_order(n) / stab
}

/// Returns a witness `a` with `a·F = G` if one exists.
///
/// Families with different sizes, boundaries or influence multisets are
/// rejected without a group walk, so this also answers negatively for large
/// `n` when such an invariant separates them.
pub fn are_weakly_isomorphic(f: &SetFamily, g: &SetFamily) -> Result<Option<CubeAutomorphism>> {
    let n = f.dim();
    if n != g.dim() {
        return Err(Error::DimensionMismatch {
            left: n,
            right: g.dim(),
        });
    }
    if f.len() != g.len() || f.edge_boundary_size() != g.edge_boundary_size() {
        return Ok(None);
    }
    let profile = |h: &SetFamily| {
        let mut v: Vec<u64> = (1..=n)
            .map(|i| h.boundary_in_direction(i).expect("valid coordinate"))
            .collect();
        v.sort_unstable();
        v
    };
    if profile(f) != profile(g) {
        return Ok(None);
    }
    check_group_dim(n)?;
    let target = g.mask().expect("single word");
    let mut witness = None;
    walk_group(n, f.mask().expect("single word"), |m, st| {
        if m == target {
            witness = Some(st.automorphism());
            false
        } else {
            true
        }
    });
    Ok(witness)
}

/// Deduplicated images of `L` of a fixed size under the whole group.
///
/// Built once per `(n, m)` and then shared read-only.
#[derive(Clone, Debug)]
pub struct LexImageTable {
    n: usize,
    m: u64,
    images: Vec<u64>,
}

impl LexImageTable {
    pub fn new(n: usize, m: u64) -> Result<LexImageTable> {
        check_group_dim(n)?;
        let l = lex_segment(n, m)?.mask().expect("single word");
        let mut images = Vec::new();
        walk_group(n, l, |img, _| {
            images.push(img);
            true
        });
        images.sort_unstable();
        images.dedup();
        Ok(LexImageTable { n, m, images })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> u64 {
        self.m
    }

    /// Number of distinct families weakly isomorphic to `L`.
    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn contains(&self, mask: u64) -> bool {
        self.images.binary_search(&mask).is_ok()
    }

    /// `min |F Δ G|` over the images `G`.
    pub fn distance(&self, mask: u64) -> u32 {
        self.images
            .iter()
            .map(|&img| (img ^ mask).count_ones())
            .min()
            .expect("orbit is non-empty")
    }
}

/// `min{|F Δ G| : G ≅ L}` for `L` the lexicographic segment of size `|F|`.
pub fn dist_to_lex_class(f: &SetFamily) -> Result<u64> {
    let n = f.dim();
    check_group_dim(n)?;
    let table = LexImageTable::new(n, f.len())?;
    Ok(table.distance(f.mask().expect("single word")) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::Dyadic;
    use crate::lex::stability_gap;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use std::collections::HashSet;

    fn all_by_definition(n: usize) -> Vec<CubeAutomorphism> {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for pos in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(pos, n);
                    out.push(q);
                }
            }
            out
        }
        let mut out = Vec::new();
        for p in perms(n) {
            for d in Subset::full(n).subsets() {
                out.push(CubeAutomorphism::new(p.clone(), d).unwrap());
            }
        }
        out
    }

    fn random_family(rng: &mut impl Rng, n: usize) -> SetFamily {
        SetFamily::from_indices(n, (0..1usize << n).filter(|_| rng.random_bool(0.5))).unwrap()
    }

    fn random_automorphism(rng: &mut impl Rng, n: usize) -> CubeAutomorphism {
        let mut pi: Vec<usize> = (1..=n).collect();
        for i in (1..n).rev() {
            pi.swap(i, rng.random_range(0..=i));
        }
        CubeAutomorphism::new(pi, Subset::from_bits(rng.random_range(0..1u32 << n))).unwrap()
    }

    #[test]
    fn apply_examples() {
        let l33 = lex_segment(3, 3).unwrap();
        assert_eq!(CubeAutomorphism::identity(3).apply(&l33).unwrap(), l33);
        let d1 = SetFamily::dictatorship(3, 1).unwrap();
        let flipped = CubeAutomorphism::flip(3, Subset::singleton(1)).unwrap().apply(&d1).unwrap();
        assert_eq!(flipped, d1.complement());
        let swapped = CubeAutomorphism::transposition(3, 1, 2).unwrap().apply(&l33).unwrap();
        let expected = SetFamily::from_element_lists(&[&[1, 2, 3], &[1, 2], &[2, 3]], 3).unwrap();
        assert_eq!(swapped, expected);
        assert!(CubeAutomorphism::identity(4).apply(&l33).is_err());
        assert!(CubeAutomorphism::new(vec![1, 1, 2], Subset::EMPTY).is_err());
    }

    #[test]
    fn walk_visits_each_element_once() {
        for n in 0..=MAX_GROUP_DIM {
            let walked = all_automorphisms(n).unwrap();
            assert_eq!(walked.len() as u64, group_order(n));
            let distinct: HashSet<_> = walked.iter().cloned().collect();
            assert_eq!(distinct.len(), walked.len());
        }
    }

    #[test]
    fn walk_masks_match_definition() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for n in 1..=5 {
            let f = random_family(&mut rng, n);
            let mut count = 0;
            walk_group(n, f.mask().unwrap(), |m, st| {
                let a = st.automorphism();
                assert_eq!(a.apply(&f).unwrap().mask().unwrap(), m);
                count += 1;
                true
            });
            assert_eq!(count, group_order(n));
        }
    }

    #[test]
    fn group_axioms() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let n = rng.random_range(1..=5);
            let (a, b) = (random_automorphism(&mut rng, n), random_automorphism(&mut rng, n));
            let f = random_family(&mut rng, n);
            let ab = a.compose(&b).unwrap();
            assert_eq!(ab.apply(&f).unwrap(), a.apply(&b.apply(&f).unwrap()).unwrap());
            let inv = a.inverse();
            assert_eq!(inv.apply(&a.apply(&f).unwrap()).unwrap(), f);
            assert_eq!(a.compose(&inv).unwrap(), CubeAutomorphism::identity(n));
        }
    }

    #[test]
    fn invariants_preserved() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let n = rng.random_range(1..=6);
            let a = random_automorphism(&mut rng, n);
            let f = random_family(&mut rng, n);
            let g = a.apply(&f).unwrap();
            assert_eq!(g.len(), f.len());
            assert_eq!(g.edge_boundary_size(), f.edge_boundary_size());
            let mut fi: Vec<Dyadic> = (1..=n).map(|i| f.influence(i).unwrap()).collect();
            let mut gi: Vec<Dyadic> = (1..=n).map(|i| g.influence(i).unwrap()).collect();
            fi.sort();
            gi.sort();
            assert_eq!(fi, gi);
            assert_eq!(dist_to_lex_class(&f).unwrap(), dist_to_lex_class(&g).unwrap());
            assert_eq!(canonical_form(&f).unwrap(), canonical_form(&g).unwrap());
        }
    }

    #[test]
    fn witness_json() {
        let a = CubeAutomorphism::new(vec![2, 3, 1], Subset::of(&[1, 3])).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"pi":[2,3,1],"D":"101"}"#);
        let back: CubeAutomorphism = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<CubeAutomorphism>(r#"{"pi":[1,1],"D":"00"}"#).is_err());
    }

    #[test]
    fn weak_isomorphism_examples() {
        let l = lex_segment(4, 6).unwrap();
        let id = are_weakly_isomorphic(&l, &l).unwrap().unwrap();
        assert_eq!(id.apply(&l).unwrap(), l);
        let d1 = SetFamily::dictatorship(4, 1).unwrap();
        let not2 = SetFamily::dictatorship(4, 2).unwrap().complement();
        let w = are_weakly_isomorphic(&d1, &not2).unwrap().unwrap();
        assert_eq!(w.apply(&d1).unwrap(), not2);
        let remark = SetFamily::from_indices(
            4,
            (0..16).filter(|&x| {
                let s = Subset::from_index(x, 4);
                (s.contains(1) && s.contains(2) && (s.contains(3) || s.contains(4)))
                    || (s.contains(3) && s.contains(4))
            }),
        )
        .unwrap();
        assert_eq!(l.edge_boundary_size(), 10);
        assert!(are_weakly_isomorphic(&l, &remark).unwrap().is_none());
    }

    #[test]
    fn canonical_examples() {
        for n in 1..=5 {
            let c = canonical_form(&SetFamily::dictatorship(n, 1).unwrap()).unwrap();
            for i in 2..=n {
                assert_eq!(canonical_form(&SetFamily::dictatorship(n, i).unwrap()).unwrap(), c);
            }
            assert_eq!(canonical_form(&c).unwrap(), c);
        }
        assert!(canonical_form(&SetFamily::empty(7).unwrap()).is_err());
    }

    /// Coefficient of `x^m` in `Π (1 + x^len)` over the position cycles of `g`.
    fn fixed_count(n: usize, g: &CubeAutomorphism, m: usize) -> u64 {
        let size = 1usize << n;
        let mut seen = vec![false; size];
        let mut poly = vec![0u64; size + 1];
        poly[0] = 1;
        for start in 0..size {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                len += 1;
                x = g.apply_subset(Subset::from_index(x, n)).index(n);
            }
            for k in (len..=size).rev() {
                poly[k] += poly[k - len];
            }
        }
        poly[m]
    }

    fn burnside(n: usize, m: usize) -> u64 {
        let group = all_by_definition(n);
        let total: u64 = group.iter().map(|g| fixed_count(n, g, m)).sum();
        assert_eq!(total % group.len() as u64, 0);
        total / group.len() as u64
    }

    #[test]
    fn canonical_classes_match_burnside() {
        for n in 1..=3 {
            let mut by_size = vec![HashSet::new(); (1 << n) + 1];
            for mask in 0..1u64 << (1 << n) {
                by_size[mask.count_ones() as usize].insert(canonical_mask(n, mask));
            }
            for (m, classes) in by_size.iter().enumerate() {
                assert_eq!(classes.len() as u64, burnside(n, m), "n={n} m={m}");
            }
        }
        // n = 2, m = 1: one class; total over all m for n = 3 is 22
        assert_eq!(burnside(2, 1), 1);
        assert_eq!((0..=8).map(|m| burnside(3, m)).sum::<u64>(), 22);
    }

    #[test]
    fn orbit_sizes_sum() {
        let n = 3;
        let mut reps = HashSet::new();
        for mask in 0..1u64 << 8 {
            reps.insert(canonical_mask(n, mask));
        }
        let total: u64 = reps.iter().map(|&r| orbit_size(n, r)).sum();
        assert_eq!(total, 256);
    }

    #[test]
    fn distance_examples() {
        for n in 1..=5 {
            for m in 0..=(1u64 << n) {
                assert_eq!(dist_to_lex_class(&lex_segment(n, m).unwrap()).unwrap(), 0);
            }
        }
        assert!(dist_to_lex_class(&SetFamily::empty(7).unwrap()).is_err());
    }

    #[test]
    fn distance_matches_brute_force_and_gap_zero() {
        let n = 3;
        let group = all_by_definition(n);
        for mask in 0..1u64 << 8 {
            let f = SetFamily::from_mask(n, mask).unwrap();
            let l = lex_segment(n, f.len()).unwrap();
            let brute = group
                .iter()
                .map(|g| g.apply(&l).unwrap().symmetric_difference_size(&f).unwrap())
                .min()
                .unwrap();
            let d = dist_to_lex_class(&f).unwrap();
            assert_eq!(d, brute);
            assert_eq!(d % 2, 0);
            assert_eq!(stability_gap(&f) == Dyadic::ZERO, d == 0);
        }
    }

    proptest! {
        #[test]
        fn canonical_is_idempotent_and_minimal(n in 1usize..=5, seed in any::<u64>()) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let f = random_family(&mut rng, n);
            let c = canonical_form(&f).unwrap();
            prop_assert_eq!(canonical_form(&c).unwrap(), c.clone());
            prop_assert!(c.mask().unwrap() <= f.mask().unwrap());
            prop_assert!(are_weakly_isomorphic(&f, &c).unwrap().is_some());
        }
    }
}
