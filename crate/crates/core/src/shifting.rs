//! Compression (shifting) operators and the pipelines built from them.

use crate::error::{Error, Result};
use crate::family::{check_within, SetFamily};
use crate::subset::Subset;

fn check_shift_args(f: &SetFamily, s: Subset, t: Subset) -> Result<()> {
    check_within(s, f.dim())?;
    check_within(t, f.dim())?;
    if !s.intersection(t).is_empty() {
        return Err(Error::OverlappingShift {
            s: s.to_string(),
            t: t.to_string(),
        });
    }
    Ok(())
}

/// `S_{S,T}(F)`: each `A ∈ F` with `S ⊆ A`, `A ∩ T = ∅` and `(A∖S)∪T ∉ F`
/// is replaced by `(A∖S)∪T`.
///
/// Computed slice by slice: over `S∪T`, the `S`-slice becomes the
/// intersection of the `S`- and `T`-slices and the `T`-slice their union.
///
/// ```
/// use cubeiso::{shift, SetFamily, Subset};
/// let f = SetFamily::from_element_lists(&[&[2]], 2).unwrap();
/// let g = shift(&f, Subset::of(&[2]), Subset::of(&[1])).unwrap();
/// assert_eq!(g, SetFamily::from_element_lists(&[&[1]], 2).unwrap());
/// ```
pub fn shift(f: &SetFamily, s: Subset, t: Subset) -> Result<SetFamily> {
    check_shift_args(f, s, t)?;
    let n = f.dim();
    let (si, ti) = (s.index(n), t.index(n));
    let both = si | ti;
    let mut g = f.clone();
    for r in 0..1usize << n {
        if r & both != 0 {
            continue;
        }
        let (a, b) = (r | si, r | ti);
        let (fa, fb) = (f.contains_index(a), f.contains_index(b));
        g.set_index(a, fa && fb);
        g.set_index(b, fa || fb);
    }
    Ok(g)
}

/// `S_{i,j}`, shorthand for `S_{{i},{j}}`.
pub fn shift_ij(f: &SetFamily, i: usize, j: usize) -> Result<SetFamily> {
    shift(f, Subset::singleton(i), Subset::singleton(j))
}

/// `S_{∅,{n}} ∘ ⋯ ∘ S_{∅,{1}}`: pushes every set upwards one coordinate at a
/// time. The result is increasing and no coordinate influence grows.
pub fn monotonize_all(f: &SetFamily) -> SetFamily {
    (1..=f.dim()).fold(f.clone(), |g, i| {
        shift(&g, Subset::EMPTY, Subset::singleton(i)).expect("valid coordinate")
    })
}

/// True iff `S_{n,i}(F) = F` for every `i < n` and `A ∪ {n} ∈ F` whenever
/// `A ∈ F`.
pub fn is_n_stable(f: &SetFamily) -> bool {
    let n = f.dim();
    if n == 0 {
        return true;
    }
    let up = shift(f, Subset::EMPTY, Subset::singleton(n)).expect("valid coordinate");
    up == *f && (1..n).all(|i| shift_ij(f, n, i).expect("valid coordinates") == *f)
}

/// `S_{n,n-1}(⋯ S_{n,2}(S_{n,1}(F)))` for an increasing `F`.
pub fn n_stabilize(f: &SetFamily) -> Result<SetFamily> {
    if !f.is_increasing() {
        return Err(Error::NotIncreasing);
    }
    let n = f.dim();
    if n == 0 {
        return Ok(f.clone());
    }
    (1..n).try_fold(f.clone(), |g, i| shift_ij(&g, n, i))
}

/// The stages of the compression cascade towards `D_1`.
///
/// Stage `k` (for `k = 1, …, n-1`) applies `S_{S,{1}}` for every `k`-subset
/// `S ⊆ {2, …, n}` in colex order to the previous stage. The last stage is
/// contained in `D_1`, has no larger total influence than `F`, and does not
/// decrease `μ_i^-` for `i > 1`.
pub fn cascade_to_dictatorship(f: &SetFamily) -> Result<Vec<SetFamily>> {
    if !f.is_increasing() {
        return Err(Error::NotIncreasing);
    }
    let mu = f.measure();
    if mu > crate::dyadic::Dyadic::HALF {
        return Err(Error::MeasureTooLarge(mu.to_string()));
    }
    let n = f.dim();
    let one = Subset::singleton(1);
    let mut stages = Vec::with_capacity(n.saturating_sub(1));
    let mut g = f.clone();
    for k in 1..n {
        for s in colex_subsets(2, n, k) {
            g = shift(&g, s, one)?;
        }
        stages.push(g.clone());
    }
    Ok(stages)
}

/// `k`-subsets of `{lo, …, hi}` in colex order.
fn colex_subsets(lo: usize, hi: usize, k: usize) -> impl Iterator<Item = Subset> {
    let width = (hi + 1).saturating_sub(lo) as u32;
    crate::bits::combinations(width, k as u32).map(move |m| Subset::from_bits((m as u32) << (lo - 1)))
}

/// The two exchanges `F_1 = (F∖{A}) ∪ {B∖{n}}` and `F_2 = (F∖{B}) ∪ {A∖{n}}`
/// for an increasing, `n`-stable `F` and distinct `A, B ∈ I_n(F)`.
pub fn pivotal_exchange(f: &SetFamily, a: Subset, b: Subset) -> Result<(SetFamily, SetFamily)> {
    let n = f.dim();
    if n == 0 {
        return Err(Error::Precondition("dimension must be positive".into()));
    }
    check_within(a, n)?;
    check_within(b, n)?;
    if !f.is_increasing() {
        return Err(Error::NotIncreasing);
    }
    if !is_n_stable(f) {
        return Err(Error::Precondition("family is not n-stable".into()));
    }
    if a == b {
        return Err(Error::Precondition(format!("A = B = {a}")));
    }
    let piv = f.pivotal_family(n)?;
    for (name, x) in [("A", a), ("B", b)] {
        if !piv.contains(x) {
            return Err(Error::Precondition(format!("{name} = {x} is not in I_{n}(F)")));
        }
    }
    let exchange = |out: Subset, down: Subset| {
        let mut g = f.clone();
        g.remove_index(out.index(n));
        g.insert_index(down.without(n).index(n));
        g
    };
    Ok((exchange(a, b), exchange(b, a)))
}

/// Hypothesis under which a shift cannot increase total influence:
/// `|S| >= |T|` and `S_{S',T}(F) = F` for every `S' ⊂ S` with
/// `|S'| = |S| - 1`.
pub fn shift_monotonicity_hypothesis(f: &SetFamily, s: Subset, t: Subset) -> Result<bool> {
    check_shift_args(f, s, t)?;
    if s.len() < t.len() {
        return Ok(false);
    }
    for e in s.elements() {
        if shift(f, s.without(e), t)? != *f {
            return Ok(false);
        }
    }
    Ok(true)
}
