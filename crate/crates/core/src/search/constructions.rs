use serde::Serialize;

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::family::{check_coord, SetFamily};
use crate::lex::{lex_boundary, lex_influence};
use crate::subset::Subset;
use crate::symmetry::dist_to_lex_class;

/// `F_{n,s,t} = {S : [t] ⊆ S} ∪ {S : [t-2] ∪ {t+1, …, s} ⊆ S}`.
///
/// Requires `t >= 2` and `t + 2 <= s <= n`.
pub fn make_tightness_family(n: usize, s: usize, t: usize) -> Result<SetFamily> {
    if t < 2 || t + 2 > s || s > n {
        return Err(Error::Precondition(format!(
            "need 2 <= t and t + 2 <= s <= n, got n = {n}, s = {s}, t = {t}"
        )));
    }
    let a = Subset::range(1, t);
    let b = Subset::range(1, t - 2).union(Subset::range(t + 1, s));
    let fa = SetFamily::subcube(n, a, a)?;
    let fb = SetFamily::subcube(n, b, b)?;
    fa.union(&fb)
}

/// `{S : {1,2} ⊆ S, S ∩ {3, …, t} ≠ ∅} ∪ {S : {3, …, t} ⊆ S}`.
///
/// Requires `4 <= t <= n`.
pub fn make_remark_family(n: usize, t: usize) -> Result<SetFamily> {
    if t < 4 || t > n {
        return Err(Error::Precondition(format!(
            "need 4 <= t <= n, got n = {n}, t = {t}"
        )));
    }
    let tail = Subset::range(3, t);
    let pair = Subset::of(&[1, 2]);
    let sets: Vec<Subset> = Subset::full(n)
        .subsets()
        .filter(|s| {
            (pair.is_subset_of(*s) && !s.intersection(tail).is_empty()) || tail.is_subset_of(*s)
        })
        .collect();
    SetFamily::from_sets(&sets, n)
}

/// Boundary excess and distance of a tightness family.
#[derive(Clone, Debug, Serialize)]
pub struct TightnessCheck {
    pub n: usize,
    pub s: usize,
    pub t: usize,
    pub size: u64,
    pub boundary: u64,
    pub lex_boundary: u64,
    pub excess: u64,
    pub dist: u64,
}

impl TightnessCheck {
    /// `dist = 2·(|∂F| - |∂L|)`
    pub fn holds(&self) -> bool {
        self.dist == 2 * self.excess
    }
}

pub fn check_tightness_family(n: usize, s: usize, t: usize) -> Result<TightnessCheck> {
    let f = make_tightness_family(n, s, t)?;
    let boundary = f.edge_boundary_size();
    let lex = lex_boundary(n, f.len())?;
    Ok(TightnessCheck {
        n,
        s,
        t,
        size: f.len(),
        boundary,
        lex_boundary: lex,
        excess: boundary - lex,
        dist: dist_to_lex_class(&f)?,
    })
}

/// A computed quantity next to its closed form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormulaCheck {
    pub name: &'static str,
    pub computed: Dyadic,
    pub expected: Dyadic,
}

impl FormulaCheck {
    pub fn holds(&self) -> bool {
        self.computed == self.expected
    }
}

/// Closed forms for the two-coordinate example family.
#[derive(Clone, Debug, Serialize)]
pub struct RemarkCheck {
    pub n: usize,
    pub t: usize,
    pub mu: Dyadic,
    pub eps: Dyadic,
    pub checks: Vec<FormulaCheck>,
}

impl RemarkCheck {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(FormulaCheck::holds)
    }
}

/// Compares `μ`, `I[F]`, `I[L_μ]`, `μ_1^-` and `ε_1^+` of
/// [`make_remark_family`] with their closed forms in `t`.
pub fn check_remark_family(n: usize, t: usize) -> Result<RemarkCheck> {
    let f = make_remark_family(n, t)?;
    check_coord(n, 1)?;
    let tt = t as u32;
    let p = |a: i128| Dyadic::new(a, tt);
    let one = Dyadic::ONE;
    let ti = t as i128;
    let mu = f.measure();
    let infl = f.total_influence();
    let lex = lex_influence(mu)?;
    let s1 = f.slice_stats(1)?;
    let checks = vec![
        FormulaCheck {
            name: "mu",
            computed: mu,
            expected: Dyadic::new(1, 2) + Dyadic::pow2_neg(tt - 1),
        },
        FormulaCheck {
            name: "I[F]",
            computed: infl,
            expected: one + p(8 * ti) - p(24),
        },
        FormulaCheck {
            name: "I[L_mu]",
            computed: lex,
            expected: one + p(4 * ti) - p(12),
        },
        FormulaCheck {
            name: "mu_1^-",
            computed: s1.mu_minus,
            expected: p(4),
        },
        FormulaCheck {
            name: "eps_1^+",
            computed: s1.eps_plus,
            expected: p(8 * ti) - p(24),
        },
    ];
    Ok(RemarkCheck {
        n,
        t,
        mu,
        eps: infl - lex,
        checks,
    })
}
