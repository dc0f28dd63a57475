use std::cmp::Ordering;

use serde::{Serialize, Serializer};

use crate::dyadic::{exact, rational_string, Dyadic, Rational};
use crate::error::Result;
use crate::family::SetFamily;
use crate::lex::lex_influence;

use super::{family, Mode, Population, VerifierConfig};

/// The largest `c2` for which a case of the dichotomy can be met.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseBound {
    /// Fails for every `c2 >= 0`.
    Never,
    /// Holds exactly for `c2` up to this value.
    UpTo(Rational),
    /// Holds for every `c2`.
    Unbounded,
}

impl CaseBound {
    /// The bound for `c2·a <= b` with `a >= 0`.
    fn solve(a: Dyadic, b: Dyadic) -> CaseBound {
        if b.is_negative() {
            CaseBound::Never
        } else if a.is_zero() {
            CaseBound::Unbounded
        } else {
            CaseBound::UpTo(b.to_rational() / a.to_rational())
        }
    }

    /// Whether `c2` is admitted.
    pub fn admits(&self, c2: Rational) -> bool {
        match self {
            CaseBound::Never => false,
            CaseBound::UpTo(x) => c2 <= *x,
            CaseBound::Unbounded => true,
        }
    }
}

impl Ord for CaseBound {
    fn cmp(&self, other: &Self) -> Ordering {
        use CaseBound::*;
        match (self, other) {
            (UpTo(a), UpTo(b)) => a.cmp(b),
            (Never, Never) | (Unbounded, Unbounded) => Ordering::Equal,
            (Never, _) | (_, Unbounded) => Ordering::Less,
            (_, Never) | (Unbounded, _) => Ordering::Greater,
        }
    }
}

impl PartialOrd for CaseBound {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for CaseBound {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            CaseBound::Never => s.serialize_str("never"),
            CaseBound::UpTo(x) => s.serialize_str(&rational_string(x)),
            CaseBound::Unbounded => s.serialize_str("unbounded"),
        }
    }
}

/// Best `c2` over all families weakly isomorphic to `F`, per case.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Prop41Constant {
    pub mu: Dyadic,
    pub eps: Dyadic,
    /// Best over `G` of `c2·μ_1^-(G) + ½ε_1^+(G) <= ε`.
    pub case1: CaseBound,
    /// Best over `G` of `c2·μ(G∖S_{1,2}) + ¼ε_{1,2}^{++}(G) <= ε`.
    pub case2: CaseBound,
}

impl Prop41Constant {
    pub fn best(&self) -> CaseBound {
        self.case1.max(self.case2)
    }
}

/// Computes both case bounds of `F`.
///
/// A weakly isomorphic `G = X_D(π(F))` only relabels and flips slices, so
/// `(μ_1^-(G), ε_1^+(G))` ranges over `(μ_i^∓(F), ε_i^±(F))`, and the
/// codimension-2 slice `G_{1,2}^{1,2}` over the four quadrant slices of
/// every pair `{i, j}`.
pub fn prop41_constant(f: &SetFamily) -> Result<Prop41Constant> {
    let n = f.dim();
    let mu = f.measure();
    let eps = f.total_influence() - lex_influence(mu)?;
    let mut case1 = CaseBound::Never;
    for i in 1..=n {
        let s = f.slice_stats(i)?;
        for (m, e) in [(s.mu_minus, s.eps_plus), (s.mu_plus, s.eps_minus)] {
            case1 = case1.max(CaseBound::solve(m, eps - e.half()));
        }
    }
    let mut case2 = CaseBound::Never;
    for i in 1..=n {
        for j in i + 1..=n {
            let s = f.slice_stats2(i, j)?;
            for (m, e) in [
                (s.mu_pp, s.eps_pp),
                (s.mu_pm, s.eps_pm),
                (s.mu_mp, s.eps_mp),
                (s.mu_mm, s.eps_mm),
            ] {
                let quarter = |d: Dyadic| d.scale_pow2(-2);
                case2 = case2.max(CaseBound::solve(mu - quarter(m), eps - quarter(e)));
            }
        }
    }
    Ok(Prop41Constant {
        mu,
        eps,
        case1,
        case2,
    })
}

/// From this value of `c1` on (up to the next point), the dichotomy holds
/// across the population exactly for `c2` within `c2`; `witness` attains
/// the bound.
#[derive(Clone, Debug, Serialize)]
pub struct FrontierPoint {
    #[serde(with = "exact")]
    pub c1: Rational,
    pub c2: CaseBound,
    pub witness: SetFamily,
}

#[derive(Clone, Debug, Serialize)]
pub struct Prop41Report {
    pub n: usize,
    pub mode: Mode,
    /// Families with `0 < μ <= 1/2`.
    pub families: u64,
    /// Families where Case (1) admits a smaller `c2` than Case (2).
    pub case2_needed: u64,
    /// Breakpoints of the feasible `(c1, c2)` region, by increasing `c1`.
    pub frontier: Vec<FrontierPoint>,
}

impl Prop41Report {
    /// Largest `c2` admitted for every family with `ε <= c1·μ`.
    pub fn max_c2(&self, c1: Rational) -> CaseBound {
        self.frontier
            .iter()
            .take_while(|p| p.c1 <= c1)
            .last()
            .map_or(CaseBound::Unbounded, |p| p.c2)
    }
}

/// Sweeps `c1 = ε/μ` over the population and records how the largest
/// admissible `c2` falls.
pub fn verify_prop41_dichotomy(cfg: &VerifierConfig) -> Result<Prop41Report> {
    let pop = Population::for_config(cfg)?;
    let n = pop.dim();
    type Point = (Rational, CaseBound, u64);
    let parts = pop.run(
        cfg.jobs,
        || (Vec::<Point>::new(), 0u64, 0u64, None::<crate::Error>),
        |(pts, count, needed, err), mask, w| {
            if err.is_some() {
                return;
            }
            let f = family(n, mask);
            let mu = f.measure();
            if mu.is_zero() || mu > Dyadic::HALF {
                return;
            }
            match prop41_constant(&f) {
                Ok(c) => {
                    *count += w;
                    if c.case1 < c.case2 {
                        *needed += w;
                    }
                    let ratio = c.eps.to_rational() / mu.to_rational();
                    pts.push((ratio, c.best(), mask));
                }
                Err(e) => *err = Some(e),
            }
        },
    )?;
    let mut points = Vec::new();
    let (mut families, mut case2_needed) = (0, 0);
    for (pts, count, needed, err) in parts {
        if let Some(e) = err {
            return Err(e);
        }
        points.extend(pts);
        families += count;
        case2_needed += needed;
    }
    points.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut frontier: Vec<FrontierPoint> = Vec::new();
    for (ratio, bound, mask) in points {
        if frontier.last().is_none_or(|p| bound < p.c2) {
            frontier.push(FrontierPoint {
                c1: ratio,
                c2: bound,
                witness: family(n, mask),
            });
        }
    }
    Ok(Prop41Report {
        n,
        mode: pop.mode(),
        families,
        case2_needed,
        frontier,
    })
}
