//! Fractional lexicographic families of order 1 and 2.
//!
//! A fractional lexicographic family of order `k` assigns a dyadic measure
//! `v(B) ∈ [0, 1]` to each `B ⊆ [k]`. It stands for the family on `[k + m]`
//! whose slice over `[k]` at `B` is the lexicographic segment of measure
//! `v(B)`, for any `m` large enough to realise every value.

use rayon::prelude::*;
use serde::Serialize;

use crate::dyadic::{exact, Dyadic, Rational};
use crate::error::{Error, Result};
use crate::family::{SetFamily, MAX_DIM};
use crate::lex::{decompose_measure, decompose_measure_extended, lex_influence, lex_segment};
use crate::subset::Subset;

/// Largest supported order.
pub const MAX_ORDER: usize = 2;

/// A map `P([k]) → [0, 1] ∩ dyadics`, `k ∈ {1, 2}`.
///
/// `values` is indexed by cube position, so for `k = 2` the order is
/// `∅, {2}, {1}, {1,2}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FracLexFamily {
    k: usize,
    values: Vec<Dyadic>,
}

impl FracLexFamily {
    pub fn new(k: usize, values: Vec<Dyadic>) -> Result<FracLexFamily> {
        if k == 0 || k > MAX_ORDER {
            return Err(Error::Dimension { n: k, max: MAX_ORDER });
        }
        if values.len() != 1 << k {
            return Err(Error::Precondition(format!(
                "order {k} needs {} values, got {}",
                1 << k,
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.in_unit_interval()) {
            return Err(Error::InvalidMeasure {
                value: v.to_string(),
                reason: "fractional values must lie in [0, 1]",
            });
        }
        Ok(FracLexFamily { k, values })
    }

    /// `L_{μ-,μ+}`: value `μ-` on `∅` and `μ+` on `{1}`.
    pub fn order1(mu_minus: Dyadic, mu_plus: Dyadic) -> Result<FracLexFamily> {
        FracLexFamily::new(1, vec![mu_minus, mu_plus])
    }

    /// Order 2 with the values on `∅`, `{1}`, `{2}` and `{1,2}`.
    pub fn order2(empty: Dyadic, one: Dyadic, two: Dyadic, both: Dyadic) -> Result<FracLexFamily> {
        FracLexFamily::new(2, vec![empty, two, one, both])
    }

    pub fn order(&self) -> usize {
        self.k
    }

    /// `v(B)`
    pub fn value(&self, b: Subset) -> Dyadic {
        self.values[b.index(self.k)]
    }

    pub fn values(&self) -> &[Dyadic] {
        &self.values
    }

    /// Average of the values.
    pub fn measure(&self) -> Dyadic {
        self.values
            .iter()
            .copied()
            .sum::<Dyadic>()
            .scale_pow2(-(self.k as i32))
    }

    /// `μ_i^-` (coordinate `i` absent) or `μ_i^+` (present).
    pub fn slice_measure(&self, i: usize, present: bool) -> Result<Dyadic> {
        crate::family::check_coord(self.k, i)?;
        let sum: Dyadic = Subset::full(self.k)
            .subsets()
            .filter(|b| b.contains(i) == present)
            .map(|b| self.value(b))
            .sum();
        Ok(sum.scale_pow2(-(self.k as i32 - 1)))
    }

    /// Smallest `m` with every `2^m·v(B)` an integer.
    pub fn min_padding(&self) -> u32 {
        self.values.iter().map(|v| v.log_den()).max().unwrap_or(0)
    }

    /// The associated family on `[k + m]`.
    pub fn associate(&self, m: usize) -> Result<SetFamily> {
        let n = self.k + m;
        if n > MAX_DIM {
            return Err(Error::Dimension { n, max: MAX_DIM });
        }
        let mut f = SetFamily::empty(n)?;
        for (bi, v) in self.values.iter().enumerate() {
            let size = v.times_pow2_as_int(m as u32).ok_or_else(|| {
                Error::Precondition(format!("padding m = {m} cannot realise value {v}"))
            })?;
            let seg = lex_segment(m, size as u64)?;
            for p in seg.indices() {
                f.insert_index(bi << m | p);
            }
        }
        Ok(f)
    }

    /// `I[L]`, computed from the slice decomposition over `[k]`:
    /// `2^-k Σ_B I[L_{v(B)}] + 2^-(k-1) Σ_i Σ_{B∌i} |v(B ∪ {i}) - v(B)|`.
    ///
    /// ```
    /// use cubeiso::{Dyadic, FracLexFamily};
    /// let l = FracLexFamily::order1(Dyadic::new(1, 2), Dyadic::new(3, 2)).unwrap();
    /// assert_eq!(l.influence(), Dyadic::new(3, 1));
    /// ```
    pub fn influence(&self) -> Dyadic {
        let k = self.k;
        let slices: Dyadic = self
            .values
            .iter()
            .map(|&v| lex_influence(v).expect("value in [0, 1]"))
            .sum();
        let mut edges = Dyadic::ZERO;
        for i in 1..=k {
            for b in Subset::full(k).subsets().filter(|b| !b.contains(i)) {
                edges += (self.value(b.with(i)) - self.value(b)).abs();
            }
        }
        slices.scale_pow2(-(k as i32)) + edges.scale_pow2(-(k as i32 - 1))
    }
}

/// `I[L]` for a fractional lexicographic family.
pub fn frac_influence(l: &FracLexFamily) -> Dyadic {
    l.influence()
}

/// Which hypothesis of a lower-bound lemma a point satisfies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Regime {
    /// Order 1 with `μ- <= r`; bound `2μ-`.
    #[serde(rename = "mu_minus<=r")]
    SmallMinus,
    /// Order 1 with `3r <= μ- <= μ/2`; bound `(2/3)μ-`.
    #[serde(rename = "3r<=mu_minus<=mu/2")]
    MiddleMinus,
    /// Order 2 with `r <= μ_1^-, μ_2^- <= 3r` and `r <= cμ`; bound `r/2`.
    #[serde(rename = "order2")]
    Order2,
    #[serde(rename = "out_of_regime")]
    OutOfRegime,
}

/// Outcome of one lower-bound check. `lhs = I[L]`, `rhs` is `I[L_μ]` plus
/// the bound, and `slack = lhs - rhs`; `rhs` and `slack` are absent out of
/// regime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub hypothesis_regime: Regime,
    pub values: Vec<Dyadic>,
    pub mu: Dyadic,
    pub j: u32,
    pub r: Dyadic,
    pub lhs: Dyadic,
    pub lex: Dyadic,
    #[serde(with = "exact::option")]
    pub rhs: Option<Rational>,
    #[serde(with = "exact::option")]
    pub slack: Option<Rational>,
    /// `μ > 1/2`, so `j = 1`, outside the ambient `j >= 2`.
    pub j_is_one: bool,
    /// `j = 2` and `μ- <= r`, the base case `μ = 1/4 + r`.
    pub base_case: bool,
}

impl BoundReport {
    pub fn in_regime(&self) -> bool {
        self.hypothesis_regime != Regime::OutOfRegime
    }

    /// True unless the point is in regime with negative slack.
    pub fn holds(&self) -> bool {
        self.slack.is_none_or(|s| s >= Rational::from_integer(0))
    }
}

/// Checks `I[L_{μ-,μ+}] >= I[L_μ] + 2μ-` when `μ- <= r`, and
/// `I[L_{μ-,μ+}] >= I[L_μ] + (2/3)μ-` when `3r <= μ- <= μ/2`, where
/// `μ = (μ- + μ+)/2 = 2^-j + r`.
///
/// `μ` may exceed `1/2`; such points have `j = 1` and are flagged.
pub fn check_order1_bound(mu_minus: Dyadic, mu_plus: Dyadic) -> Result<BoundReport> {
    if !mu_minus.in_unit_interval() || !mu_plus.in_unit_interval() || mu_minus > mu_plus {
        return Err(Error::Precondition(format!(
            "need 0 <= mu- <= mu+ <= 1, got ({mu_minus}, {mu_plus})"
        )));
    }
    let l = FracLexFamily::order1(mu_minus, mu_plus)?;
    let mu = l.measure();
    let dec = decompose_measure_extended(mu)?;
    let r = dec.r;
    let (regime, bound) = if mu_minus <= r {
        (Regime::SmallMinus, mu_minus.double().to_rational())
    } else if r + r.double() <= mu_minus && mu_minus <= mu.half() {
        (
            Regime::MiddleMinus,
            mu_minus.to_rational() * Rational::new(2, 3),
        )
    } else {
        (Regime::OutOfRegime, Rational::from_integer(0))
    };
    Ok(finish(l, mu, dec.j, r, regime, bound))
}

fn finish(
    l: FracLexFamily,
    mu: Dyadic,
    j: u32,
    r: Dyadic,
    regime: Regime,
    bound: Rational,
) -> BoundReport {
    let lhs = l.influence();
    let lex = lex_influence(mu).expect("measure in [0, 1]");
    let (rhs, slack) = if regime == Regime::OutOfRegime {
        (None, None)
    } else {
        let rhs = lex.to_rational() + bound;
        (Some(rhs), Some(lhs.to_rational() - rhs))
    };
    let base_case = regime == Regime::SmallMinus && j == 2;
    BoundReport {
        hypothesis_regime: regime,
        values: l.values,
        mu,
        j,
        r,
        lhs,
        lex,
        rhs,
        slack,
        j_is_one: j == 1,
        base_case,
    }
}

/// Checks `I[L] >= I[L_μ] + r/2` for an order-2 family with
/// `r <= μ_1^-(L) <= 3r`, `r <= μ_2^-(L) <= 3r` and `r <= cμ`.
pub fn check_order2_bound(l: &FracLexFamily, c: Rational) -> Result<BoundReport> {
    if l.order() != 2 {
        return Err(Error::Precondition("order-2 family required".into()));
    }
    let mu = l.measure();
    let dec = decompose_measure(mu)?;
    let r = dec.r;
    let m1 = l.slice_measure(1, false)?;
    let m2 = l.slice_measure(2, false)?;
    let three_r = r + r.double();
    let hyp = r <= m1
        && m1 <= three_r
        && r <= m2
        && m2 <= three_r
        && r.to_rational() <= c * mu.to_rational();
    let regime = if hyp { Regime::Order2 } else { Regime::OutOfRegime };
    Ok(finish(l.clone(), mu, dec.j, r, regime, r.half().to_rational()))
}

/// Aggregate of a grid sweep.
#[derive(Clone, Debug, Default, Serialize)]
pub struct SweepSummary {
    pub log_den: u32,
    pub points: u64,
    pub in_regime: u64,
    pub per_regime: Vec<(Regime, u64)>,
    pub base_case_points: u64,
    pub j_is_one_points: u64,
    pub j_is_one_violations: u64,
    #[serde(with = "exact::option")]
    pub min_slack: Option<Rational>,
    pub min_slack_at: Option<Vec<Dyadic>>,
    /// Points in regime with slack exactly zero.
    pub equality_points: Vec<Vec<Dyadic>>,
    pub violations: Vec<BoundReport>,
}

impl SweepSummary {
    fn new(log_den: u32) -> SweepSummary {
        SweepSummary {
            log_den,
            ..SweepSummary::default()
        }
    }

    fn record(&mut self, rep: BoundReport) {
        self.points += 1;
        if !rep.in_regime() {
            return;
        }
        self.in_regime += 1;
        match self.per_regime.iter_mut().find(|(r, _)| *r == rep.hypothesis_regime) {
            Some((_, c)) => *c += 1,
            None => self.per_regime.push((rep.hypothesis_regime, 1)),
        }
        self.base_case_points += rep.base_case as u64;
        self.j_is_one_points += rep.j_is_one as u64;
        let slack = rep.slack.expect("in regime");
        if self.min_slack.is_none_or(|m| slack < m) {
            self.min_slack = Some(slack);
            self.min_slack_at = Some(rep.values.clone());
        }
        if slack == Rational::from_integer(0) {
            self.equality_points.push(rep.values.clone());
        }
        if !rep.holds() {
            self.j_is_one_violations += rep.j_is_one as u64;
            self.violations.push(rep);
        }
    }

    fn merge(mut self, other: SweepSummary) -> SweepSummary {
        self.points += other.points;
        self.in_regime += other.in_regime;
        for (r, c) in other.per_regime {
            match self.per_regime.iter_mut().find(|(q, _)| *q == r) {
                Some((_, d)) => *d += c,
                None => self.per_regime.push((r, c)),
            }
        }
        self.base_case_points += other.base_case_points;
        self.j_is_one_points += other.j_is_one_points;
        self.j_is_one_violations += other.j_is_one_violations;
        if let Some(s) = other.min_slack {
            if self.min_slack.is_none_or(|m| s < m) {
                self.min_slack = Some(s);
                self.min_slack_at = other.min_slack_at;
            }
        }
        self.equality_points.extend(other.equality_points);
        self.violations.extend(other.violations);
        self
    }

    /// Number of in-regime points with negative slack.
    pub fn violation_count(&self) -> usize {
        self.violations.len()
    }
}

/// Every order-1 point `(μ-, μ+)` with denominator `2^log_den`,
/// `μ- <= μ+`, `μ > 0`.
pub fn sweep_order1(log_den: u32) -> SweepSummary {
    let top = 1i128 << log_den;
    let parts: Vec<SweepSummary> = (0..=top)
        .into_par_iter()
        .map(|a| {
            let mut s = SweepSummary::new(log_den);
            for b in a.max(1)..=top {
                let rep = check_order1_bound(Dyadic::new(a, log_den), Dyadic::new(b, log_den))
                    .expect("grid point is valid");
                s.record(rep);
            }
            s
        })
        .collect();
    parts
        .into_iter()
        .fold(SweepSummary::new(log_den), SweepSummary::merge)
}

/// Integer form of the order-2 hypotheses, in units of `2^-(log_den + 2)`:
/// `total` is `4μ·2^log_den` and `pair1`, `pair2` are the sums giving
/// `μ_1^-` and `μ_2^-`.
fn order2_hypothesis_on_grid(total: i128, pair1: i128, pair2: i128, c: Rational) -> bool {
    let below = if total.count_ones() == 1 {
        total / 2
    } else {
        1 << (127 - total.leading_zeros())
    };
    let r = total - below;
    let (m1, m2) = (2 * pair1, 2 * pair2);
    r <= m1 && m1 <= 3 * r && r <= m2 && m2 <= 3 * r && r * c.denom() <= c.numer() * total
}

/// Every order-2 family with values of denominator `2^log_den` and
/// `0 < μ <= 1/2`, checked with constant `c`.
pub fn sweep_order2(log_den: u32, c: Rational) -> SweepSummary {
    let top = 1i128 << log_den;
    let parts: Vec<SweepSummary> = (0..=top)
        .into_par_iter()
        .map(|e| {
            let mut s = SweepSummary::new(log_den);
            for one in 0..=top {
                for two in 0..=top {
                    for both in 0..=top {
                        let total = e + one + two + both;
                        if total == 0 || total > 2 * top {
                            continue;
                        }
                        if !order2_hypothesis_on_grid(total, e + two, e + one, c) {
                            s.points += 1;
                            continue;
                        }
                        let d = |x| Dyadic::new(x, log_den);
                        let l = FracLexFamily::order2(d(e), d(one), d(two), d(both))
                            .expect("grid point is valid");
                        s.record(check_order2_bound(&l, c).expect("measure in (0, 1/2]"));
                    }
                }
            }
            s
        })
        .collect();
    parts
        .into_iter()
        .fold(SweepSummary::new(log_den), SweepSummary::merge)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(n: i128, k: u32) -> Dyadic {
        Dyadic::new(n, k)
    }

    #[test]
    fn associate_examples() {
        for m in 0..=5 {
            let l = FracLexFamily::order1(Dyadic::ZERO, Dyadic::ONE).unwrap();
            assert_eq!(l.associate(m).unwrap(), SetFamily::dictatorship(1 + m, 1).unwrap());
            let full = FracLexFamily::order2(Dyadic::ONE, Dyadic::ONE, Dyadic::ONE, Dyadic::ONE)
                .unwrap();
            assert_eq!(full.associate(m).unwrap(), SetFamily::full(2 + m).unwrap());
        }
        let l = FracLexFamily::order1(d(1, 2), d(3, 2)).unwrap();
        let f = l.associate(2).unwrap();
        assert_eq!(f.len(), 4);
        let one = Subset::singleton(1);
        assert_eq!(f.slice(one, Subset::EMPTY).unwrap(), lex_segment(2, 1).unwrap());
        assert_eq!(f.slice(one, one).unwrap(), lex_segment(2, 3).unwrap());
        assert!(l.associate(1).is_err());
    }

    #[test]
    fn influence_examples() {
        let dict = FracLexFamily::order1(Dyadic::ZERO, Dyadic::ONE).unwrap();
        assert_eq!(frac_influence(&dict), Dyadic::ONE);
        let a = FracLexFamily::order1(d(1, 2), d(3, 2)).unwrap();
        // ½·I[L_{1/4}] + ½·I[L_{3/4}] + 1/2 with I[L_{1/4}] = I[L_{3/4}] = 1
        assert_eq!(lex_influence(d(1, 2)).unwrap(), Dyadic::ONE);
        assert_eq!(frac_influence(&a), d(3, 1));
        let b = FracLexFamily::order1(d(1, 4), d(9, 4)).unwrap();
        assert_eq!(frac_influence(&b), d(11, 3));
        assert_eq!(
            frac_influence(&b),
            lex_influence(d(5, 4)).unwrap() + d(1, 4).double()
        );
    }

    #[test]
    fn rejects_bad_input() {
        assert!(FracLexFamily::new(3, vec![Dyadic::ZERO; 8]).is_err());
        assert!(FracLexFamily::new(2, vec![Dyadic::ZERO; 3]).is_err());
        assert!(FracLexFamily::order1(Dyadic::ZERO, d(3, 1)).is_err());
        assert!(check_order1_bound(d(3, 2), d(1, 2)).is_err());
        assert!(check_order1_bound(Dyadic::ZERO, Dyadic::ZERO).is_err());
    }

    #[test]
    fn padding_independence() {
        for k in 1..=2usize {
            let count = 1usize << k;
            // every value vector with denominator 2^3
            for code in 0..9usize.pow(count as u32) {
                let values: Vec<Dyadic> = (0..count)
                    .map(|p| d((code / 9usize.pow(p as u32) % 9) as i128, 3))
                    .collect();
                let l = FracLexFamily::new(k, values).unwrap();
                let infl = l.influence();
                for m in l.min_padding() as usize..=8 {
                    let f = l.associate(m).unwrap();
                    assert_eq!(f.total_influence(), infl, "{l:?} m={m}");
                    assert_eq!(f.measure(), l.measure());
                    for i in 1..=k {
                        let st = f.slice_stats(i).unwrap();
                        assert_eq!(st.mu_minus, l.slice_measure(i, false).unwrap());
                        assert_eq!(st.mu_plus, l.slice_measure(i, true).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn order1_closed_form_matches_decomposition() {
        for a in 0..=16 {
            for b in a..=16 {
                let (lo, hi) = (d(a, 4), d(b, 4));
                let l = FracLexFamily::order1(lo, hi).unwrap();
                let closed = (lex_influence(lo).unwrap() + lex_influence(hi).unwrap()).half()
                    + (hi - lo);
                assert_eq!(l.influence(), closed);
                let f = l.associate(4).unwrap();
                let (e, s) = f.decompose_influence(Subset::singleton(1)).unwrap();
                assert_eq!(e + s, closed);
            }
        }
    }

    #[test]
    fn order1_examples() {
        let z = check_order1_bound(Dyadic::ZERO, d(5, 3)).unwrap();
        assert_eq!(z.hypothesis_regime, Regime::SmallMinus);
        assert!(z.holds());
        let eq = check_order1_bound(d(1, 4), d(9, 4)).unwrap();
        assert_eq!((eq.j, eq.r), (2, d(1, 4)));
        assert_eq!(eq.lhs, d(11, 3));
        assert_eq!(eq.slack, Some(Rational::from_integer(0)));
        assert!(eq.base_case);
    }

    #[test]
    fn order1_grid_small() {
        let s = sweep_order1(5);
        assert_eq!(s.violation_count(), 0, "{:?}", s.violations.first());
        assert!(s.in_regime > 0);
    }

    #[test]
    fn order2_examples() {
        let c = Rational::new(1, 6);
        // μ = 1/2 has r = 1/4 > μ/6
        let l = FracLexFamily::order2(Dyadic::ZERO, Dyadic::ONE, Dyadic::ZERO, Dyadic::ONE).unwrap();
        let rep = check_order2_bound(&l, c).unwrap();
        assert_eq!(rep.hypothesis_regime, Regime::OutOfRegime);
        assert!(rep.slack.is_none());
        // L_μ itself viewed with order 2: μ_1^- = 0 < r, so gated
        let lmu = FracLexFamily::order2(Dyadic::ZERO, d(3, 3), Dyadic::ZERO, Dyadic::ONE).unwrap();
        assert_eq!(
            check_order2_bound(&lmu, c).unwrap().hypothesis_regime,
            Regime::OutOfRegime
        );
        assert!(check_order2_bound(&FracLexFamily::order1(Dyadic::ZERO, Dyadic::ONE).unwrap(), c).is_err());
    }

    #[test]
    fn order2_grid_small() {
        let s = sweep_order2(4, Rational::new(1, 6));
        assert_eq!(s.violation_count(), 0, "{:?}", s.violations.first());
    }

    #[test]
    fn report_json() {
        let rep = check_order1_bound(d(1, 4), d(9, 4)).unwrap();
        let v: serde_json::Value = serde_json::to_value(&rep).unwrap();
        assert_eq!(v["hypothesis_regime"], "mu_minus<=r");
        assert_eq!(v["lhs"], "11/2^3");
        assert_eq!(v["slack"], "0/2^0");
        let mid = check_order1_bound(d(3, 4), d(7, 4)).unwrap();
        assert_eq!(mid.hypothesis_regime, Regime::OutOfRegime);
    }
}
