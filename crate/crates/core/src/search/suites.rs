use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dyadic::{Dyadic, Rational};
use crate::error::{Error, Result};
use crate::family::SetFamily;
use crate::fraclex::{sweep_order1, sweep_order2, FracLexFamily, SweepSummary};
use crate::lex::{decompose_measure, lex_influence};
use crate::shifting::{
    cascade_to_dictatorship, monotonize_all, n_stabilize, shift, shift_ij,
    shift_monotonicity_hypothesis,
};
use crate::subset::Subset;

use super::{family, Mode, Population, VerifierConfig};

/// A failed check, with the family and the coordinates involved.
#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub check: &'static str,
    pub family: SetFamily,
    pub coords: Vec<usize>,
}

/// Counts and stored failures for one named check.
#[derive(Clone, Debug, Default, Serialize)]
pub struct CheckTally {
    pub checked: u64,
    pub failed: u64,
    pub violations: Vec<Violation>,
}

impl CheckTally {
    fn record(&mut self, ok: bool, max: usize, v: impl FnOnce() -> Violation) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.violations.len() < max {
                self.violations.push(v());
            }
        }
    }

    fn merge(&mut self, other: CheckTally, max: usize) {
        self.checked += other.checked;
        self.failed += other.failed;
        let room = max.saturating_sub(self.violations.len());
        self.violations.extend(other.violations.into_iter().take(room));
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

fn violation(check: &'static str, f: &SetFamily, coords: Vec<usize>) -> Violation {
    Violation {
        check,
        family: f.clone(),
        coords,
    }
}

/// Results of the two bootstrapping inequalities.
#[derive(Clone, Debug, Serialize)]
pub struct BootstrapReport {
    pub n: usize,
    pub mode: Mode,
    /// `μ_i^- <= r ⇒ 2μ_i^- + ½ε_i^+ <= ε`, one check per `(F, i)`.
    pub r_large: CheckTally,
    /// The three-way alternative for `μ_i^- <= μ_j^- <= μ/6`, one check per
    /// `(F, i, j)`.
    pub r_small: CheckTally,
}

impl BootstrapReport {
    pub fn passed(&self) -> bool {
        self.r_large.passed() && self.r_small.passed()
    }
}

fn bootstrap_one(
    f: &SetFamily,
    large: &mut CheckTally,
    small: &mut CheckTally,
    max: usize,
) -> Result<()> {
    let n = f.dim();
    let mu = f.measure();
    if mu.is_zero() || mu > Dyadic::HALF {
        return Ok(());
    }
    let r = decompose_measure(mu)?.r;
    let eps = f.total_influence() - lex_influence(mu)?;
    let stats = (1..=n)
        .map(|i| f.slice_stats(i))
        .collect::<Result<Vec<_>>>()?;
    let first = |i: usize| {
        let s = &stats[i - 1];
        s.mu_minus.double() + s.eps_plus.half()
    };
    for s in &stats {
        if s.mu_minus <= r {
            large.record(first(s.coord) <= eps, max, || {
                violation("r_large", f, vec![s.coord])
            });
        }
    }
    if eps.is_zero() {
        return Ok(());
    }
    let sixth = mu.to_rational() / Rational::from_integer(6);
    for i in 1..=n {
        for j in 1..=n {
            let (mi, mj) = (stats[i - 1].mu_minus, stats[j - 1].mu_minus);
            if i == j || mi > mj || mj.to_rational() > sixth {
                continue;
            }
            let pair = f.slice_stats2(i, j)?;
            let e = eps.to_rational();
            let a = Rational::new(2, 3) * mj.to_rational()
                + stats[j - 1].eps_plus.half().to_rational();
            let b = first(i).to_rational();
            let outside = mu - pair.mu_pp.scale_pow2(-2);
            let c = outside.to_rational() / Rational::from_integer(6)
                + pair.eps_pp.scale_pow2(-2).to_rational();
            small.record(a <= e || b <= e || c <= e, max, || {
                violation("r_small", f, vec![i, j])
            });
        }
    }
    Ok(())
}

/// Checks both bootstrapping inequalities on every family of the
/// population with `0 < μ <= 1/2`.
pub fn verify_bootstrapping(cfg: &VerifierConfig) -> Result<BootstrapReport> {
    let pop = Population::for_config(cfg)?;
    let n = pop.dim();
    let max = cfg.max_findings;
    let parts = pop.run(
        cfg.jobs,
        || (CheckTally::default(), CheckTally::default(), None::<Error>),
        |(large, small, err), mask, _| {
            if err.is_none() {
                if let Err(e) = bootstrap_one(&family(n, mask), large, small, max) {
                    *err = Some(e);
                }
            }
        },
    )?;
    let (mut r_large, mut r_small) = (CheckTally::default(), CheckTally::default());
    for (a, b, err) in parts {
        if let Some(e) = err {
            return Err(e);
        }
        r_large.merge(a, max);
        r_small.merge(b, max);
    }
    Ok(BootstrapReport {
        n,
        mode: pop.mode(),
        r_large,
        r_small,
    })
}

/// A family and shift under which total influence grows.
#[derive(Clone, Debug, Serialize)]
pub struct ShiftWitness {
    pub family: SetFamily,
    pub s: Subset,
    pub t: Subset,
    pub before: Dyadic,
    pub after: Dyadic,
}

/// The shifting identities and inequalities on small cubes.
#[derive(Clone, Debug, Serialize)]
pub struct ShiftingReport {
    /// `I[F] = E_B I[F_S^B] + Σ_{i∈S} Inf_i[F]`: exhaustive at `n = 3`,
    /// random pairs at `n = 6`.
    pub influence_identity: CheckTally,
    /// Size preserved by every operator, exhaustive at `n = 3`.
    pub measure_preserved: CheckTally,
    /// `I[S_{S,T}(F)] <= I[F]` whenever the stability hypothesis holds.
    pub conditional_monotone: CheckTally,
    /// `Inf_j[S_{∅,{i}}(F)] <= Inf_j[F]` for all `i, j`.
    pub coordinatewise: CheckTally,
    /// The hypothesis is not vacuous: a shift that raises `I`.
    pub unhypothesized_witness: Option<ShiftWitness>,
}

impl ShiftingReport {
    pub fn passed(&self) -> bool {
        self.influence_identity.passed()
            && self.measure_preserved.passed()
            && self.conditional_monotone.passed()
            && self.coordinatewise.passed()
            && self.unhypothesized_witness.is_some()
    }
}

/// Random `(F, S)` pairs for the influence identity at `n = 6`.
pub const IDENTITY_SAMPLES: usize = 10_000;

fn disjoint_pairs(n: usize) -> Vec<(Subset, Subset)> {
    let full = Subset::full(n);
    full.subsets()
        .flat_map(|s| full.difference(s).subsets().map(move |t| (s, t)))
        .collect()
}

/// Runs the shifting suite. Only `cfg.seed` and `cfg.max_findings` are used.
pub fn verify_shifting(cfg: &VerifierConfig) -> Result<ShiftingReport> {
    let max = cfg.max_findings;
    let n = 3;
    let mut identity = CheckTally::default();
    let mut measure = CheckTally::default();
    let mut monotone = CheckTally::default();
    let mut coordinatewise = CheckTally::default();
    let mut witness = None;
    let pairs = disjoint_pairs(n);
    let identity_holds = |f: &SetFamily, s: Subset| -> Result<bool> {
        let (e, infl) = f.decompose_influence(s)?;
        Ok(e + infl == f.total_influence())
    };
    for mask in 0..1u64 << (1 << n) {
        let f = family(n, mask);
        let size = f.len();
        let infl = f.total_influence();
        for s in Subset::full(n).subsets() {
            identity.record(identity_holds(&f, s)?, max, || {
                violation("influence_identity", &f, s.elements().collect())
            });
        }
        for &(s, t) in &pairs {
            let g = shift(&f, s, t)?;
            let coords = || s.union(t).elements().collect();
            measure.record(g.len() == size, max, || violation("shift", &f, coords()));
            if shift_monotonicity_hypothesis(&f, s, t)? {
                monotone.record(g.total_influence() <= infl, max, || {
                    violation("conditional_monotone", &f, coords())
                });
            } else if g.total_influence() > infl
                && witness
                    .as_ref()
                    .is_none_or(|w: &ShiftWitness| w.s.len() < w.t.len() && s.len() >= t.len())
            {
                // prefer a witness with |S| >= |T|, where only stability fails
                witness = Some(ShiftWitness {
                    family: f.clone(),
                    s,
                    t,
                    before: infl,
                    after: g.total_influence(),
                });
            }
        }
        for i in 1..=n {
            for j in 1..=n {
                if i != j {
                    let g = shift_ij(&f, i, j)?;
                    measure.record(g.len() == size, max, || violation("shift_ij", &f, vec![i, j]));
                }
            }
            let g = shift(&f, Subset::EMPTY, Subset::singleton(i))?;
            for j in 1..=n {
                coordinatewise.record(g.influence(j)? <= f.influence(j)?, max, || {
                    violation("coordinatewise", &f, vec![i, j])
                });
            }
        }
        let up = monotonize_all(&f);
        measure.record(up.len() == size, max, || violation("monotonize_all", &f, vec![]));
        if f.is_increasing() {
            let g = n_stabilize(&f)?;
            measure.record(g.len() == size, max, || violation("n_stabilize", &f, vec![]));
            if f.measure() <= Dyadic::HALF {
                for g in cascade_to_dictatorship(&f)? {
                    measure.record(g.len() == size, max, || violation("cascade", &f, vec![]));
                }
            }
        }
    }
    let big = 6;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..IDENTITY_SAMPLES {
        let f = family(big, rng.random::<u64>());
        let s = Subset::from_bits(rng.random_range(0..1u32 << big));
        identity.record(identity_holds(&f, s)?, max, || {
            violation("influence_identity", &f, s.elements().collect())
        });
    }
    Ok(ShiftingReport {
        influence_identity: identity,
        measure_preserved: measure,
        conditional_monotone: monotone,
        coordinatewise,
        unhypothesized_witness: witness,
    })
}

/// Postconditions of the compression cascade towards `D_1`.
#[derive(Clone, Debug, Serialize)]
pub struct CascadeReport {
    pub n: usize,
    pub mode: Mode,
    /// Increasing families with `μ <= 1/2`.
    pub families: u64,
    pub inside_dictatorship: CheckTally,
    pub influence_not_increased: CheckTally,
    /// `μ_i^-(F_n) >= μ_i^-(F)`, one check per `(F, i)` with `i > 1`.
    pub slices_not_decreased: CheckTally,
}

impl CascadeReport {
    pub fn passed(&self) -> bool {
        self.inside_dictatorship.passed()
            && self.influence_not_increased.passed()
            && self.slices_not_decreased.passed()
    }
}

#[derive(Default)]
struct CascadeAcc {
    families: u64,
    inside: CheckTally,
    infl: CheckTally,
    slices: CheckTally,
    err: Option<Error>,
}

fn cascade_one(f: &SetFamily, acc: &mut CascadeAcc, max: usize) -> Result<()> {
    if !f.is_increasing() || f.measure() > Dyadic::HALF {
        return Ok(());
    }
    acc.families += 1;
    let n = f.dim();
    let last = cascade_to_dictatorship(f)?
        .pop()
        .unwrap_or_else(|| f.clone());
    let d1 = SetFamily::dictatorship(n, 1)?;
    acc.inside.record(last.is_subset_of(&d1)?, max, || {
        violation("inside_dictatorship", f, vec![1])
    });
    acc.infl
        .record(last.total_influence() <= f.total_influence(), max, || {
            violation("influence_not_increased", f, vec![])
        });
    for i in 2..=n {
        let ok = last.slice_stats(i)?.mu_minus >= f.slice_stats(i)?.mu_minus;
        acc.slices
            .record(ok, max, || violation("slices_not_decreased", f, vec![i]));
    }
    Ok(())
}

/// Runs the cascade on every increasing family with `μ <= 1/2` in the
/// population.
pub fn verify_cascade(cfg: &VerifierConfig) -> Result<CascadeReport> {
    let pop = Population::for_config(cfg)?;
    let n = pop.dim();
    let max = cfg.max_findings;
    let parts = pop.run(cfg.jobs, CascadeAcc::default, |acc, mask, _| {
        if acc.err.is_none() {
            if let Err(e) = cascade_one(&family(n, mask), acc, max) {
                acc.err = Some(e);
            }
        }
    })?;
    let mut total = CascadeAcc::default();
    for p in parts {
        if let Some(e) = p.err {
            return Err(e);
        }
        total.families += p.families;
        total.inside.merge(p.inside, max);
        total.infl.merge(p.infl, max);
        total.slices.merge(p.slices, max);
    }
    Ok(CascadeReport {
        n,
        mode: pop.mode(),
        families: total.families,
        inside_dictatorship: total.inside,
        influence_not_increased: total.infl,
        slices_not_decreased: total.slices,
    })
}

/// Padding independence and the two lower-bound sweeps.
#[derive(Clone, Debug, Serialize)]
pub struct FracLexReport {
    /// `μ`, `μ_i^±` and `I` of the associated family agree with the
    /// fractional values for every admissible padding up to the maximum.
    pub padding: CheckTally,
    pub order1: SweepSummary,
    pub order2: SweepSummary,
    /// `(μ-, μ+) = (1/16, 9/16)` attains the order-1 bound with equality.
    pub equality_case_hit: bool,
}

impl FracLexReport {
    pub fn passed(&self) -> bool {
        self.padding.passed()
            && self.order1.violation_count() == 0
            && self.order2.violation_count() == 0
            && self.equality_case_hit
    }
}

fn padding_consistent(l: &FracLexFamily, m: usize) -> Result<bool> {
    let f = l.associate(m)?;
    let mut ok = f.measure() == l.measure() && f.total_influence() == l.influence();
    for i in 1..=l.order() {
        let s = f.slice_stats(i)?;
        ok &= s.mu_minus == l.slice_measure(i, false)? && s.mu_plus == l.slice_measure(i, true)?;
    }
    Ok(ok)
}

/// Grid of values `a/2^k` for the padding checks.
const PADDING_GRID_LOG: u32 = 2;

/// Runs the fractional-lexicographic suite.
pub fn verify_fraclex(cfg: &VerifierConfig) -> Result<FracLexReport> {
    let max = cfg.max_findings;
    let mut padding = CheckTally::default();
    let k = PADDING_GRID_LOG;
    let grid: Vec<Dyadic> = (0..=1i128 << k).map(|a| Dyadic::new(a, k)).collect();
    let fams = grid
        .iter()
        .flat_map(|&a| grid.iter().map(move |&b| FracLexFamily::order1(a, b)))
        .chain(grid.iter().flat_map(|&a| {
            let g = grid.clone();
            g.into_iter().flat_map(move |b| {
                [Dyadic::ZERO, Dyadic::new(1, 1), Dyadic::ONE]
                    .into_iter()
                    .flat_map(move |c| {
                        [Dyadic::new(1, 2), Dyadic::ONE]
                            .into_iter()
                            .map(move |d| FracLexFamily::order2(a, b, c, d))
                    })
            })
        }));
    for l in fams {
        let l = l?;
        for m in l.min_padding() as usize..=cfg.max_padding {
            if l.order() + m > crate::family::MAX_DIM {
                break;
            }
            padding.record(padding_consistent(&l, m)?, max, || Violation {
                check: "padding",
                family: l.associate(m).expect("checked above"),
                coords: vec![m],
            });
        }
    }
    let order1 = sweep_order1(cfg.order1_log_den);
    let order2 = sweep_order2(cfg.order2_log_den, cfg.order2_c);
    let target = vec![Dyadic::new(1, 4), Dyadic::new(9, 4)];
    let equality_case_hit = order1.equality_points.contains(&target);
    Ok(FracLexReport {
        padding,
        order1,
        order2,
        equality_case_hit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bootstrapping_n4() {
        // at n = 3 the second hypothesis forces ε = 0
        let r = verify_bootstrapping(&VerifierConfig::new(3)).unwrap();
        assert_eq!(r.r_small.checked, 0);
        let r = verify_bootstrapping(&VerifierConfig::new(4)).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.r_large.checked > 0);
        assert!(r.r_small.checked > 0);
    }

    #[test]
    fn tally_caps_stored_findings() {
        let mut t = CheckTally::default();
        let f = SetFamily::empty(1).unwrap();
        for _ in 0..5 {
            t.record(false, 2, || violation("x", &f, vec![]));
        }
        assert_eq!((t.checked, t.failed, t.violations.len()), (5, 5, 2));
    }

    #[test]
    fn shifting_suite() {
        let r = verify_shifting(&VerifierConfig::new(3)).unwrap();
        assert!(r.passed(), "{r:?}");
        let w = r.unhypothesized_witness.unwrap();
        assert!(w.after > w.before);
        assert!(!shift_monotonicity_hypothesis(&w.family, w.s, w.t).unwrap());
        assert!(w.s.len() >= w.t.len(), "{w:?}");
        assert_eq!(r.influence_identity.checked, 256 * 8 + IDENTITY_SAMPLES as u64);
    }

    #[test]
    fn cascade_n3() {
        let r = verify_cascade(&VerifierConfig::new(3)).unwrap();
        assert!(r.passed());
        // increasing families on [3] with at most 4 members
        assert!(r.families > 0);
    }
}
