use std::collections::BTreeMap;

use serde::Serialize;

use crate::dyadic::{exact, Dyadic, Rational};
use crate::error::Result;
use crate::family::SetFamily;
use crate::symmetry::canonical_mask;

use super::{family, Mode, Population, Tables, VerifierConfig};

/// One family's position relative to the extremal benchmark.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilityRecord {
    pub n: usize,
    pub m: u64,
    /// `|∂F| - |∂L|`
    pub l: i64,
    pub dist: u64,
    /// Canonical representative of the family's class.
    pub family: SetFamily,
}

impl StabilityRecord {
    fn new(n: usize, mask: u64, m: u64, l: i64, dist: u64) -> StabilityRecord {
        StabilityRecord {
            n,
            m,
            l,
            dist,
            family: family(n, canonical_mask(n, mask)),
        }
    }

    /// `dist / l`, for `l > 0`.
    pub fn ratio(&self) -> Option<Rational> {
        (self.l > 0).then(|| Rational::new(self.dist as i128, self.l as i128))
    }
}

#[derive(Default)]
struct Acc {
    families: u64,
    equality: u64,
    below_lex: Vec<u64>,
    below_lex_count: u64,
    not_unique: Vec<u64>,
    not_unique_count: u64,
    /// `(m, l) -> (max dist, first witness)`
    cells: BTreeMap<(u64, i64), (u64, u64)>,
    /// `(dist, l, mask)` maximising `dist / l` over `l > 0`
    best: Option<(u64, i64, u64)>,
    counterexamples: Vec<(u64, i64, u64)>,
    counterexample_count: u64,
}

fn better_ratio(a: (u64, i64), b: (u64, i64)) -> bool {
    (a.0 as i128) * (b.1 as i128) > (b.0 as i128) * (a.1 as i128)
}

impl Acc {
    fn step(&mut self, t: &Tables, c: Dyadic, max_findings: usize, mask: u64, w: u64) {
        let e = t.eval(mask);
        self.families += w;
        if e.excess < 0 {
            self.below_lex_count += w;
            if self.below_lex.len() < max_findings {
                self.below_lex.push(mask);
            }
        }
        if e.excess == 0 {
            self.equality += w;
            if e.dist != 0 {
                self.not_unique_count += w;
                if self.not_unique.len() < max_findings {
                    self.not_unique.push(mask);
                }
            }
        }
        let cell = self.cells.entry((e.m, e.excess)).or_insert((e.dist, mask));
        if e.dist > cell.0 {
            *cell = (e.dist, mask);
        }
        if e.excess > 0 {
            let cur = (e.dist, e.excess);
            if self.best.is_none_or(|(d, l, _)| better_ratio(cur, (d, l))) {
                self.best = Some((e.dist, e.excess, mask));
            }
        }
        // dist > C·l  ⇔  dist·2^k > num·l
        let k = c.log_den();
        if (e.dist as i128) << k > c.num() * e.excess as i128 {
            self.counterexample_count += w;
            if self.counterexamples.len() < max_findings {
                self.counterexamples.push((e.dist, e.excess, mask));
            }
        }
    }

    fn merge(mut self, other: Acc, max_findings: usize) -> Acc {
        self.families += other.families;
        self.equality += other.equality;
        let extend = |a: &mut Vec<u64>, b: Vec<u64>| {
            let room = max_findings.saturating_sub(a.len());
            a.extend(b.into_iter().take(room));
        };
        extend(&mut self.below_lex, other.below_lex);
        self.below_lex_count += other.below_lex_count;
        extend(&mut self.not_unique, other.not_unique);
        self.not_unique_count += other.not_unique_count;
        for (key, v) in other.cells {
            let cell = self.cells.entry(key).or_insert(v);
            if v.0 > cell.0 {
                *cell = v;
            }
        }
        if let Some((d, l, m)) = other.best {
            if self.best.is_none_or(|(d0, l0, _)| better_ratio((d, l), (d0, l0))) {
                self.best = Some((d, l, m));
            }
        }
        let room = max_findings.saturating_sub(self.counterexamples.len());
        self.counterexamples
            .extend(other.counterexamples.into_iter().take(room));
        self.counterexample_count += other.counterexample_count;
        self
    }
}

fn survey(cfg: &VerifierConfig) -> Result<(Mode, Acc)> {
    let pop = Population::for_config(cfg)?;
    let tables = Tables::new(pop.dim(), cfg.jobs)?;
    let c = cfg.conjecture_c;
    let maxf = cfg.max_findings;
    let parts = pop.run(cfg.jobs, Acc::default, |acc, mask, w| {
        acc.step(&tables, c, maxf, mask, w)
    })?;
    let acc = parts
        .into_iter()
        .fold(Acc::default(), |a, b| a.merge(b, maxf));
    Ok((pop.mode(), acc))
}

/// Edge-isoperimetric inequality and uniqueness of the extremal class.
#[derive(Clone, Debug, Serialize)]
pub struct IsoReport {
    pub n: usize,
    pub mode: Mode,
    pub families: u64,
    /// Families with `|∂F| = |∂L|`.
    pub equality_families: u64,
    /// Families with `|∂F| < |∂L|` (count, then the first few).
    pub inequality_violation_count: u64,
    pub inequality_violations: Vec<SetFamily>,
    /// Families with `|∂F| = |∂L|` that are not weakly isomorphic to `L`.
    pub uniqueness_violation_count: u64,
    pub uniqueness_violations: Vec<SetFamily>,
}

impl IsoReport {
    pub fn passed(&self) -> bool {
        self.inequality_violation_count == 0 && self.uniqueness_violation_count == 0
    }
}

/// Checks `|∂F| >= |∂L|` for every family in the population and that
/// equality forces `F` to be weakly isomorphic to `L`.
pub fn verify_iso_and_uniqueness(cfg: &VerifierConfig) -> Result<IsoReport> {
    let (mode, acc) = survey(cfg)?;
    let n = cfg.n;
    Ok(IsoReport {
        n,
        mode,
        families: acc.families,
        equality_families: acc.equality,
        inequality_violation_count: acc.below_lex_count,
        inequality_violations: acc.below_lex.iter().map(|&m| family(n, m)).collect(),
        uniqueness_violation_count: acc.not_unique_count,
        uniqueness_violations: acc.not_unique.iter().map(|&m| family(n, m)).collect(),
    })
}

/// `s(n, m, l)` rows and the largest observed `dist / l`.
#[derive(Clone, Debug, Serialize)]
pub struct StabilityTable {
    pub n: usize,
    pub mode: Mode,
    /// `(m, l, s)`, with `l` running from 0 to the largest excess seen at
    /// size `m`.
    pub rows: Vec<(u64, i64, u64)>,
    /// A family attaining the largest `dist / l` with `l > 0`.
    pub best_constant: Option<StabilityRecord>,
}

impl StabilityTable {
    /// `s(n, m, l)`, or `None` outside the tabulated range.
    pub fn s(&self, m: u64, l: i64) -> Option<u64> {
        let last = self.rows.iter().filter(|r| r.0 == m).last()?;
        if l < 0 {
            return None;
        }
        if l >= last.1 {
            return Some(last.2);
        }
        self.rows
            .iter()
            .find(|r| r.0 == m && r.1 == l)
            .map(|r| r.2)
    }

    pub fn best_ratio(&self) -> Option<Rational> {
        self.best_constant.as_ref().and_then(|r| r.ratio())
    }

    /// CSV with header `n,m,l,s`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,m,l,s\n");
        for (m, l, s) in &self.rows {
            out.push_str(&format!("{},{m},{l},{s}\n", self.n));
        }
        out
    }
}

/// Tabulates `s(n, m, l) = max{dist(F) : |F| = m, |∂F| - |∂L| <= l}`.
pub fn stability_table(cfg: &VerifierConfig) -> Result<StabilityTable> {
    let (mode, acc) = survey(cfg)?;
    let n = cfg.n;
    let mut rows = Vec::new();
    for m in 0..=1u64 << n {
        let cells: Vec<(i64, u64)> = acc
            .cells
            .range((m, i64::MIN)..=(m, i64::MAX))
            .map(|(&(_, l), &(d, _))| (l, d))
            .collect();
        let Some(&(top, _)) = cells.last() else {
            continue;
        };
        let mut running = 0;
        for l in 0..=top {
            if let Some(&(_, d)) = cells.iter().find(|c| c.0 == l) {
                running = running.max(d);
            }
            rows.push((m, l, running));
        }
    }
    let best_constant = acc.best.map(|(d, l, mask)| {
        StabilityRecord::new(n, mask, mask.count_ones() as u64, l, d)
    });
    Ok(StabilityTable {
        n,
        mode,
        rows,
        best_constant,
    })
}

/// Counterexamples to `dist <= C·l` and the largest `dist / l`.
#[derive(Clone, Debug, Serialize)]
pub struct ConjectureReport {
    pub n: usize,
    pub mode: Mode,
    #[serde(rename = "C")]
    pub c: Dyadic,
    pub families: u64,
    pub counterexample_count: u64,
    pub counterexamples: Vec<StabilityRecord>,
    pub max_ratio: Option<StabilityRecord>,
}

impl ConjectureReport {
    pub fn max_ratio_value(&self) -> Option<Rational> {
        self.max_ratio.as_ref().and_then(|r| r.ratio())
    }

    /// JSON lines: one record per stored counterexample, the max-ratio
    /// record, then a summary.
    pub fn jsonl(&self) -> Vec<String> {
        #[derive(Serialize)]
        struct Finding<'a> {
            kind: &'static str,
            #[serde(flatten)]
            record: &'a StabilityRecord,
            #[serde(with = "exact::option")]
            ratio: Option<Rational>,
        }
        #[derive(Serialize)]
        struct Summary {
            kind: &'static str,
            n: usize,
            mode: Mode,
            #[serde(rename = "C")]
            c: Dyadic,
            families: u64,
            counterexamples: u64,
            #[serde(with = "exact::option")]
            max_ratio: Option<Rational>,
        }
        let mut out: Vec<String> = self
            .counterexamples
            .iter()
            .map(|r| {
                serde_json::to_string(&Finding {
                    kind: "counterexample",
                    record: r,
                    ratio: r.ratio(),
                })
                .expect("serializable")
            })
            .collect();
        if let Some(r) = &self.max_ratio {
            out.push(
                serde_json::to_string(&Finding {
                    kind: "max_ratio",
                    record: r,
                    ratio: r.ratio(),
                })
                .expect("serializable"),
            );
        }
        out.push(
            serde_json::to_string(&Summary {
                kind: "summary",
                n: self.n,
                mode: self.mode,
                c: self.c,
                families: self.families,
                counterexamples: self.counterexample_count,
                max_ratio: self.max_ratio_value(),
            })
            .expect("serializable"),
        );
        out
    }
}

/// Searches the population for families with `dist > C·(|∂F| - |∂L|)`.
pub fn verify_conjecture(cfg: &VerifierConfig) -> Result<ConjectureReport> {
    let (mode, acc) = survey(cfg)?;
    let n = cfg.n;
    let rec = |&(d, l, mask): &(u64, i64, u64)| {
        StabilityRecord::new(n, mask, mask.count_ones() as u64, l, d)
    };
    Ok(ConjectureReport {
        n,
        mode,
        c: cfg.conjecture_c,
        families: acc.families,
        counterexample_count: acc.counterexample_count,
        counterexamples: acc.counterexamples.iter().map(rec).collect(),
        max_ratio: acc.best.as_ref().map(rec),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lex::lex_boundary;
    use crate::symmetry::dist_to_lex_class;

    #[test]
    fn iso_small_dimensions() {
        for n in 1..=3 {
            let r = verify_iso_and_uniqueness(&VerifierConfig::new(n)).unwrap();
            assert!(r.passed());
            assert_eq!(r.families, 1 << (1 << n));
            assert!(r.equality_families >= (1 << n) + 1);
        }
    }

    #[test]
    fn table_n3_matches_brute_force() {
        let t = stability_table(&VerifierConfig::new(3)).unwrap();
        let mut brute: BTreeMap<(u64, i64), u64> = BTreeMap::new();
        for mask in 0..1u64 << 8 {
            let f = family(3, mask);
            let l = f.edge_boundary_size() as i64 - lex_boundary(3, f.len()).unwrap() as i64;
            let d = dist_to_lex_class(&f).unwrap();
            let e = brute.entry((f.len(), l)).or_insert(0);
            *e = (*e).max(d);
        }
        for &(m, l, s) in &t.rows {
            let expect = brute
                .iter()
                .filter(|(&(bm, bl), _)| bm == m && bl <= l)
                .map(|(_, &d)| d)
                .max()
                .unwrap();
            assert_eq!(s, expect);
        }
        for m in 0..=8 {
            assert_eq!(t.s(m, 0), Some(0));
        }
        let best = t.best_ratio().unwrap();
        assert!(best <= Rational::from_integer(2));
        assert!(t.rows.windows(2).all(|w| w[0].0 != w[1].0 || w[0].2 <= w[1].2));
        assert!(t.to_csv().starts_with("n,m,l,s\n3,0,0,0\n"));
    }

    #[test]
    fn conjecture_degenerate_constant() {
        let mut cfg = VerifierConfig::new(3);
        cfg.conjecture_c = Dyadic::ZERO;
        let r = verify_conjecture(&cfg).unwrap();
        assert!(r.counterexample_count > 0);
        assert!(r.counterexamples.iter().all(|c| c.dist > 0));
        let ok = verify_conjecture(&VerifierConfig::new(3)).unwrap();
        assert_eq!(ok.counterexample_count, 0);
        let lines = ok.jsonl();
        assert!(lines.last().unwrap().contains("\"kind\":\"summary\""));
    }

    #[test]
    fn parallel_and_serial_agree() {
        let a = verify_conjecture(&VerifierConfig::new(4)).unwrap().jsonl();
        let b = verify_conjecture(&VerifierConfig::new(4).with_jobs(4))
            .unwrap()
            .jsonl();
        assert_eq!(a, b);
    }
}
