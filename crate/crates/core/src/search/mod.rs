//! Exhaustive, orbit-reduced and sampled verification over populations of
//! families.
//!
//! A population is split into work units that are evaluated independently
//! (in parallel when `jobs > 1`) and merged in unit order, so every report is
//! identical for any worker count.

mod constructions;
mod enumerate;
mod prop41;
mod stability;
mod suites;

use std::ops::Range;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bits;
use crate::dyadic::{Dyadic, Rational};
use crate::error::{Error, Result};
use crate::family::SetFamily;
use crate::lex::lex_boundary;
use crate::symmetry::{LexImageTable, MAX_GROUP_DIM};

pub use constructions::{
    check_remark_family, check_tightness_family, make_remark_family, make_tightness_family,
    FormulaCheck, RemarkCheck, TightnessCheck,
};
pub use enumerate::{enumerate_families, orbit_representatives};
pub use prop41::{
    prop41_constant, verify_prop41_dichotomy, CaseBound, FrontierPoint, Prop41Constant,
    Prop41Report,
};
pub use stability::{
    stability_table, verify_conjecture, verify_iso_and_uniqueness, ConjectureReport, IsoReport,
    StabilityRecord, StabilityTable,
};
pub use suites::{
    verify_bootstrapping, verify_cascade, verify_fraclex, verify_shifting, BootstrapReport,
    CascadeReport, CheckTally, FracLexReport, ShiftWitness, ShiftingReport, Violation,
    IDENTITY_SAMPLES,
};

/// Settings shared by every verifier.
#[derive(Clone, Debug, Serialize)]
pub struct VerifierConfig {
    pub n: usize,
    /// Worker threads; results do not depend on this.
    pub jobs: usize,
    pub seed: u64,
    /// Random families drawn when `n` is too large to enumerate.
    pub samples: u64,
    /// At `n = 5`, enumerate orbit representatives instead of sampling.
    pub orbits: bool,
    /// Cap on orbit representatives kept per size during enumeration.
    pub max_classes: usize,
    /// Conjectured constant `C` in `|F Δ G| <= C·(|∂F| - |∂L|)`.
    pub conjecture_c: Dyadic,
    /// Constant `c` in the order-2 lower bound.
    #[serde(with = "crate::dyadic::exact")]
    pub order2_c: Rational,
    pub order1_log_den: u32,
    pub order2_log_den: u32,
    /// Largest padding checked for fractional families.
    pub max_padding: usize,
    /// Findings stored in full; the rest are only counted.
    pub max_findings: usize,
}

impl VerifierConfig {
    pub fn new(n: usize) -> VerifierConfig {
        VerifierConfig {
            n,
            jobs: 1,
            seed: 0,
            samples: 100_000,
            orbits: false,
            max_classes: 2_000_000,
            conjecture_c: Dyadic::from_int(2),
            order2_c: Rational::new(1, 6),
            order1_log_den: 8,
            order2_log_den: 6,
            max_padding: 8,
            max_findings: 1000,
        }
    }

    pub fn with_jobs(mut self, jobs: usize) -> VerifierConfig {
        self.jobs = jobs.max(1);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> VerifierConfig {
        self.seed = seed;
        self
    }
}

/// Exhaustive dimension limit: every family is visited directly.
pub const MAX_EXHAUSTIVE_DIM: usize = 4;

/// How a population of families is produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exhaustive,
    Orbits,
    Sampled,
}

/// Families in a population carry a multiplicity: `1` for exhaustive and
/// sampled populations, the orbit size for orbit representatives.
pub(crate) enum Population {
    Exhaustive { n: usize },
    Orbits { n: usize, reps: Vec<(u64, u64)> },
    Sampled { n: usize, seed: u64, samples: u64 },
}

const EXHAUSTIVE_UNIT: u64 = 1 << 12;
const SAMPLE_UNIT: u64 = 1 << 10;
const ORBIT_UNIT: usize = 1 << 10;

impl Population {
    pub(crate) fn for_config(cfg: &VerifierConfig) -> Result<Population> {
        let n = cfg.n;
        if n <= MAX_EXHAUSTIVE_DIM {
            Ok(Population::Exhaustive { n })
        } else if n == 5 && cfg.orbits {
            let mut reps = Vec::new();
            for m in 0..=32 {
                for f in orbit_representatives(5, m, cfg.max_classes, cfg.jobs)? {
                    let mask = f.mask().expect("single word");
                    reps.push((mask, crate::symmetry::orbit_size(5, mask)));
                }
            }
            Ok(Population::Orbits { n, reps })
        } else if n <= MAX_GROUP_DIM {
            Ok(Population::Sampled {
                n,
                seed: cfg.seed,
                samples: cfg.samples,
            })
        } else {
            Err(Error::Dimension {
                n,
                max: MAX_GROUP_DIM,
            })
        }
    }

    pub(crate) fn mode(&self) -> Mode {
        match self {
            Population::Exhaustive { .. } => Mode::Exhaustive,
            Population::Orbits { .. } => Mode::Orbits,
            Population::Sampled { .. } => Mode::Sampled,
        }
    }

    pub(crate) fn dim(&self) -> usize {
        match *self {
            Population::Exhaustive { n } | Population::Sampled { n, .. } => n,
            Population::Orbits { n, .. } => n,
        }
    }

    fn units(&self) -> Vec<Range<u64>> {
        let chunk = |total: u64, size: u64| {
            (0..total.div_ceil(size))
                .map(|u| u * size..((u + 1) * size).min(total))
                .collect::<Vec<_>>()
        };
        match self {
            Population::Exhaustive { n } => chunk(1u64 << (1u64 << n), EXHAUSTIVE_UNIT),
            Population::Orbits { reps, .. } => chunk(reps.len() as u64, ORBIT_UNIT as u64),
            Population::Sampled { samples, .. } => chunk(*samples, SAMPLE_UNIT),
        }
    }

    /// Calls `visit(mask, multiplicity)` for every family of a unit.
    fn visit(&self, unit: &Range<u64>, mut visit: impl FnMut(u64, u64)) {
        match self {
            Population::Exhaustive { .. } => unit.clone().for_each(|m| visit(m, 1)),
            Population::Orbits { reps, .. } => {
                for &(mask, w) in &reps[unit.start as usize..unit.end as usize] {
                    visit(mask, w)
                }
            }
            Population::Sampled { n, seed, .. } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                rng.set_stream(unit.start / SAMPLE_UNIT);
                for _ in unit.clone() {
                    visit(random_mask(&mut rng, *n), 1)
                }
            }
        }
    }

    /// Folds every unit with `step` and merges the partial results in unit
    /// order.
    pub(crate) fn run<P, S>(&self, jobs: usize, init: impl Fn() -> P + Sync, step: S) -> Result<Vec<P>>
    where
        P: Send,
        S: Fn(&mut P, u64, u64) + Sync,
    {
        let units = self.units();
        let work = |u: &Range<u64>| {
            let mut acc = init();
            self.visit(u, |mask, w| step(&mut acc, mask, w));
            acc
        };
        if jobs <= 1 {
            return Ok(units.iter().map(work).collect());
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::ResourceCap(format!("thread pool: {e}")))?;
        Ok(pool.install(|| units.par_iter().map(work).collect()))
    }
}

/// A uniformly random size, then a uniformly random family of that size.
pub(crate) fn random_mask(rng: &mut ChaCha8Rng, n: usize) -> u64 {
    use rand::Rng;
    let positions = 1usize << n;
    let m = rng.random_range(0..=positions);
    rand::seq::index::sample(rng, positions, m)
        .into_iter()
        .fold(0u64, |acc, p| acc | 1 << p)
}

/// Per-size tables for evaluating single-word families.
pub(crate) struct Tables {
    pub n: usize,
    pub lex_boundary: Vec<u64>,
    pub images: Vec<LexImageTable>,
}

/// Size, boundary excess over the lexicographic segment and distance to
/// its class.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Eval {
    pub m: u64,
    pub excess: i64,
    pub dist: u64,
}

impl Tables {
    pub(crate) fn new(n: usize, jobs: usize) -> Result<Tables> {
        if n > MAX_GROUP_DIM {
            return Err(Error::Dimension {
                n,
                max: MAX_GROUP_DIM,
            });
        }
        let sizes: Vec<u64> = (0..=1u64 << n).collect();
        let build = |&m: &u64| LexImageTable::new(n, m);
        let images = if jobs > 1 {
            sizes.par_iter().map(build).collect::<Result<Vec<_>>>()?
        } else {
            sizes.iter().map(build).collect::<Result<Vec<_>>>()?
        };
        let lex_boundary = sizes
            .iter()
            .map(|&m| lex_boundary(n, m))
            .collect::<Result<Vec<_>>>()?;
        Ok(Tables {
            n,
            lex_boundary,
            images,
        })
    }

    pub(crate) fn eval(&self, mask: u64) -> Eval {
        let m = mask.count_ones() as u64;
        let boundary = bits::boundary_u64(self.n, mask) as u64;
        Eval {
            m,
            excess: boundary as i64 - self.lex_boundary[m as usize] as i64,
            dist: self.images[m as usize].distance(mask) as u64,
        }
    }
}

pub(crate) fn family(n: usize, mask: u64) -> SetFamily {
    SetFamily::from_mask(n, mask).expect("valid mask")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn units_cover_population() {
        let p = Population::Exhaustive { n: 4 };
        let units = p.units();
        assert_eq!(units.len(), 16);
        assert_eq!(units.iter().map(|u| u.end - u.start).sum::<u64>(), 1 << 16);
        let p = Population::Exhaustive { n: 2 };
        assert_eq!(p.units(), vec![0..16]);
    }

    #[test]
    fn sampling_is_reproducible_and_job_independent() {
        let p = Population::Sampled {
            n: 5,
            seed: 9,
            samples: 5000,
        };
        let collect = |jobs| {
            p.run(jobs, Vec::new, |acc: &mut Vec<u64>, m, _| acc.push(m))
                .unwrap()
                .concat()
        };
        let a = collect(1);
        assert_eq!(a.len(), 5000);
        assert_eq!(a, collect(4));
        assert!(a.iter().all(|&m| m < 1 << 32));
    }

    #[test]
    fn tables_agree_with_family_ops() {
        let t = Tables::new(4, 1).unwrap();
        for mask in (0..1u64 << 16).step_by(97) {
            let f = family(4, mask);
            let e = t.eval(mask);
            assert_eq!(e.excess, f.edge_boundary_size() as i64 - t.lex_boundary[e.m as usize] as i64);
            assert_eq!(e.dist, crate::symmetry::dist_to_lex_class(&f).unwrap());
            assert!(e.excess >= 0);
        }
    }
}
