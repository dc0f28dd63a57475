use rayon::prelude::*;

use crate::bits;
use crate::error::{Error, Result};
use crate::family::SetFamily;
use crate::symmetry::{canonical_mask, MAX_GROUP_DIM};

use super::{family, MAX_EXHAUSTIVE_DIM};

/// One canonical representative (smallest mask) per weak-isomorphism class
/// of size-`m` families on `[n]`, in increasing mask order.
///
/// Up to `n = 4` every size-`m` mask is scanned; at `n = 5` classes are
/// grown one member at a time from the classes of size `m - 1`.
pub fn enumerate_families(n: usize, m: u64) -> Result<Vec<SetFamily>> {
    orbit_representatives(n, m, usize::MAX, 1)
}

/// [`enumerate_families`] with a cap on the number of classes held at any
/// size and a worker count for the growth steps.
pub fn orbit_representatives(
    n: usize,
    m: u64,
    max_classes: usize,
    jobs: usize,
) -> Result<Vec<SetFamily>> {
    if n > MAX_GROUP_DIM {
        return Err(Error::Dimension {
            n,
            max: MAX_GROUP_DIM,
        });
    }
    let positions = 1u64 << n;
    if m > positions {
        return Err(Error::SizeOutOfRange { m, max: positions });
    }
    let masks = if n <= MAX_EXHAUSTIVE_DIM {
        bits::combinations(positions as u32, m as u32)
            .filter(|&mask| canonical_mask(n, mask) == mask)
            .collect()
    } else if 2 * m > positions {
        let full = bits::full_mask(n);
        let mut v: Vec<u64> = grow(n, positions - m, max_classes, jobs)?
            .into_iter()
            .map(|mask| canonical_mask(n, !mask & full))
            .collect();
        v.sort_unstable();
        v
    } else {
        grow(n, m, max_classes, jobs)?
    };
    Ok(masks.into_iter().map(|mask| family(n, mask)).collect())
}

fn grow(n: usize, m: u64, max_classes: usize, jobs: usize) -> Result<Vec<u64>> {
    let positions = 1usize << n;
    let extend = |&rep: &u64| -> Vec<u64> {
        (0..positions)
            .filter(|&p| rep >> p & 1 == 0)
            .map(|p| canonical_mask(n, rep | 1 << p))
            .collect()
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::ResourceCap(format!("thread pool: {e}")))?;
    let mut level = vec![0u64];
    for size in 1..=m {
        let mut next: Vec<u64> = if jobs > 1 {
            pool.install(|| level.par_iter().flat_map_iter(extend).collect())
        } else {
            level.iter().flat_map(extend).collect()
        };
        next.sort_unstable();
        next.dedup();
        if next.len() > max_classes {
            return Err(Error::ResourceCap(format!(
                "{} classes of size {size} on [{n}] exceed the cap of {max_classes}",
                next.len()
            )));
        }
        level = next;
    }
    Ok(level)
}
