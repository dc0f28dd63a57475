//! Lexicographic initial segments and the extremal value `I[L_μ]`.

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::family::SetFamily;
use crate::subset::Subset;

/// `μ = 2^-j + r` with `0 < r <= 2^-j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MeasureDecomposition {
    pub j: u32,
    pub r: Dyadic,
}

/// `S > T` in the lexicographic order, i.e. `min(S Δ T) ∈ S`.
pub fn lex_greater(s: Subset, t: Subset) -> Result<bool> {
    match s.symmetric_difference(t).min_element() {
        Some(e) => Ok(s.contains(e)),
        None => Err(Error::Precondition(format!(
            "lex comparison of {s} with itself"
        ))),
    }
}

/// The `m` lexicographically largest members of `P([n])`.
///
/// Under the position convention these are the top `m` positions.
pub fn lex_segment(n: usize, m: u64) -> Result<SetFamily> {
    let mut f = SetFamily::empty(n)?;
    let total = 1u64 << n;
    if m > total {
        return Err(Error::SizeOutOfRange { m, max: total });
    }
    for idx in (total - m)..total {
        f.insert_index(idx as usize);
    }
    Ok(f)
}

fn check_unit(mu: Dyadic) -> Result<()> {
    if mu.in_unit_interval() {
        Ok(())
    } else {
        Err(Error::InvalidMeasure {
            value: mu.to_string(),
            reason: "must lie in [0, 1]",
        })
    }
}

/// `I[L_μ]`, the total influence of the lexicographic family of measure `μ`.
///
/// Uses `I[L_μ] = ½ I[L_{2μ}] + 2μ` for `μ <= 1/2` and `I[L_μ] = I[L_{1-μ}]`.
/// Each step halves the denominator, so the depth is at most `log_den`.
///
/// ```
/// use cubeiso::{lex_influence, Dyadic};
/// assert_eq!(lex_influence(Dyadic::new(3, 3)).unwrap(), Dyadic::new(5, 2));
/// ```
pub fn lex_influence(mu: Dyadic) -> Result<Dyadic> {
    check_unit(mu)?;
    Ok(lex_influence_unchecked(mu))
}

fn lex_influence_unchecked(mu: Dyadic) -> Dyadic {
    let k = mu.log_den();
    if k <= 62 {
        // Unrolled: the sum of 2^-t·2μ_t over the doubling steps, kept over
        // the common denominator 2^(2k).
        let d = 1u128 << k;
        let mut a = mu.num() as u128;
        let mut acc = 0u128;
        let mut t = 0;
        while a != 0 && a != d {
            if 2 * a > d {
                a = d - a;
                continue;
            }
            acc += a << (k + 1 - t);
            a *= 2;
            t += 1;
        }
        return Dyadic::new(acc as i128, 2 * k);
    }
    lex_influence_recursive(mu)
}

fn lex_influence_recursive(mu: Dyadic) -> Dyadic {
    if mu.is_zero() || mu == Dyadic::ONE {
        return Dyadic::ZERO;
    }
    if mu > Dyadic::HALF {
        return lex_influence_recursive(Dyadic::ONE - mu);
    }
    let twice = mu.double();
    lex_influence_recursive(twice).half() + twice
}

/// `|∂L|` for the segment of size `m` in `Q_n`; this is the minimum edge
/// boundary `g_n(m)` of any size-`m` family.
pub fn lex_boundary(n: usize, m: u64) -> Result<u64> {
    if n > crate::family::MAX_DIM {
        return Err(Error::Dimension {
            n,
            max: crate::family::MAX_DIM,
        });
    }
    let total = 1u64 << n;
    if m > total {
        return Err(Error::SizeOutOfRange { m, max: total });
    }
    if n == 0 {
        return Ok(0);
    }
    let infl = lex_influence_unchecked(Dyadic::new(m as i128, n as u32));
    let edges = infl
        .times_pow2_as_int(n as u32 - 1)
        .expect("boundary of a segment is an integer");
    Ok(edges as u64)
}

/// Writes `μ ∈ (0, 1/2]` as `2^-j + r` with `2^-j < μ <= 2^-j+1`.
///
/// At an exact power of two `μ = 2^-j+1` this picks `r = 2^-j`.
pub fn decompose_measure(mu: Dyadic) -> Result<MeasureDecomposition> {
    if mu.is_negative() || mu.is_zero() || mu > Dyadic::HALF {
        return Err(Error::InvalidMeasure {
            value: mu.to_string(),
            reason: "must lie in (0, 1/2]",
        });
    }
    Ok(decompose_unit(mu))
}

/// Like [`decompose_measure`] but accepts `μ ∈ (0, 1]`, giving `j = 1` on
/// `(1/2, 1]`.
pub fn decompose_measure_extended(mu: Dyadic) -> Result<MeasureDecomposition> {
    if mu.is_negative() || mu.is_zero() || mu > Dyadic::ONE {
        return Err(Error::InvalidMeasure {
            value: mu.to_string(),
            reason: "must lie in (0, 1]",
        });
    }
    Ok(decompose_unit(mu))
}

fn decompose_unit(mu: Dyadic) -> MeasureDecomposition {
    // 2^p <= μ < 2^(p+1)
    let bits = 128 - mu.num().leading_zeros() as i64;
    let p = bits - 1 - mu.log_den() as i64;
    let exact = mu.num() == 1;
    let j = if exact { 1 - p } else { -p } as u32;
    MeasureDecomposition {
        j,
        r: mu - Dyadic::pow2_neg(j),
    }
}

/// `μ_i^-(L_μ)`, the measure of the slice of `L_μ` where coordinate `i` is
/// absent. Independent of the ambient dimension as long as `L_μ` exists.
pub fn lex_slice_profile(mu: Dyadic, i: usize) -> Result<Dyadic> {
    check_unit(mu)?;
    if i == 0 {
        return Err(Error::CoordinateOutOfRange { coord: 0, n: 0 });
    }
    Ok(slice_profile(mu, i))
}

fn slice_profile(mu: Dyadic, i: usize) -> Dyadic {
    if mu.is_zero() {
        return Dyadic::ZERO;
    }
    if mu == Dyadic::ONE {
        return Dyadic::ONE;
    }
    let twice = mu.double();
    if i == 1 {
        return (twice - Dyadic::ONE).max(Dyadic::ZERO);
    }
    if mu <= Dyadic::HALF {
        slice_profile(twice, i - 1).half()
    } else {
        (Dyadic::ONE + slice_profile(twice - Dyadic::ONE, i - 1)).half()
    }
}

/// `ε = I[F] - I[L_{μ(F)}]`, non-negative by the edge-isoperimetric
/// inequality.
pub fn stability_gap(f: &SetFamily) -> Dyadic {
    f.total_influence() - lex_influence_unchecked(f.measure())
}
