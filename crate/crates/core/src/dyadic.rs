//! Exact dyadic rationals `num / 2^log_den`.
//!
//! Every measure, influence and gap that arises on a finite cube has a
//! power-of-two denominator, so this is the only number type the core needs.
//! Values are kept in reduced form (odd numerator, or zero over `2^0`), which
//! makes derived equality and hashing structural.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational with a power-of-two denominator.
///
/// The numerator is signed so that differences (slacks, gaps of candidate
/// families) can be represented; every measure or influence is non-negative.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Dyadic {
    num: i128,
    log_den: u32,
}

/// Exact rational used where a bound carries a non-dyadic constant such as
/// `2/3` or `1/6`.
pub type Rational = Ratio<i128>;

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic { num: 0, log_den: 0 };
    pub const ONE: Dyadic = Dyadic { num: 1, log_den: 0 };
    pub const HALF: Dyadic = Dyadic { num: 1, log_den: 1 };

    /// `num / 2^log_den`, reduced.
    pub fn new(num: i128, log_den: u32) -> Dyadic {
        if num == 0 {
            return Dyadic::ZERO;
        }
        let shift = num.trailing_zeros().min(log_den);
        Dyadic {
            num: num >> shift,
            log_den: log_den - shift,
        }
    }

    pub fn from_int(v: i128) -> Dyadic {
        Dyadic::new(v, 0)
    }

    /// `2^-k`
    pub fn pow2_neg(k: u32) -> Dyadic {
        Dyadic { num: 1, log_den: k }
    }

    pub fn num(self) -> i128 {
        self.num
    }

    pub fn log_den(self) -> u32 {
        self.log_den
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    pub fn is_negative(self) -> bool {
        self.num < 0
    }

    pub fn abs(self) -> Dyadic {
        Dyadic {
            num: self.num.abs(),
            log_den: self.log_den,
        }
    }

    /// Multiply by `2^k` (`k` may be negative).
    pub fn scale_pow2(self, k: i32) -> Dyadic {
        if k >= 0 {
            let k = k as u32;
            if k <= self.log_den {
                Dyadic::new(self.num, self.log_den - k)
            } else {
                Dyadic::new(self.num << (k - self.log_den), 0)
            }
        } else {
            Dyadic::new(self.num, self.log_den + k.unsigned_abs())
        }
    }

    pub fn half(self) -> Dyadic {
        self.scale_pow2(-1)
    }

    pub fn double(self) -> Dyadic {
        self.scale_pow2(1)
    }

    /// `self · 2^k`, if that is an integer.
    pub fn times_pow2_as_int(self, k: u32) -> Option<i128> {
        if self.log_den <= k {
            Some(self.num << (k - self.log_den))
        } else {
            None
        }
    }

    /// True for values in the closed unit interval.
    pub fn in_unit_interval(self) -> bool {
        !self.is_negative() && self <= Dyadic::ONE
    }

    pub fn to_rational(self) -> Rational {
        Ratio::new(self.num, 1i128 << self.log_den)
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / (self.log_den as f64).exp2()
    }

    fn aligned(self, other: Dyadic) -> (i128, i128, u32) {
        let d = self.log_den.max(other.log_den);
        (
            self.num << (d - self.log_den),
            other.num << (d - other.log_den),
            d,
        )
    }

    /// Converts an exact rational with power-of-two denominator.
    pub fn from_rational(r: Rational) -> Option<Dyadic> {
        let den = *r.denom();
        if den <= 0 || den.count_ones() != 1 {
            return None;
        }
        Some(Dyadic::new(*r.numer(), den.trailing_zeros()))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(*other);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        let (a, b, d) = self.aligned(rhs);
        Dyadic::new(a + b, d)
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        let (a, b, d) = self.aligned(rhs);
        Dyadic::new(a - b, d)
    }
}

impl Mul for Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: Dyadic) -> Dyadic {
        Dyadic::new(self.num * rhs.num, self.log_den + rhs.log_den)
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            num: -self.num,
            log_den: self.log_den,
        }
    }
}

impl AddAssign for Dyadic {
    fn add_assign(&mut self, rhs: Dyadic) {
        *self = *self + rhs;
    }
}

impl SubAssign for Dyadic {
    fn sub_assign(&mut self, rhs: Dyadic) {
        *self = *self - rhs;
    }
}

impl Sum for Dyadic {
    fn sum<I: Iterator<Item = Dyadic>>(iter: I) -> Dyadic {
        iter.fold(Dyadic::ZERO, |a, b| a + b)
    }
}

impl From<Dyadic> for Rational {
    fn from(d: Dyadic) -> Rational {
        d.to_rational()
    }
}

/// Formats as `num/2^k`, the wire format used in reports.
impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.num, self.log_den)
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts `num/2^k`, `num/den` with a power-of-two `den`, or a bare integer.
impl FromStr for Dyadic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Dyadic> {
        let bad = || Error::Parse(format!("not a dyadic rational: {s:?}"));
        let s = s.trim();
        let Some((n, d)) = s.split_once('/') else {
            return s.parse::<i128>().map(Dyadic::from_int).map_err(|_| bad());
        };
        let num: i128 = n.trim().parse().map_err(|_| bad())?;
        let d = d.trim();
        if let Some(k) = d.strip_prefix("2^") {
            let k: u32 = k.parse().map_err(|_| bad())?;
            if k > 120 {
                return Err(bad());
            }
            return Ok(Dyadic::new(num, k));
        }
        let den: i128 = d.parse().map_err(|_| bad())?;
        if den <= 0 || den.count_ones() != 1 {
            return Err(bad());
        }
        Ok(Dyadic::new(num, den.trailing_zeros()))
    }
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Dyadic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Dyadic, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Formats an exact rational as `num/2^k` when the denominator is a power of
/// two and as `p/q` otherwise.
pub fn rational_string(r: &Rational) -> String {
    match Dyadic::from_rational(*r) {
        Some(d) => d.to_string(),
        None => format!("{}/{}", r.numer(), r.denom()),
    }
}

/// Serde adapter writing a [`Rational`] with [`rational_string`].
pub mod exact {
    use super::{rational_string, Rational};
    use serde::Serializer;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rational_string(r))
    }

    pub mod option {
        use super::{rational_string, Rational};
        use serde::Serializer;

        pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
            match r {
                Some(r) => s.serialize_str(&rational_string(r)),
                None => s.serialize_none(),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reduced_form_is_unique() {
        assert_eq!(Dyadic::new(4, 3), Dyadic::new(1, 1));
        assert_eq!(Dyadic::new(0, 7), Dyadic::ZERO);
        assert_eq!(Dyadic::new(6, 2).num(), 3);
        assert_eq!(Dyadic::new(6, 2).log_den(), 1);
        assert_eq!(Dyadic::new(8, 2), Dyadic::from_int(2));
    }

    #[test]
    fn display_and_parse() {
        let v = Dyadic::new(3, 3);
        assert_eq!(v.to_string(), "3/2^3");
        assert_eq!("3/2^3".parse::<Dyadic>().unwrap(), v);
        assert_eq!("6/16".parse::<Dyadic>().unwrap(), v);
        assert_eq!("2".parse::<Dyadic>().unwrap(), Dyadic::from_int(2));
        assert_eq!("-1/2^1".parse::<Dyadic>().unwrap(), -Dyadic::HALF);
        assert!("1/3".parse::<Dyadic>().is_err());
        assert!("x".parse::<Dyadic>().is_err());
        assert_eq!(rational_string(&Rational::new(6, 16)), "3/2^3");
        assert_eq!(rational_string(&Rational::new(2, 3)), "2/3");
    }

    #[test]
    fn arithmetic() {
        let a = Dyadic::new(3, 3);
        let b = Dyadic::new(1, 2);
        assert_eq!(a + b, Dyadic::new(5, 3));
        assert_eq!(a - b, Dyadic::new(1, 3));
        assert_eq!(b - a, -Dyadic::new(1, 3));
        assert_eq!(a * b, Dyadic::new(3, 5));
        assert_eq!(a.double(), Dyadic::new(3, 2));
        assert_eq!(Dyadic::new(3, 1).double(), Dyadic::from_int(3));
        assert_eq!(Dyadic::from_int(3).half(), Dyadic::new(3, 1));
        assert!(b < a);
        assert_eq!(a.times_pow2_as_int(3), Some(3));
        assert_eq!(a.times_pow2_as_int(2), None);
    }

    fn dy() -> impl Strategy<Value = Dyadic> {
        (-10_000i128..10_000, 0u32..20).prop_map(|(n, k)| Dyadic::new(n, k))
    }

    proptest! {
        #[test]
        fn agrees_with_rationals(a in dy(), b in dy()) {
            let (ra, rb) = (a.to_rational(), b.to_rational());
            prop_assert_eq!((a + b).to_rational(), ra + rb);
            prop_assert_eq!((a - b).to_rational(), ra - rb);
            prop_assert_eq!((a * b).to_rational(), ra * rb);
            prop_assert_eq!(a.cmp(&b), ra.cmp(&rb));
            prop_assert_eq!(a.to_string().parse::<Dyadic>().unwrap(), a);
        }
    }
}
