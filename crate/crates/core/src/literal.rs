//! JSON family literals.
//!
//! Two equivalent forms are accepted:
//!
//! ```json
//! {"n": 3, "sets": ["111", "110", "101"]}
//! {"n": 3, "mask_hex": "e0"}
//! ```
//!
//! In `sets`, character `i-1` of each string is coordinate `i`. `mask_hex` is
//! the membership bitmap in big-endian hex, position `2^n - 1` first, padded
//! to exactly `max(1, 2^n / 4)` digits.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::family::SetFamily;
use crate::subset::Subset;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Literal {
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sets: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mask_hex: Option<String>,
}

fn hex_digits(n: usize) -> usize {
    ((1usize << n) / 4).max(1)
}

impl SetFamily {
    /// Members as bitstrings, lexicographically largest first.
    pub fn bitstrings(&self) -> Vec<String> {
        let mut v: Vec<usize> = self.indices().collect();
        v.reverse();
        v.into_iter()
            .map(|i| Subset::from_index(i, self.dim()).bitstring(self.dim()))
            .collect()
    }

    pub fn to_mask_hex(&self) -> String {
        (0..hex_digits(self.dim()))
            .rev()
            .map(|q| {
                let nib = (0..4)
                    .filter(|b| {
                        let pos = 4 * q + b;
                        pos < 1 << self.dim() && self.contains_index(pos)
                    })
                    .fold(0u32, |acc, b| acc | 1 << b);
                char::from_digit(nib, 16).expect("nibble")
            })
            .collect()
    }

    pub fn from_mask_hex(n: usize, hex: &str) -> Result<SetFamily> {
        let mut f = SetFamily::empty(n)?;
        if hex.len() != hex_digits(n) {
            return Err(Error::Parse(format!(
                "mask_hex for n = {n} must have {} digits, got {}",
                hex_digits(n),
                hex.len()
            )));
        }
        for (q, c) in hex.chars().rev().enumerate() {
            let nib = c
                .to_digit(16)
                .ok_or_else(|| Error::Parse(format!("bad hex digit {c:?}")))?;
            for b in 0..4 {
                if nib >> b & 1 == 1 {
                    let pos = 4 * q + b;
                    if pos >= 1 << n {
                        return Err(Error::Parse(format!(
                            "mask_hex sets position {pos} beyond 2^{n}"
                        )));
                    }
                    f.insert_index(pos);
                }
            }
        }
        Ok(f)
    }

    /// The `{"n", "sets"}` JSON literal.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    /// The `{"n", "mask_hex"}` JSON literal.
    pub fn to_json_hex(&self) -> String {
        let lit = Literal {
            n: self.dim(),
            sets: None,
            mask_hex: Some(self.to_mask_hex()),
        };
        serde_json::to_string(&lit).expect("serializable")
    }

    /// Parses either literal form.
    pub fn from_json(s: &str) -> Result<SetFamily> {
        let lit: Literal = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        from_literal(lit)
    }
}

fn from_literal(lit: Literal) -> Result<SetFamily> {
    match (lit.sets, lit.mask_hex) {
        (Some(sets), None) => {
            let subsets = sets
                .iter()
                .map(|s| Subset::parse_bitstring(s, lit.n))
                .collect::<Result<Vec<_>>>()?;
            SetFamily::from_sets(&subsets, lit.n)
        }
        (None, Some(hex)) => SetFamily::from_mask_hex(lit.n, &hex),
        _ => Err(Error::Parse(
            "family literal needs exactly one of \"sets\" or \"mask_hex\"".into(),
        )),
    }
}

impl Serialize for SetFamily {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Literal {
            n: self.dim(),
            sets: Some(self.bitstrings()),
            mask_hex: None,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SetFamily {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<SetFamily, D::Error> {
        let lit = Literal::deserialize(d)?;
        from_literal(lit).map_err(serde::de::Error::custom)
    }
}
