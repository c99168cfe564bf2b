// SPDX-License-Identifier: Apache-2.0

//! Exact rates in [0, 1], kept unreduced so `12/20` prints as counted.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0}")]
pub struct RateError(String);

#[derive(Debug, Clone, Copy)]
pub struct Rate {
    numerator: u64,
    denominator: u64,
}

impl Rate {
    pub fn new(numerator: u64, denominator: u64) -> Result<Self, RateError> {
        if denominator == 0 {
            return Err(RateError("rate denominator must be at least 1".into()));
        }
        if numerator > denominator {
            return Err(RateError(format!("rate {numerator}/{denominator} exceeds 1")));
        }
        Ok(Self { numerator, denominator })
    }

    pub fn numerator(&self) -> u64 {
        self.numerator
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    pub fn to_f64(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }

    /// Decimal text rounded half up to `places` digits, e.g. `0.40`.
    pub fn decimal(&self, places: u32) -> String {
        let scale = 10u128.pow(places);
        let n = self.numerator as u128 * scale * 2 + self.denominator as u128;
        let scaled = n / (self.denominator as u128 * 2);
        let whole = scaled / scale;
        let frac = scaled % scale;
        if places == 0 {
            whole.to_string()
        } else {
            format!("{whole}.{frac:0width$}", width = places as usize)
        }
    }
}

impl PartialEq for Rate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Rate {}

impl PartialOrd for Rate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rate {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.numerator as u128 * other.denominator as u128).cmp(&(other.numerator as u128 * self.denominator as u128))
    }
}

impl fmt::Display for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

/// Accepts `a/b` or a plain decimal such as `0.95`.
impl FromStr for Rate {
    type Err = RateError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || RateError(format!("'{s}' is not a rate (use a/b or a decimal in [0, 1])"));
        let digits = |t: &str| -> Result<u64, RateError> {
            if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            t.parse().map_err(|_| bad())
        };
        if let Some((n, d)) = s.split_once('/') {
            return Rate::new(digits(n)?, digits(d)?);
        }
        let (whole, frac) = s.split_once('.').unwrap_or((s, ""));
        if frac.len() > 18 || (whole.is_empty() && frac.is_empty()) {
            return Err(bad());
        }
        let whole = if whole.is_empty() { 0 } else { digits(whole)? };
        let frac_value = if frac.is_empty() { 0 } else { digits(frac)? };
        let denominator = 10u64.pow(frac.len() as u32);
        let numerator = whole.checked_mul(denominator).and_then(|w| w.checked_add(frac_value)).ok_or_else(bad)?;
        Rate::new(numerator, denominator)
    }
}
