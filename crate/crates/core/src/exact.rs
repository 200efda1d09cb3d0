//! Exact rational parameters and integer root comparisons.
//!
//! Slack parameters (epsilon, delta) are carried as exact rationals and all
//! quantities of the form `f^{1/p} * a` are floored or ceiled by comparing
//! p-th powers in unbounded-precision integers. No floating point is used,
//! so threshold decisions are reproducible bit-for-bit.

use num_bigint::BigUint;
use std::cmp::Ordering;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FracError {
    #[error("invalid rational literal: {0}")]
    Invalid(String),
    #[error("zero denominator")]
    ZeroDenominator,
}

/// A nonnegative rational in lowest terms.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct Frac {
    num: u64,
    den: u64,
}

impl Frac {
    pub const ZERO: Frac = Frac { num: 0, den: 1 };
    pub const ONE: Frac = Frac { num: 1, den: 1 };

    pub fn new(num: u64, den: u64) -> Result<Frac, FracError> {
        if den == 0 {
            return Err(FracError::ZeroDenominator);
        }
        let g = gcd(num, den);
        Ok(Frac {
            num: num / g,
            den: den / g,
        })
    }

    /// Parses a decimal literal like `0.25`, an integer, or `a/b`.
    pub fn parse(s: &str) -> Result<Frac, FracError> {
        let bad = || FracError::Invalid(s.to_string());
        let s = s.trim();
        if let Some((a, b)) = s.split_once('/') {
            let num: u64 = a.trim().parse().map_err(|_| bad())?;
            let den: u64 = b.trim().parse().map_err(|_| bad())?;
            return Frac::new(num, den).map_err(|_| bad());
        }
        if let Some((int_part, frac_part)) = s.split_once('.') {
            if frac_part.is_empty() || frac_part.len() > 18 {
                return Err(bad());
            }
            let int: u64 = if int_part.is_empty() {
                0
            } else {
                int_part.parse().map_err(|_| bad())?
            };
            let frac: u64 = frac_part.parse().map_err(|_| bad())?;
            let den = 10u64.checked_pow(frac_part.len() as u32).ok_or_else(bad)?;
            let num = int
                .checked_mul(den)
                .and_then(|v| v.checked_add(frac))
                .ok_or_else(bad)?;
            return Frac::new(num, den);
        }
        let num: u64 = s.parse().map_err(|_| bad())?;
        Ok(Frac { num, den: 1 })
    }

    pub fn numer(&self) -> u64 {
        self.num
    }

    pub fn denom(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// True when the value is at most 1 (valid as a slack parameter).
    pub fn is_proper(&self) -> bool {
        self.num <= self.den
    }

    pub fn double(&self) -> Frac {
        Frac::new(self.num.saturating_mul(2), self.den).unwrap()
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// floor(self * n)
    pub fn floor_mul(&self, n: u64) -> u64 {
        ((self.num as u128 * n as u128) / self.den as u128) as u64
    }

    /// ceil(self * n)
    pub fn ceil_mul(&self, n: u64) -> u64 {
        ceil_div_u128(self.num as u128 * n as u128, self.den as u128)
    }

    /// ceil((1 - self) * n); the coverage quota for slack `self`.
    pub fn quota(&self, n: u64) -> u64 {
        assert!(self.is_proper(), "slack parameter exceeds 1");
        ceil_div_u128((self.den - self.num) as u128 * n as u128, self.den as u128)
    }
}

impl PartialOrd for Frac {
    fn partial_cmp(&self, other: &Frac) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Frac {
    fn cmp(&self, other: &Frac) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl fmt::Display for Frac {
    /// Exact decimal when the denominator is of the form 2^a 5^b,
    /// otherwise `num/den`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            return write!(f, "{}", self.num);
        }
        let mut d = self.den;
        let mut k = 0u32;
        while d % 2 == 0 {
            d /= 2;
            k += 1;
        }
        let mut k5 = 0u32;
        while d % 5 == 0 {
            d /= 5;
            k5 += 1;
        }
        if d != 1 {
            return write!(f, "{}/{}", self.num, self.den);
        }
        let k = k.max(k5);
        let scaled = self.num as u128 * 10u128.pow(k) / self.den as u128;
        let int = scaled / 10u128.pow(k);
        let mut frac = format!("{:0width$}", scaled % 10u128.pow(k), width = k as usize);
        while frac.ends_with('0') {
            frac.pop();
        }
        write!(f, "{int}.{frac}")
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn ceil_div_u128(a: u128, b: u128) -> u64 {
    ((a + b - 1) / b) as u64
}

pub fn big_pow(x: u64, e: u32) -> BigUint {
    BigUint::from(x).pow(e)
}

/// floor(f^{1/p} * a), decided exactly: the largest u with
/// u^p * den <= num * a^p.
pub fn floor_root_scale(f: Frac, a: u64, p: u32) -> u64 {
    assert!(p >= 1);
    let rhs = BigUint::from(f.num) * big_pow(a, p);
    let den = BigUint::from(f.den);
    // f <= 1 in every call site, but search a generous range regardless.
    let hi = a.saturating_add(1).saturating_mul(f.num.max(1));
    partition_point(hi, |u| big_pow(u, p) * &den <= rhs)
}

/// ceil(f^{1/p} * a): the smallest b with b^p * den >= num * a^p.
pub fn ceil_root_scale(f: Frac, a: u64, p: u32) -> u64 {
    assert!(p >= 1);
    if f.num == 0 || a == 0 {
        return 0;
    }
    let rhs = BigUint::from(f.num) * big_pow(a, p);
    let den = BigUint::from(f.den);
    let hi = a.saturating_add(1).saturating_mul(f.num.max(1));
    let below = partition_point(hi, |b| big_pow(b, p) * &den < rhs);
    below + 1
}

/// floor(a / n^{1/p}): the largest u with u^p * n <= a^p.
pub fn floor_div_root(a: u64, n: u64, p: u32) -> u64 {
    let rhs = big_pow(a, p);
    let n = BigUint::from(n);
    partition_point(a.saturating_add(1), |u| big_pow(u, p) * &n <= rhs)
}

/// ceil(a / n^{1/p}): the smallest v with v^p * n >= a^p.
pub fn ceil_div_root(a: u64, n: u64, p: u32) -> u64 {
    if a == 0 {
        return 0;
    }
    let rhs = big_pow(a, p);
    let n = BigUint::from(n);
    let below = partition_point(a.saturating_add(1), |v| big_pow(v, p) * &n < rhs);
    below + 1
}

/// Largest u in [0, hi] for which `pred` holds, assuming `pred` is
/// downward closed and pred(0) holds.
fn partition_point(hi: u64, pred: impl Fn(u64) -> bool) -> u64 {
    let (mut lo, mut hi) = (0u64, hi);
    while lo < hi {
        let mid = lo + (hi - lo + 1) / 2;
        if pred(mid) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        assert_eq!(Frac::parse("0.25").unwrap(), Frac::new(1, 4).unwrap());
        assert_eq!(Frac::parse("0.1").unwrap(), Frac::new(1, 10).unwrap());
        assert_eq!(Frac::parse("1").unwrap(), Frac::ONE);
        assert_eq!(Frac::parse("0").unwrap(), Frac::ZERO);
        assert_eq!(Frac::parse("1/8").unwrap(), Frac::new(1, 8).unwrap());
        assert_eq!(Frac::new(1, 4).unwrap().to_string(), "0.25");
        assert_eq!(Frac::new(1, 8).unwrap().to_string(), "0.125");
        assert_eq!(Frac::new(1, 3).unwrap().to_string(), "1/3");
        assert_eq!(Frac::ZERO.to_string(), "0");
        assert!(Frac::parse("x").is_err());
        assert!(Frac::parse("1/0").is_err());
    }

    #[test]
    fn quota_is_exact() {
        // ceil(0.9 * 30) must be 27, not 28 (a classic float bug).
        let eps = Frac::parse("0.1").unwrap();
        assert_eq!(eps.quota(30), 27);
        assert_eq!(Frac::ZERO.quota(7), 7);
        assert_eq!(Frac::ONE.quota(7), 0);
        assert_eq!(Frac::new(1, 4).unwrap().quota(4), 3);
        assert_eq!(Frac::new(1, 8).unwrap().quota(25), 22);
    }

    #[test]
    fn root_scales_match_brute_force() {
        for num in 0..=8u64 {
            let f = Frac::new(num, 8).unwrap();
            for a in 0..=40u64 {
                for p in 1..=3u32 {
                    let exact = (0..=a)
                        .filter(|&u| {
                            (u as u128).pow(p) * f.den as u128 <= f.num as u128 * (a as u128).pow(p)
                        })
                        .max()
                        .unwrap_or(0);
                    assert_eq!(floor_root_scale(f, a, p), exact, "floor f={f} a={a} p={p}");
                    let exact_ceil = (0..=a + 1)
                        .find(|&b| {
                            (b as u128).pow(p) * f.den as u128 >= f.num as u128 * (a as u128).pow(p)
                        })
                        .unwrap();
                    assert_eq!(
                        ceil_root_scale(f, a, p),
                        exact_ceil,
                        "ceil f={f} a={a} p={p}"
                    );
                }
            }
        }
    }

    #[test]
    fn div_roots_match_brute_force() {
        for n in 1..=30u64 {
            for a in 0..=n {
                for p in 1..=4u32 {
                    let exact = (0..=a)
                        .filter(|&u| (u as u128).pow(p) * n as u128 <= (a as u128).pow(p))
                        .max()
                        .unwrap();
                    assert_eq!(floor_div_root(a, n, p), exact);
                    let exact_ceil = (0..=a)
                        .find(|&v| (v as u128).pow(p) * n as u128 >= (a as u128).pow(p))
                        .unwrap();
                    assert_eq!(ceil_div_root(a, n, p), exact_ceil);
                }
            }
        }
    }
}
