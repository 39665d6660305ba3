//! Exact integers, rationals, binomial tables and surds.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Arbitrary-precision nonnegative integer.
pub type Natural = BigUint;

/// Reduced fraction with positive denominator.
pub type Rational = num_rational::BigRational;

pub fn nat(x: u64) -> Natural {
    Natural::from(x)
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_from_nat(x: &Natural) -> Rational {
    Rational::from_integer(BigInt::from(x.clone()))
}

pub fn ratio(num: &Natural, den: &Natural) -> Rational {
    Rational::new(BigInt::from(num.clone()), BigInt::from(den.clone()))
}

/// Renders `p/q`, or just `p` for integers.
pub fn fmt_rational(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p/q`, `p`, or a finite decimal literal such as `0.25`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let negative = int.starts_with('-');
        let int_part: BigInt = match int.trim_start_matches(['-', '+']) {
            "" => BigInt::zero(),
            digits => digits.parse().ok()?,
        };
        let frac_part: BigInt = frac.parse().ok()?;
        let scale = num_traits::pow(BigInt::from(10u32), frac.len());
        let mut value = Rational::new(int_part * &scale + frac_part, scale);
        if negative {
            value = -value;
        }
        return Some(value);
    }
    s.parse::<BigInt>().ok().map(Rational::from_integer)
}

fn binom_cache() -> &'static RwLock<HashMap<u64, Arc<[Natural]>>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Arc<[Natural]>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Row `C(n, 0..=n)`, computed once per `n` and shared.
pub fn binom_row(n: u64) -> Arc<[Natural]> {
    if let Some(row) = binom_cache().read().unwrap().get(&n) {
        return row.clone();
    }
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut current = Natural::one();
    row.push(current.clone());
    for k in 0..n {
        // C(n,k+1) = C(n,k) * (n-k) / (k+1); reduce by gcd first so the
        // division below is exact on small operands.
        let denom = k + 1;
        let g = (&current % denom).to_u64().unwrap_or(0).gcd(&denom);
        current = (current / g) * ((n - k) / (denom / g));
        row.push(current.clone());
    }
    let row: Arc<[Natural]> = row.into();
    binom_cache().write().unwrap().insert(n, row.clone());
    row
}

/// Binomial coefficient, `0` when `k > n`.
pub fn binom(n: u64, k: u64) -> Natural {
    if k > n {
        return Natural::zero();
    }
    binom_row(n)[k as usize].clone()
}

/// `|B_n(r)|`, the number of subsets of `[n]` of size at most `r`.
pub fn ball_size(n: u64, r: u64) -> Natural {
    let row = binom_row(n);
    row[..=(r.min(n) as usize)].iter().sum()
}

/// `|S_n(r)| = C(n, r)`.
pub fn slice_size(n: u64, r: u64) -> Natural {
    binom(n, r)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioStep {
    pub r: u64,
    /// `|S_n(r)| / |B_n(r)|`
    #[serde(with = "rational_string")]
    pub lower: Rational,
    /// `|S_n(r+1)| / |B_n(r+1)|`
    #[serde(with = "rational_string")]
    pub upper: Rational,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioMonotoneReport {
    pub n: u64,
    pub steps: Vec<RatioStep>,
    pub holds: bool,
}

/// Checks `|S_n(r)|/|B_n(r)| >= |S_n(r+1)|/|B_n(r+1)|` for every `0 <= r < n`.
pub fn check_ratio_monotone(n: u64) -> RatioMonotoneReport {
    let row = binom_row(n);
    let mut ball = Natural::zero();
    let mut balls = Vec::with_capacity(row.len());
    for c in row.iter() {
        ball += c;
        balls.push(ball.clone());
    }
    let steps: Vec<RatioStep> = (0..n as usize)
        .map(|r| {
            let lower = ratio(&row[r], &balls[r]);
            let upper = ratio(&row[r + 1], &balls[r + 1]);
            RatioStep { r: r as u64, holds: lower >= upper, lower, upper }
        })
        .collect();
    let holds = steps.iter().all(|s| s.holds);
    RatioMonotoneReport { n, steps, holds }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceBoundVerdict {
    pub n: u64,
    pub r: u64,
    /// `n * |S_n(r)|^2`
    #[serde(with = "natural_string")]
    pub lhs: Natural,
    /// `|B_n(r)|^2`
    #[serde(with = "natural_string")]
    pub rhs: Natural,
    pub holds: bool,
}

/// Checks `|S_n(r)| >= |B_n(r)| / sqrt(n)` as `n |S_n(r)|^2 >= |B_n(r)|^2`.
pub fn check_slice_lower_bound(n: u64, r: u64) -> Result<SliceBoundVerdict> {
    if n < 3 || 2 * r > n {
        return Err(Error::Precondition(format!(
            "slice lower bound needs n >= 3 and r <= n/2, got n={n}, r={r}"
        )));
    }
    let s = binom(n, r);
    let b = ball_size(n, r);
    let lhs = nat(n) * &s * &s;
    let rhs = &b * &b;
    Ok(SliceBoundVerdict { n, r, holds: lhs >= rhs, lhs, rhs })
}

/// `C(2m,m) >= 4^m / (2 sqrt(m))`, checked as `C(2m,m)^2 * 4m >= 4^(2m)`.
pub fn central_binomial_check(m: u64) -> bool {
    let c = binom(2 * m, m);
    let lhs = &c * &c * nat(4 * m);
    let rhs = Natural::one() << (4 * m);
    lhs >= rhs
}

/// Floor square root.
pub fn isqrt(x: &Natural) -> Natural {
    x.sqrt()
}

/// Exact real of the form `rational + coeff * sqrt(radicand)`.
///
/// Signs and comparisons are decided by squaring, never by rounding.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Surd {
    #[serde(with = "rational_string")]
    pub rational: Rational,
    #[serde(with = "rational_string")]
    pub coeff: Rational,
    #[serde(with = "natural_string")]
    pub radicand: Natural,
}

impl Surd {
    pub fn from_rational(x: Rational) -> Self {
        Surd { rational: x, coeff: Rational::zero(), radicand: Natural::zero() }
    }

    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    /// `coeff * sqrt(radicand)`
    pub fn sqrt_term(coeff: Rational, radicand: Natural) -> Self {
        Surd { rational: Rational::zero(), coeff, radicand }
    }

    fn has_root(&self) -> bool {
        !self.coeff.is_zero() && !self.radicand.is_zero()
    }

    pub fn signum(&self) -> Ordering {
        let a = self.rational.cmp(&Rational::zero());
        if !self.has_root() {
            return a;
        }
        let b = self.coeff.cmp(&Rational::zero());
        if a == b || a == Ordering::Equal {
            return b;
        }
        // opposite signs: |a| vs |b| sqrt(N)
        let a2 = &self.rational * &self.rational;
        let b2n = &self.coeff * &self.coeff * rat_from_nat(&self.radicand);
        match a2.cmp(&b2n) {
            Ordering::Greater => a,
            Ordering::Less => b,
            Ordering::Equal => Ordering::Equal,
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        self.signum() != Ordering::Less
    }

    pub fn add_rational(&self, x: &Rational) -> Surd {
        Surd { rational: &self.rational + x, ..self.clone() }
    }

    pub fn neg(&self) -> Surd {
        Surd { rational: -&self.rational, coeff: -&self.coeff, radicand: self.radicand.clone() }
    }

    pub fn scale(&self, k: &Rational) -> Surd {
        Surd {
            rational: &self.rational * k,
            coeff: &self.coeff * k,
            radicand: self.radicand.clone(),
        }
    }

    /// `rational - self`
    pub fn rational_minus(&self, x: &Rational) -> Surd {
        self.neg().add_rational(x)
    }

    /// Exact comparison; both sides must share a radicand unless one of them
    /// has no root term.
    pub fn checked_cmp(&self, other: &Surd) -> Option<Ordering> {
        let radicand = match (self.has_root(), other.has_root()) {
            (false, false) => Natural::zero(),
            (true, false) => self.radicand.clone(),
            (false, true) => other.radicand.clone(),
            (true, true) if self.radicand == other.radicand => self.radicand.clone(),
            _ => return None,
        };
        let coeff_of = |s: &Surd| if s.has_root() { s.coeff.clone() } else { Rational::zero() };
        let diff = Surd {
            rational: &self.rational - &other.rational,
            coeff: coeff_of(self) - coeff_of(other),
            radicand,
        };
        Some(diff.signum())
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.rational.to_f64().unwrap_or(f64::NAN);
        if !self.has_root() {
            return a;
        }
        a + self.coeff.to_f64().unwrap_or(f64::NAN) * self.radicand.to_f64().unwrap_or(f64::NAN).sqrt()
    }

    /// Decimal rendering with `digits` significant digits (reports only).
    pub fn to_decimal(&self, digits: usize) -> String {
        let magnitude = self.to_f64().abs();
        let exp_hint = if magnitude.is_finite() && magnitude > 0.0 {
            magnitude.log10().floor() as i64
        } else {
            0
        };
        let frac_digits = (digits as i64 + 10 - exp_hint).max(10) as usize;
        let scale = num_traits::pow(BigInt::from(10u32), frac_digits);
        let mut scaled = (&self.rational * Rational::from_integer(scale.clone())).floor().to_integer();
        if self.has_root() {
            let b = &self.coeff * Rational::from_integer(scale.clone());
            let sq = (&b * &b * rat_from_nat(&self.radicand)).floor().to_integer();
            let root = BigInt::from(sq.to_biguint().unwrap_or_default().sqrt());
            if b.is_negative() {
                scaled -= root;
            } else {
                scaled += root;
            }
        }
        format_scientific(&scaled, frac_digits, digits)
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.has_root() {
            return write!(f, "{}", fmt_rational(&self.rational));
        }
        if self.rational.is_zero() {
            write!(f, "{}*sqrt({})", fmt_rational(&self.coeff), self.radicand)
        } else {
            let sign = if self.coeff.is_negative() { '-' } else { '+' };
            write!(
                f,
                "{} {sign} {}*sqrt({})",
                fmt_rational(&self.rational),
                fmt_rational(&self.coeff.abs()),
                self.radicand
            )
        }
    }
}

/// `value = scaled / 10^frac_digits`, rendered as `d.ddd...e<exp>` with
/// `digits` significant digits, rounding half away from zero.
fn format_scientific(scaled: &BigInt, frac_digits: usize, digits: usize) -> String {
    if scaled.is_zero() {
        return format!("0.{}e0", "0".repeat(digits.saturating_sub(1)));
    }
    let negative = scaled.sign() == Sign::Minus;
    let mut mag = scaled.magnitude().clone();
    let mut len = mag.to_string().len();
    let mut exponent = len as i64 - 1 - frac_digits as i64;
    if len > digits {
        let drop = len - digits;
        let div = num_traits::pow(Natural::from(10u32), drop);
        let (q, r) = mag.div_rem(&div);
        mag = if r * 2u32 >= div { q + 1u32 } else { q };
        let new_len = mag.to_string().len();
        if new_len > digits {
            mag /= 10u32;
            exponent += 1;
        }
        len = digits;
    } else {
        mag *= num_traits::pow(Natural::from(10u32), digits - len);
        len = digits;
    }
    let s = mag.to_string();
    debug_assert_eq!(s.len(), len);
    let sign = if negative { "-" } else { "" };
    if len == 1 {
        format!("{sign}{s}e{exponent}")
    } else {
        format!("{sign}{}.{}e{exponent}", &s[..1], &s[1..])
    }
}

/// Serde adapter storing rationals as `"p/q"` strings.
pub mod rational_string {
    use super::{fmt_rational, parse_rational, Rational};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).ok_or_else(|| D::Error::custom(format!("bad rational {s:?}")))
    }
}

/// Serde adapter storing naturals as decimal strings.
pub mod natural_string {
    use super::Natural;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Natural, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Natural, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(|_| D::Error::custom(format!("bad natural {s:?}")))
    }
}

/// Serde adapter for `Vec<Natural>` as a list of decimal strings.
pub mod natural_vec {
    use super::Natural;
    use serde::{de::Error, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(xs: &[Natural], s: S) -> Result<S::Ok, S::Error> {
        xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Natural>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| s.parse().map_err(|_| D::Error::custom(format!("bad natural {s:?}"))))
            .collect()
    }
}

/// Serde adapter for `Vec<Rational>` as a list of `"p/q"` strings.
pub mod rational_vec {
    use super::{fmt_rational, parse_rational, Rational};
    use serde::{de::Error, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(xs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        xs.iter().map(fmt_rational).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| parse_rational(s).ok_or_else(|| D::Error::custom(format!("bad rational {s:?}"))))
            .collect()
    }
}
