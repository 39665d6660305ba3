//! Exact multivariate integer polynomials, and rational functions whose
//! denominators are kept as products of named factors.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exactmath::Rational;
use crate::{Error, Result};

/// Sorted `(variable, exponent)` pairs with positive exponents.
type Monomial = Vec<(char, u32)>;

fn mono_mul(a: &Monomial, b: &Monomial) -> Monomial {
    let mut out: BTreeMap<char, u32> = a.iter().copied().collect();
    for &(v, e) in b {
        *out.entry(v).or_insert(0) += e;
    }
    out.into_iter().collect()
}

fn mono_degree(m: &Monomial) -> u32 {
    m.iter().map(|&(_, e)| e).sum()
}

/// Polynomial with integer coefficients in single-letter variables.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct IntPolynomial {
    terms: BTreeMap<Monomial, BigInt>,
}

impl IntPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero();
        p.add_term(Vec::new(), c.into());
        p
    }

    pub fn var(v: char) -> Self {
        let mut p = Self::zero();
        p.add_term(vec![(v, 1)], BigInt::one());
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        let entry = self.terms.entry(m).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms as `(monomial, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (&[(char, u32)], &BigInt)> {
        self.terms.iter().map(|(m, c)| (m.as_slice(), c))
    }

    pub fn degree_in(&self, v: char) -> u32 {
        self.terms
            .keys()
            .map(|m| m.iter().find(|&&(w, _)| w == v).map_or(0, |&(_, e)| e))
            .max()
            .unwrap_or(0)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::constant(1);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * k);
        }
        out
    }

    /// Coefficient of `v^k`, a polynomial in the remaining variables.
    pub fn coefficient(&self, v: char, k: u32) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m.iter().find(|&&(w, _)| w == v).map_or(0, |&(_, e)| e);
            if e == k {
                out.add_term(m.iter().copied().filter(|&(w, _)| w != v).collect(), c.clone());
            }
        }
        out
    }

    /// Replaces `v` by `value`.
    pub fn substitute(&self, v: char, value: &IntPolynomial) -> Self {
        let mut powers = vec![Self::constant(1)];
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m.iter().find(|&&(w, _)| w == v).map_or(0, |&(_, e)| e) as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap() * value;
                powers.push(next);
            }
            let mut rest = Self::zero();
            rest.add_term(m.iter().copied().filter(|&(w, _)| w != v).collect(), c.clone());
            out = &out + &(&rest * &powers[e]);
        }
        out
    }

    pub fn eval(&self, values: &BTreeMap<char, Rational>) -> Result<Rational> {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut term = Rational::from_integer(c.clone());
            for &(v, e) in m {
                let x = values.get(&v).ok_or_else(|| Error::Precondition(format!("no value for {v}")))?;
                term *= num_traits::pow(x.clone(), e as usize);
            }
            total += term;
        }
        Ok(total)
    }

    /// Whether every coefficient is `>= 0`.
    pub fn all_coefficients_nonnegative(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    pub fn constant_term(&self) -> BigInt {
        self.terms.get(&Vec::new()).cloned().unwrap_or_default()
    }

    /// Monomials whose coefficients differ, as `(monomial, self, other)`.
    pub fn differences(&self, other: &IntPolynomial) -> Vec<(String, BigInt, BigInt)> {
        let diff = self - other;
        diff.terms
            .keys()
            .map(|m| {
                let a = self.terms.get(m).cloned().unwrap_or_default();
                let b = other.terms.get(m).cloned().unwrap_or_default();
                (format_monomial(m), a, b)
            })
            .collect()
    }
}

fn format_monomial(m: &Monomial) -> String {
    if m.is_empty() {
        return "1".into();
    }
    m.iter()
        .map(|&(v, e)| if e == 1 { v.to_string() } else { format!("{v}^{e}") })
        .collect()
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // higher total degree first, then reverse lexicographic
        let mut terms: Vec<(&Monomial, &BigInt)> = self.terms.iter().collect();
        terms.sort_by(|a, b| mono_degree(b.0).cmp(&mono_degree(a.0)).then_with(|| b.0.cmp(a.0)));
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if m.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", format_monomial(m))?;
            } else {
                write!(f, "{mag}{}", format_monomial(m))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolynomial({self})")
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for IntPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl std::ops::Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl std::ops::Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        let mut acc: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                *acc.entry(mono_mul(a, b)).or_insert_with(BigInt::zero) += x * y;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        IntPolynomial { terms: acc }
    }
}

impl std::ops::Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        self.scale(&BigInt::from(-1))
    }
}

/// Parses sums of products such as `r(r+1)^2(r^3 + 3r^2 - 3r - 1)` or
/// `4 r^5+32 r^4 - 1`. Letters are single variables; juxtaposition and `*`
/// both multiply.
impl FromStr for IntPolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut parser = Parser { chars, pos: 0 };
        let p = parser.expr()?;
        if parser.pos != parser.chars.len() {
            return Err(parser.error("trailing input"));
        }
        Ok(p)
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn error(&self, what: &str) -> Error {
        let rest: String = self.chars[self.pos.min(self.chars.len())..].iter().collect();
        Error::Precondition(format!("polynomial parse error: {what} at '{rest}'"))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<IntPolynomial> {
        let mut negate = false;
        if let Some(c @ ('+' | '-')) = self.peek() {
            negate = c == '-';
            self.pos += 1;
        }
        let mut acc = self.term()?;
        if negate {
            acc = -&acc;
        }
        while let Some(c @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == '+' { &acc + &t } else { &acc - &t };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<IntPolynomial> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = &acc * &self.factor()?;
                }
                Some(c) if c == '(' || c.is_ascii_alphanumeric() => acc = &acc * &self.factor()?,
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<IntPolynomial> {
        let base = self.primary()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let e = self.number()?;
            let e: u32 = e.try_into().map_err(|_| self.error("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn number(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        digits.parse().map_err(|_| self.error("bad number"))
    }

    fn primary(&mut self) -> Result<IntPolynomial> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => Ok(IntPolynomial::constant(self.number()?)),
            Some(c) if c.is_ascii_alphabetic() => {
                self.pos += 1;
                Ok(IntPolynomial::var(c))
            }
            _ => Err(self.error("expected a term")),
        }
    }
}

/// `num / Π factor^exp`, with factors kept symbolic so that clearing a known
/// denominator needs no polynomial division.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFn {
    pub num: IntPolynomial,
    pub den: Vec<(IntPolynomial, u32)>,
}

impl RatFn {
    pub fn poly(p: IntPolynomial) -> Self {
        RatFn { num: p, den: Vec::new() }
    }

    /// `num / factor`
    pub fn over(num: IntPolynomial, factor: IntPolynomial) -> Self {
        RatFn { num, den: vec![(factor, 1)] }
    }

    fn exponent(&self, f: &IntPolynomial) -> u32 {
        self.den.iter().find(|(g, _)| g == f).map_or(0, |(_, e)| *e)
    }

    /// Rewrites `self` over the denominator `den`, which must contain it.
    fn lift(&self, den: &[(IntPolynomial, u32)]) -> IntPolynomial {
        let mut num = self.num.clone();
        for (f, e) in den {
            let extra = e - self.exponent(f);
            if extra > 0 {
                num = &num * &f.pow(extra);
            }
        }
        num
    }

    fn common_den(&self, other: &RatFn) -> Vec<(IntPolynomial, u32)> {
        let mut den = self.den.clone();
        for (f, e) in &other.den {
            match den.iter_mut().find(|(g, _)| g == f) {
                Some(slot) => slot.1 = slot.1.max(*e),
                None => den.push((f.clone(), *e)),
            }
        }
        den
    }

    pub fn add(&self, other: &RatFn) -> RatFn {
        let den = self.common_den(other);
        RatFn { num: &self.lift(&den) + &other.lift(&den), den }
    }

    pub fn sub(&self, other: &RatFn) -> RatFn {
        let den = self.common_den(other);
        RatFn { num: &self.lift(&den) - &other.lift(&den), den }
    }

    pub fn mul(&self, other: &RatFn) -> RatFn {
        let mut den = self.den.clone();
        for (f, e) in &other.den {
            match den.iter_mut().find(|(g, _)| g == f) {
                Some(slot) => slot.1 += e,
                None => den.push((f.clone(), *e)),
            }
        }
        RatFn { num: &self.num * &other.num, den }
    }

    /// Multiplies by `Π factor^exp` and returns the resulting polynomial;
    /// fails if the multiplier does not clear the denominator.
    pub fn clear(&self, multiplier: &[(IntPolynomial, u32)]) -> Result<IntPolynomial> {
        let mut num = self.num.clone();
        for (f, e) in &self.den {
            let m = multiplier.iter().find(|(g, _)| g == f).map_or(0, |(_, k)| *k);
            if m < *e {
                return Err(Error::Internal(format!("multiplier leaves ({f})^{} in the denominator", e - m)));
            }
        }
        for (f, k) in multiplier {
            let extra = k - self.exponent(f);
            if extra > 0 {
                num = &num * &f.pow(extra);
            }
        }
        Ok(num)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat;

    fn p(s: &str) -> IntPolynomial {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(p("(r+1)^2").to_string(), "r^2 + 2r + 1");
        assert_eq!(p("r(r+1)^2(r^3 + 3r^2 - 3r - 1)"), &(&p("r") * &p("r^2+2r+1")) * &p("r^3+3r^2-3r-1"));
        assert_eq!(p("4 r^5+32 r^4 - 1").to_string(), "4r^5 + 32r^4 - 1");
        assert_eq!(p("-x + 2*y").to_string(), "2y - x");
        assert_eq!(p("(r-2)r^2(r+1)^4").coefficient('r', 7), p("1"));
        assert_eq!(p("0").to_string(), "0");
        assert!("r +".parse::<IntPolynomial>().is_err());
        assert!("(r".parse::<IntPolynomial>().is_err());
    }

    #[test]
    fn display_roundtrips() {
        for s in ["rd^2 - 3r^2d + 7", "4r^3 + 3r^2 + 6r - 1", "-u^4 + ud - 2", "0"] {
            let q = p(s);
            assert_eq!(p(&q.to_string()), q);
            let json = serde_json::to_string(&q).unwrap();
            assert_eq!(serde_json::from_str::<IntPolynomial>(&json).unwrap(), q);
        }
    }

    #[test]
    fn arithmetic_and_substitution() {
        let a = p("r + s");
        assert_eq!(a.pow(2), p("r^2 + 2rs + s^2"));
        let shifted = p("s^2 - r").substitute('s', &p("r + d"));
        assert_eq!(shifted, p("r^2 + 2rd + d^2 - r"));
        assert_eq!(shifted.coefficient('d', 1), p("2r"));
        assert_eq!(shifted.degree_in('d'), 2);
        let vals: BTreeMap<char, Rational> = [('r', rat(1, 2)), ('d', rat(3, 1))].into_iter().collect();
        assert_eq!(shifted.eval(&vals).unwrap(), rat(1, 4) + rat(3, 1) + rat(9, 1) - rat(1, 2));
        assert!((&a - &a).is_zero());
    }

    #[test]
    fn rational_functions() {
        // 1/r + 1/s = (r + s)/(rs)
        let x = RatFn::over(p("1"), p("r")).add(&RatFn::over(p("1"), p("s")));
        assert_eq!(x.clear(&[(p("r"), 1), (p("s"), 1)]).unwrap(), p("r + s"));
        let sq = x.mul(&x);
        assert_eq!(sq.clear(&[(p("r"), 2), (p("s"), 2)]).unwrap(), p("(r+s)^2"));
        assert!(sq.clear(&[(p("r"), 1), (p("s"), 2)]).is_err());
        let y = RatFn::over(p("s"), p("r+1")).sub(&RatFn::over(p("r"), p("s+1")));
        assert_eq!(y.clear(&[(p("r+1"), 1), (p("s+1"), 1)]).unwrap(), p("s(s+1) - r(r+1)"));
    }
}
