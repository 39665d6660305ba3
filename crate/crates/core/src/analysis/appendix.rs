//! Cleared-denominator forms of the two constant inequalities, expanded in
//! powers of `d = s - r` and compared against the printed coefficient lists.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::poly::{IntPolynomial, RatFn};
use crate::{Error, Result};

const EXPECTED_17: [&str; 6] = [
    "1",
    "7r+2",
    "r^3 + 17r^2 + 9r + 1",
    "r(4r^3 + 17r^2 + 10r + 1)",
    "r(r+1)^2(r^3 + 3r^2 - 3r - 1)",
    "(r-2)r^2(r+1)^4",
];

const EXPECTED_18: [&str; 7] = [
    "4r^3 + 3r^2 + 6r - 1",
    "4 r^5+32 r^4+32 r^3+51 r^2-2 r-1",
    "24 r^6+100 r^5+122 r^4+160 r^3+3 r^2-14 r+1",
    "52 r^7+152 r^6+208 r^5+232 r^4-12 r^3-59 r^2-2 r+1",
    "r(48 r^7+112 r^6+163 r^5+156 r^4-48 r^3-96 r^2-11 r+4)",
    "r^2(r+1)^2(16 r^5+32 r^3-23 r^2-14 r+5)",
    "2r^3(r+1)^4",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientRow {
    /// Power of `d = s - r`.
    pub power: u32,
    pub expected: IntPolynomial,
    pub computed: IntPolynomial,
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub power: u32,
    pub monomial: String,
    pub computed: String,
    pub expected: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AppendixReport {
    /// Factor that clears the denominators.
    pub multiplier: String,
    /// Cleared expression in `r` and `d`.
    pub expanded: IntPolynomial,
    /// Descending powers of `d`.
    pub rows: Vec<CoefficientRow>,
    pub residual: Vec<Residual>,
    pub exact_match: bool,
    /// The expansion after `r = u + 2`.
    pub shifted: IntPolynomial,
    pub negative_coefficients: Vec<String>,
    /// Nonnegative shifted coefficients (and, where strict positivity is
    /// claimed, a positive constant term).
    pub positivity_certified: bool,
    pub holds: bool,
}

fn p(s: &str) -> IntPolynomial {
    s.parse().expect("built-in polynomial literal")
}

fn over(num: &str, den: &str) -> RatFn {
    RatFn::over(p(num), p(den))
}

/// `s/(r+1) - r/(s+1)`
fn t_expr() -> RatFn {
    over("s", "r+1").sub(&over("r", "s+1"))
}

/// Divides out `v^k`, failing unless every monomial carries it.
fn divide_by_var(poly: &IntPolynomial, v: char, k: u32) -> Result<IntPolynomial> {
    let mut out = IntPolynomial::zero();
    for (m, c) in poly.terms() {
        let e = m.iter().find(|&&(w, _)| w == v).map_or(0, |&(_, e)| e);
        if e < k {
            return Err(Error::Internal(format!("{v}^{k} does not divide {poly}")));
        }
        let mut term = IntPolynomial::constant(c.clone());
        for &(w, e) in m {
            let e = if w == v { e - k } else { e };
            term = &term * &IntPolynomial::var(w).pow(e);
        }
        out = &out + &term;
    }
    Ok(out)
}

fn compare(multiplier: &str, cleared: IntPolynomial, expected: &[&str], strict: bool) -> AppendixReport {
    let expanded = cleared.substitute('s', &p("r + d"));
    let top = (expected.len() - 1) as u32;
    let degree = expanded.degree_in('d');
    let mut rows = Vec::new();
    let mut residual = Vec::new();
    for power in (0..=degree.max(top)).rev() {
        let computed = expanded.coefficient('d', power);
        let expected = if power <= top { p(expected[(top - power) as usize]) } else { IntPolynomial::zero() };
        for (monomial, c, e) in computed.differences(&expected) {
            residual.push(Residual { power, monomial, computed: c.to_string(), expected: e.to_string() });
        }
        rows.push(CoefficientRow { power, matches: computed == expected, expected, computed });
    }
    let shifted = expanded.substitute('r', &p("u + 2"));
    let negative_coefficients: Vec<String> = shifted
        .terms()
        .filter(|(_, c)| c.is_negative())
        .map(|(m, c)| {
            let mono: String = m.iter().map(|&(v, e)| if e == 1 { v.to_string() } else { format!("{v}^{e}") }).collect();
            format!("{c}*{mono}")
        })
        .collect();
    let positivity_certified =
        negative_coefficients.is_empty() && !shifted.is_zero() && (!strict || !shifted.constant_term().is_zero());
    let exact_match = residual.is_empty();
    AppendixReport {
        multiplier: multiplier.into(),
        expanded,
        rows,
        residual,
        exact_match,
        shifted,
        negative_coefficients,
        positivity_certified,
        holds: exact_match && positivity_certified,
    }
}

/// `((t (1/r + 1/s) + r/s)^2 - (1/r + 1/s)) * r^2 (r+1)^2 s (s+1)^2`, which
/// is nonnegative for `r >= 2`, `s >= r`.
pub fn verify_ineq17() -> Result<AppendixReport> {
    let h = over("1", "r").add(&over("1", "s"));
    let k = t_expr().mul(&h).add(&over("r", "s"));
    let expr = k.mul(&k).sub(&h);
    // the square carries s^2 in the denominator; clear it, then divide one s
    let cleared = expr.clear(&[(p("r"), 2), (p("r+1"), 2), (p("s"), 2), (p("s+1"), 2)])?;
    let cleared = divide_by_var(&cleared, 's', 1)?;
    Ok(compare("r^2(r+1)^2 s(s+1)^2", cleared, &EXPECTED_17, false))
}

/// `4 (r+1)^2 (s+1)^2 (r+s)(r+s-1)` times
/// `(r^2 t + t + r)(t + r) rs/(r+s) + (st - r^2) r (s-1)/(r+s-1) - s^2/4`,
/// which is positive for `r >= 2`, `s >= r`.
pub fn verify_ineq18() -> Result<AppendixReport> {
    let t = t_expr();
    let r = RatFn::poly(p("r"));
    let first = t
        .mul(&RatFn::poly(p("r^2 + 1")))
        .add(&r)
        .mul(&t.add(&r))
        .mul(&RatFn::over(p("rs"), p("r+s")));
    let second = t.mul(&RatFn::poly(p("s"))).sub(&RatFn::poly(p("r^2"))).mul(&over("r(s-1)", "r+s-1"));
    let expr = first.add(&second).sub(&over("s^2", "4"));
    let cleared = expr.clear(&[(p("4"), 1), (p("r+1"), 2), (p("s+1"), 2), (p("r+s"), 1), (p("r+s-1"), 1)])?;
    Ok(compare("4(r+1)^2(s+1)^2(r+s)(r+s-1)", cleared, &EXPECTED_18, true))
}
