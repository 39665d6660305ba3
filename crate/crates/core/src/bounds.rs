//! Exact evaluation of the isoperimetric and shadow bounds.
//!
//! Every bound with a square root is returned as a [`Surd`] and compared
//! exactly.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::boundary::{lower_shadow, upper_shadow};
use crate::exactmath::{
    ball_size, binom, binom_row, natural_string, natural_vec, rat, rat_from_nat, ratio, rational_string,
    rational_vec, Natural, Rational, Surd,
};
use crate::families::{ExplicitFamily, Family};
use crate::{Error, Result};

fn check_layer(n: u32, r: u32) -> Result<()> {
    if r == 0 || r >= n {
        return Err(Error::Precondition(format!("need 1 <= r <= n-1, got n={n}, r={r}")));
    }
    Ok(())
}

/// `(r/(s+1)) |A|` and `(s/(r+1)) |A|`, the normalized matching lower bounds
/// for the lower and upper shadow of `A ⊆ S_n(r)`.
pub fn nm_bounds(n: u32, r: u32, size: &Natural) -> Result<(Rational, Rational)> {
    check_layer(n, r)?;
    let s = (n - r) as i64;
    let r = r as i64;
    let size = rat_from_nat(size);
    Ok((rat(r, s + 1) * &size, rat(s, r + 1) * size))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalExpansionVerdict {
    pub n: u32,
    pub r: u32,
    #[serde(with = "natural_string")]
    pub size: Natural,
    #[serde(with = "natural_string")]
    pub boundary: Natural,
    #[serde(with = "rational_string")]
    pub alpha: Rational,
    pub rhs: Surd,
    /// `boundary - rhs`
    pub slack: Surd,
    pub holds: bool,
}

/// Right-hand side of the local expansion inequality,
/// `(r/(s+1) + s/(r+1))|A| + sqrt(n/(rs)) α(1-α) C(n,r)`.
///
/// `sqrt(n/(rs))` is stored as `sqrt(nrs)/(rs)`.
pub fn local_expansion_rhs(n: u32, r: u32, size: &Natural) -> Result<Surd> {
    check_layer(n, r)?;
    let total = binom(n as u64, r as u64);
    if *size > total {
        return Err(Error::Precondition(format!("|A| = {size} exceeds C({n},{r}) = {total}")));
    }
    let s = n - r;
    let (lo, up) = nm_bounds(n, r, size)?;
    let alpha = ratio(size, &total);
    let spread = &alpha * (Rational::one() - &alpha) * rat_from_nat(&total);
    let rs = (r as u64) * (s as u64);
    let coeff = spread / rat(rs as i64, 1);
    Ok(Surd { rational: lo + up, coeff, radicand: Natural::from(rs * n as u64) })
}

pub fn local_expansion_check(n: u32, r: u32, size: &Natural, boundary: &Natural) -> Result<LocalExpansionVerdict> {
    let rhs = local_expansion_rhs(n, r, size)?;
    let slack = rhs.rational_minus(&rat_from_nat(boundary));
    Ok(LocalExpansionVerdict {
        n,
        r,
        size: size.clone(),
        boundary: boundary.clone(),
        alpha: ratio(size, &binom(n as u64, r as u64)),
        holds: slack.is_nonnegative(),
        rhs,
        slack,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thm1Verdict {
    pub n: u32,
    pub radius: u32,
    #[serde(with = "rational_string")]
    pub rho: Rational,
    #[serde(with = "natural_string")]
    pub size: Natural,
    #[serde(with = "natural_string")]
    pub boundary: Natural,
    /// `min(|A|, |B_n(R)| - |A|)`
    #[serde(with = "natural_string")]
    pub min_side: Natural,
    pub bound: Surd,
    pub slack: Surd,
    pub holds: bool,
    /// No threshold `n₀` was assumed, or `n` lies below it.
    pub exploratory: bool,
}

/// `(ρ^{3/2} / (18 sqrt n)) * min_side`, with `ρ = p/q` in lowest terms
/// rewritten as `ρ * min_side / (18 q n) * sqrt(p q n)`.
pub fn thm1_bound_value(n: u32, rho: &Rational, min_side: &Natural) -> Result<Surd> {
    if !rho.is_positive() || n == 0 {
        return Err(Error::Precondition(format!("need rho > 0 and n >= 1, got rho={rho}, n={n}")));
    }
    let p = rho.numer().magnitude().clone();
    let q = rho.denom().magnitude().clone();
    let n_big = Natural::from(n);
    let coeff = rho * rat_from_nat(min_side) / rat_from_nat(&(&q * &n_big * 18u32));
    Ok(Surd::sqrt_term(coeff, p * q * n_big))
}

/// Checks `boundary >= (ρ^{3/2}/(18 sqrt n)) min(|A|, |B_n(R)| - |A|)` for a
/// family of size `size` in `B_n(R)`.
///
/// Requires `R <= n/2` and `|B_n(⌊ρn⌋)| <= |A| <= |B_n(R)| - |B_n(⌊ρn⌋)|`.
pub fn thm1_bound_check(
    n: u32,
    radius: u32,
    rho: &Rational,
    size: &Natural,
    boundary: &Natural,
    assume_n0: Option<u64>,
) -> Result<Thm1Verdict> {
    if !rho.is_positive() || *rho >= rat(1, 2) {
        return Err(Error::Precondition(format!("rho = {rho} outside (0, 1/2)")));
    }
    if 2 * radius > n {
        return Err(Error::Precondition(format!("R = {radius} exceeds n/2 = {n}/2")));
    }
    let floor_rn = (rho * rat(n as i64, 1)).floor().to_integer();
    let floor_rn: u64 = floor_rn.try_into().unwrap_or(0);
    let inner = ball_size(n as u64, floor_rn);
    let total = ball_size(n as u64, radius as u64);
    if *size < inner || &inner + size > total {
        return Err(Error::Precondition(format!(
            "|A| = {size} outside [|B_{n}({floor_rn})|, |B_{n}({radius})| - |B_{n}({floor_rn})|] = [{inner}, {}]",
            if total >= inner { (&total - &inner).to_string() } else { "-".into() }
        )));
    }
    let min_side = size.clone().min(&total - size);
    let bound = thm1_bound_value(n, rho, &min_side)?;
    let slack = bound.rational_minus(&rat_from_nat(boundary));
    Ok(Thm1Verdict {
        n,
        radius,
        rho: rho.clone(),
        size: size.clone(),
        boundary: boundary.clone(),
        min_side,
        holds: slack.is_nonnegative(),
        bound,
        slack,
        exploratory: assume_n0.map_or(true, |n0| (n as u64) < n0),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma7Params {
    #[serde(with = "rational_string")]
    pub epsilon: Rational,
    pub r0: u32,
    #[serde(with = "rational_string")]
    pub c: Rational,
}

/// `ε = R/(2n)`, `r₀ = min{r <= R : |B_n(r)| >= ε|A|}` and
/// `c = 1 - 1/(|B_n(R)|/|A| - ε)`.
pub fn lemma7_params(n: u32, radius: u32, size: &Natural) -> Result<Lemma7Params> {
    if n == 0 || radius > n {
        return Err(Error::Precondition(format!("need 1 <= n and R <= n, got n={n}, R={radius}")));
    }
    let total = ball_size(n as u64, radius as u64);
    if size.is_zero() || *size > total {
        return Err(Error::Precondition(format!("|A| = {size} outside [1, {total}]")));
    }
    let epsilon = rat(radius as i64, 2 * n as i64);
    let threshold = &epsilon * rat_from_nat(size);
    let row = binom_row(n as u64);
    let mut ball = Natural::zero();
    let mut r0 = None;
    for r in 0..=radius {
        ball += &row[r as usize];
        if rat_from_nat(&ball) >= threshold {
            r0 = Some(r);
            break;
        }
    }
    let r0 = r0.ok_or(Error::NoValidR0)?;
    let gap = ratio(&total, size) - &epsilon;
    if gap.is_zero() {
        return Err(Error::Degenerate("|B_n(R)|/|A| = ε".into()));
    }
    let c = Rational::one() - gap.recip();
    Ok(Lemma7Params { epsilon, r0, c })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Lemma7Bound {
    /// `r₀ = 0` or `c <= 0`: the bound says nothing.
    Trivial,
    Value { value: Surd },
}

/// `(2c ε |A| / (5n)) sqrt(r₀)`
pub fn lemma7_bound(params: &Lemma7Params, n: u32, size: &Natural) -> Lemma7Bound {
    if params.r0 == 0 || !params.c.is_positive() {
        return Lemma7Bound::Trivial;
    }
    let coeff = rat(2, 5 * n as i64) * &params.c * &params.epsilon * rat_from_nat(size);
    Lemma7Bound::Value { value: Surd::sqrt_term(coeff, Natural::from(params.r0)) }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma7Verdict {
    pub params: Lemma7Params,
    pub bound: Lemma7Bound,
    #[serde(with = "natural_string")]
    pub boundary: Natural,
    pub holds: bool,
    /// `n >= 80` and `R <= n - r₀`; outside this range the check is exploratory.
    pub in_scope: bool,
}

pub fn lemma7_check(n: u32, radius: u32, size: &Natural, boundary: &Natural) -> Result<Lemma7Verdict> {
    let params = lemma7_params(n, radius, size)?;
    let bound = lemma7_bound(&params, n, size);
    let holds = match &bound {
        Lemma7Bound::Trivial => true,
        Lemma7Bound::Value { value } => value.rational_minus(&rat_from_nat(boundary)).is_nonnegative(),
    };
    let in_scope = n >= 80 && radius + params.r0 <= n;
    Ok(Lemma7Verdict { params, bound, boundary: boundary.clone(), holds, in_scope })
}

fn check_in_ball(f: &ExplicitFamily, radius: u32) -> Result<()> {
    if radius > f.n() {
        return Err(Error::Precondition(format!("R = {radius} exceeds n = {}", f.n())));
    }
    if let Some(x) = f.members().iter().find(|x| x.len() > radius) {
        return Err(Error::OutsideBall { member: x.to_string(), size: x.len(), radius });
    }
    Ok(())
}

fn layers(f: &ExplicitFamily, radius: u32) -> Result<Vec<ExplicitFamily>> {
    check_in_ball(f, radius)?;
    (0..=radius)
        .map(|r| ExplicitFamily::with_layer(f.n(), r, f.members().iter().copied().filter(|x| x.len() == r)))
        .collect()
}

/// Layer sizes `|A_r|` and densities `α_r = |A_r| / C(n,r)` for `0 <= r <= R`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityProfile {
    #[serde(with = "natural_vec")]
    pub sizes: Vec<Natural>,
    #[serde(with = "rational_vec")]
    pub alpha: Vec<Rational>,
}

pub fn density_profile(f: &ExplicitFamily, radius: u32) -> Result<DensityProfile> {
    let parts = layers(f, radius)?;
    let n = f.n() as u64;
    let sizes: Vec<Natural> = parts.iter().map(|p| p.size()).collect();
    let alpha = sizes.iter().enumerate().map(|(r, a)| ratio(a, &binom(n, r as u64))).collect();
    Ok(DensityProfile { sizes, alpha })
}

/// `δ_r⁺ = |∂⁺A_r| - ((n-r)/(r+1))|A_r|` for `0 <= r < R` and
/// `δ_r⁻ = |∂⁻A_r| - (r/(n-r+1))|A_r|` for `1 <= r <= R`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShadowSlacks {
    /// Indexed by `r`, starting at 0.
    #[serde(with = "rational_vec")]
    pub plus: Vec<Rational>,
    /// Indexed by `r - 1`.
    #[serde(with = "rational_vec")]
    pub minus: Vec<Rational>,
}

pub fn shadow_slacks(f: &ExplicitFamily, radius: u32) -> Result<ShadowSlacks> {
    let parts = layers(f, radius)?;
    let n = f.n() as i64;
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for (r, part) in parts.iter().enumerate() {
        let size = rat(part.len() as i64, 1);
        let r = r as i64;
        if r < radius as i64 {
            let shadow = upper_shadow(part)?.len() as i64;
            plus.push(rat(shadow, 1) - rat(n - r, r + 1) * &size);
        }
        if r >= 1 {
            let shadow = lower_shadow(part)?.len() as i64;
            minus.push(rat(shadow, 1) - rat(r, n - r + 1) * &size);
        }
    }
    if let Some(bad) = plus.iter().chain(&minus).find(|d| d.is_negative()) {
        return Err(Error::Internal(format!("negative shadow slack {bad}")));
    }
    Ok(ShadowSlacks { plus, minus })
}

/// `P(H = k)` for `H` hypergeometric: `r` draws from `n` items of which `m`
/// are marked.
pub fn hypergeometric_pmf(r: u32, m: u32, n: u32, k: u32) -> Result<Rational> {
    if m > n || r > n {
        return Err(Error::Precondition(format!("need m, r <= n, got r={r}, m={m}, n={n}")));
    }
    if k > r {
        return Ok(Rational::zero());
    }
    let num = binom(m as u64, k as u64) * binom((n - m) as u64, (r - k) as u64);
    Ok(ratio(&num, &binom(n as u64, r as u64)))
}

/// `max_k P(H = k)² · r(n-r)/n` for `H ~ H(r; ⌊n/2⌋, n)`.
pub fn hypergeometric_max_ratio(r: u32, n: u32) -> Result<Rational> {
    check_layer(n, r)?;
    let m = n / 2;
    let inside = binom_row(m as u64);
    let outside = binom_row((n - m) as u64);
    let best = (0..=r.min(m))
        .filter(|&k| r - k <= n - m)
        .map(|k| &inside[k as usize] * &outside[(r - k) as usize])
        .max()
        .unwrap_or_default();
    let pmf = ratio(&best, &binom(n as u64, r as u64));
    Ok(&pmf * &pmf * Rational::new(BigInt::from(r as u64 * (n - r) as u64), BigInt::from(n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::{ball_boundary, cube_boundary};
    use crate::constructions::costar;
    use crate::exactmath::nat;
    use crate::families::{layer_sets, VertexSet};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn subfamilies(n: u32, r: u32) -> impl Iterator<Item = ExplicitFamily> {
        let slice = layer_sets(n, r);
        (0u64..1 << slice.len()).map(move |mask| {
            let members = (0..slice.len()).filter(|i| mask >> i & 1 == 1).map(|i| slice[i]);
            ExplicitFamily::with_layer(n, r, members).unwrap()
        })
    }

    #[test]
    fn nm_examples() {
        assert_eq!(nm_bounds(4, 2, &nat(3)).unwrap(), (rat(2, 1), rat(2, 1)));
        assert_eq!(nm_bounds(4, 2, &nat(0)).unwrap(), (rat(0, 1), rat(0, 1)));
        // r/(s+1) = 2/5 of 15 is 6; the lower shadow itself has C(6,1) = 6 sets
        assert_eq!(nm_bounds(6, 2, &nat(15)).unwrap(), (rat(6, 1), rat(20, 1)));
        assert!(nm_bounds(4, 0, &nat(1)).is_err());
    }

    #[test]
    fn normalized_matching_exhaustive() {
        for (n, r) in [(4, 2), (5, 2)] {
            for f in subfamilies(n, r) {
                let (lo, up) = nm_bounds(n, r, &f.size()).unwrap();
                assert!(rat(lower_shadow(&f).unwrap().len() as i64, 1) >= lo);
                assert!(rat(upper_shadow(&f).unwrap().len() as i64, 1) >= up);
            }
        }
    }

    #[test]
    fn local_expansion_examples() {
        let a0 = costar(4, 2, 1).unwrap();
        let b = cube_boundary(&a0).len() as u64;
        assert_eq!(b, 7);
        let v = local_expansion_check(4, 2, &nat(3), &nat(b)).unwrap();
        assert!(v.holds);
        assert_eq!(v.rhs.checked_cmp(&Surd::from_rational(rat(11, 2))), Some(std::cmp::Ordering::Equal));
        assert_eq!(v.rhs.to_decimal(5), "5.5000e0");

        let v = local_expansion_check(5, 2, &nat(0), &nat(0)).unwrap();
        assert!(v.holds);
        assert!(v.rhs.signum().is_eq());

        for (n, r) in [(4u32, 2u32), (6, 3), (7, 2)] {
            let full = binom(n as u64, r as u64);
            let boundary = binom(n as u64, r as u64 - 1) + binom(n as u64, r as u64 + 1);
            let v = local_expansion_check(n, r, &full, &boundary).unwrap();
            assert!(v.holds);
            assert!(v.slack.signum().is_eq());
        }
        assert!(local_expansion_check(4, 2, &nat(7), &nat(0)).is_err());
    }

    #[test]
    fn local_expansion_exhaustive_small() {
        for (n, r) in [(3, 1), (4, 2), (5, 2)] {
            for f in subfamilies(n, r) {
                let b = nat(cube_boundary(&f).len() as u64);
                assert!(local_expansion_check(n, r, &f.size(), &b).unwrap().holds, "{f:?}");
            }
        }
    }

    #[test]
    fn base_case_identity() {
        // r = 1: the slack equals (1-α)(αn²/2 + 1) whenever |A| >= 1
        for n in 2..=12u32 {
            for f in subfamilies(n, 1) {
                let a = f.len() as i64;
                let b = cube_boundary(&f).len() as i64;
                let v = local_expansion_check(n, 1, &f.size(), &nat(b as u64)).unwrap();
                assert!(v.holds);
                if a > 0 {
                    let alpha = rat(a, n as i64);
                    let nn = rat((n * n) as i64, 1);
                    let expected = (Rational::one() - &alpha) * (&alpha * nn / rat(2, 1) + Rational::one());
                    let s = (n - 1) as i64;
                    let lhs = rat(b, 1) - (rat(s, 2) + rat(1, s + 1)) * rat(a, 1);
                    assert_eq!(lhs, expected, "n={n} a={a}");
                }
            }
        }
    }

    #[test]
    fn thm1_examples() {
        let rho = rat(1, 3);
        // the ungated value behind 324·6·36 >= (1/27)·21²
        let bound = thm1_bound_value(6, &rho, &nat(21)).unwrap();
        let slack = bound.rational_minus(&rat(6, 1));
        assert!(slack.is_nonnegative());
        let squared = bound.coeff.clone() * &bound.coeff * rat_from_nat(&bound.radicand);
        assert_eq!(squared * rat(324 * 6, 1), rat(21 * 21, 27));
        // |B_6(2)| = 22 > 21, so the gate rejects this instance
        assert!(matches!(
            thm1_bound_check(6, 3, &rho, &nat(21), &nat(6), None),
            Err(Error::Precondition(_))
        ));
        let total = ball_size(100, 50);
        let inner = ball_size(100, 25);
        let size = &inner * 2u32;
        let v = thm1_bound_check(100, 50, &rat(1, 4), &size, &total, None).unwrap();
        assert!(v.holds && v.exploratory);
        let v = thm1_bound_check(100, 50, &rat(1, 4), &size, &total, Some(50)).unwrap();
        assert!(!v.exploratory);
        assert!(thm1_bound_check(100, 50, &rat(1, 4), &(&inner - 1u32), &total, None).is_err());
        assert!(thm1_bound_check(100, 51, &rat(1, 4), &size, &total, None).is_err());
    }

    #[test]
    fn thm1_squared_form_agrees() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..2000 {
            let n = rng.gen_range(1..200u32);
            let rho = rat(rng.gen_range(1..20), rng.gen_range(1..60));
            let min_side = nat(rng.gen_range(0..1_000_000));
            let boundary = nat(rng.gen_range(0..10_000));
            let bound = thm1_bound_value(n, &rho, &min_side).unwrap();
            let holds = bound.rational_minus(&rat_from_nat(&boundary)).is_nonnegative();
            let b = rat_from_nat(&boundary);
            let m = rat_from_nat(&min_side);
            let squared = rat(324 * n as i64, 1) * &b * &b >= &rho * &rho * &rho * &m * &m;
            assert_eq!(holds, squared);
        }
    }

    #[test]
    fn lemma7_examples() {
        let p = lemma7_params(8, 4, &nat(40)).unwrap();
        assert_eq!(p, Lemma7Params { epsilon: rat(1, 4), r0: 2, c: rat(113, 153) });
        let full = lemma7_params(8, 4, &nat(163)).unwrap();
        assert_eq!(full.c, rat(-1, 3));
        assert_eq!(lemma7_bound(&full, 8, &nat(163)), Lemma7Bound::Trivial);
        assert_eq!(lemma7_params(8, 4, &nat(1)).unwrap().r0, 0);
        assert!(lemma7_params(8, 4, &nat(0)).is_err());
        assert!(lemma7_params(8, 4, &nat(164)).is_err());

        let Lemma7Bound::Value { value } = lemma7_bound(&p, 8, &nat(40)) else { panic!() };
        assert_eq!(value.coeff, rat(113, 306));
        assert_eq!(value.radicand, nat(2));
        assert!(lemma7_check(8, 4, &nat(40), &nat(6)).unwrap().holds);

        let p = Lemma7Params { epsilon: rat(1, 4), r0: 4, c: rat(1, 1) };
        let Lemma7Bound::Value { value } = lemma7_bound(&p, 10, &nat(100)) else { panic!() };
        assert_eq!(value.checked_cmp(&Surd::from_rational(rat(2, 1))), Some(std::cmp::Ordering::Equal));
    }

    #[test]
    fn lemma7_small_balls_are_exploratory() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let n = rng.gen_range(2..=10u32);
            let radius = rng.gen_range(1..=n);
            let ball = ExplicitFamily::ball(n, radius).unwrap();
            let members: Vec<VertexSet> = ball.members().iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
            if members.is_empty() {
                continue;
            }
            let f = ExplicitFamily::new(n, members).unwrap();
            let b = nat(ball_boundary(&f, radius).unwrap().len() as u64);
            let v = lemma7_check(n, radius, &f.size(), &b).unwrap();
            assert!(!v.in_scope);
            assert_eq!(v.bound == Lemma7Bound::Trivial, v.params.r0 == 0 || !v.params.c.is_positive());
        }
    }

    #[test]
    fn density_examples() {
        let d = density_profile(&ExplicitFamily::ball(4, 1).unwrap(), 2).unwrap();
        assert_eq!(d.alpha, vec![rat(1, 1), rat(1, 1), rat(0, 1)]);
        let a0 = costar(4, 2, 1).unwrap();
        let f = ExplicitFamily::new(4, a0.members().iter().copied().chain([VertexSet(0)])).unwrap();
        let d = density_profile(&f, 2).unwrap();
        assert_eq!(d.alpha, vec![rat(1, 1), rat(0, 1), rat(1, 2)]);
        assert_eq!(d.sizes.iter().sum::<Natural>(), f.size());
        let d = density_profile(&ExplicitFamily::empty(4).unwrap(), 2).unwrap();
        assert!(d.alpha.iter().all(|a| a.is_zero()));
        assert!(density_profile(&ExplicitFamily::ball(4, 3).unwrap(), 2).is_err());
    }

    #[test]
    fn shadow_slack_examples() {
        let full = ExplicitFamily::slice(6, 3).unwrap();
        let s = shadow_slacks(&full, 3).unwrap();
        assert!(s.minus[2].is_zero());
        let a0 = costar(4, 2, 1).unwrap();
        let s = shadow_slacks(&a0, 2).unwrap();
        assert_eq!(s.minus[1], rat(1, 1));
        let s = shadow_slacks(&ExplicitFamily::empty(4).unwrap(), 2).unwrap();
        assert!(s.plus.iter().chain(&s.minus).all(|d| d.is_zero()));
        assert_eq!((s.plus.len(), s.minus.len()), (2, 2));
    }

    #[test]
    fn shadow_slacks_never_negative() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..2000 {
            let n = rng.gen_range(1..=12u32);
            let radius = rng.gen_range(0..=n);
            let p = rng.gen_range(0.0..1.0);
            let members: Vec<VertexSet> = (0u32..1 << n)
                .map(VertexSet)
                .filter(|x| x.len() <= radius && rng.gen_bool(p))
                .collect();
            let f = ExplicitFamily::new(n, members).unwrap();
            shadow_slacks(&f, radius).unwrap();
        }
    }

    #[test]
    fn hypergeometric_examples() {
        assert_eq!(hypergeometric_pmf(2, 2, 4, 1).unwrap(), rat(2, 3));
        assert_eq!(hypergeometric_pmf(2, 2, 4, 5).unwrap(), rat(0, 1));
        assert_eq!(hypergeometric_pmf(3, 0, 7, 0).unwrap(), rat(1, 1));
        assert_eq!(hypergeometric_max_ratio(2, 4).unwrap(), rat(4, 9));
        assert_eq!(hypergeometric_max_ratio(1, 2).unwrap(), rat(1, 8));
    }

    #[test]
    fn hypergeometric_sums_to_one() {
        for n in 0..=100u32 {
            for m in 0..=n {
                for r in 0..=n {
                    let total: Rational = (0..=r).map(|k| hypergeometric_pmf(r, m, n, k).unwrap()).sum();
                    assert!(total.is_one(), "r={r} m={m} n={n}");
                }
            }
        }
    }

    #[test]
    fn hypergeometric_max_matches_pmf() {
        for n in 2..=30u32 {
            for r in 1..n {
                let best = (0..=r).map(|k| hypergeometric_pmf(r, n / 2, n, k).unwrap()).max().unwrap();
                let expected = &best * &best * rat((r * (n - r)) as i64, n as i64);
                assert_eq!(hypergeometric_max_ratio(r, n).unwrap(), expected);
            }
        }
    }
}
