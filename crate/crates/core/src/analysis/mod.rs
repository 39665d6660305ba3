//! Quadratic machinery behind the local expansion inequality, and the
//! polynomial identities that certify its two constant inequalities.
//!
//! Real-valued quantities (`c`, `c0`, `c1` and everything built from them)
//! are evaluated in double-double arithmetic ([`Real`], about 106 significand
//! bits, round-to-nearest in each operation). Anything that can be decided in
//! squared rational form is decided exactly instead.

mod appendix;
pub mod poly;

use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use twofloat::TwoFloat;

use crate::exactmath::{fmt_rational, rat, rational_string, Rational};
use crate::{Error, Result};

pub use appendix::{verify_ineq17, verify_ineq18, AppendixReport, CoefficientRow, Residual};
pub use poly::{IntPolynomial, RatFn};

pub type Real = TwoFloat;

/// Margins below this (relative) are reported as inconclusive.
pub const INCONCLUSIVE_MARGIN: f64 = 1e-9;

/// Tolerance for agreement between two computations of the same root.
pub const ROOT_AGREEMENT: f64 = 1e-9;

pub fn real(x: &Rational) -> Real {
    match (x.numer().to_i128(), x.denom().to_i128()) {
        (Some(p), Some(q)) => Real::from(p) / Real::from(q),
        _ => Real::from(x.to_f64().unwrap_or(f64::NAN)),
    }
}

pub fn to_f64(x: Real) -> f64 {
    x.hi() + x.lo()
}

fn real_u(x: u64) -> Real {
    Real::from(x)
}

/// `(a - b) / max(1, |a|, |b|)`
fn relative_margin(a: Real, b: Real) -> f64 {
    let scale = 1f64.max(to_f64(a).abs()).max(to_f64(b).abs());
    to_f64(a - b) / scale
}

/// Slice parameters for the inductive step: `r` and `s = n - r`, density
/// `alpha`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionParams {
    pub r: u64,
    pub s: u64,
    #[serde(with = "rational_string")]
    pub alpha: Rational,
}

impl ExpansionParams {
    pub fn new(r: u64, s: u64, alpha: Rational) -> Result<Self> {
        if r < 2 || s < 2 {
            return Err(Error::Degenerate(format!("need r, s >= 2, got r={r}, s={s}")));
        }
        if alpha.is_negative() || alpha > Rational::one() {
            return Err(Error::Precondition(format!("alpha = {} not in [0,1]", fmt_rational(&alpha))));
        }
        Ok(ExpansionParams { r, s, alpha })
    }

    pub fn n(&self) -> u64 {
        self.r + self.s
    }

    pub fn c_sq(&self) -> Rational {
        rat(self.n() as i64, (self.r * self.s) as i64)
    }

    pub fn c0_sq(&self) -> Rational {
        rat(self.n() as i64 - 1, (self.r * (self.s - 1)) as i64)
    }

    pub fn c1_sq(&self) -> Rational {
        rat(self.n() as i64 - 1, ((self.r - 1) * self.s) as i64)
    }

    pub fn t(&self) -> Rational {
        t_value(self.r, self.s)
    }

    pub fn xstar(&self) -> Rational {
        rat(self.n() as i64, self.s as i64) * (Rational::one() - &self.alpha)
    }

    pub fn c(&self) -> Real {
        real(&self.c_sq()).sqrt()
    }

    pub fn c0(&self) -> Real {
        real(&self.c0_sq()).sqrt()
    }

    pub fn c1(&self) -> Real {
        real(&self.c1_sq()).sqrt()
    }

    fn alpha_real(&self) -> Real {
        real(&self.alpha)
    }

    /// `Q = n c alpha (1 - alpha)`
    pub fn q(&self) -> Real {
        let a = self.alpha_real();
        real_u(self.n()) * self.c() * a * (Real::from(1.0) - a)
    }
}

fn t_value(r: u64, s: u64) -> Rational {
    rat(s as i64, r as i64 + 1) - rat(r as i64, s as i64 + 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LFunction {
    L1,
    L2,
    L2Minus,
}

/// Evaluates one of the three lower estimates at the shift `x`, with
/// `alpha0 = alpha - r x / n` and `alpha1 = alpha + s x / n`.
pub fn eval_l(params: &ExpansionParams, which: LFunction, x: Real) -> Real {
    let n = real_u(params.n());
    let (r, s) = (real_u(params.r), real_u(params.s));
    let t = real(&params.t());
    let a = params.alpha_real();
    let one = Real::from(1.0);
    let a0 = a - r * x / n;
    let a1 = a + s * x / n;
    match which {
        LFunction::L1 => t * x + s * params.c0() * a0 * (one - a0) + r * params.c1() * a1 * (one - a1),
        LFunction::L2 => (t + r) * x + r * params.c1() * a1 * (one - a1),
        LFunction::L2Minus => (t + r) * x + r * params.c() * a1 * (one - a1),
    }
}

/// `x^2 + b x + c`
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonicQuadratic {
    pub b: Real,
    pub c: Real,
}

impl MonicQuadratic {
    pub fn new(b: impl Into<Real>, c: impl Into<Real>) -> Self {
        MonicQuadratic { b: b.into(), c: c.into() }
    }

    /// Normalizes `a x^2 + b x + c`.
    pub fn from_coefficients(a: Real, b: Real, c: Real) -> Result<Self> {
        if a == 0.0 {
            return Err(Error::Degenerate("leading coefficient is zero".into()));
        }
        Ok(MonicQuadratic { b: b / a, c: c / a })
    }

    pub fn eval(&self, x: Real) -> Real {
        (x + self.b) * x + self.c
    }

    pub fn discriminant(&self) -> Real {
        self.b * self.b - Real::from(4.0) * self.c
    }

    /// The two distinct real roots in increasing order.
    pub fn roots(&self) -> Option<(Real, Real)> {
        let d = self.discriminant();
        if d <= 0.0 {
            return None;
        }
        let sq = d.sqrt();
        let half = Real::from(0.5);
        if self.b == 0.0 {
            return Some((-sq * half, sq * half));
        }
        // avoid cancellation: take the larger-magnitude root first
        let q = if self.b > 0.0 { -(self.b + sq) * half } else { (sq - self.b) * half };
        let other = self.c / q;
        Some(if q < other { (q, other) } else { (other, q) })
    }

    fn pair(&self) -> [f64; 2] {
        [to_f64(self.b), to_f64(self.c)]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InterlaceVerdict {
    /// `[B, C]` of each quadratic.
    pub p1: [f64; 2],
    pub p2: [f64; 2],
    pub roots1: [f64; 2],
    pub roots2: [f64; 2],
    /// `(C1 - C2)^2 + (B1 - B2)(B1 C2 - B2 C1)`
    pub hypothesis: f64,
    pub hypothesis_holds: bool,
    /// `x1- < x2-` and `x1+ < x2+`
    pub root_order_holds: bool,
    /// Crossing point of the two quadratics.
    pub x0: f64,
    pub p1_at_x0: f64,
    /// All hypotheses of the criterion hold, so it certifies `x2- < x1+`.
    pub criterion_holds: bool,
    /// `x2- < x1+` read off the roots.
    pub direct_holds: bool,
    /// Relative margin of `x1+ - x2-`.
    pub margin: f64,
    pub inconclusive: bool,
}

impl InterlaceVerdict {
    /// The criterion never certifies a false conclusion.
    pub fn consistent(&self) -> bool {
        !self.criterion_holds || self.direct_holds
    }
}

pub fn interlace_check(p1: &MonicQuadratic, p2: &MonicQuadratic) -> Result<InterlaceVerdict> {
    let (Some((x1m, x1p)), Some((x2m, x2p))) = (p1.roots(), p2.roots()) else {
        return Err(Error::Precondition("both quadratics need two distinct real roots".into()));
    };
    let db = p1.b - p2.b;
    if db == 0.0 {
        return Err(Error::Degenerate("B1 = B2, the quadratics do not cross".into()));
    }
    let dc = p1.c - p2.c;
    let cross = db * (p1.b * p2.c - p2.b * p1.c);
    let hypothesis = dc * dc + cross;
    let hyp_scale = 1f64.max(to_f64(dc * dc).abs()).max(to_f64(cross).abs());
    let hypothesis_holds = hypothesis < 0.0;
    let root_order_holds = x1m < x2m && x1p < x2p;
    let x0 = -dc / db;
    let margin = relative_margin(x1p, x2m);
    let inconclusive = margin.abs() < INCONCLUSIVE_MARGIN || (to_f64(hypothesis) / hyp_scale).abs() < INCONCLUSIVE_MARGIN;
    Ok(InterlaceVerdict {
        p1: p1.pair(),
        p2: p2.pair(),
        roots1: [to_f64(x1m), to_f64(x1p)],
        roots2: [to_f64(x2m), to_f64(x2p)],
        hypothesis: to_f64(hypothesis),
        hypothesis_holds,
        root_order_holds,
        x0: to_f64(x0),
        p1_at_x0: to_f64(p1.eval(x0)),
        criterion_holds: hypothesis_holds && root_order_holds,
        direct_holds: x2m < x1p,
        margin,
        inconclusive,
    })
}

/// Coefficients `(a, b, c)` of the quadratic `f`, read off `f(-1), f(0), f(1)`.
fn quadratic_through(f: impl Fn(Real) -> Real) -> (Real, Real, Real) {
    let (m, z, p) = (f(Real::from(-1.0)), f(Real::from(0.0)), f(Real::from(1.0)));
    let half = Real::from(0.5);
    ((p + m) * half - z, (p - m) * half, z)
}

/// The two monic normalizations used in the root claim: `P1` is a negative
/// multiple of `L1 - L2`, `P2` a negative multiple of `L2^- - Q`, both in
/// `x^2 + B x + C` form.
pub fn normalized_quadratics(params: &ExpansionParams) -> (MonicQuadratic, MonicQuadratic) {
    let n = real_u(params.n());
    let (r, s) = (real_u(params.r), real_u(params.s));
    let a = params.alpha_real();
    let one = Real::from(1.0);
    let two = Real::from(2.0);
    let aa = a * (one - a);
    let t = real(&params.t());
    let b1 = n / r * (one - two * a) + n * n / (r * s * params.c0());
    let c1 = n * n / (r * r) * aa;
    let b2 = n / s * (one - two * a) + n * n * (t + r) / (r * s * s * params.c());
    let c2 = n * n / (r * s) * aa;
    (MonicQuadratic { b: b1, c: -c1 }, MonicQuadratic { b: -b2, c: c2 })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootsDetail {
    pub x1_minus: f64,
    pub x1_plus: f64,
    pub x2_minus: f64,
    pub x2_plus: f64,
    /// `x1- < 0 < x1+ < x*`
    pub x1_bracket: bool,
    /// `0 < x2- < x* < x2+`
    pub x2_bracket: bool,
    /// `x2- < x1+`
    pub interlaced: bool,
    /// Largest relative disagreement between direct roots and roots of the
    /// monic normalizations.
    pub normalization_error: f64,
    pub normalization_agrees: bool,
    pub interlace: InterlaceVerdict,
    /// Smallest relative margin among the strict inequalities checked.
    pub min_margin: f64,
    pub inconclusive: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClaimRootsReport {
    pub params: ExpansionParams,
    pub q: f64,
    pub xstar: f64,
    pub l1_at_xstar: f64,
    pub l2_at_zero: f64,
    /// `L1(x*) < Q` and `L2(0) < Q`; otherwise the claim is vacuous here.
    pub preconditions_hold: bool,
    pub detail: Option<RootsDetail>,
}

impl ClaimRootsReport {
    /// Vacuous instances hold.
    pub fn holds(&self) -> bool {
        self.detail.as_ref().is_none_or(|d| {
            d.x1_bracket && d.x2_bracket && d.interlaced && d.normalization_agrees && d.interlace.consistent()
        })
    }

    pub fn inconclusive(&self) -> bool {
        self.detail.as_ref().is_some_and(|d| d.inconclusive)
    }
}

fn roots_agree(a: (Real, Real), b: (Real, Real)) -> f64 {
    relative_margin(a.0, b.0).abs().max(relative_margin(a.1, b.1).abs())
}

pub fn claim_roots(params: &ExpansionParams) -> Result<ClaimRootsReport> {
    let q = params.q();
    let xstar = real(&params.xstar());
    let l1_star = eval_l(params, LFunction::L1, xstar);
    let l2_zero = eval_l(params, LFunction::L2, Real::from(0.0));
    let preconditions_hold = l1_star < q && l2_zero < q;
    let mut report = ClaimRootsReport {
        params: params.clone(),
        q: to_f64(q),
        xstar: to_f64(xstar),
        l1_at_xstar: to_f64(l1_star),
        l2_at_zero: to_f64(l2_zero),
        preconditions_hold,
        detail: None,
    };
    if !preconditions_hold {
        return Ok(report);
    }

    let (a1, b1, c1) =
        quadratic_through(|x| eval_l(params, LFunction::L1, x) - eval_l(params, LFunction::L2, x));
    let (a2, b2, c2) = quadratic_through(|x| eval_l(params, LFunction::L2Minus, x) - q);
    let direct1 = MonicQuadratic::from_coefficients(a1, b1, c1)?;
    let direct2 = MonicQuadratic::from_coefficients(a2, b2, c2)?;
    let no_roots = || Error::Internal("quadratic from the claim has no real roots".into());
    let (x1m, x1p) = direct1.roots().ok_or_else(no_roots)?;
    let (x2m, x2p) = direct2.roots().ok_or_else(no_roots)?;

    let (p1, p2) = normalized_quadratics(params);
    let normalization_error = roots_agree((x1m, x1p), p1.roots().ok_or_else(no_roots)?)
        .max(roots_agree((x2m, x2p), p2.roots().ok_or_else(no_roots)?));
    let interlace = interlace_check(&p1, &p2)?;

    let zero = Real::from(0.0);
    let margins = [
        relative_margin(zero, x1m),
        relative_margin(x1p, zero),
        relative_margin(xstar, x1p),
        relative_margin(x2m, zero),
        relative_margin(xstar, x2m),
        relative_margin(x2p, xstar),
        relative_margin(x1p, x2m),
    ];
    let min_margin = margins.iter().copied().fold(f64::INFINITY, f64::min);
    report.detail = Some(RootsDetail {
        x1_minus: to_f64(x1m),
        x1_plus: to_f64(x1p),
        x2_minus: to_f64(x2m),
        x2_plus: to_f64(x2p),
        x1_bracket: x1m < zero && zero < x1p && x1p < xstar,
        x2_bracket: zero < x2m && x2m < xstar && xstar < x2p,
        interlaced: x2m < x1p,
        normalization_error,
        normalization_agrees: normalization_error < ROOT_AGREEMENT,
        inconclusive: margins.iter().any(|m| m.abs() < INCONCLUSIVE_MARGIN) || interlace.inconclusive,
        interlace,
        min_margin,
    });
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClaimAlphaReport {
    pub params: ExpansionParams,
    pub l1_at_xstar: f64,
    pub q: f64,
    /// `L1(x*) < Q`
    pub premise: bool,
    /// `(t + r) / (s c)`
    pub threshold: f64,
    /// `alpha < threshold`
    pub conclusion: bool,
    pub holds: bool,
}

pub fn claim_alpha(params: &ExpansionParams) -> ClaimAlphaReport {
    let q = params.q();
    let l1_star = eval_l(params, LFunction::L1, real(&params.xstar()));
    let threshold = (real(&params.t()) + real_u(params.r)) / (real_u(params.s) * params.c());
    let premise = l1_star < q;
    let conclusion = params.alpha_real() < threshold;
    ClaimAlphaReport {
        params: params.clone(),
        l1_at_xstar: to_f64(l1_star),
        q: to_f64(q),
        premise,
        threshold: to_f64(threshold),
        conclusion,
        holds: !premise || conclusion,
    }
}

/// `c^2 < c0^2 <= c1^2`, exactly.
pub fn eq8_holds(r: u64, s: u64) -> bool {
    let n = (r + s) as i64;
    let (ri, si) = (r as i64, s as i64);
    let c = rat(n, ri * si);
    let c0 = rat(n - 1, ri * (si - 1));
    let c1 = rat(n - 1, (ri - 1) * si);
    c < c0 && c0 <= c1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuxChainReport {
    pub r: u64,
    pub s: u64,
    #[serde(with = "rational_string")]
    pub c_sq: Rational,
    #[serde(with = "rational_string")]
    pub c0_sq: Rational,
    #[serde(with = "rational_string")]
    pub c1_sq: Rational,
    /// `c < c0 <= c1`, decided on the squares.
    pub constants_ordered: bool,
    #[serde(with = "rational_string")]
    pub t: Rational,
    pub t_nonnegative: bool,
    /// `K = t (1/r + 1/s) + r/s`; `rs(c + 1) <= (t + r) n` iff `c <= K`.
    #[serde(with = "rational_string")]
    pub k: Rational,
    pub linear_step_holds: bool,
    /// `(t + r)/(sc) - (r c0 - t)/(n c0 - s c)`
    pub alpha_threshold_margin: f64,
    pub alpha_threshold_holds: bool,
    /// The rational expression whose positivity implies the discriminant
    /// condition.
    #[serde(with = "rational_string")]
    pub reduction: Rational,
    pub reduction_positive: bool,
    /// Right side minus left side of the discriminant condition.
    pub discriminant_margin: f64,
    pub discriminant_holds: bool,
    pub holds: bool,
}

pub fn verify_aux_chain(r: u64, s: u64) -> Result<AuxChainReport> {
    if r < 2 || s < r {
        return Err(Error::Precondition(format!("need 2 <= r <= s, got r={r}, s={s}")));
    }
    let p = ExpansionParams::new(r, s, Rational::zero())?;
    let (c_sq, c0_sq, c1_sq) = (p.c_sq(), p.c0_sq(), p.c1_sq());
    let t = p.t();
    let rr = rat(r as i64, 1);
    let ss = rat(s as i64, 1);
    let nn = rat((r + s) as i64, 1);
    let h = rat(1, r as i64) + rat(1, s as i64);
    let k = &t * &h + &rr / &ss;
    let linear_step_holds = !k.is_negative() && &k * &k >= c_sq;

    let (c, c0) = (p.c(), p.c0());
    let (tr, rf, sf, nf) = (real(&t), real_u(r), real_u(s), real_u(r + s));
    let one = Real::from(1.0);
    let lhs17 = (rf * c0 - tr) / (nf * c0 - sf * c);
    let rhs17 = (tr + rf) / (sf * c);
    let alpha_threshold_margin = relative_margin(rhs17, lhs17);

    let reduction = (&rr * &rr * &t + &t + &rr) * (&t + &rr) * &rr * &ss / &nn
        + (&ss * &t - &rr * &rr) * &rr * (&ss - Rational::one()) / (&nn - Rational::one())
        - &ss * &ss / rat(4, 1);

    let u = (tr + rf) / (rf * c) - one / c0;
    let lhs18 = {
        let v = sf / (Real::from(2.0) * rf) + u;
        v * v
    };
    let rhs18 = sf / rf * (one + (tr + rf) / (sf * c) + one / c0) * u;
    let discriminant_margin = relative_margin(rhs18, lhs18);

    let constants_ordered = c_sq < c0_sq && c0_sq <= c1_sq;
    let report = AuxChainReport {
        r,
        s,
        constants_ordered,
        t_nonnegative: !t.is_negative(),
        linear_step_holds,
        alpha_threshold_holds: alpha_threshold_margin > 0.0,
        alpha_threshold_margin,
        reduction_positive: reduction.is_positive(),
        discriminant_holds: discriminant_margin > 0.0,
        discriminant_margin,
        holds: false,
        c_sq,
        c0_sq,
        c1_sq,
        t,
        k,
        reduction,
    };
    let holds = report.constants_ordered
        && report.t_nonnegative
        && report.linear_step_holds
        && report.alpha_threshold_holds
        && report.reduction_positive
        && report.discriminant_holds;
    Ok(AuxChainReport { holds, ..report })
}

/// Tallies of a sweep of both claims over `2 <= r <= s <= max_rs` and a list
/// of densities.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ClaimSweep {
    pub instances: u64,
    pub vacuous: u64,
    pub checked: u64,
    /// `x2- < x1+` failed.
    pub interlace_failures: u64,
    /// Any other part of the root claim failed.
    pub bracket_failures: u64,
    pub normalization_failures: u64,
    /// Criterion certified a conclusion the roots contradict.
    pub criterion_inconsistent: u64,
    /// Criterion hypotheses failed although the roots interlace.
    pub criterion_not_applicable: u64,
    pub inconclusive: u64,
    pub alpha_claim_failures: u64,
    pub min_margin: f64,
    /// First failing instance, if any.
    pub first_failure: Option<ExpansionParams>,
}

impl ClaimSweep {
    pub fn passed(&self) -> bool {
        self.interlace_failures == 0
            && self.bracket_failures == 0
            && self.normalization_failures == 0
            && self.criterion_inconsistent == 0
            && self.inconclusive == 0
            && self.alpha_claim_failures == 0
    }

    fn merge(mut self, o: ClaimSweep) -> ClaimSweep {
        self.instances += o.instances;
        self.vacuous += o.vacuous;
        self.checked += o.checked;
        self.interlace_failures += o.interlace_failures;
        self.bracket_failures += o.bracket_failures;
        self.normalization_failures += o.normalization_failures;
        self.criterion_inconsistent += o.criterion_inconsistent;
        self.criterion_not_applicable += o.criterion_not_applicable;
        self.inconclusive += o.inconclusive;
        self.alpha_claim_failures += o.alpha_claim_failures;
        self.min_margin = self.min_margin.min(o.min_margin);
        self.first_failure = self.first_failure.or(o.first_failure);
        self
    }
}

/// `alpha = k/20` for `k = 1..=19`.
pub fn default_alphas() -> Vec<Rational> {
    (1..20).map(|k| rat(k, 20)).collect()
}

pub fn sweep_claims(max_rs: u64, alphas: &[Rational], workers: usize) -> Result<ClaimSweep> {
    let pairs: Vec<(u64, u64)> = (2..=max_rs).flat_map(|r| (r..=max_rs).map(move |s| (r, s))).collect();
    let empty = || ClaimSweep { min_margin: f64::INFINITY, ..Default::default() };
    let pool = crate::search::pool(workers)?;
    let parts: Vec<Result<ClaimSweep>> = pool.install(|| {
        pairs
            .par_iter()
            .map(|&(r, s)| {
                let mut acc = empty();
                for alpha in alphas {
                    let p = ExpansionParams::new(r, s, alpha.clone())?;
                    acc.instances += 1;
                    let mut failed = false;
                    if !claim_alpha(&p).holds {
                        acc.alpha_claim_failures += 1;
                        failed = true;
                    }
                    let report = claim_roots(&p)?;
                    match &report.detail {
                        None => acc.vacuous += 1,
                        Some(d) => {
                            acc.checked += 1;
                            acc.min_margin = acc.min_margin.min(d.min_margin);
                            let tallies = [
                                (!d.interlaced, &mut acc.interlace_failures),
                                (!(d.x1_bracket && d.x2_bracket), &mut acc.bracket_failures),
                                (!d.normalization_agrees, &mut acc.normalization_failures),
                                (!d.interlace.consistent(), &mut acc.criterion_inconsistent),
                                (d.inconclusive, &mut acc.inconclusive),
                            ];
                            for (bad, counter) in tallies {
                                if bad {
                                    *counter += 1;
                                    failed = true;
                                }
                            }
                            if d.interlaced && !d.interlace.criterion_holds {
                                acc.criterion_not_applicable += 1;
                            }
                        }
                    }
                    if failed && acc.first_failure.is_none() {
                        acc.first_failure = Some(p);
                    }
                }
                Ok(acc)
            })
            .collect()
    });
    // in-order merge keeps first_failure deterministic
    parts.into_iter().try_fold(empty(), |acc, part| Ok(acc.merge(part?)))
}

/// Pairs `2 <= r <= s <= max_rs` violating `c < c0 <= c1`.
pub fn eq8_violations(max_rs: u64) -> Vec<(u64, u64)> {
    (2..=max_rs)
        .into_par_iter()
        .flat_map_iter(|r| (r..=max_rs).filter(move |&s| !eq8_holds(r, s)).map(move |s| (r, s)))
        .collect()
}

/// Compares two reals to within `tol`.
pub fn approx_eq(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1() -> ExpansionParams {
        ExpansionParams::new(2, 4, rat(2, 5)).unwrap()
    }

    #[test]
    fn figure_instance_values() {
        let p = fig1();
        assert_eq!(p.xstar(), rat(9, 10));
        assert_eq!(p.t(), rat(14, 15));
        assert!(approx_eq(to_f64(p.q()), 1.2471, 1e-4));
        let l1 = to_f64(eval_l(&p, LFunction::L1, Real::from(0.0)));
        assert!(approx_eq(l1, 1.4130, 1e-4), "{l1}");
        assert!(l1 > to_f64(p.q()));
        let l2m = to_f64(eval_l(&p, LFunction::L2Minus, real(&p.xstar())));
        assert!(approx_eq(l2m, 2.64, 1e-12), "{l2m}");
        // plotted L1 formula at x = 0.5, with its printed 4-digit constants
        let x = 0.5;
        let plotted =
            0.9333 * x + 0.9129 * 4.0 * (0.4 - 0.3333 * x) * (0.6 + 0.3333 * x) + 1.118 * 2.0 * (0.4 + 0.6667 * x) * (0.6 - 0.6667 * x);
        assert!(approx_eq(to_f64(eval_l(&p, LFunction::L1, Real::from(x))), plotted, 1e-3));
    }

    #[test]
    fn figure_instance_roots() {
        let report = claim_roots(&fig1()).unwrap();
        assert!(report.preconditions_hold);
        assert!(report.holds() && !report.inconclusive());
        let d = report.detail.unwrap();
        assert!(approx_eq(d.x2_minus, 0.2821, 1e-3), "{}", d.x2_minus);
        assert!(approx_eq(d.x1_plus, 0.3664, 1e-3), "{}", d.x1_plus);
        assert!(d.interlace.criterion_holds && d.interlace.direct_holds);
        assert!(approx_eq(d.interlace.p1[0], 5.5295, 1e-4));
        assert!(approx_eq(d.interlace.p1[1], -2.16, 1e-12));
        assert!(approx_eq(d.interlace.p2[0], -4.1105, 1e-4));
        assert!(approx_eq(d.interlace.p2[1], 1.08, 1e-12));
        assert!(d.normalization_error < 1e-15, "{}", d.normalization_error);
    }

    #[test]
    fn interlace_examples() {
        let v = interlace_check(&MonicQuadratic::new(5.5295, -2.16), &MonicQuadratic::new(-4.1105, 1.08)).unwrap();
        assert!(v.criterion_holds && v.direct_holds);
        assert!(approx_eq(v.roots2[0], 0.2821, 1e-3) && approx_eq(v.roots1[1], 0.3664, 1e-3));

        // x^2 - 1 and x^2 - 2x: roots (-1, 1) and (0, 2)
        let v = interlace_check(&MonicQuadratic::new(0.0, -1.0), &MonicQuadratic::new(-2.0, 0.0)).unwrap();
        assert_eq!(v.roots1, [-1.0, 1.0]);
        assert_eq!(v.roots2, [0.0, 2.0]);
        assert_eq!(v.hypothesis, -3.0);
        assert_eq!(v.x0, 0.5);
        assert_eq!(v.p1_at_x0, -0.75);
        assert!(v.criterion_holds && v.direct_holds && v.consistent() && !v.inconclusive);

        let same_b = interlace_check(&MonicQuadratic::new(1.0, -1.0), &MonicQuadratic::new(1.0, -2.0));
        assert!(matches!(same_b, Err(Error::Degenerate(_))));
        let no_roots = interlace_check(&MonicQuadratic::new(0.0, 1.0), &MonicQuadratic::new(1.0, -2.0));
        assert!(matches!(no_roots, Err(Error::Precondition(_))));
    }

    #[test]
    fn hypothesis_matches_unsigned_form() {
        // x^2 + B1 x - C1 and x^2 - B2 x + C2; small integers keep f64 exact
        for (b1, c1, b2, c2) in [(1.0, 2.0, 3.0, 1.0), (5.0, 1.0, 7.0, 2.0), (2.0, 3.0, 4.0, 1.0), (1.0, 1.0, 6.0, 2.0)] {
            let v = interlace_check(&MonicQuadratic::new(b1, -c1), &MonicQuadratic::new(-b2, c2)).unwrap();
            let unsigned = (c1 + c2) * (c1 + c2) - (b1 + b2) * (b2 * c1 - b1 * c2);
            assert_eq!(v.hypothesis, unsigned);
        }
    }

    #[test]
    fn stable_roots() {
        // x^2 - (1e8 + 1e-8) x + 1 has roots 1e-8 and 1e8
        let q = MonicQuadratic::new(-(Real::from(1e8) + Real::from(1e-8)), 1.0);
        let (a, b) = q.roots().unwrap();
        assert!((to_f64(a) - 1e-8).abs() < 1e-22);
        assert!((to_f64(b) - 1e8).abs() < 1e-6);
        assert!(MonicQuadratic::new(2.0, 1.0).roots().is_none());
    }

    #[test]
    fn degenerate_params() {
        assert!(matches!(ExpansionParams::new(1, 4, rat(1, 2)), Err(Error::Degenerate(_))));
        assert!(matches!(ExpansionParams::new(3, 1, rat(1, 2)), Err(Error::Degenerate(_))));
        assert!(ExpansionParams::new(3, 3, rat(3, 2)).is_err());
    }

    #[test]
    fn vacuous_instances() {
        // alpha near 1: L1(x*) >= Q
        let p = ExpansionParams::new(2, 4, rat(99, 100)).unwrap();
        let report = claim_roots(&p).unwrap();
        assert!(!report.preconditions_hold && report.detail.is_none() && report.holds());
        let a = claim_alpha(&p);
        assert!(!a.premise && a.holds);
    }

    #[test]
    fn claim_alpha_figure_instance() {
        let a = claim_alpha(&fig1());
        assert!(approx_eq(a.threshold, 0.8468, 1e-4), "{}", a.threshold);
        assert!(a.conclusion && a.holds);
    }

    #[test]
    fn aux_chain_examples() {
        let v = verify_aux_chain(2, 4).unwrap();
        assert_eq!((v.c_sq.clone(), v.c0_sq.clone(), v.c1_sq.clone()), (rat(3, 4), rat(5, 6), rat(5, 4)));
        assert!(v.holds, "{v:?}");
        let v = verify_aux_chain(2, 2).unwrap();
        assert_eq!(v.t, Rational::zero());
        assert!(v.holds, "{v:?}");
        // same rational as the appendix identity at (2, 3), before clearing
        assert!(verify_aux_chain(2, 3).unwrap().reduction.is_positive());
        assert!(verify_aux_chain(1, 3).is_err());
        assert!(verify_aux_chain(4, 3).is_err());
        for r in 2..=100 {
            for s in r..=100 {
                let v = verify_aux_chain(r, s).unwrap();
                assert!(v.holds, "{v:?}");
            }
        }
    }

    #[test]
    fn eq8_small_sweep() {
        assert!(eq8_violations(120).is_empty());
        assert!(eq8_holds(2, 2) && eq8_holds(5, 9));
    }

    #[test]
    fn claim_grid_small() {
        let sweep = sweep_claims(12, &default_alphas(), 2).unwrap();
        assert!(sweep.passed(), "{sweep:?}");
        assert!(sweep.checked > 0);
        assert_eq!(sweep.instances, 66 * 19);
    }
}
