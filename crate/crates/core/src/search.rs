//! Exhaustive oracles, seeded sampling and a local-search probe.
//!
//! Exhaustive ranges are cut into a fixed number of chunks, so results never
//! depend on the worker count.

use std::collections::BTreeMap;
use std::time::Instant;

use num_traits::{ToPrimitive, Zero};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boundary::{ball_boundary, padded_boundary, profile_ball_boundary};
use crate::bounds::{lemma7_check, local_expansion_check, thm1_bound_check, Lemma7Bound};
use crate::constructions::{ball_halfspace, sized_ball_halfspace};
use crate::exactmath::{ball_size, binom, fmt_rational, natural_string, rat, ratio, Natural, Rational, Surd};
use crate::families::{layer_sets, ExplicitFamily, Family, FamilyJson, PaddedProfileFamily, ProfileFamily, VertexSet};
use crate::{Error, Result};

/// Largest slice searched exhaustively (`2^20` subfamilies).
pub const MAX_SLICE: u32 = 20;
pub const DEFAULT_BUDGET: u128 = 1_000_000_000;
const CHUNKS: u64 = 256;

/// An exact value with a decimal rendering for reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Statistic {
    pub exact: String,
    pub decimal: String,
}

impl Statistic {
    pub fn from_surd(s: &Surd) -> Self {
        Statistic { exact: s.to_string(), decimal: s.to_decimal(30) }
    }

    pub fn from_rational(x: &Rational) -> Self {
        Self::from_surd(&Surd::from_rational(x.clone()))
    }

    pub fn from_natural(x: &Natural) -> Self {
        Statistic { exact: x.to_string(), decimal: x.to_string() }
    }

    /// `sqrt(x)` for a nonnegative rational `x = p/q`, as `sqrt(pq)/q`.
    fn sqrt_of(x: &Rational) -> Self {
        let p = x.numer().magnitude().clone();
        let q = x.denom().magnitude().clone();
        let s = Surd::sqrt_term(ratio(&Natural::from(1u32), &q), p * q);
        Self::from_surd(&s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub kind: String,
    pub params: BTreeMap<String, String>,
    /// Families examined.
    #[serde(with = "natural_string")]
    pub examined: Natural,
    pub violations: u64,
    pub counters: BTreeMap<String, u64>,
    pub statistics: BTreeMap<String, Statistic>,
    pub witnesses: BTreeMap<String, FamilyJson>,
    pub wall_time_secs: f64,
}

impl SearchReport {
    fn new(kind: &str, params: &[(&str, String)]) -> Self {
        SearchReport {
            kind: kind.into(),
            params: params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            examined: Natural::zero(),
            violations: 0,
            counters: BTreeMap::new(),
            statistics: BTreeMap::new(),
            witnesses: BTreeMap::new(),
            wall_time_secs: 0.0,
        }
    }

    /// The same report with timing zeroed, for reproducibility comparisons.
    pub fn without_timing(&self) -> Self {
        SearchReport { wall_time_secs: 0.0, ..self.clone() }
    }
}

pub(crate) fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Internal(e.to_string()))
}

/// Splits `0..total` into at most `CHUNKS` contiguous ranges.
fn chunk_ranges(total: u64) -> Vec<(u64, u64)> {
    let chunks = CHUNKS.min(total.max(1));
    (0..chunks).map(|i| (total * i / chunks, total * (i + 1) / chunks)).collect()
}

/// Bitset over the members of a layer.
#[derive(Clone, Copy)]
struct Bits<const W: usize>([u64; W]);

impl<const W: usize> Default for Bits<W> {
    fn default() -> Self {
        Bits([0; W])
    }
}

struct SliceIndex {
    n: u32,
    r: u32,
    members: Vec<VertexSet>,
    lower_len: usize,
    upper_len: usize,
    /// Per member, the positions of its lower and upper neighbours.
    lower: Vec<Vec<u32>>,
    upper: Vec<Vec<u32>>,
}

impl SliceIndex {
    fn new(n: u32, r: u32) -> Result<Self> {
        if r == 0 || r >= n {
            return Err(Error::Precondition(format!("need 1 <= r <= n-1, got n={n}, r={r}")));
        }
        let size = binom(n as u64, r as u64);
        if size > Natural::from(MAX_SLICE) {
            return Err(Error::SliceTooLarge { n, r, size, max: MAX_SLICE });
        }
        let members = layer_sets(n, r);
        let position = |layer: &[VertexSet]| {
            let map: std::collections::HashMap<u32, u32> =
                layer.iter().enumerate().map(|(i, x)| (x.bits(), i as u32)).collect();
            map
        };
        let lower_layer = layer_sets(n, r - 1);
        let upper_layer = layer_sets(n, r + 1);
        let lower_pos = position(&lower_layer);
        let upper_pos = position(&upper_layer);
        let lower = members
            .iter()
            .map(|x| x.elements().into_iter().map(|e| lower_pos[&x.without(e).bits()]).collect())
            .collect();
        let upper = members
            .iter()
            .map(|x| (1..=n).filter(|&e| !x.contains(e)).map(|e| upper_pos[&x.with(e).bits()]).collect())
            .collect();
        Ok(SliceIndex { n, r, members, lower_len: lower_layer.len(), upper_len: upper_layer.len(), lower, upper })
    }

    fn family(&self, mask: u64) -> ExplicitFamily {
        let members = (0..self.members.len()).filter(|i| mask >> i & 1 == 1).map(|i| self.members[i]);
        ExplicitFamily::with_layer(self.n, self.r, members).expect("slice members are valid")
    }

    /// Runs `visit(mask, size, lower, upper)` over `masks`, with shadow sizes.
    fn scan<const W: usize>(&self, masks: (u64, u64), mut visit: impl FnMut(u64, u32, u32, u32)) {
        let table = |adj: &[Vec<u32>]| -> Vec<Bits<W>> {
            adj.iter()
                .map(|ps| {
                    let mut b = Bits::<W>::default();
                    for &p in ps {
                        b.0[p as usize / 64] |= 1 << (p % 64);
                    }
                    b
                })
                .collect()
        };
        let lower = table(&self.lower);
        let upper = table(&self.upper);
        for mask in masks.0..masks.1 {
            let (mut lo, mut up) = (Bits::<W>::default(), Bits::<W>::default());
            let mut rest = mask;
            while rest != 0 {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                for w in 0..W {
                    lo.0[w] |= lower[i].0[w];
                    up.0[w] |= upper[i].0[w];
                }
            }
            let count = |b: &Bits<W>| b.0.iter().map(|w| w.count_ones()).sum::<u32>();
            visit(mask, mask.count_ones(), count(&lo), count(&up));
        }
    }

    fn scan_any(&self, masks: (u64, u64), visit: impl FnMut(u64, u32, u32, u32)) {
        match self.lower_len.max(self.upper_len).div_ceil(64) {
            0 | 1 => self.scan::<1>(masks, visit),
            2 => self.scan::<2>(masks, visit),
            3 => self.scan::<3>(masks, visit),
            _ => self.scan::<4>(masks, visit),
        }
    }
}

/// Per-size record: smallest observed value and the first mask attaining it.
type PerSize = Vec<Option<(u32, u64)>>;

fn merge_per_size(into: &mut PerSize, other: &PerSize) {
    for (slot, o) in into.iter_mut().zip(other) {
        match (*slot, *o) {
            (None, Some(x)) => *slot = Some(x),
            (Some((v, _)), Some((w, m))) if w < v => *slot = Some((w, m)),
            _ => {}
        }
    }
}

fn note(slot: &mut Option<(u32, u64)>, value: u32, mask: u64) {
    if slot.map_or(true, |(v, _)| value < v) {
        *slot = Some((value, mask));
    }
}

/// Checks the local expansion inequality on every subfamily of `S_n(r)`.
///
/// The boundary of `A ⊆ S_n(r)` in `Q_n` is the disjoint union of its lower
/// and upper shadows.
pub fn exhaustive_verify_local_expansion(n: u32, r: u32, workers: usize) -> Result<SearchReport> {
    let start = Instant::now();
    let index = SliceIndex::new(n, r)?;
    let slots = index.members.len();
    let total = 1u64 << slots;
    let max_boundary = index.lower_len + index.upper_len;
    // verdicts depend only on (|A|, |∂A|)
    let holds: Vec<Vec<bool>> = (0..=slots)
        .map(|a| {
            (0..=max_boundary)
                .map(|b| local_expansion_check(n, r, &Natural::from(a), &Natural::from(b)).map(|v| v.holds))
                .collect::<Result<Vec<bool>>>()
        })
        .collect::<Result<_>>()?;
    let parts: Vec<(u64, PerSize)> = pool(workers)?.install(|| {
        chunk_ranges(total)
            .into_par_iter()
            .map(|range| {
                let mut violations = 0u64;
                let mut best: PerSize = vec![None; slots + 1];
                index.scan_any(range, |mask, size, lo, up| {
                    let b = lo + up;
                    if !holds[size as usize][b as usize] {
                        violations += 1;
                    }
                    note(&mut best[size as usize], b, mask);
                });
                (violations, best)
            })
            .collect()
    });
    let mut violations = 0;
    let mut best: PerSize = vec![None; slots + 1];
    for (v, b) in &parts {
        violations += v;
        merge_per_size(&mut best, b);
    }
    let mut report = SearchReport::new(
        "local-expansion",
        &[("n", n.to_string()), ("r", r.to_string())],
    );
    report.examined = Natural::from(total);
    report.violations = violations;
    let slack_of = |size: usize, b: u32| -> Result<Surd> {
        Ok(local_expansion_check(n, r, &Natural::from(size), &Natural::from(b))?.slack)
    };
    for (key, sizes) in [("min_slack", 0..=slots), ("min_slack_nontrivial", 1..=slots.saturating_sub(1))] {
        let mut winner: Option<(Surd, u64)> = None;
        for size in sizes {
            let Some((b, mask)) = best[size] else { continue };
            let slack = slack_of(size, b)?;
            let better = match &winner {
                None => true,
                Some((w, wm)) => match slack.checked_cmp(w) {
                    Some(std::cmp::Ordering::Less) => true,
                    Some(std::cmp::Ordering::Equal) => mask < *wm,
                    _ => false,
                },
            };
            if better {
                winner = Some((slack, mask));
            }
        }
        if let Some((slack, mask)) = winner {
            report.statistics.insert(key.into(), Statistic::from_surd(&slack));
            report.witnesses.insert(key.into(), index.family(mask).into());
        }
    }
    report.wall_time_secs = start.elapsed().as_secs_f64();
    Ok(report)
}

/// Checks both normalized matching inequalities on every subfamily of `S_n(r)`.
pub fn exhaustive_verify_nm(n: u32, r: u32, workers: usize) -> Result<SearchReport> {
    let start = Instant::now();
    let index = SliceIndex::new(n, r)?;
    let slots = index.members.len();
    let total = 1u64 << slots;
    let (r64, s64) = (r as u64, (n - r) as u64);
    type Part = (u64, u64, PerSize, PerSize);
    let parts: Vec<Part> = pool(workers)?.install(|| {
        chunk_ranges(total)
            .into_par_iter()
            .map(|range| {
                let (mut low_bad, mut up_bad) = (0u64, 0u64);
                let mut low_best: PerSize = vec![None; slots + 1];
                let mut up_best: PerSize = vec![None; slots + 1];
                index.scan_any(range, |mask, size, lo, up| {
                    let a = size as u64;
                    if (lo as u64) * (s64 + 1) < r64 * a {
                        low_bad += 1;
                    }
                    if (up as u64) * (r64 + 1) < s64 * a {
                        up_bad += 1;
                    }
                    note(&mut low_best[size as usize], lo, mask);
                    note(&mut up_best[size as usize], up, mask);
                });
                (low_bad, up_bad, low_best, up_best)
            })
            .collect()
    });
    let (mut low_bad, mut up_bad) = (0, 0);
    let mut low_best: PerSize = vec![None; slots + 1];
    let mut up_best: PerSize = vec![None; slots + 1];
    for (l, u, lb, ub) in &parts {
        low_bad += l;
        up_bad += u;
        merge_per_size(&mut low_best, lb);
        merge_per_size(&mut up_best, ub);
    }
    let mut report = SearchReport::new("nm", &[("n", n.to_string()), ("r", r.to_string())]);
    report.examined = Natural::from(total);
    report.violations = low_bad + up_bad;
    report.counters.insert("lower_violations".into(), low_bad);
    report.counters.insert("upper_violations".into(), up_bad);
    // smallest shadow-to-family ratio over nonempty families
    for (key, best) in [("min_lower_ratio", &low_best), ("min_upper_ratio", &up_best)] {
        let mut winner: Option<(Rational, u64)> = None;
        for (size, slot) in best.iter().enumerate().skip(1) {
            let Some((v, mask)) = *slot else { continue };
            let q = rat(v as i64, size as i64);
            if winner.as_ref().map_or(true, |(w, wm)| q < *w || (q == *w && mask < *wm)) {
                winner = Some((q, mask));
            }
        }
        if let Some((q, mask)) = winner {
            report.statistics.insert(key.into(), Statistic::from_rational(&q));
            report.witnesses.insert(key.into(), index.family(mask).into());
        }
    }
    report.wall_time_secs = start.elapsed().as_secs_f64();
    Ok(report)
}

/// The ambient graph for boundary minimization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Ambient {
    Cube,
    Ball(u32),
}

/// Vertices of the ambient graph and, per vertex, the mask of its neighbours
/// (as positions in the vertex list).
fn ambient_graph(n: u32, ambient: Ambient) -> (Vec<VertexSet>, Vec<u64>) {
    let radius = match ambient {
        Ambient::Cube => n,
        Ambient::Ball(r) => r.min(n),
    };
    let vertices: Vec<VertexSet> = (0..=radius).flat_map(|k| layer_sets(n, k)).collect();
    let mut pos = vec![u32::MAX; 1 << n];
    for (i, v) in vertices.iter().enumerate() {
        pos[v.bits() as usize] = i as u32;
    }
    let nbrs = vertices
        .iter()
        .map(|v| {
            (1..=n)
                .map(|e| pos[v.toggle(e).bits() as usize])
                .filter(|&p| p != u32::MAX)
                .fold(0u64, |m, p| m | 1 << p)
        })
        .collect();
    (vertices, nbrs)
}

/// The `rank`-th `k`-subset of `0..u` in colex order, as a bitmask.
fn unrank_colex(mut rank: u64, k: u32, u: u32) -> u64 {
    let mut mask = 0u64;
    let mut hi = u;
    for j in (1..=k).rev() {
        // largest c with C(c, j) <= rank
        let mut c = j - 1;
        while c + 1 < hi && binom_u64(c as u64 + 1, j as u64) <= rank {
            c += 1;
        }
        rank -= binom_u64(c as u64, j as u64);
        mask |= 1 << c;
        hi = c;
    }
    mask
}

fn binom_u64(n: u64, k: u64) -> u64 {
    binom(n, k).to_u64().unwrap_or(u64::MAX)
}

/// Next mask with the same popcount (Gosper).
fn next_combination(x: u64) -> u64 {
    let c = x & x.wrapping_neg();
    let r = x + c;
    (((r ^ x) >> 2) / c) | r
}

/// Exact minimum vertex boundary over all `size`-subsets of the ambient graph,
/// `n <= 5`.
pub fn exhaustive_min_boundary(
    n: u32,
    size: u64,
    ambient: Ambient,
    budget: u128,
    workers: usize,
) -> Result<SearchReport> {
    let start = Instant::now();
    if n > 5 {
        return Err(Error::AmbientTooLarge { n, max: 5 });
    }
    if let Ambient::Ball(r) = ambient {
        if r > n {
            return Err(Error::Precondition(format!("R = {r} exceeds n = {n}")));
        }
    }
    let (vertices, nbrs) = ambient_graph(n, ambient);
    let u = vertices.len() as u32;
    if size > u as u64 {
        return Err(Error::Precondition(format!("size {size} exceeds the {u} vertices")));
    }
    let needed = binom(u as u64, size);
    if needed > Natural::from(budget) {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let total = needed.to_u64().expect("within budget");
    let k = size as u32;
    let parts: Vec<Option<(u32, u64)>> = pool(workers)?.install(|| {
        chunk_ranges(total)
            .into_par_iter()
            .map(|(lo, hi)| {
                if lo >= hi {
                    return None;
                }
                let mut mask = unrank_colex(lo, k, u);
                let mut best: Option<(u32, u64)> = None;
                for i in lo..hi {
                    let mut reach = 0u64;
                    let mut rest = mask;
                    while rest != 0 {
                        let v = rest.trailing_zeros() as usize;
                        rest &= rest - 1;
                        reach |= nbrs[v];
                    }
                    note(&mut best, (reach & !mask).count_ones(), mask);
                    if i + 1 < hi {
                        mask = next_combination(mask);
                    }
                }
                best
            })
            .collect()
    });
    let mut best: Option<(u32, u64)> = None;
    for p in parts.into_iter().flatten() {
        note(&mut best, p.0, p.1);
    }
    let ambient_label = match ambient {
        Ambient::Cube => "cube".to_string(),
        Ambient::Ball(r) => format!("ball({r})"),
    };
    let mut report = SearchReport::new(
        "min-boundary",
        &[("n", n.to_string()), ("size", size.to_string()), ("ambient", ambient_label)],
    );
    report.examined = Natural::from(total);
    if let Some((b, mask)) = best {
        let members = (0..u as usize).filter(|i| mask >> i & 1 == 1).map(|i| vertices[i]);
        let witness = ExplicitFamily::new(n, members)?;
        report.statistics.insert("min_boundary".into(), Statistic::from_natural(&Natural::from(b)));
        report.witnesses.insert("min_boundary".into(), witness.into());
    }
    report.wall_time_secs = start.elapsed().as_secs_f64();
    Ok(report)
}

/// Where sampled families come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Generator {
    /// Profile families with cells of `B_n(R)` switched on independently.
    RandomProfile,
    /// Explicit subsets of `B_n(R)`, `n <= 20`.
    RandomExplicit,
    /// Every `C(k)` plus `sized_ball_halfspace` at `samples` evenly spaced sizes.
    Construction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Thm1,
    Lemma7,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleConfig {
    pub generator: Generator,
    pub bound: BoundKind,
    pub n: u32,
    pub radius: u32,
    #[serde(with = "crate::exactmath::rational_string")]
    pub rho: Rational,
    pub samples: u64,
    pub seed: u64,
    pub assume_n0: Option<u64>,
    pub workers: usize,
}

pub const MAX_SAMPLED_EXPLICIT_N: u32 = 20;

enum Sample {
    Explicit(ExplicitFamily),
    Profile(ProfileFamily),
    Padded(PaddedProfileFamily),
}

impl Sample {
    fn size(&self) -> Natural {
        match self {
            Sample::Explicit(f) => f.size(),
            Sample::Profile(p) => p.size(),
            Sample::Padded(p) => p.size(),
        }
    }

    /// Exact boundary in `B_n(R)`, or the lower estimate for padded families.
    fn boundary_lower(&self, radius: u32) -> Result<Natural> {
        Ok(match self {
            Sample::Explicit(f) => Natural::from(ball_boundary(f, radius)?.len()),
            Sample::Profile(p) => profile_ball_boundary(p, radius)?.size(),
            Sample::Padded(p) => padded_boundary(p, Some(radius))?.lower,
        })
    }

    fn json(&self) -> FamilyJson {
        match self {
            Sample::Explicit(f) => f.clone().into(),
            Sample::Profile(p) => p.clone().into(),
            Sample::Padded(p) => p.clone().into(),
        }
    }
}

fn sample_rng(seed: u64, i: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i);
    rng
}

fn random_profile(n: u32, radius: u32, rng: &mut ChaCha8Rng) -> Result<ProfileFamily> {
    let p: f64 = rng.gen_range(0.05..0.95);
    ProfileFamily::from_predicate(n, n / 2, |a, b| a + b <= radius && rng.gen_bool(p))
}

fn random_explicit(n: u32, radius: u32, rng: &mut ChaCha8Rng) -> Result<ExplicitFamily> {
    let p: f64 = rng.gen_range(0.05..0.95);
    let members: Vec<VertexSet> =
        (0u32..1 << n).map(VertexSet).filter(|x| x.len() <= radius && rng.gen_bool(p)).collect();
    ExplicitFamily::new(n, members)
}

enum Outcome {
    Skipped,
    Trivial,
    Checked { holds: bool, ratio_sq: Option<Rational>, exploratory: bool },
}

fn evaluate(cfg: &SampleConfig, family: &Sample) -> Result<Outcome> {
    let size = family.size();
    let boundary = family.boundary_lower(cfg.radius)?;
    let squared_ratio = |bound: &Surd| -> Option<Rational> {
        // (boundary / (coeff sqrt(N)))²
        let denom = &bound.coeff * &bound.coeff * crate::exactmath::rat_from_nat(&bound.radicand);
        if denom.is_zero() {
            return None;
        }
        let b = crate::exactmath::rat_from_nat(&boundary);
        Some(&b * &b / denom)
    };
    match cfg.bound {
        BoundKind::Thm1 => match thm1_bound_check(cfg.n, cfg.radius, &cfg.rho, &size, &boundary, cfg.assume_n0) {
            Err(Error::Precondition(_)) => Ok(Outcome::Skipped),
            Err(e) => Err(e),
            Ok(v) => Ok(Outcome::Checked { holds: v.holds, ratio_sq: squared_ratio(&v.bound), exploratory: v.exploratory }),
        },
        BoundKind::Lemma7 => {
            if size.is_zero() {
                return Ok(Outcome::Skipped);
            }
            let v = lemma7_check(cfg.n, cfg.radius, &size, &boundary)?;
            match v.bound {
                Lemma7Bound::Trivial => Ok(Outcome::Trivial),
                Lemma7Bound::Value { value } => Ok(Outcome::Checked {
                    holds: v.holds,
                    ratio_sq: squared_ratio(&value),
                    exploratory: !v.in_scope,
                }),
            }
        }
    }
}

/// Checks a lower-bound theorem on seeded random or constructed families.
///
/// Violations count only checks that are neither exploratory nor skipped;
/// exploratory failures are counted separately.
pub fn sampled_verify(cfg: &SampleConfig) -> Result<SearchReport> {
    let start = Instant::now();
    let mut report = SearchReport::new(
        "sample",
        &[
            ("generator", serde_json::to_value(cfg.generator).unwrap().as_str().unwrap_or("").into()),
            ("bound", serde_json::to_value(cfg.bound).unwrap().as_str().unwrap_or("").into()),
            ("n", cfg.n.to_string()),
            ("R", cfg.radius.to_string()),
            ("rho", fmt_rational(&cfg.rho)),
            ("samples", cfg.samples.to_string()),
            ("seed", cfg.seed.to_string()),
        ],
    );
    if cfg.samples == 0 {
        report.wall_time_secs = start.elapsed().as_secs_f64();
        return Ok(report);
    }
    if cfg.radius > cfg.n {
        return Err(Error::Precondition(format!("R = {} exceeds n = {}", cfg.radius, cfg.n)));
    }
    if cfg.generator == Generator::RandomExplicit && cfg.n > MAX_SAMPLED_EXPLICIT_N {
        return Err(Error::AmbientTooLarge { n: cfg.n, max: MAX_SAMPLED_EXPLICIT_N });
    }
    let make = |i: u64| -> Result<Sample> {
        match cfg.generator {
            Generator::RandomProfile => Ok(Sample::Profile(random_profile(cfg.n, cfg.radius, &mut sample_rng(cfg.seed, i))?)),
            Generator::RandomExplicit => Ok(Sample::Explicit(random_explicit(cfg.n, cfg.radius, &mut sample_rng(cfg.seed, i))?)),
            Generator::Construction => {
                let steps = 2 * cfg.radius as u64 + 1;
                if i < steps {
                    let k = i as i64 - cfg.radius as i64;
                    Ok(Sample::Profile(ball_halfspace(cfg.n, cfg.radius, k)?))
                } else {
                    let j = i - steps + 1;
                    let total = ball_size(cfg.n as u64, cfg.radius as u64);
                    let target = total * j / (cfg.samples + 1);
                    Ok(Sample::Padded(sized_ball_halfspace(cfg.n, cfg.radius, &target)?))
                }
            }
        }
    };
    let count = match cfg.generator {
        Generator::Construction => cfg.samples + 2 * cfg.radius as u64 + 1,
        _ => cfg.samples,
    };
    type Row = (Outcome, Option<FamilyJson>);
    let rows: Vec<Row> = pool(cfg.workers)?.install(|| {
        (0..count)
            .into_par_iter()
            .map(|i| -> Result<Row> {
                let family = make(i)?;
                let outcome = evaluate(cfg, &family)?;
                let json = matches!(outcome, Outcome::Checked { .. }).then(|| family.json());
                Ok((outcome, json))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let mut counters: BTreeMap<String, u64> =
        ["checked", "skipped_precondition", "trivial", "exploratory", "exploratory_failures"]
            .iter()
            .map(|k| (k.to_string(), 0))
            .collect();
    let mut best: Option<(Rational, FamilyJson)> = None;
    for (outcome, json) in rows {
        match outcome {
            Outcome::Skipped => *counters.get_mut("skipped_precondition").unwrap() += 1,
            Outcome::Trivial => *counters.get_mut("trivial").unwrap() += 1,
            Outcome::Checked { holds, ratio_sq, exploratory } => {
                *counters.get_mut("checked").unwrap() += 1;
                if exploratory {
                    *counters.get_mut("exploratory").unwrap() += 1;
                }
                if !holds {
                    if exploratory {
                        *counters.get_mut("exploratory_failures").unwrap() += 1;
                    } else {
                        report.violations += 1;
                    }
                }
                if let (Some(q), Some(json)) = (ratio_sq, json) {
                    if best.as_ref().map_or(true, |(b, _)| q < *b) {
                        best = Some((q, json));
                    }
                }
            }
        }
    }
    report.examined = Natural::from(count);
    report.counters = counters;
    if let Some((q, json)) = best {
        report.statistics.insert("min_boundary_over_bound".into(), Statistic::sqrt_of(&q));
        report.witnesses.insert("min_boundary_over_bound".into(), json);
    }
    report.wall_time_secs = start.elapsed().as_secs_f64();
    Ok(report)
}

pub const MAX_LOCAL_SEARCH_N: u32 = 20;

/// Hill descent on `|∂_{B_n(R)} A|` over `size`-subsets of `B_n(R)`, swapping
/// one member for one non-member per step and keeping swaps that do not
/// increase the boundary.
pub fn local_search_minimizer(n: u32, radius: u32, size: u64, seed: u64, steps: u64) -> Result<SearchReport> {
    let start = Instant::now();
    if n > MAX_LOCAL_SEARCH_N {
        return Err(Error::AmbientTooLarge { n, max: MAX_LOCAL_SEARCH_N });
    }
    if radius > n {
        return Err(Error::Precondition(format!("R = {radius} exceeds n = {n}")));
    }
    let vertices: Vec<VertexSet> = (0..=radius).flat_map(|k| layer_sets(n, k)).collect();
    let u = vertices.len();
    if size > u as u64 {
        return Err(Error::Precondition(format!("size {size} exceeds |B_{n}({radius})| = {u}")));
    }
    let mut pos = vec![u32::MAX; 1 << n];
    for (i, v) in vertices.iter().enumerate() {
        pos[v.bits() as usize] = i as u32;
    }
    let nbrs: Vec<Vec<u32>> = vertices
        .iter()
        .map(|v| (1..=n).map(|e| pos[v.toggle(e).bits() as usize]).filter(|&p| p != u32::MAX).collect())
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut inside = vec![false; u];
    let mut members: Vec<u32> = sample(&mut rng, u, size as usize).into_iter().map(|i| i as u32).collect();
    let mut outside: Vec<u32> = Vec::with_capacity(u - size as usize);
    for &m in &members {
        inside[m as usize] = true;
    }
    outside.extend((0..u as u32).filter(|&v| !inside[v as usize]));
    // count[v]: members adjacent to v
    let mut count = vec![0u32; u];
    for &m in &members {
        for &x in &nbrs[m as usize] {
            count[x as usize] += 1;
        }
    }
    let mut boundary = (0..u).filter(|&v| !inside[v] && count[v] > 0).count() as i64;
    let initial = boundary;

    let in_boundary = |v: usize, inside: &[bool], count: &[u32]| !inside[v] && count[v] > 0;
    let toggle = |v: usize, add: bool, inside: &mut [bool], count: &mut [u32]| -> i64 {
        let mut delta = 0i64;
        let mut touched: Vec<usize> = nbrs[v].iter().map(|&x| x as usize).collect();
        touched.push(v);
        for &t in &touched {
            delta -= in_boundary(t, inside, count) as i64;
        }
        inside[v] = add;
        for &x in &nbrs[v] {
            if add {
                count[x as usize] += 1;
            } else {
                count[x as usize] -= 1;
            }
        }
        for &t in &touched {
            delta += in_boundary(t, inside, count) as i64;
        }
        delta
    };

    let mut accepted = 0u64;
    if !members.is_empty() && !outside.is_empty() {
        for _ in 0..steps {
            let i = rng.gen_range(0..members.len());
            let j = rng.gen_range(0..outside.len());
            let (v, w) = (members[i] as usize, outside[j] as usize);
            let delta = toggle(v, false, &mut inside, &mut count) + toggle(w, true, &mut inside, &mut count);
            if delta <= 0 {
                boundary += delta;
                members[i] = w as u32;
                outside[j] = v as u32;
                accepted += 1;
            } else {
                toggle(w, false, &mut inside, &mut count);
                toggle(v, true, &mut inside, &mut count);
            }
        }
    }
    let mut report = SearchReport::new(
        "local-search",
        &[
            ("n", n.to_string()),
            ("R", radius.to_string()),
            ("size", size.to_string()),
            ("seed", seed.to_string()),
            ("steps", steps.to_string()),
        ],
    );
    report.examined = Natural::from(steps);
    report.counters.insert("accepted".into(), accepted);
    report.statistics.insert("initial_boundary".into(), Statistic::from_natural(&Natural::from(initial as u64)));
    report.statistics.insert("min_boundary".into(), Statistic::from_natural(&Natural::from(boundary as u64)));
    let witness = ExplicitFamily::new(n, members.iter().map(|&m| vertices[m as usize]))?;
    report.witnesses.insert("min_boundary".into(), witness.into());
    report.wall_time_secs = start.elapsed().as_secs_f64();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::{cube_boundary, lower_shadow, upper_shadow};
    use crate::exactmath::nat;
    use crate::families::AnyFamily;

    fn stat(r: &SearchReport, key: &str) -> String {
        r.statistics[key].exact.clone()
    }

    #[test]
    fn colex_unranking_matches_gosper() {
        for u in 1..=12u32 {
            for k in 1..=u {
                let mut mask = (1u64 << k) - 1;
                let total = binom_u64(u as u64, k as u64);
                for rank in 0..total {
                    assert_eq!(unrank_colex(rank, k, u), mask, "u={u} k={k} rank={rank}");
                    mask = next_combination(mask);
                }
            }
        }
    }

    #[test]
    fn chunks_cover_range() {
        for total in [0u64, 1, 5, 255, 256, 257, 1 << 20] {
            let ranges = chunk_ranges(total);
            assert_eq!(ranges.first().unwrap().0, 0);
            assert_eq!(ranges.last().unwrap().1, total);
            assert!(ranges.windows(2).all(|w| w[0].1 == w[1].0));
        }
    }

    #[test]
    fn local_expansion_exhaustive_examples() {
        let r = exhaustive_verify_local_expansion(4, 2, 1).unwrap();
        assert_eq!((r.examined.clone(), r.violations), (nat(64), 0));
        let r = exhaustive_verify_local_expansion(3, 1, 2).unwrap();
        assert_eq!((r.examined.clone(), r.violations), (nat(8), 0));
        assert_eq!(stat(&r, "min_slack"), "0");
        assert!(matches!(exhaustive_verify_local_expansion(8, 4, 1), Err(Error::SliceTooLarge { .. })));
    }

    #[test]
    fn witness_slack_is_recomputable() {
        let r = exhaustive_verify_local_expansion(5, 2, 3).unwrap();
        let w: AnyFamily = r.witnesses["min_slack_nontrivial"].clone().try_into().unwrap();
        let AnyFamily::Explicit(f) = w else { panic!() };
        let b = nat(cube_boundary(&f).len() as u64);
        let v = local_expansion_check(5, 2, &f.size(), &b).unwrap();
        assert_eq!(v.slack.to_string(), stat(&r, "min_slack_nontrivial"));
    }

    #[test]
    fn scan_shadow_sizes_match_explicit() {
        let index = SliceIndex::new(5, 2).unwrap();
        index.scan_any((0, 1 << 10), |mask, size, lo, up| {
            let f = index.family(mask);
            assert_eq!(size as usize, f.len());
            assert_eq!(lo as usize, lower_shadow(&f).unwrap().len());
            assert_eq!(up as usize, upper_shadow(&f).unwrap().len());
        });
        let index = SliceIndex::new(20, 1).unwrap();
        index.scan_any((0, 1 << 20), |mask, _, lo, up| {
            if mask % 9973 == 0 {
                let f = index.family(mask);
                assert_eq!(lo as usize, lower_shadow(&f).unwrap().len());
                assert_eq!(up as usize, upper_shadow(&f).unwrap().len());
            }
        });
    }

    #[test]
    fn nm_exhaustive_examples() {
        for (n, r) in [(4, 2), (5, 2), (2, 1)] {
            let rep = exhaustive_verify_nm(n, r, 2).unwrap();
            assert_eq!(rep.violations, 0);
            assert_eq!(rep.examined, nat(1 << binom_u64(n as u64, r as u64)));
        }
        let rep = exhaustive_verify_nm(4, 2, 1).unwrap();
        // the full slice meets r/(s+1) = 2/3 with equality
        assert_eq!(stat(&rep, "min_lower_ratio"), "2/3");
        assert!(matches!(exhaustive_verify_nm(99, 50, 1), Err(Error::SliceTooLarge { .. })));
    }

    #[test]
    fn results_independent_of_workers() {
        let a = exhaustive_verify_local_expansion(5, 2, 1).unwrap().without_timing();
        let b = exhaustive_verify_local_expansion(5, 2, 4).unwrap().without_timing();
        assert_eq!(a, b);
        let a = exhaustive_min_boundary(4, 6, Ambient::Cube, DEFAULT_BUDGET, 1).unwrap().without_timing();
        let b = exhaustive_min_boundary(4, 6, Ambient::Cube, DEFAULT_BUDGET, 3).unwrap().without_timing();
        assert_eq!(a, b);
    }

    #[test]
    fn min_boundary_examples() {
        let r = exhaustive_min_boundary(4, 5, Ambient::Cube, DEFAULT_BUDGET, 2).unwrap();
        assert_eq!(stat(&r, "min_boundary"), "6");
        assert_eq!(r.examined, nat(4368));
        let r = exhaustive_min_boundary(3, 1, Ambient::Cube, DEFAULT_BUDGET, 1).unwrap();
        assert_eq!(stat(&r, "min_boundary"), "3");
        let r = exhaustive_min_boundary(4, 16, Ambient::Cube, DEFAULT_BUDGET, 1).unwrap();
        assert_eq!(stat(&r, "min_boundary"), "0");
        let r = exhaustive_min_boundary(4, 0, Ambient::Cube, DEFAULT_BUDGET, 1).unwrap();
        assert_eq!((stat(&r, "min_boundary"), r.examined.clone()), ("0".into(), nat(1)));
        // oracle: every 5-subset of B_4(2)
        let ball = ExplicitFamily::ball(4, 2).unwrap();
        let best = (0u32..1 << 11)
            .filter(|m| m.count_ones() == 5)
            .map(|m| {
                let f = ExplicitFamily::new(4, (0..11).filter(|i| m >> i & 1 == 1).map(|i| ball.members()[i])).unwrap();
                ball_boundary(&f, 2).unwrap().len()
            })
            .min()
            .unwrap();
        let r = exhaustive_min_boundary(4, 5, Ambient::Ball(2), DEFAULT_BUDGET, 1).unwrap();
        assert_eq!(stat(&r, "min_boundary"), best.to_string());
        assert!(matches!(
            exhaustive_min_boundary(5, 16, Ambient::Cube, 1000, 1),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(exhaustive_min_boundary(6, 1, Ambient::Cube, DEFAULT_BUDGET, 1).is_err());
    }

    #[test]
    fn min_boundary_matches_brute_force() {
        // oracle: all masks of Q_3 by popcount
        for size in 0..=8u32 {
            let best = (0u32..1 << 8)
                .filter(|m| m.count_ones() == size)
                .map(|m| {
                    let f = ExplicitFamily::new(3, (0..8).filter(|i| m >> i & 1 == 1).map(VertexSet)).unwrap();
                    cube_boundary(&f).len()
                })
                .min()
                .unwrap();
            let r = exhaustive_min_boundary(3, size as u64, Ambient::Cube, DEFAULT_BUDGET, 1).unwrap();
            assert_eq!(stat(&r, "min_boundary"), best.to_string());
        }
    }

    fn cfg(generator: Generator, bound: BoundKind, n: u32, radius: u32, samples: u64, seed: u64) -> SampleConfig {
        SampleConfig { generator, bound, n, radius, rho: rat(1, 4), samples, seed, assume_n0: None, workers: 2 }
    }

    #[test]
    fn sampling_is_reproducible() {
        let c = cfg(Generator::RandomProfile, BoundKind::Thm1, 60, 30, 50, 7);
        let a = sampled_verify(&c).unwrap().without_timing();
        let b = sampled_verify(&SampleConfig { workers: 1, ..c.clone() }).unwrap().without_timing();
        assert_eq!(a, b);
        assert_eq!(a.violations, 0);
        let d = sampled_verify(&SampleConfig { seed: 8, ..c }).unwrap().without_timing();
        assert_ne!(a.witnesses, d.witnesses);
    }

    #[test]
    fn empty_sample_report() {
        let r = sampled_verify(&cfg(Generator::RandomProfile, BoundKind::Thm1, 100, 50, 0, 0)).unwrap();
        assert_eq!(r.examined, nat(0));
        assert!(r.statistics.is_empty() && r.witnesses.is_empty());
    }

    #[test]
    fn construction_sweep_and_explicit_sampling() {
        let r = sampled_verify(&cfg(Generator::Construction, BoundKind::Thm1, 40, 20, 20, 0)).unwrap();
        assert_eq!(r.violations, 0);
        assert!(r.counters["checked"] > 0);
        let r = sampled_verify(&cfg(Generator::RandomExplicit, BoundKind::Thm1, 12, 6, 30, 1)).unwrap();
        assert_eq!(r.violations, 0);
        let r = sampled_verify(&cfg(Generator::RandomProfile, BoundKind::Lemma7, 100, 50, 40, 2)).unwrap();
        assert_eq!(r.violations, 0);
        assert!(sampled_verify(&cfg(Generator::RandomExplicit, BoundKind::Thm1, 24, 6, 3, 1)).is_err());
    }

    #[test]
    fn local_search_examples() {
        let exhaustive = exhaustive_min_boundary(4, 5, Ambient::Cube, DEFAULT_BUDGET, 1).unwrap();
        let best: u64 = stat(&exhaustive, "min_boundary").parse().unwrap();
        let r = local_search_minimizer(4, 4, 5, 0, 5000).unwrap();
        assert_eq!(stat(&r, "min_boundary"), "6");
        for seed in [1, 2, 3] {
            let r = local_search_minimizer(4, 4, 5, seed, 200).unwrap();
            let got: u64 = stat(&r, "min_boundary").parse().unwrap();
            assert!(got >= best);
        }
        let r = local_search_minimizer(4, 4, 5, 9, 0).unwrap();
        assert_eq!(stat(&r, "min_boundary"), stat(&r, "initial_boundary"));
    }

    #[test]
    fn local_search_tracks_boundary_exactly() {
        for seed in 0..20 {
            let r = local_search_minimizer(6, 3, 17, seed, 300).unwrap();
            let w: AnyFamily = r.witnesses["min_boundary"].clone().try_into().unwrap();
            let AnyFamily::Explicit(f) = w else { panic!() };
            assert_eq!(f.len(), 17);
            assert_eq!(ball_boundary(&f, 3).unwrap().len().to_string(), stat(&r, "min_boundary"));
        }
    }
}
