//! Shadows and vertex boundaries in `Q_n` and `B_n(R)`.
//!
//! Explicit families are handled by direct neighbour enumeration. Profile
//! families are handled cell by cell: a set in cell `(a, b)` has a neighbour
//! in every existing adjacent cell `(a±1, b)`, `(a, b±1)`, so a cell is either
//! entirely in the boundary or entirely outside it.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::constructions::split_by_element;
use crate::exactmath::{natural_string, Natural};
use crate::families::{ExplicitFamily, Family, PaddedProfileFamily, ProfileFamily};
use crate::{Error, Result};

fn require_layer(f: &ExplicitFamily) -> Result<u32> {
    f.layer().ok_or(Error::Untagged)
}

/// `∂⁻A`: all `(r-1)`-sets contained in some member.
pub fn lower_shadow(f: &ExplicitFamily) -> Result<ExplicitFamily> {
    let r = require_layer(f)?;
    if r == 0 {
        return Err(Error::Precondition("lower shadow needs layer r >= 1".into()));
    }
    let shadow = f
        .members()
        .iter()
        .flat_map(|&x| x.elements().into_iter().map(move |e| x.without(e)));
    ExplicitFamily::with_layer(f.n(), r - 1, shadow)
}

/// `∂⁺A`: all `(r+1)`-sets containing some member.
pub fn upper_shadow(f: &ExplicitFamily) -> Result<ExplicitFamily> {
    let r = require_layer(f)?;
    let n = f.n();
    if r >= n {
        return Err(Error::Precondition(format!("upper shadow needs layer r <= n-1, got r={r}, n={n}")));
    }
    let shadow = f
        .members()
        .iter()
        .flat_map(|&x| (1..=n).filter(move |&e| !x.contains(e)).map(move |e| x.with(e)));
    ExplicitFamily::with_layer(n, r + 1, shadow)
}

/// Vertex boundary in `Q_n`: outside vertices with a neighbour in `f`.
pub fn cube_boundary(f: &ExplicitFamily) -> ExplicitFamily {
    let n = f.n();
    let inside = f.indicator();
    let mut seen = vec![false; inside.len()];
    let mut out = Vec::new();
    for &x in f.members() {
        for e in 1..=n {
            let y = x.toggle(e);
            let i = y.bits() as usize;
            if !inside[i] && !seen[i] {
                seen[i] = true;
                out.push(y);
            }
        }
    }
    ExplicitFamily::new(n, out).expect("boundary stays inside [n]")
}

fn check_in_ball(f: &ExplicitFamily, radius: u32) -> Result<()> {
    match f.members().iter().find(|x| x.len() > radius) {
        Some(x) => Err(Error::OutsideBall { member: x.to_string(), size: x.len(), radius }),
        None => Ok(()),
    }
}

/// Vertex boundary inside the Hamming ball `B_n(radius)`.
pub fn ball_boundary(f: &ExplicitFamily, radius: u32) -> Result<ExplicitFamily> {
    check_in_ball(f, radius)?;
    let cube = cube_boundary(f);
    ExplicitFamily::new(f.n(), cube.members().iter().copied().filter(|x| x.len() <= radius))
}

/// `b_r = |∂_n A ∩ S_n(r)|` for `0 <= r <= radius`.
pub fn boundary_layer_profile(f: &ExplicitFamily, radius: u32) -> Result<Vec<u64>> {
    let b = ball_boundary(f, radius)?;
    let mut layers = vec![0u64; radius as usize + 1];
    for x in b.members() {
        layers[x.len() as usize] += 1;
    }
    Ok(layers)
}

fn adjacent_cells(p: &ProfileFamily, a: u32, b: u32) -> impl Iterator<Item = (u32, u32)> + '_ {
    let up_a = (a < p.m()).then(|| (a + 1, b));
    let down_a = a.checked_sub(1).map(|a| (a, b));
    let up_b = (b < p.n() - p.m()).then(|| (a, b + 1));
    let down_b = b.checked_sub(1).map(|b| (a, b));
    [down_a, up_a, down_b, up_b].into_iter().flatten()
}

/// Neighbours a single set of cell `(a, b)` has inside cell `to`.
fn cell_degree(p: &ProfileFamily, (a, b): (u32, u32), to: (u32, u32)) -> u64 {
    match (to.0 as i64 - a as i64, to.1 as i64 - b as i64) {
        (1, 0) => (p.m() - a) as u64,
        (-1, 0) => a as u64,
        (0, 1) => (p.n() - p.m() - b) as u64,
        (0, -1) => b as u64,
        _ => 0,
    }
}

fn profile_boundary(p: &ProfileFamily, radius: Option<u32>) -> ProfileFamily {
    let in_range = |a: u32, b: u32| radius.map_or(true, |r| a + b <= r);
    ProfileFamily::from_predicate(p.n(), p.m(), |a, b| {
        in_range(a, b) && !p.is_on(a, b) && adjacent_cells(p, a, b).any(|(x, y)| p.is_on(x, y))
    })
    .expect("same grid as the input")
}

/// Boundary of a profile family in `Q_n`, as a profile family.
pub fn profile_cube_boundary(p: &ProfileFamily) -> ProfileFamily {
    profile_boundary(p, None)
}

fn check_profile_in_ball(p: &ProfileFamily, radius: u32) -> Result<()> {
    match p.on_cells().into_iter().find(|&(a, b)| a + b > radius) {
        Some((a, b)) => Err(Error::OutsideBall { member: format!("cell ({a},{b})"), size: a + b, radius }),
        None => Ok(()),
    }
}

/// Boundary of a profile family inside `B_n(radius)`.
pub fn profile_ball_boundary(p: &ProfileFamily, radius: u32) -> Result<ProfileFamily> {
    check_profile_in_ball(p, radius)?;
    Ok(profile_boundary(p, Some(radius)))
}

/// Two-sided estimate of the boundary of a padded profile family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryEstimate {
    #[serde(with = "natural_string")]
    pub lower: Natural,
    #[serde(with = "natural_string")]
    pub upper_bound: Natural,
    pub exact: bool,
}

/// Boundary of `base ∪ T` where `T` is `taken` members of the cut cell.
///
/// Cells adjacent to the base are counted exactly, and the untaken part of the
/// cut cell is in the boundary iff the cut cell touches the base (sets of one
/// cell are never adjacent). The only unknown is how much of the remaining
/// cells around the cut cell `T` reaches. Counting the edges between `T` and
/// such a cell bounds that reach below by `ceil(taken * deg / deg_back)` and
/// above by `min(|cell|, taken * deg)`.
pub fn padded_boundary(p: &PaddedProfileFamily, radius: Option<u32>) -> Result<BoundaryEstimate> {
    let base = p.base();
    if let Some(r) = radius {
        check_profile_in_ball(base, r)?;
    }
    let in_range = |a: u32, b: u32| radius.map_or(true, |r| a + b <= r);
    let base_boundary = profile_boundary(base, radius);
    let (cut, taken) = match p.cut_cell() {
        Some(cut) if !p.taken().is_zero() => (cut, p.taken().clone()),
        _ => {
            let size = base_boundary.size();
            return Ok(BoundaryEstimate { lower: size.clone(), upper_bound: size, exact: true });
        }
    };
    if !in_range(cut.0, cut.1) {
        return Err(Error::OutsideBall { member: format!("cell ({},{})", cut.0, cut.1), size: cut.0 + cut.1, radius: radius.unwrap_or(0) });
    }
    let mut lower = Natural::zero();
    for (a, b) in base_boundary.on_cells() {
        if (a, b) != cut {
            lower += base.cell_size(a, b);
        }
    }
    if base_boundary.is_on(cut.0, cut.1) {
        lower += base.cell_size(cut.0, cut.1) - &taken;
    }
    let full_cut = taken == base.cell_size(cut.0, cut.1);
    let mut upper = lower.clone();
    for (a, b) in adjacent_cells(base, cut.0, cut.1) {
        if !in_range(a, b) || base.is_on(a, b) || base_boundary.is_on(a, b) {
            continue;
        }
        let size = base.cell_size(a, b);
        if full_cut {
            // every set of a full cell reaches each adjacent cell entirely
            lower += &size;
            upper += size;
        } else {
            // double counting the edges between T and the cell
            let edges = &taken * Natural::from(cell_degree(base, cut, (a, b)));
            let back = Natural::from(cell_degree(base, (a, b), cut));
            lower += size.clone().min(num_integer::Integer::div_ceil(&edges, &back));
            upper += size.min(edges);
        }
    }
    let exact = lower == upper;
    Ok(BoundaryEstimate { lower, upper_bound: upper, exact })
}

/// Slacks of the two lower bounds obtained by splitting `A ⊆ S_n(r)` on an
/// element `e`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupersetReport {
    pub element: u32,
    /// `∂_{n-1}A₀ ⊆ {X ∈ ∂_n A : e ∉ X}`
    pub a0_boundary_below: bool,
    /// `{X ∪ {e} : X ∈ ∂_{n-1}A₁} ⊆ {X ∈ ∂_n A : e ∈ X}`
    pub a1_boundary_lifted: bool,
    /// `∂⁺_{n-1}A₀ ⊆ {X ∈ ∂⁺_n A : e ∉ X}`
    pub a0_upper_shadow_below: bool,
    /// `A₁ ⊆ {X ∈ ∂⁻_n A : e ∉ X}`
    pub a1_in_lower_shadow: bool,
    /// `|∂_n A| - |∂_{n-1}A₀| - |∂_{n-1}A₁|`
    pub slack_split: i64,
    /// `|∂_n A| - |∂_{n-1}A₁| - |∂⁺_{n-1}A₀| - |A₁|`
    pub slack_shadow: i64,
    pub holds: bool,
}

/// Verifies the inclusions behind `|∂_n A| >= |∂_{n-1}A₀| + |∂_{n-1}A₁|` and
/// `|∂_n A| >= |∂_{n-1}A₁| + |∂⁺_{n-1}A₀| + |A₁|`.
pub fn superset_relations_check(f: &ExplicitFamily, element: u32) -> Result<SupersetReport> {
    let r = require_layer(f)?;
    let n = f.n();
    if r == 0 || r >= n {
        return Err(Error::Precondition(format!("split needs 1 <= r <= n-1, got r={r}, n={n}")));
    }
    let (a0, a1) = split_by_element(f, element)?;
    let full = cube_boundary(f);
    let lower_full = lower_shadow(f)?;
    let upper_full = upper_shadow(f)?;

    let d0 = cube_boundary(&a0);
    let d1 = cube_boundary(&a1);
    let up0 = upper_shadow(&a0)?;

    let a0_boundary_below = d0.members().iter().all(|&x| full.contains(x.lift(element, false)));
    let a1_boundary_lifted = d1.members().iter().all(|&x| full.contains(x.lift(element, true)));
    let a0_upper_shadow_below = up0.members().iter().all(|&x| upper_full.contains(x.lift(element, false)));
    let a1_in_lower_shadow = a1.members().iter().all(|&x| lower_full.contains(x.lift(element, false)));

    let total = full.len() as i64;
    let slack_split = total - d0.len() as i64 - d1.len() as i64;
    let slack_shadow = total - d1.len() as i64 - up0.len() as i64 - a1.len() as i64;
    let holds = a0_boundary_below
        && a1_boundary_lifted
        && a0_upper_shadow_below
        && a1_in_lower_shadow
        && slack_split >= 0
        && slack_shadow >= 0;
    Ok(SupersetReport {
        element,
        a0_boundary_below,
        a1_boundary_lifted,
        a0_upper_shadow_below,
        a1_in_lower_shadow,
        slack_split,
        slack_shadow,
        holds,
    })
}
