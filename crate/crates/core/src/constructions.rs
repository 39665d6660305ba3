//! Extremal and near-extremal families: stars, half-space cuts of balls and
//! slices, and the element-splitting used by the local expansion induction.

use num_traits::Zero;

use crate::exactmath::{ball_size, binom, ratio, Natural, Rational};
use crate::families::{layer_sets, ExplicitFamily, Family, PaddedProfileFamily, ProfileFamily, VertexSet};
use crate::{Error, Result};

fn check_layer_range(n: u32, r: u32) -> Result<()> {
    if r == 0 || r >= n {
        return Err(Error::Precondition(format!("need 1 <= r <= n-1, got n={n}, r={r}")));
    }
    Ok(())
}

fn check_element(n: u32, e: u32) -> Result<()> {
    if e == 0 || e > n {
        return Err(Error::Precondition(format!("element {e} outside [{n}]")));
    }
    Ok(())
}

/// `{X ∈ S_n(r) : e ∈ X}`
pub fn star(n: u32, r: u32, e: u32) -> Result<ExplicitFamily> {
    check_layer_range(n, r)?;
    check_element(n, e)?;
    ExplicitFamily::with_layer(n, r, layer_sets(n, r).into_iter().filter(|x| x.contains(e)))
}

/// `{X ∈ S_n(r) : e ∉ X}`
pub fn costar(n: u32, r: u32, e: u32) -> Result<ExplicitFamily> {
    check_layer_range(n, r)?;
    check_element(n, e)?;
    ExplicitFamily::with_layer(n, r, layer_sets(n, r).into_iter().filter(|x| !x.contains(e)))
}

/// `C(k) = {X ∈ B_n(R) : |X ∩ Y| <= |X|/2 + k}` with `Y = {1..floor(n/2)}`.
///
/// The condition `a <= (a+b)/2 + k` is evaluated exactly as `a - b <= 2k`.
pub fn ball_halfspace(n: u32, radius: u32, k: i64) -> Result<ProfileFamily> {
    if radius > n {
        return Err(Error::Precondition(format!("radius {radius} exceeds n = {n}")));
    }
    ProfileFamily::from_predicate(n, n / 2, |a, b| a + b <= radius && a as i64 - b as i64 <= 2 * k)
}

/// `{X ∈ S_n(r) : |X ∩ Y| <= r/2 + k}`
pub fn slice_halfspace(n: u32, r: u32, k: i64) -> Result<ProfileFamily> {
    check_layer_range(n, r)?;
    ProfileFamily::from_predicate(n, n / 2, |a, b| a + b == r && 2 * a as i64 <= r as i64 + 2 * k)
}

/// `C⁺ = {X ∈ S_n(r+1) : |X ∩ Y| <= r/2 + k - 1}`
pub fn cplus(n: u32, r: u32, k: i64) -> Result<ProfileFamily> {
    if r + 1 > n {
        return Err(Error::Precondition(format!("C+ needs r+1 <= n, got n={n}, r={r}")));
    }
    ProfileFamily::from_predicate(n, n / 2, |a, b| a + b == r + 1 && 2 * a as i64 <= r as i64 + 2 * k - 2)
}

/// Interpolates `C(k-1) ⊆ M ⊆ C(k)` to an exact size. Cells of
/// `C(k) \ C(k-1)` are added whole in `(a+b, a)` order; the first one that
/// does not fit becomes the cut cell.
fn interpolate(
    target: &Natural,
    k_range: std::ops::RangeInclusive<i64>,
    family: impl Fn(i64) -> Result<ProfileFamily>,
) -> Result<PaddedProfileFamily> {
    let mut prev = family(*k_range.start() - 1)?;
    if !prev.size().is_zero() {
        return Err(Error::Internal("half-space family not empty below range".into()));
    }
    if target.is_zero() {
        return Ok(PaddedProfileFamily::unpadded(prev));
    }
    for k in k_range {
        let next = family(k)?;
        if next.size() < *target {
            prev = next;
            continue;
        }
        let mut extra: Vec<(u32, u32)> =
            next.on_cells().into_iter().filter(|&(a, b)| !prev.is_on(a, b)).collect();
        extra.sort_by_key(|&(a, b)| (a + b, a));
        let mut base = prev;
        let mut size = base.size();
        for (a, b) in extra {
            let cell = base.cell_size(a, b);
            if &size + &cell <= *target {
                size += cell;
                base.set(a, b, true)?;
                if size == *target {
                    break;
                }
            } else {
                let taken = target - &size;
                return PaddedProfileFamily::new(base, Some((a, b)), taken);
            }
        }
        return Ok(PaddedProfileFamily::unpadded(base));
    }
    Err(Error::Precondition(format!("target {target} exceeds the ambient family")))
}

/// A subfamily of `B_n(R)` of exactly `target` sets between consecutive
/// half-space families `C(k-1)` and `C(k)`.
pub fn sized_ball_halfspace(n: u32, radius: u32, target: &Natural) -> Result<PaddedProfileFamily> {
    if radius > n {
        return Err(Error::Precondition(format!("radius {radius} exceeds n = {n}")));
    }
    if *target > ball_size(n as u64, radius as u64) {
        return Err(Error::Precondition(format!("target {target} exceeds |B_{n}({radius})|")));
    }
    let reach = radius as i64;
    interpolate(target, -reach..=reach, |k| ball_halfspace(n, radius, k))
}

/// A subfamily of `S_n(r)` of exactly `target` sets between `C(k-1)` and `C(k)`.
pub fn sized_slice_halfspace(n: u32, r: u32, target: &Natural) -> Result<PaddedProfileFamily> {
    check_layer_range(n, r)?;
    if *target > binom(n as u64, r as u64) {
        return Err(Error::Precondition(format!("target {target} exceeds C({n},{r})")));
    }
    let reach = r as i64;
    interpolate(target, -reach..=reach, |k| slice_halfspace(n, r, k))
}

/// Splits `f ⊆ S_n(r)` on element `e` into `A₀ = {X : e ∉ X} ⊆ S_{n-1}(r)`
/// and `A₁ = {X \ {e} : e ∈ X} ⊆ S_{n-1}(r-1)`, relabelling the ground set to
/// `[n-1]`.
pub fn split_by_element(f: &ExplicitFamily, e: u32) -> Result<(ExplicitFamily, ExplicitFamily)> {
    let r = f.layer().ok_or(Error::Untagged)?;
    let n = f.n();
    check_layer_range(n, r)?;
    check_element(n, e)?;
    let (with, without): (Vec<VertexSet>, Vec<VertexSet>) = f.members().iter().partition(|x| x.contains(e));
    let a0 = ExplicitFamily::with_layer(n - 1, r, without.into_iter().map(|x| x.project_out(e)))?;
    let a1 = ExplicitFamily::with_layer(n - 1, r - 1, with.into_iter().map(|x| x.project_out(e)))?;
    Ok((a0, a1))
}

/// Densities `(α, α₀, α₁)` of `f` and of its two halves after splitting on `e`.
pub fn split_densities(f: &ExplicitFamily, e: u32) -> Result<(Rational, Rational, Rational)> {
    let (a0, a1) = split_by_element(f, e)?;
    let (n, r) = (f.n() as u64, f.layer().unwrap_or_default() as u64);
    Ok((
        ratio(&f.size(), &binom(n, r)),
        ratio(&a0.size(), &binom(n - 1, r)),
        ratio(&a1.size(), &binom(n - 1, r - 1)),
    ))
}

/// An element contained in the most members; ties go to the smallest element.
/// Its count is at least `(r/n)|f|`.
pub fn pigeonhole_element(f: &ExplicitFamily) -> Result<u32> {
    f.layer().ok_or(Error::Untagged)?;
    if f.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let counts: Vec<usize> = (1..=f.n()).map(|e| f.members().iter().filter(|x| x.contains(e)).count()).collect();
    let best = counts.iter().copied().max().unwrap_or(0);
    let e = counts.iter().position(|&c| c == best).unwrap() as u32 + 1;
    Ok(e)
}

/// `{[n] \ X : X ∈ f}`, in layer `n - r`.
pub fn complement_family(f: &ExplicitFamily) -> Result<ExplicitFamily> {
    let r = f.layer().ok_or(Error::Untagged)?;
    let n = f.n();
    ExplicitFamily::with_layer(n, n - r, f.members().iter().map(|x| x.complement(n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::{ball_boundary, cube_boundary, lower_shadow, padded_boundary, upper_shadow};
    use crate::exactmath::{nat, rat, slice_size};
    use crate::families::{expand_padded, expand_profile};

    #[test]
    fn star_costar() {
        assert_eq!(star(4, 2, 1).unwrap().len(), 3);
        assert_eq!(costar(4, 2, 1).unwrap().len(), 3);
        for n in 2..=8 {
            for r in 1..n {
                for e in 1..=n {
                    let s = star(n, r, e).unwrap();
                    let c = costar(n, r, e).unwrap();
                    assert_eq!(s.size(), binom(n as u64 - 1, r as u64 - 1));
                    assert_eq!(c.size(), binom(n as u64 - 1, r as u64));
                    let union = ExplicitFamily::with_layer(n, r, s.members().iter().chain(c.members()).copied()).unwrap();
                    assert_eq!(union, ExplicitFamily::slice(n, r).unwrap());
                }
            }
        }
        assert!(star(4, 0, 1).is_err());
        assert!(star(4, 2, 5).is_err());
    }

    #[test]
    fn star_shadows_are_exact() {
        // |∂⁻A₀| = (r/s)|A₀| and |∂⁺A₁| = (s/r)|A₁|
        for n in 2..=12u32 {
            for r in 1..n {
                let s = n - r;
                let a0 = costar(n, r, 1).unwrap();
                let a1 = star(n, r, 1).unwrap();
                let lo = lower_shadow(&a0).unwrap().len() as i64;
                let up = upper_shadow(&a1).unwrap().len() as i64;
                assert_eq!(lo * s as i64, r as i64 * a0.len() as i64, "n={n} r={r}");
                assert_eq!(up * r as i64, s as i64 * a1.len() as i64, "n={n} r={r}");
            }
        }
    }

    #[test]
    fn ball_halfspace_examples() {
        assert_eq!(ball_halfspace(6, 3, 2).unwrap().size(), ball_size(6, 3));
        assert_eq!(ball_halfspace(6, 3, -2).unwrap().size(), nat(0));
        let c = ball_halfspace(4, 2, 0).unwrap();
        assert_eq!(c.on_cells(), vec![(0, 0), (0, 1), (0, 2), (1, 1)]);
        assert_eq!(c.size(), nat(8));
    }

    #[test]
    fn halfspaces_match_comprehension() {
        for n in 1..=10u32 {
            let m = n / 2;
            let in_y = |x: VertexSet| (x.bits() & ((1 << m) - 1)).count_ones() as i64;
            for radius in 0..=n {
                for k in -(radius as i64) - 1..=radius as i64 + 1 {
                    let f = expand_profile(&ball_halfspace(n, radius, k).unwrap()).unwrap();
                    let direct = ExplicitFamily::new(
                        n,
                        (0..1u32 << n)
                            .map(VertexSet)
                            .filter(|&x| x.len() <= radius && 2 * in_y(x) <= x.len() as i64 + 2 * k),
                    )
                    .unwrap();
                    assert_eq!(f, direct);
                }
            }
            for r in 1..n {
                for k in -(r as i64) - 1..=r as i64 + 1 {
                    let f = expand_profile(&slice_halfspace(n, r, k).unwrap()).unwrap();
                    let direct: Vec<_> =
                        layer_sets(n, r).into_iter().filter(|&x| 2 * in_y(x) <= r as i64 + 2 * k).collect();
                    assert_eq!(f.members(), &direct[..]);
                }
            }
        }
    }

    #[test]
    fn slice_halfspace_examples() {
        let c = slice_halfspace(4, 2, 0).unwrap();
        assert_eq!(c.on_cells(), vec![(0, 2), (1, 1)]);
        assert_eq!(c.size(), nat(5));
        let c = slice_halfspace(4, 2, -1).unwrap();
        assert_eq!(c.on_cells(), vec![(0, 2)]);
        assert_eq!(c.size(), nat(1));
        assert_eq!(slice_halfspace(4, 2, 1).unwrap().size(), slice_size(4, 2));
    }

    #[test]
    fn sized_ball_halfspace_examples() {
        assert_eq!(sized_ball_halfspace(6, 3, &nat(0)).unwrap().size(), nat(0));
        let full = sized_ball_halfspace(6, 3, &ball_size(6, 3)).unwrap();
        assert_eq!(full.size(), ball_size(6, 3));
        assert!(full.is_exact_profile());
        let m = sized_ball_halfspace(6, 3, &nat(21)).unwrap();
        assert_eq!(m.size(), nat(21));
        assert!(sized_ball_halfspace(6, 3, &nat(43)).is_err());
        for target in 0..=42 {
            assert_eq!(sized_ball_halfspace(6, 3, &nat(target)).unwrap().size(), nat(target));
        }
    }

    #[test]
    fn sized_family_sits_between_consecutive_halfspaces() {
        for n in 2..=8u32 {
            let m = n / 2;
            for radius in 1..=n {
                let total: u64 = (&ball_size(n as u64, radius as u64)).try_into().unwrap();
                for target in 0..=total {
                    let p = sized_ball_halfspace(n, radius, &nat(target)).unwrap();
                    let f = expand_padded(&p).unwrap();
                    assert_eq!(f.len() as u64, target);
                    let k = (-(radius as i64)..=radius as i64)
                        .find(|&k| ball_halfspace(n, radius, k).unwrap().size() >= nat(target))
                        .unwrap();
                    let lo = expand_profile(&ball_halfspace(n, radius, k - 1).unwrap()).unwrap();
                    let hi = expand_profile(&ball_halfspace(n, radius, k).unwrap()).unwrap();
                    assert!(lo.is_subset_of(&f) && f.is_subset_of(&hi));
                    let boundary = ball_boundary(&f, radius).unwrap();
                    let est = padded_boundary(&p, Some(radius)).unwrap();
                    let exact = Natural::from(boundary.len());
                    assert!(est.lower <= exact && exact <= est.upper_bound);
                    for x in boundary.members() {
                        let a = (x.bits() & ((1 << m) - 1)).count_ones() as i64;
                        let d = a - (x.len() as i64) / 2;
                        assert!(d == k || d == k + 1, "n={n} R={radius} target={target} x={x} d={d} k={k}");
                    }
                }
            }
        }
    }

    #[test]
    fn sized_slice_halfspace_exact_sizes() {
        for target in 0..=20 {
            let p = sized_slice_halfspace(6, 3, &nat(target)).unwrap();
            assert_eq!(p.size(), nat(target));
        }
        assert!(sized_slice_halfspace(6, 3, &nat(21)).is_err());
    }

    #[test]
    fn cplus_examples() {
        let cp = expand_profile(&cplus(6, 2, 1).unwrap()).unwrap().retag(3).unwrap();
        let c0 = expand_profile(&slice_halfspace(6, 2, 0).unwrap()).unwrap();
        assert!(lower_shadow(&cp).unwrap().members().iter().all(|&x| c0.contains(x)));
        assert_eq!(cplus(6, 2, -5).unwrap().size(), nat(0));
        // |C⁺| <= (s/(r+1))|C| for every C with C(k-1) ⊆ C ⊆ C(k)
        let (r, s) = (2u64, 4u64);
        let lo = slice_halfspace(6, 2, 0).unwrap().size();
        let cp_size = cplus(6, 2, 1).unwrap().size();
        assert!(cp_size.clone() * nat(r + 1) <= lo * nat(s));
    }

    #[test]
    fn split_examples() {
        let (a0, a1) = split_by_element(&ExplicitFamily::slice(4, 2).unwrap(), 4).unwrap();
        assert_eq!((a0.len(), a1.len()), (3, 3));
        let (a0, a1) = split_by_element(&star(4, 2, 4).unwrap(), 4).unwrap();
        assert!(a0.is_empty());
        assert_eq!(a1, ExplicitFamily::slice(3, 1).unwrap());
    }

    #[test]
    fn split_convexity_and_pigeonhole_ordering() {
        let slice = layer_sets(4, 2);
        let (n, r) = (4i64, 2i64);
        let s = n - r;
        for mask in 1u32..(1 << slice.len()) {
            let members = (0..slice.len()).filter(|i| mask >> i & 1 == 1).map(|i| slice[i]);
            let f = ExplicitFamily::with_layer(4, 2, members).unwrap();
            let e = pigeonhole_element(&f).unwrap();
            let count = f.members().iter().filter(|x| x.contains(e)).count() as i64;
            assert!(count * n >= r * f.len() as i64);
            let (alpha, a0, a1) = split_densities(&f, e).unwrap();
            assert_eq!(alpha, rat(s, n) * &a0 + rat(r, n) * &a1);
            assert!(a0 <= alpha && alpha <= a1);
        }
    }

    #[test]
    fn pigeonhole_examples() {
        let f = ExplicitFamily::from_element_lists(4, &[&[1, 2], &[1, 3], &[1, 4]]).unwrap().tagged();
        assert_eq!(pigeonhole_element(&f).unwrap(), 1);
        let f = ExplicitFamily::from_element_lists(4, &[&[1, 2]]).unwrap().tagged();
        assert_eq!(pigeonhole_element(&f).unwrap(), 1);
        assert_eq!(pigeonhole_element(&ExplicitFamily::slice(4, 2).unwrap()).unwrap(), 1);
        let empty = ExplicitFamily::with_layer(4, 2, []).unwrap();
        assert_eq!(pigeonhole_element(&empty), Err(Error::EmptyFamily));
    }

    #[test]
    fn complement_preserves_size_and_boundary() {
        let f = ExplicitFamily::from_element_lists(3, &[&[1]]).unwrap().tagged();
        let c = complement_family(&f).unwrap();
        assert_eq!(c.element_lists(), vec![vec![2, 3]]);
        assert_eq!(cube_boundary(&f).len(), cube_boundary(&c).len());
        let full = ExplicitFamily::slice(4, 2).unwrap();
        assert_eq!(complement_family(&full).unwrap(), full);
        let slice = layer_sets(5, 2);
        for mask in 0u32..(1 << slice.len()) {
            let members = (0..slice.len()).filter(|i| mask >> i & 1 == 1).map(|i| slice[i]);
            let f = ExplicitFamily::with_layer(5, 2, members).unwrap();
            let c = complement_family(&f).unwrap();
            assert_eq!(c.len(), f.len());
            assert_eq!(cube_boundary(&c).len(), cube_boundary(&f).len());
        }
    }
}
