//! Set families over `[n]`: explicit bit-vector families and
//! bipartition-symmetric profile families.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::exactmath::{binom, Natural};
use crate::{Error, Result};

/// Largest ambient dimension for explicit families.
pub const MAX_EXPLICIT_N: u32 = 24;

/// A subset of `[n]`; element `i` lives in bit `i - 1`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct VertexSet(pub u32);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn from_elements(elements: &[u32]) -> Self {
        VertexSet(elements.iter().fold(0, |acc, &e| acc | (1 << (e - 1))))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, e: u32) -> bool {
        self.0 >> (e - 1) & 1 == 1
    }

    pub fn with(self, e: u32) -> Self {
        VertexSet(self.0 | (1 << (e - 1)))
    }

    pub fn without(self, e: u32) -> Self {
        VertexSet(self.0 & !(1 << (e - 1)))
    }

    /// Flips element `e`: the neighbour of `self` in direction `e`.
    pub fn toggle(self, e: u32) -> Self {
        VertexSet(self.0 ^ (1 << (e - 1)))
    }

    pub fn elements(self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.len() as usize);
        let mut bits = self.0;
        while bits != 0 {
            out.push(bits.trailing_zeros() + 1);
            bits &= bits - 1;
        }
        out
    }

    /// `[n] \ self`
    pub fn complement(self, n: u32) -> Self {
        VertexSet(!self.0 & low_mask(n))
    }

    /// Deletes element `e` from the ground set, relabelling `e+1..` down by one.
    pub fn project_out(self, e: u32) -> Self {
        let low = self.0 & low_mask(e - 1);
        let high = (self.0 >> e) << (e - 1);
        VertexSet(low | high)
    }

    /// Inverse of [`project_out`](Self::project_out): re-inserts `e` into the
    /// ground set, present or absent.
    pub fn lift(self, e: u32, present: bool) -> Self {
        let low = self.0 & low_mask(e - 1);
        let high = (self.0 >> (e - 1)) << e;
        let lifted = VertexSet(low | high);
        if present {
            lifted.with(e)
        } else {
            lifted
        }
    }

    pub fn within(self, n: u32) -> bool {
        self.0 & !low_mask(n) == 0
    }
}

pub(crate) fn low_mask(n: u32) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elements().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// All `k`-subsets of `[n]` in colex order (increasing bitmask).
pub fn layer_sets(n: u32, k: u32) -> Vec<VertexSet> {
    if k > n {
        return Vec::new();
    }
    if k == 0 {
        return vec![VertexSet::EMPTY];
    }
    let mut out = Vec::new();
    let limit = 1u64 << n;
    let mut x: u64 = (1u64 << k) - 1;
    while x < limit {
        out.push(VertexSet(x as u32));
        // Gosper's hack
        let c = x & x.wrapping_neg();
        let r = x + c;
        x = (((r ^ x) >> 2) / c) | r;
    }
    out
}

/// Exact cardinality of a family.
pub trait Family {
    fn ambient(&self) -> u32;
    fn size(&self) -> Natural;
}

pub fn family_size<F: Family>(f: &F) -> Natural {
    f.size()
}

/// Explicit family of subsets of `[n]`, `n <= 24`.
///
/// Members are kept sorted by bitmask and deduplicated.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "FamilyJson", into = "FamilyJson")]
pub struct ExplicitFamily {
    n: u32,
    members: Vec<VertexSet>,
    layer: Option<u32>,
}

impl ExplicitFamily {
    pub fn new(n: u32, members: impl IntoIterator<Item = VertexSet>) -> Result<Self> {
        if n > MAX_EXPLICIT_N {
            return Err(Error::AmbientTooLarge { n, max: MAX_EXPLICIT_N });
        }
        let mut members: Vec<VertexSet> = members.into_iter().collect();
        if let Some(bad) = members.iter().find(|x| !x.within(n)) {
            return Err(Error::InvalidFamily(format!("{bad} is not a subset of [{n}]")));
        }
        members.sort_unstable();
        members.dedup();
        Ok(ExplicitFamily { n, members, layer: None })
    }

    /// A family tagged with layer `r`; every member must have `r` elements.
    pub fn with_layer(n: u32, r: u32, members: impl IntoIterator<Item = VertexSet>) -> Result<Self> {
        if r > n {
            return Err(Error::InvalidFamily(format!("layer {r} exceeds n = {n}")));
        }
        let mut f = Self::new(n, members)?;
        if let Some(bad) = f.members.iter().find(|x| x.len() != r) {
            return Err(Error::InvalidFamily(format!("{bad} is not in layer {r}")));
        }
        f.layer = Some(r);
        Ok(f)
    }

    pub fn from_element_lists(n: u32, lists: &[&[u32]]) -> Result<Self> {
        if let Some(bad) = lists.iter().flat_map(|l| l.iter()).find(|&&e| e == 0 || e > n) {
            return Err(Error::InvalidFamily(format!("element {bad} outside [{n}]")));
        }
        Self::new(n, lists.iter().map(|l| VertexSet::from_elements(l)))
    }

    pub fn empty(n: u32) -> Result<Self> {
        Self::new(n, std::iter::empty())
    }

    /// The full slice `S_n(r)`.
    pub fn slice(n: u32, r: u32) -> Result<Self> {
        Self::with_layer(n, r, layer_sets(n, r))
    }

    /// The Hamming ball `B_n(radius)`.
    pub fn ball(n: u32, radius: u32) -> Result<Self> {
        Self::new(n, (0..=radius.min(n)).flat_map(|k| layer_sets(n, k)))
    }

    /// Tags the family with its layer when all members share one size.
    pub fn tagged(mut self) -> Self {
        if let Some(first) = self.members.first() {
            let r = first.len();
            if self.members.iter().all(|x| x.len() == r) {
                self.layer = Some(r);
            }
        }
        self
    }

    pub fn retag(mut self, r: u32) -> Result<Self> {
        if r > self.n || self.members.iter().any(|x| x.len() != r) {
            return Err(Error::InvalidFamily(format!("not all members lie in layer {r}")));
        }
        self.layer = Some(r);
        Ok(self)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn layer(&self) -> Option<u32> {
        self.layer
    }

    pub fn members(&self) -> &[VertexSet] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: VertexSet) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn max_member_size(&self) -> Option<u32> {
        self.members.iter().map(|x| x.len()).max()
    }

    pub fn is_subset_of(&self, other: &ExplicitFamily) -> bool {
        self.members.iter().all(|&x| other.contains(x))
    }

    /// Members as sorted element lists, for display and serialization.
    pub fn element_lists(&self) -> Vec<Vec<u32>> {
        self.members.iter().map(|x| x.elements()).collect()
    }

    pub(crate) fn indicator(&self) -> Vec<bool> {
        let mut ind = vec![false; 1usize << self.n];
        for x in &self.members {
            ind[x.0 as usize] = true;
        }
        ind
    }
}

impl Family for ExplicitFamily {
    fn ambient(&self) -> u32 {
        self.n
    }

    fn size(&self) -> Natural {
        Natural::from(self.members.len())
    }
}

/// Family invariant under permutations fixing `Y = {1..m}` setwise,
/// given by the cells `(a, b) = (|X ∩ Y|, |X \ Y|)` it contains.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "FamilyJson", into = "FamilyJson")]
pub struct ProfileFamily {
    n: u32,
    m: u32,
    cells: Vec<bool>,
}

impl ProfileFamily {
    pub fn empty(n: u32, m: u32) -> Result<Self> {
        if m > n {
            return Err(Error::InvalidFamily(format!("split {m} exceeds n = {n}")));
        }
        Ok(ProfileFamily { n, m, cells: vec![false; ((m + 1) * (n - m + 1)) as usize] })
    }

    pub fn new(n: u32, m: u32, on_cells: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        let mut p = Self::empty(n, m)?;
        for (a, b) in on_cells {
            p.set(a, b, true)?;
        }
        Ok(p)
    }

    pub fn from_predicate(n: u32, m: u32, mut on: impl FnMut(u32, u32) -> bool) -> Result<Self> {
        let mut p = Self::empty(n, m)?;
        for a in 0..=m {
            for b in 0..=n - m {
                if on(a, b) {
                    let i = p.index(a, b);
                    p.cells[i] = true;
                }
            }
        }
        Ok(p)
    }

    /// Default split `m = floor(n/2)`.
    pub fn default_split(n: u32) -> u32 {
        n / 2
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    fn index(&self, a: u32, b: u32) -> usize {
        (a * (self.n - self.m + 1) + b) as usize
    }

    pub fn cell_exists(&self, a: u32, b: u32) -> bool {
        a <= self.m && b <= self.n - self.m
    }

    pub fn set(&mut self, a: u32, b: u32, on: bool) -> Result<()> {
        if !self.cell_exists(a, b) {
            return Err(Error::InvalidFamily(format!(
                "cell ({a},{b}) outside grid for n={}, m={}",
                self.n, self.m
            )));
        }
        let i = self.index(a, b);
        self.cells[i] = on;
        Ok(())
    }

    pub fn is_on(&self, a: u32, b: u32) -> bool {
        self.cell_exists(a, b) && self.cells[self.index(a, b)]
    }

    /// All grid cells in lexicographic `(a, b)` order.
    pub fn grid(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..=self.m).flat_map(move |a| (0..=self.n - self.m).map(move |b| (a, b)))
    }

    pub fn on_cells(&self) -> Vec<(u32, u32)> {
        self.grid().filter(|&(a, b)| self.is_on(a, b)).collect()
    }

    pub fn cell_count(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }

    /// `C(m, a) C(n-m, b)`
    pub fn cell_size(&self, a: u32, b: u32) -> Natural {
        if !self.cell_exists(a, b) {
            return Natural::zero();
        }
        binom(self.m as u64, a as u64) * binom((self.n - self.m) as u64, b as u64)
    }

    /// Which cell `x` falls in.
    pub fn cell_of(&self, x: VertexSet) -> (u32, u32) {
        let a = (x.0 & low_mask(self.m)).count_ones();
        (a, x.len() - a)
    }
}

impl Family for ProfileFamily {
    fn ambient(&self) -> u32 {
        self.n
    }

    fn size(&self) -> Natural {
        self.on_cells().into_iter().map(|(a, b)| self.cell_size(a, b)).sum()
    }
}

/// A profile family plus `taken` members of one extra cell.
///
/// Only the count of the partial cell is stored, not which members.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "FamilyJson", into = "FamilyJson")]
pub struct PaddedProfileFamily {
    base: ProfileFamily,
    cut_cell: Option<(u32, u32)>,
    taken: Natural,
}

impl PaddedProfileFamily {
    pub fn new(base: ProfileFamily, cut_cell: Option<(u32, u32)>, taken: Natural) -> Result<Self> {
        match cut_cell {
            None if !taken.is_zero() => {
                return Err(Error::InvalidFamily("taken > 0 without a cut cell".into()))
            }
            None => {}
            Some((a, b)) => {
                if !base.cell_exists(a, b) || base.is_on(a, b) {
                    return Err(Error::InvalidFamily(format!(
                        "cut cell ({a},{b}) must be an off cell of the base"
                    )));
                }
                if taken > base.cell_size(a, b) {
                    return Err(Error::InvalidFamily(format!(
                        "taken {taken} exceeds cell ({a},{b}) size"
                    )));
                }
            }
        }
        Ok(PaddedProfileFamily { base, cut_cell, taken })
    }

    pub fn unpadded(base: ProfileFamily) -> Self {
        PaddedProfileFamily { base, cut_cell: None, taken: Natural::zero() }
    }

    pub fn base(&self) -> &ProfileFamily {
        &self.base
    }

    pub fn cut_cell(&self) -> Option<(u32, u32)> {
        self.cut_cell
    }

    pub fn taken(&self) -> &Natural {
        &self.taken
    }

    /// Whether the family is exactly a profile family.
    pub fn is_exact_profile(&self) -> bool {
        match self.cut_cell {
            None => true,
            Some((a, b)) => self.taken.is_zero() || self.taken == self.base.cell_size(a, b),
        }
    }
}

impl Family for PaddedProfileFamily {
    fn ambient(&self) -> u32 {
        self.base.n
    }

    fn size(&self) -> Natural {
        self.base.size() + &self.taken
    }
}

/// All `k`-subsets of the element range `offset+1 ..= offset+width`.
fn block_sets(offset: u32, width: u32, k: u32) -> Vec<u32> {
    layer_sets(width, k).into_iter().map(|x| x.0 << offset).collect()
}

/// Materializes a profile family, `n <= 24`.
pub fn expand_profile(p: &ProfileFamily) -> Result<ExplicitFamily> {
    if p.n > MAX_EXPLICIT_N {
        return Err(Error::AmbientTooLarge { n: p.n, max: MAX_EXPLICIT_N });
    }
    let mut members = Vec::new();
    for (a, b) in p.on_cells() {
        let inside = block_sets(0, p.m, a);
        let outside = block_sets(p.m, p.n - p.m, b);
        for &x in &inside {
            members.extend(outside.iter().map(|&y| VertexSet(x | y)));
        }
    }
    ExplicitFamily::new(p.n, members)
}

/// Materializes a padded family, taking the cut cell's first `taken` members
/// in colex order.
pub fn expand_padded(p: &PaddedProfileFamily) -> Result<ExplicitFamily> {
    let base = expand_profile(&p.base)?;
    let Some((a, b)) = p.cut_cell else { return Ok(base) };
    let taken: usize = (&p.taken).try_into().map_err(|_| Error::Internal("cut cell count overflow".into()))?;
    let n = p.base.n;
    let mut cell: Vec<VertexSet> = layer_sets(n, a + b).into_iter().filter(|&x| p.base.cell_of(x) == (a, b)).collect();
    cell.truncate(taken);
    ExplicitFamily::new(n, base.members().iter().copied().chain(cell))
}

/// Recovers the profile of `f` under the split `Y = {1..m}`.
pub fn profile_of(f: &ExplicitFamily, m: u32) -> Result<ProfileFamily> {
    let mut p = ProfileFamily::empty(f.n, m)?;
    let mut counts = vec![0u64; p.cells.len()];
    for &x in f.members() {
        let (a, b) = p.cell_of(x);
        counts[p.index(a, b)] += 1;
    }
    for (a, b) in p.grid().collect::<Vec<_>>() {
        let present = Natural::from(counts[p.index(a, b)]);
        if present.is_zero() {
            continue;
        }
        let total = p.cell_size(a, b);
        if present != total {
            return Err(Error::NotProfileSymmetric { a, b, present, total });
        }
        p.set(a, b, true)?;
    }
    Ok(p)
}

/// Any of the three representations.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "FamilyJson", into = "FamilyJson")]
pub enum AnyFamily {
    Explicit(ExplicitFamily),
    Profile(ProfileFamily),
    Padded(PaddedProfileFamily),
}

impl Family for AnyFamily {
    fn ambient(&self) -> u32 {
        match self {
            AnyFamily::Explicit(f) => f.ambient(),
            AnyFamily::Profile(f) => f.ambient(),
            AnyFamily::Padded(f) => f.ambient(),
        }
    }

    fn size(&self) -> Natural {
        match self {
            AnyFamily::Explicit(f) => f.size(),
            AnyFamily::Profile(f) => f.size(),
            AnyFamily::Padded(f) => f.size(),
        }
    }
}

/// Wire shape of a family:
///
/// ```json
/// {"repr":"explicit","n":4,"layer":2,"members":[[1,2],[3,4]]}
/// {"repr":"profile","n":4,"m":2,"cells":[[0,1],[1,0]]}
/// {"repr":"padded","n":4,"m":2,"cells":[[0,1]],"cut_cell":[1,1],"taken":"3"}
/// ```
///
/// Members are 1-based element lists; `taken` is a decimal string.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "repr", rename_all = "lowercase")]
pub enum FamilyJson {
    Explicit {
        n: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        layer: Option<u32>,
        members: Vec<Vec<u32>>,
    },
    Profile {
        n: u32,
        m: u32,
        cells: Vec<[u32; 2]>,
    },
    Padded {
        n: u32,
        m: u32,
        cells: Vec<[u32; 2]>,
        cut_cell: Option<[u32; 2]>,
        taken: String,
    },
}

fn cells_json(p: &ProfileFamily) -> Vec<[u32; 2]> {
    p.on_cells().into_iter().map(|(a, b)| [a, b]).collect()
}

impl From<ExplicitFamily> for FamilyJson {
    fn from(f: ExplicitFamily) -> Self {
        FamilyJson::Explicit { n: f.n, layer: f.layer, members: f.element_lists() }
    }
}

impl From<ProfileFamily> for FamilyJson {
    fn from(p: ProfileFamily) -> Self {
        FamilyJson::Profile { n: p.n, m: p.m, cells: cells_json(&p) }
    }
}

impl From<PaddedProfileFamily> for FamilyJson {
    fn from(p: PaddedProfileFamily) -> Self {
        FamilyJson::Padded {
            n: p.base.n,
            m: p.base.m,
            cells: cells_json(&p.base),
            cut_cell: p.cut_cell.map(|(a, b)| [a, b]),
            taken: p.taken.to_string(),
        }
    }
}

impl From<AnyFamily> for FamilyJson {
    fn from(f: AnyFamily) -> Self {
        match f {
            AnyFamily::Explicit(f) => f.into(),
            AnyFamily::Profile(f) => f.into(),
            AnyFamily::Padded(f) => f.into(),
        }
    }
}

impl TryFrom<FamilyJson> for AnyFamily {
    type Error = Error;

    fn try_from(j: FamilyJson) -> Result<Self> {
        Ok(match j {
            FamilyJson::Explicit { n, layer, members } => {
                let lists: Vec<&[u32]> = members.iter().map(|l| l.as_slice()).collect();
                let f = ExplicitFamily::from_element_lists(n, &lists)?;
                AnyFamily::Explicit(match layer {
                    Some(r) => f.retag(r)?,
                    None => f,
                })
            }
            FamilyJson::Profile { n, m, cells } => {
                AnyFamily::Profile(ProfileFamily::new(n, m, cells.into_iter().map(|[a, b]| (a, b)))?)
            }
            FamilyJson::Padded { n, m, cells, cut_cell, taken } => {
                let base = ProfileFamily::new(n, m, cells.into_iter().map(|[a, b]| (a, b)))?;
                let taken: Natural = taken
                    .parse()
                    .map_err(|_| Error::InvalidFamily(format!("bad count {taken:?}")))?;
                AnyFamily::Padded(PaddedProfileFamily::new(base, cut_cell.map(|[a, b]| (a, b)), taken)?)
            }
        })
    }
}

macro_rules! narrow_from_json {
    ($ty:ident, $variant:ident, $name:literal) => {
        impl TryFrom<FamilyJson> for $ty {
            type Error = Error;

            fn try_from(j: FamilyJson) -> Result<Self> {
                match AnyFamily::try_from(j)? {
                    AnyFamily::$variant(f) => Ok(f),
                    _ => Err(Error::InvalidFamily(concat!("expected repr ", $name).into())),
                }
            }
        }
    };
}

narrow_from_json!(ExplicitFamily, Explicit, "explicit");
narrow_from_json!(ProfileFamily, Profile, "profile");
narrow_from_json!(PaddedProfileFamily, Padded, "padded");
