use crate::exactmath::Natural;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("ambient dimension {n} exceeds the explicit limit {max}")]
    AmbientTooLarge { n: u32, max: u32 },

    #[error("family must be tagged with a uniform layer")]
    Untagged,

    #[error("{member} has {size} elements, outside the ball of radius {radius}")]
    OutsideBall { member: String, size: u32, radius: u32 },

    #[error("cell ({a},{b}) is partially occupied: {present} of {total} members present")]
    NotProfileSymmetric { a: u32, b: u32, present: Natural, total: Natural },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("slice too large: C({n},{r}) = {size} exceeds the exhaustive limit {max}")]
    SliceTooLarge { n: u32, r: u32, size: Natural, max: u32 },

    #[error("budget exceeded: {needed} candidate sets, budget {budget}")]
    BudgetExceeded { needed: Natural, budget: u128 },

    #[error("family is empty")]
    EmptyFamily,

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("no r <= R with |B_n(r)| >= eps|A|")]
    NoValidR0,

    #[error("invalid family: {0}")]
    InvalidFamily(String),

    #[error("internal invariant broken: {0}")]
    Internal(String),
}
