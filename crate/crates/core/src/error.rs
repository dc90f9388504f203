use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty set")]
    EmptySet,
    #[error("empty region")]
    EmptyRegion,
    #[error("unbounded region")]
    Unbounded,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("point ({0}, {1}) lies outside the scene domain")]
    OutsideDomain(f64, f64),
    #[error("collar too tight: {0}")]
    CollarTooTight(String),
    #[error("obstacle {0} meets the set being squeezed")]
    ObstacleMeetsSet(u32),
    #[error("big obstacle inside collar: element {0} cannot be avoided")]
    BigObstacle(u32),
    #[error("stage budget exceeded: no staging up to {0} stages satisfied the obstacle condition")]
    StageBudget(usize),
    #[error("chart margin violated for element {0}")]
    ChartMargin(u32),
    #[error("neighborhood packing failed for element {0}; refine the scene mesh")]
    PackingFailed(u32),
    #[error("activation failed for element {0}")]
    ActivationFailed(u32),
    #[error("injectivity certificate failed: {0}")]
    Injectivity(String),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("invariant violated (elements {ids:?}): {message}")]
    Invariant { ids: Vec<u32>, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn invariant(ids: impl Into<Vec<u32>>, message: impl Into<String>) -> Error {
    Error::Invariant { ids: ids.into(), message: message.into() }
}
