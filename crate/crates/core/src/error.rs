use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid intersection form: {0}")]
    InvalidForm(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("class {0} is not characteristic for the intersection form")]
    NotCharacteristic(String),

    #[error("class {0} is not a complex class")]
    NotComplex(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("wrong route: {0}")]
    WrongRoute(String),

    #[error("surface must be connected")]
    Disconnected,

    #[error("constant polynomial has no foliation singularity")]
    ConstantPolynomial,

    #[error("singularity is not isolated: tangent field vanishes along {factor} = 0")]
    NonIsolated { factor: String },

    #[error("negative-type singularity `{0}` is not allowed here")]
    NegativeSingularity(String),

    #[error("unstable oracle count: {0}")]
    Unstable(String),

    #[error("point too close to chart boundary: {0}")]
    Boundary(String),

    #[error("degenerate metric: {0}")]
    DegenerateMetric(String),

    #[error("almost-complex structure fails orthogonality: {0}")]
    NotOrthogonal(String),

    #[error("degenerate plane field: {0}")]
    DegeneratePlane(String),

    #[error("search space too large: {size} candidates exceeds limit {limit}; lower the bound")]
    SearchTooLarge { size: u128, limit: u128 },

    #[error("no plan: {0}")]
    Plan(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown name `{0}`")]
    UnknownName(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by malformed user input rather than by the mathematics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse(_)
                | Error::UnknownName(_)
                | Error::InvalidForm(_)
                | Error::DimensionMismatch { .. }
                | Error::Io(_)
                | Error::Json(_)
                | Error::Disconnected
        )
    }
}
