use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("duplicate subsystem label `{0}`")]
    DuplicateLabel(String),

    #[error("unknown subsystem label `{0}`")]
    UnknownLabel(String),

    #[error("subsystem `{subsystem}` has no basis state `{label}`")]
    UnknownBasisLabel { subsystem: String, label: String },

    #[error("subsystem `{label}` has dimension {dim}; dimensions must be at least 2")]
    DimensionTooSmall { label: String, dim: usize },

    #[error("total dimension {0} exceeds the supported maximum of {max}", max = crate::hilbert::MAX_DIMENSION)]
    TooLarge(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("layouts differ: {0}")]
    LayoutMismatch(String),

    #[error("operator `{name}` is not unitary (max |U†U - I| = {deviation:e})")]
    NotUnitary { name: String, deviation: f64 },

    #[error("operator is not a projector (max deviation {deviation:e})")]
    NotProjector { deviation: f64 },

    #[error("not a valid density operator: {0}")]
    InvalidDensity(String),

    #[error("partial trace needs at least one subsystem to keep")]
    EmptyKeepSet,

    #[error("measurement basis is not orthonormal (max |G - I| = {deviation:e})")]
    NonOrthonormalBasis { deviation: f64 },

    #[error("measurement basis has {found} vectors but the target space has dimension {expected}")]
    IncompleteBasis { expected: usize, found: usize },

    #[error("state has zero norm")]
    ZeroNorm,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("time {t} lies outside the domain [{start}, {end}]")]
    OutsideDomain { t: f64, start: f64, end: f64 },

    #[error("detection probability at t0 is {cdf}; nothing left to condition on")]
    NothingToCondition { cdf: f64 },

    #[error("operation on Bob's side touches Alice's subsystem `{0}`")]
    TouchesAlice(String),

    #[error("projector supports overlap on subsystem `{0}`")]
    OverlappingSupports(String),

    #[error("history is empty")]
    EmptyHistory,

    #[error("history times must be strictly increasing ({prev} then {next})")]
    UnorderedHistory { prev: f64, next: f64 },
}
