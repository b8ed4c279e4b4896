use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("uncertainty set violates b_hi >= g_hi >= b_lo >= g_lo >= 0: {0}")]
    OrderingViolation(String),
    #[error("choke price must be positive, got {0}")]
    NonPositiveChoke(f64),
    #[error("parameter `{name}` must be finite, got {value}")]
    NonFiniteParameter { name: &'static str, value: f64 },
    #[error("uncertainty set is a singleton; use the complete-information reply")]
    SingletonSet,
    #[error("degenerate best reply: {0}")]
    DegenerateMap(&'static str),
    #[error("quantity must be non-negative and finite, got {0}")]
    NegativeInput(f64),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("map is not in a chaotic regime ({0})")]
    NotChaoticRegime(&'static str),
    #[error("band clustering found {0} pieces, which is not a power of two")]
    PieceCountNotPowerOfTwo(usize),
    #[error("band boundaries do not match critical-orbit iterates: {0}")]
    BandBoundaryMismatch(String),
    #[error("lyapunov estimate needs at least {min} iterates, got {got}")]
    InsufficientIterations { min: usize, got: usize },
    #[error("not a first-period cycle: {0}")]
    NotACycle(String),
    #[error("no attractor catalog available for this regime")]
    NotClassified,
    #[error("symmetry check needs a square grid with identical axis ranges")]
    NotSquareGrid,
    #[error("every sweep point violates the ordering chain")]
    EmptySweep,
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv failure: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Stable machine-readable identifier, printed by the CLI on failure.
    pub fn code(&self) -> &'static str {
        match self {
            Error::OrderingViolation(_) => "OrderingViolation",
            Error::NonPositiveChoke(_) => "NonPositiveChoke",
            Error::NonFiniteParameter { .. } => "NonFiniteParameter",
            Error::SingletonSet => "SingletonSet",
            Error::DegenerateMap(_) => "DegenerateMap",
            Error::NegativeInput(_) => "NegativeInput",
            Error::InvalidParameters(_) => "InvalidParameters",
            Error::NotChaoticRegime(_) => "NotChaoticRegime",
            Error::PieceCountNotPowerOfTwo(_) => "PieceCountNotPowerOfTwo",
            Error::BandBoundaryMismatch(_) => "BandBoundaryMismatch",
            Error::InsufficientIterations { .. } => "InsufficientIterations",
            Error::NotACycle(_) => "NotACycle",
            Error::NotClassified => "NotClassified",
            Error::NotSquareGrid => "NotSquareGrid",
            Error::EmptySweep => "EmptySweep",
            Error::InvalidGrid(_) => "InvalidGrid",
            Error::InvalidConfig(_) => "InvalidConfig",
            Error::Io(_) => "IoFailure",
            Error::Csv(_) => "IoFailure",
        }
    }

    /// Process exit status used by the `duopoly` binary. Every variant maps
    /// to its own code; 1 and 2 are left to the runtime and argument parser.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::OrderingViolation(_) => 10,
            Error::NonPositiveChoke(_) => 11,
            Error::NonFiniteParameter { .. } => 12,
            Error::SingletonSet => 13,
            Error::DegenerateMap(_) => 14,
            Error::NegativeInput(_) => 15,
            Error::InvalidParameters(_) => 16,
            Error::NotChaoticRegime(_) => 17,
            Error::PieceCountNotPowerOfTwo(_) => 18,
            Error::BandBoundaryMismatch(_) => 19,
            Error::InsufficientIterations { .. } => 20,
            Error::NotACycle(_) => 21,
            Error::NotClassified => 22,
            Error::NotSquareGrid => 23,
            Error::EmptySweep => 24,
            Error::InvalidGrid(_) => 25,
            Error::InvalidConfig(_) => 26,
            Error::Io(_) | Error::Csv(_) => 27,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
