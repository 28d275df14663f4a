use thiserror::Error;

/// Errors produced by game construction, the Hodge solvers and the path sampler.
///
/// Player fields hold 0-based indices; messages render them 1-based.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("player count must be at least 1, got {0}")]
    NoPlayers(usize),

    #[error("player count {players} exceeds the supported maximum of {max}")]
    TooManyPlayers { players: usize, max: usize },

    #[error("player {} is out of range for a {players}-player game", .player + 1)]
    PlayerOutOfRange { player: usize, players: usize },

    #[error("coalition {coalition} is not a subset of a {players}-player set")]
    CoalitionOutOfRange { coalition: String, players: usize },

    #[error("the empty coalition must have value 0, got {0}")]
    NonzeroEmptyValue(f64),

    #[error("support coalition must be nonempty")]
    EmptySupport,

    #[error("player {} must not belong to the base coalition", .player + 1)]
    PlayerInBase { player: usize },

    #[error("expected a table of length {expected}, got {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("player count mismatch: {left} vs {right}")]
    PlayerCountMismatch { left: usize, right: usize },

    #[error("restriction needs at least 2 players")]
    RestrictSinglePlayer,

    #[error("permutation enumeration is capped at {cap} players, got {players}")]
    EnumerationCap { players: usize, cap: usize },

    #[error("axiomatic recursion is capped at {cap} players, got {players}")]
    DepthCap { players: usize, cap: usize },

    #[error("dense solve is limited to {max} players, got {players}")]
    DenseTooLarge { players: usize, max: usize },

    #[error("right-hand side is not orthogonal to constants (sum {sum:e})")]
    InconsistentRhs { sum: f64 },

    #[error("solver did not converge after {iterations} iterations (relative residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("component solve for player {} failed: {source}", .player + 1)]
    Component {
        player: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("linear solve failed (relative residual {residual:e})")]
    SolveFailure { residual: f64 },

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("sample {sample} did not reach the target within {steps} steps")]
    StepCapExceeded { sample: u64, steps: u64 },

    #[error("sample count must be at least 1")]
    NoSamples,

    #[error("player {} is not a null player (max marginal {defect:e})", .player + 1)]
    NotNullPlayer { player: usize, defect: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
