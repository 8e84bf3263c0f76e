use thiserror::Error;

/// Errors raised by the belief-function engine, the formula compiler and
/// network evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid variable name `{0}`")]
    InvalidVariableName(String),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("frame must hold between 1 and {max} variables, got {got}")]
    FrameSize { got: usize, max: usize },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("operands are defined on different frames")]
    FrameMismatch,
    #[error("target frame is not a superframe of the source frame")]
    NotASuperframe,
    #[error("target frame is not a subframe of the source frame")]
    NotASubframe,
    #[error("simple support function needs a non-empty focus")]
    EmptyFocus,
    #[error("weight {0} is outside [0, 1]")]
    WeightOutOfRange(f64),
    #[error("invalid mass function: {0}")]
    InvalidMass(String),
    #[error("total conflict (conflict mass {conflict_mass}): Dempster normalization is impossible")]
    TotalConflict { conflict_mass: f64 },
    #[error("syntax error at offset {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("formula mentions unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("constraint `{0}` is unsatisfiable")]
    ContradictoryConstraint(String),
    #[error("invalid network: {0}")]
    InvalidNetwork(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
