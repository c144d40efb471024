use thiserror::Error;

/// Every failure surfaced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field datum (p={p}, f={f}, e={e}): {reason}")]
    InvalidField { p: u64, f: u32, e: u32, reason: String },

    #[error("index {index} out of range for {bound} embeddings")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("digit {digit} out of range [0, {max}] at position {position}")]
    DigitRange { digit: u32, max: u32, position: usize },

    #[error("expected {expected} entries, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("character exponent has level {got}, expected level {expected}")]
    LevelMismatch { expected: u8, got: u8 },

    #[error("eta = {eta} satisfies eta = eta^q, so it does not define a cuspidal type")]
    Regularity { eta: u64 },

    #[error("shape {shape} is not admissible for type {tau}")]
    ShapeNotAdmissible { shape: String, tau: String },

    #[error("internal consistency failure: {0}")]
    NormFactor(String),

    #[error("weight {0} is Steinberg")]
    SteinbergInput(String),

    #[error("no integer solution for weight {0}")]
    NoIntegerSolution(String),

    #[error("no solution supplied for weight {0}")]
    MissingSolution(String),

    #[error("identity violated: {0}")]
    IdentityViolation(String),

    #[error("niveau {0} data are not supported here")]
    UnsupportedNiveau(u8),

    #[error("invalid inertial datum: {0}")]
    InvalidDatum(String),

    #[error("parse error at position {position} in {input:?}: {message}")]
    Parse { input: String, position: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(input: &str, position: usize, message: impl Into<String>) -> Self {
        Error::Parse { input: input.to_string(), position, message: message.into() }
    }
}
