use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LabError {
    #[error("field has {got} samples but the grid has {expected} nodes")]
    LengthMismatch { expected: usize, got: usize },
    #[error("field contains a non-finite sample at node {0}")]
    NonFinite(usize),
    #[error("weight pair (s = {s}, q = {q}) is not one of (0,2), (1,4), (2,2), (3,4)")]
    InvalidNormSpec { s: u32, q: u32 },
    #[error("{0} is undefined for the zero field")]
    ZeroField(&'static str),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("{fraction:.3e} of the Ḣ¹ mass falls outside the target grid")]
    OutsideGrid { fraction: f64 },
    #[error("mass left the grid: {fraction:.3e} of the mass sits in the outer 10% of the domain")]
    MassLeftGrid { fraction: f64 },
    #[error("insufficient history: {got} samples, need at least {need}")]
    InsufficientHistory { got: usize, need: usize },
}

pub type Result<T, E = LabError> = std::result::Result<T, E>;
