use thiserror::Error;

use crate::formula::GateId;
use crate::poly::VarId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("modulus {0} is not a prime below 2^32")]
    BadModulus(u64),

    #[error("product is not multilinear: variable {var} repeats")]
    MultilinearityViolation { var: VarId },

    #[error("no value assigned to variable {var}")]
    MissingAssignment { var: VarId },

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("formula is not syntactically multilinear: product gate {gate} shares {var} between children")]
    NotSyntacticMultilinear { gate: GateId, var: VarId },

    #[error("ambient set misses variable {var} from the root support")]
    AmbientTooSmall { var: VarId },

    #[error("product depth {found} exceeds requested depth {delta}")]
    DepthExceeded { found: usize, delta: usize },

    #[error("product depth {delta} is out of range for d = {d}")]
    BadDepth { d: usize, delta: usize },

    #[error("d = {d} exceeds the configured cap {cap}")]
    CapExceeded { d: usize, cap: usize },

    #[error("formula would have {size} gates, above the budget of {budget}")]
    SizeBudget { size: u128, budget: u128 },

    #[error("gate {0} does not exist")]
    NoSuchGate(GateId),

    #[error("gate {gate} references child {child} which is not defined before it")]
    BadChild { gate: GateId, child: GateId },

    #[error("sum and product gates need at least one child (gate {0})")]
    EmptyFanIn(GateId),

    #[error("gate {0} has more than one parent; not a formula")]
    NotATree(GateId),

    #[error("formula is not in (ΣΠ)^{delta}Σ shape: {msg}")]
    Shape { delta: usize, msg: String },

    #[error("invalid decomposition parameters: {0}")]
    Params(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("length mismatch: pi has {pi}, a has {a}")]
    LengthMismatch { pi: usize, a: usize },

    #[error("invalid restriction data: {0}")]
    BadRestriction(String),

    #[error("invalid coloring: {0}")]
    BadColoring(String),

    #[error("variable {var} lies outside Y ∪ Z")]
    SupportLeak { var: VarId },

    #[error("matrix of {rows}x{cols} exceeds the entry budget {budget}")]
    MatrixTooLarge { rows: usize, cols: usize, budget: usize },

    #[error("rank {first} mod {p1} disagrees with rank {second} mod {p2}")]
    PrimeDisagreement { p1: u64, first: usize, p2: u64, second: usize },

    #[error("factor variable sets overlap at {var}")]
    Overlap { var: VarId },

    #[error("cannot split {vars} variables into {parts} nonempty parts")]
    TooManyParts { parts: usize, vars: usize },

    #[error("support threshold {threshold} cannot be met with {vars} variables and {r} linear factors")]
    ThresholdUnsatisfiable { threshold: usize, vars: usize, r: usize },

    #[error("invalid generator setting: {0}")]
    Generator(String),

    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(format!("json: {e}"))
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(format!("csv: {e}"))
    }
}
