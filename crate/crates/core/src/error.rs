use thiserror::Error;

use crate::term::Position;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("position {pos} is not a position of {term}")]
    PositionOutOfTerm { pos: Position, term: String },

    #[error("malformed context {body}: expected exactly one hole, found {holes}")]
    MalformedContext { body: String, holes: usize },

    #[error("the hole symbol may not occur in {0}")]
    HoleInTerm(String),

    #[error("{term} at position {pos} is not an instance of the left-hand side of rule {rule}")]
    NotARedex { term: String, pos: Position, rule: usize },

    #[error("no rule applies to {term} at position {pos}")]
    NoRedexAt { term: String, pos: Position },

    #[error("unknown function symbol {0}")]
    UnknownSymbol(String),

    #[error("positions {0} and {1} are not parallel")]
    NotParallel(Position, Position),

    #[error("a parallel step needs at least one position")]
    EmptyStep,

    #[error("rule {index} does not exist (the system has {count} rules)")]
    RuleIndexOutOfRange { index: usize, count: usize },

    #[error("left-hand side of rule {0} is a variable")]
    VariableLhs(String),

    #[error("rule {rule}: right-hand side variable {var} does not occur on the left")]
    ExtraRhsVariable { rule: String, var: String },

    #[error("symbol {symbol} used with arity {found}, expected {expected}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },

    #[error("redex at {0} is a variable")]
    VariableRedex(Position),

    #[error("step {step}: {source}")]
    InvalidStep {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("loop does not close: expected {expected}, derivation ends in {actual}")]
    ClosingMismatch { expected: String, actual: String },

    #[error("the loop has no steps")]
    EmptyLoop,

    #[error("strategy {strategy} cannot be checked on this certificate: {reason}")]
    ShapeMismatch { strategy: String, reason: String },

    #[error("unknown strategy {0:?}")]
    UnknownStrategy(String),

    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },

    #[error("{0}")]
    Io(String),
}

impl Error {
    pub(crate) fn at_step(self, step: usize) -> Error {
        Error::InvalidStep {
            step,
            source: Box::new(self),
        }
    }
}
