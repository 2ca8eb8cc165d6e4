use thiserror::Error;

/// Errors raised by the symbolic layer, the operator calculus and the CLI front end.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("evaluation at pole")]
    EvaluationAtPole,
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("`{0}` is not a coordinate of the chart")]
    NotACoordinate(String),
    #[error("invalid chart: {0}")]
    InvalidChart(String),
    #[error("variable `{0}` has no value at the evaluation point")]
    UnassignedVariable(String),
    #[error("elements live on different charts")]
    ChartMismatch,
    #[error("variance mismatch: expected {expected}, found {found}")]
    VarianceMismatch {
        expected: &'static str,
        found: &'static str,
    },
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("cannot sum operators of degrees {0} and {1}")]
    InhomogeneousSum(i32, i32),
    #[error("top symbol not a multivector: {0}")]
    TopSymbolNotMultivector(String),
    #[error("operator is not tensorial: {0}")]
    NotTensorial(String),
    #[error("decomposition does not reconstruct the operator: {0}")]
    ReconstructionMismatch(String),
    #[error("unbound parameter `{0}`")]
    UnboundParameter(String),
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
