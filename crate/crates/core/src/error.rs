use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every refusal the library can produce. Variants map one-to-one onto the
/// `kind` strings reported by the command-line front end.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("division by zero in rational literal at byte {offset}")]
    DivisionByZero { offset: usize },
    #[error("form is not homogeneous in (Y0, Y1); offending monomials: {}", monomials.join(", "))]
    NotHomogeneous { monomials: Vec<String> },
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("both operands are constant in y")]
    BothConstantInY,
    #[error("polynomial has degree zero in y")]
    DegreeZeroInY,
    #[error("form degree {0} is too small")]
    DegreeTooSmall(usize),
    #[error("polynomial is not primitive in y (content {content})")]
    NotPrimitive { content: String },
    #[error("polynomial is not separable in y")]
    NotSeparable,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("univariate input (d_x = {d_x}, d_y = {d_y})")]
    UnivariateInput { d_x: usize, d_y: usize },
    #[error("right-hand edge polynomial is not a power of an irreducible binomial: {0}")]
    NotUnibranchEdge(String),
    #[error("transformed form is divisible by Y1 (a linear factor was sent to infinity)")]
    DegreeDrop,
    #[error("polynomial is not minimal: {0}")]
    NotMinimal(String),
    #[error("substitution does not yield a polynomial; residual denominator {0}")]
    NotPolynomial(String),
    #[error("not a monic minimal polynomial: {0}")]
    NotMonicMinimal(String),
    #[error("polynomial is not monic in y")]
    NotMonic,
    #[error("polynomial is not absolutely irreducible")]
    NotIrreducible,
    #[error("Puiseux expansion needs an irrational root: {0}")]
    NonRationalBranch(String),
    #[error("series truncation insufficient at order {0}")]
    TruncationInsufficient(usize),
    #[error("parametrisation image is degenerate: {0}")]
    DegenerateImage(String),
    #[error("factors {0} and {1} are not coprime")]
    FactorsNotCoprime(usize, usize),
    #[error("discriminant degree {deg} is below the bound {bound}")]
    BoundViolated { deg: usize, bound: usize },
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("matrix determinant {0} is not a nonzero constant")]
    InvalidMatrix(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    /// Stable machine-readable identifier.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "SyntaxError",
            Error::DivisionByZero { .. } => "DivisionByZero",
            Error::NotHomogeneous { .. } => "NotHomogeneous",
            Error::ZeroPolynomial => "ZeroPolynomial",
            Error::BothConstantInY => "BothConstantInY",
            Error::DegreeZeroInY => "DegreeZeroInY",
            Error::DegreeTooSmall(_) => "DegreeTooSmall",
            Error::NotPrimitive { .. } => "NotPrimitive",
            Error::NotSeparable => "NotSeparable",
            Error::NotSquarefree => "NotSquarefree",
            Error::UnivariateInput { .. } => "UnivariateInput",
            Error::NotUnibranchEdge(_) => "NotUnibranchEdge",
            Error::DegreeDrop => "DegreeDrop",
            Error::NotMinimal(_) => "NotMinimal",
            Error::NotPolynomial(_) => "NotPolynomial",
            Error::NotMonicMinimal(_) => "NotMonicMinimal",
            Error::NotMonic => "NotMonic",
            Error::NotIrreducible => "NotIrreducible",
            Error::NonRationalBranch(_) => "NonRationalBranch",
            Error::TruncationInsufficient(_) => "TruncationInsufficient",
            Error::DegenerateImage(_) => "DegenerateImage",
            Error::FactorsNotCoprime(..) => "FactorsNotCoprime",
            Error::BoundViolated { .. } => "BoundViolated",
            Error::BadParams(_) => "BadParams",
            Error::InvalidMatrix(_) => "InvalidMatrix",
            Error::Internal(_) => "Internal",
        }
    }

    /// Byte offset for input errors, when one is known.
    pub fn offset(&self) -> Option<usize> {
        match self {
            Error::Syntax { offset, .. } | Error::DivisionByZero { offset } => Some(*offset),
            _ => None,
        }
    }

    /// Input-level errors (bad syntax) as opposed to refused operations.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Syntax { .. } | Error::DivisionByZero { .. } | Error::NotHomogeneous { .. }
        )
    }
}
