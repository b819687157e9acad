use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },

    #[error("invalid algebra description: {0}")]
    Semantic(String),

    #[error("unsupported field characteristic {0}")]
    UnsupportedField(u32),

    #[error("relation {index} is not admissible: {reason}")]
    NotAdmissible { index: usize, reason: String },

    #[error("algebra is not finite-dimensional within path length bound {bound}")]
    NotFiniteDimensional { bound: usize },

    #[error("algebra is not self-injective: {0}")]
    NotSelfInjective(String),

    #[error("matrix is not an automorphism: {0}")]
    NotAutomorphism(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("not a module homomorphism: {0}")]
    NotHomomorphism(String),

    #[error("resource bound exceeded: {0}")]
    ResourceBound(String),

    #[error("no quasi-period found up to {max_n}")]
    NoPeriod { max_n: usize },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("sequence is not exact at position {position}")]
    NotExact { position: usize },

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
