use crate::exactlinalg::Rat;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("the vector list does not span the ambient space")]
    NotSpanning,

    #[error("vector {0} is not integral in lattice coordinates")]
    NotIntegral(String),

    #[error("the list contains the zero vector")]
    ZeroVector,

    #[error("sub-basis is rank deficient")]
    RankDeficient,

    #[error("point {0} lies on an affine wall")]
    Irregular(String),

    #[error("topes are not adjacent: {0}")]
    NotAdjacent(String),

    #[error("degenerate facet: {0}")]
    DegenerateFacet(String),

    #[error("covector does not polarize the list: {0}")]
    InvalidPolarization(String),

    #[error("cone generated by the list is not pointed")]
    NotPointed,

    #[error("point is not generic: {0}")]
    NonGeneric(String),

    #[error("beta is not generic: {condition}{}", suggestion_text(.suggestion))]
    Genericity {
        condition: String,
        suggestion: Option<Vec<Rat>>,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("internal consistency error: {0}")]
    Internal(String),
}

fn suggestion_text(s: &Option<Vec<Rat>>) -> String {
    match s {
        Some(v) => format!(
            "; try beta = ({})",
            v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        ),
        None => String::new(),
    }
}

impl Error {
    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Irregular(_) | Error::NonGeneric(_) | Error::Genericity { .. } => 3,
            Error::Internal(_) => 1,
            _ => 2,
        }
    }
}
