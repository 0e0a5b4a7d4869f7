use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A size guard would be exceeded; carries the guard name and its limit.
    #[error("guard `{guard}` exceeded: requested {requested}, limit {limit}")]
    Guard {
        guard: &'static str,
        limit: usize,
        requested: usize,
    },
    #[error("invalid parameters: {0}")]
    InvalidParameter(String),
    #[error("{0}")]
    Precondition(String),
    #[error("coefficient {index} requested beyond truncation order {order}")]
    Truncation { index: usize, order: usize },
    #[error("missing table value h({0})")]
    MissingTableEntry(usize),
    #[error("cover relations contain a cycle")]
    Cycle,
    #[error("element index {0} out of range")]
    OutOfRange(usize),
    #[error("elements {x} and {y} are not comparable as x <= y")]
    NotComparable { x: usize, y: usize },
    #[error("{0:?} is not a permutation of 1..n")]
    NotAPermutation(Vec<u8>),
    #[error("semigroup hypothesis fails: {left} + {right} = {sum} is not in {set}")]
    Hypothesis {
        left: usize,
        right: usize,
        sum: usize,
        set: &'static str,
    },
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn guard(guard: &'static str, limit: usize, requested: usize) -> Result<()> {
    if requested > limit {
        Err(Error::Guard {
            guard,
            limit,
            requested,
        })
    } else {
        Ok(())
    }
}
