use thiserror::Error;

use crate::parse::ParseError;
use crate::poly::{PolyError, VarId};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("schema error: {0}")]
    Schema(String),

    #[error("duplicate basis name `{0}`")]
    DuplicateBasisName(String),

    #[error("empty basis")]
    EmptyBasis,

    #[error("polynomial syntax error in {context}: {source}")]
    Parse {
        context: String,
        #[source]
        source: ParseError,
    },

    #[error(transparent)]
    Poly(#[from] PolyError),

    #[error("parity-closure violation in {table} table at ({pair}): target `{target}`")]
    Parity {
        table: String,
        pair: String,
        target: String,
    },

    #[error("table entry ({pair}) in {table} table uses variables other than D and L")]
    IllegalVariable { table: String, pair: String },

    #[error("basis mismatch: rank {left} vs rank {right}")]
    BasisMismatch { left: usize, right: usize },

    #[error("dimension mismatch: map of rank {map} applied to element of rank {element}")]
    DimensionMismatch { map: usize, element: usize },

    #[error("module map entry ({row},{col}) is not a polynomial in D alone")]
    MapNotActionOnly { row: usize, col: usize },

    #[error("missing {0} table")]
    MissingTable(&'static str),

    #[error("missing auxiliary input: {0}")]
    MissingAux(&'static str),

    #[error("binder collision: operand already uses {0:?}")]
    BinderCollision(VarId),

    #[error("element is not even")]
    NotEven,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("parameter error: {0}")]
    Param(String),

    #[error("search space of {count} candidates exceeds ceiling {ceiling}")]
    CeilingExceeded { count: String, ceiling: u64 },

    #[error("not a Lie superalgebra: {0}")]
    NotLieSuperalgebra(String),

    #[error("FINDING: {0}")]
    Finding(String),

    #[error("unsupported prime modulus {0}")]
    UnsupportedPrime(u32),
}
