use thiserror::Error;

use crate::textio::ParseError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("D_{k} applied to a monomial of order {order}")]
    IndexOutOfOrder { k: usize, order: usize },

    #[error("order mismatch: {0}")]
    OrderMismatch(String),

    #[error("family {family} has no mapping {mapping}")]
    UnsupportedMapping { family: String, mapping: String },

    #[error("{identity} does not apply to {target}")]
    NotApplicable { identity: String, target: String },

    #[error("Leibniz expansion of a formal antiderivative of a product is undefined")]
    NegativePowerGroup,

    #[error("commutative limits are taken of noncommutative families only, not {0}")]
    UnsupportedFamily(String),

    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T> = std::result::Result<T, Error>;
