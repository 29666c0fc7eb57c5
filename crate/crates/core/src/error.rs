use thiserror::Error;

use crate::relation::{AttributeName, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelationError {
    #[error("attribute names must be nonempty")]
    EmptyAttributeName,
    #[error("attribute `{0}` listed twice")]
    DuplicateAttribute(AttributeName),
    #[error("header must be listed in sorted order (found `{found}` after `{after}`)")]
    UnsortedHeader { after: AttributeName, found: AttributeName },
    #[error("tuple has {found} values but the header has {expected} attributes")]
    ArityMismatch { expected: usize, found: usize },
    #[error("attribute `{0}` has an empty domain")]
    EmptyDomain(AttributeName),
    #[error("attribute `{0}` is not part of the universe")]
    UnknownAttribute(AttributeName),
    #[error("value `{value}` is outside the domain of `{attribute}`")]
    ValueOutsideDomain { attribute: AttributeName, value: Value },
    #[error("search space of {tuples} candidate tuples exceeds the bound of {bound}")]
    SearchSpaceTooLarge { tuples: u128, bound: u128 },
}

#[derive(Debug, Error)]
pub enum LiteralError {
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Relation(#[from] RelationError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}
