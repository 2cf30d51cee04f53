use thiserror::Error;

use crate::model::ItemId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("item {0} has a zero dimension")]
    ZeroDimension(ItemId),
    #[error("duplicate item id {0}")]
    DuplicateId(ItemId),
    #[error("item {0} does not fit the region in any permitted orientation")]
    ItemTooLarge(ItemId),
    #[error("unknown item id {0}")]
    UnknownItem(ItemId),
    #[error("item {item} violates the precondition: {reason}")]
    Precondition { item: ItemId, reason: String },
    #[error("packing condition not satisfied: {0}")]
    Infeasible(String),
    #[error("budget exceeded: {what} needs {needed}, budget is {budget}")]
    Budget {
        what: &'static str,
        needed: u128,
        budget: u128,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn precondition(item: ItemId, reason: impl Into<String>) -> Self {
        Error::Precondition {
            item,
            reason: reason.into(),
        }
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
