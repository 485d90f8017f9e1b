use std::time::Duration;

use thiserror::Error;

use crate::formula::{VariableId, WeakeningLocus};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("variable {0} is not assigned")]
    Unassigned(VariableId),
    #[error("variable {0} occurs twice in one term")]
    RepeatedVariable(VariableId),
    #[error("formula {formula} has width {width}, exceeding k = {k}")]
    WidthExceeded { formula: usize, width: usize, k: usize },
    #[error("variable {id} is outside the universe 1..={nvars}")]
    VariableOutOfRange { id: VariableId, nvars: usize },
    #[error("weakening locus ({0}) is out of range")]
    LocusOutOfRange(WeakeningLocus),
    #[error("invalid weakening locus {0:?}, expected formula,term,literal")]
    InvalidLocus(String),
    #[error("duplicate variable name {0}")]
    DuplicateName(String),
    #[error("invalid variable name {0:?}")]
    InvalidName(String),
    #[error("block {block} does not have width {width}")]
    BlockWidth { block: usize, width: usize },
    #[error("variable {0} belongs to more than one block")]
    OverlappingBlocks(VariableId),
    #[error("atom references block {0}, which does not exist")]
    UnknownBlock(usize),
    #[error("variable {id} is named {left} on one side and {right} on the other")]
    UniverseMismatch { id: VariableId, left: String, right: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("brute force refused: {nvars} variables exceeds the cap of {cap}")]
    BruteForceCap { nvars: usize, cap: usize },
    #[error("XOR encoding refused: block width {width} exceeds the cap of {cap}")]
    XorCap { width: usize, cap: usize },
    #[error("time budget of {0:?} exceeded")]
    Timeout(Duration),
    #[error("solver returned a model that does not satisfy the query")]
    UnsoundModel,
    #[error("external solver: {0}")]
    External(String),
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

impl SolveError {
    pub fn is_timeout(&self) -> bool {
        matches!(self, SolveError::Timeout(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("parameter {name} = {value} is out of range (need {requirement})")]
    Parameter { name: &'static str, value: usize, requirement: &'static str },
    #[error("instance would have {terms} terms, exceeding the size guard of {cap}")]
    TooLarge { terms: u128, cap: usize },
    #[error("input is not a CNF formula: formula {0} has a term with more than one literal")]
    NotCnf(usize),
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError { line, message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("brute force and search disagree on {context}: brute force says {brute}, search says {search}")]
    OracleDisagreement { context: String, brute: &'static str, search: &'static str },
    #[error("witness for {0} does not satisfy the instance it certifies")]
    InvalidWitness(String),
    #[error("scan refused: {0}")]
    ScanTooLarge(String),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
}
