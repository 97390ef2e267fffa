use std::fmt;

use thiserror::Error;

use crate::types::{Logic, ObjType};

/// Errors raised by the kernel, the DSL front end and the deciders.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },

    #[error("type mismatch: {0}")]
    TypeMismatch(Box<Mismatch>),

    #[error("ill-typed term: {0}")]
    IllTyped(String),

    #[error("`{atom}` is not part of the {logic} language")]
    IllegalAtom { atom: String, logic: Logic },

    #[error("unknown name `{0}`")]
    Unknown(String),

    #[error("invalid signature: {0}")]
    Signature(String),

    #[error("invalid model: {0}")]
    Model(String),

    #[error("no interpretation for generator `{0}`")]
    MissingInterpretation(String),

    #[error("family mismatch: expected {expected}, found {found}")]
    FamilyMismatch { expected: Logic, found: Logic },

    #[error("{0} equations are not available in this logic")]
    WeakEquation(Logic),

    #[error("catcher has no canonical form: {0}")]
    NoCanonicalForm(String),

    #[error("no inhabitant known for non-empty type {0}")]
    MissingWitness(ObjType),

    #[error("invalid bounds: {0}")]
    Bounds(String),

    #[error("bounded universe exceeds the cap of {cap} terms")]
    UniverseTooLarge { cap: usize },

    #[error("equation lies outside the bounded universe: {0}")]
    OutsideUniverse(String),

    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Two atoms that do not compose.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub inner: String,
    pub inner_dom: ObjType,
    pub inner_cod: ObjType,
    pub outer: String,
    pub outer_dom: ObjType,
    pub outer_cod: ObjType,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "cannot apply `{}` ({} -> {}) after `{}` ({} -> {})",
            self.outer, self.outer_dom, self.outer_cod, self.inner, self.inner_dom, self.inner_cod
        )
    }
}
