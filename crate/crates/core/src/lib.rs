//! Proof kernel and decision engine for decorated equational logics of
//! exceptions and global state.

pub mod cli;
pub mod engine;
pub mod enumerate;
pub mod error;
pub mod logic;
pub mod model;
pub mod signature;
pub mod syntax;
pub mod term;
pub mod translate;
pub mod types;

pub use error::{Error, Result};
pub use model::{enumerate_models, Denotation, FiniteModel, ModelBounds, Out};
pub use signature::Signature;
pub use syntax::{parse_equation, parse_term, Program};
pub use term::{compose, Atom, Equation, GenOp, Strength, Term};
pub use types::{Decoration, Logic, ObjType};
