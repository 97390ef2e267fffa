//! The text DSL: signatures with optional model blocks, named terms and
//! checks.
//!
//! ```text
//! signature nat {
//!   logic exc; type N; param P = N;
//!   op s : N -> N pure; const three : N;
//!   model { N = {0,1,2,3}; s(x) = (x + 1) % 4; three = 3; }
//! }
//! term a : Unit -> N = s . throw[N] . three;
//! check ex : try (a) catch (s) == s . three;
//! ```
//!
//! Printing is the `Display` impl of [`Term`] and [`Equation`].

mod lexer;
mod parser;

use std::collections::BTreeMap;

use parser::Parser;

use crate::error::Result;
use crate::model::FiniteModel;
use crate::signature::Signature;
use crate::term::{Equation, Term};
use crate::types::Logic;

/// A `check` line of a program.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: Option<String>,
    pub equation: Equation,
    pub line: usize,
}

/// A parsed source file.
#[derive(Clone, Debug)]
pub struct Program {
    pub signature: Signature,
    pub model: Option<FiniteModel>,
    pub terms: Vec<(String, Term)>,
    pub checks: Vec<Check>,
}

impl Program {
    pub fn parse(src: &str) -> Result<Program> {
        Parser::new(src)?.program()
    }

    fn named(&self) -> BTreeMap<String, Term> {
        self.terms.iter().cloned().collect()
    }

    /// Parses an expression that may mention the program's named terms.
    pub fn term(&self, src: &str) -> Result<Term> {
        let named = self.named();
        let mut p = Parser::with_context(src, &self.signature, Some(&named))?;
        let t = p.expr()?;
        p.expect_end()?;
        Ok(t)
    }

    pub fn equation(&self, src: &str) -> Result<Equation> {
        let named = self.named();
        let mut p = Parser::with_context(src, &self.signature, Some(&named))?;
        let e = p.equation()?;
        p.expect_end()?;
        Ok(e)
    }

    /// The same declarations and model read in another logic.
    pub fn with_logic(&self, logic: Logic) -> Program {
        Program {
            signature: self.signature.with_logic(logic),
            model: self.model.as_ref().map(|m| m.with_logic(logic)),
            terms: Vec::new(),
            checks: Vec::new(),
        }
    }
}

pub fn parse_term(src: &str, sig: &Signature) -> Result<Term> {
    let mut p = Parser::with_context(src, sig, None)?;
    let t = p.expr()?;
    p.expect_end()?;
    Ok(t)
}

pub fn parse_equation(src: &str, sig: &Signature) -> Result<Equation> {
    let mut p = Parser::with_context(src, sig, None)?;
    let e = p.equation()?;
    p.expect_end()?;
    Ok(e)
}

/// Source of the built-in naturals signature with its mod-4 model.
pub const NATURALS: &str = "signature nat {
  logic excore;
  type N;
  param P = N;
  value V = N;
  op s : N -> N pure;
  op p : N -> N pure;
  const zero : N;
  const one : N;
  const two : N;
  const three : N;
  model {
    N = {0, 1, 2, 3};
    s(x) = (x + 1) % 4;
    p(x) = (x + 3) % 4;
    zero = 0;
    one = 1;
    two = 2;
    three = 3;
  }
}
";

/// The naturals modulo 4 with successor `s`, predecessor `p` and the
/// constants `zero` to `three`, read in `logic`.
pub fn naturals(logic: Logic) -> Program {
    Program::parse(NATURALS)
        .expect("built-in signature parses")
        .with_logic(logic)
}
