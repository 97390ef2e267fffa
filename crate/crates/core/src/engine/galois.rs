//! The Galois connection between theories of the pure sublogic and
//! theories of a decorated logic, at bounded scale.
//!
//! `F` generates a theory of the larger logic from pure axioms; `G` keeps
//! the pure theorems. Both sides live on fixed universes: the decorated one
//! and its pure part.

use std::collections::HashMap;
use std::sync::Arc;

use super::closure::Theory;
use super::universe::{Universe, DEFAULT_CAP};
use crate::error::Result;
use crate::signature::Signature;
use crate::term::Equation;
use crate::types::Logic;

#[derive(Clone, Debug)]
pub struct Connection {
    base: Theory,
    base0: Theory,
}

impl Connection {
    pub fn new(sig: &Signature, logic: Logic, depth: usize) -> Result<Connection> {
        let u = Universe::new(sig, logic, depth, logic == Logic::Exc, DEFAULT_CAP)?;
        let u0 = u.pure_part();
        Ok(Connection {
            base: Theory::base(Arc::new(u)),
            base0: Theory::base(Arc::new(u0)),
        })
    }

    pub fn logic(&self) -> Logic {
        self.base.universe().logic()
    }

    pub fn universe(&self) -> &Arc<Universe> {
        self.base.universe()
    }

    pub fn pure_universe(&self) -> &Arc<Universe> {
        self.base0.universe()
    }

    /// Closure of `axioms` in the decorated logic.
    pub fn closure(&self, axioms: &[Equation]) -> Result<Theory> {
        self.base.with(axioms)
    }

    /// Closure of pure `axioms` in the pure sublogic.
    pub fn closure0(&self, axioms: &[Equation]) -> Result<Theory> {
        self.base0.with(axioms)
    }

    /// `F(T0)`: the decorated theory generated by the theorems of `t0`.
    pub fn galois_f(&self, t0: &Theory) -> Result<Theory> {
        if t0.is_full() {
            return Ok(self.base.with_all_pure());
        }
        self.base.with(&t0.strong_members())
    }

    /// `G(T)`: the pure theorems of `t`.
    pub fn galois_g(&self, t: &Theory) -> Result<Theory> {
        if t.is_maximal() {
            return Ok(self.base0.with_all_pure());
        }
        let u = self.base.universe();
        let u0 = self.base0.universe();
        let mut first: HashMap<usize, usize> = HashMap::new();
        let mut eqs = Vec::new();
        for (i0, term) in u0.terms().iter().enumerate() {
            let i = u.index_of(term).expect("pure part of the universe");
            let rep = t.strong_find(i);
            match first.get(&rep) {
                Some(&j0) => eqs.push(Equation::strong(u0.term(j0).clone(), term.clone())?),
                None => {
                    first.insert(rep, i0);
                }
            }
        }
        self.base0.with(&eqs)
    }
}
