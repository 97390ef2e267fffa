//! Canonical forms and decision procedures for the three decorated logics.
//!
//! Each decider reduces a decorated equation to a [`PureReduction`]: a set of
//! pure equations that is equivalent to it over the base theory, or one of
//! the two degenerate outcomes.

pub mod exc;
pub mod excore;
pub mod rules;
pub mod states;

use std::collections::BTreeSet;
use std::fmt;

use crate::error::Result;
use crate::model::FiniteModel;
use crate::signature::Signature;
use crate::term::Equation;
use crate::types::{Logic, ObjType};

/// Outcome of reducing a decorated equation to pure ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PureReduction {
    /// Equivalent to this set of strong pure equations.
    PureEqs(Vec<Equation>),
    /// Equivalent to the maximal theory.
    Inconsistent,
    /// The domain is empty, so the equation says nothing.
    EmptyDomain,
}

impl PureReduction {
    /// Builds a `PureEqs`, dropping reflexive members and duplicates.
    pub fn eqs(eqs: impl IntoIterator<Item = Equation>) -> PureReduction {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for e in eqs {
            debug_assert!(e.is_pure(), "non-pure member {e}");
            if !e.is_trivial() && seen.insert(e.clone()) {
                out.push(e);
            }
        }
        PureReduction::PureEqs(out)
    }

    /// Union of several reductions of one conjunction: an inconsistent part
    /// makes the whole inconsistent, empty-domain parts contribute nothing.
    pub fn combine(parts: impl IntoIterator<Item = PureReduction>) -> PureReduction {
        let mut eqs = Vec::new();
        let mut any_eqs = false;
        for p in parts {
            match p {
                PureReduction::Inconsistent => return PureReduction::Inconsistent,
                PureReduction::EmptyDomain => {}
                PureReduction::PureEqs(es) => {
                    any_eqs = true;
                    eqs.extend(es);
                }
            }
        }
        if any_eqs {
            PureReduction::eqs(eqs)
        } else {
            PureReduction::EmptyDomain
        }
    }

    pub fn pure_eqs(&self) -> &[Equation] {
        match self {
            PureReduction::PureEqs(es) => es,
            _ => &[],
        }
    }

    /// Truth in one model: empty domains hold, inconsistency fails.
    pub fn holds_in(&self, m: &FiniteModel) -> Result<bool> {
        match self {
            PureReduction::EmptyDomain => Ok(true),
            PureReduction::Inconsistent => Ok(false),
            PureReduction::PureEqs(es) => {
                for e in es {
                    if !m.sem_holds(e)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }
}

/// Which object types are empty.
///
/// `Empty` always is, `Unit` never is, and a base type is empty exactly when
/// a model gives it a zero-size carrier.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Emptiness {
    empty: BTreeSet<ObjType>,
}

impl Emptiness {
    /// Every base type inhabited.
    pub fn inhabited() -> Self {
        Emptiness::default()
    }

    pub fn from_model(m: &FiniteModel) -> Self {
        let empty = m
            .sizes()
            .iter()
            .filter(|(_, n)| **n == 0)
            .map(|(name, _)| ObjType::Base(name.clone()))
            .collect();
        Emptiness { empty }
    }

    pub fn with_empty(mut self, ty: ObjType) -> Self {
        self.empty.insert(ty);
        self
    }

    pub fn is_empty(&self, ty: &ObjType) -> bool {
        match ty {
            ObjType::Empty => true,
            ObjType::Unit => false,
            other => self.empty.contains(other),
        }
    }
}

/// The four answers of a check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Equal,
    NotEqual,
    Inconsistent,
    EmptyDom,
}

impl Verdict {
    pub fn passed(self) -> bool {
        matches!(self, Verdict::Equal | Verdict::EmptyDom)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Equal => "EQUAL",
            Verdict::NotEqual => "NOTEQUAL",
            Verdict::Inconsistent => "INCONSISTENT",
            Verdict::EmptyDom => "EMPTYDOM",
        })
    }
}

/// Dispatches to the decider of `logic`.
pub fn reduce_to_pure(e: &Equation, logic: Logic, sig: &Signature, emptiness: &Emptiness) -> Result<PureReduction> {
    match logic {
        Logic::Eqn => Ok(if emptiness.is_empty(e.dom()) {
            PureReduction::EmptyDomain
        } else {
            PureReduction::eqs([e.clone()])
        }),
        Logic::Exc => exc::decide_exc(e, emptiness),
        Logic::ExCore => excore::decide_core(e, emptiness),
        Logic::States => states::decide_state(e, sig, emptiness),
    }
}

/// Verdict of a reduction against a family of models: pure members must
/// hold in every one of them.
pub fn verdict(red: &PureReduction, models: &[FiniteModel]) -> Result<Verdict> {
    Ok(match red {
        PureReduction::Inconsistent => Verdict::Inconsistent,
        PureReduction::EmptyDomain => Verdict::EmptyDom,
        PureReduction::PureEqs(_) => match countermodel(red, models)? {
            None => Verdict::Equal,
            Some(_) => Verdict::NotEqual,
        },
    })
}

/// First model in which the reduction fails.
pub fn countermodel<'m>(red: &PureReduction, models: &'m [FiniteModel]) -> Result<Option<&'m FiniteModel>> {
    for m in models {
        if !red.holds_in(m)? {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

/// Decides `e` and evaluates the produced pure equations in `m`.
pub fn check(e: &Equation, logic: Logic, sig: &Signature, m: &FiniteModel) -> Result<bool> {
    reduce_to_pure(e, logic, sig, &Emptiness::from_model(m))?.holds_in(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::Term;

    #[test]
    fn combine_rules() {
        let n = ObjType::base("N");
        let e = Equation::strong(Term::id(n.clone()), Term::id(n)).unwrap();
        assert_eq!(
            PureReduction::combine([PureReduction::EmptyDomain, PureReduction::EmptyDomain]),
            PureReduction::EmptyDomain
        );
        assert_eq!(
            PureReduction::combine([PureReduction::eqs([e.clone()]), PureReduction::Inconsistent]),
            PureReduction::Inconsistent
        );
        // reflexive members vanish but the outcome stays a set of equations
        assert_eq!(
            PureReduction::combine([PureReduction::eqs([e]), PureReduction::EmptyDomain]),
            PureReduction::PureEqs(vec![])
        );
    }

    #[test]
    fn emptiness_defaults() {
        let em = Emptiness::inhabited();
        assert!(em.is_empty(&ObjType::Empty));
        assert!(!em.is_empty(&ObjType::Unit));
        assert!(!em.is_empty(&ObjType::base("N")));
        assert!(em.with_empty(ObjType::base("N")).is_empty(&ObjType::base("N")));
    }
}
