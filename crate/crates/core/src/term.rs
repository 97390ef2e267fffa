//! Decorated terms as flat composition chains.
//!
//! A [`Term`] stores its atoms in application order: `atoms[0]` runs first.
//! The textual form lists them the other way round, so `s . throw[N] . three`
//! is stored as `[three, throw[N], s]`. Associativity and the unit laws hold
//! on the nose, which makes every "unique decomposition" used by the
//! normalizers a plain index scan.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Mismatch, Result};
use crate::types::{Decoration, Logic, ObjType};

/// A generator of the signature, carrying its own typing.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct GenOp {
    pub name: Arc<str>,
    pub dom: ObjType,
    pub cod: ObjType,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Atom {
    /// Pure generator or constant (a constant has domain `Unit`).
    Gen(GenOp),
    /// `[ ]_Y : Empty -> Y`.
    Copa(ObjType),
    /// `< >_X : X -> Unit`.
    Pa(ObjType),
    /// `throw_Y : P -> Y`.
    Throw { param: ObjType, cod: ObjType },
    /// `try (a) catch (b)` with `a : X -> Y` and `b : P -> Y`.
    TryCatch(Box<Term>, Box<Term>),
    /// `tag : P -> Empty`.
    Tag(ObjType),
    /// `untag : Empty -> P`.
    Untag(ObjType),
    /// `TRY(a, k)` with `a : X -> Y` and `k : Y -> Y`.
    TryCore(Box<Term>, Box<Term>),
    /// `CATCH(b) : Y -> Y` with `b : P -> Y`.
    CatchCore(Box<Term>),
    /// `lookup : Unit -> V`.
    Lookup(ObjType),
    /// `update : V -> Unit`.
    Update(ObjType),
}

impl Atom {
    pub fn dom(&self) -> ObjType {
        match self {
            Atom::Gen(g) => g.dom.clone(),
            Atom::Copa(_) | Atom::Untag(_) => ObjType::Empty,
            Atom::Pa(x) => x.clone(),
            Atom::Throw { param, .. } | Atom::Tag(param) => param.clone(),
            Atom::TryCatch(a, _) | Atom::TryCore(a, _) => a.dom.clone(),
            Atom::CatchCore(b) => b.cod.clone(),
            Atom::Lookup(_) => ObjType::Unit,
            Atom::Update(v) => v.clone(),
        }
    }

    pub fn cod(&self) -> ObjType {
        match self {
            Atom::Gen(g) => g.cod.clone(),
            Atom::Copa(y) => y.clone(),
            Atom::Pa(_) | Atom::Update(_) => ObjType::Unit,
            Atom::Throw { cod, .. } => cod.clone(),
            Atom::TryCatch(a, _) | Atom::TryCore(a, _) => a.cod.clone(),
            Atom::CatchCore(b) => b.cod.clone(),
            Atom::Tag(_) => ObjType::Empty,
            Atom::Untag(p) => p.clone(),
            Atom::Lookup(v) => v.clone(),
        }
    }

    pub fn decoration(&self) -> Decoration {
        match self {
            Atom::Gen(_) | Atom::Copa(_) | Atom::Pa(_) => Decoration::PURE,
            Atom::Throw { .. } | Atom::TryCatch(..) | Atom::Tag(_) | Atom::TryCore(..) | Atom::Lookup(_) => {
                Decoration::MID
            }
            Atom::Untag(_) | Atom::CatchCore(_) | Atom::Update(_) => Decoration::TOP,
        }
    }

    /// Number of atoms, counting those nested inside `try`, `TRY` and `CATCH`.
    pub fn size(&self) -> usize {
        match self {
            Atom::TryCatch(a, b) | Atom::TryCore(a, b) => 1 + a.size() + b.size(),
            Atom::CatchCore(b) => 1 + b.size(),
            _ => 1,
        }
    }

    /// Whether the atom (and everything nested in it) belongs to `logic`.
    pub fn legal_in(&self, logic: Logic) -> bool {
        match self {
            Atom::Gen(_) => true,
            Atom::Copa(_) => matches!(logic, Logic::Eqn | Logic::Exc | Logic::ExCore),
            Atom::Pa(_) | Atom::Lookup(_) | Atom::Update(_) => logic == Logic::States,
            Atom::Throw { .. } => logic == Logic::Exc,
            Atom::TryCatch(a, b) => logic == Logic::Exc && a.legal_in(logic) && b.legal_in(logic),
            Atom::Tag(_) | Atom::Untag(_) => logic == Logic::ExCore,
            Atom::TryCore(a, k) => logic == Logic::ExCore && a.legal_in(logic) && k.legal_in(logic),
            Atom::CatchCore(b) => logic == Logic::ExCore && b.legal_in(logic),
        }
    }

    fn head(&self) -> String {
        match self {
            Atom::TryCatch(..) => "try".into(),
            Atom::TryCore(..) => "TRY".into(),
            Atom::CatchCore(_) => "CATCH".into(),
            other => other.to_string(),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Gen(g) => f.write_str(&g.name),
            Atom::Copa(y) => write!(f, "copa[{y}]"),
            Atom::Pa(x) => write!(f, "pa[{x}]"),
            Atom::Throw { cod, .. } => write!(f, "throw[{cod}]"),
            Atom::TryCatch(a, b) => write!(f, "try ({a}) catch ({b})"),
            Atom::Tag(_) => f.write_str("tag"),
            Atom::Untag(_) => f.write_str("untag"),
            Atom::TryCore(a, k) => write!(f, "TRY({a}, {k})"),
            Atom::CatchCore(b) => write!(f, "CATCH({b})"),
            Atom::Lookup(_) => f.write_str("lookup"),
            Atom::Update(_) => f.write_str("update"),
        }
    }
}

/// A well-typed composition chain `X -> Y`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Term {
    dom: ObjType,
    cod: ObjType,
    atoms: Vec<Atom>,
}

impl Term {
    pub fn id(ty: ObjType) -> Term {
        Term {
            dom: ty.clone(),
            cod: ty,
            atoms: Vec::new(),
        }
    }

    /// A single-atom term. `copa[Empty]` and `pa[Unit]` collapse to identities.
    pub fn atom(atom: Atom) -> Term {
        match &atom {
            Atom::Copa(ObjType::Empty) => return Term::id(ObjType::Empty),
            Atom::Pa(ObjType::Unit) => return Term::id(ObjType::Unit),
            _ => {}
        }
        Term {
            dom: atom.dom(),
            cod: atom.cod(),
            atoms: vec![atom],
        }
    }

    /// Builds a chain from atoms listed in application order.
    pub fn from_atoms(dom: ObjType, atoms: impl IntoIterator<Item = Atom>) -> Result<Term> {
        let mut term = Term::id(dom);
        for atom in atoms {
            term = term.then(&Term::atom(atom))?;
        }
        Ok(term)
    }

    pub fn copa(cod: ObjType) -> Term {
        Term::atom(Atom::Copa(cod))
    }

    pub fn pa(dom: ObjType) -> Term {
        Term::atom(Atom::Pa(dom))
    }

    pub fn tag(param: ObjType) -> Term {
        Term::atom(Atom::Tag(param))
    }

    pub fn untag(param: ObjType) -> Term {
        Term::atom(Atom::Untag(param))
    }

    pub fn lookup(value: ObjType) -> Term {
        Term::atom(Atom::Lookup(value))
    }

    pub fn update(value: ObjType) -> Term {
        Term::atom(Atom::Update(value))
    }

    pub fn throw(param: ObjType, cod: ObjType) -> Term {
        Term::atom(Atom::Throw { param, cod })
    }

    /// `try (a) catch (b)` with `b : P -> Y`.
    pub fn try_catch(a: Term, b: Term, param: &ObjType) -> Result<Term> {
        if b.dom != *param || b.cod != a.cod {
            return Err(Error::IllTyped(format!(
                "handler `{b}` : {} -> {} must have type {param} -> {}",
                b.dom, b.cod, a.cod
            )));
        }
        Ok(Term::atom(Atom::TryCatch(Box::new(a), Box::new(b))))
    }

    /// `TRY(a, k)` with `k : Y -> Y`.
    pub fn try_core(a: Term, k: Term) -> Result<Term> {
        if k.dom != a.cod || k.cod != a.cod {
            return Err(Error::IllTyped(format!(
                "continuation `{k}` : {} -> {} must have type {} -> {}",
                k.dom, k.cod, a.cod, a.cod
            )));
        }
        Ok(Term::atom(Atom::TryCore(Box::new(a), Box::new(k))))
    }

    /// `CATCH(b) : Y -> Y` with `b : P -> Y`.
    pub fn catch_core(b: Term, param: &ObjType) -> Result<Term> {
        if b.dom != *param {
            return Err(Error::IllTyped(format!(
                "handler `{b}` : {} -> {} must have domain {param}",
                b.dom, b.cod
            )));
        }
        Ok(Term::atom(Atom::CatchCore(Box::new(b))))
    }

    pub fn dom(&self) -> &ObjType {
        &self.dom
    }

    pub fn cod(&self) -> &ObjType {
        &self.cod
    }

    /// Atoms in application order.
    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_id(&self) -> bool {
        self.atoms.is_empty()
    }

    /// `next ∘ self`: runs `self`, then `next`.
    pub fn then(&self, next: &Term) -> Result<Term> {
        if self.cod != next.dom {
            let inner = self
                .atoms
                .last()
                .map(Atom::head)
                .unwrap_or_else(|| format!("id[{}]", self.cod));
            let outer = next
                .atoms
                .first()
                .map(Atom::head)
                .unwrap_or_else(|| format!("id[{}]", next.dom));
            let (inner_dom, inner_cod) = match self.atoms.last() {
                Some(a) => (a.dom(), a.cod()),
                None => (self.cod.clone(), self.cod.clone()),
            };
            let (outer_dom, outer_cod) = match next.atoms.first() {
                Some(a) => (a.dom(), a.cod()),
                None => (next.dom.clone(), next.dom.clone()),
            };
            return Err(Error::TypeMismatch(Box::new(Mismatch {
                inner,
                inner_dom,
                inner_cod,
                outer,
                outer_dom,
                outer_cod,
            })));
        }
        let mut atoms = self.atoms.clone();
        atoms.extend(next.atoms.iter().cloned());
        Ok(Term {
            dom: self.dom.clone(),
            cod: next.cod.clone(),
            atoms,
        })
    }

    /// `self ∘ inner`: runs `inner`, then `self`.
    pub fn after(&self, inner: &Term) -> Result<Term> {
        inner.then(self)
    }

    /// The first `n` atoms as a term from `self.dom`.
    pub fn prefix(&self, n: usize) -> Term {
        let cod = if n == 0 {
            self.dom.clone()
        } else {
            self.atoms[n - 1].cod()
        };
        Term {
            dom: self.dom.clone(),
            cod,
            atoms: self.atoms[..n].to_vec(),
        }
    }

    /// The atoms from index `n` onwards, as a term into `self.cod`.
    pub fn suffix(&self, n: usize) -> Term {
        let dom = if n == self.atoms.len() {
            self.cod.clone()
        } else {
            self.atoms[n].dom()
        };
        Term {
            dom,
            cod: self.cod.clone(),
            atoms: self.atoms[n..].to_vec(),
        }
    }

    /// Max of the atom grades; identities are pure.
    pub fn decoration(&self) -> Decoration {
        self.atoms
            .iter()
            .map(Atom::decoration)
            .max()
            .unwrap_or(Decoration::PURE)
    }

    pub fn is_pure(&self) -> bool {
        self.decoration().is_pure()
    }

    pub fn size(&self) -> usize {
        self.atoms.iter().map(Atom::size).sum()
    }

    pub fn legal_in(&self, logic: Logic) -> bool {
        self.atoms.iter().all(|a| a.legal_in(logic))
    }

    /// Index of the first effectful atom in application order, i.e. the
    /// rightmost one in the written composition.
    pub fn first_effect(&self) -> Option<usize> {
        self.atoms.iter().position(|a| !a.decoration().is_pure())
    }

    /// Index of the last effectful atom in application order.
    pub fn last_effect(&self) -> Option<usize> {
        self.atoms.iter().rposition(|a| !a.decoration().is_pure())
    }
}

/// Composes a chain written left to right as in the DSL: `compose(&[g, f])`
/// is `g ∘ f`.
pub fn compose(parts: &[&Term]) -> Result<Term> {
    let mut iter = parts.iter().rev();
    let first = match iter.next() {
        Some(t) => (*t).clone(),
        None => return Err(Error::IllTyped("empty composition".into())),
    };
    iter.try_fold(first, |acc, t| acc.then(t))
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.atoms.is_empty() {
            return write!(f, "id[{}]", self.dom);
        }
        for (i, atom) in self.atoms.iter().rev().enumerate() {
            if i > 0 {
                f.write_str(" . ")?;
            }
            write!(f, "{atom}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Strength {
    Strong,
    Weak,
}

impl Strength {
    pub fn symbol(self) -> &'static str {
        match self {
            Strength::Strong => "==",
            Strength::Weak => "~~",
        }
    }
}

/// A pair of parallel terms with a strength.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
    pub strength: Strength,
}

impl Equation {
    pub fn new(lhs: Term, rhs: Term, strength: Strength) -> Result<Equation> {
        if lhs.dom() != rhs.dom() || lhs.cod() != rhs.cod() {
            return Err(Error::IllTyped(format!(
                "sides are not parallel: {} : {} -> {} vs {} : {} -> {}",
                lhs,
                lhs.dom(),
                lhs.cod(),
                rhs,
                rhs.dom(),
                rhs.cod()
            )));
        }
        Ok(Equation { lhs, rhs, strength })
    }

    pub fn strong(lhs: Term, rhs: Term) -> Result<Equation> {
        Equation::new(lhs, rhs, Strength::Strong)
    }

    pub fn weak(lhs: Term, rhs: Term) -> Result<Equation> {
        Equation::new(lhs, rhs, Strength::Weak)
    }

    pub fn dom(&self) -> &ObjType {
        self.lhs.dom()
    }

    pub fn cod(&self) -> &ObjType {
        self.lhs.cod()
    }

    pub fn is_pure(&self) -> bool {
        self.lhs.is_pure() && self.rhs.is_pure()
    }

    pub fn flipped(&self) -> Equation {
        Equation {
            lhs: self.rhs.clone(),
            rhs: self.lhs.clone(),
            strength: self.strength,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.lhs == self.rhs
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.lhs, self.strength.symbol(), self.rhs)
    }
}
