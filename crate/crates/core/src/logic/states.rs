//! Single-location global state: `lookup` and `update`.
//!
//! Everything here mirrors the core exceptions module with arrows reversed:
//! terms are split at their last effect atom instead of their first one.

use std::fmt;

use super::{Emptiness, PureReduction};
use crate::error::{Error, Result};
use crate::signature::Signature;
use crate::term::{Atom, Equation, Strength, Term};
use crate::types::{Decoration, Logic, ObjType};

/// Canonical accessor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Accessor {
    Pure(Term),
    /// `val . lookup . pa[dom]`.
    Read {
        val: Term,
        dom: ObjType,
    },
}

impl Accessor {
    pub fn reify(&self) -> Term {
        match self {
            Accessor::Pure(u) => u.clone(),
            Accessor::Read { val, dom } => Term::pa(dom.clone())
                .then(&Term::lookup(val.dom().clone()))
                .and_then(|t| t.then(val))
                .expect("accessor parts compose"),
        }
    }
}

/// Canonical form of a states term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CanonicalState {
    Acc(Accessor),
    /// `res . lookup . update . arg`.
    Modifier {
        res: Term,
        arg: Accessor,
    },
}

impl CanonicalState {
    pub fn reify(&self) -> Term {
        match self {
            CanonicalState::Acc(a) => a.reify(),
            CanonicalState::Modifier { res, arg } => {
                let v = res.dom().clone();
                arg.reify()
                    .then(&Term::update(v.clone()))
                    .and_then(|t| t.then(&Term::lookup(v)))
                    .and_then(|t| t.then(res))
                    .expect("modifier parts compose")
            }
        }
    }

    /// The accessor `res . arg`, equal to this form on returned values.
    pub fn weak_part(&self) -> Term {
        match self {
            CanonicalState::Acc(a) => a.reify(),
            CanonicalState::Modifier { res, arg } => arg.reify().then(res).expect("modifier parts compose"),
        }
    }
}

impl fmt::Display for CanonicalState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self {
            CanonicalState::Acc(Accessor::Pure(_)) => "pure",
            CanonicalState::Acc(Accessor::Read { .. }) => "accessor",
            CanonicalState::Modifier { .. } => "modifier",
        };
        write!(f, "{kind} {}", self.reify())
    }
}

fn require_states(a: &Term) -> Result<()> {
    match a.atoms().iter().find(|x| !x.legal_in(Logic::States)) {
        Some(x) => Err(Error::IllegalAtom {
            atom: x.to_string(),
            logic: Logic::States,
        }),
        None => Ok(()),
    }
}

/// Canonical form of a term built from pure atoms and `lookup`.
fn acc_of(t: &Term) -> Accessor {
    match t.last_effect() {
        None => Accessor::Pure(t.clone()),
        Some(_) if t.cod() == &ObjType::Unit => Accessor::Pure(Term::pa(t.dom().clone())),
        Some(i) => Accessor::Read {
            val: t.suffix(i + 1),
            dom: t.dom().clone(),
        },
    }
}

fn canon(f: &Term) -> CanonicalState {
    if f.decoration() <= Decoration::MID {
        return CanonicalState::Acc(acc_of(f));
    }
    let i = f.last_effect().expect("effectful term");
    let g = f.prefix(i);
    let u = f.suffix(i + 1);
    match (&f.atoms()[i], canon(&g)) {
        (Atom::Lookup(_), CanonicalState::Acc(_)) => {
            unreachable!("a modifier has an update after its last lookup")
        }
        // u . lookup . (w . lookup . update . b) with w into Unit
        (Atom::Lookup(_), CanonicalState::Modifier { arg, .. }) => CanonicalState::Modifier { res: u, arg },
        // update is pa[V] . lookup . update
        (Atom::Update(v), CanonicalState::Acc(a)) => CanonicalState::Modifier {
            res: Term::pa(v.clone()).then(&u).expect("unit leg composes"),
            arg: a,
        },
        // update . w . lookup . update . b == update . w . b
        (Atom::Update(v), CanonicalState::Modifier { res, arg }) => {
            let vb = arg.reify().then(&res).expect("modifier parts compose");
            CanonicalState::Modifier {
                res: Term::pa(v.clone()).then(&u).expect("unit leg composes"),
                arg: acc_of(&vb),
            }
        }
        (other, _) => unreachable!("unexpected effect atom {other}"),
    }
}

/// Canonical form of a states term, strongly equal to it.
pub fn normalize_state(f: &Term) -> Result<CanonicalState> {
    require_states(f)?;
    Ok(canon(f))
}

/// A pure inhabitant `Unit -> ty`: the identity for `Unit`, otherwise the
/// first declared constant of `ty`.
pub fn witness(sig: &Signature, ty: &ObjType) -> Result<Term> {
    if ty == &ObjType::Unit {
        return Ok(Term::id(ObjType::Unit));
    }
    sig.constants_of(ty)
        .next()
        .map(|g| Term::atom(Atom::Gen(g.clone())))
        .ok_or_else(|| Error::MissingWitness(ty.clone()))
}

/// Reduces a states equation to pure equations.
pub fn decide_state(e: &Equation, sig: &Signature, emptiness: &Emptiness) -> Result<PureReduction> {
    let l = normalize_state(&e.lhs)?;
    let r = normalize_state(&e.rhs)?;
    decide_shapes(&l, &r, e.strength, e.dom(), sig, emptiness)
}

fn decide_shapes(
    l: &CanonicalState,
    r: &CanonicalState,
    strength: Strength,
    dom: &ObjType,
    sig: &Signature,
    emptiness: &Emptiness,
) -> Result<PureReduction> {
    use CanonicalState::{Acc, Modifier};
    if emptiness.is_empty(dom) {
        return Ok(PureReduction::EmptyDomain);
    }
    let strong = strength == Strength::Strong;
    let eqs = match (l, r) {
        (Acc(a1), Acc(a2)) => return decide_accs(a1, a2, dom, sig, emptiness),
        (Modifier { arg: a1, .. }, Modifier { arg: a2, .. }) => {
            let mut eqs = Vec::new();
            if strong {
                eqs.push(Equation::strong(a1.reify(), a2.reify())?);
            }
            eqs.push(Equation::strong(l.weak_part(), r.weak_part())?);
            eqs
        }
        (Modifier { arg: a1, .. }, Acc(a2)) => {
            let mut eqs = vec![Equation::strong(l.weak_part(), a2.reify())?];
            if strong {
                let v = a1.reify().cod().clone();
                let read = Term::pa(dom.clone()).then(&Term::lookup(v))?;
                eqs.push(Equation::strong(a1.reify(), read)?);
            }
            eqs
        }
        (Acc(_), Modifier { .. }) => return decide_shapes(r, l, strength, dom, sig, emptiness),
    };
    let parts = eqs
        .into_iter()
        .map(|e| decide_accs(&acc_of(&e.lhs), &acc_of(&e.rhs), e.dom(), sig, emptiness))
        .collect::<Result<Vec<_>>>()?;
    Ok(PureReduction::combine(parts))
}

fn decide_accs(
    a1: &Accessor,
    a2: &Accessor,
    dom: &ObjType,
    sig: &Signature,
    emptiness: &Emptiness,
) -> Result<PureReduction> {
    if emptiness.is_empty(dom) {
        return Ok(PureReduction::EmptyDomain);
    }
    Ok(match (a1, a2) {
        (Accessor::Pure(u1), Accessor::Pure(u2)) => PureReduction::eqs([Equation::strong(u1.clone(), u2.clone())?]),
        (Accessor::Read { val: v1, .. }, Accessor::Read { val: v2, .. }) => {
            PureReduction::eqs([Equation::strong(v1.clone(), v2.clone())?])
        }
        (Accessor::Read { val: v1, .. }, Accessor::Pure(u2)) => {
            // v1 reads a constant state and u2 ignores its argument
            let k = witness(sig, dom)?;
            let v = v1.dom().clone();
            let at_k = k.then(u2)?;
            PureReduction::eqs([
                Equation::strong(v1.clone(), Term::pa(v).then(&at_k)?)?,
                Equation::strong(u2.clone(), Term::pa(dom.clone()).then(&at_k)?)?,
            ])
        }
        (Accessor::Pure(_), Accessor::Read { .. }) => return decide_accs(a2, a1, dom, sig, emptiness),
    })
}
