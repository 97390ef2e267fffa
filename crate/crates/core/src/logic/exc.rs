//! The programmers' language of exceptions: `throw` and `try/catch`.

use std::fmt;

use super::{Emptiness, PureReduction};
use crate::error::{Error, Result};
use crate::term::{Atom, Equation, Strength, Term};
use crate::types::{Logic, ObjType};

/// Canonical form of an exceptions term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CanonicalExc {
    /// A pure term.
    Pure(Term),
    /// `throw[cod] . arg` with `arg` pure into `P`.
    Thrown { arg: Term, cod: ObjType },
}

impl CanonicalExc {
    pub fn reify(&self) -> Term {
        match self {
            CanonicalExc::Pure(u) => u.clone(),
            CanonicalExc::Thrown { arg, cod } => arg
                .then(&Term::throw(arg.cod().clone(), cod.clone()))
                .expect("argument lands in P"),
        }
    }
}

impl fmt::Display for CanonicalExc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CanonicalExc::Pure(u) => write!(f, "pure {u}"),
            CanonicalExc::Thrown { .. } => write!(f, "thrown {}", self.reify()),
        }
    }
}

fn require_exc(a: &Term) -> Result<()> {
    match a.atoms().iter().find(|x| !x.legal_in(Logic::Exc)) {
        Some(x) => Err(Error::IllegalAtom {
            atom: x.to_string(),
            logic: Logic::Exc,
        }),
        None => Ok(()),
    }
}

/// Rewrites `a` to a pure term or to `throw . v` with `v` pure.
///
/// Splits `a = b . op . v` at the first effect atom. A throw absorbs `b`
/// (propagate); a `try (c) catch (d)` is resolved by normalizing `c` first and
/// continuing with `c` (try0) or with the handler (try1).
pub fn normalize_exc(a: &Term) -> Result<CanonicalExc> {
    require_exc(a)?;
    let mut cur = a.clone();
    loop {
        let Some(i) = cur.first_effect() else {
            return Ok(CanonicalExc::Pure(cur));
        };
        let v = cur.prefix(i);
        let rest = cur.suffix(i + 1);
        match &cur.atoms()[i] {
            Atom::Throw { .. } => {
                return Ok(CanonicalExc::Thrown {
                    arg: v,
                    cod: cur.cod().clone(),
                })
            }
            Atom::TryCatch(c, d) => {
                let inner = match normalize_exc(c)? {
                    CanonicalExc::Pure(w) => w,
                    CanonicalExc::Thrown { arg, .. } => arg.then(d)?,
                };
                cur = v.then(&inner)?.then(&rest)?;
            }
            other => unreachable!("pure atom {other} reported as effect"),
        }
    }
}

/// Reduces a strong exceptions equation to pure equations.
pub fn decide_exc(e: &Equation, emptiness: &Emptiness) -> Result<PureReduction> {
    if e.strength == Strength::Weak {
        return Err(Error::WeakEquation(Logic::Exc));
    }
    let l = normalize_exc(&e.lhs)?;
    let r = normalize_exc(&e.rhs)?;
    if emptiness.is_empty(e.dom()) {
        return Ok(PureReduction::EmptyDomain);
    }
    Ok(match (l, r) {
        (CanonicalExc::Thrown { arg: v1, .. }, CanonicalExc::Thrown { arg: v2, .. }) => {
            PureReduction::eqs([Equation::strong(v1, v2)?])
        }
        (CanonicalExc::Pure(u1), CanonicalExc::Pure(u2)) => PureReduction::eqs([Equation::strong(u1, u2)?]),
        _ => PureReduction::Inconsistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{enumerate_models, ModelBounds};
    use crate::syntax::naturals;

    #[test]
    fn example_normal_forms() {
        let prog = naturals(Logic::Exc);
        let t = prog.term("s . throw[N] . three").unwrap();
        assert_eq!(
            normalize_exc(&t).unwrap(),
            CanonicalExc::Thrown {
                arg: prog.term("three").unwrap(),
                cod: ObjType::base("N")
            }
        );
        let t = prog.term("try (s . throw[N] . three) catch (p)").unwrap();
        assert_eq!(
            normalize_exc(&t).unwrap(),
            CanonicalExc::Pure(prog.term("p . three").unwrap())
        );
        let u = prog.term("s . p").unwrap();
        assert_eq!(normalize_exc(&u).unwrap(), CanonicalExc::Pure(u));
    }

    #[test]
    fn decides_examples() {
        let prog = naturals(Logic::Exc);
        let em = Emptiness::inhabited();
        let e = prog.equation("try (s . throw[N] . three) catch (p) == two").unwrap();
        assert_eq!(
            decide_exc(&e, &em).unwrap(),
            PureReduction::eqs([prog.equation("p . three == two").unwrap()])
        );
        let e = prog.equation("throw[N] . three == two").unwrap();
        assert_eq!(decide_exc(&e, &em).unwrap(), PureReduction::Inconsistent);
        let e = prog.equation("throw[N] . s == throw[N] . p").unwrap();
        assert_eq!(
            decide_exc(&e, &em).unwrap(),
            PureReduction::eqs([prog.equation("s == p").unwrap()])
        );
        let e = prog.equation("copa[N] == s . copa[N]").unwrap();
        assert_eq!(decide_exc(&e, &em).unwrap(), PureReduction::EmptyDomain);
    }

    #[test]
    fn normal_form_is_sound_in_small_models() {
        let prog = crate::syntax::Program::parse(
            "signature t { logic exc; type N; param P = N; op s : N -> N; op p : N -> N; }",
        )
        .unwrap();
        let t = prog
            .term("try (try (throw[N] . s) catch (throw[N] . p)) catch (s . s)")
            .unwrap();
        let nf = normalize_exc(&t).unwrap().reify();
        for m in enumerate_models(&prog.signature, &ModelBounds::up_to(3)).unwrap() {
            assert_eq!(m.eval(&t).unwrap(), m.eval(&nf).unwrap());
        }
    }
}
