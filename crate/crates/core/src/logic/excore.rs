//! The core language of exceptions: `tag`, `untag`, `TRY` and `CATCH`, with
//! strong and weak equations.

use std::collections::VecDeque;
use std::fmt;

use super::{Emptiness, PureReduction};
use crate::error::{Error, Result};
use crate::term::{Atom, Equation, Strength, Term};
use crate::types::{Decoration, Logic, ObjType};

/// Canonical propagator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Propagator {
    Pure(Term),
    /// `copa[cod] . tag . arg` (just `tag . arg` when `cod` is `Empty`).
    Tagged {
        arg: Term,
        cod: ObjType,
    },
}

impl Propagator {
    pub fn reify(&self) -> Term {
        match self {
            Propagator::Pure(u) => u.clone(),
            Propagator::Tagged { arg, cod } => arg
                .then(&Term::tag(arg.cod().clone()))
                .and_then(|t| t.then(&Term::copa(cod.clone())))
                .expect("argument lands in P"),
        }
    }
}

/// Canonical form of a core term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CanonicalCore {
    Prop(Propagator),
    /// `handler . untag . tag . arg`.
    Catcher {
        handler: Propagator,
        arg: Term,
    },
}

impl CanonicalCore {
    pub fn reify(&self) -> Term {
        match self {
            CanonicalCore::Prop(p) => p.reify(),
            CanonicalCore::Catcher { handler, arg } => {
                let p = arg.cod().clone();
                arg.then(&Term::tag(p.clone()))
                    .and_then(|t| t.then(&Term::untag(p)))
                    .and_then(|t| t.then(&handler.reify()))
                    .expect("catcher parts compose")
            }
        }
    }

    /// A propagator weakly equal to this form.
    pub fn weak_part(&self) -> Term {
        match self {
            CanonicalCore::Prop(p) => p.reify(),
            CanonicalCore::Catcher { handler, arg } => arg.then(&handler.reify()).expect("catcher parts compose"),
        }
    }
}

impl fmt::Display for CanonicalCore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self {
            CanonicalCore::Prop(Propagator::Pure(_)) => "pure",
            CanonicalCore::Prop(Propagator::Tagged { .. }) => "tagged",
            CanonicalCore::Catcher { .. } => "catcher",
        };
        write!(f, "{kind} {}", self.reify())
    }
}

/// How far `TRY`/`CATCH` elimination may go: `Weak` keeps only the value
/// behaviour and may drop a `CATCH` that follows pure code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Strong,
    Weak,
}

fn require_core(a: &Term) -> Result<()> {
    match a.atoms().iter().find(|x| !x.legal_in(Logic::ExCore)) {
        Some(x) => Err(Error::IllegalAtom {
            atom: x.to_string(),
            logic: Logic::ExCore,
        }),
        None => Ok(()),
    }
}

/// Canonical form of a propagator built from pure atoms and `tag`.
fn prop_of(t: &Term) -> Propagator {
    if t.dom().is_empty_type() {
        return Propagator::Pure(Term::copa(t.cod().clone()));
    }
    match t.first_effect() {
        None => Propagator::Pure(t.clone()),
        Some(i) => Propagator::Tagged {
            arg: t.prefix(i),
            cod: t.cod().clone(),
        },
    }
}

/// Canonical form of a term built from pure atoms, `tag` and `untag`.
fn canon(f: &Term) -> CanonicalCore {
    if f.decoration() <= Decoration::MID {
        return CanonicalCore::Prop(prop_of(f));
    }
    let i = f.first_effect().expect("effectful term");
    let u = f.prefix(i);
    let g = f.suffix(i + 1);
    match (&f.atoms()[i], canon(&g)) {
        (Atom::Tag(_), CanonicalCore::Prop(_)) => CanonicalCore::Prop(Propagator::Tagged {
            arg: u,
            cod: f.cod().clone(),
        }),
        // g . tag . u with g = b . untag . tag . w and w : Empty -> P, so
        // tag . w is the identity of Empty.
        (Atom::Tag(_), CanonicalCore::Catcher { handler, .. }) => CanonicalCore::Catcher { handler, arg: u },
        // untag is id . untag . tag . copa[P]
        (Atom::Untag(p), CanonicalCore::Prop(handler)) => CanonicalCore::Catcher {
            handler,
            arg: Term::copa(p.clone()),
        },
        // untag . tag . v . untag == v . untag
        (Atom::Untag(p), CanonicalCore::Catcher { handler, arg }) => {
            let b = arg.then(&handler.reify()).expect("catcher parts compose");
            CanonicalCore::Catcher {
                handler: prop_of(&b),
                arg: Term::copa(p.clone()),
            }
        }
        (other, _) => unreachable!("unexpected effect atom {other}"),
    }
}

/// Removes `TRY` and `CATCH`, recording each rewrite.
pub struct CoreNormalizer {
    mode: Mode,
    trace: Vec<String>,
}

impl CoreNormalizer {
    pub fn new(mode: Mode) -> Self {
        CoreNormalizer {
            mode,
            trace: Vec::new(),
        }
    }

    pub fn trace(&self) -> &[String] {
        &self.trace
    }

    pub fn into_trace(self) -> Vec<String> {
        self.trace
    }

    fn note(&mut self, prefix: &Term, queue: &VecDeque<Atom>) {
        let mut t = prefix.clone();
        for a in queue {
            t = t.then(&Term::atom(a.clone())).expect("queued atoms compose");
        }
        self.trace.push(t.to_string());
    }

    /// An equivalent term without `TRY` and `CATCH` (only weakly equivalent
    /// in weak mode).
    ///
    /// Atoms are consumed in application order while the canonical form of
    /// the consumed prefix is known, which decides how a `CATCH` unfolds.
    pub fn eliminate(&mut self, f: &Term) -> Result<Term> {
        require_core(f)?;
        let mut prefix = Term::id(f.dom().clone());
        let mut queue: VecDeque<Atom> = f.atoms().iter().cloned().collect();
        while let Some(atom) = queue.pop_front() {
            match atom {
                Atom::TryCore(a, k) => {
                    let image = self.try_image(&a, &k)?;
                    prefix = prefix.then(&image)?;
                }
                Atom::CatchCore(b) => {
                    let param = b.dom().clone();
                    let unfolded = match canon(&prefix) {
                        CanonicalCore::Prop(Propagator::Pure(_)) if prefix.dom().is_empty_type() => {
                            Some(Term::untag(param))
                        }
                        CanonicalCore::Prop(Propagator::Pure(w)) => match self.mode {
                            Mode::Weak => {
                                self.trace.push(format!("CATCH({b}) . {w} ~~ {w}"));
                                None
                            }
                            Mode::Strong => {
                                return Err(Error::NoCanonicalForm(format!("CATCH({b}) after the pure term {w}")))
                            }
                        },
                        CanonicalCore::Prop(Propagator::Tagged { arg, .. }) => {
                            Some(arg.then(&Term::tag(param.clone()))?.then(&Term::untag(param))?)
                        }
                        // the prefix never leaves a value: the handler is dead
                        CanonicalCore::Catcher {
                            handler: Propagator::Pure(_),
                            ..
                        } => None,
                        CanonicalCore::Catcher {
                            handler: Propagator::Tagged { arg: t, .. },
                            arg: u,
                        } => Some(
                            u.then(&Term::tag(param.clone()))?
                                .then(&Term::untag(param.clone()))?
                                .then(&t)?
                                .then(&Term::tag(param.clone()))?
                                .then(&Term::untag(param))?,
                        ),
                    };
                    if let Some(new_prefix) = unfolded {
                        prefix = new_prefix;
                        for a in b.atoms().iter().rev() {
                            queue.push_front(a.clone());
                        }
                    }
                    self.note(&prefix, &queue);
                }
                other => {
                    prefix = prefix.then(&Term::atom(other))?;
                }
            }
        }
        Ok(prefix)
    }

    /// `TRY(a, k)` is the propagator weakly equal to `k . a`.
    fn try_image(&mut self, a: &Term, k: &Term) -> Result<Term> {
        let body = a.then(k)?;
        self.trace.push(format!("TRY({a}, {k}) ~~ {body}"));
        let saved = self.mode;
        self.mode = Mode::Weak;
        let flat = self.eliminate(&body);
        self.mode = saved;
        let image = canon(&flat?).weak_part();
        self.trace.push(image.to_string());
        Ok(image)
    }

    pub fn normalize(&mut self, f: &Term) -> Result<CanonicalCore> {
        let flat = self.eliminate(f)?;
        Ok(canon(&flat))
    }
}

/// Canonical form of a core propagator.
pub fn normalize_core_prop(a: &Term) -> Result<Propagator> {
    if a.decoration() > Decoration::MID {
        return Err(Error::IllTyped(format!("`{a}` is a catcher, not a propagator")));
    }
    match CoreNormalizer::new(Mode::Strong).normalize(a)? {
        CanonicalCore::Prop(p) => Ok(p),
        CanonicalCore::Catcher { .. } => unreachable!("propagators stay propagators"),
    }
}

/// Canonical form of a core term, strongly equal to it.
pub fn normalize_core(f: &Term) -> Result<CanonicalCore> {
    CoreNormalizer::new(Mode::Strong).normalize(f)
}

/// A canonical form weakly equal to `f`.
pub fn normalize_core_weak(f: &Term) -> Result<CanonicalCore> {
    CoreNormalizer::new(Mode::Weak).normalize(f)
}

/// Reduces a core equation to pure equations.
pub fn decide_core(e: &Equation, emptiness: &Emptiness) -> Result<PureReduction> {
    let mode = match e.strength {
        Strength::Strong => Mode::Strong,
        Strength::Weak => Mode::Weak,
    };
    let sides = CoreNormalizer::new(mode)
        .normalize(&e.lhs)
        .and_then(|l| Ok((l, CoreNormalizer::new(mode).normalize(&e.rhs)?)));
    match sides {
        Ok((l, r)) => decide_shapes(&l, &r, e.strength, e.dom(), emptiness),
        // f == g iff f ~~ g and f . copa == g . copa
        Err(Error::NoCanonicalForm(_)) if e.strength == Strength::Strong => {
            let weak = Equation::weak(e.lhs.clone(), e.rhs.clone())?;
            let copa = Term::copa(e.dom().clone());
            let at_empty = Equation::strong(copa.then(&e.lhs)?, copa.then(&e.rhs)?)?;
            Ok(PureReduction::combine([
                decide_core(&weak, emptiness)?,
                decide_core(&at_empty, emptiness)?,
            ]))
        }
        Err(err) => Err(err),
    }
}

fn decide_shapes(
    l: &CanonicalCore,
    r: &CanonicalCore,
    strength: Strength,
    dom: &ObjType,
    emptiness: &Emptiness,
) -> Result<PureReduction> {
    use CanonicalCore::{Catcher, Prop};
    let empty = emptiness.is_empty(dom);
    let weak = strength == Strength::Weak;
    match (l, r) {
        _ if empty && weak => Ok(PureReduction::EmptyDomain),
        (Prop(p1), Prop(p2)) => decide_props(p1, p2, dom, emptiness),
        (Catcher { handler: a1, .. }, Catcher { handler: a2, .. }) => {
            let mut eqs = Vec::new();
            if !weak {
                eqs.push(Equation::strong(a1.reify(), a2.reify())?);
            }
            eqs.push(Equation::strong(l.weak_part(), r.weak_part())?);
            reduce_prop_eqs(eqs, emptiness)
        }
        (Catcher { handler: a1, .. }, Prop(p2)) => {
            let mut eqs = vec![Equation::strong(l.weak_part(), p2.reify())?];
            if !weak {
                let param = a1.reify().dom().clone();
                let thrown = Term::tag(param).then(&Term::copa(r.reify().cod().clone()))?;
                eqs.push(Equation::strong(a1.reify(), thrown)?);
            }
            reduce_prop_eqs(eqs, emptiness)
        }
        (Prop(_), Catcher { .. }) => decide_shapes(r, l, strength, dom, emptiness),
    }
}

fn reduce_prop_eqs(eqs: Vec<Equation>, emptiness: &Emptiness) -> Result<PureReduction> {
    let parts = eqs
        .into_iter()
        .map(|e| decide_props(&prop_of(&e.lhs), &prop_of(&e.rhs), e.dom(), emptiness))
        .collect::<Result<Vec<_>>>()?;
    Ok(PureReduction::combine(parts))
}

fn decide_props(p1: &Propagator, p2: &Propagator, dom: &ObjType, emptiness: &Emptiness) -> Result<PureReduction> {
    if emptiness.is_empty(dom) {
        return Ok(PureReduction::EmptyDomain);
    }
    Ok(match (p1, p2) {
        (Propagator::Tagged { arg: v1, .. }, Propagator::Tagged { arg: v2, .. }) => {
            PureReduction::eqs([Equation::strong(v1.clone(), v2.clone())?])
        }
        (Propagator::Pure(u1), Propagator::Pure(u2)) => PureReduction::eqs([Equation::strong(u1.clone(), u2.clone())?]),
        _ => PureReduction::Inconsistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{enumerate_models, ModelBounds};
    use crate::syntax::{naturals, Program};

    fn small() -> Program {
        Program::parse("signature t { logic excore; type N; param P = N; op s : N -> N; }").unwrap()
    }

    fn models(prog: &Program) -> Vec<crate::model::FiniteModel> {
        enumerate_models(&prog.signature, &ModelBounds::up_to(3))
            .unwrap()
            .collect()
    }

    #[test]
    fn untag_is_a_catcher() {
        let prog = small();
        let untag = prog.term("untag").unwrap();
        let nf = normalize_core(&untag).unwrap();
        assert_eq!(
            nf,
            CanonicalCore::Catcher {
                handler: Propagator::Pure(Term::id(ObjType::base("N"))),
                arg: Term::copa(ObjType::base("N")),
            }
        );
        assert_eq!(nf.reify().to_string(), "untag . tag . copa[N]");
        for m in models(&prog) {
            assert_eq!(m.eval(&untag).unwrap(), m.eval(&nf.reify()).unwrap());
        }
    }

    #[test]
    fn tag_after_untag_is_identity() {
        let prog = small();
        // forms on the empty domain are not unique, only their meaning is
        let t = prog.term("tag . untag").unwrap();
        let nf = normalize_core(&t).unwrap().reify();
        let id = Term::id(ObjType::Empty);
        for m in models(&prog) {
            assert_eq!(m.eval(&nf).unwrap(), m.eval(&id).unwrap());
            assert_eq!(m.eval(&t).unwrap(), m.eval(&id).unwrap());
        }
    }

    #[test]
    fn propagator_forms() {
        let prog = small();
        let t = prog.term("copa[N] . tag . s").unwrap();
        assert_eq!(
            normalize_core_prop(&t).unwrap(),
            Propagator::Tagged {
                arg: prog.term("s").unwrap(),
                cod: ObjType::base("N")
            }
        );
        let t = prog.term("tag . copa[N]").unwrap();
        assert_eq!(
            normalize_core_prop(&t).unwrap(),
            Propagator::Pure(Term::id(ObjType::Empty))
        );
        assert!(normalize_core_prop(&prog.term("untag").unwrap()).is_err());
    }

    #[test]
    fn translated_example_passes_through_catcher() {
        let prog = naturals(Logic::ExCore);
        let t = prog.term("TRY(s . copa[N] . tag . three, CATCH(p))").unwrap();
        let mut n = CoreNormalizer::new(Mode::Strong);
        let nf = n.normalize(&t).unwrap();
        assert_eq!(
            nf,
            CanonicalCore::Prop(Propagator::Pure(prog.term("p . three").unwrap()))
        );
        assert!(
            n.trace().iter().any(|s| s == "p . untag . tag . three"),
            "{:?}",
            n.trace()
        );
        assert_eq!(n.trace().last().map(String::as_str), Some("p . three"));
    }

    #[test]
    fn decides_examples() {
        let prog = small();
        let em = Emptiness::inhabited();
        let e = prog.equation("copa[N] . tag . s == copa[N] . tag").unwrap();
        assert_eq!(
            decide_core(&e, &em).unwrap(),
            PureReduction::eqs([prog.equation("s == id[N]").unwrap()])
        );
        let e = prog.equation("untag == copa[N]").unwrap();
        assert_eq!(decide_core(&e, &em).unwrap(), PureReduction::Inconsistent);
        let e = prog.equation("untag . tag ~~ id[N]").unwrap();
        assert_eq!(decide_core(&e, &em).unwrap(), PureReduction::PureEqs(vec![]));
        let e = prog.equation("untag . tag == id[N]").unwrap();
        assert_eq!(decide_core(&e, &em).unwrap(), PureReduction::Inconsistent);
        let e = prog.equation("s . untag ~~ untag").unwrap();
        assert_eq!(decide_core(&e, &em).unwrap(), PureReduction::EmptyDomain);
        let e = prog.equation("s . untag == untag").unwrap();
        assert_eq!(
            decide_core(&e, &em).unwrap(),
            PureReduction::eqs([prog.equation("s == id[N]").unwrap()])
        );
    }

    #[test]
    fn bare_catch_is_split_for_strong_equations() {
        let prog = small();
        let em = Emptiness::inhabited();
        let t = prog.term("CATCH(s) . s").unwrap();
        assert!(matches!(normalize_core(&t), Err(Error::NoCanonicalForm(_))));
        assert!(normalize_core_weak(&t).is_ok());
        let e = prog.equation("CATCH(s) . s == CATCH(s)").unwrap();
        let red = decide_core(&e, &em).unwrap();
        assert_eq!(red, PureReduction::eqs([prog.equation("s == id[N]").unwrap()]));
        for m in models(&prog) {
            assert_eq!(red.holds_in(&m).unwrap(), m.sem_holds(&e).unwrap());
        }
    }
}
