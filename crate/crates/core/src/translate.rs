//! Translation of the programmers' language of exceptions into the core
//! language, and the harness that checks it.

use crate::error::Result;
use crate::logic::exc::decide_exc;
use crate::logic::excore::decide_core;
use crate::logic::{verdict, Emptiness, PureReduction, Verdict};
use crate::model::FiniteModel;
use crate::term::{Atom, Equation, Strength, Term};
use crate::types::{Logic, ObjType};

/// `throw[Y]` becomes `copa[Y] . tag` and `try (a) catch (b)` becomes
/// `TRY(a, CATCH(b))`; every other atom is kept.
pub fn translate(t: &Term) -> Result<Term> {
    let mut out = Term::id(t.dom().clone());
    for atom in t.atoms() {
        let image = match atom {
            Atom::Throw { param, cod } => Term::tag(param.clone()).then(&Term::copa(cod.clone()))?,
            Atom::TryCatch(a, b) => {
                let param = b.dom().clone();
                let k = Term::catch_core(translate(b)?, &param)?;
                Term::try_core(translate(a)?, k)?
            }
            other => Term::atom(other.clone()),
        };
        out = out.then(&image)?;
    }
    Ok(out)
}

pub fn translate_equation(e: &Equation) -> Result<Equation> {
    Equation::new(translate(&e.lhs)?, translate(&e.rhs)?, e.strength)
}

/// Outcome of checking one equation on both sides of the translation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranslationCheck {
    pub exc: PureReduction,
    pub core: PureReduction,
    pub exc_verdict: Verdict,
    pub core_verdict: Verdict,
    /// Models in which the two denotations of a side differ.
    pub semantic_failures: usize,
    /// Models in which the two reductions disagree.
    pub decision_failures: usize,
}

impl TranslationCheck {
    pub fn ok(&self) -> bool {
        self.exc_verdict == self.core_verdict && self.semantic_failures == 0 && self.decision_failures == 0
    }
}

/// Decides `e` in both languages and compares the reductions and the
/// denotations in every model of `models` (built for the exceptions logic).
pub fn verify_translation(e: &Equation, models: &[FiniteModel]) -> Result<TranslationCheck> {
    let te = translate_equation(e)?;
    let em = Emptiness::inhabited();
    let exc = decide_exc(e, &em)?;
    let core = decide_core(&te, &em)?;
    let mut semantic_failures = 0;
    let mut decision_failures = 0;
    for m in models {
        let cm = m.with_logic(Logic::ExCore);
        for (a, b) in [(&e.lhs, &te.lhs), (&e.rhs, &te.rhs)] {
            if m.eval(a)? != cm.eval(b)? {
                semantic_failures += 1;
            }
        }
        let memp = Emptiness::from_model(m);
        let l = decide_exc(e, &memp)?.holds_in(m)?;
        let r = decide_core(&te, &memp)?.holds_in(&cm)?;
        if l != r || l != m.sem_holds(e)? {
            decision_failures += 1;
        }
    }
    let core_models: Vec<FiniteModel> = models.iter().map(|m| m.with_logic(Logic::ExCore)).collect();
    Ok(TranslationCheck {
        exc_verdict: verdict(&exc, models)?,
        core_verdict: verdict(&core, &core_models)?,
        exc,
        core,
        semantic_failures,
        decision_failures,
    })
}

/// One replayed rule image: the core equation and whether the decider
/// reduces it to nothing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleImage {
    pub rule: &'static str,
    pub equation: Equation,
    pub derived: bool,
}

fn image(rule: &'static str, lhs: Term, rhs: Term) -> Result<RuleImage> {
    let equation = Equation::new(lhs, rhs, Strength::Strong)?;
    let red = decide_core(&equation, &Emptiness::inhabited())?;
    let derived = match &red {
        PureReduction::PureEqs(es) => es.is_empty(),
        PureReduction::EmptyDomain => true,
        PureReduction::Inconsistent => false,
    };
    Ok(RuleImage {
        rule,
        equation,
        derived,
    })
}

/// Images of the exception rules under the translation, instantiated with
/// the given exception terms, each of which must be a derived fact of the
/// core logic.
///
/// `pures` supplies the pure `u` (those into `P` feed `recover` and `try1`),
/// `props` supplies `a` and the handlers `b` (those from `P`).
pub fn rule_images(param: &ObjType, pures: &[Term], props: &[Term]) -> Result<Vec<RuleImage>> {
    let mut out = Vec::new();
    let thrown = |cod: &ObjType| Term::tag(param.clone()).then(&Term::copa(cod.clone()));
    for a in props {
        // a . throw[X] == throw[Y]
        let ta = translate(a)?;
        out.push(image("propagate", thrown(a.dom())?.then(&ta)?, thrown(a.cod())?)?);
        // a == nf(a) gives TRY(a, k) == TRY(nf(a), k)
        let nf = crate::logic::exc::normalize_exc(a)?.reify();
        for b in props.iter().filter(|b| b.dom() == param && b.cod() == a.cod()) {
            let k = Term::catch_core(translate(b)?, param)?;
            out.push(image(
                "try",
                Term::try_core(ta.clone(), k.clone())?,
                Term::try_core(translate(&nf)?, k)?,
            )?);
        }
    }
    for u in pures {
        for b in props.iter().filter(|b| b.dom() == param && b.cod() == u.cod()) {
            let k = Term::catch_core(translate(b)?, param)?;
            out.push(image("try0", Term::try_core(u.clone(), k)?, u.clone())?);
        }
        if u.cod() != param {
            continue;
        }
        for b in props.iter().filter(|b| b.dom() == param) {
            let k = Term::catch_core(translate(b)?, param)?;
            let body = u.then(&thrown(b.cod())?)?;
            out.push(image("try1", Term::try_core(body, k)?, u.then(&translate(b)?)?)?);
        }
        for u2 in pures.iter().filter(|v| v.dom() == u.dom() && v.cod() == param) {
            // copa . tag . u1 == copa . tag . u2 reduces to exactly u1 == u2
            let cod = ObjType::Empty;
            let eq = Equation::strong(u.then(&thrown(&cod)?)?, u2.then(&thrown(&cod)?)?)?;
            let red = decide_core(&eq, &Emptiness::inhabited())?;
            let expected = PureReduction::eqs([Equation::strong(u.clone(), u2.clone())?]);
            out.push(RuleImage {
                rule: "recover",
                equation: eq,
                derived: red == expected,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{enumerate_models, ModelBounds};
    use crate::syntax::{naturals, Program};

    #[test]
    fn translates_examples() {
        let prog = naturals(Logic::Exc);
        let core = naturals(Logic::ExCore);
        let t = translate(&prog.term("throw[N] . three").unwrap()).unwrap();
        assert_eq!(t, core.term("copa[N] . tag . three").unwrap());
        let t = translate(&prog.term("try (s . throw[N] . three) catch (p)").unwrap()).unwrap();
        assert_eq!(t, core.term("TRY(s . copa[N] . tag . three, CATCH(p))").unwrap());
        let u = prog.term("s . p").unwrap();
        assert_eq!(translate(&u).unwrap(), u);
    }

    #[test]
    fn example_equation_agrees() {
        let prog = naturals(Logic::Exc);
        let e = prog.equation("try (s . throw[N] . three) catch (p) == two").unwrap();
        let models = vec![prog.model.clone().unwrap()];
        let c = verify_translation(&e, &models).unwrap();
        assert!(c.ok(), "{c:?}");
        assert_eq!(c.core_verdict, Verdict::Equal);
    }

    #[test]
    fn rule_images_are_derived() {
        let prog = Program::parse("signature t { logic exc; type N; param P = N; op s : N -> N; }").unwrap();
        let n = ObjType::base("N");
        let pures: Vec<Term> = ["id[N]", "s", "s . s"].iter().map(|s| prog.term(s).unwrap()).collect();
        let props: Vec<Term> = ["s", "throw[N]", "s . throw[N] . s", "try (throw[N]) catch (s)"]
            .iter()
            .map(|s| prog.term(s).unwrap())
            .collect();
        let images = rule_images(&n, &pures, &props).unwrap();
        for r in ["propagate", "recover", "try", "try0", "try1"] {
            assert!(images.iter().any(|i| i.rule == r), "no {r} image");
        }
        for i in &images {
            assert!(i.derived, "{} image not derived: {}", i.rule, i.equation);
        }
        let models: Vec<_> = enumerate_models(&prog.signature, &ModelBounds::up_to(2))
            .unwrap()
            .collect();
        // recover is conditional: its image reduces to the premise
        for i in images.iter().filter(|i| i.rule != "recover") {
            for m in &models {
                assert!(m.with_logic(Logic::ExCore).sem_holds(&i.equation).unwrap());
            }
        }
    }
}
