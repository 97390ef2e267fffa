//! Property tests over seeded random terms and enumerated models.

use std::sync::{Arc, OnceLock};

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use decolog::engine::closure::Theory;
use decolog::engine::sweep::default_signature;
use decolog::engine::universe::{Universe, DEFAULT_CAP};
use decolog::enumerate::Enumerator;
use decolog::logic::exc::normalize_exc;
use decolog::logic::excore::normalize_core;
use decolog::logic::states::normalize_state;
use decolog::logic::{reduce_to_pure, Emptiness};
use decolog::syntax::naturals;
use decolog::translate::translate;
use decolog::{
    enumerate_models, parse_term, Denotation, Equation, FiniteModel, Logic, ModelBounds, Out, Signature, Term,
};

struct Fixture {
    sig: Signature,
    models: Vec<FiniteModel>,
    equations: Vec<Equation>,
}

fn fixture(logic: Logic) -> &'static Fixture {
    static CELLS: [OnceLock<Fixture>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    let i = match logic {
        Logic::Exc => 0,
        Logic::ExCore => 1,
        _ => 2,
    };
    CELLS[i].get_or_init(|| {
        let sig = default_signature(logic);
        Fixture {
            models: enumerate_models(&sig, &ModelBounds::up_to(3)).unwrap().collect(),
            equations: Enumerator::new(&sig, logic).with_control(true).equations(3),
            sig,
        }
    })
}

fn random_term(logic: Logic, seed: u64, size: usize, control: bool) -> Term {
    let f = fixture(logic);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Enumerator::new(&f.sig, logic)
        .with_control(control)
        .random_term(&mut rng, size)
}

fn model(logic: Logic, pick: usize) -> &'static FiniteModel {
    let ms = &fixture(logic).models;
    &ms[pick % ms.len()]
}

/// `g` after `f`, computed on tables.
fn then(f: &Denotation, g: &Denotation) -> Denotation {
    match (f, g) {
        (Denotation::Exceptional { dom, exc, table }, Denotation::Exceptional { dom: gd, table: gt, .. }) => {
            let table = table
                .iter()
                .map(|o| match *o {
                    Out::Val(y) => gt[y],
                    Out::Exc(e) => gt[gd + e],
                })
                .collect();
            Denotation::Exceptional {
                dom: *dom,
                exc: *exc,
                table,
            }
        }
        (Denotation::Stateful { states, dom, table }, Denotation::Stateful { dom: gd, table: gt, .. }) => {
            let table = table.iter().map(|&(s, y)| gt[s * gd + y]).collect();
            Denotation::Stateful {
                states: *states,
                dom: *dom,
                table,
            }
        }
        _ => panic!("mixed families"),
    }
}

const LOGICS: [Logic; 3] = [Logic::Exc, Logic::ExCore, Logic::States];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn print_then_parse_is_identity(seed in any::<u64>(), size in 0usize..9) {
        for logic in LOGICS {
            let sig = naturals(logic).signature;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let t = Enumerator::new(&sig, logic).with_control(true).random_term(&mut rng, size);
            let printed = t.to_string();
            let back = parse_term(&printed, &sig).unwrap();
            prop_assert_eq!(&back, &t);
            prop_assert_eq!(back.to_string(), printed);
        }
    }

    #[test]
    fn evaluation_respects_composition(seed in any::<u64>(), cut in any::<usize>(), pick in any::<usize>()) {
        for logic in LOGICS {
            let t = random_term(logic, seed, 6, true);
            let k = cut % (t.atoms().len() + 1);
            let m = model(logic, pick);
            let whole = m.eval(&t).unwrap();
            let split = then(&m.eval(&t.prefix(k)).unwrap(), &m.eval(&t.suffix(k)).unwrap());
            prop_assert_eq!(whole, split, "{} split at {}", t, k);
        }
    }

    #[test]
    fn pure_terms_have_pure_denotations(seed in any::<u64>(), pick in any::<usize>()) {
        for logic in LOGICS {
            let t = random_term(logic, seed, 6, true);
            if t.is_pure() {
                prop_assert!(model(logic, pick).eval(&t).unwrap().is_pure(), "{}", t);
            }
        }
    }

    #[test]
    fn canonical_forms_denote_the_same(seed in any::<u64>(), pick in any::<usize>()) {
        let t = random_term(Logic::Exc, seed, 7, true);
        let m = model(Logic::Exc, pick);
        prop_assert_eq!(m.eval(&t).unwrap(), m.eval(&normalize_exc(&t).unwrap().reify()).unwrap());
        let t = random_term(Logic::ExCore, seed, 7, false);
        let m = model(Logic::ExCore, pick);
        prop_assert_eq!(m.eval(&t).unwrap(), m.eval(&normalize_core(&t).unwrap().reify()).unwrap());
        let t = random_term(Logic::States, seed, 7, false);
        let m = model(Logic::States, pick);
        prop_assert_eq!(m.eval(&t).unwrap(), m.eval(&normalize_state(&t).unwrap().reify()).unwrap());
    }

    #[test]
    fn deciders_agree_with_models(index in any::<usize>(), pick in any::<usize>()) {
        for logic in LOGICS {
            let f = fixture(logic);
            let e = &f.equations[index % f.equations.len()];
            let m = model(logic, pick);
            let red = reduce_to_pure(e, logic, &f.sig, &Emptiness::from_model(m)).unwrap();
            prop_assert_eq!(red.holds_in(m).unwrap(), m.sem_holds(e).unwrap(), "{} in {}", e, m);
        }
    }

    #[test]
    fn translation_preserves_meaning(seed in any::<u64>(), pick in any::<usize>()) {
        let t = random_term(Logic::Exc, seed, 7, true);
        let core = translate(&t).unwrap();
        prop_assert!(core.decoration().grade() <= 1, "{}", core);
        let m = model(Logic::Exc, pick);
        prop_assert_eq!(m.eval(&t).unwrap(), m.with_logic(Logic::ExCore).eval(&core).unwrap());
    }
}

fn core_base() -> &'static Theory {
    static BASE: OnceLock<Theory> = OnceLock::new();
    BASE.get_or_init(|| {
        let sig = default_signature(Logic::ExCore);
        Theory::base(Arc::new(
            Universe::new(&sig, Logic::ExCore, 4, false, DEFAULT_CAP).unwrap(),
        ))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn saturation_is_idempotent(picks in proptest::collection::vec(any::<usize>(), 0..3)) {
        let base = core_base();
        let pool = Enumerator::new(&default_signature(Logic::ExCore), Logic::ExCore).equations(2);
        let axioms: Vec<Equation> = picks.iter().map(|i| pool[i % pool.len()].clone()).collect();
        let t = base.with(&axioms).unwrap();
        prop_assert!(t.with(&axioms).unwrap().same_as(&t));
        prop_assert!(base.with(&t.strong_members()).unwrap().is_subset(&t));
        for a in &axioms {
            prop_assert!(t.contains(a).unwrap());
        }
    }
}
