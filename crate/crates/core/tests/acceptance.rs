//! Acceptance run: one `CRITERION <n> PASS|FAIL` line per criterion, with
//! the measured numbers. Exits non-zero when any criterion fails.

use std::path::PathBuf;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use decolog::engine::audit::audit;
use decolog::engine::closure::Theory;
use decolog::engine::galois::Connection;
use decolog::engine::sweep::{default_signature, sweep, witness_equations, SweepConfig};
use decolog::engine::universe::{Universe, DEFAULT_CAP};
use decolog::enumerate::Enumerator;
use decolog::logic::exc::{normalize_exc, CanonicalExc};
use decolog::logic::excore::{normalize_core, normalize_core_weak, CanonicalCore, Propagator};
use decolog::logic::states::{normalize_state, Accessor, CanonicalState};
use decolog::logic::{reduce_to_pure, verdict, Emptiness, PureReduction, Verdict};
use decolog::{
    enumerate_models, parse_term, Atom, Equation, Error, FiniteModel, Logic, ModelBounds, ObjType, Program, Signature,
    Term,
};

mod common;

const LOGICS: [Logic; 3] = [Logic::Exc, Logic::ExCore, Logic::States];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = decolog::cli::run(
        std::iter::once("decolog").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (code, String::from_utf8(out).expect("utf-8 output"))
}

fn models(sig: &Signature, max: usize) -> Vec<FiniteModel> {
    enumerate_models(sig, &ModelBounds::up_to(max))
        .expect("bounds are valid")
        .collect()
}

fn example_31() -> Outcome {
    let start = Instant::now();
    let (code, out) = cli(&["check", "fixtures/ex31.deco"]);
    let took = start.elapsed();
    let exact = out == "RESULT ex31 EQUAL\n  pure-eq: p . three == two\n";
    outcome(
        code == 0 && exact && took < Duration::from_secs(1),
        format!("verdict line `{}` in {took:?}", out.lines().next().unwrap_or("")),
    )
}

fn example_4() -> Outcome {
    let start = Instant::now();
    let (code, out) = cli(&["translate", "--verify", "fixtures/ex31.deco"]);
    let took = start.elapsed();
    let lines: Vec<&str> = out.lines().collect();
    let chain = ["p . untag . tag . three", "p . three"]
        .iter()
        .all(|step| lines.iter().any(|l| l.trim() == format!("core: {step}")));
    let ok = code == 0
        && lines.first() == Some(&"TRY(s . copa[N] . tag . three, CATCH(p)) == two")
        && lines.contains(&"RESULT ex31 EQUAL")
        && lines.last() == Some(&"  pure-eq: p . three == two")
        && chain;
    outcome(
        ok && took < Duration::from_secs(1),
        format!("core verdict EQUAL via p . three == two in {took:?}"),
    )
}

fn witnesses() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for logic in LOGICS {
        let sig = default_signature(logic);
        let key = match logic {
            Logic::States => sig.value().unwrap(),
            _ => sig.param().unwrap(),
        };
        let ObjType::Base(name) = &key else { unreachable!() };
        let two: Vec<FiniteModel> = enumerate_models(&sig, &ModelBounds::up_to(3).with_type(name, 2, 2))
            .unwrap()
            .collect();
        for e in witness_equations(&sig, logic).unwrap() {
            let red = reduce_to_pure(&e, logic, &sig, &Emptiness::inhabited()).unwrap();
            let v = verdict(&red, &two).unwrap();
            let counter = two.iter().find(|m| !m.sem_holds(&e).unwrap());
            ok &= v != Verdict::Equal && counter.is_some();
            notes.push(format!(
                "{e}: {v} countermodel {}",
                counter.map(|m| m.to_string()).unwrap_or_else(|| "none".into())
            ));
        }
    }
    for (name, code) in [("witness_exc", 1), ("witness_core", 1), ("witness_states", 1)] {
        let args = common::CASES.iter().find(|c| c.0 == name).unwrap().1;
        let (got, out) = cli(args);
        ok &= got == code && out.contains("countermodel: |N|=2");
    }
    outcome(ok, notes.join("; "))
}

/// Denotational agreement of `t` and its canonical form in every model.
fn same_everywhere(t: &Term, c: &Term, ms: &[FiniteModel]) -> bool {
    ms.iter().all(|m| m.eval(t).unwrap() == m.eval(c).unwrap())
}

fn canonical_exc(t: &Term, p: &ObjType) -> Option<Term> {
    let c = normalize_exc(t).ok()?;
    let shape = match &c {
        CanonicalExc::Pure(u) => u.is_pure(),
        CanonicalExc::Thrown { arg, .. } => arg.is_pure() && arg.cod() == p,
    };
    shape.then(|| c.reify())
}

fn propagator_shape(a: &Propagator, p: &ObjType) -> bool {
    match a {
        Propagator::Pure(u) => u.is_pure(),
        Propagator::Tagged { arg, .. } => arg.is_pure() && arg.cod() == p,
    }
}

fn canonical_core(t: &Term, p: &ObjType) -> Option<Term> {
    let c = normalize_core(t).ok()?;
    let shape = match &c {
        CanonicalCore::Prop(a) => propagator_shape(a, p) && a.reify().decoration().grade() <= t.decoration().grade(),
        CanonicalCore::Catcher { handler, arg } => {
            propagator_shape(handler, p) && arg.is_pure() && arg.cod() == p && t.decoration().grade() == 2
        }
    };
    shape.then(|| c.reify())
}

fn accessor_shape(a: &Accessor, v: &ObjType) -> bool {
    match a {
        Accessor::Pure(u) => u.is_pure(),
        Accessor::Read { val, .. } => val.is_pure() && val.dom() == v,
    }
}

fn canonical_state(t: &Term, v: &ObjType) -> Option<Term> {
    let c = normalize_state(t).ok()?;
    let shape = match &c {
        CanonicalState::Acc(a) => accessor_shape(a, v) && a.reify().decoration().grade() <= t.decoration().grade(),
        CanonicalState::Modifier { res, arg } => {
            res.is_pure() && res.dom() == v && accessor_shape(arg, v) && t.decoration().grade() == 2
        }
    };
    shape.then(|| c.reify())
}

fn canonical_forms() -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    let mut failures = 0;
    for logic in LOGICS {
        let sig = default_signature(logic);
        let ms = models(&sig, 3);
        let terms = Enumerator::new(&sig, logic).terms(4);
        let mut bad = 0;
        for t in &terms {
            let c = match logic {
                Logic::Exc => canonical_exc(t, &sig.param().unwrap()),
                Logic::ExCore => canonical_core(t, &sig.param().unwrap()),
                _ => canonical_state(t, &sig.value().unwrap()),
            };
            if !c.map(|c| same_everywhere(t, &c, &ms)).unwrap_or(false) {
                bad += 1;
            }
        }
        failures += bad;
        notes.push(format!(
            "{} {} terms {} models {bad} failures",
            logic.name(),
            terms.len(),
            ms.len()
        ));
    }
    // core terms with TRY/CATCH: a strong form when one exists, a weakly
    // equal one otherwise
    let sig = default_signature(Logic::ExCore);
    let ms = models(&sig, 3);
    let p = sig.param().unwrap();
    let terms: Vec<Term> = Enumerator::new(&sig, Logic::ExCore)
        .with_control(true)
        .terms(4)
        .into_iter()
        .filter(|t| {
            t.atoms()
                .iter()
                .any(|a| matches!(a, Atom::TryCore(..) | Atom::CatchCore(_)))
        })
        .collect();
    let (mut strong, mut weak, mut bad) = (0, 0, 0);
    for t in &terms {
        match normalize_core(t) {
            Ok(_) => match canonical_core(t, &p) {
                Some(c) if same_everywhere(t, &c, &ms) => strong += 1,
                _ => bad += 1,
            },
            Err(Error::NoCanonicalForm(_)) => {
                let w = normalize_core_weak(t).unwrap().weak_part();
                if ms
                    .iter()
                    .all(|m| m.eval(t).unwrap().agrees_weakly(&m.eval(&w).unwrap()))
                {
                    weak += 1;
                } else {
                    bad += 1;
                }
            }
            Err(_) => bad += 1,
        }
    }
    failures += bad;
    notes.push(format!(
        "excore control {} terms: {strong} strong, {weak} weak only, {bad} failures",
        terms.len()
    ));
    let took = start.elapsed();
    notes.push(format!("{took:?}"));
    outcome(failures == 0, notes.join("; "))
}

fn oracle_agreement() -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    let mut total_bad = 0;
    for (logic, control) in [
        (Logic::Exc, true),
        (Logic::ExCore, false),
        (Logic::ExCore, true),
        (Logic::States, false),
    ] {
        let sig = default_signature(logic);
        let ms = models(&sig, 3);
        let eqs = Enumerator::new(&sig, logic).with_control(control).equations(3);
        let mut bad = 0;
        for e in &eqs {
            for m in &ms {
                let red = reduce_to_pure(e, logic, &sig, &Emptiness::from_model(m)).unwrap();
                let sem = m.sem_holds(e).unwrap();
                let inconsistent_holds = red == PureReduction::Inconsistent && sem && !m_empty_domain(m, e);
                if red.holds_in(m).unwrap() != sem || inconsistent_holds {
                    bad += 1;
                }
            }
        }
        total_bad += bad;
        let tag = if control && logic == Logic::ExCore {
            "+control"
        } else {
            ""
        };
        notes.push(format!(
            "{}{tag} {} equations x {} models: {bad} disagreements",
            logic.name(),
            eqs.len(),
            ms.len()
        ));
    }
    notes.push(format!("{:?}", start.elapsed()));
    outcome(total_bad == 0, notes.join("; "))
}

fn m_empty_domain(m: &FiniteModel, e: &Equation) -> bool {
    Emptiness::from_model(m).is_empty(e.dom())
}

fn sweeps() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for logic in LOGICS {
        let cfg = SweepConfig::new(logic, 3);
        let r = sweep(&default_signature(logic), &cfg).unwrap();
        ok &= r.ok();
        notes.push(format!(
            "{} depth 3 slack {} universe {}: {} equations, {} mismatches",
            logic.name(),
            cfg.slack,
            r.universe_size,
            r.entries.len(),
            r.mismatches()
        ));
    }
    outcome(ok, notes.join("; "))
}

fn example_23() -> bool {
    let src = "signature nat { logic eqn; type N; op s : N -> N; const zero : N; }";
    let prog = Program::parse(src).unwrap();
    let u = Universe::new(&prog.signature, Logic::Eqn, 4, false, DEFAULT_CAP).unwrap();
    let base = Theory::base(Arc::new(u));
    let eq = |s: &str| prog.equation(s).unwrap();
    let t = base.with(&[eq("s . zero == zero"), eq("s . s == s")]).unwrap();
    let full = t.with(&[eq("s == id[N]")]).unwrap();
    !t.contains(&eq("s == id[N]")).unwrap() && !t.is_full() && full.is_full()
}

fn sample(rng: &mut ChaCha8Rng, pool: &[Equation]) -> Vec<Equation> {
    let n = rng.random_range(0..=2);
    (0..n).filter_map(|_| pool.choose(rng).cloned()).collect()
}

fn galois_laws(samples: usize) -> (usize, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut checked = 0;
    let mut broken = 0;
    for logic in LOGICS.iter().cycle().take(samples) {
        let sig = default_signature(*logic);
        let c = Connection::new(&sig, *logic, 3).unwrap();
        let en = Enumerator::new(&sig, *logic);
        let pure_pool: Vec<Equation> = Enumerator::new(&sig.with_logic(Logic::Eqn), Logic::Eqn)
            .equations(2)
            .into_iter()
            .filter(|e| c.pure_universe().contains_equation(e))
            .collect();
        let pool: Vec<Equation> = en.equations(2);
        let t0 = c.closure0(&sample(&mut rng, &pure_pool)).unwrap();
        let t = c.closure(&sample(&mut rng, &pool)).unwrap();
        let f = c.galois_f(&t0).unwrap();
        let g = c.galois_g(&t).unwrap();
        let laws = [
            f.is_subset(&t) == t0.is_subset(&g),
            t0.is_subset(&c.galois_g(&f).unwrap()),
            c.galois_f(&g).unwrap().is_subset(&t),
            // a theory generated by pure equations is F of its pure part
            c.galois_f(&c.galois_g(&f).unwrap()).unwrap().same_as(&f),
        ];
        checked += 1;
        if laws.iter().any(|l| !l) {
            broken += 1;
        }
    }
    (checked, broken)
}

fn fixtures_and_galois() -> Outcome {
    let fixture = example_23();
    let (checked, broken) = galois_laws(100);
    outcome(
        fixture && broken == 0,
        format!(
            "example fixture {}; Galois laws on {checked} sampled theories, {broken} broken",
            if fixture { "ok" } else { "failed" }
        ),
    )
}

fn rule_audit() -> Outcome {
    let mut notes = Vec::new();
    let mut violations = 0;
    for logic in [Logic::Eqn, Logic::Exc, Logic::ExCore, Logic::States] {
        let r = audit(&default_signature(logic), logic, 3, 3).unwrap();
        let instances: usize = r.rules.values().map(|t| t.instances).sum();
        violations += r.violations();
        notes.push(format!(
            "{} {} rules {instances} instances {} models {} violations",
            logic.name(),
            r.rules.len(),
            r.models,
            r.violations()
        ));
    }
    outcome(violations == 0, notes.join("; "))
}

fn cli_determinism() -> Outcome {
    let mut mismatched = Vec::new();
    for (name, args, code) in common::CASES {
        let first = cli(args);
        let second = cli(args);
        let golden =
            std::fs::read_to_string(root().join("fixtures/golden").join(format!("{name}.out"))).unwrap_or_default();
        if first != second || first.0 != *code || first.1 != golden {
            mismatched.push(*name);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut round_trip_failures = 0;
    let mut terms = 0;
    for logic in LOGICS {
        let sig = decolog::syntax::naturals(logic).signature;
        let en = Enumerator::new(&sig, logic).with_control(true);
        for _ in 0..1000 {
            let t = en.random_term(&mut rng, 8);
            let printed = t.to_string();
            terms += 1;
            match parse_term(&printed, &sig) {
                Ok(back) if back == t && back.to_string() == printed => {}
                _ => round_trip_failures += 1,
            }
        }
    }
    outcome(
        mismatched.is_empty() && round_trip_failures == 0,
        format!(
            "{} golden cases, mismatched {:?}; parse . print on {terms} seeded terms, {round_trip_failures} failures",
            common::CASES.len(),
            mismatched
        ),
    )
}

fn main() {
    std::env::set_current_dir(root()).expect("package root");
    let criteria: [(usize, fn() -> Outcome); 9] = [
        (1, example_31),
        (2, example_4),
        (3, witnesses),
        (4, canonical_forms),
        (5, oracle_agreement),
        (6, sweeps),
        (7, fixtures_and_galois),
        (8, rule_audit),
        (9, cli_determinism),
    ];
    let mut failed = 0;
    for (n, f) in criteria {
        let start = Instant::now();
        let o = f();
        let word = if o.pass { "PASS" } else { "FAIL" };
        println!(
            "CRITERION {n} {word} ({:.1}s) {}",
            start.elapsed().as_secs_f64(),
            o.detail
        );
        if !o.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
