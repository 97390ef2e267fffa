//! Relative completeness sweeps: every enumerated equation is reduced to
//! pure equations, and the reduction is checked against bounded closure in
//! both directions and against the finite models.

use std::fmt::Write as _;
use std::sync::Arc;

use rayon::prelude::*;

use super::closure::Theory;
use super::universe::{Universe, DEFAULT_CAP};
use crate::enumerate::Enumerator;
use crate::error::{Error, Result};
use crate::logic::{reduce_to_pure, Emptiness, PureReduction};
use crate::model::{enumerate_models, FiniteModel, ModelBounds};
use crate::signature::Signature;
use crate::syntax::Program;
use crate::term::{Equation, Term};
use crate::types::{Logic, ObjType};

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub logic: Logic,
    /// Size bound of the swept equations.
    pub depth: usize,
    /// Extra size allowed to intermediate terms of derivations.
    pub slack: usize,
    pub carrier_max: usize,
    pub cap: usize,
}

impl SweepConfig {
    pub fn new(logic: Logic, depth: usize) -> Self {
        SweepConfig {
            logic,
            depth,
            slack: default_slack(logic),
            carrier_max: 3,
            cap: DEFAULT_CAP,
        }
    }
}

/// Slack that lets every derivation of a depth-3 sweep fit. Exceptions need
/// none: `try` already nests whole terms, and its universe grows fastest.
pub fn default_slack(logic: Logic) -> usize {
    match logic {
        Logic::Exc => 0,
        _ => 2,
    }
}

/// The signature swept by default: one base type, one pure generator, and
/// a constant where states need a witness.
pub fn default_signature(logic: Logic) -> Signature {
    let extra = match logic {
        Logic::States => "value V = N; const z : N;",
        Logic::Eqn => "",
        _ => "param P = N;",
    };
    Program::parse(&format!(
        "signature sweep {{ logic {}; type N; {extra} op s : N -> N; }}",
        logic.name()
    ))
    .expect("built-in signature parses")
    .signature
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepEntry {
    pub equation: Equation,
    pub reduction: PureReduction,
    /// Problems found; empty means OK.
    pub problems: Vec<String>,
}

impl SweepEntry {
    pub fn ok(&self) -> bool {
        self.problems.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub equation: Equation,
    pub verdict: String,
    /// Countermodel with a two-element parameter (or value) carrier.
    pub countermodel: Option<String>,
    pub ok: bool,
}

#[derive(Clone, Debug)]
pub struct SweepReport {
    pub config: SweepConfig,
    pub universe_size: usize,
    pub models: usize,
    pub entries: Vec<SweepEntry>,
    pub witnesses: Vec<Witness>,
}

impl SweepReport {
    pub fn mismatches(&self) -> usize {
        self.entries.iter().filter(|e| !e.ok()).count() + self.witnesses.iter().filter(|w| !w.ok).count()
    }

    pub fn ok(&self) -> bool {
        self.mismatches() == 0
    }

    /// Deterministic text report.
    pub fn render(&self) -> String {
        let c = &self.config;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# sweep logic={} depth={} slack={} carrier-max={} universe={} models={}",
            c.logic.name(),
            c.depth,
            c.slack,
            c.carrier_max,
            self.universe_size,
            self.models
        );
        if c.logic == Logic::States {
            let _ = writeln!(out, "# models with |V| = 1 are not swept");
        }
        for e in &self.entries {
            if e.ok() {
                let _ = writeln!(out, "SWEEP {} OK", e.equation);
            } else {
                let _ = writeln!(out, "SWEEP {} MISMATCH {}", e.equation, e.problems.join("; "));
            }
        }
        for w in &self.witnesses {
            let _ = writeln!(
                out,
                "WITNESS {} {} countermodel {} {}",
                w.equation,
                w.verdict,
                w.countermodel.as_deref().unwrap_or("none"),
                if w.ok { "OK" } else { "MISMATCH" }
            );
        }
        let ok = self.entries.iter().filter(|e| e.ok()).count();
        let _ = writeln!(
            out,
            "SUMMARY total={} ok={} mismatch={}",
            self.entries.len(),
            ok,
            self.entries.len() - ok
        );
        out
    }
}

/// Models used by the sweep: carriers up to `max`, and at least two values
/// for states.
pub fn sweep_models(sig: &Signature, logic: Logic, max: usize) -> Result<Vec<FiniteModel>> {
    let mut bounds = ModelBounds::up_to(max);
    if logic == Logic::States {
        if let Some(ObjType::Base(v)) = sig.value_opt() {
            bounds = bounds.with_type(v, 2, max.max(2));
        }
    }
    Ok(enumerate_models(&sig.with_logic(logic), &bounds)?.collect())
}

pub fn sweep(sig: &Signature, cfg: &SweepConfig) -> Result<SweepReport> {
    if cfg.depth == 0 {
        return Err(Error::Bounds("sweep depth must be positive".into()));
    }
    let logic = cfg.logic;
    let control = logic == Logic::Exc;
    let u = Arc::new(Universe::new(sig, logic, cfg.depth + cfg.slack, control, cfg.cap)?);
    let base = Theory::base(Arc::clone(&u));
    let models = sweep_models(sig, logic, cfg.carrier_max)?;
    let sig = sig.with_logic(logic);
    let eqs = Enumerator::new(&sig, logic).with_control(control).equations(cfg.depth);
    let entries = eqs
        .into_par_iter()
        .map(|e| check_one(&e, &sig, &base, &models))
        .collect::<Result<Vec<_>>>()?;
    let witnesses = witnesses(&sig, logic, &base, cfg.carrier_max)?;
    Ok(SweepReport {
        config: cfg.clone(),
        universe_size: u.len(),
        models: models.len(),
        entries,
        witnesses,
    })
}

fn check_one(e: &Equation, sig: &Signature, base: &Theory, models: &[FiniteModel]) -> Result<SweepEntry> {
    let logic = base.universe().logic();
    let reduction = reduce_to_pure(e, logic, sig, &Emptiness::inhabited())?;
    let mut problems = Vec::new();
    let with_e = base.with(std::slice::from_ref(e))?;
    match &reduction {
        PureReduction::Inconsistent => {
            if !with_e.is_maximal() {
                problems.push("e does not give the maximal theory".to_string());
            }
            if !base.with_all_pure().contains(e)? {
                problems.push("e not derivable from all pure equations".to_string());
            }
        }
        PureReduction::EmptyDomain | PureReduction::PureEqs(_) => {
            let e0 = reduction.pure_eqs();
            match base.with(e0) {
                Ok(t) => {
                    if !t.contains(e)? {
                        problems.push("e not derivable from E0".to_string());
                    }
                }
                Err(Error::OutsideUniverse(t)) => problems.push(format!("E0 leaves the universe at {t}")),
                Err(err) => return Err(err),
            }
            for m in e0 {
                match with_e.contains(m) {
                    Ok(true) => {}
                    Ok(false) => problems.push(format!("{m} not derivable from e")),
                    Err(Error::OutsideUniverse(t)) => problems.push(format!("E0 leaves the universe at {t}")),
                    Err(err) => return Err(err),
                }
            }
        }
    }
    for m in models {
        let red = reduce_to_pure(e, logic, sig, &Emptiness::from_model(m))?;
        if red.holds_in(m)? != m.sem_holds(e)? {
            problems.push(format!("oracle disagrees in {m}"));
            break;
        }
    }
    Ok(SweepEntry {
        equation: e.clone(),
        reduction,
        problems,
    })
}

/// The equations whose unprovability shows consistency.
pub fn witness_equations(sig: &Signature, logic: Logic) -> Result<Vec<Equation>> {
    Ok(match logic {
        Logic::Exc => {
            let p = sig.param()?;
            vec![Equation::strong(Term::throw(p.clone(), p.clone()), Term::id(p))?]
        }
        Logic::ExCore => {
            let p = sig.param()?;
            vec![Equation::strong(Term::untag(p.clone()), Term::copa(p))?]
        }
        Logic::States => {
            let v = sig.value()?;
            vec![Equation::strong(Term::update(v.clone()), Term::pa(v))?]
        }
        Logic::Eqn => Vec::new(),
    })
}

fn witnesses(sig: &Signature, logic: Logic, base: &Theory, max: usize) -> Result<Vec<Witness>> {
    let key = match logic {
        Logic::States => sig.value_opt().cloned(),
        _ => sig.param_opt().cloned(),
    };
    let models = sweep_models(sig, logic, max.max(2))?;
    let mut out = Vec::new();
    for e in witness_equations(sig, logic)? {
        let red = reduce_to_pure(&e, logic, sig, &Emptiness::inhabited())?;
        let verdict = crate::logic::verdict(&red, &models)?;
        let counter = models
            .iter()
            .filter(|m| key.as_ref().map(|k| m.size(k) == 2).unwrap_or(false))
            .find(|m| !m.sem_holds(&e).unwrap_or(true));
        let derived = base.contains(&e).unwrap_or(false);
        out.push(Witness {
            ok: !verdict.passed() && counter.is_some() && !derived && !base.is_maximal(),
            verdict: verdict.to_string(),
            countermodel: counter.map(|m| m.to_string()),
            equation: e,
        });
    }
    Ok(out)
}
