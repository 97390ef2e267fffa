//! Command-line front end. [`run`] takes the arguments and the two output
//! streams and returns the exit code: 0 when every check passes, 1 when one
//! fails, 2 on usage, file or DSL errors.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::engine::audit::audit;
use crate::engine::sweep::{default_signature, sweep, SweepConfig};
use crate::enumerate::Enumerator;
use crate::error::{Error, Result};
use crate::logic::exc::normalize_exc;
use crate::logic::excore::{normalize_core, normalize_core_weak, CoreNormalizer, Mode};
use crate::logic::states::normalize_state;
use crate::logic::{countermodel, reduce_to_pure, verdict, Emptiness, Verdict};
use crate::model::{enumerate_models, FiniteModel, ModelBounds};
use crate::syntax::{naturals, parse_term, Check, Program};
use crate::term::{Equation, Strength, Term};
use crate::translate::{translate, translate_equation, verify_translation};
use crate::types::{Logic, ObjType};

#[derive(Parser, Debug)]
#[command(name = "decolog", version, about = "Decide equations of decorated logics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum LogicArg {
    Eqn,
    Exc,
    Excore,
    States,
}

impl From<LogicArg> for Logic {
    fn from(l: LogicArg) -> Logic {
        match l {
            LogicArg::Eqn => Logic::Eqn,
            LogicArg::Exc => Logic::Exc,
            LogicArg::Excore => Logic::ExCore,
            LogicArg::States => Logic::States,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide every `check` of the given files.
    Check {
        files: Vec<PathBuf>,
        /// Carrier bounds of the models used when a file has no model block.
        #[arg(long, default_value_t = 1)]
        carrier_min: usize,
        #[arg(long, default_value_t = 3)]
        carrier_max: usize,
        /// Print the tables of both sides in the deciding model.
        #[arg(long)]
        dump_denotation: bool,
    },
    /// Print the canonical form of a term.
    Normalize {
        term: String,
        #[arg(long, value_enum, default_value = "exc")]
        logic: LogicArg,
        /// Read names from this file instead of the built-in naturals.
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Translate an exceptions term or equation into the core language.
    Translate {
        /// An expression, an equation, or a `.deco` file whose checks are translated.
        input: String,
        #[arg(long)]
        file: Option<PathBuf>,
        /// Decide the translated equation in the core logic.
        #[arg(long)]
        verify: bool,
    },
    /// Relative completeness sweep over all equations up to a size.
    Sweep {
        #[arg(long, value_enum)]
        logic: LogicArg,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = 3)]
        carrier_max: usize,
        /// Extra size for derivations; a per-logic default when omitted.
        #[arg(long)]
        slack: Option<usize>,
        /// Write the report here instead of standard output.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Evaluate every check semantically and compare with the decider.
    ModelCheck {
        files: Vec<PathBuf>,
        #[arg(long, default_value_t = 3)]
        carrier_max: usize,
        #[arg(long)]
        dump_denotation: bool,
    },
    /// Check every rule instance of a logic in every small model.
    Audit {
        #[arg(long, value_enum)]
        logic: LogicArg,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = 2)]
        carrier_max: usize,
    },
    /// Print and re-parse seeded random terms.
    Roundtrip {
        #[arg(long, value_enum, default_value = "exc")]
        logic: LogicArg,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Exit status of a subcommand that ran to completion.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    fn and(self, ok: bool) -> Status {
        if ok {
            self
        } else {
            Status::Fail
        }
    }

    fn code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
        }
    }
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    2
                }
            };
        }
    };
    let mut buf = String::new();
    let res = execute(&cli.command, &mut buf);
    let _ = out.write_all(buf.as_bytes());
    match res {
        Ok(s) => s.code(),
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

pub fn execute(cmd: &Command, out: &mut String) -> Result<Status> {
    match cmd {
        Command::Check {
            files,
            carrier_min,
            carrier_max,
            dump_denotation,
        } => {
            let bounds = (*carrier_min, *carrier_max);
            let mut status = Status::Pass;
            for f in files {
                status = status.and(check_file(f, bounds, *dump_denotation, out)? == Status::Pass);
            }
            Ok(status)
        }
        Command::Normalize { term, logic, file } => normalize(term, (*logic).into(), file.as_deref(), out),
        Command::Translate { input, file, verify } => translate_cmd(input, file.as_deref(), *verify, out),
        Command::Sweep {
            logic,
            depth,
            carrier_max,
            slack,
            report,
        } => {
            let logic: Logic = (*logic).into();
            if logic == Logic::Eqn {
                return Err(Error::Bounds("sweeps need a decorated logic".into()));
            }
            let mut cfg = SweepConfig::new(logic, *depth);
            cfg.carrier_max = *carrier_max;
            if let Some(s) = slack {
                cfg.slack = *s;
            }
            let r = sweep(&default_signature(logic), &cfg)?;
            let text = r.render();
            match report {
                Some(p) => {
                    std::fs::write(p, &text).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
                    out.push_str(text.lines().last().unwrap_or_default());
                    out.push('\n');
                }
                None => out.push_str(&text),
            }
            Ok(Status::Pass.and(r.ok()))
        }
        Command::ModelCheck {
            files,
            carrier_max,
            dump_denotation,
        } => {
            let mut status = Status::Pass;
            for f in files {
                status = status.and(model_check_file(f, (1, *carrier_max), *dump_denotation, out)? == Status::Pass);
            }
            Ok(status)
        }
        Command::Audit {
            logic,
            depth,
            carrier_max,
        } => {
            let logic: Logic = (*logic).into();
            let r = audit(&default_signature(logic), logic, *depth, *carrier_max)?;
            out.push_str(&r.render());
            Ok(Status::Pass.and(r.violations() == 0))
        }
        Command::Roundtrip {
            logic,
            count,
            depth,
            seed,
        } => roundtrip((*logic).into(), *count, *depth, *seed, out),
    }
}

fn load(path: &Path) -> Result<Program> {
    let src = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Program::parse(&src)
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

/// Name printed for a check: its own, the file stem when it is the only
/// check, otherwise the stem and the line.
fn check_name(prog: &Program, c: &Check, stem: &str) -> String {
    match &c.name {
        Some(n) => n.clone(),
        None if prog.checks.len() == 1 => stem.to_string(),
        None => format!("{stem}:{}", c.line),
    }
}

/// The file's model, or every model with carriers in `min..=max` (values
/// of states get at least two elements).
fn models_of(prog: &Program, (min, max): (usize, usize)) -> Result<Vec<FiniteModel>> {
    if let Some(m) = &prog.model {
        return Ok(vec![m.clone()]);
    }
    let sig = &prog.signature;
    let mut bounds = ModelBounds {
        min,
        max,
        ..Default::default()
    };
    if sig.logic() == Logic::States {
        if let Some(ObjType::Base(v)) = sig.value_opt() {
            bounds = bounds.with_type(v, min.max(2), max.max(2));
        }
    }
    Ok(enumerate_models(sig, &bounds)?.collect())
}

fn emptiness_of(prog: &Program) -> Emptiness {
    prog.model.as_ref().map(Emptiness::from_model).unwrap_or_default()
}

fn dump(e: &Equation, m: &FiniteModel, out: &mut String) -> Result<()> {
    let _ = writeln!(out, "  model: {m}");
    for (side, t) in [("lhs", &e.lhs), ("rhs", &e.rhs)] {
        let _ = writeln!(out, "  {side}: {t}");
        for line in m.eval(t)?.render().lines() {
            let _ = writeln!(out, "    {line}");
        }
    }
    Ok(())
}

/// Rewrites done by the core normalizer on both sides.
fn core_trace(e: &Equation) -> Vec<String> {
    let mode = match e.strength {
        Strength::Strong => Mode::Strong,
        Strength::Weak => Mode::Weak,
    };
    let mut lines = Vec::new();
    for t in [&e.lhs, &e.rhs] {
        let mut n = CoreNormalizer::new(mode);
        if let Ok(c) = n.normalize(t) {
            lines.extend(n.into_trace());
            lines.push(c.to_string());
        }
    }
    lines
}

fn first_failure<'m>(e: &Equation, models: &'m [FiniteModel]) -> Result<Option<&'m FiniteModel>> {
    for m in models {
        if !m.sem_holds(e)? {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

/// Prints the `RESULT` block of one equation and returns its verdict.
fn report_equation(
    name: &str,
    e: &Equation,
    prog: &Program,
    models: &[FiniteModel],
    dump_denotation: bool,
    out: &mut String,
) -> Result<Verdict> {
    let logic = prog.signature.logic();
    let red = reduce_to_pure(e, logic, &prog.signature, &emptiness_of(prog))?;
    let v = verdict(&red, models)?;
    let _ = writeln!(out, "RESULT {name} {v}");
    if logic == Logic::ExCore {
        for t in core_trace(e) {
            let _ = writeln!(out, "  core: {t}");
        }
    }
    for p in red.pure_eqs() {
        let _ = writeln!(out, "  pure-eq: {p}");
    }
    let counter = match v {
        Verdict::NotEqual => countermodel(&red, models)?,
        Verdict::Inconsistent => first_failure(e, models)?,
        _ => None,
    };
    if let Some(m) = counter {
        let _ = writeln!(out, "  countermodel: {m}");
    }
    if dump_denotation {
        if let Some(m) = counter.or(models.first()) {
            dump(e, m, out)?;
        }
    }
    Ok(v)
}

fn check_file(path: &Path, bounds: (usize, usize), dump_denotation: bool, out: &mut String) -> Result<Status> {
    let prog = load(path)?;
    let models = models_of(&prog, bounds)?;
    let stem = stem(path);
    let mut status = Status::Pass;
    for c in &prog.checks {
        let name = check_name(&prog, c, &stem);
        let v = report_equation(&name, &c.equation, &prog, &models, dump_denotation, out)?;
        status = status.and(v.passed());
    }
    Ok(status)
}

fn model_check_file(path: &Path, bounds: (usize, usize), dump_denotation: bool, out: &mut String) -> Result<Status> {
    let prog = load(path)?;
    let models = models_of(&prog, bounds)?;
    let logic = prog.signature.logic();
    let stem = stem(path);
    let mut status = Status::Pass;
    for c in &prog.checks {
        let name = check_name(&prog, c, &stem);
        let mut holds = 0;
        let mut disagree = 0;
        let mut first_fail = None;
        for m in &models {
            let sem = m.sem_holds(&c.equation)?;
            let dec = reduce_to_pure(&c.equation, logic, &prog.signature, &Emptiness::from_model(m))?.holds_in(m)?;
            if sem {
                holds += 1;
            } else if first_fail.is_none() {
                first_fail = Some(m);
            }
            if sem != dec {
                disagree += 1;
            }
        }
        let word = if holds == models.len() { "HOLDS" } else { "FAILS" };
        let _ = writeln!(
            out,
            "MODEL {name} {word} models={} holds={holds} disagreements={disagree}",
            models.len()
        );
        if let Some(m) = first_fail {
            let _ = writeln!(out, "  countermodel: {m}");
        }
        if dump_denotation {
            if let Some(m) = first_fail.or(models.first()) {
                dump(&c.equation, m, out)?;
            }
        }
        status = status.and(holds == models.len() && disagree == 0);
    }
    Ok(status)
}

fn context(file: Option<&Path>, logic: Logic) -> Result<Program> {
    match file {
        Some(p) => Ok(load(p)?.with_logic(logic)),
        None => Ok(naturals(logic)),
    }
}

fn normalize(src: &str, logic: Logic, file: Option<&Path>, out: &mut String) -> Result<Status> {
    let prog = context(file, logic)?;
    let t = prog.term(src)?;
    let _ = writeln!(out, "TERM {t}");
    match logic {
        Logic::Eqn => {
            let _ = writeln!(out, "NORMAL pure {t}");
        }
        Logic::Exc => {
            let _ = writeln!(out, "NORMAL {}", normalize_exc(&t)?);
        }
        Logic::ExCore => {
            match normalize_core(&t) {
                Ok(c) => {
                    let _ = writeln!(out, "NORMAL {c}");
                    let _ = writeln!(out, "WEAK {}", c.weak_part());
                }
                Err(Error::NoCanonicalForm(why)) => {
                    let _ = writeln!(out, "NORMAL none ({why})");
                }
                Err(e) => return Err(e),
            }
            if let Ok(w) = normalize_core_weak(&t) {
                let _ = writeln!(out, "note: {t} ~~ {}", w.weak_part());
            }
        }
        Logic::States => {
            let c = normalize_state(&t)?;
            let _ = writeln!(out, "NORMAL {c}");
            let _ = writeln!(out, "WEAK {}", c.weak_part());
        }
    }
    Ok(Status::Pass)
}

fn translate_cmd(input: &str, file: Option<&Path>, verify: bool, out: &mut String) -> Result<Status> {
    let path = Path::new(input);
    if input.ends_with(".deco") && path.is_file() {
        let prog = load(path)?;
        if prog.signature.logic() != Logic::Exc {
            return Err(Error::FamilyMismatch {
                expected: Logic::Exc,
                found: prog.signature.logic(),
            });
        }
        let stem = stem(path);
        let mut status = Status::Pass;
        for c in &prog.checks {
            let name = check_name(&prog, c, &stem);
            status = status.and(translate_one(&name, &c.equation, &prog, verify, out)? == Status::Pass);
        }
        return Ok(status);
    }
    let prog = context(file, Logic::Exc)?;
    if input.contains("==") {
        let e = prog.equation(input)?;
        translate_one("translate", &e, &prog, verify, out)
    } else {
        let t = prog.term(input)?;
        let _ = writeln!(out, "{}", translate(&t)?);
        Ok(Status::Pass)
    }
}

fn translate_one(name: &str, e: &Equation, prog: &Program, verify: bool, out: &mut String) -> Result<Status> {
    let te = translate_equation(e)?;
    let _ = writeln!(out, "{te}");
    if !verify {
        return Ok(Status::Pass);
    }
    let core = prog.with_logic(Logic::ExCore);
    let core_models = models_of(&core, (1, 3))?;
    let v = report_equation(name, &te, &core, &core_models, false, out)?;
    let exc_models = models_of(&prog.with_logic(Logic::Exc), (1, 3))?;
    let c = verify_translation(e, &exc_models)?;
    if !c.ok() {
        let _ = writeln!(
            out,
            "  translation: exc={} core={} semantic-failures={} decision-failures={}",
            c.exc_verdict, c.core_verdict, c.semantic_failures, c.decision_failures
        );
    }
    Ok(Status::Pass.and(v.passed() && c.ok()))
}

fn roundtrip(logic: Logic, count: usize, depth: usize, seed: u64, out: &mut String) -> Result<Status> {
    let sig = naturals(logic).signature;
    let en = Enumerator::new(&sig, logic).with_control(true);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    for _ in 0..count {
        let t = en.random_term(&mut rng, depth);
        let printed = t.to_string();
        let back: Result<Term> = parse_term(&printed, &sig);
        if back.as_ref() != Ok(&t) {
            failures += 1;
            let _ = writeln!(out, "ROUNDTRIP-FAIL {printed}");
        }
    }
    let _ = writeln!(
        out,
        "ROUNDTRIP logic={} seed={seed} count={count} ok={} fail={failures}",
        logic.name(),
        count - failures
    );
    Ok(Status::Pass.and(failures == 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("decolog").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(call(&["frobnicate"]).0, 2);
        assert_eq!(call(&["check", "/no/such/file.deco"]).0, 2);
        assert_eq!(call(&["normalize", "s . ("]).0, 2);
    }

    #[test]
    fn normalizes_example_term() {
        let (code, out, _) = call(&["normalize", "try (s . throw[N] . three) catch (p)"]);
        assert_eq!(code, 0);
        assert!(out.contains("NORMAL pure p . three"), "{out}");
    }

    #[test]
    fn normalizes_core_term_with_weak_note() {
        let (code, out, _) = call(&["normalize", "--logic", "excore", "untag . tag"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("NORMAL catcher"), "{out}");
        assert!(out.contains("note: untag . tag ~~"), "{out}");
    }

    #[test]
    fn translates_terms() {
        let (code, out, _) = call(&["translate", "try (s . throw[N] . three) catch (p)"]);
        assert_eq!(code, 0);
        assert_eq!(out, "TRY(s . copa[N] . tag . three, CATCH(p))\n");
    }

    #[test]
    fn roundtrip_is_exact() {
        let (code, out, _) = call(&["roundtrip", "--count", "50", "--seed", "3"]);
        assert_eq!(code, 0, "{out}");
    }
}
