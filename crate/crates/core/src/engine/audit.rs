//! Soundness audit: every instance of every rule, with all its terms within
//! a size bound, is checked in every enumerated model.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::enumerate::Enumerator;
use crate::error::Result;
use crate::logic::rules::{Guard, RuleSet};
use crate::model::{enumerate_models, Denotation, FiniteModel, ModelBounds};
use crate::signature::Signature;
use crate::term::{Atom, Term};
use crate::types::{Logic, ObjType};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RuleTally {
    /// Instances whose premises hold in the model.
    pub instances: usize,
    pub violations: usize,
}

#[derive(Clone, Debug)]
pub struct AuditReport {
    pub logic: Logic,
    pub depth: usize,
    pub models: usize,
    pub rules: BTreeMap<&'static str, RuleTally>,
    pub examples: Vec<String>,
}

impl AuditReport {
    pub fn violations(&self) -> usize {
        self.rules.values().map(|t| t.violations).sum()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# audit logic={} depth={} models={}",
            self.logic.name(),
            self.depth,
            self.models
        );
        for (name, t) in &self.rules {
            let _ = writeln!(
                out,
                "AUDIT {name} instances={} violations={}",
                t.instances, t.violations
            );
        }
        for e in &self.examples {
            let _ = writeln!(out, "VIOLATION {e}");
        }
        out
    }
}

/// Terms of the audit with their composition table.
struct Pool {
    terms: Vec<Term>,
    index: HashMap<Term, usize>,
    /// `(g, f) -> g . f`.
    comp: HashMap<(usize, usize), usize>,
    homs: Vec<Vec<usize>>,
    by_dom: HashMap<ObjType, Vec<usize>>,
    by_cod: HashMap<ObjType, Vec<usize>>,
}

impl Pool {
    fn new(terms: Vec<Term>, depth: usize) -> Pool {
        let index: HashMap<Term, usize> = terms.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        let mut comp = HashMap::new();
        for (f, tf) in terms.iter().enumerate() {
            for (g, tg) in terms.iter().enumerate() {
                if tg.dom() == tf.cod() && tf.size() + tg.size() <= depth {
                    if let Some(&h) = tf.then(tg).ok().and_then(|t| index.get(&t)) {
                        comp.insert((g, f), h);
                    }
                }
            }
        }
        let mut homs: BTreeMap<(ObjType, ObjType), Vec<usize>> = BTreeMap::new();
        let mut by_dom: HashMap<ObjType, Vec<usize>> = HashMap::new();
        let mut by_cod: HashMap<ObjType, Vec<usize>> = HashMap::new();
        for (i, t) in terms.iter().enumerate() {
            homs.entry((t.dom().clone(), t.cod().clone())).or_default().push(i);
            by_dom.entry(t.dom().clone()).or_default().push(i);
            by_cod.entry(t.cod().clone()).or_default().push(i);
        }
        Pool {
            terms,
            index,
            comp,
            homs: homs.into_values().collect(),
            by_dom,
            by_cod,
        }
    }

    fn from_ty<'a>(map: &'a HashMap<ObjType, Vec<usize>>, ty: &ObjType) -> &'a [usize] {
        map.get(ty).map(|v| v.as_slice()).unwrap_or(&[])
    }

    fn find(&self, t: &Term) -> Option<usize> {
        self.index.get(t).copied()
    }

    fn comp(&self, g: usize, f: usize) -> Option<usize> {
        self.comp.get(&(g, f)).copied()
    }
}

fn guard_ok(g: Guard, t: &Term) -> bool {
    match g {
        Guard::Any => true,
        Guard::Pure => t.is_pure(),
        Guard::Propagator => t.decoration().grade() <= 1,
    }
}

/// Audits the rules of `logic` on all terms of size at most `depth` in every
/// model with carriers up to `carrier_max`.
pub fn audit(sig: &Signature, logic: Logic, depth: usize, carrier_max: usize) -> Result<AuditReport> {
    let sig = sig.with_logic(logic);
    let rules = RuleSet::for_logic(logic);
    let control = matches!(logic, Logic::Exc | Logic::ExCore);
    let pool = Pool::new(Enumerator::new(&sig, logic).with_control(control).terms(depth), depth);
    let model_logic = if logic == Logic::Eqn { Logic::Exc } else { logic };
    let models: Vec<FiniteModel> = enumerate_models(&sig.with_logic(model_logic), &ModelBounds::up_to(carrier_max))?
        .map(|m| m.with_logic(logic))
        .collect();
    let mut report = AuditReport {
        logic,
        depth,
        models: models.len(),
        rules: rules.rules.iter().map(|r| (r.name, RuleTally::default())).collect(),
        examples: Vec::new(),
    };
    let per_model = models
        .par_iter()
        .map(|m| {
            let den: Vec<Denotation> = pool.terms.iter().map(|t| m.eval(t)).collect::<Result<_>>()?;
            let ctx = Ctx {
                pool: &pool,
                den: &den,
                sig: &sig,
            };
            let mut tallies = Vec::new();
            let mut examples = Vec::new();
            for rule in &rules.rules {
                let mut tally = RuleTally::default();
                ctx.check(rule.name, |r| rule.guard(r), &mut |ok, what: &dyn Fn() -> String| {
                    tally.instances += 1;
                    if !ok {
                        tally.violations += 1;
                        if examples.len() < 10 {
                            examples.push(format!("{} {} in {m}", rule.name, what()));
                        }
                    }
                });
                tallies.push((rule.name, tally));
            }
            Ok((tallies, examples))
        })
        .collect::<Result<Vec<_>>>()?;
    for (tallies, examples) in per_model {
        for (name, t) in tallies {
            let total = report.rules.get_mut(name).expect("tally per rule");
            total.instances += t.instances;
            total.violations += t.violations;
        }
        for e in examples {
            if report.examples.len() < 10 {
                report.examples.push(e);
            }
        }
    }
    Ok(report)
}

struct Ctx<'a> {
    pool: &'a Pool,
    den: &'a [Denotation],
    sig: &'a Signature,
}

type Sink<'s> = dyn FnMut(bool, &dyn Fn() -> String) + 's;

impl Ctx<'_> {
    fn strong(&self, i: usize, j: usize) -> bool {
        self.den[i] == self.den[j]
    }

    fn weak(&self, i: usize, j: usize) -> bool {
        self.den[i].agrees_weakly(&self.den[j])
    }

    fn rel(&self, weak: bool, i: usize, j: usize) -> bool {
        if weak {
            self.weak(i, j)
        } else {
            self.strong(i, j)
        }
    }

    fn t(&self, i: usize) -> &Term {
        &self.pool.terms[i]
    }

    fn n(&self) -> usize {
        self.pool.terms.len()
    }

    fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pool
            .homs
            .iter()
            .flat_map(|h| h.iter().flat_map(move |&i| h.iter().map(move |&j| (i, j))))
    }

    fn single(&self, t: Term) -> Option<usize> {
        self.pool.find(&t)
    }

    fn check(&self, name: &str, guard: impl Fn(&str) -> Guard, sink: &mut Sink<'_>) {
        let weak_rule = name.ends_with("~~");
        let show = |a: usize, b: usize| format!("{} / {}", self.t(a), self.t(b));
        match name {
            "refl" | "refl==" | "refl~~" => {
                for i in 0..self.n() {
                    sink(self.rel(weak_rule, i, i), &|| self.t(i).to_string());
                }
            }
            "sym" | "sym==" | "sym~~" => {
                for (i, j) in self.pairs().filter(|&(i, j)| self.rel(weak_rule, i, j)) {
                    sink(self.rel(weak_rule, j, i), &|| show(i, j));
                }
            }
            "trans" | "trans==" | "trans~~" => {
                let pairs: Vec<(usize, usize)> = self.pairs().filter(|&(i, j)| self.rel(weak_rule, i, j)).collect();
                let mut from: HashMap<usize, Vec<usize>> = HashMap::new();
                for &(i, j) in &pairs {
                    from.entry(i).or_default().push(j);
                }
                for &(f, g) in &pairs {
                    for &h in from.get(&g).map(|v| v.as_slice()).unwrap_or(&[]) {
                        sink(self.rel(weak_rule, f, h), &|| show(f, h));
                    }
                }
            }
            "subs" | "subs==" | "subs~~" | "repl" | "repl==" | "repl~~" => {
                let subs = name.starts_with("subs");
                let g = guard("h");
                for (g1, g2) in self.pairs().filter(|&(a, b)| self.rel(weak_rule, a, b)) {
                    let hs = if subs {
                        Pool::from_ty(&self.pool.by_cod, self.t(g1).dom())
                    } else {
                        Pool::from_ty(&self.pool.by_dom, self.t(g1).cod())
                    };
                    for &h in hs.iter().filter(|&&h| guard_ok(g, self.t(h))) {
                        let (c1, c2) = if subs {
                            (self.pool.comp(g1, h), self.pool.comp(g2, h))
                        } else {
                            (self.pool.comp(h, g1), self.pool.comp(h, g2))
                        };
                        if let (Some(c1), Some(c2)) = (c1, c2) {
                            sink(self.rel(weak_rule, c1, c2), &|| show(c1, c2));
                        }
                    }
                }
            }
            "initial" | "initial1" | "empty~~" => {
                let g = guard(if name == "initial1" { "a" } else { "f" });
                for i in (0..self.n()).filter(|&i| self.t(i).dom().is_empty_type() && guard_ok(g, self.t(i))) {
                    if let Some(c) = self.single(Term::copa(self.t(i).cod().clone())) {
                        sink(self.rel(weak_rule, i, c), &|| show(i, c));
                    }
                }
            }
            "unit" | "unit~~" => {
                let g = guard("f");
                for i in (0..self.n()).filter(|&i| self.t(i).cod() == &ObjType::Unit && guard_ok(g, self.t(i))) {
                    if let Some(c) = self.single(Term::pa(self.t(i).dom().clone())) {
                        sink(self.rel(weak_rule, i, c), &|| show(i, c));
                    }
                }
            }
            "s-to-w" => {
                for (i, j) in self.pairs().filter(|&(i, j)| self.strong(i, j)) {
                    sink(self.weak(i, j), &|| show(i, j));
                }
            }
            "ax" => {
                let (lhs, ty) = match (self.sig.param_opt(), self.sig.value_opt(), self.sig.logic()) {
                    (Some(p), _, Logic::ExCore) => (Term::tag(p.clone()).then(&Term::untag(p.clone())), p.clone()),
                    (_, Some(v), Logic::States) => (Term::update(v.clone()).then(&Term::lookup(v.clone())), v.clone()),
                    _ => return,
                };
                if let (Some(i), Some(j)) = (lhs.ok().and_then(|t| self.single(t)), self.single(Term::id(ty))) {
                    sink(self.weak(i, j), &|| show(i, j));
                }
            }
            "eq1" => {
                for (i, j) in self.pairs().filter(|&(i, j)| {
                    self.t(i).decoration().grade() <= 1 && self.t(j).decoration().grade() <= 1 && self.weak(i, j)
                }) {
                    sink(self.strong(i, j), &|| show(i, j));
                }
            }
            "eq2" => {
                let core = self.sig.logic() == Logic::ExCore;
                for (i, j) in self.pairs().filter(|&(i, j)| self.weak(i, j)) {
                    let probe = |k: usize| {
                        let t = self.t(k);
                        let p = if core {
                            self.single(Term::copa(t.dom().clone()))
                                .and_then(|c| self.pool.comp(k, c))
                        } else {
                            self.single(Term::pa(t.cod().clone()))
                                .and_then(|c| self.pool.comp(c, k))
                        };
                        p
                    };
                    if let (Some(a), Some(b)) = (probe(i), probe(j)) {
                        if self.strong(a, b) {
                            sink(self.strong(i, j), &|| show(i, j));
                        }
                    }
                }
            }
            "eq3" => {
                let core = self.sig.logic() == Logic::ExCore;
                let (Some(p), Some(v)) = (
                    self.sig.param_opt().or(self.sig.value_opt()),
                    self.sig.value_opt().or(self.sig.param_opt()),
                ) else {
                    return;
                };
                for (i, j) in self.pairs() {
                    let t = self.t(i);
                    let probe = |k: usize| {
                        if core {
                            self.single(Term::tag(p.clone())).and_then(|c| self.pool.comp(k, c))
                        } else {
                            self.single(Term::lookup(v.clone())).and_then(|c| self.pool.comp(c, k))
                        }
                    };
                    let shape = if core {
                        t.dom().is_empty_type()
                    } else {
                        t.cod() == &ObjType::Unit
                    };
                    if !shape {
                        continue;
                    }
                    if let (Some(a), Some(b)) = (probe(i), probe(j)) {
                        if self.weak(a, b) {
                            sink(self.strong(i, j), &|| show(i, j));
                        }
                    }
                }
            }
            "recover" => {
                for (i, j) in self
                    .pairs()
                    .filter(|&(i, j)| self.t(i).is_pure() && self.t(j).is_pure())
                {
                    let Some(p) = self.sig.param_opt() else { return };
                    if self.t(i).cod() != p {
                        continue;
                    }
                    for y in Enumerator::new(self.sig, Logic::Exc).types() {
                        let Some(th) = self.single(Term::throw(p.clone(), y.clone())) else {
                            continue;
                        };
                        if let (Some(a), Some(b)) = (self.pool.comp(th, i), self.pool.comp(th, j)) {
                            if self.strong(a, b) {
                                sink(self.strong(i, j), &|| show(i, j));
                            }
                        }
                    }
                }
            }
            "propagate" => {
                let Some(p) = self.sig.param_opt() else { return };
                for a in 0..self.n() {
                    let t = self.t(a);
                    let (Some(tx), Some(ty)) = (
                        self.single(Term::throw(p.clone(), t.dom().clone())),
                        self.single(Term::throw(p.clone(), t.cod().clone())),
                    ) else {
                        continue;
                    };
                    if let Some(c) = self.pool.comp(a, tx) {
                        sink(self.strong(c, ty), &|| show(c, ty));
                    }
                }
            }
            "try" | "try0" | "try1" => {
                let tries: Vec<(usize, &Term, &Term)> = (0..self.n())
                    .filter_map(|i| match self.t(i).atoms() {
                        [Atom::TryCatch(a, b)] => Some((i, &**a, &**b)),
                        _ => None,
                    })
                    .collect();
                match name {
                    "try" => {
                        for &(i, a1, b1) in &tries {
                            for &(j, a2, b2) in &tries {
                                if b1 != b2 || a1.dom() != a2.dom() {
                                    continue;
                                }
                                if let (Some(x), Some(y)) = (self.pool.find(a1), self.pool.find(a2)) {
                                    if self.strong(x, y) {
                                        sink(self.strong(i, j), &|| show(i, j));
                                    }
                                }
                            }
                        }
                    }
                    "try0" => {
                        for &(i, a, _) in tries.iter().filter(|(_, a, _)| a.is_pure()) {
                            if let Some(x) = self.pool.find(a) {
                                sink(self.strong(i, x), &|| show(i, x));
                            }
                        }
                    }
                    _ => {
                        for &(i, a, b) in &tries {
                            let Some((Atom::Throw { .. }, v)) = a.atoms().split_last() else {
                                continue;
                            };
                            if !v.iter().all(|x| x.decoration().is_pure()) {
                                continue;
                            }
                            let u = a.prefix(v.len());
                            if let Some(x) = u.then(b).ok().and_then(|t| self.pool.find(&t)) {
                                sink(self.strong(i, x), &|| show(i, x));
                            }
                        }
                    }
                }
            }
            "catch~~" | "catch==" | "try~~" => {
                for i in 0..self.n() {
                    let t = self.t(i);
                    match (name, t.atoms()) {
                        ("catch~~", [Atom::CatchCore(_)]) => {
                            if let Some(x) = self.single(Term::id(t.cod().clone())) {
                                sink(self.weak(i, x), &|| show(i, x));
                            }
                        }
                        ("catch==", [Atom::CatchCore(b)]) => {
                            let l = Term::copa(t.cod().clone())
                                .then(t)
                                .ok()
                                .and_then(|x| self.pool.find(&x));
                            let r = Term::untag(b.dom().clone())
                                .then(b)
                                .ok()
                                .and_then(|x| self.pool.find(&x));
                            if let (Some(l), Some(r)) = (l, r) {
                                sink(self.strong(l, r), &|| show(l, r));
                            }
                        }
                        ("try~~", [Atom::TryCore(a, k)]) => {
                            if let Some(x) = a.then(k).ok().and_then(|x| self.pool.find(&x)) {
                                sink(self.weak(i, x), &|| show(i, x));
                            }
                        }
                        _ => {}
                    }
                }
            }
            other => unreachable!("rule {other} has no audit"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::sweep::default_signature;

    #[test]
    fn rules_are_sound_at_depth_two() {
        for logic in [Logic::Eqn, Logic::Exc, Logic::ExCore, Logic::States] {
            let r = audit(&default_signature(logic), logic, 2, 2).unwrap();
            assert_eq!(r.violations(), 0, "{}", r.render());
            assert!(r.rules.values().any(|t| t.instances > 0));
        }
    }
}
