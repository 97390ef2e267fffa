//! Deterministic enumeration of terms and equations by size, and a seeded
//! random term generator.
//!
//! Terms of size `n` are produced as `t` followed by one atom, in the order
//! (size, last-atom size, earlier term, atom); the atom order is the order of
//! [`Enumerator::primitive_atoms`]. Compound atoms (`try`, `TRY`, `CATCH`)
//! count their nested atoms towards the size.

use std::collections::BTreeMap;

use rand::Rng;

use crate::signature::Signature;
use crate::term::{Atom, Equation, Strength, Term};
use crate::types::{Logic, ObjType};

#[derive(Clone, Debug)]
pub struct Enumerator {
    sig: Signature,
    logic: Logic,
    types: Vec<ObjType>,
    control: bool,
}

impl Enumerator {
    /// Enumerates terms of `logic`. `try/catch` is included for exceptions;
    /// core `TRY`/`CATCH` is off until [`Enumerator::with_control`].
    pub fn new(sig: &Signature, logic: Logic) -> Self {
        let sig = sig.with_logic(logic);
        let mut types = sig.all_types();
        if logic == Logic::Eqn {
            types.retain(|t| !t.is_empty_type());
        }
        Enumerator {
            types,
            control: logic == Logic::Exc,
            sig,
            logic,
        }
    }

    pub fn with_control(mut self, on: bool) -> Self {
        self.control = on;
        self
    }

    pub fn logic(&self) -> Logic {
        self.logic
    }

    pub fn types(&self) -> &[ObjType] {
        &self.types
    }

    /// Size-one atoms in enumeration order.
    pub fn primitive_atoms(&self) -> Vec<Atom> {
        let mut out: Vec<Atom> = self.sig.gens().iter().cloned().map(Atom::Gen).collect();
        let non_empty = self.types.iter().filter(|t| !t.is_empty_type());
        match self.logic {
            Logic::Eqn => {
                if self.types.contains(&ObjType::Empty) {
                    out.extend(non_empty.cloned().map(Atom::Copa));
                }
            }
            Logic::Exc => {
                out.extend(non_empty.cloned().map(Atom::Copa));
                if let Some(p) = self.sig.param_opt() {
                    for y in &self.types {
                        out.push(Atom::Throw {
                            param: p.clone(),
                            cod: y.clone(),
                        });
                    }
                }
            }
            Logic::ExCore => {
                out.extend(non_empty.cloned().map(Atom::Copa));
                if let Some(p) = self.sig.param_opt() {
                    out.push(Atom::Tag(p.clone()));
                    out.push(Atom::Untag(p.clone()));
                }
            }
            Logic::States => {
                out.extend(
                    self.types
                        .iter()
                        .filter(|t| **t != ObjType::Unit)
                        .cloned()
                        .map(Atom::Pa),
                );
                if let Some(v) = self.sig.value_opt() {
                    out.push(Atom::Lookup(v.clone()));
                    out.push(Atom::Update(v.clone()));
                }
            }
        }
        out
    }

    /// All terms of size at most `max`, grouped by size.
    pub fn layers(&self, max: usize) -> Vec<Vec<Term>> {
        let prims = self.primitive_atoms();
        let mut layers: Vec<Vec<Term>> = vec![self.types.iter().cloned().map(Term::id).collect()];
        // compound atoms of each size, built from smaller layers
        let mut compounds: Vec<Vec<Atom>> = vec![Vec::new()];
        for n in 1..=max {
            compounds.push(self.compounds_of_size(n, &layers));
            let mut layer = Vec::new();
            for k in 1..=n {
                let atoms: Vec<&Atom> = if k == 1 {
                    prims.iter().chain(&compounds[1]).collect()
                } else {
                    compounds[k].iter().collect()
                };
                for t in &layers[n - k] {
                    for a in &atoms {
                        if a.dom() != *t.cod() {
                            continue;
                        }
                        // copa[Empty] and pa[Unit] are identities
                        let step = Term::atom((*a).clone());
                        if step.is_id() {
                            continue;
                        }
                        if let Ok(next) = t.then(&step) {
                            layer.push(next);
                        }
                    }
                }
            }
            layers.push(layer);
        }
        layers
    }

    fn compounds_of_size(&self, n: usize, layers: &[Vec<Term>]) -> Vec<Atom> {
        let mut out = Vec::new();
        if !self.control {
            return out;
        }
        let Some(p) = self.sig.param_opt().cloned() else {
            return out;
        };
        let inner = n - 1;
        match self.logic {
            Logic::Exc => {
                for i in 0..=inner {
                    for a in &layers[i] {
                        for b in &layers[inner - i] {
                            if b.dom() == &p && b.cod() == a.cod() {
                                out.push(Atom::TryCatch(Box::new(a.clone()), Box::new(b.clone())));
                            }
                        }
                    }
                }
            }
            Logic::ExCore => {
                for b in &layers[inner] {
                    if b.dom() == &p && b.decoration().grade() <= 1 {
                        out.push(Atom::CatchCore(Box::new(b.clone())));
                    }
                }
                for i in 0..=inner {
                    for a in &layers[i] {
                        if a.decoration().grade() > 1 {
                            continue;
                        }
                        for k in &layers[inner - i] {
                            if k.dom() == a.cod() && k.cod() == a.cod() {
                                out.push(Atom::TryCore(Box::new(a.clone()), Box::new(k.clone())));
                            }
                        }
                    }
                }
            }
            _ => {}
        }
        out
    }

    /// All terms of size at most `max`, smallest first.
    pub fn terms(&self, max: usize) -> Vec<Term> {
        self.layers(max).into_iter().flatten().collect()
    }

    /// Terms of size at most `max` grouped by `(dom, cod)`.
    pub fn hom_sets(&self, max: usize) -> BTreeMap<(ObjType, ObjType), Vec<Term>> {
        let mut out: BTreeMap<(ObjType, ObjType), Vec<Term>> = BTreeMap::new();
        for t in self.terms(max) {
            out.entry((t.dom().clone(), t.cod().clone())).or_default().push(t);
        }
        out
    }

    /// Every equation `l R r` with `l` enumerated before `r`, both of size at
    /// most `max`; weak equations only in logics that have them.
    pub fn equations(&self, max: usize) -> Vec<Equation> {
        let strengths: &[Strength] = if self.logic.has_weak() {
            &[Strength::Strong, Strength::Weak]
        } else {
            &[Strength::Strong]
        };
        let mut out = Vec::new();
        for terms in self.hom_sets(max).values() {
            for (i, l) in terms.iter().enumerate() {
                for r in &terms[i + 1..] {
                    for s in strengths {
                        out.push(Equation::new(l.clone(), r.clone(), *s).expect("same hom-set"));
                    }
                }
            }
        }
        out
    }

    /// A random term of size at most `budget`, grown atom by atom from a
    /// random domain.
    pub fn random_term<R: Rng + ?Sized>(&self, rng: &mut R, budget: usize) -> Term {
        let dom = self.types[rng.random_range(0..self.types.len())].clone();
        self.random_from(rng, dom, budget)
    }

    fn random_from<R: Rng + ?Sized>(&self, rng: &mut R, dom: ObjType, budget: usize) -> Term {
        let prims = self.primitive_atoms();
        let mut t = Term::id(dom);
        let mut left = budget;
        while left > 0 && !rng.random_bool(0.2) {
            let mut choices: Vec<Atom> = prims
                .iter()
                .filter(|a| a.dom() == *t.cod() && !Term::atom((*a).clone()).is_id())
                .cloned()
                .collect();
            if self.control && left >= 1 && rng.random_bool(0.3) {
                if let Some(a) = self.random_compound(rng, t.cod().clone(), left - 1) {
                    choices = vec![a];
                }
            }
            if choices.is_empty() {
                break;
            }
            let a = choices.swap_remove(rng.random_range(0..choices.len()));
            left = left.saturating_sub(a.size());
            t = t.then(&Term::atom(a)).expect("atom chosen by domain");
        }
        t
    }

    fn random_compound<R: Rng + ?Sized>(&self, rng: &mut R, dom: ObjType, inner: usize) -> Option<Atom> {
        let p = self.sig.param_opt()?.clone();
        let half = inner / 2;
        match self.logic {
            Logic::Exc => {
                let a = self.random_from(rng, dom, half);
                let b = self.random_ending(rng, p, a.cod(), inner - a.size())?;
                Some(Atom::TryCatch(Box::new(a), Box::new(b)))
            }
            Logic::ExCore if rng.random_bool(0.5) => {
                let b = self.random_ending(rng, p, &dom, inner)?;
                (b.decoration().grade() <= 1).then(|| Atom::CatchCore(Box::new(b)))
            }
            Logic::ExCore => {
                let a = self.random_from(rng, dom, half);
                if a.decoration().grade() > 1 {
                    return None;
                }
                let k = self.random_ending(rng, a.cod().clone(), a.cod(), inner - a.size())?;
                Some(Atom::TryCore(Box::new(a), Box::new(k)))
            }
            _ => None,
        }
    }

    /// A random term `dom -> cod` found by a few attempts, falling back to
    /// the smallest enumerated one.
    fn random_ending<R: Rng + ?Sized>(&self, rng: &mut R, dom: ObjType, cod: &ObjType, budget: usize) -> Option<Term> {
        for _ in 0..8 {
            let t = self.random_from(rng, dom.clone(), budget);
            if t.cod() == cod {
                return Some(t);
            }
        }
        self.terms(budget.min(2))
            .into_iter()
            .find(|t| t.dom() == &dom && t.cod() == cod)
    }
}
