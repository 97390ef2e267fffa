//! Bounded deductive closure.
//!
//! A theory is a pair of congruences on the universe (strong and, where the
//! logic has them, weak), kept as union-find structures and saturated under
//! the rules of the logic restricted to the universe. Congruence uses the
//! single-atom extension tables: two terms in one class force their
//! extensions by the same atom into one class, on the sides allowed by the
//! substitution and replacement guards.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::sync::Arc;

use petgraph::unionfind::UnionFind;

use super::universe::Universe;
use crate::error::Result;
use crate::logic::rules::{Guard, RuleSet};
use crate::term::{Atom, Equation, Strength, Term};
use crate::types::{Logic, ObjType};

#[derive(Clone, Debug)]
pub struct Theory {
    u: Arc<Universe>,
    strong: UnionFind<usize>,
    weak: UnionFind<usize>,
    maximal: bool,
    axioms: Vec<Equation>,
    weak_pre_pure: bool,
    weak_post_pure: bool,
}

impl Theory {
    /// The closure of no axioms: everything the rules derive on their own.
    pub fn base(u: Arc<Universe>) -> Theory {
        let n = u.len();
        let rules = RuleSet::for_logic(u.logic());
        let pure_only = |name: &str| rules.get(name).map(|r| r.guard("h") == Guard::Pure).unwrap_or(false);
        let mut t = Theory {
            strong: UnionFind::new(n),
            weak: UnionFind::new(n),
            maximal: false,
            axioms: Vec::new(),
            weak_pre_pure: pure_only("subs~~"),
            weak_post_pure: pure_only("repl~~"),
            u,
        };
        t.ground_axioms();
        t.saturate();
        t
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.u
    }

    pub fn axioms(&self) -> &[Equation] {
        &self.axioms
    }

    pub fn is_maximal(&self) -> bool {
        self.maximal
    }

    pub(crate) fn strong_find(&self, i: usize) -> usize {
        self.strong.find(i)
    }

    fn has_weak(&self) -> bool {
        self.u.logic().has_weak()
    }

    /// A copy with `eqs` added and re-saturated.
    pub fn with(&self, eqs: &[Equation]) -> Result<Theory> {
        let mut t = self.clone();
        for e in eqs {
            t.assert(e)?;
        }
        t.saturate();
        Ok(t)
    }

    /// A copy with every pure equation of the universe added.
    pub fn with_all_pure(&self) -> Theory {
        let mut t = self.clone();
        for members in self.u.hom_sets().values() {
            let pure: Vec<usize> = members.iter().copied().filter(|&i| self.u.info[i].pure).collect();
            for w in pure.windows(2) {
                t.merge(w[0], w[1], Strength::Strong);
            }
        }
        t.saturate();
        t
    }

    fn assert(&mut self, e: &Equation) -> Result<()> {
        let l = self.u.require(&e.lhs)?;
        let r = self.u.require(&e.rhs)?;
        self.axioms.push(e.clone());
        self.merge(l, r, e.strength);
        Ok(())
    }

    fn merge(&mut self, i: usize, j: usize, s: Strength) -> bool {
        let mut changed = false;
        if s == Strength::Strong {
            changed |= self.strong.union(i, j);
        }
        if self.has_weak() {
            changed |= self.weak.union(i, j);
        }
        changed
    }

    pub fn contains(&self, e: &Equation) -> Result<bool> {
        let l = self.u.require(&e.lhs)?;
        let r = self.u.require(&e.rhs)?;
        Ok(self.maximal || self.related(l, r, e.strength))
    }

    fn related(&self, i: usize, j: usize, s: Strength) -> bool {
        match s {
            Strength::Strong => self.strong.equiv(i, j),
            Strength::Weak if self.has_weak() => self.weak.equiv(i, j),
            Strength::Weak => self.strong.equiv(i, j),
        }
    }

    /// Whether every member of `self` is a member of `other` (same universe).
    pub fn is_subset(&self, other: &Theory) -> bool {
        debug_assert!(Arc::ptr_eq(&self.u, &other.u) || self.u.len() == other.u.len());
        if other.maximal {
            return true;
        }
        if self.maximal {
            return other.is_full();
        }
        (0..self.u.len()).all(|i| {
            let s = self.strong.find(i);
            let ok = other.strong.equiv(i, s);
            if !self.has_weak() {
                return ok;
            }
            ok && other.weak.equiv(i, self.weak.find(i))
        })
    }

    /// Whether every equation of the universe is a member.
    pub fn is_full(&self) -> bool {
        self.maximal
            || self.u.hom_sets().values().all(|members| {
                members
                    .iter()
                    .all(|&i| self.strong.equiv(members[0], i) && (!self.has_weak() || self.weak.equiv(members[0], i)))
            })
    }

    pub fn same_as(&self, other: &Theory) -> bool {
        self.is_subset(other) && other.is_subset(self)
    }

    /// Number of non-trivial members `(strong, weak)`, counting each
    /// unordered pair once.
    pub fn count_classes(&self) -> (usize, usize) {
        let pairs = |uf: &UnionFind<usize>| {
            let mut sizes: HashMap<usize, usize> = HashMap::new();
            for i in 0..self.u.len() {
                *sizes.entry(uf.find(i)).or_default() += 1;
            }
            sizes.values().map(|k| k * (k - 1) / 2).sum()
        };
        let strong = pairs(&self.strong);
        let weak = if self.has_weak() { pairs(&self.weak) } else { 0 };
        (strong, weak)
    }

    /// The non-trivial strong members, each pair listed once in
    /// enumeration order.
    pub fn strong_members(&self) -> Vec<Equation> {
        let mut classes: HashMap<usize, Vec<usize>> = HashMap::new();
        for i in 0..self.u.len() {
            classes.entry(self.strong.find(i)).or_default().push(i);
        }
        let mut out = Vec::new();
        for i in 0..self.u.len() {
            let members = &classes[&self.strong.find(i)];
            for &j in members.iter().filter(|&&j| j > i) {
                if self.maximal || self.strong.equiv(i, j) {
                    out.push(
                        Equation::strong(self.u.term(i).clone(), self.u.term(j).clone())
                            .expect("one class, one hom-set"),
                    );
                }
            }
        }
        out
    }

    /// Instances of the axiom-like rules, which hold in every theory.
    fn ground_axioms(&mut self) {
        let u = Arc::clone(&self.u);
        let logic = u.logic();
        let find = |t: Term| u.index_of(&t);
        let copa = |y: &ObjType| find(Term::copa(y.clone()));
        let pa = |x: &ObjType| find(Term::pa(x.clone()));
        for (i, t) in u.terms().iter().enumerate() {
            let info = &u.info[i];
            if t.dom().is_empty_type() {
                // initial (pure) and its decorated versions
                if let Some(c) = copa(t.cod()) {
                    match logic {
                        Logic::Eqn if info.pure => {
                            self.merge(i, c, Strength::Strong);
                        }
                        Logic::Exc => {
                            self.merge(i, c, Strength::Strong);
                        }
                        Logic::ExCore => {
                            let s = if info.pure { Strength::Strong } else { Strength::Weak };
                            self.merge(i, c, s);
                        }
                        _ => {}
                    }
                }
            }
            if logic == Logic::States && t.cod() == &ObjType::Unit {
                if let Some(p) = pa(t.dom()) {
                    let s = if info.pure { Strength::Strong } else { Strength::Weak };
                    self.merge(i, p, s);
                }
            }
            if info.starts_with_throw {
                if let Atom::Throw { param, .. } = &t.atoms()[0] {
                    if let Some(j) = find(Term::throw(param.clone(), t.cod().clone())) {
                        self.merge(i, j, Strength::Strong);
                    }
                }
            }
            if t.atoms().len() != 1 {
                continue;
            }
            match &t.atoms()[0] {
                Atom::TryCatch(a, b) => {
                    let target = if a.is_pure() {
                        Some((**a).clone())
                    } else {
                        match a.atoms().split_last() {
                            Some((Atom::Throw { .. }, v)) if v.iter().all(|x| x.decoration().is_pure()) => {
                                Some(a.prefix(v.len()).then(b).expect("handler fits"))
                            }
                            _ => None,
                        }
                    };
                    if let Some(j) = target.and_then(find) {
                        self.merge(i, j, Strength::Strong);
                    }
                }
                Atom::CatchCore(b) => {
                    if let Some(j) = find(Term::id(t.cod().clone())) {
                        self.merge(i, j, Strength::Weak);
                    }
                    let at_empty = Term::copa(t.cod().clone()).then(t).ok().and_then(find);
                    let handled = Term::untag(b.dom().clone()).then(b).ok().and_then(find);
                    if let (Some(x), Some(y)) = (at_empty, handled) {
                        self.merge(x, y, Strength::Strong);
                    }
                }
                Atom::TryCore(a, k) => {
                    if let Some(j) = a.then(k).ok().and_then(find) {
                        self.merge(i, j, Strength::Weak);
                    }
                }
                _ => {}
            }
        }
        let ax = match (logic, u.signature().param_opt(), u.signature().value_opt()) {
            (Logic::ExCore, Some(p), _) => Some((Term::tag(p.clone()).then(&Term::untag(p.clone())), p.clone())),
            (Logic::States, _, Some(v)) => Some((Term::update(v.clone()).then(&Term::lookup(v.clone())), v.clone())),
            _ => None,
        };
        if let Some((Ok(lhs), ty)) = ax {
            if let (Some(i), Some(j)) = (find(lhs), find(Term::id(ty))) {
                self.merge(i, j, Strength::Weak);
            }
        }
    }

    /// Runs every rule until nothing changes.
    pub fn saturate(&mut self) {
        loop {
            if self.maximal {
                return;
            }
            let mut changed = self.congruence(true);
            if self.has_weak() {
                changed |= self.strong_to_weak();
                changed |= self.congruence(false);
                changed |= self.eq1();
                changed |= self.eq2();
                changed |= self.eq3();
            }
            if self.u.logic() == Logic::Exc {
                changed |= self.recover();
                changed |= self.try_congruence();
            }
            if matches!(self.u.logic(), Logic::Exc | Logic::ExCore) && (self.clash() || self.all_pure_derived()) {
                self.maximal = true;
                return;
            }
            if !changed {
                return;
            }
        }
    }

    fn congruence(&mut self, strong: bool) -> bool {
        let u = Arc::clone(&self.u);
        let (pre_pure, post_pure) = if strong {
            (false, false)
        } else {
            (self.weak_pre_pure, self.weak_post_pure)
        };
        let uf = if strong { &mut self.strong } else { &mut self.weak };
        let mut changed = false;
        loop {
            let mut table: HashMap<(usize, u32, bool), usize> = HashMap::new();
            let mut pass = false;
            for i in 0..u.len() {
                let ri = uf.find_mut(i);
                for (side, exts, pure_only) in [(true, &u.post[i], post_pure), (false, &u.pre[i], pre_pure)] {
                    for &(a, j) in exts {
                        if pure_only && !u.atom_pure[a as usize] {
                            continue;
                        }
                        match table.entry((ri, a, side)) {
                            Entry::Occupied(e) => pass |= uf.union(*e.get(), j),
                            Entry::Vacant(e) => {
                                e.insert(j);
                            }
                        }
                    }
                }
            }
            if !pass {
                return changed;
            }
            changed = true;
        }
    }

    fn strong_to_weak(&mut self) -> bool {
        let mut changed = false;
        for i in 0..self.u.len() {
            let r = self.strong.find_mut(i);
            changed |= self.weak.union(i, r);
        }
        changed
    }

    /// Merges strongly the members of each group with equal key.
    fn merge_groups(&mut self, keyed: Vec<(usize, usize)>) -> bool {
        let mut first: HashMap<usize, usize> = HashMap::new();
        let mut changed = false;
        for (key, i) in keyed {
            match first.entry(key) {
                Entry::Occupied(e) => changed |= self.strong.union(*e.get(), i),
                Entry::Vacant(e) => {
                    e.insert(i);
                }
            }
        }
        changed
    }

    /// Weakly equal propagators are strongly equal.
    fn eq1(&mut self) -> bool {
        let keyed = (0..self.u.len())
            .filter(|&i| self.u.info[i].grade <= 1)
            .map(|i| (self.weak.find(i), i))
            .collect();
        self.merge_groups(keyed)
    }

    /// Weakly equal terms that agree strongly on the empty input (resp. on
    /// the final state) are strongly equal.
    fn eq2(&mut self) -> bool {
        let n = self.u.len();
        let logic = self.u.logic();
        let mut keyed = Vec::new();
        for i in 0..n {
            let info = &self.u.info[i];
            let probe = match logic {
                Logic::ExCore => info.pre_copa,
                _ => info.post_pa,
            };
            if let Some(p) = probe {
                // pair the weak class with the strong class of the probe
                let key = self.weak.find(i) * n + self.strong.find(p);
                keyed.push((key, i));
            }
        }
        self.merge_groups(keyed)
    }

    /// Terms out of `Empty` (resp. into `Unit`) are determined by what they
    /// do after `tag` (resp. before `lookup`).
    fn eq3(&mut self) -> bool {
        let logic = self.u.logic();
        let keyed = (0..self.u.len())
            .filter_map(|i| {
                let info = &self.u.info[i];
                let probe = match logic {
                    Logic::ExCore => info.pre_tag,
                    _ => info.post_lookup,
                }?;
                // fold the hom-set into the key: probes of different types never meet
                let t = self.u.term(i);
                let hom = if logic == Logic::ExCore { t.cod() } else { t.dom() };
                Some(((self.weak.find(probe), hom.clone()), i))
            })
            .collect::<Vec<_>>();
        let mut ids: HashMap<(usize, ObjType), usize> = HashMap::new();
        let keyed = keyed
            .into_iter()
            .map(|(k, i)| {
                let next = ids.len();
                (*ids.entry(k).or_insert(next), i)
            })
            .collect();
        self.merge_groups(keyed)
    }

    /// Pure arguments of strongly equal throws are strongly equal.
    fn recover(&mut self) -> bool {
        let u = Arc::clone(&self.u);
        let mut keyed = Vec::new();
        for i in (0..u.len()).filter(|&i| u.info[i].pure) {
            for &(a, j) in &u.post[i] {
                if matches!(u.atom(a), Atom::Throw { .. }) {
                    keyed.push((self.strong.find(j), i));
                }
            }
        }
        self.merge_groups(keyed)
    }

    /// `try` is compatible with strong equality of its body.
    fn try_congruence(&mut self) -> bool {
        let u = Arc::clone(&self.u);
        let n = u.len();
        let mut keyed = Vec::new();
        for (i, t) in u.terms().iter().enumerate() {
            if let [Atom::TryCatch(a, b)] = t.atoms() {
                if let (Some(ai), Some(bi)) = (u.index_of(a), u.index_of(b)) {
                    keyed.push((self.strong.find(ai) * n + bi, i));
                }
            }
        }
        self.merge_groups(keyed)
    }

    /// A thrown form strongly equal to a pure term on a non-empty domain.
    fn clash(&mut self) -> bool {
        let mut pure_class = HashMap::new();
        for i in 0..self.u.len() {
            if self.u.info[i].pure && !self.u.term(i).dom().is_empty_type() {
                pure_class.insert(self.strong.find(i), ());
            }
        }
        (0..self.u.len()).any(|i| {
            self.u.info[i].thrown
                && !self.u.term(i).dom().is_empty_type()
                && pure_class.contains_key(&self.strong.find(i))
        })
    }

    fn all_pure_derived(&self) -> bool {
        self.u.hom_sets().values().all(|members| {
            let mut pure = members.iter().filter(|&&i| self.u.info[i].pure);
            match pure.next() {
                None => true,
                Some(&first) => pure.all(|&i| self.strong.equiv(first, i)),
            }
        })
    }
}
