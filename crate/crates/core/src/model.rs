//! Finite-set intended models and the denotational oracle.
//!
//! Exception models realize `E` as a tagged copy of the carrier of `P`, so
//! `tag` and `untag` are the identity on indices. State models realize `S` as
//! the carrier of `V` with `lookup` the identity.
//!
//! Every term denotes a dense table. For the exception families the table is
//! indexed by `X + E` (values first, then exceptions) and yields `Y + E`; a
//! propagator simply maps each exception to itself. For states the table is
//! indexed by `S × X` and yields `S × Y`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::signature::Signature;
use crate::term::{Atom, Equation, Strength, Term};
use crate::types::{Logic, ObjType};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteModel {
    logic: Logic,
    sizes: BTreeMap<Arc<str>, usize>,
    tables: BTreeMap<Arc<str>, Vec<usize>>,
    param: Option<ObjType>,
    value: Option<ObjType>,
}

impl FiniteModel {
    /// Builds a model for `sig` from carrier sizes and generator tables.
    pub fn new(
        sig: &Signature,
        sizes: BTreeMap<Arc<str>, usize>,
        tables: BTreeMap<Arc<str>, Vec<usize>>,
    ) -> Result<FiniteModel> {
        let model = FiniteModel {
            logic: sig.logic(),
            sizes,
            tables,
            param: sig.param_opt().cloned(),
            value: sig.value_opt().cloned(),
        };
        for ty in sig.base_types() {
            if let ObjType::Base(name) = &ty {
                if !model.sizes.contains_key(name) {
                    return Err(Error::Model(format!("no carrier for type {ty}")));
                }
            }
        }
        for g in sig.gens() {
            if let Some(table) = model.tables.get(&g.name) {
                let (d, c) = (model.size(&g.dom), model.size(&g.cod));
                if table.len() != d {
                    return Err(Error::Model(format!(
                        "table of `{}` has {} entries, expected {d}",
                        g.name,
                        table.len()
                    )));
                }
                if let Some(bad) = table.iter().find(|&&y| y >= c) {
                    return Err(Error::Model(format!(
                        "table of `{}` maps to {bad}, outside a carrier of size {c}",
                        g.name
                    )));
                }
            }
        }
        if model.logic.has_exceptions() {
            if let Some(p) = &model.param {
                if model.size(p) == 0 {
                    return Err(Error::Model("the parameter type P must be non-empty".into()));
                }
            }
        }
        if model.logic == Logic::States {
            if let Some(v) = &model.value {
                if model.size(v) == 0 {
                    return Err(Error::Model("the value type V must be non-empty".into()));
                }
            }
        }
        Ok(model)
    }

    pub fn logic(&self) -> Logic {
        self.logic
    }

    /// The same carriers and tables read in another logic of the same kind.
    pub fn with_logic(&self, logic: Logic) -> FiniteModel {
        FiniteModel { logic, ..self.clone() }
    }

    pub fn size(&self, ty: &ObjType) -> usize {
        match ty {
            ObjType::Empty => 0,
            ObjType::Unit => 1,
            ObjType::Base(name) => self.sizes.get(name).copied().unwrap_or(0),
        }
    }

    /// `|E|`: the exception set is a copy of the carrier of `P`.
    pub fn exceptions(&self) -> usize {
        match (&self.param, self.logic.has_exceptions()) {
            (Some(p), true) => self.size(p),
            _ => 0,
        }
    }

    /// `|S|`: the state set is the carrier of `V`.
    pub fn states(&self) -> usize {
        match (&self.value, self.logic) {
            (Some(v), Logic::States) => self.size(v),
            _ => 1,
        }
    }

    pub fn table(&self, name: &str) -> Option<&[usize]> {
        self.tables.get(name).map(Vec::as_slice)
    }

    pub fn sizes(&self) -> &BTreeMap<Arc<str>, usize> {
        &self.sizes
    }

    fn gen_table(&self, name: &Arc<str>) -> Result<&[usize]> {
        self.tables
            .get(name)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::MissingInterpretation(name.to_string()))
    }

    fn check_family(&self, term: &Term) -> Result<()> {
        let ok = match self.logic {
            Logic::States => term.legal_in(Logic::States),
            _ => term.legal_in(Logic::Exc) || term.legal_in(Logic::ExCore),
        };
        if ok {
            Ok(())
        } else {
            let found = [Logic::Exc, Logic::ExCore, Logic::States]
                .into_iter()
                .find(|l| term.legal_in(*l))
                .unwrap_or(Logic::Eqn);
            Err(Error::FamilyMismatch {
                expected: self.logic,
                found,
            })
        }
    }

    fn run_exc(&self, term: &Term, mut x: Out) -> Result<Out> {
        for atom in term.atoms() {
            x = self.step_exc(atom, x)?;
        }
        Ok(x)
    }

    fn step_exc(&self, atom: &Atom, x: Out) -> Result<Out> {
        Ok(match (atom, x) {
            (Atom::Gen(g), Out::Val(i)) => Out::Val(self.gen_table(&g.name)?[i]),
            (Atom::Pa(_), Out::Val(_)) => Out::Val(0),
            (Atom::Throw { .. } | Atom::Tag(_), Out::Val(p)) => Out::Exc(p),
            (Atom::Untag(_), Out::Exc(e)) => Out::Val(e),
            (Atom::TryCatch(a, b), Out::Val(i)) => match self.run_exc(a, Out::Val(i))? {
                Out::Exc(e) => self.run_exc(b, Out::Val(e))?,
                ok => ok,
            },
            (Atom::TryCore(a, k), Out::Val(i)) => {
                let y = self.run_exc(a, Out::Val(i))?;
                self.run_exc(k, y)?
            }
            (Atom::CatchCore(b), Out::Exc(e)) => self.run_exc(b, Out::Val(e))?,
            (Atom::Lookup(_) | Atom::Update(_), _) => {
                return Err(Error::FamilyMismatch {
                    expected: self.logic,
                    found: Logic::States,
                })
            }
            // Remaining cases: every atom but untag and CATCH propagates an
            // exception untouched; `Val` never reaches a domain of `Empty`.
            (_, other) => other,
        })
    }

    fn run_state(&self, term: &Term, mut sx: (usize, usize)) -> Result<(usize, usize)> {
        for atom in term.atoms() {
            let (s, x) = sx;
            sx = match atom {
                Atom::Gen(g) => (s, self.gen_table(&g.name)?[x]),
                Atom::Pa(_) => (s, 0),
                Atom::Lookup(_) => (s, s),
                Atom::Update(_) => (x, 0),
                Atom::Copa(_) => (s, x),
                _ => {
                    return Err(Error::FamilyMismatch {
                        expected: Logic::States,
                        found: Logic::ExCore,
                    })
                }
            };
        }
        Ok(sx)
    }

    /// Compositional denotation of `term`.
    pub fn eval(&self, term: &Term) -> Result<Denotation> {
        self.check_family(term)?;
        let dom = self.size(term.dom());
        if self.logic == Logic::States {
            let states = self.states();
            let mut table = Vec::with_capacity(states * dom);
            for s in 0..states {
                for x in 0..dom {
                    table.push(self.run_state(term, (s, x))?);
                }
            }
            Ok(Denotation::Stateful { states, dom, table })
        } else {
            let exc = self.exceptions();
            let mut table = Vec::with_capacity(dom + exc);
            for x in 0..dom {
                table.push(self.run_exc(term, Out::Val(x))?);
            }
            for e in 0..exc {
                table.push(self.run_exc(term, Out::Exc(e))?);
            }
            Ok(Denotation::Exceptional { dom, exc, table })
        }
    }

    /// Whether `eq` holds in this model: strong equations compare whole
    /// tables, weak ones only the non-exceptional inputs (resp. the returned
    /// values).
    pub fn sem_holds(&self, eq: &Equation) -> Result<bool> {
        let l = self.eval(&eq.lhs)?;
        let r = self.eval(&eq.rhs)?;
        Ok(match eq.strength {
            Strength::Strong => l == r,
            Strength::Weak => l.agrees_weakly(&r),
        })
    }
}

impl fmt::Display for FiniteModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (ty, n) in &self.sizes {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "|{ty}|={n}")?;
        }
        for (name, table) in &self.tables {
            let cells: Vec<String> = table.iter().map(usize::to_string).collect();
            write!(f, " {name}=[{}]", cells.join(","))?;
        }
        Ok(())
    }
}

/// Output of an exceptional computation.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Out {
    Val(usize),
    Exc(usize),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Denotation {
    /// Table over `X + E`; entries `0..dom` are the values of `X`.
    Exceptional { dom: usize, exc: usize, table: Vec<Out> },
    /// Table over `S × X`, row-major in the state.
    Stateful {
        states: usize,
        dom: usize,
        table: Vec<(usize, usize)>,
    },
}

impl Denotation {
    /// Equality restricted to what a weak equation observes.
    pub fn agrees_weakly(&self, other: &Denotation) -> bool {
        match (self, other) {
            (Denotation::Exceptional { dom, table, .. }, Denotation::Exceptional { dom: d2, table: t2, .. }) => {
                dom == d2 && table[..*dom] == t2[..*d2]
            }
            (Denotation::Stateful { table, .. }, Denotation::Stateful { table: t2, .. }) => {
                table.len() == t2.len() && table.iter().zip(t2).all(|(a, b)| a.1 == b.1)
            }
            _ => false,
        }
    }

    /// True when no value input produces an exception (resp. the state is
    /// neither read nor written).
    pub fn is_pure(&self) -> bool {
        match self {
            Denotation::Exceptional { dom, exc, table } => {
                table[..*dom].iter().all(|o| matches!(o, Out::Val(_)))
                    && (0..*exc).all(|e| table[dom + e] == Out::Exc(e))
            }
            Denotation::Stateful { states, dom, table } => (0..*states).all(|s| {
                (0..*dom).all(|x| {
                    let (s2, y) = table[s * dom + x];
                    s2 == s && y == table[x].1
                })
            }),
        }
    }

    /// Propagator view of an exceptional denotation: the value rows only.
    pub fn value_rows(&self) -> Vec<Out> {
        match self {
            Denotation::Exceptional { dom, table, .. } => table[..*dom].to_vec(),
            Denotation::Stateful { table, .. } => table.iter().map(|&(_, y)| Out::Val(y)).collect(),
        }
    }

    /// `x -> y` lines sorted by input, `!e` marking exceptions and `[s]`
    /// marking states.
    pub fn render(&self) -> String {
        let mut out = String::new();
        match self {
            Denotation::Exceptional { dom, table, .. } => {
                for (i, o) in table.iter().enumerate() {
                    let input = if i < *dom {
                        i.to_string()
                    } else {
                        format!("!{}", i - dom)
                    };
                    let output = match o {
                        Out::Val(y) => y.to_string(),
                        Out::Exc(e) => format!("!{e}"),
                    };
                    out.push_str(&format!("{input} -> {output}\n"));
                }
            }
            Denotation::Stateful { dom, table, .. } => {
                for (i, (s2, y)) in table.iter().enumerate() {
                    let (s, x) = (i / dom.max(&1), i % dom.max(&1));
                    out.push_str(&format!("[{s}] {x} -> [{s2}] {y}\n"));
                }
            }
        }
        out
    }
}

/// Carrier-size limits for model enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelBounds {
    pub min: usize,
    pub max: usize,
    pub per_type: BTreeMap<String, (usize, usize)>,
}

impl Default for ModelBounds {
    fn default() -> Self {
        ModelBounds {
            min: 1,
            max: 4,
            per_type: BTreeMap::new(),
        }
    }
}

impl ModelBounds {
    pub fn up_to(max: usize) -> Self {
        ModelBounds {
            max,
            ..Default::default()
        }
    }

    pub fn with_type(mut self, name: &str, min: usize, max: usize) -> Self {
        self.per_type.insert(name.to_string(), (min, max));
        self
    }

    fn range(&self, name: &str) -> (usize, usize) {
        self.per_type.get(name).copied().unwrap_or((self.min, self.max))
    }
}

/// Every interpretation of `sig` within `bounds`, without deduplication.
pub fn enumerate_models(sig: &Signature, bounds: &ModelBounds) -> Result<ModelIter> {
    let mut ranges = Vec::new();
    for ty in sig.base_types() {
        let ObjType::Base(name) = &ty else { unreachable!() };
        let (lo, hi) = bounds.range(name);
        if lo > hi {
            return Err(Error::Bounds(format!("empty size range for {ty}")));
        }
        let must_inhabit = (sig.logic().has_exceptions() && sig.param_opt() == Some(&ty))
            || (sig.logic() == Logic::States && sig.value_opt() == Some(&ty));
        if must_inhabit && hi == 0 {
            return Err(Error::Bounds(format!("{ty} must be non-empty but its bound is zero")));
        }
        let lo = if must_inhabit { lo.max(1) } else { lo };
        ranges.push((name.clone(), lo, hi));
    }
    let sizes: Vec<usize> = ranges.iter().map(|r| r.1).collect();
    let mut iter = ModelIter {
        sig: sig.clone(),
        ranges,
        sizes,
        digits: Vec::new(),
        radices: Vec::new(),
        started: false,
        done: false,
    };
    iter.reset_tables();
    Ok(iter)
}

/// Restartable odometer over carrier sizes and generator tables.
#[derive(Clone, Debug)]
pub struct ModelIter {
    sig: Signature,
    ranges: Vec<(Arc<str>, usize, usize)>,
    sizes: Vec<usize>,
    digits: Vec<usize>,
    radices: Vec<usize>,
    started: bool,
    done: bool,
}

impl ModelIter {
    fn size_of(&self, ty: &ObjType) -> usize {
        match ty {
            ObjType::Empty => 0,
            ObjType::Unit => 1,
            ObjType::Base(name) => self
                .ranges
                .iter()
                .position(|r| &r.0 == name)
                .map(|i| self.sizes[i])
                .unwrap_or(0),
        }
    }

    fn reset_tables(&mut self) {
        self.radices = self
            .sig
            .gens()
            .iter()
            .flat_map(|g| std::iter::repeat_n(self.size_of(&g.cod), self.size_of(&g.dom)))
            .collect();
        self.digits = vec![0; self.radices.len()];
    }

    fn tables_feasible(&self) -> bool {
        self.radices.iter().all(|&r| r > 0)
    }

    fn advance_sizes(&mut self) -> bool {
        for i in (0..self.sizes.len()).rev() {
            if self.sizes[i] < self.ranges[i].2 {
                self.sizes[i] += 1;
                for j in i + 1..self.sizes.len() {
                    self.sizes[j] = self.ranges[j].1;
                }
                self.reset_tables();
                return true;
            }
        }
        false
    }

    fn advance_tables(&mut self) -> bool {
        for i in (0..self.digits.len()).rev() {
            if self.digits[i] + 1 < self.radices[i] {
                self.digits[i] += 1;
                for d in &mut self.digits[i + 1..] {
                    *d = 0;
                }
                return true;
            }
        }
        false
    }

    fn current(&self) -> FiniteModel {
        let sizes = self
            .ranges
            .iter()
            .zip(&self.sizes)
            .map(|(r, &n)| (r.0.clone(), n))
            .collect();
        let mut tables = BTreeMap::new();
        let mut offset = 0;
        for g in self.sig.gens() {
            let n = self.size_of(&g.dom);
            tables.insert(g.name.clone(), self.digits[offset..offset + n].to_vec());
            offset += n;
        }
        FiniteModel {
            logic: self.sig.logic(),
            sizes,
            tables,
            param: self.sig.param_opt().cloned(),
            value: self.sig.value_opt().cloned(),
        }
    }
}

impl Iterator for ModelIter {
    type Item = FiniteModel;

    fn next(&mut self) -> Option<FiniteModel> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
        } else if !self.advance_tables() && !self.advance_sizes() {
            self.done = true;
            return None;
        }
        while !self.tables_feasible() {
            if !self.advance_sizes() {
                self.done = true;
                return None;
            }
        }
        Some(self.current())
    }
}
