//! The bounded universe: every term up to a size bound, indexed, with the
//! single-atom extension tables that congruence closure runs on.

use std::collections::{BTreeMap, HashMap};

use crate::enumerate::Enumerator;
use crate::error::{Error, Result};
use crate::signature::Signature;
use crate::term::{Atom, Equation, Term};
use crate::types::{Logic, ObjType};

pub const DEFAULT_CAP: usize = 200_000;

#[derive(Debug)]
pub struct Universe {
    logic: Logic,
    depth: usize,
    sig: Signature,
    terms: Vec<Term>,
    index: HashMap<Term, usize>,
    atoms: Vec<Atom>,
    /// `post[i]` lists `(atom, j)` with `terms[j] = atom . terms[i]`.
    pub(crate) post: Vec<Vec<(u32, usize)>>,
    /// `pre[i]` lists `(atom, j)` with `terms[j] = terms[i] . atom`.
    pub(crate) pre: Vec<Vec<(u32, usize)>>,
    pub(crate) atom_pure: Vec<bool>,
    pub(crate) info: Vec<TermInfo>,
    by_hom: BTreeMap<(ObjType, ObjType), Vec<usize>>,
}

/// Facts about one universe term that the rules look up.
#[derive(Clone, Debug, Default)]
pub(crate) struct TermInfo {
    pub grade: u8,
    pub pure: bool,
    /// Of the form `throw . v` (resp. `copa . tag . v`) with `v` pure.
    pub thrown: bool,
    /// The first atom is a `throw`.
    pub starts_with_throw: bool,
    /// `terms[i] . copa[dom]`.
    pub pre_copa: Option<usize>,
    /// `terms[i] . tag`, for terms out of `Empty`.
    pub pre_tag: Option<usize>,
    /// `pa[cod] . terms[i]`.
    pub post_pa: Option<usize>,
    /// `lookup . terms[i]`, for terms into `Unit`.
    pub post_lookup: Option<usize>,
}

impl Universe {
    /// All terms of `logic` up to size `depth`. `control` adds `try/catch`
    /// or `TRY`/`CATCH` atoms.
    pub fn new(sig: &Signature, logic: Logic, depth: usize, control: bool, cap: usize) -> Result<Universe> {
        let terms = Enumerator::new(sig, logic).with_control(control).terms(depth);
        if terms.len() > cap {
            return Err(Error::UniverseTooLarge { cap });
        }
        Ok(Self::from_terms(sig, logic, depth, terms))
    }

    /// A universe over a given, prefix- and suffix-closed, list of terms.
    pub fn from_terms(sig: &Signature, logic: Logic, depth: usize, terms: Vec<Term>) -> Universe {
        let index: HashMap<Term, usize> = terms.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        let mut atom_ids: HashMap<Atom, u32> = HashMap::new();
        let mut atoms = Vec::new();
        let mut intern = |a: &Atom| -> u32 {
            *atom_ids.entry(a.clone()).or_insert_with(|| {
                atoms.push(a.clone());
                (atoms.len() - 1) as u32
            })
        };
        let n = terms.len();
        let mut post = vec![Vec::new(); n];
        let mut pre = vec![Vec::new(); n];
        for (j, t) in terms.iter().enumerate() {
            let k = t.atoms().len();
            if k == 0 {
                continue;
            }
            if let Some(&i) = index.get(&t.prefix(k - 1)) {
                post[i].push((intern(&t.atoms()[k - 1]), j));
            }
            if let Some(&i) = index.get(&t.suffix(1)) {
                pre[i].push((intern(&t.atoms()[0]), j));
            }
        }
        let atom_pure = atoms.iter().map(|a| a.decoration().is_pure()).collect();
        let mut by_hom: BTreeMap<(ObjType, ObjType), Vec<usize>> = BTreeMap::new();
        for (i, t) in terms.iter().enumerate() {
            by_hom.entry((t.dom().clone(), t.cod().clone())).or_default().push(i);
        }
        let find = |t: Result<Term>| t.ok().and_then(|t| index.get(&t).copied());
        let info = terms
            .iter()
            .map(|t| {
                let atoms = t.atoms();
                let thrown = match atoms.split_last() {
                    Some((Atom::Throw { .. }, v)) => v.iter().all(|a| a.decoration().is_pure()),
                    Some((Atom::Copa(_), rest)) => matches!(
                        rest.split_last(),
                        Some((Atom::Tag(_), v)) if v.iter().all(|a| a.decoration().is_pure())
                    ),
                    Some((Atom::Tag(_), v)) => v.iter().all(|a| a.decoration().is_pure()),
                    _ => false,
                };
                TermInfo {
                    grade: t.decoration().grade(),
                    pure: t.is_pure(),
                    thrown,
                    starts_with_throw: matches!(atoms.first(), Some(Atom::Throw { .. })),
                    pre_copa: if t.dom().is_empty_type() {
                        None
                    } else {
                        find(Term::copa(t.dom().clone()).then(t))
                    },
                    pre_tag: match (t.dom(), sig.param_opt()) {
                        (ObjType::Empty, Some(p)) if logic == Logic::ExCore => find(Term::tag(p.clone()).then(t)),
                        _ => None,
                    },
                    post_pa: if t.cod() == &ObjType::Unit {
                        None
                    } else {
                        find(t.then(&Term::pa(t.cod().clone())))
                    },
                    post_lookup: match (t.cod(), sig.value_opt()) {
                        (ObjType::Unit, Some(v)) if logic == Logic::States => find(t.then(&Term::lookup(v.clone()))),
                        _ => None,
                    },
                }
            })
            .collect();
        Universe {
            logic,
            depth,
            sig: sig.with_logic(logic),
            terms,
            index,
            atoms,
            post,
            pre,
            atom_pure,
            info,
            by_hom,
        }
    }

    pub fn logic(&self) -> Logic {
        self.logic
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn term(&self, i: usize) -> &Term {
        &self.terms[i]
    }

    pub fn atom(&self, id: u32) -> &Atom {
        &self.atoms[id as usize]
    }

    pub fn index_of(&self, t: &Term) -> Option<usize> {
        self.index.get(t).copied()
    }

    pub fn require(&self, t: &Term) -> Result<usize> {
        self.index_of(t).ok_or_else(|| Error::OutsideUniverse(t.to_string()))
    }

    pub fn contains_equation(&self, e: &Equation) -> bool {
        self.index_of(&e.lhs).is_some() && self.index_of(&e.rhs).is_some()
    }

    /// Term indices grouped by `(dom, cod)`, in enumeration order.
    pub fn hom_sets(&self) -> &BTreeMap<(ObjType, ObjType), Vec<usize>> {
        &self.by_hom
    }

    /// The pure terms, as a universe of the pure sublogic.
    pub fn pure_part(&self) -> Universe {
        let terms = self.terms.iter().filter(|t| t.is_pure()).cloned().collect();
        Universe::from_terms(&self.sig, Logic::Eqn, self.depth, terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Program;

    #[test]
    fn extension_tables() {
        let prog = Program::parse("signature t { logic excore; type N; param P = N; op s : N -> N; }").unwrap();
        let u = Universe::new(&prog.signature, Logic::ExCore, 3, false, DEFAULT_CAP).unwrap();
        assert_eq!(u.len(), 2 + 4 + 8 + 16);
        let s = u.require(&prog.term("s").unwrap()).unwrap();
        let ss = u.require(&prog.term("s . s").unwrap()).unwrap();
        assert!(u.post[s].iter().any(|&(_, j)| j == ss));
        assert!(u.pre[s].iter().any(|&(_, j)| j == ss));
        let untag = u.require(&prog.term("untag").unwrap()).unwrap();
        let ut = u.require(&prog.term("untag . tag").unwrap()).unwrap();
        assert_eq!(u.info[untag].pre_tag, Some(ut));
        let ct = u.require(&prog.term("copa[N] . tag . s").unwrap()).unwrap();
        assert!(u.info[ct].thrown);
        assert!(matches!(
            Universe::new(&prog.signature, Logic::ExCore, 3, false, 10),
            Err(Error::UniverseTooLarge { cap: 10 })
        ));
    }
}
