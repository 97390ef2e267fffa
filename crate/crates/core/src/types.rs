//! Object types, decorations and logic families.

use std::fmt;
use std::sync::Arc;

/// An object type of a monadic signature.
///
/// The distinguished types `P` (exception parameters) and `V` (values of the
/// single state location) are not separate variants: a signature binds them
/// to one of its declared base types.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum ObjType {
    /// The empty type, initial object of every logic with exceptions.
    Empty,
    /// The unit type, terminal object.
    Unit,
    Base(Arc<str>),
}

impl ObjType {
    pub fn base(name: &str) -> Self {
        ObjType::Base(Arc::from(name))
    }

    pub fn is_empty_type(&self) -> bool {
        matches!(self, ObjType::Empty)
    }
}

impl fmt::Display for ObjType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObjType::Empty => f.write_str("Empty"),
            ObjType::Unit => f.write_str("Unit"),
            ObjType::Base(name) => f.write_str(name),
        }
    }
}

/// Which decorated logic a signature, term or model belongs to.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Logic {
    /// Plain monadic equational logic (only pure terms).
    Eqn,
    /// Programmers' language for exceptions: `throw` and `try/catch`.
    Exc,
    /// Core language for exceptions: `tag`, `untag`, plus `TRY`/`CATCH`.
    ExCore,
    /// Single-location global state: `lookup` and `update`.
    States,
}

impl Logic {
    pub fn name(self) -> &'static str {
        match self {
            Logic::Eqn => "eqn",
            Logic::Exc => "exc",
            Logic::ExCore => "excore",
            Logic::States => "states",
        }
    }

    pub fn parse(s: &str) -> Option<Logic> {
        match s {
            "eqn" => Some(Logic::Eqn),
            "exc" => Some(Logic::Exc),
            "excore" => Some(Logic::ExCore),
            "states" => Some(Logic::States),
            _ => None,
        }
    }

    /// Whether the logic has weak equations besides strong ones.
    pub fn has_weak(self) -> bool {
        matches!(self, Logic::ExCore | Logic::States)
    }

    /// Whether models of this logic carry an exception set.
    pub fn has_exceptions(self) -> bool {
        matches!(self, Logic::Exc | Logic::ExCore)
    }
}

impl fmt::Display for Logic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Effect grade of a term: 0 pure, 1 propagator/accessor, 2 catcher/modifier.
///
/// Grades are totally ordered and conversion only goes upward, so the grade
/// of a composite is the maximum of its parts.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Decoration(u8);

impl Decoration {
    pub const PURE: Decoration = Decoration(0);
    pub const MID: Decoration = Decoration(1);
    pub const TOP: Decoration = Decoration(2);

    pub fn new(grade: u8) -> Option<Self> {
        (grade <= 2).then_some(Decoration(grade))
    }

    pub fn grade(self) -> u8 {
        self.0
    }

    pub fn is_pure(self) -> bool {
        self.0 == 0
    }

    /// Name of the grade in the vocabulary of `logic`.
    pub fn render(self, logic: Logic) -> &'static str {
        match (self.0, logic) {
            (0, _) => "pure",
            (1, Logic::States) => "accessor",
            (1, _) => "propagator",
            (_, Logic::States) => "modifier",
            _ => "catcher",
        }
    }
}

impl fmt::Display for Decoration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grades_are_ordered() {
        assert!(Decoration::PURE < Decoration::MID);
        assert!(Decoration::MID < Decoration::TOP);
        assert_eq!(Decoration::new(3), None);
        assert_eq!(Decoration::PURE.max(Decoration::TOP), Decoration::TOP);
    }

    #[test]
    fn grade_names_follow_family() {
        assert_eq!(Decoration::MID.render(Logic::ExCore), "propagator");
        assert_eq!(Decoration::MID.render(Logic::States), "accessor");
        assert_eq!(Decoration::TOP.render(Logic::ExCore), "catcher");
        assert_eq!(Decoration::TOP.render(Logic::States), "modifier");
    }
}
