//! Monadic signatures: base types, the distinguished types `P`/`V`, and pure
//! generators.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::term::{Atom, GenOp, Term};
use crate::types::{Logic, ObjType};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    name: String,
    logic: Logic,
    types: Vec<Arc<str>>,
    param: Option<ObjType>,
    value: Option<ObjType>,
    gens: Vec<GenOp>,
}

impl Signature {
    pub fn new(name: impl Into<String>, logic: Logic) -> Self {
        Signature {
            name: name.into(),
            logic,
            types: Vec::new(),
            param: None,
            value: None,
            gens: Vec::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn logic(&self) -> Logic {
        self.logic
    }

    /// Same declarations, different logic family.
    pub fn with_logic(&self, logic: Logic) -> Signature {
        Signature { logic, ..self.clone() }
    }

    pub fn add_type(&mut self, name: &str) -> Result<ObjType> {
        if matches!(name, "Empty" | "Unit" | "P" | "V") {
            return Err(Error::Signature(format!("`{name}` is reserved")));
        }
        if self.types.iter().any(|t| &**t == name) {
            return Err(Error::Signature(format!("type `{name}` declared twice")));
        }
        self.types.push(Arc::from(name));
        Ok(ObjType::base(name))
    }

    pub fn set_param(&mut self, ty: ObjType) -> Result<()> {
        self.require_base(&ty)?;
        self.param = Some(ty);
        Ok(())
    }

    pub fn set_value(&mut self, ty: ObjType) -> Result<()> {
        self.require_base(&ty)?;
        self.value = Some(ty);
        Ok(())
    }

    fn require_base(&self, ty: &ObjType) -> Result<()> {
        match ty {
            ObjType::Base(name) if self.types.contains(name) => Ok(()),
            other => Err(Error::Signature(format!("`{other}` is not a declared type"))),
        }
    }

    /// Declares a pure generator. Generators never touch `Empty`.
    pub fn add_op(&mut self, name: &str, dom: ObjType, cod: ObjType) -> Result<()> {
        if self.gens.iter().any(|g| &*g.name == name) {
            return Err(Error::Signature(format!("operation `{name}` declared twice")));
        }
        if is_reserved_atom(name) {
            return Err(Error::Signature(format!("`{name}` is a reserved atom name")));
        }
        for ty in [&dom, &cod] {
            match ty {
                ObjType::Empty => return Err(Error::Signature(format!("operation `{name}` may not mention Empty"))),
                ObjType::Unit => {}
                base => self.require_base(base)?,
            }
        }
        self.gens.push(GenOp {
            name: Arc::from(name),
            dom,
            cod,
        });
        Ok(())
    }

    /// Declares a constant `c : Unit -> cod`.
    pub fn add_const(&mut self, name: &str, cod: ObjType) -> Result<()> {
        self.add_op(name, ObjType::Unit, cod)
    }

    pub fn param(&self) -> Result<ObjType> {
        self.param
            .clone()
            .ok_or_else(|| Error::Signature(format!("signature `{}` declares no parameter type P", self.name)))
    }

    pub fn value(&self) -> Result<ObjType> {
        self.value
            .clone()
            .ok_or_else(|| Error::Signature(format!("signature `{}` declares no value type V", self.name)))
    }

    pub fn param_opt(&self) -> Option<&ObjType> {
        self.param.as_ref()
    }

    pub fn value_opt(&self) -> Option<&ObjType> {
        self.value.as_ref()
    }

    pub fn gens(&self) -> &[GenOp] {
        &self.gens
    }

    pub fn gen(&self, name: &str) -> Option<&GenOp> {
        self.gens.iter().find(|g| &*g.name == name)
    }

    pub fn gen_term(&self, name: &str) -> Result<Term> {
        self.gen(name)
            .map(|g| Term::atom(Atom::Gen(g.clone())))
            .ok_or_else(|| Error::Unknown(name.to_string()))
    }

    pub fn base_types(&self) -> impl Iterator<Item = ObjType> + '_ {
        self.types.iter().map(|t| ObjType::Base(t.clone()))
    }

    /// Resolves a type name, including `Empty`, `Unit`, `P` and `V`.
    pub fn resolve_type(&self, name: &str) -> Result<ObjType> {
        match name {
            "Empty" => Ok(ObjType::Empty),
            "Unit" => Ok(ObjType::Unit),
            "P" => self.param(),
            "V" => self.value(),
            other if self.types.iter().any(|t| &**t == other) => Ok(ObjType::base(other)),
            other => Err(Error::Unknown(other.to_string())),
        }
    }

    /// Every object type terms of this signature may range over.
    pub fn all_types(&self) -> Vec<ObjType> {
        let mut out = Vec::new();
        if matches!(self.logic, Logic::Exc | Logic::ExCore) {
            out.push(ObjType::Empty);
        }
        if self.logic == Logic::States || self.gens.iter().any(|g| g.dom == ObjType::Unit) {
            out.push(ObjType::Unit);
        }
        out.extend(self.base_types());
        out
    }

    /// Constants `Unit -> ty` in declaration order.
    pub fn constants_of<'a>(&'a self, ty: &'a ObjType) -> impl Iterator<Item = &'a GenOp> + 'a {
        self.gens.iter().filter(move |g| g.dom == ObjType::Unit && &g.cod == ty)
    }

    /// Checks the declarations required by the logic family.
    pub fn validate(&self) -> Result<()> {
        match self.logic {
            Logic::Exc | Logic::ExCore => {
                self.param()?;
            }
            Logic::States => {
                self.value()?;
            }
            Logic::Eqn => {}
        }
        Ok(())
    }
}

pub(crate) fn is_reserved_atom(name: &str) -> bool {
    matches!(
        name,
        "id" | "copa" | "pa" | "throw" | "try" | "catch" | "tag" | "untag" | "lookup" | "update" | "TRY" | "CATCH"
    )
}
