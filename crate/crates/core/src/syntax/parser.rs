use std::collections::BTreeMap;
use std::sync::Arc;

use super::lexer::{lex, Tok, Token};
use super::{Check, Program};
use crate::error::{Error, Result};
use crate::model::FiniteModel;
use crate::signature::Signature;
use crate::term::{compose, Equation, Strength, Term};
use crate::types::{Logic, ObjType};

pub(super) struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    sig: Option<&'a Signature>,
    named: Option<&'a BTreeMap<String, Term>>,
}

enum Expr {
    Int(i64),
    Name(String),
    Var,
    Bin(&'static str, Box<Expr>, Box<Expr>),
}

enum Body {
    Expr(Expr),
    Table(Vec<(String, String, usize, usize)>),
}

struct ModelBlock {
    carriers: Vec<(String, Vec<String>, usize, usize)>,
    defs: Vec<(String, Body, usize, usize)>,
}

impl<'a> Parser<'a> {
    pub(super) fn new(src: &str) -> Result<Self> {
        Ok(Parser {
            toks: lex(src)?,
            pos: 0,
            sig: None,
            named: None,
        })
    }

    pub(super) fn with_context(
        src: &str,
        sig: &'a Signature,
        named: Option<&'a BTreeMap<String, Term>>,
    ) -> Result<Self> {
        let mut p = Parser::new(src)?;
        p.sig = Some(sig);
        p.named = named;
        Ok(p)
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn here(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.col)
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        let (line, col) = self.here();
        Err(Error::Syntax {
            line,
            col,
            msg: msg.into(),
        })
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(x) if *x == s)
    }

    fn is_kw(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Ident(x) if x == s)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &str) -> Result<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            self.error(format!("expected `{s}`, found {}", self.peek()))
        }
    }

    fn expect_kw(&mut self, s: &str) -> Result<()> {
        if self.is_kw(s) {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected `{s}`, found {}", self.peek()))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            other => self.error(format!("expected a name, found {other}")),
        }
    }

    fn element(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) | Tok::Num(s) => {
                self.bump();
                Ok(s)
            }
            other => self.error(format!("expected an element, found {other}")),
        }
    }

    pub(super) fn at_end(&self) -> bool {
        *self.peek() == Tok::Eof
    }

    pub(super) fn expect_end(&self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            self.error(format!("unexpected {}", self.peek()))
        }
    }

    fn sig(&self) -> &'a Signature {
        self.sig.expect("signature in scope")
    }

    fn ty(&mut self) -> Result<ObjType> {
        let (line, col) = self.here();
        let name = self.ident()?;
        self.sig().resolve_type(&name).map_err(|e| Error::Syntax {
            line,
            col,
            msg: e.to_string(),
        })
    }

    fn bracket_ty(&mut self) -> Result<ObjType> {
        self.expect_sym("[")?;
        let ty = self.ty()?;
        self.expect_sym("]")?;
        Ok(ty)
    }

    fn legal(&self, t: Term) -> Result<Term> {
        let logic = self.sig().logic();
        match t.atoms().iter().find(|a| !a.legal_in(logic)) {
            Some(a) => Err(Error::IllegalAtom {
                atom: a.to_string(),
                logic,
            }),
            None => Ok(t),
        }
    }

    /// `unit ('.' unit)*`, written outermost first.
    pub(super) fn expr(&mut self) -> Result<Term> {
        let mut parts = vec![self.unit()?];
        while self.eat_sym(".") {
            parts.push(self.unit()?);
        }
        let refs: Vec<&Term> = parts.iter().collect();
        compose(&refs)
    }

    fn unit(&mut self) -> Result<Term> {
        if self.eat_sym("(") {
            let t = self.expr()?;
            self.expect_sym(")")?;
            return Ok(t);
        }
        let (line, col) = self.here();
        let name = self.ident()?;
        let sig = self.sig();
        let t = match name.as_str() {
            "id" => Term::id(self.bracket_ty()?),
            "copa" => Term::copa(self.bracket_ty()?),
            "pa" => Term::pa(self.bracket_ty()?),
            "throw" => {
                let cod = self.bracket_ty()?;
                Term::throw(sig.param()?, cod)
            }
            "tag" => Term::tag(sig.param()?),
            "untag" => Term::untag(sig.param()?),
            "lookup" => Term::lookup(sig.value()?),
            "update" => Term::update(sig.value()?),
            "try" => {
                self.expect_sym("(")?;
                let a = self.expr()?;
                self.expect_sym(")")?;
                self.expect_kw("catch")?;
                self.expect_sym("(")?;
                let b = self.expr()?;
                self.expect_sym(")")?;
                Term::try_catch(a, b, &sig.param()?)?
            }
            "TRY" => {
                self.expect_sym("(")?;
                let a = self.expr()?;
                self.expect_sym(",")?;
                let k = self.expr()?;
                self.expect_sym(")")?;
                Term::try_core(a, k)?
            }
            "CATCH" => {
                self.expect_sym("(")?;
                let b = self.expr()?;
                self.expect_sym(")")?;
                Term::catch_core(b, &sig.param()?)?
            }
            other => {
                if let Some(t) = self.named.and_then(|m| m.get(other)) {
                    t.clone()
                } else if let Some(g) = sig.gen(other) {
                    Term::atom(crate::term::Atom::Gen(g.clone()))
                } else {
                    return Err(Error::Syntax {
                        line,
                        col,
                        msg: format!("unknown name `{other}`"),
                    });
                }
            }
        };
        self.legal(t)
    }

    pub(super) fn equation(&mut self) -> Result<Equation> {
        let lhs = self.expr()?;
        let strength = if self.eat_sym("==") {
            Strength::Strong
        } else if self.eat_sym("~~") {
            Strength::Weak
        } else {
            return self.error(format!("expected `==` or `~~`, found {}", self.peek()));
        };
        let rhs = self.expr()?;
        let logic = self.sig().logic();
        if strength == Strength::Weak && !logic.has_weak() {
            return Err(Error::WeakEquation(logic));
        }
        Equation::new(lhs, rhs, strength)
    }

    pub(super) fn program(mut self) -> Result<Program> {
        let (signature, block) = self.signature()?;
        let model = match block {
            Some(b) => Some(build_model(&signature, b)?),
            None => None,
        };
        let mut named = BTreeMap::new();
        let mut terms = Vec::new();
        let mut checks = Vec::new();
        while !self.at_end() {
            if self.is_kw("term") {
                self.bump();
                let (line, col) = self.here();
                let name = self.ident()?;
                if named.contains_key(&name) || signature.gen(&name).is_some() {
                    return Err(Error::Syntax {
                        line,
                        col,
                        msg: format!("`{name}` is already defined"),
                    });
                }
                let mut sub = self.sub(&signature, &named);
                sub.expect_sym(":")?;
                let dom = sub.ty()?;
                sub.expect_sym("->")?;
                let cod = sub.ty()?;
                sub.expect_sym("=")?;
                let t = sub.expr()?;
                sub.expect_sym(";")?;
                let pos = sub.pos;
                self.toks = sub.toks;
                if t.dom() != &dom || t.cod() != &cod {
                    return Err(Error::IllTyped(format!(
                        "term `{name}` is declared {dom} -> {cod} but `{t}` has type {} -> {}",
                        t.dom(),
                        t.cod()
                    )));
                }
                self.pos = pos;
                named.insert(name.clone(), t.clone());
                terms.push((name, t));
            } else if self.is_kw("check") {
                self.bump();
                let line = self.here().0;
                let name = if matches!(self.peek(), Tok::Ident(_)) && self.peek_at(1) == &Tok::Sym(":") {
                    let n = self.ident()?;
                    self.bump();
                    Some(n)
                } else {
                    None
                };
                let mut sub = self.sub(&signature, &named);
                let equation = sub.equation()?;
                sub.expect_sym(";")?;
                self.pos = sub.pos;
                self.toks = sub.toks;
                checks.push(Check { name, equation, line });
            } else {
                return self.error(format!("expected `term` or `check`, found {}", self.peek()));
            }
        }
        Ok(Program {
            signature,
            model,
            terms,
            checks,
        })
    }

    fn sub<'b>(&mut self, sig: &'b Signature, named: &'b BTreeMap<String, Term>) -> Parser<'b> {
        Parser {
            toks: std::mem::take(&mut self.toks),
            pos: self.pos,
            sig: Some(sig),
            named: Some(named),
        }
    }

    fn signature(&mut self) -> Result<(Signature, Option<ModelBlock>)> {
        self.expect_kw("signature")?;
        let name = self.ident()?;
        self.expect_sym("{")?;
        let mut sig = Signature::new(name, Logic::ExCore);
        let mut block = None;
        while !self.eat_sym("}") {
            let (line, col) = self.here();
            let wrap = |e: Error| match e {
                e @ Error::Syntax { .. } => e,
                other => Error::Syntax {
                    line,
                    col,
                    msg: other.to_string(),
                },
            };
            let kw = self.ident()?;
            match kw.as_str() {
                "logic" => {
                    let l = self.ident()?;
                    let logic = Logic::parse(&l).ok_or_else(|| Error::Syntax {
                        line,
                        col,
                        msg: format!("unknown logic `{l}`"),
                    })?;
                    sig = sig.with_logic(logic);
                }
                "type" => {
                    let t = self.ident()?;
                    sig.add_type(&t).map_err(wrap)?;
                }
                "param" | "value" => {
                    let alias = self.ident()?;
                    let expected = if kw == "param" { "P" } else { "V" };
                    if alias != expected {
                        return Err(wrap(Error::Signature(format!(
                            "`{kw}` binds `{expected}`, not `{alias}`"
                        ))));
                    }
                    self.expect_sym("=")?;
                    let t = self.ident()?;
                    let ty = ObjType::base(&t);
                    if kw == "param" {
                        sig.set_param(ty).map_err(wrap)?;
                    } else {
                        sig.set_value(ty).map_err(wrap)?;
                    }
                }
                "op" => {
                    let f = self.ident()?;
                    self.expect_sym(":")?;
                    let dom = self.sig_type(&sig)?;
                    self.expect_sym("->")?;
                    let cod = self.sig_type(&sig)?;
                    if let Tok::Ident(d) = self.peek().clone() {
                        if d != "pure" {
                            return self.error(format!("only pure generators are supported, found decoration `{d}`"));
                        }
                        self.bump();
                    }
                    sig.add_op(&f, dom, cod).map_err(wrap)?;
                }
                "const" => {
                    let c = self.ident()?;
                    self.expect_sym(":")?;
                    let cod = self.sig_type(&sig)?;
                    sig.add_const(&c, cod).map_err(wrap)?;
                }
                "model" => {
                    if block.is_some() {
                        return self.error("a signature has at most one model block");
                    }
                    block = Some(self.model_block()?);
                    continue;
                }
                other => {
                    return Err(Error::Syntax {
                        line,
                        col,
                        msg: format!("unexpected `{other}` in signature"),
                    })
                }
            }
            self.expect_sym(";")?;
        }
        sig.validate()?;
        Ok((sig, block))
    }

    fn sig_type(&mut self, sig: &Signature) -> Result<ObjType> {
        let (line, col) = self.here();
        let name = self.ident()?;
        sig.resolve_type(&name).map_err(|e| Error::Syntax {
            line,
            col,
            msg: e.to_string(),
        })
    }

    fn model_block(&mut self) -> Result<ModelBlock> {
        self.expect_sym("{")?;
        let mut block = ModelBlock {
            carriers: Vec::new(),
            defs: Vec::new(),
        };
        while !self.eat_sym("}") {
            let (line, col) = self.here();
            let name = self.ident()?;
            if self.eat_sym("(") {
                let var = self.ident()?;
                self.expect_sym(")")?;
                self.expect_sym("=")?;
                let body = self.body(Some(&var))?;
                block.defs.push((name, body, line, col));
            } else {
                self.expect_sym("=")?;
                let starts_upper = name.chars().next().is_some_and(|c| c.is_ascii_uppercase());
                if self.is_sym("{") && starts_upper {
                    self.bump();
                    let mut elems = Vec::new();
                    if !self.eat_sym("}") {
                        loop {
                            elems.push(self.element()?);
                            if self.eat_sym("}") {
                                break;
                            }
                            self.expect_sym(",")?;
                        }
                    }
                    block.carriers.push((name, elems, line, col));
                } else {
                    let body = self.body(None)?;
                    block.defs.push((name, body, line, col));
                }
            }
            self.expect_sym(";")?;
        }
        Ok(block)
    }

    fn body(&mut self, var: Option<&str>) -> Result<Body> {
        if self.eat_sym("{") {
            let mut rows = Vec::new();
            if !self.eat_sym("}") {
                loop {
                    let (line, col) = self.here();
                    let x = self.element()?;
                    self.expect_sym("->")?;
                    let y = self.element()?;
                    rows.push((x, y, line, col));
                    if self.eat_sym("}") {
                        break;
                    }
                    self.expect_sym(",")?;
                }
            }
            return Ok(Body::Table(rows));
        }
        Ok(Body::Expr(self.arith(var)?))
    }

    fn arith(&mut self, var: Option<&str>) -> Result<Expr> {
        let mut lhs = self.arith_term(var)?;
        loop {
            let op = match self.peek() {
                Tok::Sym(s @ ("+" | "-")) => *s,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.arith_term(var)?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn arith_term(&mut self, var: Option<&str>) -> Result<Expr> {
        let mut lhs = self.arith_atom(var)?;
        loop {
            let op = match self.peek() {
                Tok::Sym(s @ ("*" | "/" | "%")) => *s,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.arith_atom(var)?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn arith_atom(&mut self, var: Option<&str>) -> Result<Expr> {
        match self.peek().clone() {
            Tok::Sym("(") => {
                self.bump();
                let e = self.arith(var)?;
                self.expect_sym(")")?;
                Ok(e)
            }
            Tok::Num(n) => {
                self.bump();
                n.parse()
                    .map(Expr::Int)
                    .or_else(|_| self.error(format!("number `{n}` is too large")))
            }
            Tok::Ident(s) => {
                self.bump();
                Ok(if Some(s.as_str()) == var {
                    Expr::Var
                } else {
                    Expr::Name(s)
                })
            }
            other => self.error(format!("expected an expression, found {other}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Value {
    Int(i64),
    Name(String),
}

impl Value {
    fn of(elem: &str) -> Value {
        elem.parse()
            .map(Value::Int)
            .unwrap_or_else(|_| Value::Name(elem.to_string()))
    }

    fn render(&self) -> String {
        match self {
            Value::Int(i) => i.to_string(),
            Value::Name(s) => s.clone(),
        }
    }
}

fn eval_expr(e: &Expr, arg: &Value) -> std::result::Result<Value, String> {
    Ok(match e {
        Expr::Int(i) => Value::Int(*i),
        Expr::Name(s) => Value::of(s),
        Expr::Var => arg.clone(),
        Expr::Bin(op, a, b) => {
            let (Value::Int(x), Value::Int(y)) = (eval_expr(a, arg)?, eval_expr(b, arg)?) else {
                return Err(format!("`{op}` needs numeric operands"));
            };
            Value::Int(
                match *op {
                    "+" => x.checked_add(y),
                    "-" => x.checked_sub(y),
                    "*" => x.checked_mul(y),
                    "/" => x.checked_div(y),
                    _ => x.checked_rem(y).map(|r| r.rem_euclid(y.abs().max(1))),
                }
                .ok_or_else(|| format!("arithmetic error in `{op}`"))?,
            )
        }
    })
}

fn build_model(sig: &Signature, block: ModelBlock) -> Result<FiniteModel> {
    let err = |line: usize, col: usize, msg: String| Error::Syntax { line, col, msg };
    let mut elems: BTreeMap<ObjType, Vec<String>> = BTreeMap::new();
    elems.insert(ObjType::Unit, vec!["()".to_string()]);
    elems.insert(ObjType::Empty, Vec::new());
    let mut sizes = BTreeMap::new();
    for (name, list, line, col) in block.carriers {
        let ty = sig.resolve_type(&name).map_err(|e| err(line, col, e.to_string()))?;
        let ObjType::Base(base) = &ty else {
            return Err(err(line, col, format!("the carrier of {ty} is fixed")));
        };
        if elems.contains_key(&ty) {
            return Err(err(line, col, format!("carrier of {ty} given twice")));
        }
        for (i, e) in list.iter().enumerate() {
            if list[..i].contains(e) {
                return Err(err(line, col, format!("element `{e}` listed twice")));
            }
        }
        sizes.insert(base.clone(), list.len());
        elems.insert(ty, list);
    }
    let mut tables: BTreeMap<Arc<str>, Vec<usize>> = BTreeMap::new();
    for (name, body, line, col) in block.defs {
        let g = sig
            .gen(&name)
            .ok_or_else(|| err(line, col, format!("unknown operation `{name}`")))?;
        if tables.contains_key(&g.name) {
            return Err(err(line, col, format!("`{name}` interpreted twice")));
        }
        let missing = |ty: &ObjType| err(line, col, format!("no carrier given for {ty}"));
        let dom = elems.get(&g.dom).ok_or_else(|| missing(&g.dom))?;
        let cod = elems.get(&g.cod).ok_or_else(|| missing(&g.cod))?;
        let index = |v: &str| {
            cod.iter()
                .position(|c| c == v)
                .ok_or_else(|| err(line, col, format!("`{v}` is not an element of {}", g.cod)))
        };
        let mut table = Vec::with_capacity(dom.len());
        match body {
            Body::Expr(e) => {
                for x in dom {
                    let arg = if g.dom == ObjType::Unit {
                        Value::Name("()".into())
                    } else {
                        Value::of(x)
                    };
                    let v = eval_expr(&e, &arg).map_err(|m| err(line, col, m))?;
                    table.push(index(&v.render())?);
                }
            }
            Body::Table(rows) => {
                for x in dom {
                    let row = rows
                        .iter()
                        .find(|r| &r.0 == x)
                        .ok_or_else(|| err(line, col, format!("no entry for `{x}` in the table of `{name}`")))?;
                    table.push(index(&row.1)?);
                }
                if let Some(r) = rows.iter().find(|r| !dom.contains(&r.0)) {
                    return Err(err(r.2, r.3, format!("`{}` is not an element of {}", r.0, g.dom)));
                }
            }
        }
        tables.insert(g.name.clone(), table);
    }
    FiniteModel::new(sig, sizes, tables)
}
