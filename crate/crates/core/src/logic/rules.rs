//! Inference rules as data: schematic premises and conclusion, typing
//! constraints on the metavariables, and decoration guards.
//!
//! Schemas use the DSL notation with metavariables (`f`, `g`, `h`, `u`, ...)
//! and type variables `X`, `Y`, `Z`. The closure engine implements each rule
//! natively and reads only the guards from here; the schemas serve the
//! soundness audit and the duality check between core exceptions and states.

use crate::types::Logic;

/// Side condition on a metavariable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Guard {
    Any,
    Pure,
    /// Grade at most 1.
    Propagator,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub name: &'static str,
    pub premises: Vec<String>,
    pub conclusion: String,
    /// `(metavariable, dom, cod)`.
    pub typing: Vec<(String, String, String)>,
    pub guards: Vec<(String, Guard)>,
}

impl Rule {
    pub fn guard(&self, var: &str) -> Guard {
        self.guards
            .iter()
            .find(|(v, _)| v == var)
            .map(|(_, g)| *g)
            .unwrap_or(Guard::Any)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleSet {
    pub logic: Logic,
    pub rules: Vec<Rule>,
}

fn rule(
    name: &'static str,
    premises: &[&str],
    conclusion: &str,
    typing: &[(&str, &str, &str)],
    guards: &[(&str, Guard)],
) -> Rule {
    Rule {
        name,
        premises: premises.iter().map(|s| s.to_string()).collect(),
        conclusion: conclusion.to_string(),
        typing: typing
            .iter()
            .map(|(v, d, c)| (v.to_string(), d.to_string(), c.to_string()))
            .collect(),
        guards: guards.iter().map(|(v, g)| (v.to_string(), *g)).collect(),
    }
}

fn equiv(sym: &str, suffix: &'static str) -> Vec<Rule> {
    let name = |base: &'static str| -> &'static str {
        match (base, suffix) {
            ("refl", "") => "refl",
            ("sym", "") => "sym",
            ("trans", "") => "trans",
            ("refl", _) if sym == "==" => "refl==",
            ("sym", _) if sym == "==" => "sym==",
            ("trans", _) if sym == "==" => "trans==",
            ("refl", _) => "refl~~",
            ("sym", _) => "sym~~",
            _ => "trans~~",
        }
    };
    vec![
        rule(name("refl"), &[], &format!("f {sym} f"), &[], &[]),
        rule(name("sym"), &[&format!("f {sym} g")], &format!("g {sym} f"), &[], &[]),
        rule(
            name("trans"),
            &[&format!("f {sym} g"), &format!("g {sym} h")],
            &format!("f {sym} h"),
            &[],
            &[],
        ),
    ]
}

fn congruence(sym: &str, subs: &'static str, repl: &'static str, subs_g: Guard, repl_g: Guard) -> Vec<Rule> {
    vec![
        rule(
            subs,
            &[&format!("g1 {sym} g2")],
            &format!("g1 . h {sym} g2 . h"),
            &[("h", "X", "Y"), ("g1", "Y", "Z"), ("g2", "Y", "Z")],
            &[("h", subs_g)],
        ),
        rule(
            repl,
            &[&format!("g1 {sym} g2")],
            &format!("h . g1 {sym} h . g2"),
            &[("g1", "X", "Y"), ("g2", "X", "Y"), ("h", "Y", "Z")],
            &[("h", repl_g)],
        ),
    ]
}

impl RuleSet {
    pub fn for_logic(logic: Logic) -> RuleSet {
        let mut rules = Vec::new();
        match logic {
            Logic::Eqn => {
                rules.extend(equiv("==", ""));
                rules.extend(congruence("==", "subs", "repl", Guard::Any, Guard::Any));
                rules.push(rule(
                    "initial",
                    &[],
                    "f == copa[Y]",
                    &[("f", "Empty", "Y")],
                    &[("f", Guard::Pure)],
                ));
            }
            Logic::Exc => {
                rules.extend(equiv("==", ""));
                rules.extend(congruence("==", "subs", "repl", Guard::Any, Guard::Any));
                rules.push(rule(
                    "initial1",
                    &[],
                    "a == copa[Y]",
                    &[("a", "Empty", "Y")],
                    &[("a", Guard::Propagator)],
                ));
                rules.push(rule(
                    "recover",
                    &["throw[Y] . u1 == throw[Y] . u2"],
                    "u1 == u2",
                    &[("u1", "X", "P"), ("u2", "X", "P")],
                    &[("u1", Guard::Pure), ("u2", Guard::Pure)],
                ));
                rules.push(rule(
                    "propagate",
                    &[],
                    "a . throw[X] == throw[Y]",
                    &[("a", "X", "Y")],
                    &[("a", Guard::Propagator)],
                ));
                rules.push(rule(
                    "try",
                    &["a1 == a2"],
                    "try (a1) catch (b) == try (a2) catch (b)",
                    &[("a1", "X", "Y"), ("a2", "X", "Y"), ("b", "P", "Y")],
                    &[
                        ("a1", Guard::Propagator),
                        ("a2", Guard::Propagator),
                        ("b", Guard::Propagator),
                    ],
                ));
                rules.push(rule(
                    "try0",
                    &[],
                    "try (u) catch (b) == u",
                    &[("u", "X", "Y"), ("b", "P", "Y")],
                    &[("u", Guard::Pure), ("b", Guard::Propagator)],
                ));
                rules.push(rule(
                    "try1",
                    &[],
                    "try (throw[Y] . u) catch (b) == b . u",
                    &[("u", "X", "P"), ("b", "P", "Y")],
                    &[("u", Guard::Pure), ("b", Guard::Propagator)],
                ));
            }
            Logic::ExCore => {
                rules.extend(equiv("==", "s"));
                rules.extend(congruence("==", "subs==", "repl==", Guard::Any, Guard::Any));
                rules.extend(equiv("~~", "w"));
                rules.extend(congruence("~~", "subs~~", "repl~~", Guard::Pure, Guard::Any));
                rules.push(rule(
                    "initial",
                    &[],
                    "f == copa[Y]",
                    &[("f", "Empty", "Y")],
                    &[("f", Guard::Pure)],
                ));
                rules.push(rule("empty~~", &[], "f ~~ copa[Y]", &[("f", "Empty", "Y")], &[]));
                rules.push(rule("s-to-w", &["f == g"], "f ~~ g", &[], &[]));
                rules.push(rule("ax", &[], "untag . tag ~~ id[P]", &[], &[]));
                rules.push(rule(
                    "eq1",
                    &["f ~~ g"],
                    "f == g",
                    &[],
                    &[("f", Guard::Propagator), ("g", Guard::Propagator)],
                ));
                rules.push(rule(
                    "eq2",
                    &["f ~~ g", "f . copa[X] == g . copa[X]"],
                    "f == g",
                    &[("f", "X", "Y"), ("g", "X", "Y")],
                    &[],
                ));
                rules.push(rule(
                    "eq3",
                    &["f . tag ~~ g . tag"],
                    "f == g",
                    &[("f", "Empty", "X"), ("g", "Empty", "X")],
                    &[],
                ));
                rules.push(rule(
                    "catch~~",
                    &[],
                    "CATCH(b) ~~ id[Y]",
                    &[("b", "P", "Y")],
                    &[("b", Guard::Propagator)],
                ));
                rules.push(rule(
                    "catch==",
                    &[],
                    "CATCH(b) . copa[Y] == b . untag",
                    &[("b", "P", "Y")],
                    &[("b", Guard::Propagator)],
                ));
                rules.push(rule(
                    "try~~",
                    &[],
                    "TRY(a, k) ~~ k . a",
                    &[("a", "X", "Y"), ("k", "Y", "Y")],
                    &[("a", Guard::Propagator)],
                ));
            }
            Logic::States => {
                rules.extend(equiv("==", "s"));
                rules.extend(congruence("==", "subs==", "repl==", Guard::Any, Guard::Any));
                rules.extend(equiv("~~", "w"));
                rules.extend(congruence("~~", "subs~~", "repl~~", Guard::Any, Guard::Pure));
                rules.push(rule(
                    "unit",
                    &[],
                    "f == pa[X]",
                    &[("f", "X", "Unit")],
                    &[("f", Guard::Pure)],
                ));
                rules.push(rule("unit~~", &[], "f ~~ pa[X]", &[("f", "X", "Unit")], &[]));
                rules.push(rule("s-to-w", &["f == g"], "f ~~ g", &[], &[]));
                rules.push(rule("ax", &[], "lookup . update ~~ id[V]", &[], &[]));
                rules.push(rule(
                    "eq1",
                    &["f ~~ g"],
                    "f == g",
                    &[],
                    &[("f", Guard::Propagator), ("g", Guard::Propagator)],
                ));
                rules.push(rule(
                    "eq2",
                    &["f ~~ g", "pa[Y] . f == pa[Y] . g"],
                    "f == g",
                    &[("f", "X", "Y"), ("g", "X", "Y")],
                    &[],
                ));
                rules.push(rule(
                    "eq3",
                    &["lookup . f ~~ lookup . g"],
                    "f == g",
                    &[("f", "X", "Unit"), ("g", "X", "Unit")],
                    &[],
                ));
            }
        }
        RuleSet { logic, rules }
    }

    pub fn get(&self, name: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.name == name)
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.rules.iter().map(|r| r.name).collect()
    }
}

fn dual_name(name: &'static str) -> &'static str {
    match name {
        "subs==" => "repl==",
        "repl==" => "subs==",
        "subs~~" => "repl~~",
        "repl~~" => "subs~~",
        "initial" => "unit",
        "empty~~" => "unit~~",
        other => other,
    }
}

fn dual_type(ty: &str) -> String {
    match ty {
        "Empty" => "Unit".into(),
        "P" => "V".into(),
        "X" => "Y".into(),
        "Y" => "X".into(),
        other => other.into(),
    }
}

fn dual_atom(atom: &str) -> String {
    if let Some(inner) = atom.strip_prefix("copa[").and_then(|s| s.strip_suffix(']')) {
        return format!("pa[{}]", dual_type(inner));
    }
    if let Some(inner) = atom.strip_prefix("id[").and_then(|s| s.strip_suffix(']')) {
        return format!("id[{}]", dual_type(inner));
    }
    match atom {
        "tag" => "lookup".into(),
        "untag" => "update".into(),
        other => other.into(),
    }
}

fn dual_side(side: &str) -> String {
    let parts: Vec<String> = side.split(" . ").map(dual_atom).collect();
    parts.into_iter().rev().collect::<Vec<_>>().join(" . ")
}

fn dual_formula(f: &str) -> String {
    for sym in [" == ", " ~~ "] {
        if let Some((l, r)) = f.split_once(sym) {
            return format!("{}{sym}{}", dual_side(l), dual_side(r));
        }
    }
    f.to_string()
}

/// The rule obtained by reversing every arrow: composition order flips,
/// `tag`/`untag`/`copa`/`Empty`/`P` become `lookup`/`update`/`pa`/`Unit`/`V`,
/// and substitution trades places with replacement.
pub fn dual(rule: &Rule) -> Rule {
    Rule {
        name: dual_name(rule.name),
        premises: rule.premises.iter().map(|p| dual_formula(p)).collect(),
        conclusion: dual_formula(&rule.conclusion),
        typing: rule
            .typing
            .iter()
            .map(|(v, d, c)| (v.clone(), dual_type(c), dual_type(d)))
            .collect(),
        guards: rule.guards.clone(),
    }
}

/// Rules of `ExCore` that have no counterpart for states.
pub fn core_only(name: &str) -> bool {
    matches!(name, "catch~~" | "catch==" | "try~~")
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Sorts the side conditions and renames type variables by first use.
    fn normalized(r: &Rule) -> Rule {
        let mut r = r.clone();
        r.typing.sort_by(|a, b| a.0.cmp(&b.0));
        r.guards.sort_by(|a, b| a.0.cmp(&b.0));
        let mut order: Vec<String> = Vec::new();
        for (_, d, c) in &r.typing {
            for t in [d, c] {
                if ["X", "Y", "Z"].contains(&t.as_str()) && !order.contains(t) {
                    order.push(t.clone());
                }
            }
        }
        let fresh = ["T0", "T1", "T2"];
        let rename = |t: &str| -> String {
            order
                .iter()
                .position(|o| o == t)
                .map(|i| fresh[i].to_string())
                .unwrap_or_else(|| t.to_string())
        };
        let rename_formula = |f: &str| -> String {
            let mut f = f.to_string();
            for (i, o) in order.iter().enumerate() {
                f = f.replace(&format!("[{o}]"), &format!("[{}]", fresh[i]));
            }
            f
        };
        r.typing = r
            .typing
            .iter()
            .map(|(v, d, c)| (v.clone(), rename(d), rename(c)))
            .collect();
        r.premises = r.premises.iter().map(|p| rename_formula(p)).collect();
        r.conclusion = rename_formula(&r.conclusion);
        r
    }

    #[test]
    fn states_rules_are_dual_to_core_rules() {
        let core = RuleSet::for_logic(Logic::ExCore);
        let states = RuleSet::for_logic(Logic::States);
        let mut matched = 0;
        for r in core.rules.iter().filter(|r| !core_only(r.name)) {
            let d = normalized(&dual(r));
            let target = states
                .get(d.name)
                .unwrap_or_else(|| panic!("no states rule {}", d.name));
            assert_eq!(d, normalized(target), "dual of {}", r.name);
            matched += 1;
        }
        assert_eq!(matched, states.rules.len());
    }

    #[test]
    fn weak_congruence_guards_are_swapped() {
        let core = RuleSet::for_logic(Logic::ExCore);
        let states = RuleSet::for_logic(Logic::States);
        assert_eq!(core.get("subs~~").unwrap().guard("h"), Guard::Pure);
        assert_eq!(core.get("repl~~").unwrap().guard("h"), Guard::Any);
        assert_eq!(states.get("subs~~").unwrap().guard("h"), Guard::Any);
        assert_eq!(states.get("repl~~").unwrap().guard("h"), Guard::Pure);
    }

    #[test]
    fn eq1_is_guarded() {
        let core = RuleSet::for_logic(Logic::ExCore);
        let eq1 = core.get("eq1").unwrap();
        assert_eq!(eq1.guard("f"), Guard::Propagator);
        assert_eq!(eq1.guard("g"), Guard::Propagator);
    }
}
