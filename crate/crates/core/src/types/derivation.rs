use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lambda::LambdaSum;
use crate::types::subtype::{subtype, Context};
use crate::types::ty::{parse_type, Type};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rule {
    Var,
    Abs,
    App,
    Int,
    Plus,
    Sub,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

mod term_text {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::lambda::{parse_lambda, LambdaSum};

    pub fn serialize<S: Serializer>(m: &LambdaSum, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&m.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<LambdaSum, D::Error> {
        let text = String::deserialize(d)?;
        parse_lambda(&text).map_err(serde::de::Error::custom)
    }
}

/// A typing derivation: each node records its rule, its conclusion and its premises.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Derivation {
    pub rule: Rule,
    /// The variable discharged by an `Abs` node.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub binder: Option<String>,
    pub context: Context,
    #[serde(with = "term_text")]
    pub term: LambdaSum,
    #[serde(rename = "type")]
    pub ty: Type,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub premises: Vec<Derivation>,
}

impl Derivation {
    pub fn var(context: &Context, x: &str) -> Result<Self> {
        let ty = context
            .get(x)
            .cloned()
            .ok_or_else(|| derr(Rule::Var, format!("{x} is not in the context")))?;
        Ok(Derivation {
            rule: Rule::Var,
            binder: None,
            context: context.clone(),
            term: LambdaSum::var(x),
            ty,
            premises: Vec::new(),
        })
    }

    /// Discharges `x` from the premise's context.
    pub fn abs(x: &str, premise: Derivation) -> Result<Self> {
        let mut context = premise.context.clone();
        let a = context
            .remove(x)
            .ok_or_else(|| derr(Rule::Abs, format!("{x} is not in the premise context")))?;
        Ok(Derivation {
            rule: Rule::Abs,
            binder: Some(x.to_string()),
            context,
            term: LambdaSum::lambda(x, &premise.term),
            ty: Type::arrow(a, premise.ty.clone()),
            premises: vec![premise],
        })
    }

    pub fn app(fun: Derivation, arg: Derivation) -> Result<Self> {
        let Type::Arrow(_, b) = &fun.ty else {
            return Err(derr(Rule::App, format!("function type {} is not an arrow", fun.ty)));
        };
        Ok(Derivation {
            rule: Rule::App,
            binder: None,
            context: fun.context.clone(),
            term: LambdaSum::apply(&fun.term, &arg.term),
            ty: (**b).clone(),
            premises: vec![fun, arg],
        })
    }

    pub fn int(left: Derivation, right: Derivation) -> Self {
        Derivation {
            rule: Rule::Int,
            binder: None,
            context: left.context.clone(),
            term: left.term.clone(),
            ty: Type::inter(left.ty.clone(), right.ty.clone()),
            premises: vec![left, right],
        }
    }

    pub fn plus(left: Derivation, right: Derivation) -> Self {
        Derivation {
            rule: Rule::Plus,
            binder: None,
            context: left.context.clone(),
            term: left.term.plus(&right.term),
            ty: left.ty.clone(),
            premises: vec![left, right],
        }
    }

    pub fn sub(premise: Derivation, ty: Type) -> Self {
        Derivation {
            rule: Rule::Sub,
            binder: None,
            context: premise.context.clone(),
            term: premise.term.clone(),
            ty,
            premises: vec![premise],
        }
    }

    /// `Sub` to `ty` unless the premise already has that type.
    pub fn coerce(premise: Derivation, ty: &Type) -> Self {
        if premise.ty == *ty {
            premise
        } else {
            Derivation::sub(premise, ty.clone())
        }
    }

    pub fn node_count(&self) -> usize {
        1 + self.premises.iter().map(Derivation::node_count).sum::<usize>()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("derivations serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Malformed(format!("derivation JSON: {e}")))
    }

    fn judgement(&self) -> String {
        let ctx: Vec<String> = self.context.iter().map(|(x, a)| format!("{x}: {a}")).collect();
        format!("{} ⊢ {} : {}", ctx.join(", "), self.term, self.ty)
    }

    fn render(&self, depth: usize, out: &mut String) {
        out.push_str(&"  ".repeat(depth));
        out.push_str(&self.judgement());
        out.push_str(&format!("   ({})\n", self.rule));
        for p in &self.premises {
            p.render(depth + 1, out);
        }
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        self.render(0, &mut out);
        f.write_str(out.trim_end())
    }
}

fn derr(rule: Rule, msg: String) -> Error {
    Error::Derivation {
        rule: rule.to_string(),
        msg,
    }
}

/// Which side of an intersection to keep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Intersection elimination, derived as `Sub` with `A ∩ B ⊑ A` (or `⊑ B`).
pub fn inter_elim(d: Derivation, side: Side) -> Result<Derivation> {
    let Type::Inter(a, b) = &d.ty else {
        return Err(derr(Rule::Sub, format!("{} is not an intersection", d.ty)));
    };
    let ty = match side {
        Side::Left => (**a).clone(),
        Side::Right => (**b).clone(),
    };
    Ok(Derivation::sub(d, ty))
}

/// Checks every node; the error names the first failing rule and its position.
pub fn check_derivation(d: &Derivation) -> Result<()> {
    check_at(d, "root")
}

pub fn is_valid(d: &Derivation) -> bool {
    check_derivation(d).is_ok()
}

fn check_at(d: &Derivation, at: &str) -> Result<()> {
    let fail = |msg: String| Err(derr(d.rule, format!("at {at}: {msg}")));
    let arity = match d.rule {
        Rule::Var => 0,
        Rule::Abs | Rule::Sub => 1,
        Rule::App | Rule::Int | Rule::Plus => 2,
    };
    if d.premises.len() != arity {
        return fail(format!("expected {arity} premises, found {}", d.premises.len()));
    }
    if d.rule != Rule::Abs && d.binder.is_some() {
        return fail("only abstractions discharge a binder".to_string());
    }
    for (i, p) in d.premises.iter().enumerate() {
        if d.rule != Rule::Abs && p.context != d.context {
            return fail(format!("premise {i} has a different context"));
        }
    }
    let p = &d.premises;
    match d.rule {
        Rule::Var => {
            let Some(x) = d.term.as_single().and_then(|t| match t {
                crate::lambda::SimpleTerm::Var(crate::names::Var::Free(x)) => Some(x.clone()),
                _ => None,
            }) else {
                return fail(format!("{} is not a variable", d.term));
            };
            match d.context.get(&x) {
                Some(a) if *a == d.ty => {}
                Some(a) => return fail(format!("{x} has type {a} in the context, not {}", d.ty)),
                None => return fail(format!("{x} is not in the context")),
            }
        }
        Rule::Abs => {
            let Some(x) = &d.binder else {
                return fail("missing binder".to_string());
            };
            if d.context.contains_key(x) {
                return fail(format!("{x} is still bound in the conclusion context"));
            }
            let Type::Arrow(a, b) = &d.ty else {
                return fail(format!("{} is not an arrow", d.ty));
            };
            let mut expected = d.context.clone();
            expected.insert(x.clone(), (**a).clone());
            if p[0].context != expected {
                return fail(format!("premise context must extend the conclusion with {x}: {a}"));
            }
            if p[0].ty != **b {
                return fail(format!("body type {} differs from {b}", p[0].ty));
            }
            if d.term != LambdaSum::lambda(x, &p[0].term) {
                return fail(format!("{} is not the abstraction of {} over {x}", d.term, p[0].term));
            }
        }
        Rule::App => {
            let Type::Arrow(a, b) = &p[0].ty else {
                return fail(format!("function type {} is not an arrow", p[0].ty));
            };
            if p[1].ty != **a {
                return fail(format!("argument has type {}, expected {a}", p[1].ty));
            }
            if d.ty != **b {
                return fail(format!("conclusion type {} differs from {b}", d.ty));
            }
            if d.term != LambdaSum::apply(&p[0].term, &p[1].term) {
                return fail(format!("{} is not the application of the premises", d.term));
            }
        }
        Rule::Int => {
            if p[0].term != p[1].term || d.term != p[0].term {
                return fail("premises must type the same term".to_string());
            }
            if d.ty != Type::inter(p[0].ty.clone(), p[1].ty.clone()) {
                return fail(format!("{} is not the intersection of the premise types", d.ty));
            }
        }
        Rule::Plus => {
            if p[0].ty != p[1].ty || d.ty != p[0].ty {
                return fail("both addends must have the conclusion type".to_string());
            }
            if d.term != p[0].term.plus(&p[1].term) {
                return fail(format!("{} is not the sum of the premises", d.term));
            }
        }
        Rule::Sub => {
            if d.term != p[0].term {
                return fail("subsumption must keep the term".to_string());
            }
            if !subtype(&p[0].ty, &d.ty) {
                return fail(format!("{} is not a subtype of {}", p[0].ty, d.ty));
            }
        }
    }
    for (i, q) in p.iter().enumerate() {
        check_at(q, &format!("{at}.{i}"))?;
    }
    Ok(())
}

/// `x: A → B∩B′, y: A → B∩B″, z: A ⊢ (x + y) z : B`, through `Sub`, `Plus` and `App`.
pub fn remark1_derivation() -> Derivation {
    let t = |s: &str| parse_type(s).expect("fixed type");
    let ctx = Context::from([
        ("x".to_string(), t("A -> B & B'")),
        ("y".to_string(), t("A -> B & B''")),
        ("z".to_string(), t("A")),
    ]);
    let var = |x: &str| Derivation::var(&ctx, x).expect("bound in the context");
    let x = Derivation::sub(var("x"), t("A -> B"));
    let y = Derivation::sub(var("y"), t("A -> B"));
    Derivation::app(Derivation::plus(x, y), var("z")).expect("arrow type")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::parse_lambda;

    #[test]
    fn identity() {
        let ctx = Context::from([("x".to_string(), Type::var("X"))]);
        let d = Derivation::abs("x", Derivation::var(&ctx, "x").unwrap()).unwrap();
        assert_eq!(d.ty.to_string(), "X -> X");
        assert_eq!(d.term, parse_lambda("\\y. y").unwrap());
        check_derivation(&d).unwrap();
    }

    #[test]
    fn remark1_checks() {
        let d = remark1_derivation();
        check_derivation(&d).unwrap();
        assert_eq!(d.term, parse_lambda("(x + y) z").unwrap());
        assert_eq!(d.ty, Type::var("B"));
    }

    #[test]
    fn argument_mismatch_is_reported() {
        let ctx = Context::from([
            ("f".to_string(), parse_type("A -> B").unwrap()),
            ("a".to_string(), parse_type("C").unwrap()),
        ]);
        let mut d = Derivation::app(Derivation::var(&ctx, "f").unwrap(), Derivation::var(&ctx, "a").unwrap()).unwrap();
        let err = check_derivation(&d).unwrap_err();
        assert!(matches!(&err, Error::Derivation { rule, .. } if rule == "App"), "{err}");
        d.premises[1].ty = parse_type("A").unwrap();
        assert!(check_derivation(&d).is_err());
    }

    #[test]
    fn json_round_trip() {
        let d = remark1_derivation();
        let text = serde_json::to_string(&d).unwrap();
        assert_eq!(Derivation::from_json(&text).unwrap(), d);
    }

    #[test]
    fn elimination_macro() {
        let ctx = Context::from([("x".to_string(), parse_type("A & B").unwrap())]);
        let d = inter_elim(Derivation::var(&ctx, "x").unwrap(), Side::Right).unwrap();
        assert_eq!(d.ty, Type::var("B"));
        check_derivation(&d).unwrap();
    }
}
