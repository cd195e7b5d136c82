use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lambda::is_ident_char;

/// Intersection types. Intersections are stored as written: neither flattened nor sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Type {
    Var(String),
    Arrow(Box<Type>, Box<Type>),
    Inter(Box<Type>, Box<Type>),
}

impl Type {
    pub fn var(name: impl Into<String>) -> Self {
        Type::Var(name.into())
    }

    pub fn arrow(a: Type, b: Type) -> Self {
        Type::Arrow(Box::new(a), Box::new(b))
    }

    pub fn inter(a: Type, b: Type) -> Self {
        Type::Inter(Box::new(a), Box::new(b))
    }

    /// `A₁ → ⋯ → Aₙ → B`.
    pub fn arrows(doms: impl IntoIterator<Item = Type>, cod: Type) -> Self {
        let doms: Vec<Type> = doms.into_iter().collect();
        doms.into_iter().rev().fold(cod, |acc, a| Type::arrow(a, acc))
    }

    /// Right-nested intersection of a non-empty list.
    pub fn meet(items: impl IntoIterator<Item = Type>) -> Option<Self> {
        let items: Vec<Type> = items.into_iter().collect();
        items.into_iter().rev().reduce(|acc, a| Type::inter(a, acc))
    }

    /// Number of constructors.
    pub fn size(&self) -> usize {
        match self {
            Type::Var(_) => 1,
            Type::Arrow(a, b) | Type::Inter(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Top-level conjuncts, left to right.
    pub fn conjuncts(&self) -> Vec<&Type> {
        let mut out = Vec::new();
        fn go<'a>(t: &'a Type, out: &mut Vec<&'a Type>) {
            match t {
                Type::Inter(a, b) => {
                    go(a, out);
                    go(b, out);
                }
                _ => out.push(t),
            }
        }
        go(self, &mut out);
        out
    }

    /// Splits `A₁ → ⋯ → Aₙ → B` after `n` arrows.
    pub fn uncurry(&self, n: usize) -> Option<(Vec<&Type>, &Type)> {
        let mut doms = Vec::with_capacity(n);
        let mut cur = self;
        for _ in 0..n {
            match cur {
                Type::Arrow(a, b) => {
                    doms.push(&**a);
                    cur = b;
                }
                _ => return None,
            }
        }
        Some((doms, cur))
    }

    pub fn vars_into(&self, out: &mut std::collections::BTreeSet<String>) {
        match self {
            Type::Var(x) => {
                out.insert(x.clone());
            }
            Type::Arrow(a, b) | Type::Inter(a, b) => {
                a.vars_into(out);
                b.vars_into(out);
            }
        }
    }
}

/// Every type with at most `max_size` constructors over `vars`, by increasing size.
pub fn enumerate_types(vars: &[String], max_size: usize) -> Vec<Type> {
    let mut by_size: Vec<Vec<Type>> = vec![Vec::new(); max_size + 1];
    for n in 1..=max_size {
        let mut here = Vec::new();
        if n == 1 {
            here.extend(vars.iter().map(|v| Type::var(v.clone())));
        }
        for i in 1..n.saturating_sub(1) {
            let j = n - 1 - i;
            for a in &by_size[i] {
                for b in &by_size[j] {
                    here.push(Type::arrow(a.clone(), b.clone()));
                    here.push(Type::inter(a.clone(), b.clone()));
                }
            }
        }
        by_size[n] = here;
    }
    by_size.into_iter().flatten().collect()
}

pub fn parse_type(text: &str) -> Result<Type> {
    let mut p = Parser { src: text, pos: 0 };
    let t = p.arrow()?;
    p.skip_ws();
    if p.pos < text.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(t)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn arrow(&mut self) -> Result<Type> {
        let a = self.inter()?;
        if self.eat("->") || self.eat("→") {
            Ok(Type::arrow(a, self.arrow()?))
        } else {
            Ok(a)
        }
    }

    fn inter(&mut self) -> Result<Type> {
        let a = self.atom()?;
        if self.eat("&") || self.eat("∩") {
            Ok(Type::inter(a, self.inter()?))
        } else {
            Ok(a)
        }
    }

    fn atom(&mut self) -> Result<Type> {
        if self.eat("(") {
            let t = self.arrow()?;
            if !self.eat(")") {
                return Err(self.error("expected ')'"));
            }
            return Ok(t);
        }
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !is_ident_char(c) {
                break;
            }
            self.pos += c.len_utf8();
        }
        if self.pos == start {
            return Err(self.error("expected a type"));
        }
        Ok(Type::var(&self.src[start..self.pos]))
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Var(x) => f.write_str(x),
            Type::Arrow(a, b) => {
                if matches!(**a, Type::Arrow(..)) {
                    write!(f, "({a}) -> {b}")
                } else {
                    write!(f, "{a} -> {b}")
                }
            }
            Type::Inter(a, b) => {
                let left = if matches!(**a, Type::Var(_)) {
                    a.to_string()
                } else {
                    format!("({a})")
                };
                let right = if matches!(**b, Type::Arrow(..)) {
                    format!("({b})")
                } else {
                    b.to_string()
                };
                write!(f, "{left} & {right}")
            }
        }
    }
}

impl FromStr for Type {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_type(s)
    }
}

impl TryFrom<String> for Type {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        parse_type(&s)
    }
}

impl From<Type> for String {
    fn from(t: Type) -> String {
        t.to_string()
    }
}
