//! Concrete syntax for lambda sums.
//!
//! ```text
//! term := sum
//! sum  := app ('+' app)*
//! app  := atom atom*
//! atom := ident | '\' ident+ '.' term | '(' term ')'
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::lambda::term::{LambdaSum, SimpleTerm};
use crate::names::{fresh_name, Var};

pub fn parse_lambda(text: &str) -> Result<LambdaSum> {
    parse_lambda_with(text, &BTreeMap::new())
}

/// Parses with named constants: an unbound identifier found in `defs` is
/// replaced by its definition.
pub fn parse_lambda_with(text: &str, defs: &BTreeMap<String, LambdaSum>) -> Result<LambdaSum> {
    let mut p = Parser {
        src: text,
        pos: 0,
        env: Vec::new(),
        defs,
    };
    let term = p.sum()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(term)
}

pub(crate) fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    env: Vec<String>,
    defs: &'a BTreeMap<String, LambdaSum>,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.peek() {
            if is_ident_char(c) {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        (self.pos > start).then(|| self.src[start..self.pos].to_string())
    }

    fn sum(&mut self) -> Result<LambdaSum> {
        let mut acc = self.app()?;
        loop {
            self.skip_ws();
            if self.peek() == Some('+') {
                self.pos += 1;
                let next = self.app()?;
                acc = acc.plus(&next);
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_atom(&mut self) -> bool {
        self.skip_ws();
        matches!(self.peek(), Some(c) if is_ident_char(c) || c == '(' || c == '\\' || c == 'λ')
    }

    fn app(&mut self) -> Result<LambdaSum> {
        if !self.starts_atom() {
            return Err(self.error("expected a term"));
        }
        let mut acc = self.atom()?;
        while self.starts_atom() {
            let arg = self.atom()?;
            acc = LambdaSum::apply(&acc, &arg);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<LambdaSum> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let t = self.sum()?;
                self.skip_ws();
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(t)
            }
            Some(c @ ('\\' | 'λ')) => {
                self.pos += c.len_utf8();
                let mut binders = Vec::new();
                while let Some(name) = self.ident() {
                    binders.push(name);
                }
                if binders.is_empty() {
                    return Err(self.error("expected a binder after '\\'"));
                }
                self.skip_ws();
                if self.peek() != Some('.') {
                    return Err(self.error("expected '.' after binders"));
                }
                self.pos += 1;
                let depth = self.env.len();
                self.env.extend(binders.iter().cloned());
                let body = self.sum();
                self.env.truncate(depth);
                let mut body = body?;
                for name in binders.iter().rev() {
                    body = LambdaSum::abs(name, &body);
                }
                Ok(body)
            }
            _ => {
                let start = self.pos;
                let name = self.ident().ok_or_else(|| self.error("expected an identifier"))?;
                if let Some(k) = self.env.iter().rev().position(|b| *b == name) {
                    return Ok(SimpleTerm::bound(k).into_sum());
                }
                if let Some(def) = self.defs.get(&name) {
                    return Ok(def.clone());
                }
                if name.chars().all(|c| c.is_ascii_digit()) {
                    self.pos = start;
                    return Err(self.error("identifiers cannot be numerals"));
                }
                Ok(LambdaSum::var(name))
            }
        }
    }
}

/// Named rendering. Binders keep their hint unless it would capture a free
/// variable or shadow an enclosing binder, in which case a numeric suffix is added.
pub(crate) struct Printer {
    taken: BTreeSet<String>,
    stack: Vec<String>,
}

impl Printer {
    pub(crate) fn new(free: BTreeSet<String>) -> Self {
        Printer {
            taken: free,
            stack: Vec::new(),
        }
    }

    pub(crate) fn bind(&mut self, hint: &str) -> String {
        let mut avoid = self.taken.clone();
        avoid.extend(self.stack.iter().cloned());
        let name = fresh_name(hint, &avoid);
        self.stack.push(name.clone());
        name
    }

    pub(crate) fn unbind(&mut self) {
        self.stack.pop();
    }

    pub(crate) fn var(&self, v: &Var) -> String {
        match v {
            Var::Free(x) => x.clone(),
            Var::Bound(i) => match self.stack.len().checked_sub(i + 1) {
                Some(k) => self.stack[k].clone(),
                None => format!("#{i}"),
            },
        }
    }

    fn sum(&mut self, s: &LambdaSum, out: &mut String) {
        let parts: Vec<&SimpleTerm> = s.iter_flat().collect();
        for (i, t) in parts.iter().enumerate() {
            if i > 0 {
                out.push_str(" + ");
            }
            if parts.len() > 1 && matches!(t, SimpleTerm::Abs(..)) {
                out.push('(');
                self.simple(t, out);
                out.push(')');
            } else {
                self.simple(t, out);
            }
        }
    }

    fn simple(&mut self, t: &SimpleTerm, out: &mut String) {
        match t {
            SimpleTerm::Var(v) => out.push_str(&self.var(v)),
            SimpleTerm::Abs(..) => {
                out.push('\\');
                let mut cur = t;
                let mut depth = 0;
                while let SimpleTerm::Abs(h, body) = cur {
                    if depth > 0 {
                        out.push(' ');
                    }
                    let name = self.bind(h.as_str());
                    out.push_str(&name);
                    depth += 1;
                    cur = body;
                }
                out.push_str(". ");
                self.simple(cur, out);
                for _ in 0..depth {
                    self.unbind();
                }
            }
            SimpleTerm::App(f, arg) => {
                if matches!(**f, SimpleTerm::Abs(..)) {
                    out.push('(');
                    self.simple(f, out);
                    out.push(')');
                } else {
                    self.simple(f, out);
                }
                out.push(' ');
                match arg.as_single() {
                    Some(SimpleTerm::Var(v)) => out.push_str(&self.var(v)),
                    _ => {
                        out.push('(');
                        self.sum(arg, out);
                        out.push(')');
                    }
                }
            }
        }
    }
}

impl fmt::Display for LambdaSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        Printer::new(self.free_vars()).sum(self, &mut out);
        f.write_str(&out)
    }
}

impl fmt::Display for SimpleTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut free = BTreeSet::new();
        self.free_vars_into(&mut free);
        let mut out = String::new();
        Printer::new(free).simple(self, &mut out);
        f.write_str(&out)
    }
}
