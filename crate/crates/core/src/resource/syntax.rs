//! Concrete syntax for resource terms: `x`, `\x. s`, `s [t1, t2]`, and `s []` or `s 1`
//! for the empty bag.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::lambda::{is_ident_char, Printer};
use crate::resource::term::{Bag, RTerm};

pub fn parse_resource(text: &str) -> Result<RTerm> {
    let mut p = Parser {
        src: text,
        pos: 0,
        env: Vec::new(),
    };
    let t = p.term()?;
    p.skip_ws();
    if p.pos < text.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(t)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    env: Vec<String>,
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
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.peek() {
            if !is_ident_char(c) {
                break;
            }
            self.pos += c.len_utf8();
        }
        (self.pos > start).then(|| self.src[start..self.pos].to_string())
    }

    fn expect(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.error(&format!("expected '{c}'")))
        }
    }

    fn term(&mut self) -> Result<RTerm> {
        self.skip_ws();
        match self.peek() {
            Some(c @ ('\\' | 'λ')) => {
                self.pos += c.len_utf8();
                let mut binders = Vec::new();
                while let Some(b) = self.ident() {
                    binders.push(b);
                }
                if binders.is_empty() {
                    return Err(self.error("expected a binder after '\\'"));
                }
                self.expect('.')?;
                let depth = self.env.len();
                self.env.extend(binders.iter().cloned());
                let body = self.term();
                self.env.truncate(depth);
                let mut body = body?;
                for b in binders.iter().rev() {
                    body = RTerm::abs(b.clone(), body);
                }
                Ok(body)
            }
            _ => self.app(),
        }
    }

    fn app(&mut self) -> Result<RTerm> {
        let mut head = self.atom()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('[') => {
                    self.pos += 1;
                    let bag = self.bag()?;
                    head = RTerm::app(head, bag);
                }
                Some('1') => {
                    let save = self.pos;
                    let tok = self.ident().unwrap_or_default();
                    if tok != "1" {
                        self.pos = save;
                        return Err(self.error("expected a bag"));
                    }
                    head = RTerm::app(head, Bag::empty());
                }
                _ => return Ok(head),
            }
        }
    }

    fn bag(&mut self) -> Result<Bag> {
        let mut items = Vec::new();
        self.skip_ws();
        if self.peek() == Some(']') {
            self.pos += 1;
            return Ok(Bag::empty());
        }
        loop {
            items.push(self.term()?);
            self.skip_ws();
            match self.peek() {
                Some(',') => self.pos += 1,
                Some(']') => {
                    self.pos += 1;
                    return Ok(Bag::new(items));
                }
                _ => return Err(self.error("expected ',' or ']' in bag")),
            }
        }
    }

    fn atom(&mut self) -> Result<RTerm> {
        self.skip_ws();
        if self.peek() == Some('(') {
            self.pos += 1;
            let t = self.term()?;
            self.expect(')')?;
            return Ok(t);
        }
        let name = self.ident().ok_or_else(|| self.error("expected a resource term"))?;
        if name.chars().all(|c| c.is_ascii_digit()) {
            return Err(self.error("identifiers cannot be numerals"));
        }
        Ok(match self.env.iter().rev().position(|b| *b == name) {
            Some(k) => RTerm::bound(k),
            None => RTerm::var(name),
        })
    }
}

fn render(p: &mut Printer, t: &RTerm, out: &mut String) {
    match t {
        RTerm::Var(v) => out.push_str(&p.var(v)),
        RTerm::Abs(..) => {
            out.push('\\');
            let mut cur = t;
            let mut depth = 0;
            while let RTerm::Abs(h, body) = cur {
                if depth > 0 {
                    out.push(' ');
                }
                let name = p.bind(h.as_str());
                out.push_str(&name);
                depth += 1;
                cur = body;
            }
            out.push_str(". ");
            render(p, cur, out);
            for _ in 0..depth {
                p.unbind();
            }
        }
        RTerm::App(head, bag) => {
            if matches!(**head, RTerm::Abs(..)) {
                out.push('(');
                render(p, head, out);
                out.push(')');
            } else {
                render(p, head, out);
            }
            out.push_str(" [");
            for (i, u) in bag.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                render(p, u, out);
            }
            out.push(']');
        }
    }
}

impl fmt::Display for RTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        render(&mut Printer::new(self.free_vars()), self, &mut out);
        f.write_str(&out)
    }
}

impl fmt::Display for Bag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut free = BTreeSet::new();
        for u in self.iter() {
            u.free_vars_into(&mut free);
        }
        let mut p = Printer::new(free);
        let mut out = String::from("[");
        for (i, u) in self.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            render(&mut p, u, &mut out);
        }
        out.push(']');
        f.write_str(&out)
    }
}
