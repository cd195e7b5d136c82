//! Variables and binder names shared by lambda terms and resource terms.
//!
//! Bound variables are de Bruijn indices, so structural equality is
//! α-equivalence. Binders keep the name they were written with as a [`Hint`],
//! which only matters for printing and never takes part in comparisons.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::hash::{Hash, Hasher};

/// Printing hint for a binder. All hints compare equal.
#[derive(Clone, Debug)]
pub struct Hint(pub String);

impl Hint {
    pub fn new(name: impl Into<String>) -> Self {
        Hint(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl PartialEq for Hint {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Hint {}

impl PartialOrd for Hint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Hint {
    fn cmp(&self, _: &Self) -> Ordering {
        Ordering::Equal
    }
}

impl Hash for Hint {
    fn hash<H: Hasher>(&self, _: &mut H) {}
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    Free(String),
    /// De Bruijn index, 0 is the innermost binder.
    Bound(usize),
}

impl Var {
    pub fn free(name: impl Into<String>) -> Self {
        Var::Free(name.into())
    }
}

/// De Bruijn shift: indices `>= cutoff` move by `delta`.
pub(crate) fn shift_index(i: usize, delta: isize, cutoff: usize) -> usize {
    if i >= cutoff {
        let j = i as isize + delta;
        assert!(j >= 0, "negative de Bruijn index after shift");
        j as usize
    } else {
        i
    }
}

/// Picks `base`, or `base` followed by the smallest numeric suffix, avoiding `taken`.
pub fn fresh_name(base: &str, taken: &BTreeSet<String>) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { "x" } else { stem };
    if !taken.contains(base) {
        return base.to_string();
    }
    (1..)
        .map(|n| format!("{stem}{n}"))
        .find(|candidate| !taken.contains(candidate))
        .expect("unbounded suffix search")
}

/// Generator of names that avoid a fixed set plus everything it has produced.
#[derive(Clone, Debug, Default)]
pub struct NameSupply {
    taken: BTreeSet<String>,
}

impl NameSupply {
    pub fn avoiding<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        NameSupply {
            taken: names.into_iter().map(Into::into).collect(),
        }
    }

    pub fn fresh(&mut self, base: &str) -> String {
        let name = fresh_name(base, &self.taken);
        self.taken.insert(name.clone());
        name
    }

    pub fn reserve(&mut self, name: &str) {
        self.taken.insert(name.to_string());
    }
}
