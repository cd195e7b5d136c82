use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};

use crate::names::{shift_index, Hint, Var};

/// A sum-free term. Sums only occur inside application arguments, which
/// keeps `λx.(M+N) = λx.M + λx.N` and `(M+N)P = MP + NP` structural.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SimpleTerm {
    Var(Var),
    Abs(Hint, Box<SimpleTerm>),
    App(Box<SimpleTerm>, LambdaSum),
}

/// A non-empty multiset of simple terms. `M + M` keeps multiplicity 2.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LambdaSum {
    addends: BTreeMap<SimpleTerm, usize>,
}

impl SimpleTerm {
    pub fn var(name: impl Into<String>) -> Self {
        SimpleTerm::Var(Var::free(name))
    }

    pub fn bound(index: usize) -> Self {
        SimpleTerm::Var(Var::Bound(index))
    }

    /// Abstraction over an already de Bruijn–shaped body.
    pub fn abs(hint: impl Into<String>, body: SimpleTerm) -> Self {
        SimpleTerm::Abs(Hint::new(hint), Box::new(body))
    }

    pub fn app(fun: SimpleTerm, arg: LambdaSum) -> Self {
        SimpleTerm::App(Box::new(fun), arg)
    }

    pub fn is_redex(&self) -> bool {
        matches!(self, SimpleTerm::App(f, _) if matches!(**f, SimpleTerm::Abs(..)))
    }

    pub fn into_sum(self) -> LambdaSum {
        LambdaSum::single(self)
    }

    pub(crate) fn map_vars(&self, depth: usize, f: &impl Fn(&Var, usize) -> Var) -> SimpleTerm {
        match self {
            SimpleTerm::Var(v) => SimpleTerm::Var(f(v, depth)),
            SimpleTerm::Abs(h, body) => SimpleTerm::Abs(h.clone(), Box::new(body.map_vars(depth + 1, f))),
            SimpleTerm::App(fun, arg) => {
                SimpleTerm::App(Box::new(fun.map_vars(depth, f)), arg.map_vars(depth, f))
            }
        }
    }

    pub fn shift(&self, delta: isize, cutoff: usize) -> SimpleTerm {
        self.map_vars(cutoff, &|v, d| match v {
            Var::Bound(i) => Var::Bound(shift_index(*i, delta, d)),
            other => other.clone(),
        })
    }

    /// `self[value / index]`, decrementing the indices above `index`.
    /// Sums introduced under binders or in head position are distributed.
    pub fn subst(&self, index: usize, value: &LambdaSum) -> LambdaSum {
        match self {
            SimpleTerm::Var(Var::Bound(i)) if *i == index => value.shift(index as isize, 0),
            SimpleTerm::Var(Var::Bound(i)) if *i > index => SimpleTerm::bound(i - 1).into_sum(),
            SimpleTerm::Var(_) => self.clone().into_sum(),
            SimpleTerm::Abs(h, body) => body
                .subst(index + 1, value)
                .map_addends(|b| SimpleTerm::Abs(h.clone(), Box::new(b))),
            SimpleTerm::App(fun, arg) => {
                let arg = arg.subst(index, value);
                fun.subst(index, value)
                    .map_addends(|f| SimpleTerm::App(Box::new(f), arg.clone()))
            }
        }
    }

    pub fn free_vars_into(&self, out: &mut BTreeSet<String>) {
        match self {
            SimpleTerm::Var(Var::Free(x)) => {
                out.insert(x.clone());
            }
            SimpleTerm::Var(Var::Bound(_)) => {}
            SimpleTerm::Abs(_, body) => body.free_vars_into(out),
            SimpleTerm::App(f, a) => {
                f.free_vars_into(out);
                a.free_vars_into(out);
            }
        }
    }

    /// True when de Bruijn index `index` (relative to this term) occurs.
    pub fn has_bound(&self, index: usize) -> bool {
        match self {
            SimpleTerm::Var(Var::Bound(i)) => *i == index,
            SimpleTerm::Var(_) => false,
            SimpleTerm::Abs(_, body) => body.has_bound(index + 1),
            SimpleTerm::App(f, a) => f.has_bound(index) || a.has_bound(index),
        }
    }
}

impl LambdaSum {
    pub fn single(term: SimpleTerm) -> Self {
        let mut addends = BTreeMap::new();
        addends.insert(term, 1);
        LambdaSum { addends }
    }

    /// Builds a sum from addends with multiplicities. Panics when the result is empty.
    pub fn from_addends<I>(items: I) -> Self
    where
        I: IntoIterator<Item = (SimpleTerm, usize)>,
    {
        let mut addends = BTreeMap::new();
        for (t, m) in items {
            if m > 0 {
                *addends.entry(t).or_insert(0) += m;
            }
        }
        assert!(!addends.is_empty(), "a lambda sum has at least one addend");
        LambdaSum { addends }
    }

    pub fn try_from_addends<I>(items: I) -> Option<Self>
    where
        I: IntoIterator<Item = (SimpleTerm, usize)>,
    {
        let mut addends = BTreeMap::new();
        for (t, m) in items {
            if m > 0 {
                *addends.entry(t).or_insert(0) += m;
            }
        }
        (!addends.is_empty()).then_some(LambdaSum { addends })
    }

    pub fn var(name: impl Into<String>) -> Self {
        SimpleTerm::var(name).into_sum()
    }

    /// `λx.M` over a body whose index 0 is the new binder; distributes over the sum.
    pub fn abs(hint: &str, body: &LambdaSum) -> Self {
        body.map_addends(|b| SimpleTerm::abs(hint, b))
    }

    /// Binds the free variable `name` in `body`.
    pub fn lambda(name: &str, body: &LambdaSum) -> Self {
        LambdaSum::abs(name, &body.close(name))
    }

    /// `M N`, linear in `M` only.
    pub fn apply(fun: &LambdaSum, arg: &LambdaSum) -> Self {
        fun.map_addends(|f| SimpleTerm::app(f, arg.clone()))
    }

    pub fn plus(&self, other: &LambdaSum) -> Self {
        let mut out = self.clone();
        for (t, m) in other.iter() {
            *out.addends.entry(t.clone()).or_insert(0) += m;
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SimpleTerm, usize)> {
        self.addends.iter().map(|(t, m)| (t, *m))
    }

    /// Addends repeated according to multiplicity.
    pub fn iter_flat(&self) -> impl Iterator<Item = &SimpleTerm> {
        self.addends
            .iter()
            .flat_map(|(t, m)| std::iter::repeat(t).take(*m))
    }

    pub fn distinct_len(&self) -> usize {
        self.addends.len()
    }

    pub fn total_len(&self) -> usize {
        self.addends.values().sum()
    }

    pub fn multiplicity(&self, t: &SimpleTerm) -> usize {
        self.addends.get(t).copied().unwrap_or(0)
    }

    pub fn as_single(&self) -> Option<&SimpleTerm> {
        match self.addends.iter().next() {
            Some((t, 1)) if self.addends.len() == 1 => Some(t),
            _ => None,
        }
    }

    /// Applies `f` to each addend (keeping multiplicities) and re-merges.
    pub fn map_addends(&self, mut f: impl FnMut(SimpleTerm) -> SimpleTerm) -> LambdaSum {
        LambdaSum::from_addends(self.iter().map(|(t, m)| (f(t.clone()), m)))
    }

    /// Like [`LambdaSum::map_addends`], without copying the addends.
    pub fn into_map_addends(self, mut f: impl FnMut(SimpleTerm) -> SimpleTerm) -> LambdaSum {
        LambdaSum::from_addends(self.addends.into_iter().map(|(t, m)| (f(t), m)))
    }

    /// Replaces each addend by a sum (scaled by its multiplicity) and merges.
    pub fn flat_map_addends(&self, mut f: impl FnMut(&SimpleTerm) -> LambdaSum) -> LambdaSum {
        let mut addends: BTreeMap<SimpleTerm, usize> = BTreeMap::new();
        for (t, m) in self.iter() {
            for (u, k) in f(t).iter() {
                match addends.entry(u.clone()) {
                    Entry::Occupied(mut e) => *e.get_mut() += m * k,
                    Entry::Vacant(e) => {
                        e.insert(m * k);
                    }
                }
            }
        }
        LambdaSum { addends }
    }

    pub(crate) fn map_vars(&self, depth: usize, f: &impl Fn(&Var, usize) -> Var) -> LambdaSum {
        self.map_addends(|t| t.map_vars(depth, f))
    }

    pub fn shift(&self, delta: isize, cutoff: usize) -> LambdaSum {
        if delta == 0 {
            return self.clone();
        }
        self.map_addends(|t| t.shift(delta, cutoff))
    }

    pub fn subst(&self, index: usize, value: &LambdaSum) -> LambdaSum {
        self.flat_map_addends(|t| t.subst(index, value))
    }

    /// Replaces index 0 by the free variable `name` (the body of an abstraction becomes open).
    pub fn open(&self, name: &str) -> LambdaSum {
        self.map_vars(0, &|v, d| match v {
            Var::Bound(i) if *i == d => Var::free(name),
            Var::Bound(i) if *i > d => Var::Bound(i - 1),
            other => other.clone(),
        })
    }

    /// Inverse of [`LambdaSum::open`]: the free variable `name` becomes index 0.
    pub fn close(&self, name: &str) -> LambdaSum {
        self.map_vars(0, &|v, d| match v {
            Var::Free(x) if x == name => Var::Bound(d),
            Var::Bound(i) if *i >= d => Var::Bound(i + 1),
            other => other.clone(),
        })
    }

    /// Replaces the dangling indices `0..names.len()` by free variables;
    /// `names.last()` is index 0.
    pub fn instantiate(&self, names: &[String]) -> LambdaSum {
        if names.is_empty() {
            return self.clone();
        }
        let n = names.len();
        self.map_vars(0, &|v, d| match v {
            Var::Bound(i) if *i >= d && *i - d < n => Var::free(names[n - 1 - (*i - d)].clone()),
            Var::Bound(i) if *i >= d => Var::Bound(i - n),
            other => other.clone(),
        })
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.free_vars_into(&mut out);
        out
    }

    pub fn free_vars_into(&self, out: &mut BTreeSet<String>) {
        for (t, _) in self.iter() {
            t.free_vars_into(out);
        }
    }

    pub fn has_bound(&self, index: usize) -> bool {
        self.iter().any(|(t, _)| t.has_bound(index))
    }

    pub fn is_closed_debruijn(&self) -> bool {
        fn dangling(t: &SimpleTerm, depth: usize) -> bool {
            match t {
                SimpleTerm::Var(Var::Bound(i)) => *i >= depth,
                SimpleTerm::Var(_) => false,
                SimpleTerm::Abs(_, b) => dangling(b, depth + 1),
                SimpleTerm::App(f, a) => dangling(f, depth) || a.iter().any(|(u, _)| dangling(u, depth)),
            }
        }
        !self.iter().any(|(t, _)| dangling(t, 0))
    }
}

impl From<SimpleTerm> for LambdaSum {
    fn from(t: SimpleTerm) -> Self {
        LambdaSum::single(t)
    }
}
