use std::collections::BTreeSet;

use crate::names::{shift_index, Hint, Var};

/// A resource term. Bags are multisets stored sorted, so equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RTerm {
    Var(Var),
    Abs(Hint, Box<RTerm>),
    App(Box<RTerm>, Bag),
}

/// A finite multiset of resource terms; the empty bag is the unit `1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bag(Vec<RTerm>);

impl Bag {
    pub fn new(mut items: Vec<RTerm>) -> Self {
        items.sort();
        Bag(items)
    }

    pub fn empty() -> Self {
        Bag(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, RTerm> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[RTerm] {
        &self.0
    }

    /// Distinct elements with their multiplicities, in bag order.
    pub fn grouped(&self) -> Vec<(&RTerm, usize)> {
        let mut out: Vec<(&RTerm, usize)> = Vec::new();
        for t in &self.0 {
            match out.last_mut() {
                Some((u, k)) if *u == t => *k += 1,
                _ => out.push((t, 1)),
            }
        }
        out
    }

    pub fn support(&self) -> BTreeSet<RTerm> {
        self.0.iter().cloned().collect()
    }

    /// The bag with element `i` replaced by `with`.
    pub fn replace(&self, i: usize, with: RTerm) -> Bag {
        let mut items = self.0.clone();
        items[i] = with;
        Bag::new(items)
    }

    pub(crate) fn map(&self, f: impl FnMut(&RTerm) -> RTerm) -> Bag {
        Bag::new(self.0.iter().map(f).collect())
    }
}

impl FromIterator<RTerm> for Bag {
    fn from_iter<I: IntoIterator<Item = RTerm>>(iter: I) -> Self {
        Bag::new(iter.into_iter().collect())
    }
}

impl RTerm {
    pub fn var(name: impl Into<String>) -> Self {
        RTerm::Var(Var::free(name))
    }

    pub fn bound(i: usize) -> Self {
        RTerm::Var(Var::Bound(i))
    }

    pub fn abs(hint: impl Into<String>, body: RTerm) -> Self {
        RTerm::Abs(Hint::new(hint), Box::new(body))
    }

    pub fn app(head: RTerm, bag: Bag) -> Self {
        RTerm::App(Box::new(head), bag)
    }

    /// `λname.body` binding the free variable `name`.
    pub fn lambda(name: &str, body: &RTerm) -> Self {
        RTerm::abs(name, body.close(name))
    }

    pub fn is_redex(&self) -> bool {
        matches!(self, RTerm::App(h, _) if matches!(**h, RTerm::Abs(..)))
    }

    pub(crate) fn map_vars(&self, depth: usize, f: &impl Fn(&Var, usize) -> Var) -> RTerm {
        match self {
            RTerm::Var(v) => RTerm::Var(f(v, depth)),
            RTerm::Abs(h, b) => RTerm::Abs(h.clone(), Box::new(b.map_vars(depth + 1, f))),
            RTerm::App(h, bag) => RTerm::App(Box::new(h.map_vars(depth, f)), bag.map(|u| u.map_vars(depth, f))),
        }
    }

    pub fn shift(&self, delta: isize, cutoff: usize) -> RTerm {
        if delta == 0 {
            return self.clone();
        }
        self.map_vars(cutoff, &|v, d| match v {
            Var::Bound(i) => Var::Bound(shift_index(*i, delta, d)),
            other => other.clone(),
        })
    }

    pub fn open(&self, name: &str) -> RTerm {
        self.map_vars(0, &|v, d| match v {
            Var::Bound(i) if *i == d => Var::free(name),
            Var::Bound(i) if *i > d => Var::Bound(i - 1),
            other => other.clone(),
        })
    }

    pub fn close(&self, name: &str) -> RTerm {
        self.map_vars(0, &|v, d| match v {
            Var::Free(x) if x == name => Var::Bound(d),
            Var::Bound(i) if *i >= d => Var::Bound(i + 1),
            other => other.clone(),
        })
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.free_vars_into(&mut out);
        out
    }

    pub fn free_vars_into(&self, out: &mut BTreeSet<String>) {
        match self {
            RTerm::Var(Var::Free(x)) => {
                out.insert(x.clone());
            }
            RTerm::Var(Var::Bound(_)) => {}
            RTerm::Abs(_, b) => b.free_vars_into(out),
            RTerm::App(h, bag) => {
                h.free_vars_into(out);
                for u in bag.iter() {
                    u.free_vars_into(out);
                }
            }
        }
    }

    /// Whether index `index` occurs, i.e. whether shifting down across it is safe.
    pub fn has_bound_below(&self, limit: usize) -> bool {
        fn go(t: &RTerm, depth: usize, limit: usize) -> bool {
            match t {
                RTerm::Var(Var::Bound(i)) => *i >= depth && *i < depth + limit,
                RTerm::Var(_) => false,
                RTerm::Abs(_, b) => go(b, depth + 1, limit),
                RTerm::App(h, bag) => go(h, depth, limit) || bag.iter().any(|u| go(u, depth, limit)),
            }
        }
        go(self, 0, limit)
    }

    pub fn height(&self) -> usize {
        match self {
            RTerm::Var(_) => 1,
            RTerm::Abs(_, b) => 1 + b.height(),
            RTerm::App(h, bag) => 1 + bag.iter().map(RTerm::height).chain([h.height()]).max().unwrap_or(0),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            RTerm::Var(_) => 1,
            RTerm::Abs(_, b) => 1 + b.size(),
            RTerm::App(h, bag) => 1 + h.size() + bag.iter().map(RTerm::size).sum::<usize>(),
        }
    }

    /// Every bag, at every depth, has exactly one element.
    pub fn is_linear(&self) -> bool {
        match self {
            RTerm::Var(_) => true,
            RTerm::Abs(_, b) => b.is_linear(),
            RTerm::App(h, bag) => bag.len() == 1 && h.is_linear() && bag.iter().all(RTerm::is_linear),
        }
    }

    /// Largest bag cardinality occurring in the term (0 when there is no application).
    pub fn max_bag(&self) -> usize {
        match self {
            RTerm::Var(_) => 0,
            RTerm::Abs(_, b) => b.max_bag(),
            RTerm::App(h, bag) => bag
                .iter()
                .map(RTerm::max_bag)
                .chain([h.max_bag(), bag.len()])
                .max()
                .unwrap_or(0),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RTermMetrics {
    pub height: usize,
    pub size: usize,
    pub free_vars: BTreeSet<String>,
    pub is_linear: bool,
}

pub fn rterm_metrics(t: &RTerm) -> RTermMetrics {
    RTermMetrics {
        height: t.height(),
        size: t.size(),
        free_vars: t.free_vars(),
        is_linear: t.is_linear(),
    }
}

/// Immediate subterm projections of a resource term.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Projections {
    /// Body of an abstraction, with its binder opened to `binder`.
    pub pi_x: Option<(String, RTerm)>,
    pub pi_0: Option<RTerm>,
    pub pi_1: BTreeSet<RTerm>,
    pub mpi_1: Option<Bag>,
}

pub fn projections(t: &RTerm) -> Projections {
    match t {
        RTerm::Var(_) => Projections::default(),
        RTerm::Abs(h, b) => {
            let x = crate::names::fresh_name(h.as_str(), &t.free_vars());
            Projections {
                pi_x: Some((x.clone(), b.open(&x))),
                ..Projections::default()
            }
        }
        RTerm::App(h, bag) => Projections {
            pi_0: Some((**h).clone()),
            pi_1: bag.support(),
            mpi_1: Some(bag.clone()),
            ..Projections::default()
        },
    }
}
