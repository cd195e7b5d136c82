use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::lambda::{LambdaSum, SimpleTerm};
use crate::resource::{Bag, RTerm};

/// Truncation of the (infinite) Taylor support.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SupportQuery {
    /// Largest bag cardinality allowed anywhere in a term.
    pub bag_bound: usize,
    pub height_bound: Option<usize>,
}

impl SupportQuery {
    pub fn bags(bag_bound: usize) -> Self {
        SupportQuery {
            bag_bound,
            height_bound: None,
        }
    }
}

/// All multisets over `items` with cardinality in `sizes`, as sorted vectors.
pub(crate) fn multisets<T: Clone>(items: &[T], sizes: std::ops::RangeInclusive<usize>) -> Vec<Vec<T>> {
    fn go<T: Clone>(items: &[T], from: usize, left: usize, cur: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in from..items.len() {
            cur.push(items[i].clone());
            go(items, i, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for n in sizes {
        go(items, 0, n, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

/// Number of multisets over `n` items with cardinality in `sizes`, saturating.
fn multiset_count(n: usize, sizes: std::ops::RangeInclusive<usize>) -> usize {
    let mut total: u128 = 0;
    for k in sizes {
        // C(n + k - 1, k)
        let mut c: u128 = 1;
        for i in 0..k as u128 {
            c = c.saturating_mul(n as u128 + i) / (i + 1);
        }
        total = total.saturating_add(if n == 0 && k > 0 { 0 } else { c });
    }
    usize::try_from(total).unwrap_or(usize::MAX)
}

struct Enumerator {
    bags: std::ops::RangeInclusive<usize>,
    limit: usize,
    produced: usize,
}

impl Enumerator {
    fn charge(&mut self, n: usize) -> Result<()> {
        self.produced += n;
        if self.produced > self.limit {
            return Err(Error::Budget(format!(
                "support enumeration exceeded {} terms",
                self.limit
            )));
        }
        Ok(())
    }

    fn sum(&mut self, m: &LambdaSum, height: Option<usize>) -> Result<BTreeSet<RTerm>> {
        let mut out = BTreeSet::new();
        for (t, _) in m.iter() {
            out.extend(self.simple(t, height)?);
        }
        Ok(out)
    }

    fn simple(&mut self, t: &SimpleTerm, height: Option<usize>) -> Result<BTreeSet<RTerm>> {
        if height == Some(0) {
            return Ok(BTreeSet::new());
        }
        let below = height.map(|h| h - 1);
        let out: BTreeSet<RTerm> = match t {
            SimpleTerm::Var(v) => BTreeSet::from([RTerm::Var(v.clone())]),
            SimpleTerm::Abs(h, b) => self
                .simple(b, below)?
                .into_iter()
                .map(|s| RTerm::Abs(h.clone(), Box::new(s)))
                .collect(),
            SimpleTerm::App(f, arg) => {
                let heads = self.simple(f, below)?;
                if heads.is_empty() {
                    return Ok(BTreeSet::new());
                }
                let elems: Vec<RTerm> = self.sum(arg, below)?.into_iter().collect();
                self.charge(heads.len().saturating_mul(multiset_count(elems.len(), self.bags.clone())))?;
                let bags = multisets(&elems, self.bags.clone());
                let mut out = BTreeSet::new();
                for s in &heads {
                    for b in &bags {
                        out.insert(RTerm::app(s.clone(), Bag::new(b.clone())));
                    }
                }
                out
            }
        };
        self.charge(out.len())?;
        Ok(out)
    }
}

/// `{ t ∈ ℳ(m) | bags of t ≤ bag_bound, h(t) ≤ height_bound }`.
pub fn support_enum(m: &LambdaSum, q: SupportQuery) -> BTreeSet<RTerm> {
    support_enum_limited(m, q, usize::MAX).expect("unbounded enumeration")
}

/// As [`support_enum`], failing once more than `limit` terms have been built.
pub fn support_enum_limited(m: &LambdaSum, q: SupportQuery, limit: usize) -> Result<BTreeSet<RTerm>> {
    let mut e = Enumerator {
        bags: 0..=q.bag_bound,
        limit,
        produced: 0,
    };
    e.sum(m, q.height_bound)
}

/// The linear expansion ℓ(m): support terms whose bags all have exactly one element.
pub fn linear_expansion(m: &LambdaSum) -> BTreeSet<RTerm> {
    let mut e = Enumerator {
        bags: 1..=1,
        limit: usize::MAX,
        produced: 0,
    };
    e.sum(m, None).expect("unbounded enumeration")
}

/// `t ∈ ℳ(m)`, by structural matching.
pub fn in_support(m: &LambdaSum, t: &RTerm) -> bool {
    m.iter().any(|(a, _)| in_support_simple(a, t))
}

pub fn in_support_simple(a: &SimpleTerm, t: &RTerm) -> bool {
    match (a, t) {
        (SimpleTerm::Var(v), RTerm::Var(w)) => v == w,
        (SimpleTerm::Abs(_, b), RTerm::Abs(_, s)) => in_support_simple(b, s),
        (SimpleTerm::App(f, arg), RTerm::App(s, bag)) => {
            in_support_simple(f, s) && bag.iter().all(|u| in_support(arg, u))
        }
        _ => false,
    }
}
