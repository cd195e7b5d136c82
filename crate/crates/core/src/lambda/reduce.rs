//! β-reduction on canonical sums, the erasure order ⊴ and partial reduction ⇝.

use std::collections::{BTreeMap, BTreeSet};

use crate::lambda::term::{LambdaSum, SimpleTerm};

/// One step into a simple term. `Arg(i)` selects the i-th distinct addend of the argument.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Step {
    Body,
    Fun,
    Arg(usize),
}

/// Location of a redex: an addend of the sum (by distinct index) and a path inside it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RedexPath {
    pub addend: usize,
    pub steps: Vec<Step>,
}

impl LambdaSum {
    /// Removes one copy of `t`; `None` when nothing would remain.
    pub fn remove_one(&self, t: &SimpleTerm) -> Option<LambdaSum> {
        LambdaSum::try_from_addends(self.iter().map(|(u, m)| {
            if u == t {
                (u.clone(), m - 1)
            } else {
                (u.clone(), m)
            }
        }))
    }

    fn replace_one(&self, t: &SimpleTerm, with: &LambdaSum) -> LambdaSum {
        match self.remove_one(t) {
            Some(rest) => rest.plus(with),
            None => with.clone(),
        }
    }

    pub fn nth_addend(&self, i: usize) -> Option<&SimpleTerm> {
        self.iter().nth(i).map(|(t, _)| t)
    }
}

fn simple_redexes(t: &SimpleTerm, prefix: &mut Vec<Step>, out: &mut Vec<Vec<Step>>) {
    if t.is_redex() {
        out.push(prefix.clone());
    }
    match t {
        SimpleTerm::Var(_) => {}
        SimpleTerm::Abs(_, body) => {
            prefix.push(Step::Body);
            simple_redexes(body, prefix, out);
            prefix.pop();
        }
        SimpleTerm::App(f, arg) => {
            prefix.push(Step::Fun);
            simple_redexes(f, prefix, out);
            prefix.pop();
            for (i, (a, _)) in arg.iter().enumerate() {
                prefix.push(Step::Arg(i));
                simple_redexes(a, prefix, out);
                prefix.pop();
            }
        }
    }
}

/// All redex positions, leftmost-outermost first.
pub fn redex_paths(m: &LambdaSum) -> Vec<RedexPath> {
    let mut out = Vec::new();
    for (i, (t, _)) in m.iter().enumerate() {
        let mut found = Vec::new();
        simple_redexes(t, &mut Vec::new(), &mut found);
        out.extend(found.into_iter().map(|steps| RedexPath { addend: i, steps }));
    }
    out
}

pub(crate) fn reduce_simple_at(t: &SimpleTerm, steps: &[Step]) -> LambdaSum {
    match (steps.split_first(), t) {
        (None, SimpleTerm::App(f, arg)) => match &**f {
            SimpleTerm::Abs(_, body) => body.subst(0, arg),
            _ => panic!("path does not point at a redex"),
        },
        (Some((Step::Body, rest)), SimpleTerm::Abs(h, body)) => {
            reduce_simple_at(body, rest).into_map_addends(|b| SimpleTerm::Abs(h.clone(), Box::new(b)))
        }
        (Some((Step::Fun, rest)), SimpleTerm::App(f, arg)) => {
            reduce_simple_at(f, rest).into_map_addends(|g| SimpleTerm::App(Box::new(g), arg.clone()))
        }
        (Some((Step::Arg(i), rest)), SimpleTerm::App(f, arg)) => {
            let a = arg.nth_addend(*i).expect("argument addend index");
            let reduced = reduce_simple_at(a, rest);
            SimpleTerm::App(f.clone(), arg.replace_one(a, &reduced)).into_sum()
        }
        _ => panic!("path does not match term shape"),
    }
}

/// Fires the redex at `path`, reducing one copy of the selected addend.
pub fn reduce_at(m: &LambdaSum, path: &RedexPath) -> LambdaSum {
    let t = m.nth_addend(path.addend).expect("addend index");
    let reduced = reduce_simple_at(t, &path.steps);
    m.replace_one(t, &reduced)
}

pub fn beta_steps(m: &LambdaSum) -> Vec<(RedexPath, LambdaSum)> {
    redex_paths(m)
        .into_iter()
        .map(|p| {
            let r = reduce_at(m, &p);
            (p, r)
        })
        .collect()
}

/// Every one-step β-reduct of `m`.
pub fn beta_reducts(m: &LambdaSum) -> BTreeSet<LambdaSum> {
    beta_steps(m).into_iter().map(|(_, r)| r).collect()
}

fn simple_le(n: &SimpleTerm, m: &SimpleTerm) -> bool {
    match (n, m) {
        (SimpleTerm::Var(a), SimpleTerm::Var(b)) => a == b,
        (SimpleTerm::Abs(_, a), SimpleTerm::Abs(_, b)) => simple_le(a, b),
        (SimpleTerm::App(f, a), SimpleTerm::App(g, b)) => simple_le(f, g) && erasure_le(a, b),
        _ => false,
    }
}

/// `n ⊴ m`: `n` is obtained from `m` by dropping addends of sums, at any depth.
pub fn erasure_le(n: &LambdaSum, m: &LambdaSum) -> bool {
    let small: Vec<&SimpleTerm> = n.iter_flat().collect();
    let big: Vec<&SimpleTerm> = m.iter_flat().collect();
    if small.len() > big.len() {
        return false;
    }
    let mut used = vec![false; big.len()];
    embed(&small, &big, &mut used)
}

fn embed(small: &[&SimpleTerm], big: &[&SimpleTerm], used: &mut [bool]) -> bool {
    let Some((first, rest)) = small.split_first() else {
        return true;
    };
    for j in 0..big.len() {
        if used[j] || (j > 0 && big[j] == big[j - 1] && !used[j - 1]) {
            continue;
        }
        if simple_le(first, big[j]) {
            used[j] = true;
            if embed(rest, big, used) {
                return true;
            }
            used[j] = false;
        }
    }
    false
}

/// The finite ⊴-downset of a simple term; every element is again simple.
pub fn downset_simple(t: &SimpleTerm) -> BTreeSet<SimpleTerm> {
    match t {
        SimpleTerm::Var(_) => BTreeSet::from([t.clone()]),
        SimpleTerm::Abs(h, body) => downset_simple(body)
            .into_iter()
            .map(|b| SimpleTerm::Abs(h.clone(), Box::new(b)))
            .collect(),
        SimpleTerm::App(f, arg) => {
            let heads = downset_simple(f);
            let args = downset(arg);
            let mut out = BTreeSet::new();
            for h in &heads {
                for a in &args {
                    out.insert(SimpleTerm::App(Box::new(h.clone()), a.clone()));
                }
            }
            out
        }
    }
}

/// The finite ⊴-downset `{ n | n ⊴ m }`, including `m`.
pub fn downset(m: &LambdaSum) -> BTreeSet<LambdaSum> {
    // Partial multisets of addends, built addend class by addend class.
    let mut partials: BTreeSet<Vec<(SimpleTerm, usize)>> = BTreeSet::from([Vec::new()]);
    for (t, mult) in m.iter() {
        let below: Vec<SimpleTerm> = downset_simple(t).into_iter().collect();
        let choices = multisets_up_to(&below, mult);
        let mut next = BTreeSet::new();
        for p in &partials {
            for c in &choices {
                let mut q = p.clone();
                q.extend(c.iter().cloned());
                q.sort();
                next.insert(q);
            }
        }
        partials = next;
    }
    partials
        .into_iter()
        .filter_map(LambdaSum::try_from_addends)
        .collect()
}

/// Multisets of size `0..=max` over `items`, as (item, count) lists.
fn multisets_up_to(items: &[SimpleTerm], max: usize) -> Vec<Vec<(SimpleTerm, usize)>> {
    fn go(
        items: &[SimpleTerm],
        left: usize,
        cur: &mut Vec<(SimpleTerm, usize)>,
        out: &mut Vec<Vec<(SimpleTerm, usize)>>,
    ) {
        let Some((first, rest)) = items.split_first() else {
            out.push(cur.clone());
            return;
        };
        for k in 0..=left {
            if k > 0 {
                cur.push((first.clone(), k));
            }
            go(rest, left - k, cur, out);
            if k > 0 {
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(items, max, &mut Vec::new(), &mut out);
    out
}

/// One partial-reduction edge `m →β reduct ⊵ target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialStep {
    pub path: RedexPath,
    pub reduct: LambdaSum,
    pub target: LambdaSum,
    pub top_level: bool,
}

pub fn partial_steps(m: &LambdaSum) -> Vec<PartialStep> {
    let root_redex = m.as_single().is_some_and(SimpleTerm::is_redex);
    let mut out = Vec::new();
    for (path, reduct) in beta_steps(m) {
        let top_level = root_redex && path.steps.is_empty();
        for target in downset(&reduct) {
            out.push(PartialStep {
                path: path.clone(),
                reduct: reduct.clone(),
                target,
                top_level,
            });
        }
    }
    out
}

/// `{ (n, top) | m ⇝ n }`, with `top` set when some generating step is at top level.
pub fn partial_reducts(m: &LambdaSum) -> Vec<(LambdaSum, bool)> {
    let mut acc: BTreeMap<LambdaSum, bool> = BTreeMap::new();
    for step in partial_steps(m) {
        *acc.entry(step.target).or_insert(false) |= step.top_level;
    }
    acc.into_iter().collect()
}

/// Leftmost-outermost β-normalization within `fuel` steps.
/// Returns the normal form and the number of steps, or `None` when fuel runs out.
pub fn normalize(m: &LambdaSum, fuel: usize) -> Option<(LambdaSum, usize)> {
    let mut cur = m.clone();
    for steps in 0..=fuel {
        match redex_paths(&cur).into_iter().next() {
            None => return Some((cur, steps)),
            Some(p) if steps < fuel => cur = reduce_at(&cur, &p),
            Some(_) => break,
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::parse_lambda;

    fn p(s: &str) -> LambdaSum {
        parse_lambda(s).unwrap()
    }

    #[test]
    fn omega_reduces_to_itself() {
        let omega = p("(\\x. x x) (\\x. x x)");
        assert_eq!(beta_reducts(&omega), BTreeSet::from([omega.clone()]));
    }

    #[test]
    fn sum_redexes_reduce_independently() {
        let m = p("(\\x. x + y) z");
        let expected = BTreeSet::from([p("z + (\\x. y) z"), p("(\\x. x) z + y")]);
        assert_eq!(beta_reducts(&m), expected);
    }

    #[test]
    fn variable_has_no_reduct() {
        assert!(beta_reducts(&p("y")).is_empty());
        assert!(partial_reducts(&p("y")).is_empty());
    }

    #[test]
    fn reducing_one_copy_of_a_repeated_addend() {
        let m = p("(\\x. x) y + (\\x. x) y");
        assert_eq!(beta_reducts(&m), BTreeSet::from([p("y + (\\x. x) y")]));
    }

    #[test]
    fn substituting_a_sum_in_head_position_distributes() {
        let m = p("(\\f. f a) (u + v)");
        assert_eq!(beta_reducts(&m), BTreeSet::from([p("u a + v a")]));
    }

    #[test]
    fn erasure_examples() {
        assert!(erasure_le(&p("y"), &p("y + z")));
        let m = p("(\\x. x) w + (\\x. y) w");
        assert!(erasure_le(&m, &m));
        assert!(erasure_le(&p("(\\x. x) w"), &p("(\\x. x + y) w")));
        assert!(!erasure_le(&p("y + y"), &p("y + z")));
        assert!(erasure_le(&p("f y"), &p("f (y + z)")));
        assert!(!erasure_le(&p("f (y + z)"), &p("f y")));
    }

    #[test]
    fn downset_of_argument_sum() {
        let d = downset(&p("f (y + z)"));
        assert_eq!(d, BTreeSet::from([p("f y"), p("f z"), p("f (y + z)")]));
        for n in &d {
            assert!(erasure_le(n, &p("f (y + z)")));
        }
    }

    #[test]
    fn partial_reducts_of_sum_redex() {
        let reducts: BTreeSet<LambdaSum> =
            partial_reducts(&p("(\\x. x + y) z")).into_iter().map(|(n, _)| n).collect();
        for expected in ["z", "y", "z + (\\x. y) z", "(\\x. x) z + y", "(\\x. x) z", "(\\x. y) z"] {
            assert!(reducts.contains(&p(expected)), "missing {expected}");
        }
        // a sum is never top level
        assert!(partial_reducts(&p("(\\x. x + y) z")).iter().all(|(_, top)| !top));
        assert!(partial_reducts(&p("(\\x. x) z")).iter().all(|(_, top)| *top));
    }

    #[test]
    fn normal_order_normalization() {
        let (nf, steps) = normalize(&p("(\\x. x x) (\\y. y)"), 10).unwrap();
        assert_eq!(nf, p("\\y. y"));
        assert_eq!(steps, 2);
        assert!(normalize(&p("(\\x. x x) (\\x. x x)"), 50).is_none());
        let (nf, _) = normalize(&p("(\\x y. x) a ((\\x. x x) (\\x. x x))"), 10).unwrap();
        assert_eq!(nf, p("a"));
    }
}
