//! Differential substitution and resource reduction.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::names::Var;
use crate::resource::combination::Combination;
use crate::resource::rig::Rig;
use crate::resource::term::{Bag, RTerm};

/// Multiset of terms with natural multiplicities, the rig-free result of firing.
pub type Counts = BTreeMap<RTerm, BigUint>;

#[derive(Clone, Copy)]
enum Target<'a> {
    Free(&'a str),
    /// The variable bound by an abstraction being fired; at depth `d` it is index `d`,
    /// and every index above it loses one binder.
    Binder,
}

fn is_occurrence(v: &Var, target: Target, depth: usize) -> bool {
    match (v, target) {
        (Var::Free(x), Target::Free(y)) => x == y,
        (Var::Bound(i), Target::Binder) => *i == depth,
        _ => false,
    }
}

fn count_occurrences(t: &RTerm, target: Target, depth: usize) -> usize {
    match t {
        RTerm::Var(v) => usize::from(is_occurrence(v, target, depth)),
        RTerm::Abs(_, b) => count_occurrences(b, target, depth + 1),
        RTerm::App(h, bag) => {
            count_occurrences(h, target, depth)
                + bag.iter().map(|u| count_occurrences(u, target, depth)).sum::<usize>()
        }
    }
}

/// Replaces occurrences left to right (head before bag, bag in canonical order)
/// with `slots[next..]`.
fn fill(t: &RTerm, target: Target, depth: usize, slots: &[&RTerm], next: &mut usize) -> RTerm {
    match t {
        RTerm::Var(v) if is_occurrence(v, target, depth) => {
            let u = slots[*next];
            *next += 1;
            u.shift(depth as isize, 0)
        }
        RTerm::Var(Var::Bound(i)) if matches!(target, Target::Binder) && *i > depth => RTerm::bound(i - 1),
        RTerm::Var(_) => t.clone(),
        RTerm::Abs(h, b) => RTerm::Abs(h.clone(), Box::new(fill(b, target, depth + 1, slots, next))),
        RTerm::App(h, bag) => {
            let head = fill(h, target, depth, slots, next);
            let items: Vec<RTerm> = bag.iter().map(|u| fill(u, target, depth, slots, next)).collect();
            RTerm::app(head, Bag::new(items))
        }
    }
}

/// Visits every distinct arrangement of a multiset (given as groups) as a sequence.
fn arrangements<'a>(groups: &mut [(&'a RTerm, usize)], seq: &mut Vec<&'a RTerm>, n: usize, visit: &mut impl FnMut(&[&'a RTerm])) {
    if seq.len() == n {
        visit(seq);
        return;
    }
    for g in 0..groups.len() {
        if groups[g].1 == 0 {
            continue;
        }
        groups[g].1 -= 1;
        seq.push(groups[g].0);
        arrangements(groups, seq, n, visit);
        seq.pop();
        groups[g].1 += 1;
    }
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

fn dsubst_counts(t: &RTerm, target: Target, bag: &Bag) -> Counts {
    let mut out = Counts::new();
    let n = bag.len();
    if count_occurrences(t, target, 0) != n {
        return out;
    }
    let mut groups = bag.grouped();
    // Each distinct arrangement is realised by ∏ μ! permutations of the bag.
    let weight = groups.iter().fold(BigUint::one(), |acc, (_, m)| acc * factorial(*m));
    arrangements(&mut groups, &mut Vec::with_capacity(n), n, &mut |seq| {
        let mut next = 0;
        let r = fill(t, target, 0, seq, &mut next);
        *out.entry(r).or_default() += &weight;
    });
    out
}

fn counts_in(rig: Rig, counts: Counts) -> Combination {
    Combination::from_terms(rig, counts.into_iter().map(|(t, k)| (t, rig.from_count(&k))))
}

/// Number of free occurrences of `x`.
pub fn degree(t: &RTerm, x: &str) -> usize {
    count_occurrences(t, Target::Free(x), 0)
}

/// Differential substitution `t⟨bag/x⟩`.
pub fn dsubst(t: &RTerm, x: &str, bag: &Bag, rig: Rig) -> Combination {
    counts_in(rig, dsubst_counts(t, Target::Free(x), bag))
}

/// One step into a resource term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RStep {
    Body,
    Head,
    Bag(usize),
}

/// Position of a subterm, as a path from the root.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RPath(pub Vec<RStep>);

impl fmt::Display for RPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|s| match s {
                RStep::Body => "λ".to_string(),
                RStep::Head => "0".to_string(),
                RStep::Bag(i) => format!("{}", i + 1),
            })
            .collect();
        f.write_str(&parts.join("."))
    }
}

/// Redex positions in leftmost-outermost order.
pub fn redexes(t: &RTerm) -> Vec<RPath> {
    fn go(t: &RTerm, path: &mut Vec<RStep>, out: &mut Vec<RPath>) {
        if t.is_redex() {
            out.push(RPath(path.clone()));
        }
        match t {
            RTerm::Var(_) => {}
            RTerm::Abs(_, b) => {
                path.push(RStep::Body);
                go(b, path, out);
                path.pop();
            }
            RTerm::App(h, bag) => {
                path.push(RStep::Head);
                go(h, path, out);
                path.pop();
                for (i, u) in bag.iter().enumerate() {
                    path.push(RStep::Bag(i));
                    go(u, path, out);
                    path.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    go(t, &mut Vec::new(), &mut out);
    out
}

pub fn first_redex(t: &RTerm) -> Option<RPath> {
    fn go(t: &RTerm, path: &mut Vec<RStep>) -> bool {
        if t.is_redex() {
            return true;
        }
        match t {
            RTerm::Var(_) => false,
            RTerm::Abs(_, b) => {
                path.push(RStep::Body);
                go(b, path) || {
                    path.pop();
                    false
                }
            }
            RTerm::App(h, bag) => {
                path.push(RStep::Head);
                if go(h, path) {
                    return true;
                }
                path.pop();
                for (i, u) in bag.iter().enumerate() {
                    path.push(RStep::Bag(i));
                    if go(u, path) {
                        return true;
                    }
                    path.pop();
                }
                false
            }
        }
    }
    let mut path = Vec::new();
    go(t, &mut path).then_some(RPath(path))
}

pub fn is_normal(t: &RTerm) -> bool {
    match t {
        RTerm::Var(_) => true,
        RTerm::Abs(_, b) => is_normal(b),
        RTerm::App(h, bag) => !t.is_redex() && is_normal(h) && bag.iter().all(is_normal),
    }
}

/// Fires the redex at `path`; `None` if there is no redex there.
pub fn fire_at(t: &RTerm, path: &[RStep]) -> Option<Counts> {
    let Some((step, rest)) = path.split_first() else {
        return match t {
            RTerm::App(h, bag) => match &**h {
                RTerm::Abs(_, body) => Some(dsubst_counts(body, Target::Binder, bag)),
                _ => None,
            },
            _ => None,
        };
    };
    let wrap = |inner: Counts, f: &dyn Fn(RTerm) -> RTerm| -> Counts {
        let mut out = Counts::new();
        for (u, k) in inner {
            *out.entry(f(u)).or_default() += k;
        }
        out
    };
    match (step, t) {
        (RStep::Body, RTerm::Abs(h, b)) => {
            let inner = fire_at(b, rest)?;
            Some(wrap(inner, &|u| RTerm::Abs(h.clone(), Box::new(u))))
        }
        (RStep::Head, RTerm::App(h, bag)) => {
            let inner = fire_at(h, rest)?;
            Some(wrap(inner, &|u| RTerm::app(u, bag.clone())))
        }
        (RStep::Bag(i), RTerm::App(h, bag)) if *i < bag.len() => {
            let inner = fire_at(&bag.as_slice()[*i], rest)?;
            Some(wrap(inner, &|u| RTerm::app((**h).clone(), bag.replace(*i, u))))
        }
        _ => None,
    }
}

/// Every single-redex step from `t`, with the resulting combination in `rig`.
pub fn red_reducts(t: &RTerm, rig: Rig) -> Vec<(RPath, Combination)> {
    redexes(t)
        .into_iter()
        .map(|p| {
            let c = fire_at(t, &p.0).expect("redex position");
            (p, counts_in(rig, c))
        })
        .collect()
}

/// Normal form of a single term as natural multiplicities.
pub fn nf_counts(t: &RTerm) -> Counts {
    nf_counts_memo(t, &mut HashMap::new())
}

pub(crate) fn nf_counts_memo(t: &RTerm, memo: &mut HashMap<RTerm, Counts>) -> Counts {
    if let Some(c) = memo.get(t) {
        return c.clone();
    }
    let out = match first_redex(t) {
        None => Counts::from([(t.clone(), BigUint::one())]),
        Some(p) => {
            let mut out = Counts::new();
            for (u, k) in fire_at(t, &p.0).expect("redex position") {
                for (v, j) in nf_counts_memo(&u, memo) {
                    *out.entry(v).or_default() += &k * j;
                }
            }
            out
        }
    };
    memo.insert(t.clone(), out.clone());
    out
}

/// `NF(a) = Σ a_t · NF(t)`, leftmost-outermost in every support term.
pub fn nf(a: &Combination) -> Combination {
    let mut memo = HashMap::new();
    let rig = a.rig();
    a.flat_map(|t| counts_in(rig, nf_counts_memo(t, &mut memo)))
}

pub fn nf_term(t: &RTerm, rig: Rig) -> Combination {
    counts_in(rig, nf_counts(t))
}

/// Terms occurring in the support of one-step reducts of `t`.
pub fn successors(t: &RTerm) -> BTreeSet<RTerm> {
    let mut out = BTreeSet::new();
    for p in redexes(t) {
        out.extend(fire_at(t, &p.0).expect("redex position").into_keys());
    }
    out
}

/// `{ s | t ⊒ s }`.
pub fn reach(t: &RTerm) -> BTreeSet<RTerm> {
    let mut seen = BTreeSet::from([t.clone()]);
    let mut todo = vec![t.clone()];
    while let Some(u) = todo.pop() {
        for v in successors(&u) {
            if seen.insert(v.clone()) {
                todo.push(v);
            }
        }
    }
    seen
}

/// `t ⊒ s`. Reduction never grows a term nor changes its free variables,
/// which prunes the search.
pub fn reduces_to(t: &RTerm, s: &RTerm) -> bool {
    let size = s.size();
    let fv = s.free_vars();
    let mut seen = BTreeSet::new();
    let mut todo = vec![t.clone()];
    while let Some(u) = todo.pop() {
        if u == *s {
            return true;
        }
        if u.size() <= size || !fv.is_subset(&u.free_vars()) || !seen.insert(u.clone()) {
            continue;
        }
        todo.extend(successors(&u).into_iter().filter(|v| !seen.contains(v)));
    }
    false
}

/// `t ⊐ s`.
pub fn reduces_strictly_to(t: &RTerm, s: &RTerm) -> bool {
    t != s && reduces_to(t, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resource::parse_resource;
    use num_traits::Zero;

    fn r(s: &str) -> RTerm {
        parse_resource(s).unwrap()
    }

    fn nat(n: u32) -> crate::resource::Coeff {
        Rig::Nat.from_count(&BigUint::from(n))
    }

    #[test]
    fn degrees() {
        assert_eq!(degree(&r("x [x]"), "x"), 2);
        assert_eq!(degree(&r("\\x. x"), "x"), 0);
        assert_eq!(degree(&r("x [x, x]"), "x"), 3);
    }

    #[test]
    fn dsubst_enumerates_bijections() {
        let c = dsubst(&r("x [x]"), "x", &Bag::new(vec![r("y"), r("z")]), Rig::Nat);
        assert_eq!(c.len(), 2);
        assert_eq!(c.coeff(&r("y [z]")), nat(1));
        assert_eq!(c.coeff(&r("z [y]")), nat(1));
        let c = dsubst(&r("x"), "x", &Bag::new(vec![r("y")]), Rig::Nat);
        assert_eq!(c, Combination::single(Rig::Nat, r("y")));
        assert!(dsubst(&r("x []"), "x", &Bag::empty(), Rig::Nat).is_zero());
    }

    #[test]
    fn dsubst_groups_repeated_elements() {
        let c = dsubst(&r("x [x, x]"), "x", &Bag::new(vec![r("y"), r("y"), r("z")]), Rig::Nat);
        assert_eq!(c.coeff(&r("y [y, z]")), nat(4));
        assert_eq!(c.coeff(&r("z [y, y]")), nat(2));
    }

    #[test]
    fn firing_examples() {
        let t = r("(\\x. x [x]) [\\x. x, \\x. x]");
        let steps = red_reducts(&t, Rig::Nat);
        assert_eq!(steps.len(), 1);
        assert_eq!(steps[0].1, Combination::from_terms(Rig::Nat, [(r("(\\x. x) [\\x. x]"), nat(2))]));
        let d = r("(\\x. x [x]) [\\x. x []]");
        assert!(red_reducts(&d, Rig::Nat)[0].1.is_zero());
        assert!(red_reducts(&r("x"), Rig::Nat).is_empty());
    }

    #[test]
    fn substitution_under_binders_shifts() {
        // (λx.λy.⟨x⟩[y]) [z] → λy.⟨z⟩[y]
        let t = r("(\\x y. x [y]) [z]");
        let out = nf_term(&t, Rig::Nat);
        assert_eq!(out, Combination::single(Rig::Nat, r("\\y. z [y]")));
        // a bound argument crossing a binder: λw.(λx.λy.⟨x⟩[y])[w] → λw.λy.⟨w⟩[y]
        let t = r("\\w. (\\x y. x [y]) [w]");
        assert_eq!(nf_term(&t, Rig::Nat), Combination::single(Rig::Nat, r("\\w y. w [y]")));
    }

    #[test]
    fn normal_forms() {
        let t = r("(\\x. x [x]) [\\x. x, \\x. x]");
        assert_eq!(nf(&Combination::single(Rig::Nat, t)), Combination::from_terms(Rig::Nat, [(r("\\x. x"), nat(2))]));
        let d = r("(\\x. x [x]) [\\x. x [], \\x. x []]");
        assert!(nf(&Combination::single(Rig::Nat, d)).is_zero());
        assert_eq!(nf_term(&r("x"), Rig::Nat), Combination::single(Rig::Nat, r("x")));
        assert!(!nf_term(&r("x"), Rig::Nat).coeff(&r("x")).is_zero());
    }

    #[test]
    fn reach_examples() {
        let d = r("(\\x. x [x]) [\\x. x []]");
        assert_eq!(reach(&d), BTreeSet::from([d.clone()]));
        assert_eq!(reach(&r("x")), BTreeSet::from([r("x")]));
        let d = r("(\\x. x [x]) [\\x. x [], \\x. x []]");
        let expected = BTreeSet::from([d.clone(), r("(\\x. x []) [\\x. x []]"), r("(\\x. x []) []")]);
        assert_eq!(reach(&d), expected);
    }

    #[test]
    fn order_examples() {
        let i = r("\\x. x");
        let ii = r("(\\x. x) [\\x. x]");
        assert!(reduces_to(&ii, &i));
        assert!(reduces_to(&ii, &ii));
        assert!(!reduces_to(&i, &ii));
        assert!(!reduces_strictly_to(&ii, &ii));
    }

    #[test]
    fn paths_print() {
        let t = r("x [(\\y. y) [z]]");
        assert_eq!(redexes(&t)[0].to_string(), "1");
    }
}
