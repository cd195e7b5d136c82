//! Lifting resource terms backwards along β-steps: given `m →β m'` and
//! `t ∈ ℳ(m')`, build `s ∈ ℳ(m)` with `s ⊒ t`.

use crate::lambda::{LambdaSum, RedexPath, SimpleTerm, Step};
use crate::names::Var;
use crate::resource::{Bag, RTerm};
use crate::taylor::in_support;

/// `s ∈ ℳ(m)` with `s ⊒ t`, where `t` lies in the support of the reduct of `m` at `path`.
/// `None` when `t` is not in that support.
pub fn antireduce(m: &LambdaSum, path: &RedexPath, t: &RTerm) -> Option<RTerm> {
    let a = m.nth_addend(path.addend)?;
    if let Some(rest) = m.remove_one(a) {
        if in_support(&rest, t) {
            return Some(t.clone());
        }
    }
    antireduce_simple(a, &path.steps, t)
}

/// Same as [`antireduce`] for a single addend.
pub fn antireduce_simple(a: &SimpleTerm, steps: &[Step], t: &RTerm) -> Option<RTerm> {
    match (steps.split_first(), a, t) {
        (None, SimpleTerm::App(f, arg), _) => {
            let SimpleTerm::Abs(h, body) = &**f else {
                return None;
            };
            let mut elems = Vec::new();
            let v = decompose(body, 0, arg, t, &mut elems)?;
            Some(RTerm::app(RTerm::Abs(h.clone(), Box::new(v)), Bag::new(elems)))
        }
        (Some((Step::Body, rest)), SimpleTerm::Abs(h, b), RTerm::Abs(_, tb)) => {
            let s = antireduce_simple(b, rest, tb)?;
            Some(RTerm::Abs(h.clone(), Box::new(s)))
        }
        (Some((Step::Fun, rest)), SimpleTerm::App(f, _), RTerm::App(t0, bag)) => {
            let s0 = antireduce_simple(f, rest, t0)?;
            Some(RTerm::app(s0, bag.clone()))
        }
        (Some((Step::Arg(i), rest)), SimpleTerm::App(_, arg), RTerm::App(t0, bag)) => {
            let ai = arg.nth_addend(*i)?;
            let others = arg.remove_one(ai);
            let mut items = Vec::with_capacity(bag.len());
            for u in bag.iter() {
                if others.as_ref().is_some_and(|o| in_support(o, u)) {
                    items.push(u.clone());
                } else {
                    items.push(antireduce_simple(ai, rest, u)?);
                }
            }
            Some(RTerm::app((**t0).clone(), Bag::new(items)))
        }
        _ => None,
    }
}

/// Splits `t ∈ ℳ(a[b/d])` into `v ∈ ℳ(a)` and the elements of `ℳ(b)` that were
/// substituted for the occurrences of index `d` (collected into `elems`, in left-to-right order).
fn decompose(a: &SimpleTerm, d: usize, b: &LambdaSum, t: &RTerm, elems: &mut Vec<RTerm>) -> Option<RTerm> {
    match a {
        SimpleTerm::Var(Var::Bound(i)) if *i == d => {
            if !in_support(&b.shift(d as isize, 0), t) {
                return None;
            }
            elems.push(t.shift(-(d as isize), 0));
            Some(RTerm::bound(d))
        }
        SimpleTerm::Var(Var::Bound(i)) if *i > d => (*t == RTerm::bound(i - 1)).then(|| RTerm::bound(*i)),
        SimpleTerm::Var(v) => (*t == RTerm::Var(v.clone())).then(|| t.clone()),
        SimpleTerm::Abs(h, body) => {
            let RTerm::Abs(_, tb) = t else {
                return None;
            };
            let v = decompose(body, d + 1, b, tb, elems)?;
            Some(RTerm::Abs(h.clone(), Box::new(v)))
        }
        SimpleTerm::App(f, arg) => {
            let RTerm::App(t0, bag) = t else {
                return None;
            };
            let mark = elems.len();
            let Some(v0) = decompose(f, d, b, t0, elems) else {
                elems.truncate(mark);
                return None;
            };
            let mut items = Vec::with_capacity(bag.len());
            for u in bag.iter() {
                let found = arg.iter().find_map(|(addend, _)| {
                    let before = elems.len();
                    let r = decompose(addend, d, b, u, elems);
                    if r.is_none() {
                        elems.truncate(before);
                    }
                    r
                });
                match found {
                    Some(vu) => items.push(vu),
                    None => {
                        elems.truncate(mark);
                        return None;
                    }
                }
            }
            Some(RTerm::app(v0, Bag::new(items)))
        }
    }
}

/// One edge of a partial-reduction chain: fire `path` in `source`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainLink {
    pub source: LambdaSum,
    pub path: RedexPath,
}

/// Lifts `t` (in the support of the last target) back to the first source.
pub fn antireduce_chain(links: &[ChainLink], t: &RTerm) -> Option<RTerm> {
    links
        .iter()
        .rev()
        .try_fold(t.clone(), |cur, link| antireduce(&link.source, &link.path, &cur))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::{parse_lambda, redex_paths, reduce_at};
    use crate::resource::{parse_resource, reduces_to};
    use crate::taylor::{support_enum, SupportQuery};

    fn r(s: &str) -> RTerm {
        parse_resource(s).unwrap()
    }

    #[test]
    fn identity_redex() {
        let m = parse_lambda("(\\x. x) z").unwrap();
        let p = &redex_paths(&m)[0];
        assert_eq!(antireduce(&m, p, &r("z")), Some(r("(\\x. x) [z]")));
    }

    #[test]
    fn omega_unfolds() {
        let m = parse_lambda("(\\x. x x) (\\x. x x)").unwrap();
        let p = &redex_paths(&m)[0];
        let s1 = antireduce(&m, p, &r("(\\x. x [x]) [\\x. x [x]]")).unwrap();
        assert_eq!(s1, r("(\\x. x [x]) [\\x. x [x], \\x. x [x]]"));
        let s2 = antireduce(&m, p, &s1).unwrap();
        assert_eq!(s2, r("(\\x. x [x, x]) [\\x. x [x], \\x. x [x], \\x. x [x]]"));
    }

    #[test]
    fn every_support_term_lifts() {
        for src in [
            "(\\x y. x (y y)) (z + w) (\\a. a)",
            "\\u. (\\x. x u x) (\\y. y + u)",
            "(\\x. \\y. y x) ((\\z. z) w)",
            "x ((\\y. y y) z + v)",
        ] {
            let m = parse_lambda(src).unwrap();
            for p in redex_paths(&m) {
                let n = reduce_at(&m, &p);
                for t in support_enum(&n, SupportQuery::bags(2)) {
                    let s = antireduce(&m, &p, &t).unwrap_or_else(|| panic!("{src}: no lift of {t}"));
                    assert!(in_support(&m, &s), "{src}: {s} not in support");
                    assert!(reduces_to(&s, &t), "{src}: {s} does not reduce to {t}");
                }
            }
        }
    }
}
