//! Generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::Rng;

use lambda_taylor::lambda::{LambdaSum, SimpleTerm};
use lambda_taylor::names::Var;
use lambda_taylor::resource::{Bag, Combination, RTerm, Rig};
use lambda_taylor::types::Type;

// ---------------------------------------------------------------------------
// proptest strategies

pub fn lambda_strategy(depth: u32) -> impl Strategy<Value = LambdaSum> {
    let leaf = prop_oneof![Just("x"), Just("y"), Just("z")].prop_map(LambdaSum::var);
    leaf.prop_recursive(depth, 24, 2, |inner| {
        prop_oneof![
            3 => (prop_oneof![Just("x"), Just("y")], inner.clone()).prop_map(|(x, b)| LambdaSum::lambda(x, &b)),
            3 => (inner.clone(), inner.clone()).prop_map(|(f, a)| LambdaSum::apply(&f, &a)),
            1 => (inner.clone(), inner).prop_map(|(a, b)| a.plus(&b)),
        ]
    })
}

pub fn resource_strategy(depth: u32) -> impl Strategy<Value = RTerm> {
    let leaf = prop_oneof![Just("x"), Just("y"), Just("z")].prop_map(RTerm::var);
    leaf.prop_recursive(depth, 24, 3, |inner| {
        prop_oneof![
            2 => (prop_oneof![Just("x"), Just("y")], inner.clone()).prop_map(|(x, b)| RTerm::lambda(x, &b)),
            3 => (inner.clone(), prop::collection::vec(inner, 0..3)).prop_map(|(h, b)| RTerm::app(h, Bag::new(b))),
        ]
    })
}

pub fn type_strategy(depth: u32) -> impl Strategy<Value = Type> {
    let leaf = prop_oneof![Just("A"), Just("B"), Just("C")].prop_map(Type::var);
    leaf.prop_recursive(depth, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Type::arrow(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Type::inter(a, b)),
        ]
    })
}

// ---------------------------------------------------------------------------
// seeded random resource terms

/// A random resource term of size at most `budget`, with free variables among `vars`.
/// Abstractions are frequent so that redexes appear.
pub fn random_rterm<R: Rng>(rng: &mut R, budget: usize, vars: &[&str]) -> RTerm {
    fn go<R: Rng>(rng: &mut R, budget: usize, vars: &[&str], env: &mut Vec<String>) -> RTerm {
        let pick_var = |rng: &mut R, env: &Vec<String>| {
            let total = vars.len() + env.len();
            let i = rng.gen_range(0..total);
            if i < vars.len() {
                RTerm::var(vars[i])
            } else {
                RTerm::var(env[i - vars.len()].clone())
            }
        };
        if budget <= 1 {
            return pick_var(rng, env);
        }
        match rng.gen_range(0..10) {
            0..=1 => pick_var(rng, env),
            2..=4 => {
                let x = format!("b{}", env.len());
                env.push(x.clone());
                let body = go(rng, budget - 1, vars, env);
                env.pop();
                RTerm::lambda(&x, &body)
            }
            _ => {
                let mut left = budget - 1;
                let head_budget = rng.gen_range(1..=left.max(1));
                // Bias heads towards abstractions so that the term has redexes.
                let head = if rng.gen_bool(0.6) && head_budget >= 2 {
                    let x = format!("b{}", env.len());
                    env.push(x.clone());
                    let body = go(rng, head_budget - 1, vars, env);
                    env.pop();
                    RTerm::lambda(&x, &body)
                } else {
                    go(rng, head_budget, vars, env)
                };
                left = left.saturating_sub(head.size());
                let mut items = Vec::new();
                let n = rng.gen_range(0..=3);
                for _ in 0..n {
                    if left == 0 {
                        break;
                    }
                    let b = rng.gen_range(1..=left);
                    let t = go(rng, b, vars, env);
                    left = left.saturating_sub(t.size());
                    items.push(t);
                }
                RTerm::app(head, Bag::new(items))
            }
        }
    }
    loop {
        let t = go(rng, budget, vars, &mut Vec::new());
        if t.size() <= budget {
            return t;
        }
    }
}

// ---------------------------------------------------------------------------
// named-term β oracle: naive substitution on α-fresh copies

#[derive(Clone, Debug)]
pub enum Named {
    Var(String),
    Lam(String, Box<Named>),
    App(Box<Named>, Vec<Named>),
}

pub struct Renamer {
    next: usize,
}

impl Renamer {
    pub fn new() -> Self {
        Renamer { next: 0 }
    }

    fn fresh(&mut self) -> String {
        self.next += 1;
        format!("v#{}", self.next)
    }

    pub fn sum(&mut self, m: &LambdaSum, env: &mut Vec<String>) -> Vec<Named> {
        m.iter_flat().map(|t| self.simple(t, env)).collect()
    }

    pub fn simple(&mut self, t: &SimpleTerm, env: &mut Vec<String>) -> Named {
        match t {
            SimpleTerm::Var(Var::Free(x)) => Named::Var(x.clone()),
            SimpleTerm::Var(Var::Bound(i)) => Named::Var(env[env.len() - 1 - i].clone()),
            SimpleTerm::Abs(_, body) => {
                let x = self.fresh();
                env.push(x.clone());
                let b = self.simple(body, env);
                env.pop();
                Named::Lam(x, Box::new(b))
            }
            SimpleTerm::App(f, a) => Named::App(Box::new(self.simple(f, env)), self.sum(a, env)),
        }
    }

    /// A copy with every binder renamed afresh.
    pub fn refresh(&mut self, n: &Named, map: &mut BTreeMap<String, String>) -> Named {
        match n {
            Named::Var(x) => Named::Var(map.get(x).cloned().unwrap_or_else(|| x.clone())),
            Named::Lam(x, b) => {
                let y = self.fresh();
                let old = map.insert(x.clone(), y.clone());
                let nb = self.refresh(b, map);
                match old {
                    Some(o) => map.insert(x.clone(), o),
                    None => map.remove(x),
                };
                Named::Lam(y, Box::new(nb))
            }
            Named::App(f, a) => Named::App(Box::new(self.refresh(f, map)), a.iter().map(|t| self.refresh(t, map)).collect()),
        }
    }

    /// `n[x := p]` where `p` is a sum; each occurrence gets an α-fresh copy. Sum-valued.
    pub fn subst(&mut self, n: &Named, x: &str, p: &[Named]) -> Vec<Named> {
        match n {
            Named::Var(y) if y == x => p.iter().map(|t| self.refresh(t, &mut BTreeMap::new())).collect(),
            Named::Var(_) => vec![n.clone()],
            Named::Lam(y, b) => self.subst(b, x, p).into_iter().map(|b| Named::Lam(y.clone(), Box::new(b))).collect(),
            Named::App(f, a) => {
                let heads = self.subst(f, x, p);
                let arg: Vec<Named> = a.iter().flat_map(|t| self.subst(t, x, p)).collect();
                heads.into_iter().map(|h| Named::App(Box::new(h), arg.clone())).collect()
            }
        }
    }

    /// Every one-step reduct of the addend `n`, as a sum.
    pub fn reducts(&mut self, n: &Named) -> Vec<Vec<Named>> {
        let mut out = Vec::new();
        match n {
            Named::Var(_) => {}
            Named::Lam(x, b) => {
                for r in self.reducts(b) {
                    out.push(r.into_iter().map(|b| Named::Lam(x.clone(), Box::new(b))).collect());
                }
            }
            Named::App(f, a) => {
                if let Named::Lam(x, body) = &**f {
                    out.push(self.subst(body, x, a));
                }
                for r in self.reducts(f) {
                    out.push(r.into_iter().map(|h| Named::App(Box::new(h), a.clone())).collect());
                }
                for i in 0..a.len() {
                    for r in self.reducts(&a[i]) {
                        let mut arg: Vec<Named> = a[..i].to_vec();
                        arg.extend(r);
                        arg.extend_from_slice(&a[i + 1..]);
                        out.push(vec![Named::App(f.clone(), arg)]);
                    }
                }
            }
        }
        out
    }
}

pub fn named_to_sum(ns: &[Named]) -> LambdaSum {
    ns.iter().map(named_to_lambda).reduce(|a, b| a.plus(&b)).expect("non-empty sum")
}

pub fn named_to_lambda(n: &Named) -> LambdaSum {
    match n {
        Named::Var(x) => LambdaSum::var(x.clone()),
        Named::Lam(x, b) => LambdaSum::lambda(x, &named_to_lambda(b)),
        Named::App(f, a) => LambdaSum::apply(&named_to_lambda(f), &named_to_sum(a)),
    }
}

/// One-step β-reducts computed on named terms by naive substitution.
pub fn naive_beta_reducts(m: &LambdaSum) -> BTreeSet<LambdaSum> {
    let mut r = Renamer::new();
    let addends = r.sum(m, &mut Vec::new());
    let mut out = BTreeSet::new();
    for i in 0..addends.len() {
        for red in r.reducts(&addends[i]) {
            let mut whole: Vec<Named> = addends[..i].to_vec();
            whole.extend(red);
            whole.extend_from_slice(&addends[i + 1..]);
            out.insert(named_to_sum(&whole));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// brute-force Taylor expansion: multiply out the sums over ordered argument sequences

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * BigInt::from(k))
}

pub type Series = BTreeMap<RTerm, BigRational>;

fn series_add(into: &mut Series, t: RTerm, c: BigRational) {
    let slot = into.entry(t).or_insert_with(BigRational::zero);
    *slot += c;
}

/// `ℳ*(m)` truncated to bags of at most `k` elements, by direct expansion:
/// `ℳ*(MN) = Σₙ 1/n! Σ_{(t, s₁…sₙ)} ⟨t⟩[s₁,…,sₙ]` over ordered sequences.
pub fn brute_expansion(m: &LambdaSum, k: usize) -> Series {
    let mut out = Series::new();
    for (t, mult) in m.iter() {
        for (u, c) in brute_simple(t, k) {
            series_add(&mut out, u, c * BigRational::from_integer(BigInt::from(mult)));
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn brute_simple(t: &SimpleTerm, k: usize) -> Series {
    match t {
        SimpleTerm::Var(Var::Free(x)) => Series::from([(RTerm::var(x.clone()), BigRational::one())]),
        SimpleTerm::Var(Var::Bound(i)) => Series::from([(RTerm::bound(*i), BigRational::one())]),
        SimpleTerm::Abs(h, body) => brute_simple(body, k)
            .into_iter()
            .map(|(b, c)| (RTerm::abs(h.as_str(), b), c))
            .collect(),
        SimpleTerm::App(f, arg) => {
            let heads = brute_simple(f, k);
            let args: Vec<(RTerm, BigRational)> = brute_expansion(arg, k).into_iter().collect();
            let mut out = Series::new();
            let mut seq: Vec<usize> = Vec::new();
            for n in 0..=k {
                let inv = BigRational::new(BigInt::one(), factorial(n));
                sequences(args.len(), n, &mut seq, &mut |s| {
                    let mut c = inv.clone();
                    let mut items = Vec::with_capacity(n);
                    for &j in s {
                        c *= &args[j].1;
                        items.push(args[j].0.clone());
                    }
                    let bag = Bag::new(items);
                    for (h, hc) in &heads {
                        series_add(&mut out, RTerm::app(h.clone(), bag.clone()), &c * hc);
                    }
                });
            }
            out
        }
    }
}

fn sequences(width: usize, n: usize, seq: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if seq.len() == n {
        f(seq);
        return;
    }
    for j in 0..width {
        seq.push(j);
        sequences(width, n, seq, f);
        seq.pop();
    }
}

/// The coefficient of one resource term, summing `1/n!` over every ordering of
/// each bag's positions (orderings that coincide as sequences are counted once).
pub fn brute_coeff(m: &LambdaSum, t: &RTerm) -> BigRational {
    let mut c = BigRational::zero();
    for (a, mult) in m.iter() {
        c += brute_coeff_simple(a, t) * BigRational::from_integer(BigInt::from(mult));
    }
    c
}

fn brute_coeff_simple(a: &SimpleTerm, t: &RTerm) -> BigRational {
    match (a, t) {
        (SimpleTerm::Var(x), RTerm::Var(y)) if x == y => BigRational::one(),
        (SimpleTerm::Abs(_, b), RTerm::Abs(_, u)) => brute_coeff_simple(b, u),
        (SimpleTerm::App(f, arg), RTerm::App(h, bag)) => {
            let head = brute_coeff_simple(f, h);
            if head.is_zero() {
                return head;
            }
            let items = bag.as_slice();
            let n = items.len();
            let mut orders: BTreeSet<Vec<&RTerm>> = BTreeSet::new();
            permutations(n, &mut Vec::new(), &mut vec![false; n], &mut |p| {
                orders.insert(p.iter().map(|&i| &items[i]).collect());
            });
            let mut sum = BigRational::zero();
            for seq in orders {
                let mut c = BigRational::one();
                for s in seq {
                    c *= brute_coeff(arg, s);
                }
                sum += c;
            }
            head * sum / BigRational::from_integer(factorial(n))
        }
        _ => BigRational::zero(),
    }
}

fn permutations(n: usize, cur: &mut Vec<usize>, used: &mut Vec<bool>, f: &mut impl FnMut(&[usize])) {
    if cur.len() == n {
        f(cur);
        return;
    }
    for i in 0..n {
        if !used[i] {
            used[i] = true;
            cur.push(i);
            permutations(n, cur, used, f);
            cur.pop();
            used[i] = false;
        }
    }
}

/// A uniformly-structured random element of `ℳ(m)` with bags of at most `k` elements.
pub fn sample_support<R: Rng>(rng: &mut R, m: &LambdaSum, k: usize) -> RTerm {
    let addends: Vec<&SimpleTerm> = m.iter_flat().collect();
    let i = rng.gen_range(0..addends.len());
    sample_simple(rng, addends[i], k)
}

fn sample_simple<R: Rng>(rng: &mut R, a: &SimpleTerm, k: usize) -> RTerm {
    match a {
        SimpleTerm::Var(Var::Free(x)) => RTerm::var(x.clone()),
        SimpleTerm::Var(Var::Bound(i)) => RTerm::bound(*i),
        SimpleTerm::Abs(h, b) => RTerm::abs(h.as_str(), sample_simple(rng, b, k)),
        SimpleTerm::App(f, arg) => {
            let n = rng.gen_range(0..=k);
            let items = (0..n).map(|_| sample_support(rng, arg, k)).collect();
            RTerm::app(sample_simple(rng, f, k), Bag::new(items))
        }
    }
}

// ---------------------------------------------------------------------------
// differential substitution over every bijection from occurrences to bag positions

fn occurrences(t: &RTerm, x: &str) -> usize {
    match t {
        RTerm::Var(Var::Free(y)) => usize::from(y == x),
        RTerm::Var(_) => 0,
        RTerm::Abs(_, b) => occurrences(b, x),
        RTerm::App(h, bag) => occurrences(h, x) + bag.iter().map(|s| occurrences(s, x)).sum::<usize>(),
    }
}

/// Replaces the occurrences of `x`, left to right, by `fill[0], fill[1], …`.
fn fill(t: &RTerm, x: &str, with: &[RTerm], next: &mut usize, depth: usize) -> RTerm {
    match t {
        RTerm::Var(Var::Free(y)) if y == x => {
            let s = with[*next].shift(depth as isize, 0);
            *next += 1;
            s
        }
        RTerm::Var(_) => t.clone(),
        RTerm::Abs(h, b) => RTerm::Abs(h.clone(), Box::new(fill(b, x, with, next, depth + 1))),
        RTerm::App(h, bag) => {
            let h = fill(h, x, with, next, depth);
            let items = bag.iter().map(|s| fill(s, x, with, next, depth)).collect();
            RTerm::app(h, Bag::new(items))
        }
    }
}

/// `t⟨x := [c₁,…,cₙ]⟩` where each `cᵢ` is a sum of terms: the sum over all
/// bijections σ from occurrences to positions, each occurrence picking any
/// addend of its position's sum.
pub fn naive_dsubst(t: &RTerm, x: &str, bag: &[Vec<RTerm>]) -> Combination {
    let n = occurrences(t, x);
    let mut out = Combination::zero(Rig::Nat);
    if n != bag.len() {
        return out;
    }
    permutations(n, &mut Vec::new(), &mut vec![false; n], &mut |sigma| {
        let mut choice = vec![0usize; n];
        loop {
            let with: Vec<RTerm> = (0..n).map(|i| bag[sigma[i]][choice[i]].clone()).collect();
            out.add_term(fill(t, x, &with, &mut 0, 0), &BigRational::one());
            let mut i = 0;
            while i < n {
                choice[i] += 1;
                if choice[i] < bag[sigma[i]].len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
        }
    });
    out
}
