//! Typing synthesis for strongly normalising terms.
//!
//! Terms are typed as they would be evaluated: a β-redex `(λx.N) P` binds `x` to
//! the unevaluated argument `P`, and every use of `x` types a fresh copy of `P`
//! against the arguments found at that use. The uses' types are intersected to
//! give `x` its type, and `P` receives the matching `Int` derivation. Unused
//! arguments are still typed, so every subterm is visited, as strong
//! normalisation demands. Abstractions under no argument introduce real
//! binders; head variables take fresh result types.

use std::collections::HashMap;

use crate::error::Result;
use crate::lambda::{sn_explore, LambdaSum, SimpleTerm};
use crate::names::{NameSupply, Var};
use crate::types::derivation::{check_derivation, Derivation};
use crate::types::subtype::Context;
use crate::types::ty::Type;

/// Extra arrows tried at the top level before giving up.
const MAX_EXTRA_ARITY: usize = 4;
/// Typing steps allowed per unit of fuel.
const STEPS_PER_FUEL: usize = 16;

/// A derivation whose contexts are filled in once every binder's uses are known.
#[derive(Clone, Debug)]
struct Pre {
    node: Node,
    ty: Type,
}

#[derive(Clone, Debug)]
enum Node {
    Var(String),
    Abs(String, Type, Box<Pre>),
    App(Box<Pre>, Box<Pre>),
    Int(Box<Pre>, Box<Pre>),
    Plus(Box<Pre>, Box<Pre>),
    Sub(Box<Pre>),
}

impl Pre {
    fn var(x: &str, ty: Type) -> Self {
        Pre {
            node: Node::Var(x.to_string()),
            ty,
        }
    }

    fn app(f: Pre, a: Pre) -> Self {
        let Type::Arrow(_, b) = &f.ty else {
            unreachable!("typed heads have arrow types")
        };
        let ty = (**b).clone();
        Pre {
            node: Node::App(Box::new(f), Box::new(a)),
            ty,
        }
    }

    fn coerce(self, ty: &Type) -> Self {
        if self.ty == *ty {
            self
        } else {
            Pre {
                node: Node::Sub(Box::new(self)),
                ty: ty.clone(),
            }
        }
    }

    /// `Int` over derivations of one term, right-nested to match [`Type::meet`].
    fn meet(items: Vec<Pre>) -> Pre {
        items
            .into_iter()
            .rev()
            .reduce(|acc, p| {
                let ty = Type::inter(p.ty.clone(), acc.ty.clone());
                Pre {
                    node: Node::Int(Box::new(p), Box::new(acc)),
                    ty,
                }
            })
            .expect("non-empty")
    }

    fn finish(&self, ctx: &Context) -> Result<Derivation> {
        Ok(match &self.node {
            Node::Var(x) => Derivation::coerce(Derivation::var(ctx, x)?, &self.ty),
            Node::Abs(x, s, body) => {
                let mut inner = ctx.clone();
                inner.insert(x.clone(), s.clone());
                Derivation::abs(x, body.finish(&inner)?)?
            }
            Node::App(f, a) => Derivation::app(f.finish(ctx)?, a.finish(ctx)?)?,
            Node::Int(a, b) => Derivation::int(a.finish(ctx)?, b.finish(ctx)?),
            Node::Plus(a, b) => Derivation::plus(a.finish(ctx)?, b.finish(ctx)?),
            Node::Sub(p) => Derivation::sub(p.finish(ctx)?, self.ty.clone()),
        })
    }
}

/// A typed head: `pre` types the head at `A₁ → ⋯ → Aₖ → C₁ → ⋯ → Cₙ → B`,
/// `args[i]` types the i-th argument at `Aᵢ`.
struct Typed {
    pre: Pre,
    args: Vec<Pre>,
}

enum Fail {
    /// An abstraction met a fixed result type; retry with more arrows.
    Arity,
    Fuel,
}

enum Binding {
    Real,
    Delayed(LambdaSum),
}

struct Synth {
    names: NameSupply,
    next_type: usize,
    env: HashMap<String, Binding>,
    uses: HashMap<String, Vec<Type>>,
    delayed: HashMap<String, Vec<Pre>>,
    steps: usize,
}

fn dedup_types(items: Vec<Type>) -> Vec<Type> {
    let mut out: Vec<Type> = Vec::new();
    for t in items {
        if !out.contains(&t) {
            out.push(t);
        }
    }
    out
}

impl Synth {
    fn fresh_type(&mut self) -> Type {
        let t = Type::var(format!("X{}", self.next_type));
        self.next_type += 1;
        t
    }

    fn tick(&mut self) -> std::result::Result<(), Fail> {
        if self.steps == 0 {
            return Err(Fail::Fuel);
        }
        self.steps -= 1;
        Ok(())
    }

    fn sum(&mut self, m: &LambdaSum, args: &[LambdaSum], n: usize, target: Option<Type>) -> std::result::Result<Typed, Fail> {
        let addends: Vec<&SimpleTerm> = m.iter_flat().collect();
        if let [only] = addends.as_slice() {
            return self.simple(only, args, n, target);
        }
        match target {
            Some(b) => self.addends(&addends, args, n, b),
            None => {
                // Abstractions cannot take a variable result type, so extra
                // arrows are added to the shared type until every addend fits.
                for extra in 0..=MAX_EXTRA_ARITY {
                    let saved = (self.uses.clone(), self.delayed.clone());
                    let b = self.fresh_type();
                    match self.addends(&addends, args, n + extra, b) {
                        Err(Fail::Arity) => (self.uses, self.delayed) = saved,
                        done => return done,
                    }
                }
                Err(Fail::Arity)
            }
        }
    }

    /// Types every addend at a shared result type `b` and joins them with `Plus`.
    fn addends(&mut self, addends: &[&SimpleTerm], args: &[LambdaSum], n: usize, b: Type) -> std::result::Result<Typed, Fail> {
        let mut typed = Vec::with_capacity(addends.len());
        for a in addends {
            typed.push(self.simple(a, args, n, Some(b.clone()))?);
        }
        let width = args.len() + n;
        let mut doms = Vec::with_capacity(width);
        for i in 0..width {
            let at_i = typed
                .iter()
                .map(|t| t.pre.ty.uncurry(width).expect("arity")
                    .0[i]
                    .clone())
                .collect();
            doms.push(Type::meet(dedup_types(at_i)).expect("non-empty"));
        }
        let common = Type::arrows(doms, b);
        let mut arg_pres: Vec<Vec<Pre>> = vec![Vec::new(); args.len()];
        let mut parts = Vec::with_capacity(typed.len());
        for t in typed {
            for (i, p) in t.args.into_iter().enumerate() {
                if !arg_pres[i].iter().any(|q| q.ty == p.ty) {
                    arg_pres[i].push(p);
                }
            }
            parts.push(t.pre.coerce(&common));
        }
        let pre = parts
            .into_iter()
            .rev()
            .reduce(|acc, p| Pre {
                node: Node::Plus(Box::new(p), Box::new(acc)),
                ty: common.clone(),
            })
            .expect("at least two addends");
        Ok(Typed {
            pre,
            args: arg_pres.into_iter().map(Pre::meet).collect(),
        })
    }

    fn simple(&mut self, t: &SimpleTerm, args: &[LambdaSum], n: usize, target: Option<Type>) -> std::result::Result<Typed, Fail> {
        self.tick()?;
        match t {
            SimpleTerm::App(f, a) => {
                let mut all = Vec::with_capacity(args.len() + 1);
                all.push(a.clone());
                all.extend_from_slice(args);
                let mut r = self.simple(f, &all, n, target)?;
                let first = r.args.remove(0);
                Ok(Typed {
                    pre: Pre::app(r.pre, first),
                    args: r.args,
                })
            }
            SimpleTerm::Abs(h, body) => {
                if args.is_empty() && n == 0 && target.is_some() {
                    return Err(Fail::Arity);
                }
                let x = self.names.fresh(h.as_str());
                let opened = LambdaSum::single((**body).clone()).open(&x);
                let body = opened.as_single().expect("opening keeps a single addend").clone();
                match args.split_first() {
                    Some((p, rest)) => {
                        self.env.insert(x.clone(), Binding::Delayed(p.clone()));
                        let r = self.simple(&body, rest, n, target)?;
                        let mut uses = self.delayed.remove(&x).unwrap_or_default();
                        let mut seen = Vec::new();
                        uses.retain(|u| {
                            let fresh = !seen.contains(&u.ty);
                            seen.push(u.ty.clone());
                            fresh
                        });
                        let arg = if uses.is_empty() {
                            self.sum(p, &[], 0, None)?.pre
                        } else {
                            Pre::meet(uses)
                        };
                        let s = arg.ty.clone();
                        let ty = Type::arrow(s.clone(), r.pre.ty.clone());
                        let mut out_args = vec![arg];
                        out_args.extend(r.args);
                        Ok(Typed {
                            pre: Pre {
                                node: Node::Abs(x, s, Box::new(r.pre)),
                                ty,
                            },
                            args: out_args,
                        })
                    }
                    None => {
                        self.env.insert(x.clone(), Binding::Real);
                        let r = self.simple(&body, &[], n.saturating_sub(1), target)?;
                        let s = match self.uses.remove(&x) {
                            Some(u) => Type::meet(dedup_types(u)).expect("non-empty"),
                            None => self.fresh_type(),
                        };
                        let ty = Type::arrow(s.clone(), r.pre.ty.clone());
                        Ok(Typed {
                            pre: Pre {
                                node: Node::Abs(x, s, Box::new(r.pre)),
                                ty,
                            },
                            args: Vec::new(),
                        })
                    }
                }
            }
            SimpleTerm::Var(Var::Free(x)) => {
                if let Some(Binding::Delayed(p)) = self.env.get(x) {
                    let p = p.clone();
                    let r = self.sum(&p, args, n, target)?;
                    let ty = r.pre.ty.clone();
                    self.delayed.entry(x.clone()).or_default().push(r.pre);
                    return Ok(Typed {
                        pre: Pre::var(x, ty),
                        args: r.args,
                    });
                }
                let mut arg_pres = Vec::with_capacity(args.len());
                for a in args {
                    arg_pres.push(self.sum(a, &[], 0, None)?.pre);
                }
                let mut doms: Vec<Type> = arg_pres.iter().map(|p| p.ty.clone()).collect();
                for _ in 0..n {
                    let c = self.fresh_type();
                    doms.push(c);
                }
                let b = match target {
                    Some(b) => b,
                    None => self.fresh_type(),
                };
                let ty = Type::arrows(doms, b);
                self.uses.entry(x.clone()).or_default().push(ty.clone());
                Ok(Typed {
                    pre: Pre::var(x, ty),
                    args: arg_pres,
                })
            }
            SimpleTerm::Var(Var::Bound(_)) => unreachable!("binders are opened before their bodies are typed"),
        }
    }
}

/// A checked derivation of `Γ ⊢ m : A` for some `Γ`, `A`, or `None` when `m` is not
/// known to be strongly normalising within `fuel` or synthesis runs out of fuel.
pub fn synthesize(m: &LambdaSum, fuel: usize) -> Option<Derivation> {
    if !sn_explore(m, fuel).is_sn() {
        return None;
    }
    let free = m.free_vars();
    for extra in 0..=MAX_EXTRA_ARITY {
        let mut s = Synth {
            names: NameSupply::avoiding(free.iter().cloned()),
            next_type: 0,
            env: HashMap::new(),
            uses: HashMap::new(),
            delayed: HashMap::new(),
            steps: fuel.saturating_mul(STEPS_PER_FUEL),
        };
        let typed = match s.sum(m, &[], extra, None) {
            Ok(t) => t,
            Err(Fail::Arity) => continue,
            Err(Fail::Fuel) => return None,
        };
        let ctx: Context = free
            .iter()
            .filter_map(|x| {
                let uses = s.uses.get(x)?.clone();
                Some((x.clone(), Type::meet(dedup_types(uses))?))
            })
            .collect();
        let d = typed.pre.finish(&ctx).ok()?;
        return check_derivation(&d).is_ok().then_some(d);
    }
    None
}
