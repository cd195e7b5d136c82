use num_bigint::BigUint;
use num_traits::{One, Pow, Zero};

use crate::lambda::{LambdaSum, SimpleTerm};
use crate::resource::{Coeff, RTerm, Rig};

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// The Taylor coefficient `ℳ*(m)_t`.
pub fn coeff(m: &LambdaSum, t: &RTerm) -> Coeff {
    let mut total = Coeff::zero();
    for (a, k) in m.iter() {
        let c = coeff_simple(a, t);
        if !c.is_zero() {
            total += c * Coeff::from_integer(k.into());
        }
    }
    total
}

pub fn coeff_simple(a: &SimpleTerm, t: &RTerm) -> Coeff {
    match (a, t) {
        (SimpleTerm::Var(v), RTerm::Var(w)) if v == w => Coeff::one(),
        (SimpleTerm::Abs(_, b), RTerm::Abs(_, s)) => coeff_simple(b, s),
        (SimpleTerm::App(f, arg), RTerm::App(s, bag)) => {
            let mut c = coeff_simple(f, s);
            for (u, mu) in bag.grouped() {
                if c.is_zero() {
                    break;
                }
                let cu = coeff(arg, u);
                c = c * Pow::pow(cu, mu);
                c = Rig::Rat.div_int(&c, &factorial(mu)).expect("positive divisor");
            }
            c
        }
        _ => Coeff::zero(),
    }
}
