use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Positive rig of coefficients. Every element is carried as an exact rational
/// and normalised into the rig after each operation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Rig {
    /// `({0,1}, max, min)`.
    Bool,
    Nat,
    #[default]
    Rat,
}

pub type Coeff = BigRational;

impl Rig {
    pub fn zero(self) -> Coeff {
        Coeff::zero()
    }

    pub fn one(self) -> Coeff {
        Coeff::one()
    }

    pub fn normalize(self, c: Coeff) -> Coeff {
        match self {
            Rig::Bool if !c.is_zero() => Coeff::one(),
            _ => c,
        }
    }

    pub fn add(self, a: &Coeff, b: &Coeff) -> Coeff {
        self.normalize(a + b)
    }

    pub fn mul(self, a: &Coeff, b: &Coeff) -> Coeff {
        self.normalize(a * b)
    }

    /// Embeds a natural-number multiplicity.
    pub fn from_count(self, n: &BigUint) -> Coeff {
        self.normalize(Coeff::from_integer(BigInt::from(n.clone())))
    }

    /// Division by a positive integer; only meaningful in `Rat`.
    pub fn div_int(self, a: &Coeff, n: &BigUint) -> Option<Coeff> {
        match self {
            Rig::Rat if !n.is_zero() => Some(a / Coeff::from_integer(BigInt::from(n.clone()))),
            _ => None,
        }
    }

    /// Whether `c` is an element of this rig.
    pub fn contains(self, c: &Coeff) -> bool {
        match self {
            Rig::Bool => c.is_zero() || c.is_one(),
            Rig::Nat => c.is_integer() && *c >= Coeff::zero(),
            Rig::Rat => *c >= Coeff::zero(),
        }
    }
}

impl FromStr for Rig {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bool" => Ok(Rig::Bool),
            "nat" => Ok(Rig::Nat),
            "rat" => Ok(Rig::Rat),
            _ => Err(format!("unknown rig '{s}' (expected bool, nat or rat)")),
        }
    }
}

impl fmt::Display for Rig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rig::Bool => "bool",
            Rig::Nat => "nat",
            Rig::Rat => "rat",
        })
    }
}

/// `p/q`, or `p` for integers.
pub fn format_coeff(c: &Coeff) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}
