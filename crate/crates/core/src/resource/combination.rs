use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::resource::rig::{format_coeff, Coeff, Rig};
use crate::resource::term::RTerm;

/// Finite linear combination of resource terms; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Combination {
    rig: Rig,
    coeffs: BTreeMap<RTerm, Coeff>,
}

impl Combination {
    pub fn zero(rig: Rig) -> Self {
        Combination {
            rig,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn single(rig: Rig, t: RTerm) -> Self {
        let mut c = Combination::zero(rig);
        c.add_term(t, &rig.one());
        c
    }

    pub fn from_terms(rig: Rig, terms: impl IntoIterator<Item = (RTerm, Coeff)>) -> Self {
        let mut c = Combination::zero(rig);
        for (t, k) in terms {
            c.add_term(t, &k);
        }
        c
    }

    pub fn rig(&self) -> Rig {
        self.rig
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, t: &RTerm) -> Coeff {
        self.coeffs.get(t).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = &RTerm> {
        self.coeffs.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&RTerm, &Coeff)> {
        self.coeffs.iter()
    }

    pub fn add_term(&mut self, t: RTerm, k: &Coeff) {
        let k = self.rig.normalize(k.clone());
        if k.is_zero() {
            return;
        }
        let rig = self.rig;
        let slot = self.coeffs.entry(t).or_insert_with(Coeff::zero);
        *slot = rig.add(slot, &k);
    }

    pub fn add(&self, other: &Combination) -> Combination {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Combination) {
        for (t, k) in &other.coeffs {
            self.add_term(t.clone(), k);
        }
    }

    pub fn scale(&self, k: &Coeff) -> Combination {
        let mut out = Combination::zero(self.rig);
        for (t, c) in &self.coeffs {
            out.add_term(t.clone(), &self.rig.mul(c, k));
        }
        out
    }

    /// Reinterprets the coefficients in another rig.
    pub fn in_rig(&self, rig: Rig) -> Combination {
        Combination::from_terms(rig, self.coeffs.iter().map(|(t, k)| (t.clone(), k.clone())))
    }

    /// Linear extension of `f` over the support.
    pub fn flat_map(&self, mut f: impl FnMut(&RTerm) -> Combination) -> Combination {
        let mut out = Combination::zero(self.rig);
        for (t, k) in &self.coeffs {
            out.add_assign(&f(t).in_rig(self.rig).scale(k));
        }
        out
    }
}

impl fmt::Display for Combination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (i, (t, k)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            let term = if matches!(t, RTerm::Var(_)) {
                t.to_string()
            } else {
                format!("({t})")
            };
            write!(f, "{}*{}", format_coeff(k), term)?;
        }
        Ok(())
    }
}
