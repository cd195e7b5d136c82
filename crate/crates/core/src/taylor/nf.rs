use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::Error;
use crate::lambda::LambdaSum;
use crate::resource::{format_coeff, nf_counts_memo, Coeff, RTerm};
use crate::taylor::coeff::coeff;
use crate::taylor::support::{support_enum_limited, SupportQuery};

/// Support size above which a bound is abandoned.
pub const DEFAULT_SUPPORT_LIMIT: usize = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NfRow {
    pub k: usize,
    pub support_size: usize,
    pub coeffs: BTreeMap<RTerm, Coeff>,
}

/// Normal forms of the Taylor expansion truncated at increasing bag bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NfTaylorReport {
    pub term: String,
    pub rows: Vec<NfRow>,
    /// Nonzero coefficients equal in the last two rows.
    pub stable: BTreeMap<RTerm, Coeff>,
    /// Set when a bound could not be completed; `rows` holds the bounds that were.
    pub exhausted: Option<Error>,
}

impl NfTaylorReport {
    /// The last two rows agree on every coefficient.
    pub fn is_stable(&self) -> bool {
        match self.rows.as_slice() {
            [.., a, b] => a.coeffs == b.coeffs,
            _ => false,
        }
    }

    pub fn last(&self) -> Option<&NfRow> {
        self.rows.last()
    }

    pub fn to_json(&self) -> Value {
        let entries = |m: &BTreeMap<RTerm, Coeff>| -> Vec<Value> {
            m.iter()
                .map(|(t, c)| json!({"nf": t.to_string(), "num": int_json(c.numer()), "den": int_json(c.denom())}))
                .collect()
        };
        let mut v = json!({
            "term": self.term,
            "bounds": self.rows.iter().map(|r| json!({"k": r.k, "coeffs": entries(&r.coeffs)})).collect::<Vec<_>>(),
            "stable": entries(&self.stable),
        });
        if let Some(e) = &self.exhausted {
            v["exhausted"] = json!(e.to_string());
        }
        v
    }
}

fn int_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(i) => json!(i),
        None => json!(n.to_string()),
    }
}

fn format_map(m: &BTreeMap<RTerm, Coeff>) -> String {
    if m.is_empty() {
        return "0".to_string();
    }
    m.iter()
        .map(|(t, c)| {
            let t = if matches!(t, RTerm::Var(_)) { t.to_string() } else { format!("({t})") };
            format!("{}*{}", format_coeff(c), t)
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

impl fmt::Display for NfTaylorReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "normal form of the truncated Taylor expansion of {}", self.term)?;
        for r in &self.rows {
            writeln!(f, "  k={} (support {}): {}", r.k, r.support_size, format_map(&r.coeffs))?;
        }
        if let Some(e) = &self.exhausted {
            writeln!(f, "  stopped: {e}")?;
        }
        if self.rows.len() >= 2 {
            writeln!(f, "stable over the last two bounds: {}", format_map(&self.stable))?;
            writeln!(f, "note: agreement of two consecutive bounds is evidence, not a convergence proof")?;
        }
        Ok(())
    }
}

pub fn nf_taylor(m: &LambdaSum, max_bound: usize) -> NfTaylorReport {
    nf_taylor_limited(m, max_bound, DEFAULT_SUPPORT_LIMIT)
}

/// `Σ_{t ∈ ℳ(m), bags ≤ k} ℳ*(m)_t · NF(t)` for `k = 0..=max_bound`.
pub fn nf_taylor_limited(m: &LambdaSum, max_bound: usize, limit: usize) -> NfTaylorReport {
    let mut memo = HashMap::new();
    let mut rows = Vec::new();
    let mut exhausted = None;
    for k in 0..=max_bound {
        let support = match support_enum_limited(m, SupportQuery::bags(k), limit) {
            Ok(s) => s,
            Err(e) => {
                exhausted = Some(e);
                break;
            }
        };
        let mut coeffs: BTreeMap<RTerm, Coeff> = BTreeMap::new();
        for t in &support {
            let c = coeff(m, t);
            for (u, n) in nf_counts_memo(t, &mut memo) {
                let slot = coeffs.entry(u).or_insert_with(Coeff::zero);
                *slot += &c * Coeff::from_integer(BigInt::from(n));
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        rows.push(NfRow {
            k,
            support_size: support.len(),
            coeffs,
        });
    }
    let stable = match rows.as_slice() {
        [.., a, b] => b
            .coeffs
            .iter()
            .filter(|(t, c)| a.coeffs.get(*t) == Some(*c))
            .map(|(t, c)| (t.clone(), c.clone()))
            .collect(),
        _ => BTreeMap::new(),
    };
    NfTaylorReport {
        term: m.to_string(),
        rows,
        stable,
        exhausted,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::parse_lambda;
    use crate::resource::parse_resource;
    use num_traits::One;

    #[test]
    fn delta_identity_stabilises() {
        let m = parse_lambda("(\\x. x x) (\\x. x)").unwrap();
        let r = nf_taylor(&m, 3);
        let id = parse_resource("\\x. x").unwrap();
        assert!(r.rows[0].coeffs.is_empty());
        assert!(r.rows[1].coeffs.is_empty());
        for row in &r.rows[2..] {
            assert_eq!(row.coeffs, BTreeMap::from([(id.clone(), Coeff::one())]));
        }
        assert!(r.is_stable());
        assert_eq!(r.stable.get(&id), Some(&Coeff::one()));
    }

    #[test]
    fn omega_vanishes() {
        let m = parse_lambda("(\\x. x x) (\\x. x x)").unwrap();
        let r = nf_taylor(&m, 3);
        assert!(r.rows.iter().all(|row| row.coeffs.is_empty()));
    }

    #[test]
    fn variable_at_bound_zero() {
        let r = nf_taylor(&parse_lambda("y").unwrap(), 0);
        assert_eq!(r.rows.len(), 1);
        assert_eq!(r.rows[0].coeffs.len(), 1);
        let v = r.to_json();
        assert_eq!(v["bounds"][0]["coeffs"][0]["nf"], "y");
        assert_eq!(v["bounds"][0]["coeffs"][0]["den"], 1);
    }

    #[test]
    fn budget_gives_partial_table() {
        let m = parse_lambda("(\\x. x x) (\\x. x x)").unwrap();
        let r = nf_taylor_limited(&m, 3, 30);
        assert!(r.exhausted.is_some());
        assert!(r.rows.len() < 4);
    }
}
