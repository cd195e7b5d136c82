use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde_json::{json, Value};

use crate::error::Error;
use crate::lambda::{redex_paths, reduce_at, LambdaSum};
use crate::resource::{reach, reduces_to, RTerm};
use crate::taylor::{linear_expansion, support_enum_limited, SupportQuery};

/// Support size above which an audit is abandoned.
pub const DEFAULT_AUDIT_LIMIT: usize = 500_000;

/// `t ∈ ↑a`: some element of `a` lies below `t`.
pub fn cone_member(t: &RTerm, a: &BTreeSet<RTerm>) -> bool {
    a.contains(t) || a.iter().any(|s| reduces_to(t, s))
}

/// Family of test sets an audit is run against.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StructureTag {
    /// Every singleton `{s}` with `s` reachable from some audited support term.
    Singletons,
    /// `⋃ ℓ(Mᵢ)` over the first `steps` leftmost-outermost reducts `M₀ = m, M₁, …`.
    Linear { steps: usize },
    /// The given sets, keeping only elements whose bags have at most `n` elements.
    Bounded { n: usize, sets: Vec<BTreeSet<RTerm>> },
    Explicit(Vec<BTreeSet<RTerm>>),
}

impl fmt::Display for StructureTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sets = |sets: &[BTreeSet<RTerm>]| {
            sets.iter()
                .map(|a| format!("{{{}}}", a.iter().map(RTerm::to_string).collect::<Vec<_>>().join(", ")))
                .collect::<Vec<_>>()
                .join(", ")
        };
        match self {
            StructureTag::Singletons => f.write_str("singletons"),
            StructureTag::Linear { steps } => write!(f, "linear expansions of {steps} reducts"),
            StructureTag::Bounded { n, sets: s } => write!(f, "bounded({n}) {}", sets(s)),
            StructureTag::Explicit(s) => write!(f, "explicit {}", sets(s)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    FiniteSoFar,
    GrowthDetected,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::FiniteSoFar => "Finite-so-far",
            Verdict::GrowthDetected => "GrowthDetected",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditRow {
    pub k: usize,
    pub count: usize,
    pub witnesses: Vec<RTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditReport {
    pub term: String,
    pub test: String,
    pub test_sets: Vec<BTreeSet<RTerm>>,
    pub rows: Vec<AuditRow>,
    pub verdict: Verdict,
    pub exhausted: Option<Error>,
}

const WITNESSES_SHOWN: usize = 3;

impl AuditReport {
    pub fn counts(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.count).collect()
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "term": self.term,
            "test": self.test,
            "rows": self.rows.iter().map(|r| json!({
                "k": r.k,
                "count": r.count,
                "witnesses": r.witnesses.iter().map(RTerm::to_string).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "verdict": self.verdict.to_string(),
        });
        if let Some(e) = &self.exhausted {
            v["exhausted"] = json!(e.to_string());
        }
        v
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "audit of {} against {}", self.term, self.test)?;
        writeln!(f, "  k  count  witnesses")?;
        for r in &self.rows {
            let w: Vec<String> = r.witnesses.iter().map(RTerm::to_string).collect();
            writeln!(f, "  {:<2} {:<6} {}", r.k, r.count, w.join("; "))?;
        }
        if let Some(e) = &self.exhausted {
            writeln!(f, "  stopped: {e}")?;
        }
        writeln!(f, "verdict: {}", self.verdict)
    }
}

/// `M₀ = m` followed by up to `steps` leftmost-outermost β-reducts.
pub fn explored_chain(m: &LambdaSum, steps: usize) -> Vec<LambdaSum> {
    let mut chain = vec![m.clone()];
    for _ in 0..steps {
        let cur = chain.last().expect("non-empty");
        let Some(p) = redex_paths(cur).into_iter().next() else {
            break;
        };
        let next = reduce_at(cur, &p);
        chain.push(next);
    }
    chain
}

pub fn linear_test_set(m: &LambdaSum, steps: usize) -> BTreeSet<RTerm> {
    explored_chain(m, steps).iter().flat_map(linear_expansion).collect()
}

fn verdict(rows: &[AuditRow]) -> Verdict {
    match rows {
        [.., a, b, c] if a.count < b.count && b.count < c.count => Verdict::GrowthDetected,
        _ => Verdict::FiniteSoFar,
    }
}

pub fn duality_audit(m: &LambdaSum, tests: &StructureTag, max_bound: usize) -> AuditReport {
    duality_audit_limited(m, tests, max_bound, DEFAULT_AUDIT_LIMIT)
}

/// `|ℳ(m, k) ∩ ↑a|` for `k = 0..=max_bound`; with several test sets the row holds the largest.
pub fn duality_audit_limited(m: &LambdaSum, tests: &StructureTag, max_bound: usize, limit: usize) -> AuditReport {
    // Supports are nested in the bound, so the largest one that fits the budget serves every row.
    let mut exhausted = None;
    let mut top = max_bound;
    let support = loop {
        match support_enum_limited(m, SupportQuery::bags(top), limit) {
            Ok(s) => break Some(s),
            Err(e) => {
                exhausted.get_or_insert(e);
                if top == 0 {
                    break None;
                }
                top -= 1;
            }
        }
    };
    let support: Vec<RTerm> = support.map(|s| s.into_iter().collect()).unwrap_or_default();
    let bags: Vec<usize> = support.iter().map(RTerm::max_bag).collect();

    // For each test set, the support terms inside its cone.
    let (test_sets, hits): (Vec<BTreeSet<RTerm>>, Vec<Vec<usize>>) = match tests {
        StructureTag::Singletons => {
            let mut by_target: BTreeMap<RTerm, Vec<usize>> = BTreeMap::new();
            for (i, t) in support.iter().enumerate() {
                for s in reach(t) {
                    by_target.entry(s).or_default().push(i);
                }
            }
            by_target.into_iter().map(|(s, ts)| (BTreeSet::from([s]), ts)).unzip()
        }
        _ => {
            let sets = match tests {
                StructureTag::Linear { steps } => vec![linear_test_set(m, *steps)],
                StructureTag::Bounded { n, sets } => sets
                    .iter()
                    .map(|a| a.iter().filter(|s| s.max_bag() <= *n).cloned().collect())
                    .collect(),
                StructureTag::Explicit(sets) => sets.clone(),
                StructureTag::Singletons => unreachable!(),
            };
            let hits = sets
                .iter()
                .map(|a| (0..support.len()).filter(|&i| cone_member(&support[i], a)).collect())
                .collect();
            (sets, hits)
        }
    };

    let mut rows = Vec::new();
    for k in 0..=top.min(max_bound) {
        if support.is_empty() && exhausted.is_some() {
            break;
        }
        let mut best: Option<Vec<usize>> = None;
        for h in &hits {
            let inside: Vec<usize> = h.iter().copied().filter(|&i| bags[i] <= k).collect();
            if best.as_ref().is_none_or(|b| inside.len() > b.len()) {
                best = Some(inside);
            }
        }
        let best = best.unwrap_or_default();
        let mut witnesses: Vec<RTerm> = best.iter().map(|&i| support[i].clone()).collect();
        witnesses.sort_by_key(|t| (t.size(), t.clone()));
        witnesses.truncate(WITNESSES_SHOWN);
        rows.push(AuditRow {
            k,
            count: best.len(),
            witnesses,
        });
    }
    AuditReport {
        term: m.to_string(),
        test: tests.to_string(),
        verdict: verdict(&rows),
        test_sets: match tests {
            StructureTag::Singletons => Vec::new(),
            _ => test_sets,
        },
        rows,
        exhausted,
    }
}
