//! Explicit test sets showing that the Taylor support of a non-terminating term
//! meets some cone in infinitely many points.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde_json::{json, Value};

use crate::finiteness::antireduce::antireduce_chain;
use crate::finiteness::audit::{duality_audit, explored_chain, AuditReport, StructureTag};
use crate::finiteness::graph::ReductionGraph;
use crate::lambda::{height, redex_paths, LambdaSum, RedexPath};
use crate::finiteness::antireduce::ChainLink;
use crate::resource::RTerm;
use crate::taylor::{in_support, linear_expansion, support_enum_limited, SupportQuery};

/// Bag bound up to which the growth evidence is audited.
pub const EVIDENCE_BOUND: usize = 3;
/// Unfoldings of a loop, i.e. the number of lifted witnesses beyond the first.
const UNFOLDINGS: usize = 3;
/// Length of the reduction sequence used when heights grow.
const GROWTH_STEPS: usize = 3;
const FINGERPRINT_LIMIT: usize = 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessKind {
    /// A sequence returning to the same bounded Taylor support: one linear test term.
    Loop,
    /// Heights keep growing: the union of the linear expansions along the sequence.
    GrowingHeight,
}

#[derive(Clone, Debug)]
pub struct WitnessPackage {
    pub kind: WitnessKind,
    /// The partial-reduction sequence the construction follows.
    pub sequence: Vec<LambdaSum>,
    pub test_set: BTreeSet<RTerm>,
    /// Elements of the support of the audited term, each above some test term, of growing size.
    pub witnesses: Vec<RTerm>,
    pub audit: AuditReport,
}

impl WitnessPackage {
    pub fn to_json(&self) -> Value {
        json!({
            "kind": match self.kind { WitnessKind::Loop => "loop", WitnessKind::GrowingHeight => "growing-height" },
            "sequence": self.sequence.iter().map(LambdaSum::to_string).collect::<Vec<_>>(),
            "test_set": self.test_set.iter().map(RTerm::to_string).collect::<Vec<_>>(),
            "witnesses": self.witnesses.iter().map(RTerm::to_string).collect::<Vec<_>>(),
            "audit": self.audit.to_json(),
        })
    }
}

impl fmt::Display for WitnessPackage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            WitnessKind::Loop => "loop",
            WitnessKind::GrowingHeight => "growing height",
        };
        writeln!(f, "witness ({kind})")?;
        writeln!(f, "sequence:")?;
        for m in &self.sequence {
            writeln!(f, "  {m}")?;
        }
        writeln!(f, "test set:")?;
        for t in &self.test_set {
            writeln!(f, "  {t}")?;
        }
        writeln!(f, "support terms above the test set:")?;
        for s in &self.witnesses {
            writeln!(f, "  {s}  (size {})", s.size())?;
        }
        write!(f, "{}", self.audit)
    }
}

fn smallest(set: &BTreeSet<RTerm>) -> Option<RTerm> {
    set.iter().min_by_key(|t| (t.size(), (*t).clone())).cloned()
}

/// Lifts `s₀ ∈ ℓ(X)` around the loop `X ⇝⁺ Y`, then back to the root.
fn unfold_loop(graph: &ReductionGraph, x: usize, cycle: &[ChainLink], y: usize) -> Option<(RTerm, Vec<RTerm>)> {
    let root = graph.links(&graph.root_path(x));
    let s0 = smallest(&linear_expansion(&graph.nodes[x]))?;
    let mut chain = vec![s0.clone()];
    while chain.len() <= UNFOLDINGS {
        let cur = chain.last().expect("non-empty");
        if !in_support(&graph.nodes[y], cur) {
            break;
        }
        match antireduce_chain(cycle, cur) {
            Some(next) if next != *cur => chain.push(next),
            _ => break,
        }
    }
    if chain.len() < 3 {
        return None;
    }
    let lifted: Option<Vec<RTerm>> = chain.iter().map(|s| antireduce_chain(&root, s)).collect();
    Some((s0, lifted?))
}

fn loop_witness(graph: &ReductionGraph) -> Option<(Vec<LambdaSum>, RTerm, Vec<RTerm>)> {
    let mut fingerprints: HashMap<usize, Option<BTreeSet<RTerm>>> = HashMap::new();
    let mut fingerprint = |n: usize| {
        fingerprints
            .entry(n)
            .or_insert_with(|| support_enum_limited(&graph.nodes[n], SupportQuery::bags(1), FINGERPRINT_LIMIT).ok())
            .clone()
    };
    for x in 0..graph.nodes.len() {
        // Exact returns first, then equal bound-one supports at equal height.
        let mut candidates = Vec::new();
        if graph.path_between(x, x).is_some() {
            candidates.push(x);
        }
        let hx = height(&graph.nodes[x]);
        for y in graph.reachable_from(x) {
            if y != x && height(&graph.nodes[y]) == hx {
                candidates.push(y);
            }
        }
        for y in candidates {
            if y != x {
                let (fx, fy) = (fingerprint(x), fingerprint(y));
                if fx.is_none() || fx != fy {
                    continue;
                }
            }
            let Some(path) = graph.path_between(x, y) else { continue };
            let cycle = graph.links(&path);
            if let Some((t, witnesses)) = unfold_loop(graph, x, &cycle, y) {
                let mut sequence: Vec<LambdaSum> = graph
                    .root_path(x)
                    .iter()
                    .map(|&e| graph.nodes[graph.edges[e].src].clone())
                    .collect();
                sequence.push(graph.nodes[x].clone());
                sequence.extend(path.iter().map(|&e| graph.nodes[graph.edges[e].dst].clone()));
                return Some((sequence, t, witnesses));
            }
        }
    }
    None
}

fn growth_witness(m: &LambdaSum) -> Option<(Vec<LambdaSum>, BTreeSet<RTerm>, Vec<RTerm>)> {
    let chain = explored_chain(m, GROWTH_STEPS);
    if chain.len() <= GROWTH_STEPS || !chain.windows(2).all(|w| height(&w[0]) < height(&w[1])) {
        return None;
    }
    let mut links = Vec::new();
    let mut tests = BTreeSet::new();
    let mut witnesses = Vec::new();
    for (i, mi) in chain.iter().enumerate() {
        let lin = linear_expansion(mi);
        let ti = smallest(&lin)?;
        witnesses.push(antireduce_chain(&links, &ti)?);
        tests.extend(lin);
        if i + 1 < chain.len() {
            let path: RedexPath = redex_paths(mi).into_iter().next()?;
            links.push(ChainLink {
                source: mi.clone(),
                path,
            });
        }
    }
    Some((chain, tests, witnesses))
}

/// Searches the partial-reduction graph of `m` (at most `fuel` nodes) for evidence
/// of non-termination. `None` is not a proof of strong normalisation.
pub fn nonsn_witness_search(m: &LambdaSum, fuel: usize) -> Option<WitnessPackage> {
    // The graph grows geometrically so that short loops are found cheaply.
    let mut graph = ReductionGraph::new(m);
    let mut budget = 1;
    let found = loop {
        budget = (budget * 2).min(fuel);
        graph.expand(budget);
        let found = loop_witness(&graph);
        if found.is_some() || graph.complete || budget == fuel {
            break found;
        }
    };
    if found.is_none() && graph.complete && !graph.has_cycle() {
        return None;
    }
    if let Some((sequence, t, witnesses)) = found {
        let test_set = BTreeSet::from([t]);
        let audit = duality_audit(m, &StructureTag::Explicit(vec![test_set.clone()]), EVIDENCE_BOUND);
        return Some(WitnessPackage {
            kind: WitnessKind::Loop,
            sequence,
            test_set,
            witnesses,
            audit,
        });
    }
    let (sequence, test_set, witnesses) = growth_witness(m)?;
    let audit = duality_audit(m, &StructureTag::Explicit(vec![test_set.clone()]), EVIDENCE_BOUND);
    Some(WitnessPackage {
        kind: WitnessKind::GrowingHeight,
        sequence,
        test_set,
        witnesses,
        audit,
    })
}

/// Distinct support terms of `m`, with bags of at most `bag_bound` elements, that reduce to `goal`.
///
/// Follows a shortest partial-reduction path to a term whose support contains `goal`,
/// going `i = 0, 1, …` times around a loop met on the way, and lifts `goal` back to `m`.
pub fn goal_witnesses(m: &LambdaSum, goal: &RTerm, fuel: usize, wanted: usize, bag_bound: usize) -> Vec<RTerm> {
    let mut graph = ReductionGraph::new(m);
    let mut budget = 1;
    let (route, loop_at) = loop {
        budget = (budget * 2).min(fuel);
        graph.expand(budget);
        let target = (0..graph.nodes.len()).find(|&n| in_support(&graph.nodes[n], goal));
        let exhausted = graph.complete || budget == fuel;
        let Some(target) = target else {
            if exhausted {
                return Vec::new();
            }
            continue;
        };
        let route = graph.root_path(target);
        let along: Vec<usize> = std::iter::once(0)
            .chain(route.iter().map(|&e| graph.edges[e].dst))
            .collect();
        let loop_at = along
            .iter()
            .enumerate()
            .find_map(|(pos, &x)| graph.path_between(x, x).map(|c| (pos, c)));
        if loop_at.is_some() || exhausted {
            break (route, loop_at);
        }
    };
    let mut out: Vec<RTerm> = Vec::new();
    let push = |s: Option<RTerm>, out: &mut Vec<RTerm>| {
        if let Some(s) = s {
            if s.max_bag() <= bag_bound && !out.contains(&s) {
                out.push(s);
            }
        }
    };
    match loop_at {
        None => push(antireduce_chain(&graph.links(&route), goal), &mut out),
        Some((pos, cycle)) => {
            // A loop can repeat forever; stop after a few unsuccessful rounds.
            for i in 0..wanted + 2 * UNFOLDINGS {
                if out.len() >= wanted {
                    break;
                }
                let mut edges = route[..pos].to_vec();
                for _ in 0..i {
                    edges.extend_from_slice(&cycle);
                }
                edges.extend_from_slice(&route[pos..]);
                push(antireduce_chain(&graph.links(&edges), goal), &mut out);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::term;
    use crate::finiteness::audit::Verdict;
    use crate::resource::{parse_resource, reduces_to};

    #[test]
    fn omega_loop() {
        let w = nonsn_witness_search(&term("Omega"), 100).expect("witness");
        assert_eq!(w.kind, WitnessKind::Loop);
        let t = parse_resource("(\\x. x [x]) [\\x. x [x]]").unwrap();
        assert_eq!(w.test_set, BTreeSet::from([t.clone()]));
        assert_eq!(w.audit.verdict, Verdict::GrowthDetected);
        let sizes: Vec<usize> = w.witnesses.iter().map(RTerm::size).collect();
        assert!(sizes.windows(2).all(|p| p[0] < p[1]), "{sizes:?}");
        for s in &w.witnesses {
            assert!(in_support(&term("Omega"), s));
            assert!(reduces_to(s, &t));
        }
    }

    #[test]
    fn identity_has_none() {
        assert!(nonsn_witness_search(&term("I"), 100).is_none());
    }

    #[test]
    fn omega3_grows() {
        let w = nonsn_witness_search(&term("Omega3"), 50).expect("witness");
        assert_eq!(w.kind, WitnessKind::GrowingHeight);
        assert_eq!(w.sequence.len(), GROWTH_STEPS + 1);
        for s in &w.witnesses {
            assert!(in_support(&term("Omega3"), s));
        }
    }
}
