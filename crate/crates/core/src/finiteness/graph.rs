use std::collections::{HashMap, VecDeque};

use crate::finiteness::antireduce::ChainLink;
use crate::lambda::{partial_steps, LambdaSum, RedexPath};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub path: RedexPath,
    pub top_level: bool,
}

/// The partial-reduction graph below a term, explored breadth first.
#[derive(Clone, Debug)]
pub struct ReductionGraph {
    pub nodes: Vec<LambdaSum>,
    pub edges: Vec<Edge>,
    /// BFS tree: the edge that discovered each node (none for the root).
    pub parent: Vec<Option<usize>>,
    /// Every discovered node had its successors expanded.
    pub complete: bool,
    out: Vec<Vec<usize>>,
    index: HashMap<LambdaSum, usize>,
    expanded: usize,
}

impl ReductionGraph {
    /// Expands at most `fuel` nodes.
    pub fn explore(m: &LambdaSum, fuel: usize) -> Self {
        let mut g = ReductionGraph::new(m);
        g.expand(fuel);
        g
    }

    pub fn new(m: &LambdaSum) -> Self {
        ReductionGraph {
            nodes: vec![m.clone()],
            edges: Vec::new(),
            parent: vec![None],
            complete: false,
            out: vec![Vec::new()],
            index: HashMap::from([(m.clone(), 0)]),
            expanded: 0,
        }
    }

    /// Number of nodes whose successors are known.
    pub fn expanded(&self) -> usize {
        self.expanded
    }

    /// Continues the breadth-first expansion until `fuel` nodes are expanded in total.
    pub fn expand(&mut self, fuel: usize) {
        while self.expanded < self.nodes.len() && self.expanded < fuel {
            let src = self.expanded;
            self.expanded += 1;
            let here = self.nodes[src].clone();
            for step in partial_steps(&here) {
                let dst = match self.index.get(&step.target) {
                    Some(&d) => d,
                    None => {
                        let d = self.nodes.len();
                        self.index.insert(step.target.clone(), d);
                        self.nodes.push(step.target.clone());
                        self.parent.push(Some(self.edges.len()));
                        self.out.push(Vec::new());
                        d
                    }
                };
                self.out[src].push(self.edges.len());
                self.edges.push(Edge {
                    src,
                    dst,
                    path: step.path,
                    top_level: step.top_level,
                });
            }
        }
        self.complete = self.expanded == self.nodes.len();
    }

    pub fn successors(&self, node: usize) -> impl Iterator<Item = &Edge> {
        self.out[node].iter().map(|&e| &self.edges[e])
    }

    /// Edges from the root to `node` along the BFS tree.
    pub fn root_path(&self, node: usize) -> Vec<usize> {
        let mut path = Vec::new();
        let mut cur = node;
        while let Some(e) = self.parent[cur] {
            path.push(e);
            cur = self.edges[e].src;
        }
        path.reverse();
        path
    }

    /// Shortest non-empty edge path from `from` to `to`, within expanded nodes.
    pub fn path_between(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        let mut via: HashMap<usize, usize> = HashMap::new();
        let mut queue = VecDeque::new();
        for &e in &self.out[from] {
            let d = self.edges[e].dst;
            if let std::collections::hash_map::Entry::Vacant(slot) = via.entry(d) {
                slot.insert(e);
                queue.push_back(d);
            }
        }
        while let Some(n) = queue.pop_front() {
            if n == to {
                let mut path = vec![via[&n]];
                let mut cur = self.edges[via[&n]].src;
                while cur != from {
                    let e = via[&cur];
                    path.push(e);
                    cur = self.edges[e].src;
                }
                path.reverse();
                return Some(path);
            }
            for &e in &self.out[n] {
                let d = self.edges[e].dst;
                if let std::collections::hash_map::Entry::Vacant(slot) = via.entry(d) {
                    slot.insert(e);
                    queue.push_back(d);
                }
            }
        }
        None
    }

    /// Nodes reachable from `from` in one or more steps, nearest first.
    pub fn reachable_from(&self, from: usize) -> Vec<usize> {
        let mut seen = vec![false; self.nodes.len()];
        let mut order = Vec::new();
        let mut queue: VecDeque<usize> = self.successors(from).map(|e| e.dst).collect();
        while let Some(n) = queue.pop_front() {
            if std::mem::replace(&mut seen[n], true) {
                continue;
            }
            order.push(n);
            queue.extend(self.successors(n).map(|e| e.dst));
        }
        order
    }

    pub fn links(&self, edges: &[usize]) -> Vec<ChainLink> {
        edges
            .iter()
            .map(|&e| ChainLink {
                source: self.nodes[self.edges[e].src].clone(),
                path: self.edges[e].path.clone(),
            })
            .collect()
    }

    /// Whether some expanded step from the root hits a cycle.
    pub fn has_cycle(&self) -> bool {
        (0..self.nodes.len()).any(|n| self.path_between(n, n).is_some())
    }
}
