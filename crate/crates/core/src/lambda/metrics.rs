use std::collections::BTreeSet;

use crate::lambda::term::{LambdaSum, SimpleTerm};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermMetrics {
    pub height: usize,
    pub size: usize,
    pub free_vars: BTreeSet<String>,
}

pub fn height(m: &LambdaSum) -> usize {
    m.iter().map(|(t, _)| simple_height(t)).max().unwrap_or(0)
}

pub fn simple_height(t: &SimpleTerm) -> usize {
    match t {
        SimpleTerm::Var(_) => 1,
        SimpleTerm::Abs(_, b) => 1 + simple_height(b),
        SimpleTerm::App(f, a) => 1 + simple_height(f).max(height(a)),
    }
}

/// Symbol count; each `+` counts as one symbol.
pub fn size(m: &LambdaSum) -> usize {
    let n = m.total_len();
    m.iter().map(|(t, k)| k * simple_size(t)).sum::<usize>() + n - 1
}

pub fn simple_size(t: &SimpleTerm) -> usize {
    match t {
        SimpleTerm::Var(_) => 1,
        SimpleTerm::Abs(_, b) => 1 + simple_size(b),
        SimpleTerm::App(f, a) => 1 + simple_size(f) + size(a),
    }
}

pub fn term_metrics(m: &LambdaSum) -> TermMetrics {
    TermMetrics {
        height: height(m),
        size: size(m),
        free_vars: m.free_vars(),
    }
}
