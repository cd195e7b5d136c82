//! Fuel-bounded exploration of the β-reduction graph.

use std::collections::HashMap;

use crate::lambda::reduce::{redex_paths, reduce_at, RedexPath};
use crate::lambda::term::LambdaSum;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SnVerdict {
    /// The reduction graph is finite and acyclic; the longest reduction has this length.
    StronglyNormalizing { max_reduction_length: usize },
    /// A reduction path that returns to a term already on it. First and last entries coincide.
    NotSn { cycle: Vec<LambdaSum> },
    /// More than `fuel` distinct terms were reached.
    Unknown { visited: usize },
}

impl SnVerdict {
    pub fn is_sn(&self) -> bool {
        matches!(self, SnVerdict::StronglyNormalizing { .. })
    }
}

enum Mark {
    OnStack(usize),
    Done(usize),
}

struct Frame {
    term: LambdaSum,
    /// Children are built on demand: deep searches only ever take a few.
    paths: Vec<RedexPath>,
    next: usize,
    longest: usize,
}

/// Depth-first search with memoized longest-path lengths. `fuel` bounds the
/// number of distinct terms visited.
pub fn sn_explore(m: &LambdaSum, fuel: usize) -> SnVerdict {
    let mut marks: HashMap<LambdaSum, Mark> = HashMap::new();
    let mut stack: Vec<Frame> = Vec::new();

    let open = |term: LambdaSum, stack: &mut Vec<Frame>, marks: &mut HashMap<LambdaSum, Mark>| {
        marks.insert(term.clone(), Mark::OnStack(stack.len()));
        let paths = redex_paths(&term);
        stack.push(Frame {
            term,
            paths,
            next: 0,
            longest: 0,
        });
    };

    if fuel == 0 {
        return SnVerdict::Unknown { visited: 0 };
    }
    open(m.clone(), &mut stack, &mut marks);

    while let Some(frame) = stack.last_mut() {
        if frame.next == frame.paths.len() {
            let done = stack.pop().expect("non-empty stack");
            marks.insert(done.term, Mark::Done(done.longest));
            match stack.last_mut() {
                Some(parent) => parent.longest = parent.longest.max(done.longest + 1),
                None => {
                    return SnVerdict::StronglyNormalizing {
                        max_reduction_length: done.longest,
                    }
                }
            }
            continue;
        }
        let child = reduce_at(&frame.term, &frame.paths[frame.next]);
        frame.next += 1;
        match marks.get(&child) {
            Some(Mark::Done(len)) => frame.longest = frame.longest.max(len + 1),
            Some(Mark::OnStack(at)) => {
                let mut cycle: Vec<LambdaSum> = stack[*at..].iter().map(|f| f.term.clone()).collect();
                cycle.push(child);
                return SnVerdict::NotSn { cycle };
            }
            None => {
                if marks.len() >= fuel {
                    return SnVerdict::Unknown {
                        visited: marks.len(),
                    };
                }
                open(child, &mut stack, &mut marks);
            }
        }
    }
    unreachable!("the root frame returns before the stack empties")
}
