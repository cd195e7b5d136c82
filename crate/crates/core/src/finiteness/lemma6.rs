use crate::error::{Error, Result};
use crate::finiteness::antireduce::antireduce;
use crate::lambda::{height, partial_steps, LambdaSum};
use crate::resource::{reduces_strictly_to, reduces_to, RTerm};
use crate::taylor::{in_support, support_enum, SupportQuery};

/// Outcome of lifting every support term of a partial reduct back to the source.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Lemma6Report {
    pub checked: usize,
    /// A lift was found but it failed verification, or none was found at all.
    pub failures: Vec<(RTerm, String)>,
    /// Verified lifts whose bags exceed the search bound.
    pub beyond_bound: Vec<(RTerm, RTerm)>,
    /// `(t, s)` pairs, the first few checked.
    pub samples: Vec<(RTerm, RTerm)>,
    /// Bag cardinality up to which lifts count as found within bound.
    pub search_bound: usize,
}

impl Lemma6Report {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn within_bound(&self) -> bool {
        self.beyond_bound.is_empty()
    }
}

const SAMPLES: usize = 4;

/// For `m ⇝ n` and every `t ∈ ℳ(n)` with bags ≤ `bag_bound`, finds `s ∈ ℳ(m)`
/// with `s ⊒ t` (and `s ⊐ t` when `top_level`).
pub fn lemma6_check(m: &LambdaSum, n: &LambdaSum, top_level: bool, bag_bound: usize) -> Result<Lemma6Report> {
    let steps: Vec<_> = partial_steps(m)
        .into_iter()
        .filter(|s| s.target == *n && (!top_level || s.top_level))
        .collect();
    if steps.is_empty() {
        return Err(Error::Precondition(format!(
            "{n} is not a{} partial reduct of {m}",
            if top_level { " top-level" } else { "" }
        )));
    }
    let search_bound = bag_bound + height(m);
    let mut report = Lemma6Report {
        search_bound,
        ..Lemma6Report::default()
    };
    for t in support_enum(n, SupportQuery::bags(bag_bound)) {
        report.checked += 1;
        let mut problem = None;
        let mut lifted = None;
        for step in &steps {
            let Some(s) = antireduce(m, &step.path, &t) else {
                problem.get_or_insert_with(|| "no lift along the step".to_string());
                continue;
            };
            let ok = in_support(m, &s)
                && if top_level {
                    reduces_strictly_to(&s, &t)
                } else {
                    reduces_to(&s, &t)
                };
            if ok {
                lifted = Some(s);
                break;
            }
            problem = Some(format!("lift {s} fails verification"));
        }
        match lifted {
            Some(s) => {
                if s.max_bag() > search_bound {
                    report.beyond_bound.push((t.clone(), s.clone()));
                }
                if report.samples.len() < SAMPLES {
                    report.samples.push((t, s));
                }
            }
            None => report.failures.push((t, problem.unwrap_or_default())),
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::parse_lambda;
    use crate::resource::parse_resource;

    #[test]
    fn identity_redex() {
        let m = parse_lambda("(\\x. x) z").unwrap();
        let n = parse_lambda("z").unwrap();
        let r = lemma6_check(&m, &n, true, 2).unwrap();
        assert!(r.holds() && r.within_bound());
        assert_eq!(r.samples, vec![(parse_resource("z").unwrap(), parse_resource("(\\x. x) [z]").unwrap())]);
    }

    #[test]
    fn requires_a_step() {
        let m = parse_lambda("x").unwrap();
        assert!(matches!(lemma6_check(&m, &m, false, 1), Err(Error::Precondition(_))));
    }

    #[test]
    fn dropping_addends() {
        let m = parse_lambda("(\\x. x x) (a + b)").unwrap();
        let n = parse_lambda("a b").unwrap();
        let r = lemma6_check(&m, &n, true, 2).unwrap();
        assert!(r.holds(), "{:?}", r.failures);
    }
}
