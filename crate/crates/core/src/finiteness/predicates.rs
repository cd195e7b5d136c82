use std::collections::BTreeSet;

use crate::names::fresh_name;
use crate::resource::{projections, Bag, RTerm};

/// Structure predicates evaluated on a finite set of resource terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureReport {
    pub is_linear_set: bool,
    /// Least `n` bounding every bag cardinality (0 for sets without applications).
    pub bound_of_bags: usize,
    /// Dispersion only constrains infinite sets; every finite set has it.
    pub is_dispersed: bool,
    pub pi_0: BTreeSet<RTerm>,
    pub pi_1: BTreeSet<RTerm>,
    /// Bodies of abstractions, opened to the fresh variable `fresh`.
    pub pi_x: BTreeSet<RTerm>,
    /// `{⟨s⟩[fresh] | s ∈ a}`.
    pub expansion: BTreeSet<RTerm>,
    pub fresh: String,
    /// The projections stay within the class of `a` (linear, resp. bounded by `bound_of_bags`).
    pub projections_preserve_class: bool,
    pub expansion_preserves_class: bool,
}

fn in_class(set: &BTreeSet<RTerm>, linear: bool, bound: usize) -> bool {
    set.iter().all(|t| t.max_bag() <= bound && (!linear || t.is_linear()))
}

pub fn structure_predicates(a: &BTreeSet<RTerm>) -> StructureReport {
    let is_linear_set = a.iter().all(RTerm::is_linear);
    let bound_of_bags = a.iter().map(RTerm::max_bag).max().unwrap_or(0);
    let mut free = BTreeSet::new();
    for t in a {
        t.free_vars_into(&mut free);
    }
    let fresh = fresh_name("x", &free);
    let mut pi_0 = BTreeSet::new();
    let mut pi_1 = BTreeSet::new();
    let mut pi_x = BTreeSet::new();
    for t in a {
        let p = projections(t);
        pi_0.extend(p.pi_0);
        pi_1.extend(p.pi_1);
        if let RTerm::Abs(_, body) = t {
            pi_x.insert(body.open(&fresh));
        }
    }
    let expansion: BTreeSet<RTerm> = a
        .iter()
        .map(|s| RTerm::app(s.clone(), Bag::new(vec![RTerm::var(fresh.clone())])))
        .collect();
    let projections_preserve_class = [&pi_0, &pi_1, &pi_x]
        .iter()
        .all(|s| in_class(s, is_linear_set, bound_of_bags));
    // The expansion adds a bag of size one.
    let expansion_preserves_class = in_class(&expansion, is_linear_set, bound_of_bags.max(1));
    StructureReport {
        is_linear_set,
        bound_of_bags,
        is_dispersed: true,
        pi_0,
        pi_1,
        pi_x,
        expansion,
        fresh,
        projections_preserve_class,
        expansion_preserves_class,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resource::parse_resource;

    fn set(items: &[&str]) -> BTreeSet<RTerm> {
        items.iter().map(|s| parse_resource(s).unwrap()).collect()
    }

    #[test]
    fn examples() {
        let r = structure_predicates(&set(&["\\x. x [x]"]));
        assert!(r.is_linear_set);
        assert_eq!(r.bound_of_bags, 1);
        assert_eq!(r.pi_x, set(&["x [x]"]));

        let r = structure_predicates(&set(&["y [z, z]"]));
        assert_eq!(r.bound_of_bags, 2);
        assert_eq!(r.pi_0, set(&["y"]));
        assert_eq!(r.pi_1, set(&["z"]));
        assert!(!r.is_linear_set);

        let r = structure_predicates(&BTreeSet::new());
        assert!(r.is_linear_set);
        assert_eq!(r.bound_of_bags, 0);
        assert!(r.projections_preserve_class && r.expansion_preserves_class);
    }

    #[test]
    fn fresh_variable_avoids_free_names() {
        let r = structure_predicates(&set(&["\\y. x [y]"]));
        assert_eq!(r.fresh, "x1");
        assert_eq!(r.pi_x, set(&["x [x1]"]));
        assert_eq!(r.expansion, set(&["(\\y. x [y]) [x1]"]));
    }
}
