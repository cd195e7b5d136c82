use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::types::ty::{enumerate_types, Type};

/// The subtyping preorder, decided by splitting the right-hand side.
pub fn subtype(a: &Type, b: &Type) -> bool {
    match b {
        Type::Inter(b1, b2) => subtype(a, b1) && subtype(a, b2),
        Type::Var(_) => a.conjuncts().into_iter().any(|c| c == b),
        Type::Arrow(c, d) => {
            // All arrow conjuncts whose domain accepts `c`; using every one of them is optimal.
            let cods: Vec<Type> = a
                .conjuncts()
                .into_iter()
                .filter_map(|t| match t {
                    Type::Arrow(ai, bi) if subtype(c, ai) => Some((**bi).clone()),
                    _ => None,
                })
                .collect();
            match Type::meet(cods) {
                Some(m) => subtype(&m, d),
                None => false,
            }
        }
    }
}

/// Mutual subtyping.
pub fn equivalent(a: &Type, b: &Type) -> bool {
    subtype(a, b) && subtype(b, a)
}

/// Typing contexts: one binding per variable.
pub type Context = BTreeMap<String, Type>;

/// `g1 ⊑ g2`: `g1` binds everything `g2` does, at smaller types.
pub fn context_le(g1: &Context, g2: &Context) -> bool {
    g2.iter().all(|(x, b)| g1.get(x).is_some_and(|a| subtype(a, b)))
}

/// Least relation on a finite universe of types closed under the generating rules,
/// reflexivity, transitivity and meet introduction.
pub struct SubtypeOracle {
    index: HashMap<Type, usize>,
    rows: Vec<Vec<u64>>,
}

impl SubtypeOracle {
    /// Saturates over all types with at most `depth` constructors on `vars`.
    pub fn new(vars: &[String], depth: usize) -> Self {
        let universe = enumerate_types(vars, depth);
        let n = universe.len();
        let index: HashMap<Type, usize> = universe.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        let words = n.div_ceil(64);
        let mut rows = vec![vec![0u64; words]; n];
        let set = |rows: &mut Vec<Vec<u64>>, i: usize, j: usize| -> bool {
            let (w, bit) = (j / 64, 1u64 << (j % 64));
            let fresh = rows[i][w] & bit == 0;
            rows[i][w] |= bit;
            fresh
        };
        let get = |rows: &Vec<Vec<u64>>, i: usize, j: usize| rows[i][j / 64] & (1u64 << (j % 64)) != 0;

        let mut arrows = Vec::new();
        let mut inters = Vec::new();
        for (i, t) in universe.iter().enumerate() {
            set(&mut rows, i, i);
            match t {
                Type::Inter(a, b) => {
                    set(&mut rows, i, index[&**a]);
                    set(&mut rows, i, index[&**b]);
                    inters.push((i, index[&**a], index[&**b]));
                    if let (Type::Arrow(a1, b1), Type::Arrow(a2, c)) = (&**a, &**b) {
                        if a1 == a2 {
                            let target = Type::arrow((**a1).clone(), Type::inter((**b1).clone(), (**c).clone()));
                            if let Some(&j) = index.get(&target) {
                                set(&mut rows, i, j);
                            }
                        }
                    }
                }
                Type::Arrow(a, b) => arrows.push((i, index[&**a], index[&**b])),
                Type::Var(_) => {}
            }
        }
        loop {
            let mut changed = false;
            // transitivity
            for i in 0..n {
                let mut acc = rows[i].clone();
                for (w, &word) in rows[i].iter().enumerate() {
                    let mut bits = word;
                    while bits != 0 {
                        let j = w * 64 + bits.trailing_zeros() as usize;
                        bits &= bits - 1;
                        if j != i {
                            for (a, x) in acc.iter_mut().zip(&rows[j]) {
                                *a |= x;
                            }
                        }
                    }
                }
                if acc != rows[i] {
                    rows[i] = acc;
                    changed = true;
                }
            }
            // arrow variance: A' ⊑ A and B ⊑ B' give A → B ⊑ A' → B'
            for &(i, a, b) in &arrows {
                for &(j, a2, b2) in &arrows {
                    if get(&rows, a2, a) && get(&rows, b, b2) {
                        changed |= set(&mut rows, i, j);
                    }
                }
            }
            // meet introduction
            for i in 0..n {
                for &(k, b, c) in &inters {
                    if get(&rows, i, b) && get(&rows, i, c) {
                        changed |= set(&mut rows, i, k);
                    }
                }
            }
            if !changed {
                break;
            }
        }
        SubtypeOracle { index, rows }
    }

    /// `None` when a type lies outside the universe.
    pub fn holds(&self, a: &Type, b: &Type) -> Option<bool> {
        let (i, j) = (*self.index.get(a)?, *self.index.get(b)?);
        Some(self.rows[i][j / 64] & (1u64 << (j % 64)) != 0)
    }

    pub fn universe_size(&self) -> usize {
        self.index.len()
    }
}

/// Bounded rule closure; types beyond `depth` constructors are out of reach and yield `false`.
pub fn subtype_oracle(a: &Type, b: &Type, depth: usize) -> bool {
    let mut vars = BTreeSet::new();
    a.vars_into(&mut vars);
    b.vars_into(&mut vars);
    let vars: Vec<String> = vars.into_iter().collect();
    SubtypeOracle::new(&vars, depth).holds(a, b).unwrap_or(false)
}
