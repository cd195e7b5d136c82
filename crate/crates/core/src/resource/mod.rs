//! The resource calculus: terms with multiset arguments, rig-valued finite
//! combinations, differential substitution and resource reduction.

mod combination;
mod reduce;
mod rig;
mod syntax;
mod term;

pub use combination::Combination;
pub use reduce::{
    degree, dsubst, fire_at, first_redex, is_normal, nf, nf_counts, nf_term, reach, red_reducts, redexes,
    reduces_strictly_to, reduces_to, successors, Counts, RPath, RStep,
};
pub(crate) use reduce::nf_counts_memo;
pub use rig::{format_coeff, Coeff, Rig};
pub use syntax::parse_resource;
pub use term::{projections, rterm_metrics, Bag, Projections, RTerm, RTermMetrics};
