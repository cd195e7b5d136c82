//! The non-deterministic λ-calculus with formal, non-idempotent sums.

mod metrics;
mod reduce;
mod sn;
mod syntax;
mod term;

pub use metrics::{height, simple_height, simple_size, size, term_metrics, TermMetrics};
pub use reduce::{
    beta_reducts, beta_steps, downset, downset_simple, erasure_le, normalize, partial_reducts,
    partial_steps, redex_paths, reduce_at, PartialStep, RedexPath, Step,
};
pub use sn::{sn_explore, SnVerdict};
pub use syntax::{parse_lambda, parse_lambda_with};
pub(crate) use syntax::{is_ident_char, Printer};
pub use term::{LambdaSum, SimpleTerm};
