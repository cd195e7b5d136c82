//! The intersection type system with subtyping and a sum rule.

mod derivation;
mod subtype;
mod synth;
mod ty;

pub use derivation::{check_derivation, inter_elim, is_valid, remark1_derivation, Derivation, Rule, Side};
pub use subtype::{context_le, equivalent, subtype, subtype_oracle, Context, SubtypeOracle};
pub use synth::synthesize;
pub use ty::{enumerate_types, parse_type, Type};
