//! Cones of antireduction, duality audits and the witness constructions behind
//! the characterisation of strong normalisation through Taylor supports.

mod antireduce;
mod audit;
mod graph;
mod lemma6;
mod predicates;
mod witness;

pub use antireduce::{antireduce, antireduce_chain, antireduce_simple, ChainLink};
pub use audit::{
    cone_member, duality_audit, duality_audit_limited, explored_chain, linear_test_set, AuditReport, AuditRow,
    StructureTag, Verdict, DEFAULT_AUDIT_LIMIT,
};
pub use graph::{Edge, ReductionGraph};
pub use lemma6::{lemma6_check, Lemma6Report};
pub use predicates::{structure_predicates, StructureReport};
pub use witness::{goal_witnesses, nonsn_witness_search, WitnessKind, WitnessPackage, EVIDENCE_BOUND};
