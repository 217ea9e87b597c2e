//! Finite interpretations, concept evaluation, KB auditing, query matching
//! and a bounded model enumerator that serves as an independent oracle.
//!
//! Constraint expressions `sat(c)` are evaluated with the universe bound to
//! the whole domain, concept names to their extensions and role names to the
//! role successors of the element at hand. Successor expressions `succ(c)`
//! bind the universe to all role successors of the element and restrict
//! concept names to it.

pub mod bits;
pub mod cq;
pub mod enumerate;
pub mod eval;
pub mod interp;

pub use cq::cq_match;
pub use enumerate::{count_models, enumerate_models, find_countermodel, find_model, EnumOptions, EnumStats};
pub use eval::{eval, eval_pp, eval_scc, holds_at, satisfies, Evaluator, Report};
pub use interp::Interp;
