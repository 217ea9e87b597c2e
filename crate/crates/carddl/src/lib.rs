//! Reasoning with global and local cardinality constraints in description logics.
//!
//! The crate decides satisfiability of ALCSCC++ concepts, consistency of
//! ALCSCC ABoxes with respect to extended restricted cardinality boxes, and
//! entailment of conjunctive queries. Positive verdicts come with an explicit
//! finite model that is checked by an independent evaluator.
//!
//! ```
//! use carddl::{syntax::parse_concept, satpp, Config};
//!
//! let e = parse_concept("sat(card(A) >= 4) and sat(A <= r) and sat(card(r) <= 3)").unwrap();
//! assert!(satpp::sat(&e, &Config::default()).unwrap().is_unsat());
//! ```

pub mod config;
pub mod consist;
pub mod error;
pub mod qfbapa;
pub mod query;
pub mod satpp;
pub mod semantics;
pub mod syntax;
pub mod transforms;

pub use config::Config;
pub use error::{Error, Result};
