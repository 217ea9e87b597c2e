//! Concept, constraint, knowledge-base and query syntax.
//!
//! The surface language is line oriented. A KB document consists of sections
//! `tbox:`, `abox:`, `erc:`, `ec:` and `goal:`; each line is either
//! `section: item` or a bare `section:` header followed by item lines.
//!
//! ```text
//! tbox: A <= succ(card(r inter B) >= 1)
//! abox: A(a)
//! abox: r(a, b)
//! erc:  card(A) + 1 <= card(B)
//! ```

pub mod ast;
pub mod encode;
pub mod lexer;
pub mod normalize;
pub mod parser;
pub mod render;

pub use ast::*;
pub use encode::{
    ecbox_to_concept, encode_nominal, encode_role_conjunction, encode_role_negation, encode_universal_role,
    scc_to_pp,
};
pub use normalize::{normalize_kb, Normalized};
pub use parser::{card_ge, card_le, parse_concept, parse_constraint, parse_kb, parse_query};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("duplicate section '{0}'")]
    DuplicateSection(String),
    #[error("name '{name}' used both as {first} and as {second}")]
    NameClash { name: String, first: String, second: String },
}

impl ParseError {
    pub fn syntax(line: usize, col: usize, msg: &str) -> Self {
        ParseError::Syntax { line, col, msg: msg.to_string() }
    }
}
