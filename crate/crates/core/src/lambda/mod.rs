//! Types, terms, typing, substitution and reduction.

mod reduce;
mod sexpr;
mod term;
mod ty;
mod typing;

pub use reduce::{beta_reduce, eta_reduce, normalize, step, FuelExhausted, Strategy};
pub use sexpr::{parse_term, parse_terms, ParseError};
pub use term::{app, apps, constant, lam, var, Const, Step, Term};
pub use ty::{Calculus, FeatureMode, Ty, SCHEMA_ATOM, SEMANTIC_ATOMS, SENTENCE_FEATURES, SYNTACTIC_ATOMS};
pub use typing::{check_linear, fresh_name, substitute, substitute_checked, type_of, type_of_with, Ctx};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("type mismatch in {term}: expected {expected}, found {found}")]
    Mismatch { term: String, expected: Ty, found: Ty },
    #[error("{term} of type {ty} is applied but is not a function")]
    NotAFunction { term: String, ty: Ty },
    #[error("unbound variable {0}")]
    UnboundVariable(String),
    #[error("atom {atom} is not in the {calculus:?} registry")]
    UnknownAtom { atom: String, calculus: Calculus },
    #[error("bad type syntax: {0}")]
    Syntax(String),
}
