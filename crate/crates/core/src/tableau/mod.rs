//! Signed tableau proof search over LLF terms.

mod config;
mod entry;
mod proof;
mod prover;
mod rules;

pub use config::{Budget, Config, Lexicon, SearchConfig};
pub use entry::{entity, is_entity, Entry, Sign, ENTITY_TAG};
pub use proof::{Closure, End, Justification, Node, Proof, Status, Tree};
pub use prover::{Outcome, Prover};
pub use rules::{closes, expand, EntityUse, Rule};
