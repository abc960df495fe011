//! Natural-logic tableau prover for Dutch natural language inference.
//!
//! Pre-parsed typelogical terms are converted into lambda logical forms,
//! which a signed tableau prover checks for entailment or contradiction
//! against a WordNet-style lexical knowledge base. Missing lexical
//! knowledge can be learned abductively from labelled problems.

pub mod abduction;
pub mod harness;
pub mod ingest;
pub mod kb;
pub mod label;
pub mod lambda;
pub mod llf;
pub mod tableau;

pub use label::Label;
