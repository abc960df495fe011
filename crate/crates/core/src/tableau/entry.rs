use std::fmt;

use crate::lambda::{Term, Ty};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    T,
    F,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::T => Sign::F,
            Sign::F => Sign::T,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::T => "T",
            Sign::F => "F",
        })
    }
}

/// A term, the arguments it is applied to, and a truth sign.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Entry {
    pub term: Term,
    pub args: Vec<Term>,
    pub sign: Sign,
}

impl Entry {
    pub fn new(term: Term, args: Vec<Term>, sign: Sign) -> Entry {
        Entry { term, args, sign }
    }

    pub fn root(term: Term, sign: Sign) -> Entry {
        Entry { term, args: Vec::new(), sign }
    }
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let args: Vec<String> = self.args.iter().map(Term::pretty).collect();
        write!(f, "{} {} @ [{}]", self.sign, self.term.pretty(), args.join(", "))
    }
}

/// Tag marking tableau entity constants.
pub const ENTITY_TAG: &str = "ENT";

pub fn entity(name: &str) -> Term {
    crate::lambda::constant(name, ENTITY_TAG, Ty::np())
}

pub fn is_entity(t: &Term) -> bool {
    t.as_const().is_some_and(|c| c.pos == ENTITY_TAG)
}
