use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Three-way inference label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Entailment,
    Contradiction,
    Neutral,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown label {0:?}")]
pub struct UnknownLabel(pub String);

impl Label {
    pub const ALL: [Label; 3] = [Label::Entailment, Label::Contradiction, Label::Neutral];

    pub fn index(self) -> usize {
        match self {
            Label::Entailment => 0,
            Label::Contradiction => 1,
            Label::Neutral => 2,
        }
    }

    pub fn short(self) -> &'static str {
        match self {
            Label::Entailment => "E",
            Label::Contradiction => "C",
            Label::Neutral => "N",
        }
    }

    pub fn is_neutral(self) -> bool {
        self == Label::Neutral
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Entailment => "ENTAILMENT",
            Label::Contradiction => "CONTRADICTION",
            Label::Neutral => "NEUTRAL",
        })
    }
}

impl FromStr for Label {
    type Err = UnknownLabel;

    fn from_str(s: &str) -> Result<Label, UnknownLabel> {
        match s.trim().to_ascii_uppercase().as_str() {
            "E" | "ENTAILMENT" => Ok(Label::Entailment),
            "C" | "CONTRADICTION" => Ok(Label::Contradiction),
            "N" | "NEUTRAL" => Ok(Label::Neutral),
            _ => Err(UnknownLabel(s.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!("entailment".parse::<Label>().unwrap(), Label::Entailment);
        assert_eq!("C".parse::<Label>().unwrap(), Label::Contradiction);
        assert!("maybe".parse::<Label>().is_err());
        for l in Label::ALL {
            assert_eq!(l.to_string().parse::<Label>().unwrap(), l);
        }
    }
}
