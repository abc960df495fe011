use serde::Deserialize;

use crate::lambda::{FeatureMode, Ty};

/// Prover settings, loadable from TOML:
///
/// ```toml
/// [budget]
/// rule_applications = 800
/// nodes = 200
///
/// [search]
/// explore_all_branches = false
/// strict_features = false
/// disabled_rules = ["pss"]
///
/// [lexicon]
/// auxiliary = ["zijn", "be", "staan"]
/// ```
#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub budget: Budget,
    pub search: SearchConfig,
    pub lexicon: Lexicon,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct Budget {
    pub rule_applications: usize,
    pub nodes: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { rule_applications: 800, nodes: 200 }
    }
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct SearchConfig {
    /// Keep expanding after an open saturated branch is found.
    pub explore_all_branches: bool,
    /// Require identical sentence features in rule guards.
    pub strict_features: bool,
    pub disabled_rules: Vec<String>,
}

/// Lexical classes consulted by rule guards, as lemma lists.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct Lexicon {
    pub existential: Vec<String>,
    pub universal: Vec<String>,
    pub negative: Vec<String>,
    pub auxiliary: Vec<String>,
    pub subsective: Vec<String>,
    pub relative: Vec<String>,
    pub expletive: Vec<String>,
    /// Predicates whose falsity about an entity is contradictory.
    pub existence: Vec<String>,
    pub passive_agent: Vec<String>,
}

fn owned(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

impl Default for Lexicon {
    fn default() -> Self {
        Lexicon {
            existential: owned(&["een", "a", "an", "some", "het", "de", "the", "s", "wat", "enkele", "sommige"]),
            universal: owned(&["alle", "elke", "iedere", "every", "all", "each"]),
            negative: owned(&["geen", "no"]),
            auxiliary: owned(&["zijn", "be", "staan", "worden", "do"]),
            subsective: owned(&[
                "young", "old", "big", "small", "large", "jong", "oud", "groot", "klein", "rood", "bruin", "kaki",
                "blauw", "zwart", "wit", "geel", "groen",
            ]),
            relative: owned(&["die", "dat", "wie", "wat", "who", "which", "that", "wh"]),
            expletive: owned(&["er", "there"]),
            existence: owned(&["zijn"]),
            passive_agent: owned(&["by", "door"]),
        }
    }
}

impl Config {
    pub fn from_toml(src: &str) -> Result<Config, toml::de::Error> {
        toml::from_str(src)
    }

    pub fn feature_mode(&self) -> FeatureMode {
        if self.search.strict_features {
            FeatureMode::Strict
        } else {
            FeatureMode::Lenient
        }
    }

    pub fn ty_eq(&self, a: &Ty, b: &Ty) -> bool {
        a.unifies(b, self.feature_mode())
    }

    pub fn rule_enabled(&self, name: &str) -> bool {
        !self.search.disabled_rules.iter().any(|r| r == name)
    }
}
