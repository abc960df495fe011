use std::collections::HashMap;

use super::LlfError;
use crate::ingest::SyntacticDoc;
use crate::lambda::{lam, type_of, Calculus, Const, Ctx, Term, Ty};

/// Many-to-one map from syntactic atoms (with feature, e.g. `s:main`) to
/// semantic types.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeSimplificationMap {
    pub entries: HashMap<String, Ty>,
}

impl Default for TypeSimplificationMap {
    fn default() -> Self {
        let rows = [
            ("s:main", "s:dcl"),
            ("s:sub", "s:sub"),
            ("vnw", "np"),
            ("vz", "pr"),
            ("tw", "np"),
            ("ahi", "np->s:ng"),
            ("ww", "np->s:b"),
            ("part", "np->s:pt"),
            ("ti", "np->s:to"),
            ("oti", "np->s:to"),
            ("ap", "np->s:adj"),
            ("adj", "np->s:adj"),
            ("n", "n"),
            ("np", "np"),
            ("s", "s"),
            ("pp", "pp"),
        ];
        TypeSimplificationMap {
            entries: rows.iter().map(|(k, v)| (k.to_string(), v.parse().expect("valid default type"))).collect(),
        }
    }
}

impl TypeSimplificationMap {
    /// Reads `atom<TAB>type` lines on top of the defaults.
    pub fn with_tsv(mut self, src: &str) -> Result<Self, String> {
        for (i, line) in src.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('\t').ok_or_else(|| format!("line {}: expected two columns", i + 1))?;
            let ty: Ty = v.trim().parse().map_err(|e| format!("line {}: {e}", i + 1))?;
            Calculus::Semantic.check(&ty).map_err(|e| format!("line {}: {e}", i + 1))?;
            self.entries.insert(k.trim().to_string(), ty);
        }
        Ok(self)
    }

    pub fn map_type(&self, ty: &Ty) -> Result<Ty, LlfError> {
        ty.try_map_atoms(&mut |name, feature| {
            let key = match feature {
                Some(f) => format!("{name}:{f}"),
                None => name.to_string(),
            };
            self.entries.get(&key).cloned().ok_or(LlfError::UnmappedAtom(key))
        })
    }
}

/// Maps every type in the term through `map`; constants keep lemma and tag.
pub fn simplify(doc: &SyntacticDoc, map: &TypeSimplificationMap) -> Result<Term, LlfError> {
    fn go(t: &Term, map: &TypeSimplificationMap) -> Result<Term, LlfError> {
        Ok(match t {
            Term::Var(_) => t.clone(),
            Term::Const(c) => Term::Const(Const { ty: map.map_type(&c.ty)?, ..c.clone() }),
            Term::App(f, a) => crate::lambda::app(go(f, map)?, go(a, map)?),
            Term::Abs(x, ty, b) => lam(x, map.map_type(ty)?, go(b, map)?),
        })
    }
    let out = go(&doc.term, map)?;
    type_of(&out, &Ctx::new())
        .map_err(|source| LlfError::IllTyped { stage: "simplification", source: Box::new(source) })?;
    Ok(out)
}
