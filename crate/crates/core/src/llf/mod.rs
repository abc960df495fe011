//! Conversion of syntactic terms into lambda logical forms: type
//! simplification, term fixing and NP type-raising.

mod fix;
mod raise;
mod simplify;

pub use fix::{apply_rule_at, fix, lemmatize, rule_sites, FixConfig, FixRule};
pub use raise::type_raise;
pub use simplify::{simplify, TypeSimplificationMap};

use thiserror::Error;

use crate::ingest::{normalize_tags, IngestError, LlfDoc, SyntacticDoc, TagMap};
use crate::lambda::{type_of, Ctx, Term, TypeError};

#[derive(Debug, Error)]
pub enum LlfError {
    #[error("no simplified type for syntactic atom {0}")]
    UnmappedAtom(String),
    #[error("fixing did not reach a fixpoint within {0} rule applications")]
    FixDivergence(usize),
    #[error("type raising failed: {0}")]
    RaiseFailure(String),
    #[error("{stage} produced an ill-typed term: {source}")]
    IllTyped {
        stage: &'static str,
        #[source]
        source: Box<TypeError>,
    },
    #[error("logical form has type {0}, expected s")]
    NotASentence(String),
    #[error(transparent)]
    Tags(#[from] IngestError),
}

/// Everything needed to turn a syntactic document into a logical form.
#[derive(Clone, Debug)]
pub struct Pipeline {
    pub tag_maps: Vec<TagMap>,
    pub types: TypeSimplificationMap,
    pub fix: FixConfig,
}

impl Default for Pipeline {
    fn default() -> Self {
        Pipeline {
            tag_maps: vec![TagMap::alpino(), TagMap::universal()],
            types: TypeSimplificationMap::default(),
            fix: FixConfig::default(),
        }
    }
}

/// Intermediate results of one conversion, kept for inspection.
#[derive(Clone, Debug)]
pub struct Stages {
    pub simplified: Term,
    pub fixed: Term,
    pub llf: Term,
}

impl Pipeline {
    pub fn stages(&self, doc: &SyntacticDoc) -> Result<Stages, LlfError> {
        let doc = normalize_tags(doc, &self.tag_maps)?;
        let simplified = simplify(&doc, &self.types)?;
        let fixed = fix(&lemmatize(&simplified, &doc.lemma_map), &self.fix)?;
        let llf = type_raise(&fixed)?;
        let ty = type_of(&llf, &Ctx::new())
            .map_err(|source| LlfError::IllTyped { stage: "type raising", source: Box::new(source) })?;
        if !ty.is_sentence() {
            return Err(LlfError::NotASentence(ty.to_string()));
        }
        Ok(Stages { simplified, fixed, llf })
    }

    pub fn convert(&self, doc: &SyntacticDoc) -> Result<LlfDoc, LlfError> {
        let stages = self.stages(doc)?;
        Ok(LlfDoc { id: doc.sentence_id.clone(), text: doc.raw_text.clone(), term: stages.llf })
    }
}
