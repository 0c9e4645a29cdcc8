//! Document preparation and the design matrix that feeds the classifiers.

use std::collections::HashMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{Corpus, Label};
use crate::cues::{extract_cues, inventory, Availability, CueError, CueVector, LexiconSet};
use crate::hashing::hash_parts;
use crate::ngrams::{extract_ngrams, NgramConfig, NgramError, PhonemeUnit, Vocabulary};
use crate::setup::FeatureSetup;
use crate::textproc::{AnnotatedDocument, ConlluSentence, Phonemizer, TextError, TokenizerOptions};

#[derive(Debug, Error)]
pub enum FeatureError {
    #[error(transparent)]
    Text(#[from] TextError),
    #[error(transparent)]
    Cue(#[from] CueError),
    #[error(transparent)]
    Ngram(#[from] NgramError),
    #[error("stopword removal requested but the {0} lexicon set has no stopwords.txt")]
    NoStopwords(String),
    #[error("documents carry no cue vectors; prepare them with cues enabled")]
    CuesMissing,
    #[error("no cue is available in every training document")]
    NoCues,
    #[error("schema {expected} does not match {found}")]
    SchemaMismatch { expected: String, found: String },
}

/// A document annotated and, when requested, scored on every cue.
#[derive(Debug, Clone, PartialEq)]
pub struct PreparedDoc {
    pub annotated: AnnotatedDocument,
    pub cues: Option<CueVector>,
}

impl PreparedDoc {
    pub fn id(&self) -> &str {
        &self.annotated.doc.id
    }

    pub fn label(&self) -> Label {
        self.annotated.doc.label
    }

    /// Renames the document (used when corpora are merged).
    pub fn with_id(mut self, id: String) -> PreparedDoc {
        if let Some(c) = self.cues.as_mut() {
            c.doc_id = id.clone();
        }
        self.annotated.doc.id = id;
        self
    }
}

/// How documents are annotated before feature extraction.
pub struct Preparation<'a> {
    pub tokenizer: TokenizerOptions,
    /// CoNLL-U sentences by document id; documents without an entry fall
    /// back to the tokenizer.
    pub annotations: Option<&'a HashMap<String, Vec<ConlluSentence>>>,
    pub phonemizer: Option<&'a dyn Phonemizer>,
    /// Compute cue vectors with this lexicon set.
    pub lexicons: Option<&'a LexiconSet>,
}

pub fn prepare_document(
    doc: &crate::corpus::Document,
    prep: &Preparation<'_>,
) -> Result<PreparedDoc, FeatureError> {
    let mut annotated = match prep.annotations.and_then(|a| a.get(&doc.id)) {
        Some(sents) => AnnotatedDocument::from_conllu(doc.clone(), sents.clone())?,
        None => AnnotatedDocument::from_text(doc.clone(), prep.tokenizer),
    };
    if let Some(p) = prep.phonemizer {
        annotated.attach_phonemes(p)?;
    }
    let cues = prep.lexicons.map(|lex| extract_cues(&annotated, lex)).transpose()?;
    Ok(PreparedDoc { annotated, cues })
}

pub fn prepare_corpus(corpus: &Corpus, prep: &Preparation<'_>) -> Result<Vec<PreparedDoc>, FeatureError> {
    corpus.documents().iter().map(|d| prepare_document(d, prep)).collect()
}

/// Serializable description of the columns of a design matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemaSpec {
    pub setup: FeatureSetup,
    pub lexicon_version: Option<String>,
    pub cues: Vec<String>,
    pub ngrams: Vec<VocabularySpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VocabularySpec {
    pub config: NgramConfig,
    pub config_hash: String,
    pub source: String,
    pub features: Vec<String>,
}

/// Cue columns followed by each vocabulary's n-gram columns.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSchema {
    pub setup: FeatureSetup,
    pub lexicon_version: Option<String>,
    pub cues: Vec<String>,
    pub vocabularies: Vec<Vocabulary>,
}

/// Fitting options shared by every n-gram block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemaOptions {
    pub top_k: usize,
    pub phoneme_unit: PhonemeUnit,
}

impl FeatureSchema {
    /// Chooses columns from the training documents only. Cue columns are the
    /// available cues present in every training document; cues that are not
    /// applicable or lack a resource are left out, never imputed.
    pub fn fit(
        setup: &FeatureSetup,
        train: &[PreparedDoc],
        lexicons: Option<&LexiconSet>,
        opts: SchemaOptions,
        source: &str,
    ) -> Result<FeatureSchema, FeatureError> {
        let mut cues = Vec::new();
        let mut lexicon_version = None;
        if setup.cues {
            let lex = lexicons.ok_or(FeatureError::CuesMissing)?;
            lexicon_version = Some(lex.version().to_string());
            for spec in inventory(lex) {
                if spec.availability != Availability::Available {
                    continue;
                }
                let mut all = true;
                for d in train {
                    let v = d.cues.as_ref().ok_or(FeatureError::CuesMissing)?;
                    if v.get(&spec.name).is_none() {
                        all = false;
                        break;
                    }
                }
                if all {
                    cues.push(spec.name);
                }
            }
            if cues.is_empty() {
                return Err(FeatureError::NoCues);
            }
        }
        let mut vocabularies = Vec::new();
        for spec in &setup.ngrams {
            let config = spec.config(opts.top_k, opts.phoneme_unit);
            let counts = ngram_counts(train, &config, lexicons)?;
            vocabularies.push(Vocabulary::from_counts(&counts, &config, source)?);
        }
        Ok(FeatureSchema {
            setup: setup.clone(),
            lexicon_version,
            cues,
            vocabularies,
        })
    }

    pub fn columns(&self) -> Vec<String> {
        let mut out = self.cues.clone();
        for v in &self.vocabularies {
            out.extend(v.features().iter().cloned());
        }
        out
    }

    pub fn width(&self) -> usize {
        self.cues.len() + self.vocabularies.iter().map(Vocabulary::len).sum::<usize>()
    }

    pub fn spec(&self) -> SchemaSpec {
        SchemaSpec {
            setup: self.setup.clone(),
            lexicon_version: self.lexicon_version.clone(),
            cues: self.cues.clone(),
            ngrams: self
                .vocabularies
                .iter()
                .map(|v| VocabularySpec {
                    config: v.config.clone(),
                    config_hash: v.config.hash(),
                    source: v.source.clone(),
                    features: v.features().to_vec(),
                })
                .collect(),
        }
    }

    pub fn from_spec(spec: &SchemaSpec) -> Result<FeatureSchema, FeatureError> {
        let mut vocabularies = Vec::new();
        for v in &spec.ngrams {
            if v.config.hash() != v.config_hash {
                return Err(FeatureError::SchemaMismatch {
                    expected: v.config_hash.clone(),
                    found: v.config.hash(),
                });
            }
            vocabularies.push(Vocabulary::with_features(
                v.config.clone(),
                v.source.clone(),
                v.features.clone(),
            ));
        }
        Ok(FeatureSchema {
            setup: spec.setup.clone(),
            lexicon_version: spec.lexicon_version.clone(),
            cues: spec.cues.clone(),
            vocabularies,
        })
    }

    /// Content hash over the setup, lexicon version and every column.
    pub fn hash(&self) -> String {
        let mut parts = vec![
            "schema-v1".to_string(),
            self.setup.canonical(),
            self.lexicon_version.clone().unwrap_or_default(),
        ];
        parts.push(format!("cues={}", self.cues.len()));
        parts.extend(self.cues.iter().cloned());
        for v in &self.vocabularies {
            parts.push(format!("vocab={}:{}", v.config.hash(), v.len()));
            parts.extend(v.features().iter().cloned());
        }
        hash_parts(parts.iter().map(String::as_str))[..16].to_string()
    }

    /// Rows follow `docs`. A cue missing from a document is imputed as 0.
    pub fn transform(&self, docs: &[PreparedDoc], lexicons: Option<&LexiconSet>) -> Result<DesignMatrix, FeatureError> {
        let width = self.width();
        let mut x = DMatrix::zeros(docs.len(), width);
        if !self.cues.is_empty() {
            if let (Some(lex), Some(v)) = (lexicons, &self.lexicon_version) {
                if lex.version() != v {
                    return Err(FeatureError::SchemaMismatch {
                        expected: format!("lexicon version {v}"),
                        found: format!("lexicon version {}", lex.version()),
                    });
                }
            }
            for (i, d) in docs.iter().enumerate() {
                let cv = d.cues.as_ref().ok_or(FeatureError::CuesMissing)?;
                for (j, name) in self.cues.iter().enumerate() {
                    x[(i, j)] = cv.get(name).unwrap_or(0.0);
                }
            }
        }
        let mut offset = self.cues.len();
        for vocab in &self.vocabularies {
            let counts = ngram_counts(docs, &vocab.config, lexicons)?;
            for (i, c) in counts.iter().enumerate() {
                for (j, n) in vocab.vectorize(c)? {
                    x[(i, offset + j)] = n as f64;
                }
            }
            offset += vocab.len();
        }
        Ok(DesignMatrix {
            doc_ids: docs.iter().map(|d| d.id().to_string()).collect(),
            labels: docs.iter().map(PreparedDoc::label).collect(),
            columns: self.columns(),
            x,
        })
    }
}

fn ngram_counts(
    docs: &[PreparedDoc],
    config: &NgramConfig,
    lexicons: Option<&LexiconSet>,
) -> Result<Vec<crate::ngrams::NgramCounts>, FeatureError> {
    let stop = if config.stop {
        let lex = lexicons.ok_or_else(|| FeatureError::NoStopwords("missing".into()))?;
        Some(lex.stopwords().ok_or_else(|| FeatureError::NoStopwords(lex.language.clone()))?)
    } else {
        None
    };
    docs.iter()
        .map(|d| extract_ngrams(&d.annotated, config, stop).map_err(FeatureError::from))
        .collect()
}

/// Dense documents-by-features matrix with its row and column labels.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    pub doc_ids: Vec<String>,
    pub labels: Vec<Label>,
    pub columns: Vec<String>,
    pub x: DMatrix<f64>,
}

impl DesignMatrix {
    /// 1 for deceptive, 0 for truthful.
    pub fn targets(&self) -> Vec<f64> {
        self.labels
            .iter()
            .map(|l| if l.is_deceptive() { 1.0 } else { 0.0 })
            .collect()
    }

    pub fn select_columns(&self, keep: &[usize]) -> DesignMatrix {
        DesignMatrix {
            doc_ids: self.doc_ids.clone(),
            labels: self.labels.clone(),
            columns: keep.iter().map(|&j| self.columns[j].clone()).collect(),
            x: self.x.select_columns(keep),
        }
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        self.x.row(i).iter().copied().collect()
    }
}
