//! Tokenization, annotation loading, stemming and phonemization.

pub mod conllu;
pub mod g2p;
pub mod phoneme;
pub mod pos;
pub mod stem;
pub mod tokenize;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::Document;
pub use conllu::{parse_conllu, ConlluSentence};
pub use phoneme::{PhonemeClass, Phonemizer, PhonemizerBackend};
pub use stem::stem;
pub use tokenize::{normalize, tokenize, tokenize_with, TokenizerOptions};

#[derive(Debug, Error)]
pub enum TextError {
    #[error("CoNLL-U line {line}: {message}")]
    Conllu { line: usize, message: String },
    #[error("document {doc_id:?}: annotation does not match text: {message}")]
    Divergence { doc_id: String, message: String },
    #[error("document {doc_id:?}: no annotation found")]
    MissingAnnotation { doc_id: String },
    #[error("phonemizer: {0}")]
    Phonemizer(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: std::path::PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    pub lower: String,
    pub lemma: Option<String>,
    pub upos: Option<String>,
    pub xpos: Option<String>,
    pub feats: BTreeMap<String, String>,
    /// 1-based head index within the sentence; 0 is the root.
    pub head: Option<usize>,
    pub deprel: Option<String>,
    pub misc: BTreeMap<String, String>,
    pub is_punct: bool,
}

impl Token {
    /// A bare token as produced by the tokenizer.
    pub fn new(surface: &str) -> Token {
        let is_punct = is_punct_str(surface);
        Token {
            surface: surface.to_string(),
            lower: surface.to_lowercase(),
            lemma: None,
            upos: None,
            xpos: None,
            feats: BTreeMap::new(),
            head: None,
            deprel: None,
            misc: BTreeMap::new(),
            is_punct,
        }
    }

    pub fn feat(&self, key: &str) -> Option<&str> {
        self.feats.get(key).map(String::as_str)
    }

    /// Named-entity tag from the MISC column (`NER=` or `NE=`), if any.
    pub fn ner(&self) -> Option<&str> {
        self.misc
            .get("NER")
            .or_else(|| self.misc.get("NE"))
            .map(String::as_str)
    }

    /// Lowercased lemma, or the lowercased surface when there is no lemma.
    pub fn lemma_or_lower(&self) -> String {
        match &self.lemma {
            Some(l) => l.to_lowercase(),
            None => self.lower.clone(),
        }
    }
}

/// True when every character is punctuation or a symbol.
pub fn is_punct_str(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| !c.is_alphanumeric() && !c.is_whitespace())
}

/// Where a document's token annotation came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnnotationSource {
    Tokenizer,
    Conllu,
}

/// A document with its sentences and, optionally, word pronunciations.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnotatedDocument {
    pub doc: Document,
    pub sentences: Vec<Vec<Token>>,
    /// One entry per word token (punctuation excluded), in document order.
    /// `None` entries are words the phonemizer could not transcribe.
    pub phonemes: Option<Vec<Option<Vec<String>>>>,
    pub source: AnnotationSource,
}

impl AnnotatedDocument {
    /// Annotates with the built-in tokenizer only.
    pub fn from_text(doc: Document, options: TokenizerOptions) -> AnnotatedDocument {
        let sentences = tokenize_with(&doc.text, &doc.language, options);
        AnnotatedDocument {
            doc,
            sentences,
            phonemes: None,
            source: AnnotationSource::Tokenizer,
        }
    }

    /// Uses CoNLL-U sentences, checking that their forms spell the text.
    pub fn from_conllu(
        doc: Document,
        sentences: Vec<ConlluSentence>,
    ) -> Result<AnnotatedDocument, TextError> {
        if sentences.is_empty() {
            return Err(TextError::MissingAnnotation {
                doc_id: doc.id.clone(),
            });
        }
        conllu::check_alignment(&doc, &sentences)?;
        Ok(AnnotatedDocument {
            doc,
            sentences: sentences.into_iter().map(|s| s.tokens).collect(),
            phonemes: None,
            source: AnnotationSource::Conllu,
        })
    }

    pub fn tokens(&self) -> impl Iterator<Item = &Token> {
        self.sentences.iter().flatten()
    }

    pub fn word_tokens(&self) -> impl Iterator<Item = &Token> {
        self.tokens().filter(|t| !t.is_punct)
    }

    pub fn word_count(&self) -> usize {
        self.word_tokens().count()
    }

    /// Word tokens of each sentence.
    pub fn word_sentences(&self) -> impl Iterator<Item = Vec<&Token>> {
        self.sentences
            .iter()
            .map(|s| s.iter().filter(|t| !t.is_punct).collect())
    }

    /// Fills in pronunciations for every word token.
    pub fn attach_phonemes(&mut self, phonemizer: &dyn Phonemizer) -> Result<(), TextError> {
        let words: Vec<String> = self.word_tokens().map(|t| t.lower.clone()).collect();
        let prons = phonemizer.phonemize(&words)?;
        if prons.len() != words.len() {
            return Err(TextError::Phonemizer(format!(
                "got {} transcriptions for {} words",
                prons.len(),
                words.len()
            )));
        }
        self.phonemes = Some(prons);
        Ok(())
    }

    /// True when every word token carries a POS tag.
    pub fn has_pos(&self) -> bool {
        let mut any = false;
        for t in self.tokens() {
            if t.upos.is_none() && t.xpos.is_none() {
                return false;
            }
            any = true;
        }
        any
    }

    /// True when every token carries a head and relation.
    pub fn has_dependencies(&self) -> bool {
        let mut any = false;
        for t in self.tokens() {
            if t.head.is_none() || t.deprel.is_none() {
                return false;
            }
            any = true;
        }
        any
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn punctuation_detection() {
        assert!(is_punct_str("."));
        assert!(is_punct_str("?!"));
        assert!(is_punct_str("$"));
        assert!(!is_punct_str("n't"));
        assert!(!is_punct_str("a"));
        assert!(!is_punct_str(""));
    }
}
