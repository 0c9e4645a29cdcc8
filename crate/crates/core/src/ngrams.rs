//! Phoneme, character, word, POS and syntactic n-grams, and vocabularies.
//!
//! Feature strings carry a family prefix (`phon:`, `char:`, `word:`, `pos:`,
//! `syn:`) so that vocabularies from several families can share a schema.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cues::WordList;
use crate::hashing::sha256_hex;
use crate::textproc::{stem, AnnotatedDocument, Token};

#[derive(Debug, Error, PartialEq)]
pub enum NgramError {
    #[error("invalid n-gram configuration: {0}")]
    InvalidConfig(String),
    #[error("document {doc_id:?}: {family} n-grams need {what}")]
    MissingAnnotation {
        doc_id: String,
        family: NgramFamily,
        what: &'static str,
    },
    #[error("document {doc_id:?}: dependency structure is not a tree: {message}")]
    NotATree { doc_id: String, message: String },
    #[error("no n-grams were extracted for {0}")]
    EmptyVocabulary(String),
    #[error("vocabulary built for {expected} but document features use {found}")]
    ConfigMismatch { expected: String, found: String },
    #[error("vocabulary file: {0}")]
    Format(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NgramFamily {
    Phoneme,
    Character,
    Word,
    Pos,
    Syntactic,
}

impl NgramFamily {
    pub fn prefix(self) -> &'static str {
        match self {
            NgramFamily::Phoneme => "phon",
            NgramFamily::Character => "char",
            NgramFamily::Word => "word",
            NgramFamily::Pos => "pos",
            NgramFamily::Syntactic => "syn",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            NgramFamily::Phoneme => "phoneme",
            NgramFamily::Character => "char",
            NgramFamily::Word => "word",
            NgramFamily::Pos => "pos",
            NgramFamily::Syntactic => "syntactic",
        }
    }
}

impl fmt::Display for NgramFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Unit of phoneme n-grams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PhonemeUnit {
    /// Windows of phoneme symbols inside one word's transcription.
    #[default]
    Symbol,
    /// Windows of whole-word transcriptions across consecutive words.
    Word,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NgramConfig {
    pub family: NgramFamily,
    pub min_n: usize,
    pub max_n: usize,
    pub stem: bool,
    pub stop: bool,
    pub lowercase: bool,
    pub top_k: usize,
    pub phoneme_unit: PhonemeUnit,
}

impl NgramConfig {
    pub fn new(family: NgramFamily, min_n: usize, max_n: usize) -> NgramConfig {
        NgramConfig {
            family,
            min_n,
            max_n,
            stem: false,
            stop: false,
            lowercase: false,
            top_k: 1000,
            phoneme_unit: PhonemeUnit::default(),
        }
    }

    pub fn validate(&self) -> Result<(), NgramError> {
        if !(1 <= self.min_n && self.min_n <= self.max_n && self.max_n <= 3) {
            return Err(NgramError::InvalidConfig(format!(
                "range ({},{}) must satisfy 1 <= a <= b <= 3",
                self.min_n, self.max_n
            )));
        }
        if self.family != NgramFamily::Word && (self.stem || self.stop) {
            return Err(NgramError::InvalidConfig(format!(
                "stem/stop apply only to word n-grams, not {}",
                self.family
            )));
        }
        if self.top_k == 0 {
            return Err(NgramError::InvalidConfig("top_k must be positive".into()));
        }
        Ok(())
    }

    /// Stable textual form, e.g. `word(1,2),stem,top=1000`.
    pub fn canonical(&self) -> String {
        let mut s = format!("{}({},{})", self.family.name(), self.min_n, self.max_n);
        if self.stem {
            s.push_str(",stem");
        }
        if self.stop {
            s.push_str(",stop");
        }
        if self.lowercase {
            s.push_str(",lowercase");
        }
        if self.family == NgramFamily::Phoneme && self.phoneme_unit == PhonemeUnit::Word {
            s.push_str(",unit=word");
        }
        s.push_str(&format!(",top={}", self.top_k));
        s
    }

    pub fn hash(&self) -> String {
        sha256_hex(self.canonical())[..16].to_string()
    }

    /// Hash of the settings that affect extraction (everything but `top_k`).
    pub fn extraction_hash(&self) -> String {
        let mut c = self.clone();
        c.top_k = 1;
        sha256_hex(format!("extract:{}", c.canonical()))[..16].to_string()
    }
}

/// Multiset of n-grams of one document under one configuration.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct NgramCounts {
    pub config_hash: String,
    pub counts: BTreeMap<String, u32>,
}

impl NgramCounts {
    pub fn total(&self) -> u64 {
        self.counts.values().map(|&c| c as u64).sum()
    }
}

fn windows(units: &[String], min_n: usize, max_n: usize, sep: &str, prefix: &str, out: &mut Vec<String>) {
    for n in min_n..=max_n {
        if units.len() < n {
            continue;
        }
        for w in units.windows(n) {
            out.push(format!("{prefix}:{}", w.join(sep)));
        }
    }
}

fn check_tree(sentence: &[Token], doc_id: &str) -> Result<Vec<Vec<usize>>, NgramError> {
    let n = sentence.len();
    let err = |message: String| NgramError::NotATree {
        doc_id: doc_id.to_string(),
        message,
    };
    let mut children = vec![Vec::new(); n + 1];
    for (i, t) in sentence.iter().enumerate() {
        let h = t.head.ok_or_else(|| err(format!("token {} has no head", i + 1)))?;
        if h > n {
            return Err(err(format!("token {} head {h} out of range", i + 1)));
        }
        if t.deprel.is_none() {
            return Err(err(format!("token {} has no relation", i + 1)));
        }
        children[h].push(i + 1);
    }
    // Every token must reach the root without revisiting a node.
    for start in 1..=n {
        let mut cur = start;
        let mut steps = 0;
        while cur != 0 {
            cur = sentence[cur - 1].head.unwrap();
            steps += 1;
            if steps > n {
                return Err(err(format!("cycle through token {start}")));
            }
        }
    }
    if n > 0 && children[0].is_empty() {
        return Err(err("no root".into()));
    }
    Ok(children)
}

/// Label paths of 1..=3 consecutive arcs, read top-down and joined by `-`.
pub fn syntactic_ngrams(
    sentence: &[Token],
    min_n: usize,
    max_n: usize,
    doc_id: &str,
) -> Result<Vec<String>, NgramError> {
    let children = check_tree(sentence, doc_id)?;
    let label = |i: usize| sentence[i - 1].deprel.as_deref().unwrap().to_string();
    let mut out = Vec::new();
    fn walk(
        node: usize,
        path: &mut Vec<String>,
        children: &[Vec<usize>],
        label: &dyn Fn(usize) -> String,
        min_n: usize,
        max_n: usize,
        out: &mut Vec<String>,
    ) {
        path.push(label(node));
        if path.len() >= min_n {
            out.push(format!("syn:{}", path.join("-")));
        }
        if path.len() < max_n {
            for &c in &children[node] {
                walk(c, path, children, label, min_n, max_n, out);
            }
        }
        path.pop();
    }
    for start in 1..=sentence.len() {
        walk(start, &mut Vec::new(), &children, &label, min_n, max_n, &mut out);
    }
    Ok(out)
}

fn collapse_whitespace(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Extracts every n-gram of `doc` under `config`. `stopwords` is required
/// when `config.stop` is set.
pub fn extract_ngrams(
    doc: &AnnotatedDocument,
    config: &NgramConfig,
    stopwords: Option<&WordList>,
) -> Result<NgramCounts, NgramError> {
    let grams = extract_list(doc, config, stopwords)?;
    let mut counts = BTreeMap::new();
    for g in grams {
        *counts.entry(g).or_insert(0u32) += 1;
    }
    Ok(NgramCounts {
        config_hash: config.extraction_hash(),
        counts,
    })
}

/// Like [`extract_ngrams`] but returns the n-grams in extraction order.
pub fn extract_list(
    doc: &AnnotatedDocument,
    config: &NgramConfig,
    stopwords: Option<&WordList>,
) -> Result<Vec<String>, NgramError> {
    config.validate()?;
    let (a, b) = (config.min_n, config.max_n);
    let prefix = config.family.prefix();
    let missing = |what: &'static str| NgramError::MissingAnnotation {
        doc_id: doc.doc.id.clone(),
        family: config.family,
        what,
    };
    let mut out = Vec::new();
    match config.family {
        NgramFamily::Character => {
            let mut text = collapse_whitespace(&doc.doc.text);
            if config.lowercase {
                text = text.to_lowercase();
            }
            let chars: Vec<String> = text.chars().map(|c| c.to_string()).collect();
            windows(&chars, a, b, "", prefix, &mut out);
        }
        NgramFamily::Word => {
            let stops = if config.stop {
                Some(stopwords.ok_or(missing("a stopword list"))?)
            } else {
                None
            };
            for sent in doc.word_sentences() {
                let units: Vec<String> = sent
                    .iter()
                    .filter(|t| !stops.is_some_and(|s| s.contains(&t.lower)))
                    .map(|t| {
                        if config.stem {
                            stem(&t.surface, &doc.doc.language)
                        } else if config.lowercase {
                            t.lower.clone()
                        } else {
                            t.surface.clone()
                        }
                    })
                    .collect();
                windows(&units, a, b, " ", prefix, &mut out);
            }
        }
        NgramFamily::Pos => {
            for sent in &doc.sentences {
                let tags: Option<Vec<String>> = sent
                    .iter()
                    .map(|t| t.xpos.clone().or_else(|| t.upos.clone()))
                    .collect();
                let tags = tags.ok_or(missing("POS tags on every token"))?;
                windows(&tags, a, b, " ", prefix, &mut out);
            }
        }
        NgramFamily::Syntactic => {
            if !doc.has_dependencies() {
                return Err(missing("a dependency parse"));
            }
            for sent in &doc.sentences {
                out.extend(syntactic_ngrams(sent, a, b, &doc.doc.id)?);
            }
        }
        NgramFamily::Phoneme => {
            let prons = doc.phonemes.as_ref().ok_or(missing("phoneme transcriptions"))?;
            match config.phoneme_unit {
                PhonemeUnit::Symbol => {
                    for p in prons.iter().flatten() {
                        windows(p, a, b, " ", prefix, &mut out);
                    }
                }
                PhonemeUnit::Word => {
                    let mut k = 0;
                    for sent in doc.word_sentences() {
                        let units: Vec<String> = prons[k..k + sent.len()]
                            .iter()
                            .flatten()
                            .map(|p| p.concat())
                            .collect();
                        k += sent.len();
                        windows(&units, a, b, " ", prefix, &mut out);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Sparse count vector over a vocabulary: `(index, count)` sorted by index.
pub type SparseVector = Vec<(usize, u32)>;

/// Ordered feature list for one n-gram configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Vocabulary {
    pub config: NgramConfig,
    pub source: String,
    features: Vec<String>,
    index: HashMap<String, usize>,
}

const VOCAB_MAGIC: &str = "# deceptext vocabulary v1";

impl Vocabulary {
    /// A vocabulary with a given feature order, e.g. read back from a model.
    pub fn with_features(config: NgramConfig, source: String, features: Vec<String>) -> Vocabulary {
        let index = features
            .iter()
            .enumerate()
            .map(|(i, f)| (f.clone(), i))
            .collect();
        Vocabulary {
            config,
            source,
            features,
            index,
        }
    }

    /// Ranks by total frequency (desc), then lexicographically, and keeps `top_k`.
    pub fn from_counts<'a>(
        docs: impl IntoIterator<Item = &'a NgramCounts>,
        config: &NgramConfig,
        source: &str,
    ) -> Result<Vocabulary, NgramError> {
        config.validate()?;
        let mut total: BTreeMap<&str, u64> = BTreeMap::new();
        for d in docs {
            if d.config_hash != config.extraction_hash() {
                return Err(NgramError::ConfigMismatch {
                    expected: config.extraction_hash(),
                    found: d.config_hash.clone(),
                });
            }
            for (g, c) in &d.counts {
                *total.entry(g.as_str()).or_insert(0) += *c as u64;
            }
        }
        if total.is_empty() {
            return Err(NgramError::EmptyVocabulary(config.canonical()));
        }
        let mut ranked: Vec<(&str, u64)> = total.into_iter().collect();
        ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        ranked.truncate(config.top_k);
        Ok(Vocabulary::with_features(
            config.clone(),
            source.to_string(),
            ranked.into_iter().map(|(g, _)| g.to_string()).collect(),
        ))
    }

    pub fn features(&self) -> &[String] {
        &self.features
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn index_of(&self, feature: &str) -> Option<usize> {
        self.index.get(feature).copied()
    }

    /// Counts of in-vocabulary n-grams; others are dropped.
    pub fn vectorize(&self, counts: &NgramCounts) -> Result<SparseVector, NgramError> {
        if counts.config_hash != self.config.extraction_hash() {
            return Err(NgramError::ConfigMismatch {
                expected: self.config.extraction_hash(),
                found: counts.config_hash.clone(),
            });
        }
        let mut v: SparseVector = counts
            .counts
            .iter()
            .filter_map(|(g, c)| self.index_of(g).map(|i| (i, *c)))
            .collect();
        v.sort_unstable();
        Ok(v)
    }

    /// Header lines followed by one feature per line.
    pub fn to_file_string(&self) -> String {
        let mut s = String::new();
        s.push_str(VOCAB_MAGIC);
        s.push('\n');
        s.push_str(&format!("# config = {}\n", self.config.canonical()));
        s.push_str(&format!("# config_hash = {}\n", self.config.hash()));
        s.push_str(&format!("# source = {}\n", self.source));
        for f in &self.features {
            s.push_str(f);
            s.push('\n');
        }
        s
    }

    /// Reads a file written by [`Vocabulary::to_file_string`], checking it
    /// against the configuration it is meant for.
    pub fn parse(text: &str, config: &NgramConfig) -> Result<Vocabulary, NgramError> {
        let mut lines = text.split('\n');
        let mut header = |key: &str| -> Result<String, NgramError> {
            let l = lines
                .next()
                .ok_or_else(|| NgramError::Format("truncated header".into()))?;
            if key.is_empty() {
                return if l == VOCAB_MAGIC {
                    Ok(String::new())
                } else {
                    Err(NgramError::Format("missing magic line".into()))
                };
            }
            l.strip_prefix(&format!("# {key} = "))
                .map(str::to_string)
                .ok_or_else(|| NgramError::Format(format!("expected `# {key} = ...`")))
        };
        header("")?;
        let _ = header("config")?;
        let hash = header("config_hash")?;
        let source = header("source")?;
        if hash != config.hash() {
            return Err(NgramError::ConfigMismatch {
                expected: config.hash(),
                found: hash,
            });
        }
        let mut features: Vec<String> = lines.map(str::to_string).collect();
        if features.last().is_some_and(|l| l.is_empty()) {
            features.pop();
        }
        Ok(Vocabulary::with_features(config.clone(), source, features))
    }
}

/// Sparse triplet CSV `doc_id,feature_index,count`.
pub fn matrix_to_csv(rows: &[(String, SparseVector)]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["doc_id", "feature_index", "count"]).expect("in-memory write");
    for (id, v) in rows {
        for (i, c) in v {
            w.write_record([id.as_str(), &i.to_string(), &c.to_string()])
                .expect("in-memory write");
        }
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Document, Label};
    use crate::textproc::TokenizerOptions;

    fn doc(text: &str) -> AnnotatedDocument {
        AnnotatedDocument::from_text(
            Document {
                id: "d".into(),
                text: text.into(),
                label: Label::Truthful,
                dataset_id: "t".into(),
                language: "en".into(),
                genre: "g".into(),
                meta: Default::default(),
            },
            TokenizerOptions::default(),
        )
    }

    fn grams(d: &AnnotatedDocument, c: &NgramConfig) -> Vec<String> {
        extract_list(d, c, None).unwrap()
    }

    #[test]
    fn word_unigrams() {
        let mut c = NgramConfig::new(NgramFamily::Word, 1, 1);
        c.lowercase = true;
        assert_eq!(grams(&doc("The cat sat."), &c), vec!["word:the", "word:cat", "word:sat"]);
    }

    #[test]
    fn word_ngrams_stay_in_sentences() {
        let c = NgramConfig::new(NgramFamily::Word, 2, 2);
        assert_eq!(grams(&doc("A b. C d."), &c), vec!["word:A b", "word:C d"]);
    }

    #[test]
    fn stopwords_close_gaps() {
        let mut c = NgramConfig::new(NgramFamily::Word, 1, 2);
        c.stop = true;
        c.lowercase = true;
        let sw = WordList::new(["the", "was"]);
        let g = extract_list(&doc("The room was clean"), &c, Some(&sw)).unwrap();
        assert_eq!(g, vec!["word:room", "word:clean", "word:room clean"]);
        assert!(extract_list(&doc("x"), &c, None).is_err());
    }

    #[test]
    fn stemmed_words() {
        let mut c = NgramConfig::new(NgramFamily::Word, 1, 1);
        c.stem = true;
        assert_eq!(grams(&doc("Staying courses"), &c), vec!["word:stay", "word:cour"]);
    }

    #[test]
    fn character_bigrams() {
        let c = NgramConfig::new(NgramFamily::Character, 2, 2);
        assert_eq!(
            grams(&doc("hotel"), &c),
            vec!["char:ho", "char:ot", "char:te", "char:el"]
        );
        let g = grams(&doc("a  \n b"), &c);
        assert_eq!(g, vec!["char:a ", "char: b"]);
    }

    #[test]
    fn pos_trigrams_need_tags() {
        let mut d = doc("Hotel staff is");
        let c = NgramConfig::new(NgramFamily::Pos, 3, 3);
        assert!(extract_list(&d, &c, None).is_err());
        for (t, x) in d.sentences[0].iter_mut().zip(["NN", "NN", "VBZ"]) {
            t.xpos = Some(x.into());
        }
        assert_eq!(grams(&d, &c), vec!["pos:NN NN VBZ"]);
    }

    fn tree(spec: &[(usize, &str)]) -> Vec<Token> {
        spec.iter()
            .enumerate()
            .map(|(i, (h, r))| {
                let mut t = Token::new(&format!("w{i}"));
                t.head = Some(*h);
                t.deprel = Some(r.to_string());
                t
            })
            .collect()
    }

    #[test]
    fn syntactic_paths() {
        // w0 <-nsubj- w1(root); w2 -aux-> w1
        let s = tree(&[(2, "nsubj"), (0, "root"), (2, "aux")]);
        let mut g = syntactic_ngrams(&s, 2, 2, "d").unwrap();
        g.sort();
        assert_eq!(g, vec!["syn:root-aux", "syn:root-nsubj"]);
        let single = tree(&[(0, "root")]);
        assert_eq!(syntactic_ngrams(&single, 1, 3, "d").unwrap(), vec!["syn:root"]);
    }

    #[test]
    fn syntactic_rejects_cycles() {
        let s = tree(&[(2, "a"), (1, "b")]);
        assert!(matches!(
            syntactic_ngrams(&s, 1, 2, "d"),
            Err(NgramError::NotATree { .. })
        ));
    }

    #[test]
    fn phoneme_units() {
        let mut d = doc("new level");
        d.phonemes = Some(vec![
            Some(vec!["n".into(), "u".into()]),
            Some(vec!["l".into(), "ɛ".into(), "v".into(), "ə".into(), "l".into()]),
        ]);
        let c = NgramConfig::new(NgramFamily::Phoneme, 3, 3);
        assert_eq!(
            grams(&d, &c),
            vec!["phon:l ɛ v", "phon:ɛ v ə", "phon:v ə l"]
        );
        let mut w = NgramConfig::new(NgramFamily::Phoneme, 1, 2);
        w.phoneme_unit = PhonemeUnit::Word;
        assert_eq!(grams(&d, &w), vec!["phon:nu", "phon:lɛvəl", "phon:nu lɛvəl"]);
    }

    #[test]
    fn config_validation() {
        assert!(NgramConfig::new(NgramFamily::Word, 0, 1).validate().is_err());
        assert!(NgramConfig::new(NgramFamily::Word, 2, 1).validate().is_err());
        assert!(NgramConfig::new(NgramFamily::Word, 1, 4).validate().is_err());
        let mut c = NgramConfig::new(NgramFamily::Character, 1, 3);
        c.stem = true;
        assert!(c.validate().is_err());
    }

    #[test]
    fn vocabulary_ranking_and_cap() {
        let mut c = NgramConfig::new(NgramFamily::Word, 1, 1);
        c.lowercase = true;
        let mut text = "the ".repeat(50);
        text.push_str("cat cat cat bat");
        let counts = extract_ngrams(&doc(&text), &c, None).unwrap();
        let mut c1 = c.clone();
        c1.top_k = 1;
        let v = Vocabulary::from_counts([&counts], &c1, "toy").unwrap();
        assert_eq!(v.features(), ["word:the"]);
        let all = Vocabulary::from_counts([&counts], &c, "toy").unwrap();
        assert_eq!(all.features(), ["word:the", "word:cat", "word:bat"]);
        let tie = extract_ngrams(&doc("b a"), &c, None).unwrap();
        let v = Vocabulary::from_counts([&tie], &c, "toy").unwrap();
        assert_eq!(v.features(), ["word:a", "word:b"]);
    }

    #[test]
    fn vectorize_and_mismatch() {
        let c = NgramConfig::new(NgramFamily::Word, 1, 1);
        let train = extract_ngrams(&doc("good good bad"), &c, None).unwrap();
        let v = Vocabulary::from_counts([&train], &c, "toy").unwrap();
        let x = v.vectorize(&extract_ngrams(&doc("good good good"), &c, None).unwrap()).unwrap();
        assert_eq!(x, vec![(0, 3)]);
        let none = v.vectorize(&extract_ngrams(&doc("other"), &c, None).unwrap()).unwrap();
        assert!(none.is_empty());
        let other = NgramConfig::new(NgramFamily::Word, 1, 2);
        let wrong = extract_ngrams(&doc("good"), &other, None).unwrap();
        assert!(matches!(v.vectorize(&wrong), Err(NgramError::ConfigMismatch { .. })));
    }

    #[test]
    fn vocabulary_file_roundtrip() {
        let c = NgramConfig::new(NgramFamily::Character, 1, 2);
        let counts = extract_ngrams(&doc("ab a"), &c, None).unwrap();
        let v = Vocabulary::from_counts([&counts], &c, "toy").unwrap();
        let s = v.to_file_string();
        assert!(s.contains(&format!("# config_hash = {}", c.hash())));
        let back = Vocabulary::parse(&s, &c).unwrap();
        assert_eq!(back, v);
        let other = NgramConfig::new(NgramFamily::Character, 1, 3);
        assert!(Vocabulary::parse(&s, &other).is_err());
    }

    #[test]
    fn empty_extraction_is_an_error() {
        let c = NgramConfig::new(NgramFamily::Word, 3, 3);
        let counts = extract_ngrams(&doc("a b"), &c, None).unwrap();
        assert!(matches!(
            Vocabulary::from_counts([&counts], &c, "toy"),
            Err(NgramError::EmptyVocabulary(_))
        ));
    }
}
