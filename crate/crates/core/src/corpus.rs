//! Labelled corpora: JSONL loading, dataset manifests, merging and splitting.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::io::{BufRead, BufReader, Read};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid manifest {path}: {message}")]
    Manifest { path: PathBuf, message: String },
    #[error("line {line}: malformed record: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: document {id:?} has empty text")]
    EmptyText { line: usize, id: String },
    #[error("line {line}: duplicate document id {id:?}")]
    DuplicateId { line: usize, id: String },
    #[error("line {line}: document language {found:?} does not match dataset language {expected:?}")]
    LanguageMismatch {
        line: usize,
        expected: String,
        found: String,
    },
    #[error("class counts {actual} do not match expected {expected}")]
    CountMismatch {
        expected: ClassCounts,
        actual: ClassCounts,
    },
    #[error("cannot merge: {0}")]
    Merge(String),
    #[error("cannot split: {0}")]
    Split(String),
}

/// Gold label of a document.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Truthful,
    Deceptive,
}

impl Label {
    pub const ALL: [Label; 2] = [Label::Truthful, Label::Deceptive];

    pub fn is_deceptive(self) -> bool {
        self == Label::Deceptive
    }

    pub fn from_deceptive(deceptive: bool) -> Label {
        if deceptive {
            Label::Deceptive
        } else {
            Label::Truthful
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Truthful => "truthful",
            Label::Deceptive => "deceptive",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "truthful" => Ok(Label::Truthful),
            "deceptive" => Ok(Label::Deceptive),
            other => Err(format!("unknown label {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ClassCounts {
    pub total: usize,
    pub truthful: usize,
    pub deceptive: usize,
}

impl ClassCounts {
    pub fn of<'a>(labels: impl IntoIterator<Item = &'a Label>) -> ClassCounts {
        let mut c = ClassCounts::default();
        for l in labels {
            c.total += 1;
            match l {
                Label::Truthful => c.truthful += 1,
                Label::Deceptive => c.deceptive += 1,
            }
        }
        c
    }
}

impl fmt::Display for ClassCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (truthful {}, deceptive {})",
            self.total, self.truthful, self.deceptive
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub text: String,
    pub label: Label,
    /// Dataset the document originally came from; kept through merges.
    pub dataset_id: String,
    pub language: String,
    pub genre: String,
    pub meta: BTreeMap<String, String>,
}

/// One line of a corpus file.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Record {
    id: String,
    text: String,
    label: Label,
    lang: String,
    genre: String,
    #[serde(default)]
    meta: BTreeMap<String, String>,
}

/// Per-dataset metadata, read from a flat TOML file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetManifest {
    pub id: String,
    pub language: String,
    pub country: String,
    pub individualism_score: u8,
    pub genre: String,
    pub doc_path: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub annotation_path: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_total: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_truthful: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_deceptive: Option<usize>,
}

impl DatasetManifest {
    /// Reads a manifest; relative paths are resolved against its directory.
    pub fn from_file(path: &Path) -> Result<DatasetManifest, CorpusError> {
        let text = std::fs::read_to_string(path).map_err(|source| CorpusError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut m = DatasetManifest::parse(&text).map_err(|message| CorpusError::Manifest {
            path: path.to_path_buf(),
            message,
        })?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        if m.doc_path.is_relative() {
            m.doc_path = base.join(&m.doc_path);
        }
        if let Some(a) = &m.annotation_path {
            if a.is_relative() {
                m.annotation_path = Some(base.join(a));
            }
        }
        Ok(m)
    }

    pub fn parse(text: &str) -> Result<DatasetManifest, String> {
        let m: DatasetManifest = toml::from_str(text).map_err(|e| e.message().to_string())?;
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<(), String> {
        if self.id.is_empty() || self.id.contains('/') {
            return Err(format!("dataset id {:?} must be non-empty without '/'", self.id));
        }
        if self.language.len() != 2 || !self.language.chars().all(|c| c.is_ascii_lowercase()) {
            return Err(format!(
                "language {:?} must be a two-letter lowercase ISO-639-1 code",
                self.language
            ));
        }
        if self.individualism_score > 100 {
            return Err(format!(
                "individualism_score {} outside 0..=100",
                self.individualism_score
            ));
        }
        self.expected_counts().map(|_| ())
    }

    /// Expected class counts, if the manifest declares them.
    pub fn expected_counts(&self) -> Result<Option<ClassCounts>, String> {
        match (self.expected_total, self.expected_truthful, self.expected_deceptive) {
            (None, None, None) => Ok(None),
            (Some(total), Some(truthful), Some(deceptive)) => {
                if truthful + deceptive != total {
                    return Err(format!(
                        "expected_truthful + expected_deceptive = {} but expected_total = {total}",
                        truthful + deceptive
                    ));
                }
                Ok(Some(ClassCounts {
                    total,
                    truthful,
                    deceptive,
                }))
            }
            _ => Err("expected_total, expected_truthful and expected_deceptive must be given together".into()),
        }
    }
}

/// An immutable collection of documents sharing one language.
#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    id: String,
    language: String,
    /// `None` when the corpus mixes countries.
    country: Option<String>,
    individualism_score: Option<u8>,
    genre: String,
    documents: Vec<Document>,
}

impl Corpus {
    /// Builds a corpus, checking id uniqueness, non-empty texts and language.
    pub fn new(
        id: impl Into<String>,
        language: impl Into<String>,
        country: Option<String>,
        individualism_score: Option<u8>,
        genre: impl Into<String>,
        documents: Vec<Document>,
    ) -> Result<Corpus, CorpusError> {
        let language = language.into();
        let mut seen = HashSet::new();
        for (i, d) in documents.iter().enumerate() {
            if d.text.trim().is_empty() {
                return Err(CorpusError::EmptyText {
                    line: i + 1,
                    id: d.id.clone(),
                });
            }
            if !seen.insert(d.id.as_str()) {
                return Err(CorpusError::DuplicateId {
                    line: i + 1,
                    id: d.id.clone(),
                });
            }
            if d.language != language {
                return Err(CorpusError::LanguageMismatch {
                    line: i + 1,
                    expected: language,
                    found: d.language.clone(),
                });
            }
        }
        Ok(Corpus {
            id: id.into(),
            language,
            country,
            individualism_score,
            genre: genre.into(),
            documents,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }
    pub fn language(&self) -> &str {
        &self.language
    }
    pub fn country(&self) -> Option<&str> {
        self.country.as_deref()
    }
    pub fn individualism_score(&self) -> Option<u8> {
        self.individualism_score
    }
    pub fn genre(&self) -> &str {
        &self.genre
    }
    pub fn documents(&self) -> &[Document] {
        &self.documents
    }
    pub fn len(&self) -> usize {
        self.documents.len()
    }
    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }
    pub fn counts(&self) -> ClassCounts {
        ClassCounts::of(self.documents.iter().map(|d| &d.label))
    }

    /// Returns a corpus containing only the documents whose ids are listed,
    /// in the order given.
    pub fn subset(&self, ids: &[String]) -> Result<Corpus, CorpusError> {
        let index: BTreeMap<&str, &Document> =
            self.documents.iter().map(|d| (d.id.as_str(), d)).collect();
        let mut docs = Vec::with_capacity(ids.len());
        for id in ids {
            let d = index
                .get(id.as_str())
                .ok_or_else(|| CorpusError::Split(format!("unknown document id {id:?}")))?;
            docs.push((*d).clone());
        }
        Corpus::new(
            self.id.clone(),
            self.language.clone(),
            self.country.clone(),
            self.individualism_score,
            self.genre.clone(),
            docs,
        )
    }
}

/// Parses JSONL records. Blank lines are skipped; errors carry 1-based line numbers.
pub fn parse_jsonl(
    reader: impl Read,
    dataset_id: &str,
    language: &str,
) -> Result<Vec<Document>, CorpusError> {
    let mut docs = Vec::new();
    let mut seen = HashSet::new();
    for (i, line) in BufReader::new(reader).lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| CorpusError::Malformed {
            line: lineno,
            message: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: Record = serde_json::from_str(&line).map_err(|e| CorpusError::Malformed {
            line: lineno,
            message: e.to_string(),
        })?;
        if rec.id.is_empty() {
            return Err(CorpusError::Malformed {
                line: lineno,
                message: "empty id".into(),
            });
        }
        if rec.text.trim().is_empty() {
            return Err(CorpusError::EmptyText {
                line: lineno,
                id: rec.id,
            });
        }
        if rec.lang != language {
            return Err(CorpusError::LanguageMismatch {
                line: lineno,
                expected: language.to_string(),
                found: rec.lang,
            });
        }
        if !seen.insert(rec.id.clone()) {
            return Err(CorpusError::DuplicateId {
                line: lineno,
                id: rec.id,
            });
        }
        docs.push(Document {
            id: rec.id,
            text: rec.text,
            label: rec.label,
            dataset_id: dataset_id.to_string(),
            language: rec.lang,
            genre: rec.genre,
            meta: rec.meta,
        });
    }
    Ok(docs)
}

/// Serializes documents back to JSONL, one record per line.
pub fn to_jsonl(docs: &[Document]) -> String {
    let mut out = String::new();
    for d in docs {
        let rec = Record {
            id: d.id.clone(),
            text: d.text.clone(),
            label: d.label,
            lang: d.language.clone(),
            genre: d.genre.clone(),
            meta: d.meta.clone(),
        };
        out.push_str(&serde_json::to_string(&rec).expect("record serializes"));
        out.push('\n');
    }
    out
}

/// Loads the corpus a manifest describes and checks its declared class counts.
pub fn load_corpus(manifest: &DatasetManifest) -> Result<Corpus, CorpusError> {
    let file = std::fs::File::open(&manifest.doc_path).map_err(|source| CorpusError::Io {
        path: manifest.doc_path.clone(),
        source,
    })?;
    let docs = parse_jsonl(file, &manifest.id, &manifest.language)?;
    let corpus = Corpus::new(
        manifest.id.clone(),
        manifest.language.clone(),
        Some(manifest.country.clone()),
        Some(manifest.individualism_score),
        manifest.genre.clone(),
        docs,
    )?;
    let expected = manifest
        .expected_counts()
        .map_err(|message| CorpusError::Manifest {
            path: manifest.doc_path.clone(),
            message,
        })?;
    if let Some(expected) = expected {
        let actual = corpus.counts();
        if actual != expected {
            return Err(CorpusError::CountMismatch { expected, actual });
        }
    }
    Ok(corpus)
}

/// Concatenates same-language corpora. Document ids become `corpus/doc`;
/// each document keeps its original `dataset_id`.
pub fn merge(corpora: &[Corpus], id: &str) -> Result<Corpus, CorpusError> {
    let first = corpora
        .first()
        .ok_or_else(|| CorpusError::Merge("no corpora given".into()))?;
    let language = first.language.clone();
    let mut docs = Vec::new();
    for c in corpora {
        if c.language != language {
            return Err(CorpusError::Merge(format!(
                "corpus {} is {:?} but {} is {:?}",
                c.id, c.language, first.id, language
            )));
        }
        for d in &c.documents {
            let mut d = d.clone();
            d.id = format!("{}/{}", c.id, d.id);
            docs.push(d);
        }
    }
    let same = |f: &dyn Fn(&Corpus) -> Option<String>| {
        let v = f(first);
        corpora.iter().all(|c| f(c) == v).then_some(v).flatten()
    };
    let country = same(&|c| c.country.clone());
    let individualism_score = same(&|c| c.individualism_score.map(|s| s.to_string()))
        .and_then(|s| s.parse().ok());
    let genre = same(&|c| Some(c.genre.clone())).unwrap_or_else(|| "multi".to_string());
    Corpus::new(id, language, country, individualism_score, genre, docs).map_err(|e| match e {
        CorpusError::DuplicateId { id, .. } => {
            CorpusError::Merge(format!("duplicate document id {id:?} after namespacing"))
        }
        other => other,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitRatios {
    pub train: f64,
    pub val: f64,
    pub test: f64,
}

impl SplitRatios {
    pub const STANDARD: SplitRatios = SplitRatios {
        train: 0.7,
        val: 0.1,
        test: 0.2,
    };

    pub fn validate(&self) -> Result<(), CorpusError> {
        let parts = [self.train, self.val, self.test];
        if parts.iter().any(|r| !r.is_finite() || *r < 0.0) || self.train <= 0.0 {
            return Err(CorpusError::Split(format!(
                "ratios must be non-negative with a positive train share, got {self:?}"
            )));
        }
        let sum: f64 = parts.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(CorpusError::Split(format!("ratios sum to {sum}, not 1")));
        }
        Ok(())
    }
}

/// A partition of document ids into train, validation and test sets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitAssignment {
    pub seed: u64,
    pub ratios: SplitRatios,
    pub stratified: bool,
    pub train: Vec<String>,
    pub val: Vec<String>,
    pub test: Vec<String>,
}

/// Splits `n` into integer parts proportional to `weights` (largest remainder;
/// ties go to the earlier part).
pub fn largest_remainder(n: usize, weights: &[f64]) -> Vec<usize> {
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return vec![0; weights.len()];
    }
    let quotas: Vec<f64> = weights.iter().map(|w| n as f64 * w / total).collect();
    let mut parts: Vec<usize> = quotas.iter().map(|q| (q + 1e-9).floor() as usize).collect();
    let assigned: usize = parts.iter().sum();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = quotas[a] - parts[a] as f64;
        let rb = quotas[b] - parts[b] as f64;
        rb.partial_cmp(&ra).unwrap().then(a.cmp(&b))
    });
    for &i in order.iter().take(n.saturating_sub(assigned)) {
        parts[i] += 1;
    }
    parts
}

/// Seeded train/validation/test split. With `stratified`, each part holds the
/// corpus class ratio to within one document per class.
pub fn split(
    corpus: &Corpus,
    ratios: SplitRatios,
    seed: u64,
    stratified: bool,
) -> Result<SplitAssignment, CorpusError> {
    ratios.validate()?;
    let n = corpus.len();
    if n == 0 {
        return Err(CorpusError::Split("corpus is empty".into()));
    }
    let weights = [ratios.train, ratios.val, ratios.test];
    let sizes = largest_remainder(n, &weights);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut parts: [Vec<usize>; 3] = Default::default();

    if stratified {
        let counts = corpus.counts();
        for label in Label::ALL {
            let have = match label {
                Label::Truthful => counts.truthful,
                Label::Deceptive => counts.deceptive,
            };
            if have == 0 {
                return Err(CorpusError::Split(format!(
                    "stratified split needs both classes; corpus {} has no {label} documents",
                    corpus.id
                )));
            }
        }
        let size_weights: Vec<f64> = sizes.iter().map(|&s| s as f64).collect();
        let truthful_alloc = largest_remainder(counts.truthful, &size_weights);
        for label in Label::ALL {
            let mut idx: Vec<usize> = corpus
                .documents
                .iter()
                .enumerate()
                .filter(|(_, d)| d.label == label)
                .map(|(i, _)| i)
                .collect();
            idx.shuffle(&mut rng);
            let alloc: [usize; 3] = match label {
                Label::Truthful => [truthful_alloc[0], truthful_alloc[1], truthful_alloc[2]],
                Label::Deceptive => [
                    sizes[0] - truthful_alloc[0],
                    sizes[1] - truthful_alloc[1],
                    sizes[2] - truthful_alloc[2],
                ],
            };
            let mut it = idx.into_iter();
            for (p, k) in alloc.iter().enumerate() {
                parts[p].extend(it.by_ref().take(*k));
            }
        }
    } else {
        let mut idx: Vec<usize> = (0..n).collect();
        idx.shuffle(&mut rng);
        let mut it = idx.into_iter();
        for (p, k) in sizes.iter().enumerate() {
            parts[p].extend(it.by_ref().take(*k));
        }
    }

    let ids = |mut v: Vec<usize>| -> Vec<String> {
        v.sort_unstable();
        v.into_iter().map(|i| corpus.documents[i].id.clone()).collect()
    };
    let [train, val, test] = parts;
    Ok(SplitAssignment {
        seed,
        ratios,
        stratified,
        train: ids(train),
        val: ids(val),
        test: ids(test),
    })
}

/// Size and mean length per class.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusStats {
    pub dataset_id: String,
    pub language: String,
    pub counts: ClassCounts,
    /// Mean number of word tokens (punctuation excluded).
    pub mean_tokens: Option<f64>,
    pub mean_tokens_truthful: Option<f64>,
    pub mean_tokens_deceptive: Option<f64>,
}

pub fn corpus_stats(corpus: &Corpus) -> CorpusStats {
    let mut sums = [0usize; 2];
    for d in &corpus.documents {
        let n = crate::textproc::tokenize(&d.text, &d.language)
            .iter()
            .flatten()
            .filter(|t| !t.is_punct)
            .count();
        sums[d.label as usize] += n;
    }
    let counts = corpus.counts();
    let mean = |s: usize, c: usize| (c > 0).then(|| s as f64 / c as f64);
    CorpusStats {
        dataset_id: corpus.id.clone(),
        language: corpus.language.clone(),
        counts,
        mean_tokens: mean(sums[0] + sums[1], counts.total),
        mean_tokens_truthful: mean(sums[0], counts.truthful),
        mean_tokens_deceptive: mean(sums[1], counts.deceptive),
    }
}

impl CorpusStats {
    /// A Markdown table row: dataset, language, total, truthful, deceptive, mean length.
    pub fn markdown_row(&self) -> String {
        let f = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:.1}"));
        format!(
            "| {} | {} | {} | {} | {} | {} |",
            self.dataset_id,
            self.language,
            self.counts.total,
            self.counts.truthful,
            self.counts.deceptive,
            f(self.mean_tokens)
        )
    }
}
