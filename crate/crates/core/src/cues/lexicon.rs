//! Word lists and graded lexicons.
//!
//! Layout of a language directory:
//!
//! ```text
//! <lang>/lists/<kind>.txt              one entry per line
//! <lang>/pronouns/<class>.txt
//! <lang>/sentiment/<name>.positive.txt  entry<TAB>strength in [0, 1]
//! <lang>/sentiment/<name>.negative.txt
//! <lang>/valence/<name>.txt             entry<TAB>valence in [0, 10]
//! <lang>/stopwords.txt
//! ```
//!
//! Lines starting with `#` are comments. Entries are case-folded; entries
//! with spaces are phrases matched against consecutive tokens.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::hashing::hash_parts;

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Invalid {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("no lexicon directory for language {lang:?} under {dir}")]
    MissingLanguage { dir: PathBuf, lang: String },
    #[error("sentiment lexicon {name:?} has only a {present} file")]
    UnpairedSentiment { name: String, present: &'static str },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ListKind {
    Articles,
    Boosters,
    Exclusion,
    FilledPauses,
    FunctionWords,
    Hedges,
    ModalVerbs,
    MotionVerbs,
    Negations,
    Spatial,
    Vague,
}

impl ListKind {
    pub const ALL: [ListKind; 11] = [
        ListKind::Articles,
        ListKind::Boosters,
        ListKind::Exclusion,
        ListKind::FilledPauses,
        ListKind::FunctionWords,
        ListKind::Hedges,
        ListKind::ModalVerbs,
        ListKind::MotionVerbs,
        ListKind::Negations,
        ListKind::Spatial,
        ListKind::Vague,
    ];

    pub fn file_stem(self) -> &'static str {
        match self {
            ListKind::Articles => "articles",
            ListKind::Boosters => "boosters",
            ListKind::Exclusion => "exclusion",
            ListKind::FilledPauses => "filled_pauses",
            ListKind::FunctionWords => "function_words",
            ListKind::Hedges => "hedges",
            ListKind::ModalVerbs => "modal_verbs",
            ListKind::MotionVerbs => "motion_verbs",
            ListKind::Negations => "negations",
            ListKind::Spatial => "spatial",
            ListKind::Vague => "vague",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PronounClass {
    All,
    Demonstrative,
    FirstPlural,
    FirstSingular,
    Indefinite,
    Third,
}

impl PronounClass {
    pub const ALL: [PronounClass; 6] = [
        PronounClass::All,
        PronounClass::Demonstrative,
        PronounClass::FirstPlural,
        PronounClass::FirstSingular,
        PronounClass::Indefinite,
        PronounClass::Third,
    ];

    pub fn file_stem(self) -> &'static str {
        match self {
            PronounClass::All => "all",
            PronounClass::Demonstrative => "demonstrative",
            PronounClass::FirstPlural => "first_plural",
            PronounClass::FirstSingular => "first_singular",
            PronounClass::Indefinite => "indefinite",
            PronounClass::Third => "third",
        }
    }
}

/// An unweighted list of words and phrases.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct WordList {
    words: BTreeSet<String>,
    /// Multiword entries, longest first.
    phrases: Vec<Vec<String>>,
}

impl WordList {
    pub fn new<I, S>(entries: I) -> WordList
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut words = BTreeSet::new();
        let mut phrases = BTreeSet::new();
        for e in entries {
            let e = e.as_ref().trim().to_lowercase();
            if e.is_empty() {
                continue;
            }
            let parts: Vec<String> = e.split_whitespace().map(str::to_string).collect();
            if parts.len() == 1 {
                words.insert(e);
            } else {
                phrases.insert(parts);
            }
        }
        let mut phrases: Vec<Vec<String>> = phrases.into_iter().collect();
        phrases.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        WordList { words, phrases }
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn phrases(&self) -> &[Vec<String>] {
        &self.phrases
    }

    pub fn len(&self) -> usize {
        self.words.len() + self.phrases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn canonical(&self) -> Vec<String> {
        let mut v: Vec<String> = self.words.iter().cloned().collect();
        v.extend(self.phrases.iter().map(|p| p.join(" ")));
        v.sort();
        v
    }
}

/// Entries with a numeric weight; single words only.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GradedLexicon {
    name: String,
    entries: BTreeMap<String, f64>,
}

impl GradedLexicon {
    /// Builds a lexicon; repeated entries keep the largest weight.
    pub fn new<I, S>(name: impl Into<String>, entries: I) -> GradedLexicon
    where
        I: IntoIterator<Item = (S, f64)>,
        S: AsRef<str>,
    {
        let mut map: BTreeMap<String, f64> = BTreeMap::new();
        for (w, v) in entries {
            let w = w.as_ref().trim().to_lowercase();
            let slot = map.entry(w).or_insert(v);
            if v > *slot {
                *slot = v;
            }
        }
        GradedLexicon {
            name: name.into(),
            entries: map,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn get(&self, word: &str) -> Option<f64> {
        self.entries.get(word).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn canonical(&self) -> Vec<String> {
        self.entries.iter().map(|(k, v)| format!("{k}\t{v}")).collect()
    }
}

/// A named pair of positive and negative strength lexicons.
#[derive(Debug, Clone, PartialEq)]
pub struct SentimentLexicon {
    pub name: String,
    pub positive: GradedLexicon,
    pub negative: GradedLexicon,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    Positive,
    Negative,
}

impl SentimentLexicon {
    pub fn polarity(&self, p: Polarity) -> &GradedLexicon {
        match p {
            Polarity::Positive => &self.positive,
            Polarity::Negative => &self.negative,
        }
    }
}

/// All lexical resources for one language.
#[derive(Debug, Clone, PartialEq)]
pub struct LexiconSet {
    pub language: String,
    lists: BTreeMap<ListKind, WordList>,
    pronouns: BTreeMap<PronounClass, WordList>,
    sentiment: Vec<SentimentLexicon>,
    valence: Vec<GradedLexicon>,
    stopwords: Option<WordList>,
    version: String,
}

fn read(path: &Path) -> Result<String, LexiconError> {
    std::fs::read_to_string(path).map_err(|source| LexiconError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn entry_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Parses a plain list file.
pub fn parse_list(text: &str) -> WordList {
    WordList::new(entry_lines(text).map(|(_, l)| l))
}

/// Parses `entry<TAB>value` lines, requiring values within `range`.
pub fn parse_graded(
    name: &str,
    text: &str,
    path: &Path,
    range: (f64, f64),
) -> Result<GradedLexicon, LexiconError> {
    let mut entries = Vec::new();
    for (line, l) in entry_lines(text) {
        let invalid = |message: String| LexiconError::Invalid {
            path: path.to_path_buf(),
            line,
            message,
        };
        let (w, v) = l
            .rsplit_once('\t')
            .ok_or_else(|| invalid("expected entry<TAB>value".into()))?;
        if w.trim().contains(char::is_whitespace) {
            return Err(invalid(format!("graded entry {w:?} must be a single word")));
        }
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| invalid(format!("value {v:?} is not a number")))?;
        if !v.is_finite() || v < range.0 || v > range.1 {
            return Err(invalid(format!(
                "value {v} outside [{}, {}]",
                range.0, range.1
            )));
        }
        entries.push((w.to_string(), v));
    }
    Ok(GradedLexicon::new(name, entries))
}

fn sorted_files(dir: &Path) -> Result<Vec<PathBuf>, LexiconError> {
    if !dir.is_dir() {
        return Ok(Vec::new());
    }
    let rd = std::fs::read_dir(dir).map_err(|source| LexiconError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut files = Vec::new();
    for e in rd {
        let e = e.map_err(|source| LexiconError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        let p = e.path();
        if p.extension().is_some_and(|x| x == "txt") {
            files.push(p);
        }
    }
    files.sort();
    Ok(files)
}

impl LexiconSet {
    /// Assembles a set from in-memory parts.
    pub fn from_parts(
        language: &str,
        lists: BTreeMap<ListKind, WordList>,
        pronouns: BTreeMap<PronounClass, WordList>,
        mut sentiment: Vec<SentimentLexicon>,
        mut valence: Vec<GradedLexicon>,
        stopwords: Option<WordList>,
    ) -> LexiconSet {
        sentiment.sort_by(|a, b| a.name.cmp(&b.name));
        valence.sort_by(|a, b| a.name.cmp(&b.name));
        let mut parts: Vec<String> = vec![format!("lang={language}")];
        for (k, l) in &lists {
            parts.push(format!("list={}", k.file_stem()));
            parts.extend(l.canonical());
        }
        for (k, l) in &pronouns {
            parts.push(format!("pronouns={}", k.file_stem()));
            parts.extend(l.canonical());
        }
        for s in &sentiment {
            parts.push(format!("sentiment+={}", s.name));
            parts.extend(s.positive.canonical());
            parts.push(format!("sentiment-={}", s.name));
            parts.extend(s.negative.canonical());
        }
        for v in &valence {
            parts.push(format!("valence={}", v.name));
            parts.extend(v.canonical());
        }
        if let Some(s) = &stopwords {
            parts.push("stopwords".into());
            parts.extend(s.canonical());
        }
        let version = hash_parts(&parts)[..16].to_string();
        LexiconSet {
            language: language.to_string(),
            lists,
            pronouns,
            sentiment,
            valence,
            stopwords,
            version,
        }
    }

    /// Loads `dir/<lang>/`. Missing files simply leave the resource out.
    pub fn load(dir: &Path, lang: &str) -> Result<LexiconSet, LexiconError> {
        let root = dir.join(lang);
        if !root.is_dir() {
            return Err(LexiconError::MissingLanguage {
                dir: dir.to_path_buf(),
                lang: lang.to_string(),
            });
        }
        let mut lists = BTreeMap::new();
        for k in ListKind::ALL {
            let p = root.join("lists").join(format!("{}.txt", k.file_stem()));
            if p.is_file() {
                lists.insert(k, parse_list(&read(&p)?));
            }
        }
        let mut pronouns = BTreeMap::new();
        for k in PronounClass::ALL {
            let p = root.join("pronouns").join(format!("{}.txt", k.file_stem()));
            if p.is_file() {
                pronouns.insert(k, parse_list(&read(&p)?));
            }
        }
        let mut halves: BTreeMap<String, (Option<GradedLexicon>, Option<GradedLexicon>)> =
            BTreeMap::new();
        for p in sorted_files(&root.join("sentiment"))? {
            let fname = p.file_name().unwrap().to_string_lossy().into_owned();
            let (name, positive) = if let Some(n) = fname.strip_suffix(".positive.txt") {
                (n.to_string(), true)
            } else if let Some(n) = fname.strip_suffix(".negative.txt") {
                (n.to_string(), false)
            } else {
                continue;
            };
            let lex = parse_graded(&name, &read(&p)?, &p, (0.0, 1.0))?;
            let slot = halves.entry(name).or_default();
            if positive {
                slot.0 = Some(lex);
            } else {
                slot.1 = Some(lex);
            }
        }
        let mut sentiment = Vec::new();
        for (name, (pos, neg)) in halves {
            match (pos, neg) {
                (Some(positive), Some(negative)) => sentiment.push(SentimentLexicon {
                    name,
                    positive,
                    negative,
                }),
                (Some(_), None) => {
                    return Err(LexiconError::UnpairedSentiment {
                        name,
                        present: "positive",
                    })
                }
                (None, Some(_)) => {
                    return Err(LexiconError::UnpairedSentiment {
                        name,
                        present: "negative",
                    })
                }
                (None, None) => {}
            }
        }
        let mut valence = Vec::new();
        for p in sorted_files(&root.join("valence"))? {
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            valence.push(parse_graded(&name, &read(&p)?, &p, (0.0, 10.0))?);
        }
        let sw = root.join("stopwords.txt");
        let stopwords = if sw.is_file() {
            Some(parse_list(&read(&sw)?))
        } else {
            None
        };
        Ok(LexiconSet::from_parts(
            lang, lists, pronouns, sentiment, valence, stopwords,
        ))
    }

    /// Content hash; independent of file order on disk.
    pub fn version(&self) -> &str {
        &self.version
    }

    pub fn list(&self, kind: ListKind) -> Option<&WordList> {
        self.lists.get(&kind)
    }

    pub fn pronouns(&self, class: PronounClass) -> Option<&WordList> {
        self.pronouns.get(&class)
    }

    pub fn sentiment(&self) -> &[SentimentLexicon] {
        &self.sentiment
    }

    pub fn valence(&self) -> &[GradedLexicon] {
        &self.valence
    }

    pub fn stopwords(&self) -> Option<&WordList> {
        self.stopwords.as_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_list_splits_phrases_and_folds_case() {
        let l = parse_list("# comment\nMaybe\nkind of\n\nsort of\ni think\n");
        assert!(l.contains("maybe"));
        assert_eq!(l.phrases().len(), 3);
        assert_eq!(l.len(), 4);
    }

    #[test]
    fn graded_duplicates_keep_max() {
        let g = parse_graded("x", "Good\t0.5\ngood\t0.75\n", Path::new("x"), (0.0, 1.0)).unwrap();
        assert_eq!(g.get("good"), Some(0.75));
    }

    #[test]
    fn graded_values_are_validated() {
        let p = Path::new("v.txt");
        assert!(parse_graded("v", "calm\t11\n", p, (0.0, 10.0)).is_err());
        assert!(parse_graded("v", "calm\tnone\n", p, (0.0, 10.0)).is_err());
        assert!(parse_graded("v", "calm\n", p, (0.0, 10.0)).is_err());
        match parse_graded("v", "ok\t1\nbad\t-1\n", p, (0.0, 10.0)) {
            Err(LexiconError::Invalid { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn version_ignores_insertion_order() {
        let mk = |order: [&str; 2]| {
            let mut lists = BTreeMap::new();
            lists.insert(ListKind::Hedges, WordList::new(order));
            let a = GradedLexicon::new("a", [("x", 0.5)]);
            let b = GradedLexicon::new("b", [("y", 0.5)]);
            let vals = if order[0] == "maybe" {
                vec![a, b]
            } else {
                vec![b, a]
            };
            LexiconSet::from_parts("en", lists, BTreeMap::new(), vec![], vals, None)
        };
        assert_eq!(mk(["maybe", "perhaps"]).version(), mk(["perhaps", "maybe"]).version());
    }

    #[test]
    fn loads_bundled_english() {
        let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../lexicons");
        let lex = LexiconSet::load(&dir, "en").unwrap();
        assert!(lex.list(ListKind::Hedges).unwrap().len() > 10);
        assert_eq!(lex.sentiment().len(), 1);
        assert_eq!(lex.valence().len(), 1);
        assert!(lex.stopwords().unwrap().contains("the"));
        assert!(LexiconSet::load(&dir, "zz").is_err());
    }
}
