//! Linguistic-cue features.
//!
//! Most cues are counts divided by the number of word tokens `|d|`
//! (punctuation excluded). `words`, `lemmas`, `punctuation`,
//! `avg_word_length`, `mean_sentence_length` and `mean_preverb_length` are
//! left unnormalized; the phoneme classes are divided by the number of
//! non-whitespace characters; tense rates are divided by the verb count.

pub mod lexicon;

use std::collections::HashSet;

use thiserror::Error;

pub use lexicon::{
    GradedLexicon, LexiconError, LexiconSet, ListKind, Polarity, PronounClass, SentimentLexicon,
    WordList,
};

use crate::corpus::Label;
use crate::textproc::phoneme::{classify, PhonemeClass};
use crate::textproc::pos::{coarse, is_ptb_verbal, Upos};
use crate::textproc::{AnnotatedDocument, Token};

#[derive(Debug, Error, PartialEq)]
pub enum CueError {
    #[error("document {doc_id:?} has no word tokens")]
    EmptyDocument { doc_id: String },
    #[error("document {doc_id:?} has no phoneme annotation")]
    PhonemesMissing { doc_id: String },
}

/// Whether a cue can be computed for a language.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Availability {
    Available,
    /// Meaningful for the language, but no resource or extraction exists.
    Unavailable,
    /// Meaningless for the language (e.g. articles in Russian).
    NotApplicable,
}

/// How a cue value is scaled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CueKind {
    /// A proportion in [0, 1].
    Rate,
    /// An unnormalized non-negative quantity.
    Count,
    /// Phoneme symbols per character; non-negative.
    PerCharacter,
    /// Mean rescaled valence in [-1, 1].
    Valence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cue {
    AvgWordLength,
    AdjAdv,
    Articles,
    Boosters,
    FilledPauses,
    FunctionWords,
    Hedges,
    Lemmas,
    Negations,
    Prepositions,
    Punctuation,
    VagueWords,
    Verbs,
    Words,
    Fricatives,
    Nasals,
    Plosives,
    Pronouns,
    FirstPerson,
    FirstPersonSingular,
    FirstPersonPlural,
    ThirdPerson,
    DemonstrativePronouns,
    IndefinitePronouns,
    MeanSentenceLength,
    MeanPreverbLength,
    Conjunctions,
    SubordinateClauses,
    ExclusionWords,
    ModalVerbs,
    MotionVerbs,
    SpatialWords,
    FutureTense,
    PastTense,
    PresentTense,
}

/// Languages with a fixed cue inventory.
pub const KNOWN_LANGUAGES: [&str; 5] = ["en", "nl", "ru", "es", "ro"];

impl Cue {
    /// Cues listed before the sentiment block.
    pub const LEADING: [Cue; 24] = [
        Cue::AvgWordLength,
        Cue::AdjAdv,
        Cue::Articles,
        Cue::Boosters,
        Cue::FilledPauses,
        Cue::FunctionWords,
        Cue::Hedges,
        Cue::Lemmas,
        Cue::Negations,
        Cue::Prepositions,
        Cue::Punctuation,
        Cue::VagueWords,
        Cue::Verbs,
        Cue::Words,
        Cue::Fricatives,
        Cue::Nasals,
        Cue::Plosives,
        Cue::Pronouns,
        Cue::FirstPerson,
        Cue::FirstPersonSingular,
        Cue::FirstPersonPlural,
        Cue::ThirdPerson,
        Cue::DemonstrativePronouns,
        Cue::IndefinitePronouns,
    ];

    /// Cues listed after the sentiment block.
    pub const TRAILING: [Cue; 11] = [
        Cue::MeanSentenceLength,
        Cue::MeanPreverbLength,
        Cue::Conjunctions,
        Cue::SubordinateClauses,
        Cue::ExclusionWords,
        Cue::ModalVerbs,
        Cue::MotionVerbs,
        Cue::SpatialWords,
        Cue::FutureTense,
        Cue::PastTense,
        Cue::PresentTense,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Cue::AvgWordLength => "avg_word_length",
            Cue::AdjAdv => "adj_adv",
            Cue::Articles => "articles",
            Cue::Boosters => "boosters",
            Cue::FilledPauses => "filled_pauses",
            Cue::FunctionWords => "function_words",
            Cue::Hedges => "hedges",
            Cue::Lemmas => "lemmas",
            Cue::Negations => "negations",
            Cue::Prepositions => "prepositions",
            Cue::Punctuation => "punctuation",
            Cue::VagueWords => "vague_words",
            Cue::Verbs => "verbs",
            Cue::Words => "words",
            Cue::Fricatives => "fricatives",
            Cue::Nasals => "nasals",
            Cue::Plosives => "plosives",
            Cue::Pronouns => "pronouns",
            Cue::FirstPerson => "first_person",
            Cue::FirstPersonSingular => "first_person_singular",
            Cue::FirstPersonPlural => "first_person_plural",
            Cue::ThirdPerson => "third_person",
            Cue::DemonstrativePronouns => "demonstrative_pronouns",
            Cue::IndefinitePronouns => "indefinite_pronouns",
            Cue::MeanSentenceLength => "mean_sentence_length",
            Cue::MeanPreverbLength => "mean_preverb_length",
            Cue::Conjunctions => "conjunctions",
            Cue::SubordinateClauses => "subordinate_clauses",
            Cue::ExclusionWords => "exclusion_words",
            Cue::ModalVerbs => "modal_verbs",
            Cue::MotionVerbs => "motion_verbs",
            Cue::SpatialWords => "spatial_words",
            Cue::FutureTense => "future_tense",
            Cue::PastTense => "past_tense",
            Cue::PresentTense => "present_tense",
        }
    }

    pub fn kind(self) -> CueKind {
        match self {
            Cue::Words
            | Cue::Lemmas
            | Cue::Punctuation
            | Cue::AvgWordLength
            | Cue::MeanSentenceLength
            | Cue::MeanPreverbLength
            | Cue::SubordinateClauses => CueKind::Count,
            Cue::Fricatives | Cue::Nasals | Cue::Plosives => CueKind::PerCharacter,
            _ => CueKind::Rate,
        }
    }

    /// Inventory entry for the five known languages; `None` elsewhere.
    pub fn table_status(self, lang: &str) -> Option<Availability> {
        use Availability::*;
        if !KNOWN_LANGUAGES.contains(&lang) {
            return None;
        }
        let en = lang == "en";
        Some(match self {
            Cue::Articles if lang == "ru" => NotApplicable,
            Cue::Boosters
            | Cue::FilledPauses
            | Cue::Hedges
            | Cue::VagueWords
            | Cue::MeanPreverbLength
            | Cue::SubordinateClauses
            | Cue::ExclusionWords
            | Cue::ModalVerbs
                if !en =>
            {
                Unavailable
            }
            Cue::MotionVerbs if !matches!(lang, "en" | "nl" | "ru") => Unavailable,
            Cue::FutureTense if !matches!(lang, "en" | "ru" | "es") => Unavailable,
            _ => Available,
        })
    }

    fn required_list(self) -> Option<ListKind> {
        Some(match self {
            Cue::Articles => ListKind::Articles,
            Cue::Boosters => ListKind::Boosters,
            Cue::FilledPauses => ListKind::FilledPauses,
            Cue::FunctionWords => ListKind::FunctionWords,
            Cue::Hedges => ListKind::Hedges,
            Cue::Negations => ListKind::Negations,
            Cue::VagueWords => ListKind::Vague,
            Cue::ExclusionWords => ListKind::Exclusion,
            Cue::ModalVerbs => ListKind::ModalVerbs,
            Cue::MotionVerbs => ListKind::MotionVerbs,
            Cue::SpatialWords => ListKind::Spatial,
            _ => return None,
        })
    }

    fn pronoun_classes(self) -> Option<&'static [PronounClass]> {
        Some(match self {
            Cue::Pronouns => &PronounClass::ALL,
            Cue::FirstPerson => &[PronounClass::FirstSingular, PronounClass::FirstPlural],
            Cue::FirstPersonSingular => &[PronounClass::FirstSingular],
            Cue::FirstPersonPlural => &[PronounClass::FirstPlural],
            Cue::ThirdPerson => &[PronounClass::Third],
            Cue::DemonstrativePronouns => &[PronounClass::Demonstrative],
            Cue::IndefinitePronouns => &[PronounClass::Indefinite],
            _ => return None,
        })
    }
}

/// One row of a language's cue inventory.
#[derive(Debug, Clone, PartialEq)]
pub struct CueSpec {
    pub name: String,
    pub kind: CueKind,
    pub availability: Availability,
}

#[derive(Debug, Clone, PartialEq)]
enum Slot {
    Static(Cue),
    Sentiment(usize, Polarity),
    Valence(usize),
}

fn slots(lex: &LexiconSet) -> Vec<(Slot, CueSpec)> {
    let mut out = Vec::new();
    for cue in Cue::LEADING {
        out.push((Slot::Static(cue), static_spec(cue, lex)));
    }
    for (i, s) in lex.sentiment().iter().enumerate() {
        for (p, prefix) in [(Polarity::Positive, "positive"), (Polarity::Negative, "negative")] {
            out.push((
                Slot::Sentiment(i, p),
                CueSpec {
                    name: format!("{prefix}_{}", s.name),
                    kind: CueKind::Rate,
                    availability: Availability::Available,
                },
            ));
        }
    }
    for (i, v) in lex.valence().iter().enumerate() {
        out.push((
            Slot::Valence(i),
            CueSpec {
                name: format!("valence_{}", v.name()),
                kind: CueKind::Valence,
                availability: Availability::Available,
            },
        ));
    }
    for cue in Cue::TRAILING {
        out.push((Slot::Static(cue), static_spec(cue, lex)));
    }
    out
}

fn static_spec(cue: Cue, lex: &LexiconSet) -> CueSpec {
    let mut availability = cue.table_status(&lex.language).unwrap_or(Availability::Available);
    if availability == Availability::Available {
        let has_resource = match (cue.required_list(), cue.pronoun_classes()) {
            (Some(k), _) => lex.list(k).is_some(),
            (None, Some(classes)) => classes.iter().any(|c| lex.pronouns(*c).is_some()),
            (None, None) => true,
        };
        if !has_resource {
            availability = Availability::Unavailable;
        }
    }
    CueSpec {
        name: cue.name().to_string(),
        kind: cue.kind(),
        availability,
    }
}

/// The full cue inventory for a lexicon set's language, in canonical order.
pub fn inventory(lex: &LexiconSet) -> Vec<CueSpec> {
    slots(lex).into_iter().map(|(_, s)| s).collect()
}

/// Named cue values for one document.
#[derive(Debug, Clone, PartialEq)]
pub struct CueVector {
    pub doc_id: String,
    pub label: Label,
    pub language: String,
    pub lexicon_version: String,
    /// Whether location entities from the annotation fed `spatial_words`.
    pub ner_available: bool,
    values: Vec<(String, f64)>,
}

impl CueVector {
    pub fn get(&self, name: &str) -> Option<f64> {
        self.values.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }

    pub fn values(&self) -> &[(String, f64)] {
        &self.values
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.values.iter().map(|(n, _)| n.as_str())
    }
}

fn word_count(doc: &AnnotatedDocument) -> Result<usize, CueError> {
    let n = doc.word_count();
    if n == 0 {
        return Err(CueError::EmptyDocument {
            doc_id: doc.doc.id.clone(),
        });
    }
    Ok(n)
}

fn in_list(list: &WordList, t: &Token) -> bool {
    list.contains(&t.lower) || t.lemma.as_ref().is_some_and(|l| list.contains(&l.to_lowercase()))
}

/// Walks each sentence's word tokens, matching phrases first. `extra` may
/// count an unmatched token anyway. Returns the number of hits.
fn count_matches(
    doc: &AnnotatedDocument,
    list: &WordList,
    surface_only: bool,
    extra: impl Fn(&Token) -> bool,
) -> usize {
    let mut hits = 0;
    for sent in doc.word_sentences() {
        let mut i = 0;
        'tok: while i < sent.len() {
            for p in list.phrases() {
                if i + p.len() <= sent.len() && sent[i..i + p.len()].iter().zip(p).all(|(t, w)| &t.lower == w)
                {
                    hits += 1;
                    i += p.len();
                    continue 'tok;
                }
            }
            let t = sent[i];
            let hit = if surface_only {
                list.contains(&t.lower)
            } else {
                in_list(list, t)
            };
            if hit || extra(t) {
                hits += 1;
            }
            i += 1;
        }
    }
    hits
}

const LOCATION_TAGS: [&str; 7] = ["LOC", "GPE", "B-LOC", "I-LOC", "B-GPE", "I-GPE", "LOCATION"];

fn is_location(t: &Token) -> bool {
    t.ner().is_some_and(|n| LOCATION_TAGS.contains(&n))
}

/// Result of the spatial-word count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialScore {
    pub value: f64,
    /// False when the annotation carried no entity tags.
    pub ner_used: bool,
}

/// (spatial-lexicon hits + location-entity tokens) / |d|, each token counted
/// at most once.
pub fn spatial_count(doc: &AnnotatedDocument, spatial: &WordList) -> Result<SpatialScore, CueError> {
    let n = word_count(doc)?;
    let ner_used = doc.tokens().any(|t| t.ner().is_some());
    let hits = count_matches(doc, spatial, false, is_location);
    Ok(SpatialScore {
        value: hits as f64 / n as f64,
        ner_used,
    })
}

fn strength_of(lex: &GradedLexicon, t: &Token) -> Option<f64> {
    lex.get(&t.lower)
        .or_else(|| t.lemma.as_ref().and_then(|l| lex.get(&l.to_lowercase())))
}

/// Σ strength(w) / |d| over word tokens.
pub fn sentiment_score(
    doc: &AnnotatedDocument,
    lexicon: &SentimentLexicon,
    polarity: Polarity,
) -> Result<f64, CueError> {
    let n = word_count(doc)?;
    let lex = lexicon.polarity(polarity);
    let sum: f64 = doc.word_tokens().filter_map(|t| strength_of(lex, t)).sum();
    Ok(sum / n as f64)
}

/// Σ (valence(w) − 5) / (5 |d|); words outside the lexicon contribute 0.
pub fn anew_score(doc: &AnnotatedDocument, valence: &GradedLexicon) -> Result<f64, CueError> {
    let n = word_count(doc)?;
    let sum: f64 = doc
        .word_tokens()
        .filter_map(|t| strength_of(valence, t))
        .map(|v| v - 5.0)
        .sum();
    Ok(sum / (5.0 * n as f64))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhonemeRates {
    pub nasals: f64,
    pub plosives: f64,
    pub fricatives: f64,
}

/// Class counts divided by the number of non-whitespace characters.
pub fn phoneme_class_rates(doc: &AnnotatedDocument) -> Result<PhonemeRates, CueError> {
    let prons = doc.phonemes.as_ref().ok_or_else(|| CueError::PhonemesMissing {
        doc_id: doc.doc.id.clone(),
    })?;
    let chars = doc.doc.text.chars().filter(|c| !c.is_whitespace()).count();
    if chars == 0 {
        return Err(CueError::EmptyDocument {
            doc_id: doc.doc.id.clone(),
        });
    }
    let mut counts = [0usize; 3];
    for sym in prons.iter().flatten().flatten() {
        match classify(sym) {
            PhonemeClass::Nasal => counts[0] += 1,
            PhonemeClass::Plosive => counts[1] += 1,
            PhonemeClass::Fricative => counts[2] += 1,
            PhonemeClass::Other => {}
        }
    }
    let c = chars as f64;
    Ok(PhonemeRates {
        nasals: counts[0] as f64 / c,
        plosives: counts[1] as f64 / c,
        fricatives: counts[2] as f64 / c,
    })
}

/// Syllables by vowel groups, dropping a silent final `e`; at least one.
pub fn syllables(word: &str) -> usize {
    let w: Vec<char> = word.to_lowercase().chars().filter(|c| c.is_alphabetic()).collect();
    if w.is_empty() {
        return 1;
    }
    let vowel = |c: char| matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y');
    let mut groups = 0;
    let mut prev = false;
    for &c in &w {
        let v = vowel(c);
        if v && !prev {
            groups += 1;
        }
        prev = v;
    }
    let n = w.len();
    let silent_e = n > 2 && w[n - 1] == 'e' && !vowel(w[n - 2]) && !(w[n - 2] == 'l' && !vowel(w[n - 3]));
    if silent_e && groups > 1 {
        groups -= 1;
    }
    groups.max(1)
}

/// 206.835 − 1.015·(words/sentences) − 84.6·(syllables/words).
pub fn flesch_reading_ease(doc: &AnnotatedDocument) -> Result<f64, CueError> {
    let words = word_count(doc)? as f64;
    let sentences = doc.sentences.iter().filter(|s| s.iter().any(|t| !t.is_punct)).count() as f64;
    let syl: usize = doc.word_tokens().map(|t| syllables(&t.surface)).sum();
    Ok(206.835 - 1.015 * (words / sentences) - 84.6 * (syl as f64 / words))
}

/// Mean document score over a corpus; `None` if no document has words.
pub fn corpus_flesch<'a>(docs: impl IntoIterator<Item = &'a AnnotatedDocument>) -> Option<f64> {
    let scores: Vec<f64> = docs
        .into_iter()
        .filter_map(|d| flesch_reading_ease(d).ok())
        .collect();
    (!scores.is_empty()).then(|| scores.iter().sum::<f64>() / scores.len() as f64)
}

const SUBORDINATE: [&str; 5] = ["advcl", "ccomp", "xcomp", "acl", "csubj"];
const FUTURE_MODALS: [&str; 5] = ["will", "shall", "'ll", "’ll", "wo"];

fn is_verb(t: &Token) -> bool {
    matches!(coarse(t), Some(Upos::Verb | Upos::Aux))
}

fn is_finite(t: &Token) -> bool {
    if let Some(x) = t.xpos.as_deref() {
        if is_ptb_verbal(x) {
            return matches!(x, "VBD" | "VBP" | "VBZ" | "MD");
        }
    }
    is_verb(t) && t.feat("VerbForm") == Some("Fin")
}

fn is_base_form(t: &Token) -> bool {
    t.xpos.as_deref() == Some("VB") || (is_verb(t) && t.feat("VerbForm") == Some("Inf"))
}

#[derive(Default)]
struct TenseCounts {
    verbs: usize,
    past: usize,
    present: usize,
    future: usize,
}

fn tense_counts(doc: &AnnotatedDocument) -> TenseCounts {
    let english = doc.doc.language == "en";
    let mut c = TenseCounts::default();
    for sent in doc.word_sentences() {
        for (j, t) in sent.iter().enumerate() {
            if !is_verb(t) {
                continue;
            }
            c.verbs += 1;
            let ptb = t.xpos.as_deref().filter(|x| english && is_ptb_verbal(x));
            match ptb {
                Some("VBD" | "VBN") => c.past += 1,
                Some("VBP" | "VBZ" | "VBG") => c.present += 1,
                Some(_) => {}
                None => match t.feat("Tense") {
                    Some("Past") => c.past += 1,
                    Some("Pres") => c.present += 1,
                    Some("Fut") => c.future += 1,
                    _ => {}
                },
            }
            if english && is_base_form(t) {
                let mut k = j;
                let mut skipped = 0;
                while k > 0 && skipped <= 3 {
                    k -= 1;
                    let prev = sent[k];
                    if FUTURE_MODALS.contains(&prev.lower.as_str()) {
                        c.future += 1;
                        break;
                    }
                    let adverbial = matches!(coarse(prev), Some(Upos::Adv | Upos::Part))
                        || prev.lower == "not"
                        || prev.lower == "n't";
                    if !adverbial {
                        break;
                    }
                    skipped += 1;
                }
            }
        }
    }
    c
}

fn mean_preverb_length(doc: &AnnotatedDocument) -> Option<f64> {
    let mut lengths = Vec::new();
    for sent in doc.word_sentences() {
        if let Some(i) = sent.iter().position(|t| is_finite(t)) {
            lengths.push(i as f64);
        }
    }
    (!lengths.is_empty()).then(|| lengths.iter().sum::<f64>() / lengths.len() as f64)
}

fn pronoun_hits(doc: &AnnotatedDocument, lex: &LexiconSet, classes: &[PronounClass]) -> usize {
    let lists: Vec<&WordList> = classes.iter().filter_map(|c| lex.pronouns(*c)).collect();
    doc.word_tokens()
        .filter(|t| lists.iter().any(|l| l.contains(&t.lower)))
        .count()
}

/// Computes every available cue. Cues whose annotation prerequisites are
/// missing for this document (POS, dependencies, phonemes) are left out.
pub fn extract_cues(doc: &AnnotatedDocument, lex: &LexiconSet) -> Result<CueVector, CueError> {
    let n = word_count(doc)?;
    let nf = n as f64;
    let has_pos = doc.has_pos();
    let has_deps = doc.has_dependencies();
    let words: Vec<&Token> = doc.word_tokens().collect();
    let n_sentences = doc
        .sentences
        .iter()
        .filter(|s| s.iter().any(|t| !t.is_punct))
        .count()
        .max(1) as f64;
    let pos_count = |pred: &dyn Fn(Upos) -> bool| {
        words.iter().filter(|t| coarse(t).is_some_and(pred)).count() as f64 / nf
    };
    let phon = doc.phonemes.as_ref().map(|_| phoneme_class_rates(doc)).transpose()?;
    let tense = has_pos.then(|| tense_counts(doc));
    let tense_rate = |f: fn(&TenseCounts) -> usize| {
        tense.as_ref().map(|c| {
            if c.verbs == 0 {
                0.0
            } else {
                f(c) as f64 / c.verbs as f64
            }
        })
    };
    let mut ner_available = false;
    let mut values = Vec::new();
    for (slot, spec) in slots(lex) {
        if spec.availability != Availability::Available {
            continue;
        }
        let value: Option<f64> = match slot {
            Slot::Sentiment(i, p) => Some(sentiment_score(doc, &lex.sentiment()[i], p)?),
            Slot::Valence(i) => Some(anew_score(doc, &lex.valence()[i])?),
            Slot::Static(cue) => match cue {
                Cue::AvgWordLength => Some(
                    words.iter().map(|t| t.surface.chars().count()).sum::<usize>() as f64 / nf,
                ),
                Cue::Words => Some(nf),
                Cue::Lemmas => Some(
                    words
                        .iter()
                        .map(|t| t.lemma_or_lower())
                        .collect::<HashSet<_>>()
                        .len() as f64,
                ),
                Cue::Punctuation => Some(doc.tokens().filter(|t| t.is_punct).count() as f64),
                Cue::AdjAdv => has_pos.then(|| pos_count(&|u| matches!(u, Upos::Adj | Upos::Adv))),
                Cue::Prepositions => has_pos.then(|| pos_count(&|u| u == Upos::Adp)),
                Cue::Verbs => has_pos.then(|| pos_count(&|u| matches!(u, Upos::Verb | Upos::Aux))),
                Cue::Conjunctions => {
                    has_pos.then(|| pos_count(&|u| matches!(u, Upos::Cconj | Upos::Sconj)))
                }
                Cue::Fricatives => phon.map(|p| p.fricatives),
                Cue::Nasals => phon.map(|p| p.nasals),
                Cue::Plosives => phon.map(|p| p.plosives),
                Cue::MeanSentenceLength => Some(nf / n_sentences),
                Cue::MeanPreverbLength => {
                    if has_pos {
                        mean_preverb_length(doc)
                    } else {
                        None
                    }
                }
                Cue::SubordinateClauses => has_deps.then(|| {
                    doc.tokens()
                        .filter(|t| {
                            t.deprel
                                .as_deref()
                                .map(|d| d.split(':').next().unwrap_or(d))
                                .is_some_and(|d| SUBORDINATE.contains(&d))
                        })
                        .count() as f64
                        / n_sentences
                }),
                Cue::PastTense => tense_rate(|c| c.past),
                Cue::PresentTense => tense_rate(|c| c.present),
                Cue::FutureTense => tense_rate(|c| c.future),
                Cue::SpatialWords => {
                    let s = spatial_count(doc, lex.list(ListKind::Spatial).expect("checked"))?;
                    ner_available = s.ner_used;
                    Some(s.value)
                }
                c if c.pronoun_classes().is_some() => {
                    Some(pronoun_hits(doc, lex, c.pronoun_classes().unwrap()) as f64 / nf)
                }
                c => {
                    let list = lex.list(c.required_list().expect("list cue")).expect("checked");
                    Some(count_matches(doc, list, false, |_| false) as f64 / nf)
                }
            },
        };
        if let Some(v) = value {
            values.push((spec.name, v));
        }
    }
    Ok(CueVector {
        doc_id: doc.doc.id.clone(),
        label: doc.doc.label,
        language: doc.doc.language.clone(),
        lexicon_version: lex.version().to_string(),
        ner_available,
        values,
    })
}

/// Wide CSV: `doc_id,label,<cue columns>`; absent values are empty.
pub fn cues_to_csv(vectors: &[CueVector], columns: &[String]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["doc_id".to_string(), "label".to_string()];
    header.extend(columns.iter().cloned());
    w.write_record(&header).expect("in-memory write");
    for v in vectors {
        let mut row = vec![v.doc_id.clone(), v.label.to_string()];
        for c in columns {
            row.push(v.get(c).map(|x| format!("{x}")).unwrap_or_default());
        }
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Document;
    use crate::textproc::{AnnotationSource, TokenizerOptions};
    use std::collections::BTreeMap;

    fn document(text: &str, lang: &str) -> Document {
        Document {
            id: "d".into(),
            text: text.into(),
            label: Label::Truthful,
            dataset_id: "t".into(),
            language: lang.into(),
            genre: "g".into(),
            meta: BTreeMap::new(),
        }
    }

    fn plain(text: &str) -> AnnotatedDocument {
        AnnotatedDocument::from_text(document(text, "en"), TokenizerOptions::default())
    }

    fn sentiment(pos: &[(&str, f64)]) -> SentimentLexicon {
        SentimentLexicon {
            name: "toy".into(),
            positive: GradedLexicon::new("toy", pos.iter().map(|(w, v)| (*w, *v))),
            negative: GradedLexicon::new("toy", Vec::<(&str, f64)>::new()),
        }
    }

    #[test]
    fn sentiment_examples() {
        let d = plain("good bad good the");
        let lex = sentiment(&[("good", 1.0)]);
        assert_eq!(sentiment_score(&d, &lex, Polarity::Positive).unwrap(), 0.5);
        assert_eq!(sentiment_score(&d, &lex, Polarity::Negative).unwrap(), 0.0);
        let empty = plain("...");
        assert!(sentiment_score(&empty, &lex, Polarity::Positive).is_err());
    }

    #[test]
    fn anew_examples() {
        let v = GradedLexicon::new("v", [("calm", 5.0), ("joy", 7.5), ("war", 2.0), ("gift", 8.0)]);
        assert_eq!(anew_score(&plain("calm"), &v).unwrap(), 0.0);
        assert_eq!(anew_score(&plain("joy"), &v).unwrap(), 0.5);
        assert!(anew_score(&plain("war gift table"), &v).unwrap().abs() < 1e-12);
    }

    #[test]
    fn phoneme_rates_for_man() {
        let mut d = plain("man");
        d.phonemes = Some(vec![Some(vec!["m".into(), "æ".into(), "n".into()])]);
        let r = phoneme_class_rates(&d).unwrap();
        assert!((r.nasals - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(r.plosives, 0.0);
        assert!(phoneme_class_rates(&plain("man")).is_err());
    }

    #[test]
    fn spatial_lexicon_plus_entities() {
        let mut d = plain("under the bridge in Chicago");
        d.sentences[0][4].misc.insert("NER".into(), "LOC".into());
        let list = WordList::new(["under", "in", "nearby"]);
        let s = spatial_count(&d, &list).unwrap();
        // under, in (lexicon) + Chicago (entity)
        assert!((s.value - 3.0 / 5.0).abs() < 1e-12);
        assert!(s.ner_used);
        let s = spatial_count(&plain("a b c"), &list).unwrap();
        assert_eq!(s.value, 0.0);
        assert!(!s.ner_used);
    }

    #[test]
    fn flesch_examples() {
        let f = flesch_reading_ease(&plain("The cat sat.")).unwrap();
        assert!((f - (206.835 - 1.015 * 3.0 - 84.6)).abs() < 1e-9);
        let g = flesch_reading_ease(&plain("Go.")).unwrap();
        assert!((g - 121.22).abs() < 1e-9);
        assert!(flesch_reading_ease(&plain("!")).is_err());
    }

    #[test]
    fn syllable_heuristic() {
        assert_eq!(syllables("cat"), 1);
        assert_eq!(syllables("make"), 1);
        assert_eq!(syllables("table"), 2);
        assert_eq!(syllables("hotel"), 2);
        assert_eq!(syllables("beautiful"), 3);
        assert_eq!(syllables("the"), 1);
    }

    #[test]
    fn phrases_count_once() {
        let d = plain("It was kind of nice, I think.");
        let hedges = WordList::new(["kind of", "i think", "maybe"]);
        assert_eq!(count_matches(&d, &hedges, false, |_| false), 2);
    }

    #[test]
    fn russian_has_no_articles() {
        let lex = LexiconSet::from_parts("ru", BTreeMap::new(), BTreeMap::new(), vec![], vec![], None);
        let inv = inventory(&lex);
        let art = inv.iter().find(|s| s.name == "articles").unwrap();
        assert_eq!(art.availability, Availability::NotApplicable);
        let hedges = inv.iter().find(|s| s.name == "hedges").unwrap();
        assert_eq!(hedges.availability, Availability::Unavailable);
        let d = AnnotatedDocument {
            doc: document("я был там", "ru"),
            sentences: crate::textproc::tokenize("я был там", "ru"),
            phonemes: None,
            source: AnnotationSource::Tokenizer,
        };
        let v = extract_cues(&d, &lex).unwrap();
        assert_eq!(v.get("articles"), None);
        assert_eq!(v.get("words"), Some(3.0));
    }

    #[test]
    fn missing_prerequisites_leave_cues_absent() {
        let lex = LexiconSet::from_parts("en", BTreeMap::new(), BTreeMap::new(), vec![], vec![], None);
        let v = extract_cues(&plain("We went home."), &lex).unwrap();
        assert_eq!(v.get("verbs"), None);
        assert_eq!(v.get("nasals"), None);
        assert_eq!(v.get("subordinate_clauses"), None);
        assert_eq!(v.get("words"), Some(3.0));
        assert_eq!(v.get("punctuation"), Some(1.0));
    }

    #[test]
    fn future_tense_detection() {
        let mut d = plain("We will not return");
        let tags = [("PRP", "PRON"), ("MD", "AUX"), ("RB", "PART"), ("VB", "VERB")];
        for (t, (x, u)) in d.sentences[0].iter_mut().zip(tags) {
            t.xpos = Some(x.into());
            t.upos = Some(u.into());
        }
        let c = tense_counts(&d);
        assert_eq!((c.verbs, c.future, c.past, c.present), (2, 1, 0, 0));
        assert_eq!(mean_preverb_length(&d), Some(1.0));
    }

    #[test]
    fn csv_export_has_empty_cells_for_absent() {
        let lex = LexiconSet::from_parts("en", BTreeMap::new(), BTreeMap::new(), vec![], vec![], None);
        let v = extract_cues(&plain("Hi there."), &lex).unwrap();
        let csv = cues_to_csv(&[v], &["words".into(), "verbs".into()]);
        assert_eq!(csv, "doc_id,label,words,verbs\nd,truthful,2,\n");
    }
}
