//! Fixtures shared by the integration tests and the acceptance suite.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use deceptext::config::NonConvergence;
use deceptext::corpus::{Corpus, Document, Label, SplitRatios};
use deceptext::cues::LexiconSet;
use deceptext::eval::{ExperimentSettings, PreparedDataset};
use deceptext::features::{prepare_corpus, Preparation, SchemaOptions};
use deceptext::model::TrainOptions;
use deceptext::ngrams::PhonemeUnit;
use deceptext::textproc::phoneme::BuiltinEnglish;
use deceptext::textproc::TokenizerOptions;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn repo_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn english_lexicons() -> LexiconSet {
    LexiconSet::load(&repo_root().join("lexicons"), "en").expect("bundled English lexicons")
}

const SHARED: &[&str] = &[
    "the", "room", "was", "clean", "and", "the", "staff", "were", "friendly", "we", "stayed", "two",
    "nights", "hotel", "location", "near", "station", "breakfast", "good", "bed", "comfortable",
    "view", "from", "window", "price", "service", "desk", "quiet", "street", "walk", "lobby", "pool",
];

pub fn doc(id: &str, text: &str, deceptive: bool, dataset: &str) -> Document {
    Document {
        id: id.to_string(),
        text: text.to_string(),
        label: Label::from_deceptive(deceptive),
        dataset_id: dataset.to_string(),
        language: "en".to_string(),
        genre: "review".to_string(),
        meta: BTreeMap::new(),
    }
}

/// Balanced reviews drawn from one shared vocabulary. Deceptive reviews get
/// `planted` (if given) inserted once at a random position.
pub fn synthetic_corpus(id: &str, n: usize, seed: u64, planted: Option<&str>) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut docs = Vec::with_capacity(n);
    for i in 0..n {
        let deceptive = i % 2 == 1;
        let len = rng.random_range(12..30);
        let mut words: Vec<String> = (0..len).map(|_| SHARED.choose(&mut rng).unwrap().to_string()).collect();
        if deceptive {
            if let Some(p) = planted {
                let at = rng.random_range(0..=words.len());
                words.insert(at, p.to_string());
            }
        }
        let mut text = words.join(" ");
        text.push('.');
        let mut chars = text.chars();
        let first = chars.next().unwrap().to_uppercase().collect::<String>();
        docs.push(doc(&format!("d{i:04}"), &format!("{first}{}", chars.as_str()), deceptive, id));
    }
    Corpus::new(id, "en", Some("US".into()), Some(91), "review", docs).expect("valid corpus")
}

pub fn prepare(corpus: &Corpus, lex: &LexiconSet) -> PreparedDataset {
    let ph = BuiltinEnglish::new();
    let prep = Preparation {
        tokenizer: TokenizerOptions::default(),
        annotations: None,
        phonemizer: Some(&ph),
        lexicons: Some(lex),
    };
    let docs = prepare_corpus(corpus, &prep).expect("prepared");
    PreparedDataset::new(corpus.clone(), docs).expect("aligned")
}

pub fn settings(lex: &LexiconSet, seed: u64) -> ExperimentSettings<'_> {
    ExperimentSettings {
        lexicons: Some(lex),
        schema: SchemaOptions {
            top_k: 1000,
            phoneme_unit: PhonemeUnit::Symbol,
        },
        train: TrainOptions::default(),
        threshold: 0.5,
        ratios: SplitRatios::STANDARD,
        stratified: true,
        seed,
        config_hash: "test".to_string(),
        on_nonconvergence: NonConvergence::Warn,
    }
}
