//! Feature setups: which cue and n-gram blocks feed a classifier and how it
//! is trained.
//!
//! The canonical form joins feature parts with `+` and puts the trainer after
//! a colon:
//!
//! ```text
//! ling+word(1,1),stop,lowercase:simplog
//! pos(3,3):log,attrsel
//! ```
//!
//! [`FeatureSetup::parse_legend`] also reads the compact table notation,
//! where the family comes from the row label (`Word-gram` with
//! `(1,2),SimpLog,stem`, or `Linguistic+` with `Word,(1,1),SimpLog,stop`).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cues::{Availability, Cue};
use crate::ngrams::{NgramConfig, NgramFamily, PhonemeUnit};

#[derive(Debug, Error, PartialEq)]
pub enum SetupError {
    #[error("feature setup {setup:?}: {message}")]
    Syntax { setup: String, message: String },
    #[error("feature setup {setup} is not available for language {language}: {message}")]
    Unavailable {
        setup: String,
        language: String,
        message: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrainerKind {
    /// IRLS over every feature (`Log`).
    Ridge,
    /// Forward selection by validation accuracy (`SimpLog`).
    Stagewise,
}

impl TrainerKind {
    pub fn canonical(self) -> &'static str {
        match self {
            TrainerKind::Ridge => "log",
            TrainerKind::Stagewise => "simplog",
        }
    }

    pub fn legend(self) -> &'static str {
        match self {
            TrainerKind::Ridge => "Log",
            TrainerKind::Stagewise => "SimpLog",
        }
    }

    fn parse(s: &str) -> Option<TrainerKind> {
        match s.to_ascii_lowercase().as_str() {
            "log" | "logistic" | "ridge" => Some(TrainerKind::Ridge),
            "simplog" | "simplelogistic" | "stagewise" => Some(TrainerKind::Stagewise),
            _ => None,
        }
    }
}

/// One n-gram block of a setup.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NgramSpec {
    pub family: NgramFamily,
    pub min_n: usize,
    pub max_n: usize,
    pub stem: bool,
    pub stop: bool,
    pub lowercase: bool,
}

impl NgramSpec {
    pub fn config(&self, top_k: usize, phoneme_unit: PhonemeUnit) -> NgramConfig {
        NgramConfig {
            stem: self.stem,
            stop: self.stop,
            lowercase: self.lowercase,
            top_k,
            phoneme_unit,
            ..NgramConfig::new(self.family, self.min_n, self.max_n)
        }
    }

    fn canonical(&self) -> String {
        let mut s = format!("{}({},{})", self.family.name(), self.min_n, self.max_n);
        for (on, flag) in [(self.stem, "stem"), (self.stop, "stop"), (self.lowercase, "lowercase")] {
            if on {
                s.push(',');
                s.push_str(flag);
            }
        }
        s
    }

    fn flags(&self) -> Vec<&'static str> {
        [(self.stop, "stop"), (self.stem, "stem"), (self.lowercase, "lowercase")]
            .into_iter()
            .filter_map(|(on, f)| on.then_some(f))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FeatureSetup {
    /// Include the linguistic-cue vector.
    pub cues: bool,
    pub ngrams: Vec<NgramSpec>,
    pub trainer: TrainerKind,
    /// Run correlation-based subset selection before training.
    pub attrsel: bool,
}

fn family_from_word(s: &str) -> Option<NgramFamily> {
    match s.to_ascii_lowercase().as_str() {
        "phoneme" | "phon" | "phoneme-gram" => Some(NgramFamily::Phoneme),
        "char" | "character" | "character-gram" => Some(NgramFamily::Character),
        "word" | "word-gram" => Some(NgramFamily::Word),
        "pos" | "pos-gram" => Some(NgramFamily::Pos),
        "syntactic" | "syn" | "sn" | "syntactic-gram" => Some(NgramFamily::Syntactic),
        _ => None,
    }
}

/// Splits on commas that are not inside parentheses.
fn split_top(s: &str) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut depth = 0;
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if c == ',' && depth == 0 {
            out.push(String::new());
        } else {
            out.last_mut().unwrap().push(c);
        }
    }
    out.into_iter().map(|s| s.trim().to_string()).collect()
}

fn parse_range(s: &str) -> Option<(usize, usize)> {
    let inner = s.strip_prefix('(')?.strip_suffix(')')?;
    let (a, b) = inner.split_once(',')?;
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

impl FeatureSetup {
    /// Cue vector only, trained with the given trainer.
    pub fn linguistic(trainer: TrainerKind) -> FeatureSetup {
        FeatureSetup {
            cues: true,
            ngrams: Vec::new(),
            trainer,
            attrsel: false,
        }
    }

    pub fn canonical(&self) -> String {
        let mut parts = Vec::new();
        if self.cues {
            parts.push("ling".to_string());
        }
        parts.extend(self.ngrams.iter().map(NgramSpec::canonical));
        let mut s = format!("{}:{}", parts.join("+"), self.trainer.canonical());
        if self.attrsel {
            s.push_str(",attrsel");
        }
        s
    }

    /// Row label in the style of the result tables.
    pub fn row_label(&self) -> String {
        match (self.cues, self.ngrams.as_slice()) {
            (true, []) => "Linguistic".into(),
            (true, _) => "Linguistic+".into(),
            (false, [one]) => match one.family {
                NgramFamily::Phoneme => "Phoneme-gram".into(),
                NgramFamily::Character => "Character-gram".into(),
                NgramFamily::Word => "Word-gram".into(),
                NgramFamily::Pos => "POS-gram".into(),
                NgramFamily::Syntactic => "Syntactic-gram".into(),
            },
            (false, _) => "N-gram union".into(),
        }
    }

    /// Compact legend notation, e.g. `(1,2),SimpLog,stem` or
    /// `Word,(1,1),SimpLog,stop,lowercase`. Setups with several n-gram
    /// blocks fall back to the canonical form.
    pub fn legend(&self) -> String {
        let mut items = Vec::new();
        let spec = match self.ngrams.as_slice() {
            [] => None,
            [one] => Some(one),
            _ => return self.canonical(),
        };
        if let Some(s) = spec {
            if self.cues {
                items.push(match s.family {
                    NgramFamily::Phoneme => "Phoneme".to_string(),
                    NgramFamily::Character => "Char".to_string(),
                    NgramFamily::Word => "Word".to_string(),
                    NgramFamily::Pos => "POS".to_string(),
                    NgramFamily::Syntactic => "SN".to_string(),
                });
            }
            items.push(format!("({},{})", s.min_n, s.max_n));
        }
        items.push(self.trainer.legend().to_string());
        if let Some(s) = spec {
            items.extend(s.flags().into_iter().map(String::from));
        }
        if self.attrsel {
            items.push("attrsel".into());
        }
        items.join(",")
    }

    /// Reads the compact legend notation for a table row.
    pub fn parse_legend(row_label: &str, legend: &str) -> Result<FeatureSetup, SetupError> {
        let err = |message: String| SetupError::Syntax {
            setup: format!("{row_label} {legend}"),
            message,
        };
        let row = row_label.trim();
        let (cues, mut family) = match row.to_ascii_lowercase().as_str() {
            "linguistic" => (true, None),
            "linguistic+" => (true, None),
            other => (
                false,
                Some(family_from_word(other).ok_or_else(|| err(format!("unknown row label {row}")))?),
            ),
        };
        let plus = row.ends_with('+');
        let mut range = None;
        let mut trainer = None;
        let mut spec_flags = (false, false, false);
        let mut attrsel = false;
        // The tables sometimes separate items with a dot.
        for item in split_top(&legend.replace('.', ",")) {
            if item.is_empty() {
                continue;
            }
            if let Some(r) = parse_range(&item) {
                range = Some(r);
            } else if let Some(t) = TrainerKind::parse(&item) {
                trainer = Some(t);
            } else if plus && family.is_none() && family_from_word(&item).is_some() {
                family = family_from_word(&item);
            } else {
                match item.to_ascii_lowercase().as_str() {
                    "stem" => spec_flags.0 = true,
                    "stop" => spec_flags.1 = true,
                    "lowercase" => spec_flags.2 = true,
                    "attrsel" => attrsel = true,
                    _ => return Err(err(format!("unknown item {item:?}"))),
                }
            }
        }
        let trainer = trainer.ok_or_else(|| err("no trainer (SimpLog or Log)".into()))?;
        let ngrams = match (family, range) {
            (None, None) if !plus => Vec::new(),
            (Some(family), Some((min_n, max_n))) => vec![NgramSpec {
                family,
                min_n,
                max_n,
                stem: spec_flags.0,
                stop: spec_flags.1,
                lowercase: spec_flags.2,
            }],
            (Some(_), None) => return Err(err("n-gram range missing".into())),
            (None, _) => return Err(err("n-gram family missing".into())),
        };
        if ngrams.is_empty() && (spec_flags.0 || spec_flags.1 || spec_flags.2) {
            return Err(err("n-gram flags without an n-gram block".into()));
        }
        let setup = FeatureSetup {
            cues,
            ngrams,
            trainer,
            attrsel,
        };
        setup.validate().map_err(|e| err(e.to_string()))?;
        Ok(setup)
    }

    /// Structural checks independent of language.
    pub fn validate(&self) -> Result<(), SetupError> {
        let err = |message: String| SetupError::Syntax {
            setup: self.canonical(),
            message,
        };
        if !self.cues && self.ngrams.is_empty() {
            return Err(err("no feature block selected".into()));
        }
        for s in &self.ngrams {
            s.config(1, PhonemeUnit::default())
                .validate()
                .map_err(|e| err(e.to_string()))?;
        }
        for (i, a) in self.ngrams.iter().enumerate() {
            if self.ngrams[..i].contains(a) {
                return Err(err(format!("duplicate block {}", a.canonical())));
            }
        }
        Ok(())
    }

    /// Checks that every block can be computed for `language`. POS and
    /// syntactic n-grams follow the availability of the cues that share
    /// their annotation; phoneme n-grams need a phonemizer.
    pub fn validate_for_language(&self, language: &str, has_phonemizer: bool) -> Result<(), SetupError> {
        let unavailable = |message: &str| SetupError::Unavailable {
            setup: self.canonical(),
            language: language.to_string(),
            message: message.to_string(),
        };
        for s in &self.ngrams {
            let gate = match s.family {
                NgramFamily::Pos => Some(Cue::AdjAdv),
                NgramFamily::Syntactic => Some(Cue::SubordinateClauses),
                _ => None,
            };
            if let Some(cue) = gate {
                if cue.table_status(language) == Some(Availability::NotApplicable) {
                    return Err(unavailable("annotation is not applicable for this language"));
                }
            }
            if s.family == NgramFamily::Phoneme && !has_phonemizer {
                return Err(unavailable("phoneme n-grams need a phonemizer for this language"));
            }
        }
        Ok(())
    }
}

impl fmt::Display for FeatureSetup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

impl FromStr for FeatureSetup {
    type Err = SetupError;

    /// Parses the canonical form.
    fn from_str(s: &str) -> Result<FeatureSetup, SetupError> {
        let err = |message: String| SetupError::Syntax {
            setup: s.to_string(),
            message,
        };
        let (features, training) = s
            .rsplit_once(':')
            .ok_or_else(|| err("expected `<features>:<trainer>`".into()))?;
        let mut t_items = training.split(',').map(str::trim);
        let trainer = t_items
            .next()
            .and_then(TrainerKind::parse)
            .ok_or_else(|| err(format!("unknown trainer in {training:?}")))?;
        let mut attrsel = false;
        for item in t_items {
            match item {
                "attrsel" => attrsel = true,
                other => return Err(err(format!("unknown trainer option {other:?}"))),
            }
        }
        let mut cues = false;
        let mut ngrams = Vec::new();
        for part in features.split('+').map(str::trim) {
            if matches!(part.to_ascii_lowercase().as_str(), "ling" | "linguistic" | "cues") {
                if cues {
                    return Err(err("cue block listed twice".into()));
                }
                cues = true;
                continue;
            }
            let items = split_top(part);
            let head = &items[0];
            let open = head
                .find('(')
                .ok_or_else(|| err(format!("expected family(a,b) in {part:?}")))?;
            let family = family_from_word(&head[..open])
                .ok_or_else(|| err(format!("unknown family {:?}", &head[..open])))?;
            let (min_n, max_n) =
                parse_range(&head[open..]).ok_or_else(|| err(format!("bad range in {head:?}")))?;
            let mut spec = NgramSpec {
                family,
                min_n,
                max_n,
                stem: false,
                stop: false,
                lowercase: false,
            };
            for flag in &items[1..] {
                match flag.as_str() {
                    "stem" => spec.stem = true,
                    "stop" => spec.stop = true,
                    "lowercase" => spec.lowercase = true,
                    other => return Err(err(format!("unknown flag {other:?}"))),
                }
            }
            ngrams.push(spec);
        }
        let setup = FeatureSetup {
            cues,
            ngrams,
            trainer,
            attrsel,
        };
        setup.validate()?;
        Ok(setup)
    }
}

impl Serialize for FeatureSetup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.canonical())
    }
}

impl<'de> Deserialize<'de> for FeatureSetup {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<FeatureSetup, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
