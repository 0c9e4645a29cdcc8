//! Word-to-phoneme conversion and phoneme classes.
//!
//! Transcriptions are sequences of IPA symbols. The built-in English backend
//! looks words up in a lexicon and falls back to letter-to-sound rules; other
//! languages use an external phonemizer program (see [`ExternalPhonemizer`]).

use std::collections::HashMap;
use std::io::{BufRead, BufReader, Write};
use std::process::{Command, Stdio};
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use super::{g2p, TextError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhonemeClass {
    Nasal,
    Plosive,
    Fricative,
    Other,
}

/// Strips stress, length and diacritic marks, leaving the base symbol.
pub fn base_symbol(symbol: &str) -> String {
    symbol
        .chars()
        .filter(|c| {
            !matches!(c, 'ˈ' | 'ˌ' | 'ː' | 'ˑ' | 'ʲ' | 'ʰ' | 'ʷ' | '̃' | '̩' | '̯' | '͡' | '̪')
                && !('\u{0300}'..='\u{036f}').contains(c)
        })
        .collect()
}

/// Nasals {m n ŋ}, plosives {p b t d k g}, fricatives {f v θ ð s z ʃ ʒ h x};
/// all other symbols, affricates included, are [`PhonemeClass::Other`].
/// `ɡ` (U+0261) is accepted as `g`.
pub fn classify(symbol: &str) -> PhonemeClass {
    match base_symbol(symbol).as_str() {
        "m" | "n" | "ŋ" => PhonemeClass::Nasal,
        "p" | "b" | "t" | "d" | "k" | "g" | "ɡ" => PhonemeClass::Plosive,
        "f" | "v" | "θ" | "ð" | "s" | "z" | "ʃ" | "ʒ" | "h" | "x" => PhonemeClass::Fricative,
        _ => PhonemeClass::Other,
    }
}

pub type Pronunciation = Vec<String>;

pub trait Phonemizer: Send + Sync {
    fn language(&self) -> &str;
    /// One entry per input word; `None` when no transcription is available.
    fn phonemize(&self, words: &[String]) -> Result<Vec<Option<Pronunciation>>, TextError>;
}

/// Choice of phonemizer, as written in run configurations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "backend", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PhonemizerBackend {
    /// Lexicon plus letter-to-sound rules; English only.
    BuiltinEn,
    /// A program reading one word per line on stdin and writing one line of
    /// space-separated symbols per word (empty for none). It is started as
    /// `command... <lang>`.
    External { command: Vec<String>, workers: usize },
}

impl PhonemizerBackend {
    pub fn build(&self, lang: &str) -> Result<Box<dyn Phonemizer>, TextError> {
        match self {
            PhonemizerBackend::BuiltinEn => {
                if lang != "en" {
                    return Err(TextError::Phonemizer(format!(
                        "the builtin-en phonemizer cannot transcribe language {lang:?}; configure an external backend"
                    )));
                }
                Ok(Box::new(BuiltinEnglish::new()))
            }
            PhonemizerBackend::External { command, workers } => Ok(Box::new(
                ExternalPhonemizer::new(command.clone(), lang, *workers)?,
            )),
        }
    }
}

const EN_LEXICON: &str = include_str!("../../data/g2p/en_lexicon.tsv");

fn en_lexicon() -> &'static HashMap<&'static str, Vec<&'static str>> {
    static LEX: OnceLock<HashMap<&'static str, Vec<&'static str>>> = OnceLock::new();
    LEX.get_or_init(|| {
        EN_LEXICON
            .lines()
            .filter_map(|l| {
                let (w, p) = l.split_once('\t')?;
                Some((w, p.split_whitespace().collect()))
            })
            .collect()
    })
}

const DIGITS: [&str; 10] = [
    "zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine",
];

const LETTER_NAMES: [&str; 26] = [
    "ay", "bee", "see", "dee", "ee", "ef", "gee", "aitch", "eye", "jay", "kay", "el", "em", "en",
    "oh", "pee", "cue", "ar", "ess", "tee", "you", "vee", "dubbelyou", "ex", "why", "zee",
];

#[derive(Debug, Default)]
pub struct BuiltinEnglish;

impl BuiltinEnglish {
    pub fn new() -> BuiltinEnglish {
        BuiltinEnglish
    }

    /// Transcribes one word (any case).
    pub fn transcribe(&self, word: &str) -> Option<Pronunciation> {
        let w = word.to_lowercase().replace('’', "'");
        let clitic: Option<&[&str]> = match w.as_str() {
            "n't" => Some(&["n", "t"]),
            "'s" => Some(&["z"]),
            "'m" => Some(&["m"]),
            "'re" => Some(&["ɚ"]),
            "'ve" => Some(&["v"]),
            "'ll" => Some(&["l"]),
            "'d" => Some(&["d"]),
            _ => None,
        };
        if let Some(c) = clitic {
            return Some(c.iter().map(|s| s.to_string()).collect());
        }
        if let Some(p) = en_lexicon().get(w.as_str()) {
            return Some(p.iter().map(|s| s.to_string()).collect());
        }
        if w.contains('-') {
            let mut out = Vec::new();
            for part in w.split('-').filter(|p| !p.is_empty()) {
                out.extend(self.transcribe(part)?);
            }
            return (!out.is_empty()).then_some(out);
        }
        if w.chars().any(|c| c.is_ascii_digit()) {
            let mut out = Vec::new();
            for c in w.chars() {
                let name = match c {
                    '0'..='9' => DIGITS[c as usize - '0' as usize],
                    '.' => "point",
                    _ => continue,
                };
                out.extend(self.transcribe(name)?);
            }
            return (!out.is_empty()).then_some(out);
        }
        let letters: String = w.chars().filter(|c| *c != '\'').collect();
        let out = g2p::letter_to_sound(&letters)?;
        if out.is_empty() {
            // Spell out words the rules leave silent, as in `hmm`.
            let mut spelled = Vec::new();
            for c in letters.chars() {
                let name = LETTER_NAMES[c as usize - 'a' as usize];
                spelled.extend(g2p::letter_to_sound(name).unwrap_or_default());
            }
            return (!spelled.is_empty()).then_some(spelled);
        }
        Some(out)
    }
}

impl Phonemizer for BuiltinEnglish {
    fn language(&self) -> &str {
        "en"
    }

    fn phonemize(&self, words: &[String]) -> Result<Vec<Option<Pronunciation>>, TextError> {
        Ok(words.iter().map(|w| self.transcribe(w)).collect())
    }
}

/// Runs an external phonemizer over `workers` concurrent processes and
/// caches results by word.
pub struct ExternalPhonemizer {
    command: Vec<String>,
    lang: String,
    workers: usize,
    cache: Mutex<HashMap<String, Option<Pronunciation>>>,
}

impl ExternalPhonemizer {
    pub fn new(command: Vec<String>, lang: &str, workers: usize) -> Result<Self, TextError> {
        if command.is_empty() {
            return Err(TextError::Phonemizer("empty phonemizer command".into()));
        }
        if workers == 0 {
            return Err(TextError::Phonemizer("workers must be at least 1".into()));
        }
        Ok(ExternalPhonemizer {
            command,
            lang: lang.to_string(),
            workers,
            cache: Mutex::new(HashMap::new()),
        })
    }

    fn run_batch(&self, words: &[String]) -> Result<Vec<Option<Pronunciation>>, TextError> {
        let err = |m: String| TextError::Phonemizer(format!("{}: {m}", self.command[0]));
        let mut child = Command::new(&self.command[0])
            .args(&self.command[1..])
            .arg(&self.lang)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .map_err(|e| err(e.to_string()))?;
        let mut stdin = child.stdin.take().expect("piped stdin");
        let input: String = words.iter().map(|w| format!("{w}\n")).collect();
        let writer = std::thread::spawn(move || stdin.write_all(input.as_bytes()));
        let stdout = child.stdout.take().expect("piped stdout");
        let lines: Vec<String> = BufReader::new(stdout)
            .lines()
            .collect::<Result<_, _>>()
            .map_err(|e| err(e.to_string()))?;
        writer
            .join()
            .map_err(|_| err("writer thread panicked".into()))?
            .map_err(|e| err(e.to_string()))?;
        let status = child.wait().map_err(|e| err(e.to_string()))?;
        if !status.success() {
            return Err(err(format!("exited with {status}")));
        }
        if lines.len() != words.len() {
            return Err(err(format!(
                "returned {} lines for {} words",
                lines.len(),
                words.len()
            )));
        }
        Ok(lines
            .into_iter()
            .map(|l| {
                let syms: Vec<String> = l.split_whitespace().map(str::to_string).collect();
                (!syms.is_empty()).then_some(syms)
            })
            .collect())
    }
}

impl Phonemizer for ExternalPhonemizer {
    fn language(&self) -> &str {
        &self.lang
    }

    fn phonemize(&self, words: &[String]) -> Result<Vec<Option<Pronunciation>>, TextError> {
        let mut missing: Vec<String> = {
            let cache = self.cache.lock().expect("cache lock");
            words
                .iter()
                .filter(|w| !cache.contains_key(w.as_str()))
                .cloned()
                .collect()
        };
        missing.sort();
        missing.dedup();
        if !missing.is_empty() {
            let chunk = missing.len().div_ceil(self.workers);
            let results: Vec<Result<Vec<Option<Pronunciation>>, TextError>> =
                std::thread::scope(|s| {
                    let handles: Vec<_> = missing
                        .chunks(chunk)
                        .map(|c| s.spawn(move || self.run_batch(c)))
                        .collect();
                    handles
                        .into_iter()
                        .map(|h| h.join().expect("phonemizer worker panicked"))
                        .collect()
                });
            let mut cache = self.cache.lock().expect("cache lock");
            for (c, r) in missing.chunks(chunk).zip(results) {
                for (w, p) in c.iter().zip(r?) {
                    cache.insert(w.clone(), p);
                }
            }
        }
        let cache = self.cache.lock().expect("cache lock");
        Ok(words.iter().map(|w| cache[w.as_str()].clone()).collect())
    }
}
