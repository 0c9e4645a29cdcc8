//! Rule-based tokenizer and sentence splitter.

use std::borrow::Cow;

use super::Token;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TokenizerOptions {
    /// Insert a space where a sentence-final mark is glued to the next
    /// sentence, as in `stay.The`.
    pub repair_punctuation: bool,
}

const CLITICS: [&str; 6] = ["s", "m", "d", "re", "ve", "ll"];
const TERMINALS: [char; 4] = ['.', '!', '?', '…'];
const CLOSERS: [char; 8] = ['"', '\'', '”', '’', ')', ']', '»', '}'];
const EN_ABBREVIATIONS: [&str; 12] = [
    "mr", "mrs", "ms", "dr", "st", "vs", "etc", "jr", "sr", "prof", "no", "approx",
];

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '’'
}

/// Inserts the missing space in `word.Next`, where a run of lowercase letters
/// is followed by `.`, `!` or `?` and an uppercase letter.
pub fn repair_punctuation(text: &str) -> Cow<'_, str> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = String::with_capacity(text.len() + 8);
    let mut changed = false;
    for (i, &c) in chars.iter().enumerate() {
        out.push(c);
        if matches!(c, '.' | '!' | '?')
            && i > 0
            && chars[i - 1].is_lowercase()
            && chars.get(i + 1).is_some_and(|n| n.is_uppercase())
        {
            out.push(' ');
            changed = true;
        }
    }
    if changed {
        Cow::Owned(out)
    } else {
        Cow::Borrowed(text)
    }
}

struct Raw {
    text: String,
    space_before: bool,
}

fn split_word(word: &str, lang: &str, space_before: bool, out: &mut Vec<Raw>) {
    if lang == "en" {
        let lower = word.to_lowercase();
        let chars: Vec<char> = word.chars().collect();
        let n = chars.len();
        // do|n't
        if n > 3 {
            let tail: String = lower.chars().skip(n - 3).collect();
            if tail == "n't" || tail == "n’t" {
                let head: String = chars[..n - 3].iter().collect();
                out.push(Raw {
                    text: head,
                    space_before,
                });
                out.push(Raw {
                    text: chars[n - 3..].iter().collect(),
                    space_before: false,
                });
                return;
            }
        }
        // it|'s, we|'re
        if let Some(pos) = chars.iter().rposition(|&c| is_apostrophe(c)) {
            if pos > 0 {
                let tail: String = chars[pos + 1..].iter().collect::<String>().to_lowercase();
                if CLITICS.contains(&tail.as_str()) {
                    out.push(Raw {
                        text: chars[..pos].iter().collect(),
                        space_before,
                    });
                    out.push(Raw {
                        text: chars[pos..].iter().collect(),
                        space_before: false,
                    });
                    return;
                }
            }
        }
    }
    out.push(Raw {
        text: word.to_string(),
        space_before,
    });
}

fn raw_tokens(text: &str, lang: &str) -> Vec<Raw> {
    let chars: Vec<char> = text.chars().collect();
    let n = chars.len();
    let mut out = Vec::new();
    let mut i = 0;
    let mut space = true;
    while i < n {
        let c = chars[i];
        if c.is_whitespace() {
            space = true;
            i += 1;
            continue;
        }
        if c.is_alphanumeric() {
            let start = i;
            i += 1;
            while i < n {
                let c = chars[i];
                if c.is_alphanumeric() {
                    i += 1;
                    continue;
                }
                let next_alnum = chars.get(i + 1).is_some_and(|n| n.is_alphanumeric());
                let joins = match c {
                    '\'' | '’' | '-' => next_alnum,
                    '.' | ',' => {
                        chars[i - 1].is_ascii_digit()
                            && chars.get(i + 1).is_some_and(|n| n.is_ascii_digit())
                    }
                    _ => false,
                };
                if joins {
                    i += 1;
                } else {
                    break;
                }
            }
            let word: String = chars[start..i].iter().collect();
            split_word(&word, lang, space, &mut out);
            space = false;
            continue;
        }
        // A standalone English clitic such as `'s` in already-tokenized text.
        if lang == "en" && is_apostrophe(c) && (i == 0 || !chars[i - 1].is_alphanumeric()) {
            let mut j = i + 1;
            while j < n && chars[j].is_alphabetic() {
                j += 1;
            }
            let tail: String = chars[i + 1..j].iter().collect::<String>().to_lowercase();
            let boundary = j == n || !chars[j].is_alphanumeric();
            if j > i + 1 && boundary && CLITICS.contains(&tail.as_str()) {
                out.push(Raw {
                    text: chars[i..j].iter().collect(),
                    space_before: space,
                });
                space = false;
                i = j;
                continue;
            }
        }
        out.push(Raw {
            text: c.to_string(),
            space_before: space,
        });
        space = false;
        i += 1;
    }
    out
}

fn is_terminal(t: &str) -> bool {
    t.chars().count() == 1 && t.chars().all(|c| TERMINALS.contains(&c))
}

fn is_closer(t: &str) -> bool {
    t.chars().count() == 1 && t.chars().all(|c| CLOSERS.contains(&c))
}

fn starts_upper(t: &str) -> bool {
    t.chars().next().is_some_and(|c| c.is_uppercase() || c.is_ascii_digit())
}

/// Tokenizes and sentence-splits with default options.
pub fn tokenize(text: &str, lang: &str) -> Vec<Vec<Token>> {
    tokenize_with(text, lang, TokenizerOptions::default())
}

/// Tokenizes `text` into sentences. Always returns at least one sentence.
pub fn tokenize_with(text: &str, lang: &str, options: TokenizerOptions) -> Vec<Vec<Token>> {
    let text = if options.repair_punctuation {
        repair_punctuation(text)
    } else {
        Cow::Borrowed(text)
    };
    let raw = raw_tokens(&text, lang);
    let n = raw.len();
    let mut sentences = Vec::new();
    let mut current = Vec::new();
    let mut i = 0;
    while i < n {
        current.push(Token::new(&raw[i].text));
        let mut break_after = None;
        if is_terminal(&raw[i].text) && !(i + 1 < n && is_terminal(&raw[i + 1].text)) {
            let abbreviation = lang == "en"
                && raw[i].text == "."
                && i > 0
                && !raw[i].space_before
                && EN_ABBREVIATIONS.contains(&raw[i - 1].text.to_lowercase().as_str());
            let mut j = i + 1;
            while j < n && is_closer(&raw[j].text) && !raw[j].space_before {
                j += 1;
            }
            if !abbreviation && j < n && raw[j].space_before && starts_upper(&raw[j].text) {
                break_after = Some(j);
            }
        }
        match break_after {
            Some(j) => {
                for r in &raw[i + 1..j] {
                    current.push(Token::new(&r.text));
                }
                sentences.push(std::mem::take(&mut current));
                i = j;
            }
            None => i += 1,
        }
    }
    if !current.is_empty() || sentences.is_empty() {
        sentences.push(current);
    }
    sentences
}

/// Tokens joined by single spaces.
pub fn normalize(text: &str, lang: &str) -> String {
    tokenize(text, lang)
        .iter()
        .flatten()
        .map(|t| t.surface.as_str())
        .collect::<Vec<_>>()
        .join(" ")
}
