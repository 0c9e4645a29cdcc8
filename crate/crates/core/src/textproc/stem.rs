//! Snowball stemming.

use std::collections::HashMap;
use std::sync::OnceLock;

use rust_stemmers::{Algorithm, Stemmer};

fn algorithm(lang: &str) -> Option<Algorithm> {
    Some(match lang {
        "ar" => Algorithm::Arabic,
        "da" => Algorithm::Danish,
        "de" => Algorithm::German,
        "el" => Algorithm::Greek,
        "en" => Algorithm::English,
        "es" => Algorithm::Spanish,
        "fi" => Algorithm::Finnish,
        "fr" => Algorithm::French,
        "hu" => Algorithm::Hungarian,
        "it" => Algorithm::Italian,
        "nl" => Algorithm::Dutch,
        "no" | "nb" => Algorithm::Norwegian,
        "pt" => Algorithm::Portuguese,
        "ro" => Algorithm::Romanian,
        "ru" => Algorithm::Russian,
        "sv" => Algorithm::Swedish,
        "ta" => Algorithm::Tamil,
        "tr" => Algorithm::Turkish,
        _ => return None,
    })
}

fn stemmer(lang: &str) -> Option<&'static Stemmer> {
    static STEMMERS: OnceLock<HashMap<&'static str, Stemmer>> = OnceLock::new();
    let map = STEMMERS.get_or_init(|| {
        [
            "ar", "da", "de", "el", "en", "es", "fi", "fr", "hu", "it", "nl", "no", "nb", "pt",
            "ro", "ru", "sv", "ta", "tr",
        ]
        .into_iter()
        .map(|l| (l, Stemmer::create(algorithm(l).unwrap())))
        .collect()
    });
    map.get(lang)
}

/// Whether a stemmer exists for `lang`.
pub fn supports(lang: &str) -> bool {
    algorithm(lang).is_some()
}

/// Lowercases and stems `token`. The Snowball step is repeated until the
/// output stops changing, so `stem(stem(w)) == stem(w)`. Languages without a
/// stemmer get the lowercased token back.
pub fn stem(token: &str, lang: &str) -> String {
    let mut cur = token.to_lowercase();
    let Some(s) = stemmer(lang) else {
        return cur;
    };
    for _ in 0..16 {
        let next = s.stem(&cur).into_owned();
        if next == cur {
            break;
        }
        cur = next;
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn english_examples() {
        assert_eq!(stem("staying", "en"), "stay");
        assert_eq!(stem("Hotels", "en"), "hotel");
        assert_eq!(stem("course", "en"), "cour");
        assert_eq!(stem("course", "en"), stem("cour", "en"));
    }

    #[test]
    fn unknown_language_lowercases() {
        assert_eq!(stem("Hoteluri", "xx"), "hoteluri");
    }
}
