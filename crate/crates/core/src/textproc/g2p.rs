//! English letter-to-sound rules for words outside the pronunciation lexicon.
//!
//! Each rule is `left|match|right|phones`. Context symbols:
//!
//! | symbol | matches |
//! |--------|---------|
//! | `_` | word boundary |
//! | `#` | one or more vowels |
//! | `:` | zero or more consonants |
//! | `^` | one consonant |
//! | `.` | one voiced consonant |
//! | `+` | one front vowel (e, i, y) |
//! | `%` | a suffix: er, e, es, ed, ing, ely |
//! | `&` | a sibilant: s, c, g, z, x, j, ch, sh |
//! | `@` | t, s, r, d, l, z, n, j, th, ch, sh |
//!
//! Rules for a letter are tried in order and the first match wins.

use std::collections::HashMap;
use std::sync::OnceLock;

const RULES: &str = r#"
_|a|_|ə
_|are|_|ɑ ɹ
_|ar|o|ə ɹ
|ar|#|ɛ ɹ
|a|wa|ə
|aw||ɔ
_:|any||ɛ n i
|a|^+#|eɪ
#:|ally||ə l i
_|al|#|ə l
|again||ə g ɛ n
#:|ag|e|ɪ dʒ
|a|^+:#|æ
_:|a|^+_|eɪ
|a|^%|eɪ
_|arr||ə ɹ
|arr||æ ɹ
_:|ar|_|ɑ ɹ
|ar|_|ɚ
|ar||ɑ ɹ
|air||ɛ ɹ
|ai||eɪ
|ay||eɪ
|au||ɔ
#:|al|_|ə l
#:|als|_|ə l z
|alk||ɔ k
|al|^|ɔ l
_:|able||eɪ b ə l
|able||ə b ə l
|ang|+|eɪ n dʒ
|a||æ
_|be|^#|b ɪ
|being||b i ɪ ŋ
_|both|_|b oʊ θ
_|bus|#|b ɪ z
|buil||b ɪ l
|b|b|
|b||b
_|ch|^|k
^e|ch||k
|ch||tʃ
_s|ci|#|s aɪ
|ci|a|ʃ
|ci|o|ʃ
|ci|en|ʃ
|c|+|s
|ck||k
|com|%|k ʌ m
|cc|+|k s
|cc||k
|c||k
#:|ded|_|d ɪ d
.e|d|_|d
#^:e|d|_|t
_|de|^#|d ɪ
_|do|_|d u
_|does||d ʌ z
_|doing||d u ɪ ŋ
_|dow||d aʊ
|du|a|dʒ u
|dd||d
|dg|e|dʒ
|d||d
#:|e|_|
_:|e|_|i
#|ed|_|d
#:|e|d_|
|ev|er|ɛ v
|e|^%|i
|eri|#|i ɹ i
|eri||ɛ ɹ ɪ
#:|er|#|ɚ
|er|#|ɛ ɹ
|er||ɚ
_|even||i v ɛ n
#:|e|w|
@|ew||u
|ew||j u
|e|o|i
#:&|es|_|ɪ z
#:|e|s_|
#:|ely|_|l i
#:|ement||m ɛ n t
|eful||f ʊ l
|ee||i
|earn||ɝ n
_|ear|^|ɝ
|ead||ɛ d
#:|ea|_|i ə
|ea|su|ɛ
|ea||i
|eigh||eɪ
|ei||i
_|eye||aɪ
|ey||i
|eu||j u
|e||ɛ
|ful||f ʊ l
|ff||f
|f||f
|giv||g ɪ v
_|g|i^|g
|ge|t|g ɛ
su|gges||g dʒ ɛ s
|gg||g
_b#|g||g
|g|+|dʒ
|great||g ɹ eɪ t
#|gh||
_|gh||g
|gn|_|n
_|gn||n
|g||g
_|hav||h æ v
_|here||h i ɹ
_|hour||aʊ ɚ
|how||h aʊ
|h|#|h
|h||
_|in||ɪ n
_|i|_|aɪ
|in|d|aɪ n
|ier||i ɚ
#:r|ied||i d
|ied|_|aɪ d
|ien||i ɛ n
|ie|t|aɪ ɛ
_:|i|%|aɪ
|i|%|i
|ie||i
|i|^+:#|ɪ
|ir|#|aɪ ɹ
|iz|%|aɪ z
|is|%|aɪ z
|i|d%|aɪ
+^|i|^+|ɪ
|i|t%|aɪ
#^:|i|^+|ɪ
|i|^+|aɪ
|ir||ɝ
|igh||aɪ
|ild||aɪ l d
|ign|_|aɪ n
|ign|^|aɪ n
|ign|%|aɪ n
|ique||i k
|ion||j ə n
|i||ɪ
|j||dʒ
_|k|n|
|k||k
|lo|c#|l oʊ
l|l||
#^:|l|%|ə l
|lead||l i d
|l||l
|mov||m u v
|mm||m
|m||m
e|ng|+|n dʒ
|ng|r|ŋ g
|ng|#|ŋ g
|ngl|%|ŋ g ə l
|ng||ŋ
|nk||ŋ k
_|now|_|n aʊ
|nn||n
|n||n
|of|_|ə v
|orough||ɚ oʊ
#:|or|_|ɚ
#:|ors|_|ɚ z
|or||ɔ ɹ
_|one||w ʌ n
_|over||oʊ v ɚ
|ow||oʊ
|ov||ʌ v
|o|^%|oʊ
|o|^en|oʊ
|o|^i#|oʊ
|ol|d|oʊ l
|ought||ɔ t
|ough||ʌ f
_|ou||aʊ
h|ou|s#|aʊ
|ous||ə s
|our||ɔ ɹ
|ould||ʊ d
^|ou|^l|ʌ
|oup||u p
|ou||aʊ
|oy||ɔɪ
|oing||oʊ ɪ ŋ
|oi||ɔɪ
|oor||ɔ ɹ
|ook||ʊ k
|ood||ʊ d
|oo||u
|o|e|oʊ
|o|_|oʊ
|oa||oʊ
_|only||oʊ n l i
_|once||w ʌ n s
c|o|n|ɑ
|o|ng|ɔ
_:^|o|n|ʌ
i|on||ə n
#:|on|_|ə n
#^|on||ə n
|o|st_|oʊ
|of|^|ɔ f
|other||ʌ ð ɚ
|oss|_|ɔ s
#:^|om||ʌ m
|o||ɑ
|ph||f
|peop||p i p
|pow||p aʊ
|put|_|p ʊ t
|pp||p
|p||p
|quar||k w ɔ ɹ
|qu||k w
|q||k
_|re|^#|ɹ i
|rr||ɹ
|r||ɹ
|sh||ʃ
#|sion||ʒ ə n
|some||s ʌ m
#|sur|#|ʒ ɚ
|sur|#|ʃ ɚ
#|su|#|ʒ u
#|ssu|#|ʃ u
#|sed|_|z d
#|s|#|z
|said||s ɛ d
^|sion||ʃ ə n
|s|s|
.|s|_|z
#:.e|s|_|z
_|sch||s k
|s|c+|
#|sm||z m
|s||s
_|the|_|ð ə
|to|_|t u
|that|_|ð æ t
_|this|_|ð ɪ s
_|they||ð eɪ
_|there||ð ɛ ɹ
|ther||ð ɚ
|their||ð ɛ ɹ
_|than|_|ð æ n
_|them|_|ð ɛ m
|these|_|ð i z
_|then||ð ɛ n
|through||θ ɹ u
|those||ð oʊ z
|though|_|ð oʊ
_|thus||ð ʌ s
|th||θ
#:|ted|_|t ɪ d
s|ti|#n|tʃ
|ti|o|ʃ
|ti|a|ʃ
|tien||ʃ ə n
|tur|#|tʃ ɚ
|tu|a|tʃ u
_|two||t u
|tch||tʃ
|tt||t
|t||t
_|un|i|j u n
_|un||ʌ n
_|upon||ə p ɔ n
@|ur|#|ʊ ɹ
|ur|#|j ʊ ɹ
|ur|^|ɝ
|u|^_|ʌ
|u|^^|ʌ
|uy||aɪ
_g|u|#|
g|u|%|
g|u|#|w
#n|u||j u
@|u||u
|u|^%|j u
|u||j u
|view||v j u
|v||v
_|were||w ɚ
|wa|s|w ɑ
|wa|t|w ɑ
|where||w ɛ ɹ
|what||w ʌ t
|whol||h oʊ l
|who||h u
|wh||w
|war||w ɔ ɹ
|wor|^|w ɝ
|wr||ɹ
|w||w
_|x||z
|x||k s
|young||j ʌ ŋ
_|you||j u
_|yes||j ɛ s
_|y||j
#:^|y|_|i
#:^|y|i|i
_:|y|_|aɪ
_:|y|#|aɪ
_:|y|^+:#|ɪ
_:|y|^#|aɪ
|y||ɪ
|zz||z
|z||z
"#;

struct Rule {
    left: Vec<char>,
    target: Vec<char>,
    right: Vec<char>,
    phones: Vec<&'static str>,
}

fn rules() -> &'static HashMap<char, Vec<Rule>> {
    static RULESET: OnceLock<HashMap<char, Vec<Rule>>> = OnceLock::new();
    RULESET.get_or_init(|| {
        let mut map: HashMap<char, Vec<Rule>> = HashMap::new();
        for line in RULES.lines().filter(|l| !l.trim().is_empty()) {
            let parts: Vec<&'static str> = line.split('|').collect();
            assert_eq!(parts.len(), 4, "bad rule {line:?}");
            let target: Vec<char> = parts[1].chars().collect();
            map.entry(target[0]).or_default().push(Rule {
                left: parts[0].chars().collect(),
                target,
                right: parts[2].chars().collect(),
                phones: parts[3].split_whitespace().collect(),
            });
        }
        map
    })
}

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u')
}

fn is_consonant(c: char) -> bool {
    c.is_ascii_lowercase() && !is_vowel(c)
}

fn is_voiced(c: char) -> bool {
    matches!(c, 'b' | 'd' | 'v' | 'g' | 'j' | 'l' | 'm' | 'n' | 'r' | 'w' | 'z')
}

fn is_front(c: char) -> bool {
    matches!(c, 'e' | 'i' | 'y')
}

const SUFFIXES: [&str; 6] = ["ely", "ing", "er", "es", "ed", "e"];

/// Matches `pat` forward from `pos`.
fn match_right(pat: &[char], w: &[char], pos: usize) -> bool {
    let Some((&p, rest)) = pat.split_first() else {
        return true;
    };
    let at = |i: usize| w.get(i).copied();
    match p {
        '_' => pos >= w.len() && match_right(rest, w, pos),
        '#' => {
            let mut i = pos;
            while at(i).is_some_and(is_vowel) {
                i += 1;
            }
            i > pos && match_right(rest, w, i)
        }
        ':' => {
            let mut i = pos;
            while at(i).is_some_and(is_consonant) {
                i += 1;
            }
            match_right(rest, w, i)
        }
        '^' => at(pos).is_some_and(is_consonant) && match_right(rest, w, pos + 1),
        '.' => at(pos).is_some_and(is_voiced) && match_right(rest, w, pos + 1),
        '+' => at(pos).is_some_and(is_front) && match_right(rest, w, pos + 1),
        '%' => SUFFIXES.iter().any(|s| {
            let s: Vec<char> = s.chars().collect();
            w.len() >= pos + s.len()
                && w[pos..pos + s.len()] == s[..]
                && match_right(rest, w, pos + s.len())
        }),
        '&' | '@' => {
            let singles: &[char] = if p == '&' {
                &['s', 'c', 'g', 'z', 'x', 'j']
            } else {
                &['t', 's', 'r', 'd', 'l', 'z', 'n', 'j']
            };
            let digraphs: &[&str] = if p == '&' { &["ch", "sh"] } else { &["th", "ch", "sh"] };
            digraphs.iter().any(|d| {
                let d: Vec<char> = d.chars().collect();
                w.len() >= pos + 2 && w[pos..pos + 2] == d[..] && match_right(rest, w, pos + 2)
            }) || (at(pos).is_some_and(|c| singles.contains(&c)) && match_right(rest, w, pos + 1))
        }
        c => at(pos) == Some(c) && match_right(rest, w, pos + 1),
    }
}

/// Matches `pat` backward, its last symbol against the letter before `end`.
fn match_left(pat: &[char], w: &[char], end: usize) -> bool {
    let Some((&p, rest)) = pat.split_last() else {
        return true;
    };
    let before = |i: usize| if i == 0 { None } else { w.get(i - 1).copied() };
    match p {
        '_' => end == 0 && match_left(rest, w, end),
        '#' => {
            let mut i = end;
            while before(i).is_some_and(is_vowel) {
                i -= 1;
            }
            i < end && match_left(rest, w, i)
        }
        ':' => {
            let mut i = end;
            while before(i).is_some_and(is_consonant) {
                i -= 1;
            }
            match_left(rest, w, i)
        }
        '^' => before(end).is_some_and(is_consonant) && match_left(rest, w, end - 1),
        '.' => before(end).is_some_and(is_voiced) && match_left(rest, w, end - 1),
        '+' => before(end).is_some_and(is_front) && match_left(rest, w, end - 1),
        '&' | '@' => {
            let singles: &[char] = if p == '&' {
                &['s', 'c', 'g', 'z', 'x', 'j']
            } else {
                &['t', 's', 'r', 'd', 'l', 'z', 'n', 'j']
            };
            let digraphs: &[&str] = if p == '&' { &["ch", "sh"] } else { &["th", "ch", "sh"] };
            digraphs.iter().any(|d| {
                let d: Vec<char> = d.chars().collect();
                end >= 2 && w[end - 2..end] == d[..] && match_left(rest, w, end - 2)
            }) || (before(end).is_some_and(|c| singles.contains(&c)) && match_left(rest, w, end - 1))
        }
        c => before(end) == Some(c) && match_left(rest, w, end - 1),
    }
}

/// Transcribes a lowercase ASCII word. Returns `None` for other input.
pub fn letter_to_sound(word: &str) -> Option<Vec<String>> {
    let w: Vec<char> = word.chars().collect();
    if w.is_empty() || !w.iter().all(|c| c.is_ascii_lowercase()) {
        return None;
    }
    let table = rules();
    let mut out = Vec::new();
    let mut i = 0;
    while i < w.len() {
        let mut advanced = false;
        if let Some(rs) = table.get(&w[i]) {
            for r in rs {
                let end = i + r.target.len();
                if end <= w.len()
                    && w[i..end] == r.target[..]
                    && match_left(&r.left, &w, i)
                    && match_right(&r.right, &w, end)
                {
                    out.extend(r.phones.iter().map(|p| p.to_string()));
                    i = end;
                    advanced = true;
                    break;
                }
            }
        }
        if !advanced {
            i += 1;
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lts(w: &str) -> String {
        letter_to_sound(w).unwrap().join(" ")
    }

    #[test]
    fn every_letter_has_a_fallback() {
        for c in 'a'..='z' {
            assert!(
                rules()[&c].iter().any(|r| r.target.len() == 1 && r.left.is_empty() && r.right.is_empty()),
                "no default rule for {c}"
            );
        }
    }

    #[test]
    fn common_patterns() {
        assert_eq!(lts("cat"), "k æ t");
        assert_eq!(lts("make"), "m eɪ k");
        assert_eq!(lts("ship"), "ʃ ɪ p");
        assert_eq!(lts("nation"), "n eɪ ʃ ə n");
        assert_eq!(lts("sing"), "s ɪ ŋ");
        assert_eq!(lts("phone"), "f oʊ n");
    }

    #[test]
    fn rejects_non_ascii() {
        assert_eq!(letter_to_sound("café"), None);
        assert_eq!(letter_to_sound(""), None);
    }
}
