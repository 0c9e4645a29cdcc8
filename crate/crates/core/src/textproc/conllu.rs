//! CoNLL-U reader.
//!
//! Multiword-token range lines (`3-4`) and empty nodes (`5.1`) are not
//! returned as tokens; a range line's form is kept for the text alignment
//! check. A `# doc_id = X` (or `# newdoc id = X`) comment applies to every
//! following sentence until the next such comment.

use std::collections::{BTreeMap, HashMap};

use super::{is_punct_str, TextError, Token};
use crate::corpus::Document;

#[derive(Debug, Clone, PartialEq)]
pub struct ConlluSentence {
    pub doc_id: Option<String>,
    pub sent_id: Option<String>,
    pub text: Option<String>,
    pub tokens: Vec<Token>,
    /// Surface forms as written (multiword tokens unexpanded).
    pub surface_forms: Vec<String>,
}

fn field(s: &str) -> Option<String> {
    (s != "_").then(|| s.to_string())
}

fn key_values(s: &str, line: usize, what: &str) -> Result<BTreeMap<String, String>, TextError> {
    let mut map = BTreeMap::new();
    if s == "_" {
        return Ok(map);
    }
    for part in s.split('|') {
        let (k, v) = part.split_once('=').ok_or_else(|| TextError::Conllu {
            line,
            message: format!("{what} entry {part:?} is not key=value"),
        })?;
        map.insert(k.to_string(), v.to_string());
    }
    Ok(map)
}

struct Builder {
    doc_id: Option<String>,
    sent_id: Option<String>,
    text: Option<String>,
    tokens: Vec<Token>,
    heads: Vec<(usize, usize)>,
    surface_forms: Vec<String>,
    covered_until: usize,
}

impl Builder {
    fn new(doc_id: Option<String>) -> Builder {
        Builder {
            doc_id,
            sent_id: None,
            text: None,
            tokens: Vec::new(),
            heads: Vec::new(),
            surface_forms: Vec::new(),
            covered_until: 0,
        }
    }

    fn is_empty(&self) -> bool {
        self.tokens.is_empty() && self.sent_id.is_none() && self.text.is_none()
    }

    fn finish(self) -> Result<Option<ConlluSentence>, TextError> {
        if self.tokens.is_empty() {
            return Ok(None);
        }
        let n = self.tokens.len();
        for (line, head) in &self.heads {
            if *head > n {
                return Err(TextError::Conllu {
                    line: *line,
                    message: format!("head {head} exceeds sentence length {n}"),
                });
            }
        }
        Ok(Some(ConlluSentence {
            doc_id: self.doc_id,
            sent_id: self.sent_id,
            text: self.text,
            tokens: self.tokens,
            surface_forms: self.surface_forms,
        }))
    }
}

/// Parses a CoNLL-U file into sentences.
pub fn parse_conllu(text: &str) -> Result<Vec<ConlluSentence>, TextError> {
    let mut out = Vec::new();
    let mut doc_id: Option<String> = None;
    let mut cur = Builder::new(None);
    for (i, raw_line) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw_line.trim_end_matches('\r');
        if line.trim().is_empty() {
            let done = std::mem::replace(&mut cur, Builder::new(doc_id.clone()));
            if let Some(s) = done.finish()? {
                out.push(s);
            }
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            let comment = comment.trim();
            if let Some((key, value)) = comment.split_once('=') {
                let key = key.trim();
                let value = value.trim().to_string();
                match key {
                    "doc_id" | "newdoc id" | "newdoc_id" => {
                        doc_id = Some(value.clone());
                        if cur.tokens.is_empty() {
                            cur.doc_id = Some(value);
                        }
                    }
                    "sent_id" => cur.sent_id = Some(value),
                    "text" => cur.text = Some(value),
                    _ => {}
                }
            }
            continue;
        }
        if cur.is_empty() {
            cur.doc_id = doc_id.clone();
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 10 {
            return Err(TextError::Conllu {
                line: lineno,
                message: format!("expected 10 tab-separated columns, found {}", cols.len()),
            });
        }
        let id = cols[0];
        if let Some((a, b)) = id.split_once('-') {
            let (a, b): (usize, usize) = match (a.parse(), b.parse()) {
                (Ok(a), Ok(b)) if a <= b => (a, b),
                _ => {
                    return Err(TextError::Conllu {
                        line: lineno,
                        message: format!("bad multiword range {id:?}"),
                    })
                }
            };
            if a != cur.tokens.len() + 1 {
                return Err(TextError::Conllu {
                    line: lineno,
                    message: format!("multiword range {id:?} out of sequence"),
                });
            }
            cur.surface_forms.push(cols[1].to_string());
            cur.covered_until = b;
            continue;
        }
        if id.contains('.') {
            continue;
        }
        let idx: usize = id.parse().map_err(|_| TextError::Conllu {
            line: lineno,
            message: format!("bad token id {id:?}"),
        })?;
        if idx != cur.tokens.len() + 1 {
            return Err(TextError::Conllu {
                line: lineno,
                message: format!("token id {idx} out of sequence"),
            });
        }
        let form = cols[1];
        let head = match cols[6] {
            "_" => None,
            h => Some(h.parse::<usize>().map_err(|_| TextError::Conllu {
                line: lineno,
                message: format!("bad head {h:?}"),
            })?),
        };
        let deprel = field(cols[7]);
        if head.is_some() != deprel.is_some() {
            return Err(TextError::Conllu {
                line: lineno,
                message: "head and deprel must both be present or both absent".into(),
            });
        }
        if let Some(h) = head {
            if h == idx {
                return Err(TextError::Conllu {
                    line: lineno,
                    message: "token is its own head".into(),
                });
            }
            cur.heads.push((lineno, h));
        }
        let upos = field(cols[3]);
        let is_punct = match upos.as_deref() {
            Some("PUNCT") => true,
            Some(_) => false,
            None => is_punct_str(form),
        };
        let token = Token {
            surface: form.to_string(),
            lower: form.to_lowercase(),
            lemma: field(cols[2]),
            upos,
            xpos: field(cols[4]),
            feats: key_values(cols[5], lineno, "FEATS")?,
            head,
            deprel,
            misc: key_values(cols[9], lineno, "MISC")?,
            is_punct,
        };
        if idx > cur.covered_until {
            cur.surface_forms.push(form.to_string());
        }
        cur.tokens.push(token);
    }
    if let Some(s) = cur.finish()? {
        out.push(s);
    }
    Ok(out)
}

/// Groups sentences by their `doc_id`. Sentences without one are an error.
pub fn group_by_doc(
    sentences: Vec<ConlluSentence>,
) -> Result<HashMap<String, Vec<ConlluSentence>>, TextError> {
    let mut map: HashMap<String, Vec<ConlluSentence>> = HashMap::new();
    for s in sentences {
        let id = s.doc_id.clone().ok_or_else(|| TextError::Conllu {
            line: 0,
            message: format!(
                "sentence {:?} has no doc_id comment",
                s.sent_id.as_deref().unwrap_or("?")
            ),
        })?;
        map.entry(id).or_default().push(s);
    }
    Ok(map)
}

/// Reads and groups a CoNLL-U file.
pub fn load_conllu_file(
    path: &std::path::Path,
) -> Result<HashMap<String, Vec<ConlluSentence>>, TextError> {
    let text = std::fs::read_to_string(path).map_err(|source| TextError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    group_by_doc(parse_conllu(&text)?)
}

/// Checks that the surface forms spell the document text, ignoring whitespace.
pub fn check_alignment(doc: &Document, sentences: &[ConlluSentence]) -> Result<(), TextError> {
    let forms: String = sentences
        .iter()
        .flat_map(|s| s.surface_forms.iter())
        .flat_map(|f| f.chars())
        .filter(|c| !c.is_whitespace())
        .collect();
    let text: String = doc.text.chars().filter(|c| !c.is_whitespace()).collect();
    if forms == text {
        return Ok(());
    }
    let at = forms
        .chars()
        .zip(text.chars())
        .take_while(|(a, b)| a == b)
        .count();
    let snippet = |s: &str| s.chars().skip(at).take(20).collect::<String>();
    Err(TextError::Divergence {
        doc_id: doc.id.clone(),
        message: format!(
            "at non-space character {at}: annotation has {:?}, text has {:?}",
            snippet(&forms),
            snippet(&text)
        ),
    })
}
