//! Coarse part-of-speech classes from UD or Penn Treebank tags.

use super::Token;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Upos {
    Adj,
    Adp,
    Adv,
    Aux,
    Cconj,
    Det,
    Intj,
    Noun,
    Num,
    Part,
    Pron,
    Propn,
    Punct,
    Sconj,
    Sym,
    Verb,
    X,
}

impl Upos {
    pub fn parse(tag: &str) -> Option<Upos> {
        Some(match tag {
            "ADJ" => Upos::Adj,
            "ADP" => Upos::Adp,
            "ADV" => Upos::Adv,
            "AUX" => Upos::Aux,
            "CCONJ" | "CONJ" => Upos::Cconj,
            "DET" => Upos::Det,
            "INTJ" => Upos::Intj,
            "NOUN" => Upos::Noun,
            "NUM" => Upos::Num,
            "PART" => Upos::Part,
            "PRON" => Upos::Pron,
            "PROPN" => Upos::Propn,
            "PUNCT" => Upos::Punct,
            "SCONJ" => Upos::Sconj,
            "SYM" => Upos::Sym,
            "VERB" => Upos::Verb,
            "X" => Upos::X,
            _ => return None,
        })
    }

    /// Maps a Penn Treebank tag.
    pub fn from_ptb(tag: &str) -> Option<Upos> {
        Some(match tag {
            "JJ" | "JJR" | "JJS" => Upos::Adj,
            "RB" | "RBR" | "RBS" | "WRB" => Upos::Adv,
            "IN" => Upos::Adp,
            "CC" => Upos::Cconj,
            "DT" | "PDT" | "WDT" => Upos::Det,
            "UH" => Upos::Intj,
            "NN" | "NNS" => Upos::Noun,
            "NNP" | "NNPS" => Upos::Propn,
            "CD" => Upos::Num,
            "POS" | "RP" | "TO" => Upos::Part,
            "PRP" | "PRP$" | "WP" | "WP$" | "EX" => Upos::Pron,
            "MD" => Upos::Aux,
            "VB" | "VBD" | "VBG" | "VBN" | "VBP" | "VBZ" => Upos::Verb,
            "SYM" | "$" | "#" => Upos::Sym,
            "FW" | "LS" => Upos::X,
            "." | "," | ":" | "``" | "''" | "-LRB-" | "-RRB-" | "HYPH" | "NFP" => Upos::Punct,
            _ => return None,
        })
    }
}

/// Coarse class of a token: its UPOS, else its XPOS read as a Penn tag.
pub fn coarse(token: &Token) -> Option<Upos> {
    token
        .upos
        .as_deref()
        .and_then(Upos::parse)
        .or_else(|| token.xpos.as_deref().and_then(Upos::from_ptb))
}

/// True when the XPOS looks like a Penn Treebank verb or modal tag.
pub fn is_ptb_verbal(xpos: &str) -> bool {
    xpos.starts_with("VB") || xpos == "MD"
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn falls_back_to_ptb() {
        let mut t = Token::new("ran");
        t.xpos = Some("VBD".into());
        assert_eq!(coarse(&t), Some(Upos::Verb));
        t.upos = Some("AUX".into());
        assert_eq!(coarse(&t), Some(Upos::Aux));
        assert_eq!(coarse(&Token::new("x")), None);
    }
}
