#!/usr/bin/env python3
"""Build the builtin English pronunciation lexicon from CMUdict.

Takes the N most frequent English words (wordfreq), looks them up in
CMUdict, converts ARPAbet to IPA and writes `word<TAB>sym sym sym` lines.

    pip install cmudict wordfreq
    python3 scripts/build_g2p_lexicon.py 5000 > crates/core/data/g2p/en_lexicon.tsv
"""
import re
import sys

import cmudict
from wordfreq import top_n_list

ARPA = {
    "AA": "ɑ", "AE": "æ", "AH": "ʌ", "AO": "ɔ", "AW": "aʊ", "AY": "aɪ",
    "B": "b", "CH": "tʃ", "D": "d", "DH": "ð", "EH": "ɛ", "ER": "ɝ",
    "EY": "eɪ", "F": "f", "G": "g", "HH": "h", "IH": "ɪ", "IY": "i",
    "JH": "dʒ", "K": "k", "L": "l", "M": "m", "N": "n", "NG": "ŋ",
    "OW": "oʊ", "OY": "ɔɪ", "P": "p", "R": "ɹ", "S": "s", "SH": "ʃ",
    "T": "t", "TH": "θ", "UH": "ʊ", "UW": "u", "V": "v", "W": "w",
    "Y": "j", "Z": "z", "ZH": "ʒ",
}
# unstressed variants
REDUCED = {"AH0": "ə", "ER0": "ɚ"}


def to_ipa(phones):
    out = []
    for p in phones:
        if p in REDUCED:
            out.append(REDUCED[p])
        else:
            out.append(ARPA[re.sub(r"\d", "", p)])
    return out


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 5000
    pron = cmudict.dict()
    written = 0
    for word in top_n_list("en", n * 3):
        if written >= n:
            break
        if not re.fullmatch(r"[a-z]+(?:'[a-z]+)?", word):
            continue
        entries = pron.get(word)
        if not entries:
            continue
        print(f"{word}\t{' '.join(to_ipa(entries[0]))}")
        written += 1


if __name__ == "__main__":
    main()
