#!/usr/bin/env python3
"""Derive English sentiment and valence lexicons from the VADER lexicon (MIT).

VADER rates terms on [-4, 4]. Positive/negative strength files get
|mean| / 4 clipped to [0, 1]; the valence file maps onto the 0-10 scale
as 5 + 1.25 * mean. Only purely alphabetic entries are kept.

    pip install vaderSentiment
    python3 scripts/build_vader_lexicons.py lexicons/en
"""
import os
import re
import sys
from importlib import resources


def main():
    out = sys.argv[1]
    src = resources.files("vaderSentiment").joinpath("vader_lexicon.txt").read_text(encoding="utf-8")
    pos, neg, val = {}, {}, {}
    for line in src.splitlines():
        parts = line.split("\t")
        if len(parts) < 2:
            continue
        term, mean = parts[0].lower(), float(parts[1])
        if not re.fullmatch(r"[a-z]+(?:[-'][a-z]+)*", term):
            continue
        val[term] = 5.0 + 1.25 * mean
        strength = min(abs(mean) / 4.0, 1.0)
        if mean > 0:
            pos[term] = strength
        elif mean < 0:
            neg[term] = strength
    header = "# derived from the VADER lexicon (C.J. Hutto, MIT license)\n"
    for name, table in (("sentiment/vader.positive.txt", pos), ("sentiment/vader.negative.txt", neg), ("valence/vader.txt", val)):
        path = os.path.join(out, name)
        os.makedirs(os.path.dirname(path), exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            f.write(header)
            for term in sorted(table):
                f.write(f"{term}\t{table[term]:.4f}\n")


if __name__ == "__main__":
    main()
