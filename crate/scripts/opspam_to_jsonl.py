#!/usr/bin/env python3
"""Convert the OpSpam v1.4 review tree into a JSONL corpus and manifest.

The tree looks like

    op_spam_v1.4/{positive,negative}_polarity/
        {deceptive_from_MTurk,truthful_from_TripAdvisor,truthful_from_Web}/fold{1..5}/*.txt

Each review becomes {"id", "text", "label", "lang", "genre", "meta"} with
polarity, source, fold and hotel kept in meta. Files are visited in sorted
order so the output is byte-stable.

    python3 scripts/opspam_to_jsonl.py ~/data/op_spam_v1.4 data/
"""
import argparse
import json
import os
import re
import sys


def reviews(root):
    for polarity in sorted(os.listdir(root)):
        pdir = os.path.join(root, polarity)
        if not (os.path.isdir(pdir) and polarity.endswith("_polarity")):
            continue
        for source in sorted(os.listdir(pdir)):
            sdir = os.path.join(pdir, source)
            if not os.path.isdir(sdir):
                continue
            if source.startswith("deceptive"):
                label = "deceptive"
            elif source.startswith("truthful"):
                label = "truthful"
            else:
                continue
            for fold in sorted(os.listdir(sdir)):
                fdir = os.path.join(sdir, fold)
                if not os.path.isdir(fdir):
                    continue
                for name in sorted(os.listdir(fdir)):
                    if name.endswith(".txt"):
                        yield polarity, source, fold, label, os.path.join(fdir, name)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("root", help="op_spam_v1.4 directory")
    ap.add_argument("out", help="directory for opspam.jsonl and opspam.toml")
    ap.add_argument("--id", default="opspam")
    ap.add_argument("--polarity", choices=["positive", "negative", "both"], default="both")
    args = ap.parse_args()

    os.makedirs(args.out, exist_ok=True)
    counts = {"truthful": 0, "deceptive": 0}
    seen = set()
    jsonl = os.path.join(args.out, f"{args.id}.jsonl")
    with open(jsonl, "w", encoding="utf-8") as out:
        for polarity, source, fold, label, path in reviews(args.root):
            pol = polarity.split("_")[0]
            if args.polarity != "both" and pol != args.polarity:
                continue
            with open(path, encoding="utf-8", errors="replace") as f:
                text = " ".join(f.read().split())
            if not text:
                print(f"skipping empty review {path}", file=sys.stderr)
                continue
            stem = os.path.splitext(os.path.basename(path))[0]
            doc_id = f"{pol}_{stem}"
            if doc_id in seen:
                sys.exit(f"duplicate id {doc_id} ({path})")
            seen.add(doc_id)
            m = re.match(r"[dt]_([a-z]+)_\d+$", stem)
            meta = {"polarity": pol, "source": source, "fold": fold}
            if m:
                meta["hotel"] = m.group(1)
            rec = {"id": doc_id, "text": text, "label": label, "lang": "en", "genre": "hotel review", "meta": meta}
            out.write(json.dumps(rec, ensure_ascii=False, sort_keys=True) + "\n")
            counts[label] += 1

    total = counts["truthful"] + counts["deceptive"]
    if total == 0:
        sys.exit(f"no reviews found under {args.root}")
    with open(os.path.join(args.out, f"{args.id}.toml"), "w", encoding="utf-8") as f:
        f.write(
            f'id = "{args.id}"\n'
            'language = "en"\n'
            'country = "US"\n'
            "individualism_score = 91\n"
            'genre = "hotel review"\n'
            f'doc_path = "{args.id}.jsonl"\n'
            f"expected_total = {total}\n"
            f"expected_truthful = {counts['truthful']}\n"
            f"expected_deceptive = {counts['deceptive']}\n"
        )
    print(f"{total} reviews ({counts['truthful']} truthful, {counts['deceptive']} deceptive) -> {jsonl}")


if __name__ == "__main__":
    main()
