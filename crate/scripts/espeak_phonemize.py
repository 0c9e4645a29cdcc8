#!/usr/bin/env python3
"""External phonemizer backed by espeak-ng.

Reads one word per line on stdin and writes one line of space-separated
IPA symbols per word, empty when espeak-ng gives nothing. The language
code is the only argument. Stress marks are dropped; length marks stay on
their vowel.

    [phonemizer]
    backend = "external"
    command = ["python3", "scripts/espeak_phonemize.py"]
    workers = 4
"""
import shutil
import subprocess
import sys

VOICES = {"en": "en-us", "es": "es", "nl": "nl", "ro": "ro", "ru": "ru"}
STRESS = str.maketrans("", "", "ˈˌ")


def transcribe(binary, voice, word):
    if not word:
        return ""
    # --ipa=3 separates phonemes with underscores.
    out = subprocess.run(
        [binary, "-q", "--ipa=3", "-v", voice, word],
        capture_output=True,
        text=True,
        check=True,
    ).stdout
    symbols = []
    for chunk in out.split():
        symbols.extend(s for s in chunk.translate(STRESS).split("_") if s)
    return " ".join(symbols)


def main():
    if len(sys.argv) != 2:
        sys.exit("usage: espeak_phonemize.py <lang>")
    lang = sys.argv[1]
    binary = shutil.which("espeak-ng") or shutil.which("espeak")
    if binary is None:
        sys.exit("espeak-ng not found on PATH")
    voice = VOICES.get(lang, lang)
    for line in sys.stdin:
        print(transcribe(binary, voice, line.strip()), flush=False)
    sys.stdout.flush()


if __name__ == "__main__":
    main()
