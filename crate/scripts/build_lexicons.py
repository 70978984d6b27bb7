#!/usr/bin/env python3
"""Regenerate the committed lexicon files under crates/core/data/.

Sources (fetched from PyPI with `pip download`):
  * textblob 0.20.1 (MIT): en-lexicon.txt (Brill tagger lexicon, Penn tags)
    and en-spelling.txt (word frequency list).
  * english-words 2.0.2 (MIT): GCIDE headword list.

Outputs:
  pos_lexicon.tsv  lower-cased word -> coarse tag, one entry per line
  dictionary.txt   lower-cased alphabetic words used for typo detection
"""
import pathlib
import pickle
import subprocess
import sys
import tempfile
import zipfile

OUT = pathlib.Path(__file__).resolve().parent.parent / "crates" / "core" / "data"

PENN_TO_COARSE = {
    "NN": "NOUN", "NNS": "NOUN", "NNP": "NOUN", "NNPS": "NOUN",
    "VB": "VERB", "VBD": "VERB", "VBG": "VERB", "VBN": "VERB", "VBP": "VERB", "VBZ": "VERB",
    "MD": "MODAL",
    "JJ": "ADJ", "JJR": "ADJ", "JJS": "ADJ",
    "RB": "ADV", "RBR": "ADV", "RBS": "ADV", "WRB": "ADV",
    "PRP": "PRON", "PRP$": "PRON", "WP": "PRON", "WP$": "PRON", "EX": "PRON",
    "DT": "DET", "PDT": "DET", "WDT": "DET",
    "IN": "ADP",
    "CC": "CONJ",
    "CD": "NUM",
    "TO": "PART", "RP": "PART", "POS": "PART",
}


def fetch(pkg, dest):
    subprocess.run(
        [sys.executable, "-m", "pip", "download", "--no-deps", "-q", "-d", dest, pkg],
        check=True,
    )
    return next(pathlib.Path(dest).glob(pkg.split("==")[0].replace("-", "_") + "*.whl"))


def main():
    with tempfile.TemporaryDirectory() as tmp:
        tb = zipfile.ZipFile(fetch("textblob==0.20.1", tmp))
        ew = zipfile.ZipFile(fetch("english-words==2.0.2", tmp))
        brill = tb.read("textblob/en/en-lexicon.txt").decode()
        spelling = tb.read("textblob/en/en-spelling.txt").decode()
        gcide = pickle.loads(ew.read("english_words/data/gcide_alpha_lower.pickle"))

    tags = {}
    proper_only = {}
    for line in brill.splitlines():
        if line.startswith(";;;") or not line.strip():
            continue
        word, penn = line.split()
        penn = penn.split("|")[0]
        coarse = PENN_TO_COARSE.get(penn)
        if coarse is None or not any(c.isalnum() for c in word):
            continue
        key = word.lower()
        is_proper = penn in ("NNP", "NNPS")
        # the lower-case spelling wins over capitalised variants
        if key not in tags or word == key:
            tags[key] = coarse
        proper_only[key] = proper_only.get(key, True) and is_proper

    with open(OUT / "pos_lexicon.tsv", "w", encoding="utf-8") as f:
        f.write("# word<TAB>coarse tag; derived from the Brill tagger lexicon (MIT)\n")
        for key in sorted(tags):
            f.write(f"{key}\t{tags[key]}\n")

    words = set(w for w in gcide if w.isalpha() and w.isascii())
    words.update(k for k, p in proper_only.items() if not p and k.isalpha() and k.isascii())
    for line in spelling.splitlines():
        if line.startswith(";;;") or not line.strip():
            continue
        w = line.split()[0].lower()
        if w.isalpha() and w.isascii():
            words.add(w)
    with open(OUT / "dictionary.txt", "w", encoding="utf-8") as f:
        f.write("# lower-cased English word list for typo detection\n")
        for w in sorted(words):
            f.write(w + "\n")
    print(f"{len(tags)} lexicon entries, {len(words)} dictionary words")


if __name__ == "__main__":
    main()
