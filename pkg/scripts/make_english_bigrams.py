"""Regenerate src/rei/data/english_bigrams.tsv.

Counts lowercase letter pairs inside words of the English prose shipped with
CPython's reference documentation (``pydoc_data.topics``).
"""

import collections
import pathlib
import re

import pydoc_data.topics


def main():
    text = " ".join(pydoc_data.topics.topics.values()).lower()
    counts = collections.Counter()
    for word in re.findall(r"[a-z]+", text):
        for i in range(len(word) - 1):
            counts[word[i:i + 2]] += 1
    out = pathlib.Path(__file__).resolve().parents[1] / "src/rei/data/english_bigrams.tsv"
    rows = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    out.write_text("".join(f"{g}\t{c}\n" for g, c in rows))


if __name__ == "__main__":
    main()
