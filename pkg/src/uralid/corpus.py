"""Sentence corpora: loading line-oriented files and train/dev splitting.

Two file formats are supported:

* ``plain``   -- one sentence per line;
* ``indexed`` -- Leipzig-collection style ``number<TAB>sentence`` lines,
  the leading number is stripped.

Blank lines are dropped in both formats (an empty sentence carries no
features). Files must be UTF-8; both LF and CRLF line endings are accepted.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path

from .errors import DataError

FORMATS = ("plain", "indexed")


@dataclass(frozen=True)
class Corpus:
    """Ordered sentences of a single language. Immutable once loaded."""

    language: str
    sentences: tuple[str, ...]
    source_path: str = "<memory>"

    def __post_init__(self):
        for s in self.sentences:
            if "\n" in s or "\r" in s:
                raise DataError(
                    f"{self.source_path}: sentence contains a line break: {s!r}"
                )

    def __len__(self) -> int:
        return len(self.sentences)


def load_corpus(path, language: str, format: str = "plain") -> Corpus:
    """Read a sentence-per-line corpus file.

    ``indexed`` lines must contain a tab; the part before the first tab is
    discarded. Order is preserved; blank lines are skipped.
    """
    if format not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}, got {format!r}")
    path = Path(path)
    data = path.read_bytes()
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise DataError(f"{path}: invalid UTF-8 at byte offset {exc.start}") from None

    sentences: list[str] = []
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.rstrip("\r")
        if not line.strip():
            continue
        if format == "indexed":
            if "\t" not in line:
                raise DataError(f"{path}:{lineno}: indexed line without a tab")
            line = line.split("\t", 1)[1]
            if not line.strip():
                continue
        sentences.append(line)
    return Corpus(language=language, sentences=tuple(sentences), source_path=str(path))


def sniff_format(path) -> str:
    """Guess a corpus file's format from its first non-blank line.

    A leading integer field followed by a tab means ``indexed``; anything
    else, including an empty file, is ``plain``.
    """
    path = Path(path)
    with path.open("r", encoding="utf-8", errors="replace") as handle:
        for raw in handle:
            line = raw.rstrip("\r\n")
            if not line.strip():
                continue
            head = line.split("\t", 1)[0]
            return "indexed" if "\t" in line and head.strip().isdigit() else "plain"
    return "plain"


def save_corpus(corpus: Corpus, path) -> None:
    Path(path).write_text(
        "".join(s + "\n" for s in corpus.sentences), encoding="utf-8"
    )


def split_train_dev(corpus: Corpus, dev_fraction: float, seed: int) -> tuple[Corpus, Corpus]:
    """Deterministic shuffle-and-split into (train, dev).

    The dev set receives round-half-up of ``n * dev_fraction`` sentences;
    the outputs partition the input.
    """
    if not 0.0 <= dev_fraction <= 1.0:
        raise ValueError(f"dev_fraction must be in [0, 1], got {dev_fraction}")
    sentences = list(corpus.sentences)
    random.Random(seed).shuffle(sentences)
    n_dev = int(len(sentences) * dev_fraction + 0.5)
    dev = sentences[:n_dev]
    train = sentences[n_dev:]
    return (
        Corpus(corpus.language, tuple(train), corpus.source_path),
        Corpus(corpus.language, tuple(dev), corpus.source_path),
    )
