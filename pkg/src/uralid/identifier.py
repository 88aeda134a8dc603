"""Sentence identification with word-level backoff scoring.

Every word of the input weighs equally. A word is scored in the most
specific feature domain any candidate knows it from: the whole-word map
first (when enabled), then character n-grams from n_max down to 1. Within
the chosen domain a candidate's score is the mean over the word's feature
occurrences of the stored negative-log10 relative frequency, with the
penalty substituted for features missing from that candidate's model.
Lowest sentence score (mean over words) wins; ties go to the language
registered first.

Texts dominated by CJK characters get a sanity adjustment: when more than
half of the non-whitespace characters fall in CJK blocks, every non-CJK
candidate is pushed out of contention by a large constant.
"""

from __future__ import annotations

import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .backend import get_kernel
from .features import WORD_DOMAIN, extract_ngrams, pad_word, tokenize
from .models import ModelSet
from .registry import DEFAULT_CJK_BLOCKS, LanguageRegistry

# Added to every non-CJK candidate when a text trips the CJK check. Any
# value above the penalty ceiling guarantees a CJK candidate wins.
CJK_HIGH_PENALTY = 1000.0

# Word-score cache entries kept per scorer before a full reset.
_CACHE_LIMIT = 1 << 20

# All Unicode whitespace lives at or below U+3000.
_WS_CODEPOINTS = np.array(
    sorted(cp for cp in range(0x3001) if chr(cp).isspace()), dtype=np.uint32
)


@dataclass(frozen=True)
class Prediction:
    """Result of identifying one sentence."""

    winner: str
    scores: dict[str, float]
    domain_trace: tuple[tuple[str, str | None], ...]


@dataclass(frozen=True)
class SetIdentification:
    """Language shares of a multi-line text, weighted by character count."""

    shares: dict[str, float]
    dominant: str | None


def cjk_ratio(text: str, blocks=DEFAULT_CJK_BLOCKS) -> float:
    """Fraction of non-whitespace characters inside CJK blocks."""
    if not text:
        return 0.0
    cp = np.frombuffer(text.encode("utf-32-le"), dtype=np.uint32)
    non_ws = ~np.isin(cp, _WS_CODEPOINTS)
    denominator = int(non_ws.sum())
    if denominator == 0:
        return 0.0
    in_cjk = np.zeros(cp.shape[0], dtype=bool)
    for lo, hi in blocks:
        in_cjk |= (cp >= lo) & (cp <= hi)
    return int((in_cjk & non_ws).sum()) / denominator


def apply_cjk_sanity(
    scores: dict[str, float],
    sentence: str,
    registry: LanguageRegistry,
    high_penalty: float = CJK_HIGH_PENALTY,
) -> dict[str, float]:
    """Push non-CJK candidates out when the text is majority-CJK.

    Strictly more than half of the non-whitespace characters must be CJK;
    a ratio of exactly 0.5 leaves the scores untouched.
    """
    if cjk_ratio(sentence, registry.cjk_blocks) <= 0.5:
        return dict(scores)
    return {
        code: score if registry.is_cjk(code) else score + high_penalty
        for code, score in scores.items()
    }


class Scorer:
    """Array form of a ModelSet plus the kernel that scores words with it.

    Rows are registry positions; per domain, a feature vocabulary maps
    feature strings to matrix columns and absent features carry a negative
    sentinel. The scorer is read-only after construction and safe to share
    across threads. Word scores are memoized per candidate set.
    """

    def __init__(self, model_set: ModelSet, backend: str | None = None):
        self.model_set = model_set
        self.params = model_set.params
        self.registry = model_set.registry
        self.penalty = float(self.params.penalty_p)
        self._kernel = get_kernel(backend)
        self._vocabs: dict[str, dict[str, int]] = {}
        self._matrices: dict[str, np.ndarray] = {}
        self._cache: dict[tuple[str, bytes], tuple[np.ndarray, str | None]] = {}

        n_rows = len(self.registry)
        for domain in self.params.domains():
            vocab: dict[str, int] = {}
            for model in model_set.models.values():
                for feature in model.domains[domain]:
                    if feature not in vocab:
                        vocab[feature] = len(vocab)
            matrix = np.full((n_rows, max(len(vocab), 1)), -1.0, dtype=np.float64)
            for code, model in model_set.models.items():
                row = self.registry.index(code)
                for feature, score in model.domains[domain].items():
                    matrix[row, vocab[feature]] = score
            self._vocabs[domain] = vocab
            self._matrices[domain] = matrix

        # compile / warm the kernel before any threaded use
        self._kernel(
            np.array([0, -1], dtype=np.int64),
            np.full((1, 1), -1.0, dtype=np.float64),
            np.zeros(1, dtype=np.int64),
            self.penalty,
            np.empty(1, dtype=np.float64),
        )

    def candidate_rows(self, candidates=None) -> tuple[np.ndarray, list[str]]:
        """Validate candidates and map them to registry-ordered matrix rows.

        ``None`` selects every language that has a model.
        """
        if candidates is None:
            codes = [c for c in self.registry.codes() if c in self.model_set.models]
        else:
            codes = self.registry.sort_by_order(candidates)
        if not codes:
            raise ValueError("no candidate languages")
        rows = np.array([self.registry.index(c) for c in codes], dtype=np.int64)
        return rows, codes

    def _ids(self, domain: str, features: list[str]) -> np.ndarray:
        vocab = self._vocabs[domain]
        return np.fromiter(
            (vocab.get(f, -1) for f in features), dtype=np.int64, count=len(features)
        )

    def _score_word(self, word: str, rows: np.ndarray) -> tuple[np.ndarray, str | None]:
        out = np.empty(rows.shape[0], dtype=np.float64)
        if self.params.use_words:
            ids = self._ids(WORD_DOMAIN, [pad_word(word)])
            if ids[0] >= 0 and self._kernel(
                ids, self._matrices[WORD_DOMAIN], rows, self.penalty, out
            ):
                return out, WORD_DOMAIN
        for n in range(self.params.n_max, 0, -1):
            grams = extract_ngrams(word, n)
            if not grams:
                continue
            ids = self._ids(str(n), grams)
            if ids.max() < 0:
                continue
            if self._kernel(ids, self._matrices[str(n)], rows, self.penalty, out):
                return out, str(n)
        out[:] = self.penalty
        return out, None

    def score_word(self, word: str, rows: np.ndarray) -> tuple[np.ndarray, str | None]:
        """Memoized per-word scores for the given candidate rows (read-only)."""
        key = (word, rows.tobytes())
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        scores, domain = self._score_word(word, rows)
        scores.setflags(write=False)
        if len(self._cache) >= _CACHE_LIMIT:
            self._cache.clear()
        self._cache[key] = (scores, domain)
        return scores, domain

    def score_sentence(
        self, sentence: str, rows: np.ndarray
    ) -> tuple[np.ndarray, tuple[tuple[str, str | None], ...]]:
        """Mean per-word score vector and the per-word domain trace."""
        words = tokenize(sentence)
        if not words:
            return np.full(rows.shape[0], self.penalty), ()
        acc = np.zeros(rows.shape[0], dtype=np.float64)
        trace = []
        for word in words:
            scores, domain = self.score_word(word, rows)
            acc += scores
            trace.append((word, domain))
        acc /= len(words)
        return acc, tuple(trace)

    def word_winners(self, sentence: str, rows: np.ndarray, codes: list[str]) -> list[str]:
        """Winning language per word (registry-order tie-break)."""
        winners = []
        for word in tokenize(sentence):
            scores, _ = self.score_word(word, rows)
            winners.append(codes[int(np.argmin(scores))])
        return winners

    def predict(self, sentence: str, rows: np.ndarray, codes: list[str]) -> Prediction:
        raw, trace = self.score_sentence(sentence, rows)
        scores = {code: float(raw[i]) for i, code in enumerate(codes)}
        scores = apply_cjk_sanity(scores, sentence, self.registry)
        winner, best = None, float("inf")
        for code, score in scores.items():
            if score < best:
                winner, best = code, score
        return Prediction(winner=winner, scores=scores, domain_trace=trace)


def score_word(
    word: str, model_set: ModelSet, candidates=None
) -> tuple[dict[str, float], str | None]:
    """Score one word for each candidate; returns the chosen domain too."""
    if not word:
        raise ValueError("word must be non-empty")
    scorer = model_set.scorer()
    rows, codes = scorer.candidate_rows(candidates)
    raw, domain = scorer.score_word(word, rows)
    return {code: float(raw[i]) for i, code in enumerate(codes)}, domain


def identify(sentence: str, model_set: ModelSet, candidates=None) -> Prediction:
    """Identify the language of one sentence among the candidates."""
    scorer = model_set.scorer()
    rows, codes = scorer.candidate_rows(candidates)
    return scorer.predict(sentence, rows, codes)


def identify_restricted(
    sentence: str, model_set: ModelSet, allowed_relevant
) -> Prediction:
    """Identify among the given relevant languages plus all non-relevant ones."""
    registry = model_set.registry
    allowed = set(allowed_relevant)
    for code in allowed:
        if not registry.is_relevant(code):
            raise ValueError(f"{code!r} is not a relevant language")
    candidates = list(allowed) + registry.non_relevant_codes()
    if not candidates:
        raise ValueError("empty candidate union")
    return identify(sentence, model_set, candidates)


def identify_batch(
    sentences,
    model_set: ModelSet,
    candidates=None,
    threads: int = 1,
    chunk_size: int = 256,
) -> list[Prediction]:
    """Identify many sentences, fanning out to a thread pool.

    Results are returned in input order and are identical for any thread
    count: each sentence is scored independently against the shared
    read-only scorer.
    """
    sentences = list(sentences)
    scorer = model_set.scorer()
    rows, codes = scorer.candidate_rows(candidates)
    if threads <= 1 or len(sentences) <= chunk_size:
        return [scorer.predict(s, rows, codes) for s in sentences]

    results: list[Prediction | None] = [None] * len(sentences)

    def run_chunk(start: int) -> None:
        for i in range(start, min(start + chunk_size, len(sentences))):
            results[i] = scorer.predict(sentences[i], rows, codes)

    with ThreadPoolExecutor(max_workers=threads) as pool:
        list(pool.map(run_chunk, range(0, len(sentences), chunk_size)))
    return results


def identify_set(
    text: str,
    model_set: ModelSet,
    min_share: float = 0.02,
    candidates=None,
) -> SetIdentification:
    """Estimate language shares of a multi-line text.

    Each non-blank line is identified on its own; a language's share is the
    fraction of characters in the lines it won. The dominant language is
    the relevant one with the greatest share, provided that share reaches
    ``min_share``; ties go to registry order. Only nonzero shares are
    reported.
    """
    if not 0.0 < min_share <= 1.0:
        raise ValueError(f"min_share must be in (0, 1], got {min_share}")
    scorer = model_set.scorer()
    registry = model_set.registry
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        return SetIdentification(shares={}, dominant=None)
    rows, codes = scorer.candidate_rows(candidates)
    chars_won: dict[str, int] = {}
    total = 0
    for line in lines:
        prediction = scorer.predict(line, rows, codes)
        chars_won[prediction.winner] = chars_won.get(prediction.winner, 0) + len(line)
        total += len(line)
    shares = {
        code: chars_won[code] / total for code in registry.sort_by_order(chars_won)
    }
    dominant = None
    best = 0.0
    for code, share in shares.items():
        if registry.is_relevant(code) and share > best:
            dominant, best = code, share
    if best < min_share:
        dominant = None
    return SetIdentification(shares=shares, dominant=dominant)


def format_prediction(index: int, prediction: Prediction, with_scores: bool) -> str:
    """One output row: index, winner, winner score, optionally all scores."""
    fields = [str(index), prediction.winner, f"{prediction.scores[prediction.winner]:.6f}"]
    if with_scores:
        for code, score in prediction.scores.items():
            fields.append(code)
            fields.append(f"{score:.6f}")
    return "\t".join(fields)


def main_throughput_note(count: int, seconds: float, stream=None) -> None:
    """Emit the sentences/second measurement (scale awareness, not a gate)."""
    stream = stream if stream is not None else sys.stderr
    rate = count / seconds if seconds > 0 else float("inf")
    print(
        f"identified {count} sentences in {seconds:.3f}s ({rate:.0f} sentences/s)",
        file=stream,
    )
