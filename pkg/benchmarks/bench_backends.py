"""Compare identification throughput of the compiled and pure-numpy kernels.

Builds one synthetic model set, then scores the same sentence batch once per
backend with a fresh scorer each time, so neither run benefits from the
other's word cache. Reports sentences per second and the speedup.

Usage:
    python benchmarks/bench_backends.py --sentences 20000 --languages 8
"""

from __future__ import annotations

import argparse
import logging
import random
import string
import time

from uralid.backend import BACKENDS, warmup
from uralid.corpus import Corpus
from uralid.identifier import Scorer
from uralid.models import HeliParams, train_models
from uralid.registry import LanguageEntry, LanguageRegistry

log = logging.getLogger("bench_backends")


def build_model_set(languages: int, rng: random.Random):
    """Train one model per synthetic language over a shared alphabet."""
    codes = [f"x{string.ascii_lowercase[i]}a" for i in range(languages)]
    registry = LanguageRegistry(
        entries=tuple(LanguageEntry(c, c.upper(), True, False) for c in codes)
    )
    corpora = []
    for code in codes:
        sentences = tuple(
            " ".join(
                "".join(rng.choice(string.ascii_lowercase[:14]) for _ in range(rng.randint(2, 9)))
                for _ in range(rng.randint(3, 8))
            )
            for _ in range(400)
        )
        corpora.append(Corpus(language=code, sentences=sentences))
    return train_models(corpora, HeliParams(), registry)


def make_batch(count: int, rng: random.Random) -> list[str]:
    return [
        " ".join(
            "".join(rng.choice(string.ascii_lowercase[:14]) for _ in range(rng.randint(2, 9)))
            for _ in range(rng.randint(1, 8))
        )
        for _ in range(count)
    ]


def time_backend(name: str, model_set, sentences: list[str]) -> float:
    scorer = Scorer(model_set, backend=name)
    rows, codes = scorer.candidate_rows(None)
    start = time.perf_counter()
    for sentence in sentences:
        scorer.predict(sentence, rows, codes)
    return time.perf_counter() - start


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sentences", type=int, default=20000)
    parser.add_argument("--languages", type=int, default=8)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    logging.basicConfig(level=logging.INFO, format="%(message)s")
    rng = random.Random(args.seed)

    log.info("training %d models ...", args.languages)
    model_set = build_model_set(args.languages, rng)
    sentences = make_batch(args.sentences, rng)

    results = {}
    for name in BACKENDS:
        warmup(name)
        elapsed = time_backend(name, model_set, sentences)
        results[name] = elapsed
        log.info(
            "%-6s  %8.3fs  %10.0f sentences/s",
            name,
            elapsed,
            len(sentences) / elapsed,
        )
    if "numba" in results and "numpy" in results:
        log.info("speedup: %.1fx", results["numpy"] / results["numba"])


if __name__ == "__main__":
    main()
