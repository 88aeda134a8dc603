"""Scoring kernels: numba-compiled hot loop with a pure-numpy fallback.

The per-word inner loop gathers feature scores for every candidate language
and averages them, substituting the penalty for features a candidate has
never seen. That loop dominates identification time, so it ships in two
interchangeable implementations:

* ``numba`` -- @njit compiled, nogil (default when numba imports cleanly);
* ``numpy`` -- vectorized fancy indexing, no compilation step.

Selection: the ``ULI_BACKEND`` environment variable (``numba``, ``numpy``
or ``auto``), overridable per call via ``resolve_backend``. Both kernels
share one contract:

    kernel(feature_ids, score_matrix, candidate_rows, penalty, out) -> bool

``feature_ids`` holds column indices (-1 for out-of-vocabulary features),
``score_matrix`` holds per-language scores with negative sentinel for
absent features, ``out`` receives the per-candidate mean. The return value
says whether any candidate had any of the features, which drives the
backoff over feature domains. The two implementations may differ in the
last float ulp (loop sum vs pairwise sum); each is individually
deterministic.
"""

from __future__ import annotations

import os

import numpy as np

ENV_BACKEND = "ULI_BACKEND"


def _numpy_kernel(feature_ids, score_matrix, candidate_rows, penalty, out):
    k = feature_ids.shape[0]
    known = feature_ids[feature_ids >= 0]
    if known.shape[0] == 0:
        out[:] = penalty
        return False
    sub = score_matrix[candidate_rows[:, None], known[None, :]]
    present = sub >= 0.0
    vals = np.where(present, sub, penalty)
    out[:] = (vals.sum(axis=1) + penalty * (k - known.shape[0])) / k
    return bool(present.any())


def _scalar_kernel(feature_ids, score_matrix, candidate_rows, penalty, out):
    k = feature_ids.shape[0]
    usable = False
    for i in range(candidate_rows.shape[0]):
        row = candidate_rows[i]
        acc = 0.0
        for j in range(k):
            col = feature_ids[j]
            if col >= 0:
                score = score_matrix[row, col]
                if score >= 0.0:
                    acc += score
                    usable = True
                else:
                    acc += penalty
            else:
                acc += penalty
        out[i] = acc / k
    return usable


try:
    from numba import njit

    _numba_kernel = njit(cache=True, nogil=True)(_scalar_kernel)
    HAS_NUMBA = True
except ImportError:
    _numba_kernel = None
    HAS_NUMBA = False

BACKENDS = ("numba", "numpy")


def resolve_backend(name: str | None = None) -> str:
    """Pick the kernel backend: explicit arg > ULI_BACKEND env > auto."""
    if name is None or name == "auto":
        name = os.environ.get(ENV_BACKEND, "auto")
    if name == "auto":
        return "numba" if HAS_NUMBA else "numpy"
    if name not in BACKENDS:
        raise ValueError(f"unknown backend {name!r}, expected one of {BACKENDS}")
    if name == "numba" and not HAS_NUMBA:
        raise RuntimeError("numba backend requested but numba is not importable")
    return name


def get_kernel(name: str | None = None):
    backend = resolve_backend(name)
    return _numba_kernel if backend == "numba" else _numpy_kernel


def warmup(name: str | None = None) -> None:
    """Trigger JIT compilation outside of timed or threaded sections."""
    kernel = get_kernel(name)
    ids = np.array([0, -1], dtype=np.int64)
    matrix = np.array([[0.5, -1.0]], dtype=np.float64)
    rows = np.array([0], dtype=np.int64)
    kernel(ids, matrix, rows, 7.0, np.empty(1, dtype=np.float64))
