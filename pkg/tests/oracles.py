"""Brute-force references shared by the test modules."""

import itertools

import numpy as np


def kron_matrix(n_bits: int) -> np.ndarray:
    g = np.array([[1]], dtype=np.int64)
    f = np.array([[1, 0], [1, 1]], dtype=np.int64)
    while g.shape[0] < n_bits:
        g = np.kron(g, f)
    return g


_WORDS = {}


def codebook(indicator) -> np.ndarray:
    """Every codeword of the span with info positions ``indicator``, by explicit matrix products."""
    key = tuple(int(v) for v in indicator)
    if key not in _WORDS:
        info = np.flatnonzero(key)
        u = np.zeros((1 << len(info), len(key)), dtype=np.int64)
        if len(info):
            u[:, info] = np.array(list(itertools.product([0, 1], repeat=len(info))))
        _WORDS[key] = ((u @ kron_matrix(len(key))) & 1).astype(np.uint8)
    return _WORDS[key]


def hwf_cost(words: np.ndarray, alpha: np.ndarray) -> np.ndarray:
    return ((words != (alpha < 0)) * np.abs(alpha)).sum(axis=1)


def exact_cost(words: np.ndarray, alpha: np.ndarray) -> np.ndarray:
    return np.logaddexp(0.0, -(1.0 - 2.0 * words) * alpha).sum(axis=1)


def top_l(costs, L: int) -> np.ndarray:
    return np.sort(np.asarray(costs))[:L]


def tie_free(rng, size, scale=1.5, mean=0.5) -> np.ndarray:
    """Gaussian LLRs whose magnitudes are pairwise distinct."""
    while True:
        a = rng.normal(mean, scale, size)
        mag = np.sort(np.abs(a))
        if np.all(np.diff(mag) > 1e-6) and mag[0] > 1e-6:
            return a
