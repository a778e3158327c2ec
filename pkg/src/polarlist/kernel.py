"""Polar transform and the SC message-passing primitives.

Everything works in natural (non bit-reversed) order.  LLR functions accept
scalars or arrays and broadcast.
"""

from __future__ import annotations

import numpy as np


def polar_transform(u: np.ndarray) -> np.ndarray:
    """x = u F^{(x)n} over GF(2); rows of a 2-D input are transformed independently."""
    x = np.array(u, dtype=np.uint8, copy=True)
    n_bits = x.shape[-1]
    if n_bits & (n_bits - 1):
        raise ValueError(f"length must be a power of two, got {n_bits}")
    half = 1
    while half < n_bits:
        v = x.reshape(x.shape[:-1] + (n_bits // (2 * half), 2, half))
        v[..., 0, :] ^= v[..., 1, :]
        half *= 2
    return x


def encode(u, spec) -> np.ndarray:
    u = np.asarray(u, dtype=np.uint8)
    if u.shape[-1] != spec.N:
        raise ValueError(f"u must have length {spec.N}")
    if np.any(u[..., spec.indicator == 0]):
        raise ValueError("frozen positions of u must be zero")
    return polar_transform(u)


def f_llr(a, b):
    """Min-sum check-node update: sgn(a) sgn(b) min(|a|, |b|), with sgn(0) = +1."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    sign = np.where((a < 0) ^ (b < 0), -1.0, 1.0)
    out = sign * np.minimum(np.abs(a), np.abs(b))
    return out if out.ndim else float(out)


def f_llr_exact(a, b):
    """Exact check-node update 2 atanh(tanh(a/2) tanh(b/2)), in a numerically stable form."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    out = f_llr(a, b) + np.log1p(np.exp(-np.abs(a + b))) - np.log1p(np.exp(-np.abs(a - b)))
    return out if out.ndim else float(out)


def g_llr(a, b, beta):
    """Variable-node update (1 - 2 beta) a + b."""
    out = np.where(np.asarray(beta) != 0, -np.asarray(a, dtype=float), a) + np.asarray(b, dtype=float)
    return out if out.ndim else float(out)


def beta_combine(left, right) -> np.ndarray:
    left = np.asarray(left, dtype=np.uint8)
    right = np.asarray(right, dtype=np.uint8)
    if left.shape != right.shape:
        raise ValueError("left and right partial sums differ in shape")
    return np.concatenate([left ^ right, right], axis=-1)


def hard_decision(alpha):
    """0 for alpha >= 0, 1 otherwise."""
    out = (np.asarray(alpha) < 0).astype(np.uint8)
    return out if out.ndim else int(out)
