"""Successive-cancellation list machinery shared by every decoder.

Paths from many frames live in one flat batch: ``PathList.frame`` says which
frame each path belongs to and pruning keeps the ``L`` best paths *per frame*.
Decoding a subtree never copies workspaces; it returns, for each surviving
path, the index of the input path it descends from together with the partial
sums (``beta``) of that subtree.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kernel import f_llr, f_llr_exact, g_llr, hard_decision, polar_transform

MODES = ("hwf", "exact")


@dataclass
class PathList:
    pm: np.ndarray
    frame: np.ndarray

    def __post_init__(self):
        self.pm = np.asarray(self.pm, dtype=float)
        self.frame = np.asarray(self.frame, dtype=np.int64)

    def __len__(self) -> int:
        return len(self.pm)

    @classmethod
    def fresh(cls, n_frames: int = 1) -> "PathList":
        return cls(np.zeros(n_frames), np.arange(n_frames))

    def take(self, idx: np.ndarray, pm: np.ndarray | None = None) -> "PathList":
        return PathList(self.pm[idx] if pm is None else pm, self.frame[idx])


@dataclass
class NodeDecodeResult:
    """Survivors of a node: parent index into the input list, span codeword, PM."""

    parent: np.ndarray
    beta: np.ndarray
    pm: np.ndarray
    # per-frame diagnostics of data-dependent decoders (terminating step, list deficit)
    tau: np.ndarray | None = None
    deficit: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.pm)


def pm_update(pm, alpha, u_hat, mode: str = "hwf"):
    """Path-metric increment for deciding ``u_hat`` against LLR ``alpha``."""
    alpha = np.asarray(alpha, dtype=float)
    u_hat = np.asarray(u_hat)
    if mode == "exact":
        signed = np.where(u_hat != 0, alpha, -alpha)
        out = pm + np.logaddexp(0.0, signed)
    elif mode == "hwf":
        out = pm + np.where(hard_decision(alpha) != u_hat, np.abs(alpha), 0.0)
    else:
        raise ValueError(f"unknown PM mode {mode!r}")
    return out if np.ndim(out) else float(out)


def node_metric(alpha: np.ndarray, beta: np.ndarray, mode: str = "hwf") -> np.ndarray:
    """Codeword-domain penalty of ``beta`` under ``alpha``, summed over the last axis.

    In exact mode this equals sum(ln(1 + e^{-|alpha|})) plus the hwf value.
    """
    alpha = np.asarray(alpha, dtype=float)
    if mode == "exact":
        signed = np.where(np.asarray(beta) != 0, alpha, -alpha)
        return np.logaddexp(0.0, signed).sum(axis=-1)
    if mode == "hwf":
        return np.where(hard_decision(alpha) != beta, np.abs(alpha), 0.0).sum(axis=-1)
    raise ValueError(f"unknown PM mode {mode!r}")


def exact_offset(alpha: np.ndarray) -> np.ndarray:
    """sum(ln(1 + e^{-|alpha|})) over the last axis."""
    return np.logaddexp(0.0, -np.abs(alpha)).sum(axis=-1)


def select_best(frame: np.ndarray, pm: np.ndarray, L: int) -> np.ndarray:
    """Indices of the ``L`` smallest-PM candidates of every frame.

    Output is ordered by frame, then PM; ties go to the lower candidate index.
    """
    order = np.lexsort((pm, frame))
    f_sorted = frame[order]
    starts = np.flatnonzero(np.r_[True, f_sorted[1:] != f_sorted[:-1]])
    counts = np.diff(np.r_[starts, len(order)])
    rank = np.arange(len(order)) - np.repeat(starts, counts)
    return order[rank < L]


def finish(paths: PathList, parent: np.ndarray, beta: np.ndarray, pm: np.ndarray, L: int) -> NodeDecodeResult:
    keep = select_best(paths.frame[parent], pm, L)
    return NodeDecodeResult(parent[keep], beta[keep], pm[keep])


def split_leaf(paths: PathList, alpha: np.ndarray, is_frozen: bool, L: int, mode: str = "hwf") -> NodeDecodeResult:
    """Decide one bit on every path; information bits fork each path in two."""
    alpha = np.asarray(alpha, dtype=float).reshape(len(paths))
    idx = np.arange(len(paths))
    if is_frozen:
        zero = np.zeros((len(paths), 1), dtype=np.uint8)
        return NodeDecodeResult(idx, zero, pm_update(paths.pm, alpha, 0, mode))
    parent = np.repeat(idx, 2)
    bit = np.tile(np.array([0, 1], dtype=np.uint8), len(paths))
    pm = pm_update(paths.pm[parent], alpha[parent], bit, mode)
    return finish(paths, parent, bit[:, None], pm, L)


def combine(left: NodeDecodeResult, right: NodeDecodeResult) -> NodeDecodeResult:
    bl = left.beta[right.parent]
    beta = np.concatenate([bl ^ right.beta, right.beta], axis=1)
    return NodeDecodeResult(left.parent[right.parent], beta, right.pm)


def decode_span_bitwise(paths: PathList, alpha: np.ndarray, indicator: np.ndarray, L: int,
                        mode: str = "hwf") -> NodeDecodeResult:
    """Plain bit-by-bit SCL over a span with the given frozen pattern.

    Exact mode uses the exact check-node update so that a full path's PM is
    the exact codeword metric; hwf mode uses min-sum.
    """
    indicator = np.asarray(indicator)
    size = len(indicator)
    if size == 1:
        return split_leaf(paths, alpha[:, 0], indicator[0] == 0, L, mode)
    h = size // 2
    a, b = alpha[:, :h], alpha[:, h:]
    f = f_llr_exact if mode == "exact" else f_llr
    left = decode_span_bitwise(paths, f(a, b), indicator[:h], L, mode)
    p = left.parent
    right_paths = paths.take(p, left.pm)
    right = decode_span_bitwise(right_paths, g_llr(a[p], b[p], left.beta), indicator[h:], L, mode)
    return combine(left, right)


def select_codeword(spec, frame: np.ndarray, pm: np.ndarray, x: np.ndarray, n_frames: int,
                    use_crc: bool = True) -> np.ndarray:
    """Pick one message per frame from a sorted final list.

    The lowest-PM path passing the CRC wins; with no passing path the
    lowest-PM path is returned.  Output has shape (n_frames, K - r).
    """
    u = polar_transform(x)
    info = u[:, spec.info_set]
    if use_crc and spec.r:
        from .construction import crc_check_batch
        ok = crc_check_batch(info, spec.crc_poly)
    else:
        ok = np.ones(len(pm), dtype=bool)
    # list is already ordered by (frame, pm); first passing entry per frame wins
    rank_key = np.where(ok, 0, 1)
    order = np.lexsort((np.arange(len(pm)), rank_key, frame))
    f_sorted = frame[order]
    first = order[np.r_[True, f_sorted[1:] != f_sorted[:-1]]]
    out = np.zeros((n_frames, spec.k_msg), dtype=np.uint8)
    out[frame[first]] = info[first, : spec.k_msg]
    return out


def decode_ca_scl(llrs, spec, L: int, mode: str = "hwf", return_paths: bool = False):
    """Conventional CRC-aided SCL decoding (no special nodes).

    ``llrs`` may be one frame (N,) or a batch (B, N); the message estimate has
    the matching shape with CRC bits stripped.
    """
    llrs = np.asarray(llrs, dtype=float)
    single = llrs.ndim == 1
    batch = llrs[None, :] if single else llrs
    if batch.shape[1] != spec.N:
        raise ValueError(f"expected {spec.N} LLRs per frame")
    paths = PathList.fresh(batch.shape[0])
    res = decode_span_bitwise(paths, batch, spec.indicator, L, mode)
    frame = paths.frame[res.parent]
    msg = select_codeword(spec, frame, res.pm, res.beta, batch.shape[0])
    out = msg[0] if single else msg
    if return_paths:
        return out, NodeDecodeResult(res.parent, res.beta, res.pm)
    return out


def decode_sc(llrs, spec, mode: str = "hwf") -> np.ndarray:
    """Successive-cancellation decoding; returns the estimated u vector(s)."""
    llrs = np.asarray(llrs, dtype=float)
    single = llrs.ndim == 1
    batch = llrs[None, :] if single else llrs
    res = decode_span_bitwise(PathList.fresh(batch.shape[0]), batch, spec.indicator, 1, mode)
    u = polar_transform(res.beta)
    return u[0] if single else u
