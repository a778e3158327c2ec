"""Node-level list decoders for R0, REP, R1 and SPC nodes.

Every decoder takes the incoming ``PathList``, the node LLRs ``alpha`` of shape
(paths, N_s) and returns a ``NodeDecodeResult``.  Costs are computed in the
hard-decision (hwf) domain; in exact mode each parent additionally pays
sum(ln(1 + e^{-|alpha|})), which is the same for every codeword of the node.
"""

from __future__ import annotations

import numpy as np

from .kernel import hard_decision
from .mcs import fit_to_size, gen_mcs_r1, gen_mcs_spc, restrict_mcs
from .scl import NodeDecodeResult, PathList, exact_offset, finish, select_best


def _base_pm(paths: PathList, alpha: np.ndarray, mode: str) -> np.ndarray:
    if mode == "exact":
        return paths.pm + exact_offset(alpha)
    if mode != "hwf":
        raise ValueError(f"unknown PM mode {mode!r}")
    return paths.pm.copy()


def _rank(alpha: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-path ascending |alpha| order (stable) and the sorted magnitudes."""
    mag = np.abs(alpha)
    order = np.argsort(mag, axis=1, kind="stable")
    return order, np.take_along_axis(mag, order, axis=1)


def _combo_matrix(combos, width: int) -> tuple[np.ndarray, np.ndarray]:
    """(C, width) 0-based rank matrix padded with 0 plus its validity mask."""
    idx = np.zeros((len(combos), max(width, 1)), dtype=np.int64)
    mask = np.zeros_like(idx, dtype=bool)
    for c, f in enumerate(combos):
        idx[c, : len(f)] = np.asarray(f, dtype=np.int64) - 1
        mask[c, : len(f)] = True
    return idx, mask


def _expand_flips(paths: PathList, alpha: np.ndarray, base_beta: np.ndarray, base_pm: np.ndarray,
                  sel: np.ndarray, combos, L: int):
    """Candidates for parents ``sel``: flip the listed ranks of each parent's word."""
    if len(sel) == 0 or not combos:
        return (np.zeros(0, np.int64), np.zeros((0, alpha.shape[1]), np.uint8), np.zeros(0))
    idx, mask = _combo_matrix(combos, max(len(f) for f in combos))
    width = idx.shape[1]
    order, smag = _rank(alpha[sel])
    n_c = len(combos)
    # penalty of each combination, per parent: (P', C)
    pen = (smag[:, idx] * mask[None]).sum(axis=2)
    parent = np.repeat(sel, n_c)
    pm = (base_pm[sel][:, None] + pen).ravel()
    beta = np.repeat(base_beta[sel], n_c, axis=0)
    pos = order[:, idx]  # (P', C, width) natural positions
    rows = np.repeat(np.arange(len(parent)), width).reshape(len(parent), width)
    flat_pos = pos.reshape(len(parent), width)
    flat_mask = np.broadcast_to(mask, (len(sel), n_c, width)).reshape(len(parent), width)
    beta[rows[flat_mask], flat_pos[flat_mask]] ^= 1
    return parent, beta, pm


def decode_r0_list(paths: PathList, alpha: np.ndarray, L: int = 1, mode: str = "hwf") -> NodeDecodeResult:
    alpha = np.asarray(alpha, dtype=float)
    beta = np.zeros(alpha.shape, dtype=np.uint8)
    if mode == "exact":
        pm = paths.pm + np.logaddexp(0.0, -alpha).sum(axis=1)
    else:
        pm = paths.pm + np.where(alpha < 0, -alpha, 0.0).sum(axis=1)
    return NodeDecodeResult(np.arange(len(paths)), beta, pm)


def decode_rep_list(paths: PathList, alpha: np.ndarray, L: int, mode: str = "hwf") -> NodeDecodeResult:
    alpha = np.asarray(alpha, dtype=float)
    n_p, size = alpha.shape
    base = _base_pm(paths, alpha, mode)
    cost0 = np.where(alpha < 0, -alpha, 0.0).sum(axis=1)
    cost1 = np.where(alpha >= 0, alpha, 0.0).sum(axis=1)
    parent = np.repeat(np.arange(n_p), 2)
    pm = (base[:, None] + np.stack([cost0, cost1], axis=1)).ravel()
    beta = np.zeros((2 * n_p, size), dtype=np.uint8)
    beta[1::2] = 1
    return finish(paths, parent, beta, pm, L)


def decode_r1_fpl(paths: PathList, alpha: np.ndarray, L: int, mode: str = "hwf",
                  i_max: int | None = None) -> NodeDecodeResult:
    alpha = np.asarray(alpha, dtype=float)
    combos = fit_to_size(gen_mcs_r1(L), alpha.shape[1])
    if i_max is not None:
        combos = restrict_mcs(combos, i_max)
    hd = hard_decision(alpha)
    base = _base_pm(paths, alpha, mode)
    parent, beta, pm = _expand_flips(paths, alpha, hd, base, np.arange(len(paths)), combos, L)
    return finish(paths, parent, beta, pm, L)


def _sequential(paths: PathList, alpha, beta, pm, order, smag, ranks, L, partner: bool):
    """Step-by-step flip/no-flip splitting over the given ranks with 2L -> L pruning.

    With ``partner`` the rank-1 bit is flipped together with the step bit so
    that the overall parity is preserved (SPC); the cost uses the current
    state of the rank-1 bit.
    """
    n_p = alpha.shape[0]
    parent = np.arange(n_p)
    for t in ranks:
        pos = order[parent, t]
        cost = smag[parent, t]
        if partner:
            p1 = order[parent, 0]
            flipped = beta[np.arange(len(parent)), p1] != hard_decision(alpha[parent, p1])
            cost = cost + np.where(flipped, -1.0, 1.0) * smag[parent, 0]
        cand_parent = np.repeat(parent, 2)
        cand_pm = np.stack([pm, pm + cost], axis=1).ravel()
        cand_beta = np.repeat(beta, 2, axis=0)
        rows = np.arange(1, len(cand_parent), 2)
        cand_beta[rows, pos] ^= 1
        if partner:
            cand_beta[rows, p1] ^= 1
        keep = select_best(paths.frame[cand_parent], cand_pm, L)
        parent, beta, pm = cand_parent[keep], cand_beta[keep], cand_pm[keep]
    return NodeDecodeResult(parent, beta, pm)


def decode_r1_fsl(paths: PathList, alpha: np.ndarray, L: int, mode: str = "hwf") -> NodeDecodeResult:
    alpha = np.asarray(alpha, dtype=float)
    order, smag = _rank(alpha)
    base = _base_pm(paths, alpha, mode)
    ranks = range(min(L - 1, alpha.shape[1]))
    res = _sequential(paths, alpha, hard_decision(alpha), base, order, smag, ranks, L, partner=False)
    return finish(paths, res.parent, res.beta, res.pm, L)


def _wagner(alpha: np.ndarray, order: np.ndarray, smag: np.ndarray):
    hd = hard_decision(alpha)
    gamma = hd.sum(axis=1) & 1
    beta = hd.copy()
    rows = np.flatnonzero(gamma)
    beta[rows, order[rows, 0]] ^= 1
    return beta, gamma, gamma * smag[:, 0]


def decode_spc_fsl(paths: PathList, alpha: np.ndarray, L: int, mode: str = "hwf") -> NodeDecodeResult:
    alpha = np.asarray(alpha, dtype=float)
    order, smag = _rank(alpha)
    beta, _, pen = _wagner(alpha, order, smag)
    base = _base_pm(paths, alpha, mode) + pen
    ranks = range(1, min(L, alpha.shape[1]))
    res = _sequential(paths, alpha, beta, base, order, smag, ranks, L, partner=True)
    return finish(paths, res.parent, res.beta, res.pm, L)


def decode_spc_fpl(paths: PathList, alpha: np.ndarray, L: int, mode: str = "hwf",
                   i_max: int | None = None) -> NodeDecodeResult:
    alpha = np.asarray(alpha, dtype=float)
    hd = hard_decision(alpha)
    gamma = hd.sum(axis=1) & 1
    base = _base_pm(paths, alpha, mode)
    parts = []
    for g in (0, 1):
        combos = fit_to_size(gen_mcs_spc(L, g), alpha.shape[1])
        if i_max is not None:
            combos = restrict_mcs(combos, i_max)
        parts.append(_expand_flips(paths, alpha, hd, base, np.flatnonzero(gamma == g), combos, L))
    parent = np.concatenate([p[0] for p in parts])
    beta = np.concatenate([p[1] for p in parts])
    pm = np.concatenate([p[2] for p in parts])
    return finish(paths, parent, beta, pm, L)
