"""Two-stage list decoding of SR1/SPC nodes.

Node bits are viewed as a (rows, N_q) grid: bit ``i = j * N_q + k`` is row
``j`` of subcode ``k``.  Every column must XOR to the source codeword bit
``beta_q[k]`` (P-PC), and for each SPC descendant at level ``r`` the bits with
bit ``r`` of ``i`` set must XOR to zero (S-PC).

Stage I decodes the source from the column LLRs and Wagner-corrects every
column.  Stage II then searches over pair flips (a bit plus its column's
least reliable bit), which leave every P-PC intact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .mcs import fit_to_size, gen_fcs, gen_mcs_r1, gen_mcs_spc, restrict_mcs
from .scl import NodeDecodeResult, PathList, decode_span_bitwise, exact_offset, select_best

# safety cap on temporary paths per frame in the RSR1 sequential search
RSR1_PATH_CAP = 32


RSR1_RULES = ("bound", "gap", "prune")


@dataclass(frozen=True)
class Stage2Config:
    variant: str = "fsl"  # "fsl" or "fpl"
    t_max: int | None = None  # SR1 FSL splitting cap
    upsilon: int | None = None  # RSR1 FPL pre-split count, default L - 1
    i_max: int | None = None  # SR1 FPL MCS restriction
    sorter: str = "full_rank"  # latency accounting only
    rsr1_rule: str = "bound"  # RSR1 FSL split rule, one of RSR1_RULES

    def __post_init__(self):
        if self.variant not in ("fsl", "fpl"):
            raise ValueError(f"unknown stage-II variant {self.variant!r}")
        if self.t_max is not None and self.t_max < 1:
            raise ValueError("t_max must be >= 1")
        if self.upsilon is not None and self.upsilon < 0:
            raise ValueError("upsilon must be >= 0")
        if self.rsr1_rule not in RSR1_RULES:
            raise ValueError(f"unknown RSR1 rule {self.rsr1_rule!r}")


@dataclass
class Stage1Result:
    parent: np.ndarray  # index into the node's input paths
    frame: np.ndarray
    alpha: np.ndarray  # node LLRs per path, (P, N_p)
    beta: np.ndarray  # Wagner-corrected node codeword
    pm: np.ndarray
    beta_q: np.ndarray
    gamma: np.ndarray  # (P, N_q) 1 where the column's least reliable bit was flipped
    minrow: np.ndarray  # (P, N_q) row of each column's least reliable bit
    n_q: int

    def __len__(self) -> int:
        return len(self.pm)


def source_llr(alpha: np.ndarray, q: int) -> np.ndarray:
    """Column LLRs: product of signs times the smallest magnitude of each column."""
    alpha = np.asarray(alpha, dtype=float)
    n_q = 1 << q
    grid = alpha.reshape(alpha.shape[0], -1, n_q)
    neg = (grid < 0).sum(axis=1) & 1
    mag = np.abs(grid).min(axis=1)
    return np.where(neg == 1, -mag, mag)


def flip_gain(alpha: np.ndarray, beta: np.ndarray) -> np.ndarray:
    """(1 - 2 beta) alpha: PM change caused by flipping each bit of ``beta``."""
    return np.where(beta != 0, -alpha, alpha)


def stage1_decode(paths: PathList, node, alpha: np.ndarray, L: int, mode: str = "hwf",
                  source_decoder=None) -> Stage1Result:
    """Decode the source, keep the L best paths by root-level PM, Wagner-correct every column.

    ``source_decoder(paths, alpha_q)`` must return a ``NodeDecodeResult`` for
    the source; by default the source is decoded bit by bit.  The source is
    always ranked with hard-decision costs; in exact mode the parent PM
    carries the node-wide constant so the result equals the exact root PM.
    """
    alpha = np.asarray(alpha, dtype=float)
    q = node.q
    n_q = 1 << q
    a_q = source_llr(alpha, q)
    base = paths.pm + exact_offset(alpha) if mode == "exact" else paths.pm
    src_paths = PathList(base, paths.frame)
    if source_decoder is None:
        res = decode_span_bitwise(src_paths, a_q, np.asarray(node.source_pattern), L, "hwf")
    else:
        res = source_decoder(src_paths, a_q)
    parent = res.parent
    rows_alpha = alpha[parent]
    grid = rows_alpha.reshape(len(parent), -1, n_q)
    hd = (grid < 0).astype(np.uint8)
    gamma = (hd.sum(axis=1) & 1).astype(np.uint8) ^ res.beta
    minrow = np.abs(grid).argmin(axis=1)
    beta = hd.copy()
    r, k = np.nonzero(gamma)
    beta[r, minrow[r, k], k] ^= 1
    return Stage1Result(parent, paths.frame[parent], rows_alpha, beta.reshape(len(parent), -1),
                        res.pm, res.beta, gamma, minrow, n_q)


def modified_llr(st: Stage1Result) -> np.ndarray:
    """Pair-flip costs from the stage-I state; +inf at each column's least reliable bit."""
    n_p = st.alpha.shape[1]
    mag = np.abs(st.alpha).reshape(len(st), -1, st.n_q)
    amin = np.take_along_axis(mag, st.minrow[:, None, :], axis=1)
    delta = mag + (1.0 - 2.0 * st.gamma[:, None, :]) * amin
    rows = np.arange(mag.shape[1])[None, :, None]
    delta = np.where(rows == st.minrow[:, None, :], np.inf, delta)
    return delta.reshape(len(st), n_p)


def _partner(st: Stage1Result, root: np.ndarray, pos: np.ndarray) -> np.ndarray:
    k = pos % st.n_q
    return st.minrow[root, k] * st.n_q + k


def _pair_cost(st: Stage1Result, root, beta, pos, partner) -> np.ndarray:
    r = np.arange(len(root))
    a = st.alpha[root]
    return (flip_gain(a[r, pos], beta[r, pos]) + flip_gain(a[r, partner], beta[r, partner]))


def _apply_pair(beta, rows, pos, partner):
    beta[rows, pos] ^= 1
    beta[rows, partner] ^= 1


def _split_step(st, root, beta, pm, t_order, split):
    """Every path is kept; paths flagged in ``split`` also spawn a pair-flipped copy."""
    s_idx = np.flatnonzero(split)
    pos = t_order[s_idx]
    partner = _partner(st, root[s_idx], pos)
    cost = _pair_cost(st, root[s_idx], beta[s_idx], pos, partner)
    new_beta = beta[s_idx].copy()
    _apply_pair(new_beta, np.arange(len(s_idx)), pos, partner)
    return (np.concatenate([root, root[s_idx]]), np.concatenate([beta, new_beta]),
            np.concatenate([pm, pm[s_idx] + cost]))


def _n_steps(st: Stage1Result) -> int:
    return st.alpha.shape[1] - st.n_q


def sr1_stage2_fsl(st: Stage1Result, L: int, t_max: int | None = None) -> NodeDecodeResult:
    order = np.argsort(modified_llr(st), axis=1, kind="stable")
    steps = min(L - 1, _n_steps(st))
    if t_max is not None:
        steps = min(steps, t_max)
    root = np.arange(len(st))
    beta, pm = st.beta.copy(), st.pm.copy()
    for t in range(steps):
        root, beta, pm = _split_step(st, root, beta, pm, order[root, t], np.ones(len(root), bool))
        keep = select_best(st.frame[root], pm, L)
        root, beta, pm = root[keep], beta[keep], pm[keep]
    keep = select_best(st.frame[root], pm, L)
    return NodeDecodeResult(st.parent[root[keep]], beta[keep], pm[keep])


def sr1_stage2_fpl(st: Stage1Result, L: int, i_max: int | None = None) -> NodeDecodeResult:
    """Per-column SPC candidates from the MCS, then R1-style combination across columns."""
    P = len(st)
    n_q = st.n_q
    n_rows = st.alpha.shape[1] // n_q
    mag = np.abs(st.alpha).reshape(P, n_rows, n_q)
    col_order = np.argsort(mag, axis=1, kind="stable")  # (P, rows, n_q)
    smag = np.take_along_axis(mag, col_order, axis=1)
    tables = []
    for g in (0, 1):
        # the Wagner word itself (no flip for gamma=0, rank 1 for gamma=1) is the parent path
        combos = [f for f in fit_to_size(gen_mcs_spc(L, g), n_rows) if f != ((1,) if g else ())]
        if i_max is not None:
            combos = restrict_mcs(combos, i_max)
        inc = np.zeros((len(combos), n_rows), dtype=np.uint8)
        for c, f in enumerate(combos):
            inc[c, np.asarray(f) - 1] = 1
        tables.append(inc)
    n_c = max(len(t) for t in tables)
    # rank incidence per (path, combo, column), relative to the Wagner word
    inc = np.zeros((P, n_c, n_q, n_rows), dtype=np.uint8)
    valid = np.zeros((P, n_c, n_q), dtype=bool)
    for g, tab in enumerate(tables):
        sel = st.gamma == g  # (P, n_q)
        if len(tab) == 0:
            continue
        pp, kk = np.nonzero(sel)
        inc[pp, : len(tab), kk] = tab[None]
        valid[pp, : len(tab), kk] = True
        if g == 1:
            inc[pp, : len(tab), kk, 0] ^= 1
    # sigma = sum of flipped magnitudes relative to the hard decisions minus the paid Wagner flip
    raw = np.zeros((P, n_c, n_q, n_rows), dtype=np.uint8)
    for g, tab in enumerate(tables):
        if len(tab):
            pp, kk = np.nonzero(st.gamma == g)
            raw[pp, : len(tab), kk] = tab[None]
    sig = (raw * smag.transpose(0, 2, 1)[:, None, :, :]).sum(axis=3)
    sig = sig - st.gamma[:, None, :] * smag[:, 0, :][:, None, :]
    sig = np.where(valid, sig, np.inf).reshape(P, n_c * n_q)
    best = np.argsort(sig, axis=1, kind="stable")[:, :L]  # (P, L')
    n_best = best.shape[1]
    sig_best = np.take_along_axis(sig, best, axis=1)
    col_best = best % n_q
    r1 = [f for f in fit_to_size(gen_mcs_r1(L), n_best)]
    r1_inc = np.zeros((len(r1), n_best), dtype=np.int64)
    for c, f in enumerate(r1):
        if f:
            r1_inc[c, np.asarray(f) - 1] = 1
    delta = np.where(r1_inc[None].astype(bool), sig_best[:, None, :], 0.0).sum(axis=2)  # (P, R1)
    # combinations must draw at most one candidate per column
    dup = np.zeros((P, len(r1)), dtype=bool)
    for c, f in enumerate(r1):
        if len(f) > 1:
            cols = col_best[:, np.asarray(f) - 1]
            srt = np.sort(cols, axis=1)
            dup[:, c] = (srt[:, 1:] == srt[:, :-1]).any(axis=1)
    ok = np.isfinite(delta) & ~dup
    cand_root, cand_c = np.nonzero(ok)
    pm = st.pm[cand_root] + delta[cand_root, cand_c]
    keep = select_best(st.frame[cand_root], pm, L)
    cand_root, cand_c, pm = cand_root[keep], cand_c[keep], pm[keep]
    # materialise the surviving codewords
    beta = st.beta[cand_root].reshape(len(cand_root), n_rows, n_q).copy()
    flat_inc = inc.reshape(P, n_c * n_q, n_rows)
    for slot in range(n_best):
        use = r1_inc[cand_c, slot] == 1
        if not use.any():
            continue
        rr = cand_root[use]
        cell = best[rr, slot]
        k = cell % n_q
        rank_flip = flat_inc[rr, cell]  # (m, rows) over ranks
        rows = col_order[rr, :, k]  # rank -> row
        m_idx = np.flatnonzero(use)
        rr_i, rank_i = np.nonzero(rank_flip)
        beta[m_idx[rr_i], rows[rr_i, rank_i], k[rr_i]] ^= 1
    return NodeDecodeResult(st.parent[cand_root], beta.reshape(len(cand_root), -1), pm)


def spc_tags(n_p: int, node) -> np.ndarray:
    """Per-position syndrome contribution: bit (r - q) set when position lies in the level-r check."""
    idx = np.arange(n_p)
    tag = np.zeros(n_p, dtype=np.int64)
    for r in node.spc_levels:
        tag |= ((idx >> r) & 1) << (r - node.q)
    return tag


def spc_syndrome(beta: np.ndarray, node) -> np.ndarray:
    """S-PC syndrome as an integer: bit (r - q) set when the level-r check fails."""
    tag = spc_tags(beta.shape[1], node)
    if beta.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    width = max(1, int(tag.max()).bit_length())
    member = ((tag[:, None] >> np.arange(width)) & 1).astype(np.float32)
    # float32 counts are exact far beyond any node size
    odd = (beta.astype(np.float32) @ member).astype(np.int64) & 1
    return odd @ (1 << np.arange(width, dtype=np.int64))


def _per_frame_rank(frame: np.ndarray, pm: np.ndarray, mask: np.ndarray, l: int, n_frames: int) -> np.ndarray:
    """l-th smallest (1-based) ``pm`` among ``mask`` entries of every frame; +inf if missing."""
    out = np.full(n_frames, np.inf)
    idx = np.flatnonzero(mask)
    if len(idx) == 0:
        return out
    order = idx[np.lexsort((pm[idx], frame[idx]))]
    f = frame[order]
    starts = np.flatnonzero(np.r_[True, f[1:] != f[:-1]])
    counts = np.diff(np.r_[starts, len(order)])
    have = counts >= l
    out[f[starts[have]]] = pm[order[starts[have] + l - 1]]
    return out


def rsr1_stage2_fsl(st: Stage1Result, node, L: int, t_max: int | None = None,
                    rule: str = "bound") -> NodeDecodeResult:
    """Sequential pair-flip search that keeps only S-PC-valid survivors.

    Each step may flip the path's next pair; the increment tracks the path's
    column parities.  After every step paths above the frame's L-th smallest
    valid PM are dropped.

    ``rule="bound"`` splits a path only when its child can still land at or
    below that L-th valid PM.  ``rule="gap"`` splits when the increment is at
    most the gap between the L-th and 1st valid PMs and drops unsplit invalid
    paths, so invalid paths cheaper than the best valid one can be lost.  Both
    stop a frame once a step splits nothing with L valid paths present.
    ``rule="prune"`` splits everything and never stops early.
    """
    if rule not in RSR1_RULES:
        raise ValueError(f"unknown RSR1 rule {rule!r}")
    order = np.argsort(modified_llr(st), axis=1, kind="stable")
    n_frames = int(st.frame.max()) + 1 if len(st) else 0
    steps = _n_steps(st) if t_max is None else min(t_max, _n_steps(st))
    root = np.arange(len(st))
    beta, pm = st.beta.copy(), st.pm.copy()
    valid = spc_syndrome(beta, node) == 0
    done = np.zeros(n_frames, dtype=bool)
    tau = np.full(n_frames, steps, dtype=np.int64)
    for t in range(steps):
        frame = st.frame[root]
        lth = _per_frame_rank(frame, pm, valid, L, n_frames)
        active = ~done[frame]
        pos = order[root, t]
        step_cost = _pair_cost(st, root, beta, pos, _partner(st, root, pos))
        n_valid = np.bincount(frame[valid], minlength=n_frames)
        present = np.bincount(frame, minlength=n_frames) > 0
        if rule == "prune":
            split, drop, stop = active, np.zeros_like(active), np.zeros(n_frames, bool)
        elif rule == "bound":
            split = active & (pm + step_cost <= lth[frame])
            drop = np.zeros_like(active)
            stop = ~done & present & (n_valid >= L) & (np.bincount(frame[split], minlength=n_frames) == 0)
        else:
            if t == 0:
                thr = np.full(n_frames, np.inf)
            else:
                with np.errstate(invalid="ignore"):
                    thr = lth - _per_frame_rank(frame, pm, valid, 1, n_frames)
                thr = np.where(np.isnan(thr), np.inf, thr)
            split = active & (step_cost <= thr[frame])
            drop = active & ~split & ~valid
            stop = ~done & present & (n_valid >= L) & (np.bincount(frame[split], minlength=n_frames) == 0)
        tau[stop] = t + 1
        done |= stop
        split &= ~done[frame]
        keep = ~drop | done[frame]
        root, beta, pm, split = root[keep], beta[keep], pm[keep], split[keep]
        root, beta, pm = _split_step(st, root, beta, pm, order[root, t], split)
        valid = spc_syndrome(beta, node) == 0
        frame = st.frame[root]
        lth = _per_frame_rank(frame, pm, valid, L, n_frames)
        keep = pm <= lth[frame]
        root, beta, pm, valid = root[keep], beta[keep], pm[keep], valid[keep]
        cap = select_best(st.frame[root], pm, RSR1_PATH_CAP * L)
        root, beta, pm, valid = root[cap], beta[cap], pm[cap], valid[cap]
        if done.all():
            break
    keep = np.flatnonzero(valid)
    keep = keep[select_best(st.frame[root[keep]], pm[keep], L)]
    counts = np.bincount(st.frame[root[keep]], minlength=n_frames)
    return NodeDecodeResult(st.parent[root[keep]], beta[keep], pm[keep], tau=tau,
                            deficit=np.maximum(L - counts, 0))


def _unique_rows(key: np.ndarray) -> np.ndarray:
    """Indices of first occurrences of distinct rows, in input order."""
    if len(key) == 0:
        return np.zeros(0, dtype=np.int64)
    _, first = np.unique(key, axis=0, return_index=True)
    return np.sort(first)


def rsr1_stage2_fpl(st: Stage1Result, node, L: int, upsilon: int | None = None) -> NodeDecodeResult:
    """Pre-split each path on its smallest modified LLRs, then repair the S-PCs with flip coordinates."""
    P = len(st)
    n_p = st.alpha.shape[1]
    n_q = st.n_q
    ups = L - 1 if upsilon is None else upsilon
    ups = min(ups, _n_steps(st))
    delta = modified_llr(st)
    order = np.argsort(delta, axis=1, kind="stable")
    dsorted = np.take_along_axis(delta, order, axis=1)
    # variants: o = 0 is the parent, o >= 1 flips the pair at the o-th smallest modified LLR
    v_root = np.repeat(np.arange(P), ups + 1)
    v_o = np.tile(np.arange(ups + 1), P)
    v_beta = st.beta[v_root].copy()
    v_pm = st.pm[v_root].copy()
    sel = np.flatnonzero(v_o > 0)
    pos = order[v_root[sel], v_o[sel] - 1]
    _apply_pair(v_beta, sel, pos, _partner(st, v_root[sel], pos))
    v_pm[sel] += dsorted[v_root[sel], v_o[sel] - 1]
    syn = spc_syndrome(v_beta, node)
    fcs = gen_fcs(node)
    gain = flip_gain(st.alpha[v_root], v_beta)
    c_var, c_pm, c_p1, c_p2 = [np.flatnonzero(syn == 0)], [v_pm[syn == 0]], [], []
    c_p1.append(np.full(len(c_var[0]), -1))
    c_p2.append(np.full(len(c_var[0]), -1))
    ks = np.arange(n_q)
    for s in np.unique(syn[syn != 0]):
        pairs = np.asarray(fcs.for_syndrome(int(s)), dtype=np.int64)
        p1 = (pairs[:, 0:1] * n_q + ks).ravel()
        p2 = (pairs[:, 1:2] * n_q + ks).ravel()
        vs = np.flatnonzero(syn == s)
        lam = gain[vs][:, p1] + gain[vs][:, p2]
        c_var.append(np.repeat(vs, len(p1)))
        c_pm.append((v_pm[vs][:, None] + lam).ravel())
        c_p1.append(np.tile(p1, len(vs)))
        c_p2.append(np.tile(p2, len(vs)))
    var = np.concatenate(c_var)
    pm = np.concatenate(c_pm)
    p1 = np.concatenate(c_p1)
    p2 = np.concatenate(c_p2)
    frame = st.frame[v_root[var]]
    # materialise only the best few per frame, widening until L distinct codewords survive
    width = 2 * L
    while True:
        top = select_best(frame, pm, width)
        beta = v_beta[var[top]].copy()
        fix = np.flatnonzero(p1[top] >= 0)
        beta[fix, p1[top][fix]] ^= 1
        beta[fix, p2[top][fix]] ^= 1
        roots = v_root[var[top]]
        uniq = _unique_rows(np.concatenate([roots[:, None], beta.astype(np.int64)], axis=1))
        counts = np.bincount(frame[top][uniq], minlength=int(frame.max()) + 1 if len(frame) else 0)
        avail = np.bincount(frame, minlength=len(counts))
        if np.all((counts >= L) | (avail <= width)):
            break
        width *= 2
    top, beta = top[uniq], beta[uniq]
    keep = select_best(frame[top], pm[top], L)
    top, beta = top[keep], beta[keep]
    return NodeDecodeResult(st.parent[v_root[var[top]]], beta, pm[top])


def decode_sr1spc(paths: PathList, node, alpha: np.ndarray, L: int, cfg: Stage2Config = Stage2Config(),
                  mode: str = "hwf", source_decoder=None) -> NodeDecodeResult:
    st = stage1_decode(paths, node, alpha, L, mode, source_decoder)
    if not node.spc_levels:
        if cfg.variant == "fsl":
            return sr1_stage2_fsl(st, L, cfg.t_max)
        return sr1_stage2_fpl(st, L, cfg.i_max)
    if cfg.variant == "fsl":
        # the step cap is an SR1 knob: truncating the RSR1 search drops paths still failing an S-PC
        return rsr1_stage2_fsl(st, node, L, None, cfg.rsr1_rule)
    return rsr1_stage2_fpl(st, node, L, cfg.upsilon)
