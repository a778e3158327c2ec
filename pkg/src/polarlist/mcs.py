"""Minimum-combination sets (MCS) for R1/SPC nodes and flip-coordinate sets for RSR1 nodes.

A flip combination is a sorted tuple of 1-based reliability ranks: rank 1 is
the least reliable bit of the node.  Flip coordinates use 0-based positions
``(j1, j2, k)`` meaning node bits ``j1 * N_q + k`` and ``j2 * N_q + k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

FlipCombination = tuple  # sorted tuple of 1-based ranks


def dominates(g: tuple, f: tuple) -> bool:
    """True when sigma_g <= sigma_f for every non-negative ascending weight vector.

    Holds iff ``g`` injects into the largest elements of ``f`` elementwise.
    """
    a, b = len(g), len(f)
    if a > b:
        return False
    off = b - a
    return all(g[i] <= f[off + i] for i in range(a))


def num_dominators(f, pool) -> int:
    """Number of members of ``pool`` (other than ``f``) that are never less reliable than ``f``."""
    f = tuple(sorted(f))
    return sum(1 for g in pool if tuple(g) != f and dominates(tuple(g), f))


def _log2(L: int) -> int:
    if L < 1 or L & (L - 1):
        raise ValueError(f"L must be a power of two, got {L}")
    return L.bit_length() - 1


def max_flip_size(L: int, gamma: int) -> int:
    lg = _log2(L)
    if gamma == 0:
        return 2 * math.ceil((lg + 1) / 2)
    if gamma == 1:
        return 2 * math.ceil(lg / 2) + 1
    raise ValueError("gamma must be 0 or 1")


def _pool(universe: int, sizes) -> list[tuple]:
    out = []
    for s in sizes:
        out.extend(combinations(range(1, universe + 1), s))
    return out


def _count_bounded(caps: tuple) -> int:
    """Number of strictly increasing positive sequences with g_i <= caps[i]."""
    if not caps:
        return 1
    ways = {v: 1 for v in range(1, caps[0] + 1)}
    for cap in caps[1:]:
        nxt = {}
        acc = 0
        for v in range(1, cap + 1):
            nxt[v] = acc
            acc += ways.get(v, 0)
        ways = nxt
    return sum(ways.values())


def _num_fast(f: tuple, sizes) -> int:
    # dominators of size a are exactly the sequences capped by the top-a elements of f
    b = len(f)
    return sum(_count_bounded(f[b - a:]) for a in sizes if a <= b) - 1


def _select(pool: list[tuple], sizes, L: int) -> list[tuple]:
    return [f for f in pool if _num_fast(f, sizes) < L]


def _canon(sets) -> list[tuple]:
    return sorted((tuple(sorted(s)) for s in sets), key=lambda s: (len(s), s))


@lru_cache(maxsize=None)
def _mcs_spc(L: int, gamma: int) -> tuple:
    bound = max_flip_size(L, gamma)
    # the bound size itself is kept: strict counting admits it for some L
    sizes = [s for s in range(bound + 1) if s % 2 == gamma]
    return tuple(_canon(_select(_pool(L + 1, sizes), sizes, L)))


@lru_cache(maxsize=None)
def _mcs_r1(L: int) -> tuple:
    sizes = range(_log2(L) + 2)
    return tuple(_canon(_select(_pool(L + 1, sizes), sizes, L)))


def gen_mcs_spc(L: int, gamma: int = 0) -> list[tuple]:
    """MCS of an SPC node; ``gamma`` is the parity of the hard decisions."""
    if gamma not in (0, 1):
        raise ValueError("gamma must be 0 or 1")
    return list(_mcs_spc(L, gamma))


def mcs_odd_from_even(even) -> list[tuple]:
    return _canon(set(f) ^ {1} for f in even)


def gen_mcs_r1(L: int) -> list[tuple]:
    return list(_mcs_r1(L))


def restrict_mcs(mcs, i_max) -> list[tuple]:
    """Drop combinations whose rank sum exceeds ``i_max``."""
    return [tuple(f) for f in mcs if sum(f) <= i_max]


def fit_to_size(mcs, n_bits: int) -> list[tuple]:
    """Combinations that fit a node with ``n_bits`` bits."""
    return [f for f in mcs if not f or f[-1] <= n_bits]


@dataclass(frozen=True)
class FlipCoordinateSet:
    """Row pairs ``(j1, j2)`` that toggle a non-empty set of S-PC parities.

    Each pair is expanded over the subcode index ``k`` at decode time; the
    flip keeps every P-PC intact because both bits share the same ``k``.
    """

    n_rows: int
    n_cols: int
    mask: int
    pairs: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.pairs)

    def syndrome(self, j1: int, j2: int) -> int:
        return (j1 ^ j2) & self.mask

    def triples(self) -> list[tuple[int, int, int]]:
        return [(j1, j2, k) for j1, j2 in self.pairs for k in range(self.n_cols)]

    def for_syndrome(self, s: int) -> list[tuple[int, int]]:
        return [pr for pr in self.pairs if self.syndrome(*pr) == s]


def spc_mask(ntype) -> int:
    return sum(1 << (r - ntype.q) for r in ntype.spc_levels)


def gen_fcs(ntype) -> FlipCoordinateSet:
    from .nodes import NodeKind

    if ntype.kind is not NodeKind.SR1SPC or not ntype.spc_levels:
        raise ValueError("flip coordinates are only defined for RSR1 nodes")
    rows = 1 << (ntype.p - ntype.q)
    mask = spc_mask(ntype)
    pairs = [(j1, j2) for j1, j2 in combinations(range(rows), 2) if (j1 ^ j2) & mask]
    # fewest extra row flips first: popcount of the row difference bounds the penalty
    pairs.sort(key=lambda pr: (bin(pr[0] ^ pr[1]).count("1"), pr))
    return FlipCoordinateSet(rows, 1 << ntype.q, mask, tuple(pairs))
