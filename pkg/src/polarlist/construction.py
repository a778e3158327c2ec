"""Code construction: Gaussian-approximation reliability order, frozen sets, CRC."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

# x^8 + x^7 + x^4 + x^3 + x + 1, MSB first, leading term included
CRC8_POLY = (1, 1, 0, 0, 1, 1, 0, 1, 1)

_PHI_SPLIT = 10.0
_A, _B, _C = -0.4527, 0.86, 0.0218


def _log_phi(x: float) -> float:
    """ln of the GA phi function (Chung's two-piece approximation)."""
    if x <= 0.0:
        return 0.0
    if x < _PHI_SPLIT:
        return _A * x**_B + _C
    return 0.5 * math.log(math.pi / x) - x / 4.0 + math.log1p(-10.0 / (7.0 * x))


def _inv_log_phi(target: float) -> float:
    # _log_phi is strictly decreasing on (0, inf); bisect in x
    if target >= 0.0:
        return 0.0
    lo, hi = 0.0, 1.0
    while _log_phi(hi) > target:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _log_phi(mid) > target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-12 * max(1.0, hi):
            break
    return 0.5 * (lo + hi)


def _check_mean(m: float) -> float:
    # phi^-1(1 - (1 - phi(m))^2), evaluated in the log domain to survive large m
    lp = _log_phi(m)
    p = math.exp(lp)
    return _inv_log_phi(lp + math.log(2.0 - p))


@dataclass(frozen=True)
class ReliabilitySequence:
    """Bit-channel indices (0-based) in ascending reliability."""

    order: tuple[int, ...]

    @property
    def n_bits(self) -> int:
        return len(self.order)

    def most_reliable(self, k: int) -> np.ndarray:
        if k == 0:
            return np.zeros(0, dtype=np.int64)
        return np.sort(np.asarray(self.order[-k:], dtype=np.int64))

    def to_json(self) -> str:
        return json.dumps({"N": self.n_bits, "order": list(self.order)})

    @classmethod
    def from_json(cls, text: str) -> "ReliabilitySequence":
        data = json.loads(text)
        order = tuple(int(i) for i in data["order"])
        if sorted(order) != list(range(len(order))):
            raise ValueError("reliability order is not a permutation")
        return cls(order)

    @classmethod
    def load(cls, path: str | Path) -> "ReliabilitySequence":
        return cls.from_json(Path(path).read_text())


def ga_means(n: int, design_snr_db: float = 2.0, rate: float = 1.0) -> np.ndarray:
    """Mean LLR of every bit-channel under the Gaussian approximation.

    ``design_snr_db`` is Eb/N0; with ``rate=1`` it is the symbol SNR.  Index
    ``i`` is read MSB first: a 0 bit takes the check-node (f) branch.
    """
    if not 1 <= n <= 20:
        raise ValueError(f"n must be in [1, 20], got {n}")
    sigma2 = 1.0 / (2.0 * rate * 10.0 ** (design_snr_db / 10.0))
    means = [2.0 / sigma2]
    for _ in range(n):
        nxt = []
        for m in means:
            nxt.append(_check_mean(m))
            nxt.append(2.0 * m)
        means = nxt
    return np.asarray(means)


def build_reliability(n: int, design_snr_db: float = 2.0, rate: float = 1.0) -> ReliabilitySequence:
    means = ga_means(n, design_snr_db, rate)
    # stable: equal means keep natural order, lower index counted less reliable
    order = np.argsort(means, kind="stable")
    return ReliabilitySequence(tuple(int(i) for i in order))


@dataclass(frozen=True)
class CodeSpec:
    """A CRC-aided polar code P(N, K, r).

    ``K`` counts message plus CRC bits; ``indicator[i] == 1`` marks an
    information position.
    """

    n: int
    K: int
    r: int
    indicator: np.ndarray = field(repr=False)
    crc_poly: tuple[int, ...] = CRC8_POLY

    def __post_init__(self):
        ind = np.asarray(self.indicator, dtype=np.uint8)
        ind.setflags(write=False)
        object.__setattr__(self, "indicator", ind)
        if ind.shape != (self.N,):
            raise ValueError(f"indicator must have length {self.N}")
        if int(ind.sum()) != self.K:
            raise ValueError("indicator weight differs from K")
        if not 0 <= self.K <= self.N:
            raise ValueError("need 0 <= K <= N")
        if self.r and not self.r < self.K:
            raise ValueError("need r < K")
        if self.r and len(self.crc_poly) != self.r + 1:
            raise ValueError("CRC polynomial degree must equal r")

    @property
    def N(self) -> int:
        return 1 << self.n

    @property
    def k_msg(self) -> int:
        return self.K - self.r

    @property
    def info_set(self) -> np.ndarray:
        return np.flatnonzero(self.indicator)

    @property
    def frozen_set(self) -> np.ndarray:
        return np.flatnonzero(self.indicator == 0)

    def crc_attach(self, msg) -> np.ndarray:
        if len(msg) != self.k_msg:
            raise ValueError(f"message must have {self.k_msg} bits, got {len(msg)}")
        return crc_attach(msg, self.crc_poly if self.r else ())

    def crc_check(self, bits) -> bool:
        if len(bits) != self.K:
            raise ValueError(f"word must have {self.K} bits, got {len(bits)}")
        return crc_check(bits, self.crc_poly if self.r else ())

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "K": self.K,
            "r": self.r,
            "frozen": [int(i) for i in self.frozen_set],
            "crc_poly": list(self.crc_poly),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "CodeSpec":
        n = int(data["n"])
        ind = np.ones(1 << n, dtype=np.uint8)
        ind[np.asarray(data["frozen"], dtype=np.int64)] = 0
        poly = tuple(data.get("crc_poly", CRC8_POLY))
        return cls(n=n, K=int(data["K"]), r=int(data["r"]), indicator=ind, crc_poly=poly)

    @classmethod
    def from_json(cls, text: str) -> "CodeSpec":
        return cls.from_dict(json.loads(text))


def make_code_spec(N: int, K: int, r: int = 0, seq: ReliabilitySequence | None = None,
                   crc_poly=CRC8_POLY, design_snr_db: float = 2.0) -> CodeSpec:
    if N < 1 or N & (N - 1):
        raise ValueError(f"N must be a power of two, got {N}")
    if not 0 <= K <= N:
        raise ValueError(f"need 0 <= K <= N, got K={K}, N={N}")
    if r and r >= K:
        raise ValueError(f"need r < K, got r={r}, K={K}")
    n = N.bit_length() - 1
    if seq is None:
        seq = build_reliability(n, design_snr_db, rate=K / N if K else 1.0)
    if seq.n_bits != N:
        raise ValueError("reliability sequence length differs from N")
    ind = np.zeros(N, dtype=np.uint8)
    ind[seq.most_reliable(K)] = 1
    return CodeSpec(n=n, K=K, r=r, indicator=ind, crc_poly=tuple(crc_poly))


def _crc_remainder(bits: np.ndarray, poly: tuple[int, ...]) -> np.ndarray:
    r = len(poly) - 1
    g = np.asarray(poly, dtype=np.uint8)
    reg = np.concatenate([np.asarray(bits, dtype=np.uint8), np.zeros(r, dtype=np.uint8)])
    for i in range(len(bits)):
        if reg[i]:
            reg[i : i + r + 1] ^= g
    return reg[len(bits):]


def crc_attach(msg, poly: tuple[int, ...] = CRC8_POLY) -> np.ndarray:
    """Append the ``len(poly) - 1`` CRC remainder bits to ``msg``."""
    msg = np.asarray(msg, dtype=np.uint8)
    if len(poly) <= 1:
        return msg.copy()
    return np.concatenate([msg, _crc_remainder(msg, tuple(poly))])


def crc_check(bits, poly: tuple[int, ...] = CRC8_POLY) -> bool:
    bits = np.asarray(bits, dtype=np.uint8)
    r = len(poly) - 1
    if r <= 0:
        return True
    if len(bits) <= r:
        raise ValueError("word not longer than the CRC")
    return bool(np.array_equal(_crc_remainder(bits[:-r], tuple(poly)), bits[-r:]))


def crc_matrix(k: int, poly: tuple[int, ...] = CRC8_POLY) -> np.ndarray:
    """(k, r) matrix P with remainder(m) = m @ P mod 2, for batched checks."""
    r = len(poly) - 1
    eye = np.eye(k, dtype=np.uint8)
    return np.stack([_crc_remainder(row, tuple(poly)) for row in eye]) if r > 0 else np.zeros((k, 0), np.uint8)


def crc_check_batch(words: np.ndarray, poly: tuple[int, ...] = CRC8_POLY) -> np.ndarray:
    """Row-wise CRC check of a (B, k + r) bit array."""
    words = np.asarray(words, dtype=np.uint8)
    r = len(poly) - 1
    if r <= 0:
        return np.ones(words.shape[0], dtype=bool)
    k = words.shape[1] - r
    rem = (words[:, :k].astype(np.int64) @ _cached_crc_matrix(k, tuple(poly))) & 1
    return np.all(rem == words[:, k:], axis=1)


@lru_cache(maxsize=None)
def _cached_crc_matrix(k: int, poly: tuple[int, ...]) -> np.ndarray:
    return crc_matrix(k, poly).astype(np.int64)
