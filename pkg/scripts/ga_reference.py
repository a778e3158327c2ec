"""Independent Gaussian-approximation construction in 40-digit arithmetic.

Writes the frozen set of a CRC-aided code to a JSON golden file.  Does not
import polarlist; the bit-channel recursion is index-based (i -> 2i, 2i+1)
rather than level-by-level list doubling.
"""

import argparse
import json

import mpmath as mp

mp.mp.dps = 40
A, B, C = mp.mpf("-0.4527"), mp.mpf("0.86"), mp.mpf("0.0218")


def phi(x):
    if x <= 0:
        return mp.mpf(1)
    if x < 10:
        return mp.e ** (A * x**B + C)
    return mp.sqrt(mp.pi / x) * mp.e ** (-x / 4) * (1 - mp.mpf(10) / (7 * x))


def phi_inv(y):
    # the two-piece phi jumps at 10, so bisect instead of root-polishing
    lo, hi = mp.mpf(0), mp.mpf(1)
    while phi(hi) > y:
        hi *= 2
    for _ in range(140):
        mid = (lo + hi) / 2
        if phi(mid) > y:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def means(n, ebn0_db, rate):
    sigma2 = 1 / (2 * rate * mp.mpf(10) ** (mp.mpf(ebn0_db) / 10))
    z = {1: 2 / sigma2}  # heap numbering: node i has children 2i (check) and 2i+1 (variable)
    for i in range(1, 2 ** n):
        m = z[i]
        p = phi(m)
        z[2 * i] = phi_inv(2 * p - p * p)  # 1 - (1 - p)^2 without cancellation
        z[2 * i + 1] = 2 * m
    return [z[2 ** n + j] for j in range(2 ** n)]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--N", type=int, default=1024)
    ap.add_argument("--K", type=int, default=768)
    ap.add_argument("--r", type=int, default=8)
    ap.add_argument("--snr", type=float, default=2.0)
    ap.add_argument("--out", default="tests/data/frozen_1024_768_8.json")
    a = ap.parse_args()
    n = a.N.bit_length() - 1
    m = means(n, a.snr, mp.mpf(a.K) / a.N)
    order = sorted(range(a.N), key=lambda j: (m[j], j))
    info = sorted(order[-a.K:])
    frozen = sorted(set(range(a.N)) - set(info))
    gap = m[order[a.N - a.K]] / m[order[a.N - a.K - 1]]
    with open(a.out, "w") as fh:
        json.dump({"n": n, "K": a.K, "r": a.r, "design_snr_db": a.snr, "frozen": frozen,
                   "boundary_ratio": float(gap)}, fh)
    print(f"wrote {a.out}: {len(frozen)} frozen, boundary mean ratio {float(gap):.6f}")


if __name__ == "__main__":
    main()
