"""Monte Carlo FER/BER simulation over BPSK-AWGN with optional paired decoder runs."""

from __future__ import annotations

import csv
import io
import json
import time
from collections import Counter
from dataclasses import dataclass, field
from statistics import NormalDist

import numpy as np

from .construction import CodeSpec, _cached_crc_matrix
from .decoder import DecoderConfig, ListDecoder
from .kernel import polar_transform


def noise_sigma2(ebn0_db: float, rate: float) -> float:
    return 1.0 / (2.0 * rate * 10.0 ** (ebn0_db / 10.0))


def awgn_llr(x, ebn0_db: float, rate: float, rng: np.random.Generator) -> np.ndarray:
    """Channel LLRs 2y/sigma^2 for BPSK symbols 1 - 2x plus white Gaussian noise."""
    x = np.asarray(x, dtype=np.uint8)
    sigma2 = noise_sigma2(ebn0_db, rate)
    y = 1.0 - 2.0 * x + rng.normal(0.0, np.sqrt(sigma2), x.shape)
    return 2.0 * y / sigma2


def wilson_ci(errors: int, frames: int, level: float = 0.95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if frames == 0:
        return 0.0, 1.0
    z = NormalDist().inv_cdf(0.5 + level / 2)
    p = errors / frames
    den = 1 + z * z / frames
    mid = (p + z * z / (2 * frames)) / den
    half = z * np.sqrt(p * (1 - p) / frames + z * z / (4 * frames * frames)) / den
    return max(0.0, mid - half), min(1.0, mid + half)


def random_frames(spec: CodeSpec, n: int, rng: np.random.Generator):
    """Random messages and their codewords, CRC attached."""
    msg = rng.integers(0, 2, (n, spec.k_msg), dtype=np.uint8)
    if spec.r:
        par = (msg.astype(np.int64) @ _cached_crc_matrix(spec.k_msg, tuple(spec.crc_poly))) & 1
        info = np.concatenate([msg, par.astype(np.uint8)], axis=1)
    else:
        info = msg
    u = np.zeros((n, spec.N), dtype=np.uint8)
    u[:, spec.info_set] = info
    return msg, polar_transform(u)


@dataclass
class SimConfig:
    spec: CodeSpec
    decoder: DecoderConfig = DecoderConfig()
    ebn0_db: tuple = (2.0,)
    max_frames: int = 10_000
    max_errors: int | None = 100  # early stop per point; None runs the full budget
    min_frames: int = 0
    batch: int = 200
    seed: int = 0
    baseline: DecoderConfig | None = None  # paired run on the same noise
    rate: float | None = None  # defaults to K / N, CRC included

    def __post_init__(self):
        if self.max_frames < 0 or self.batch < 1:
            raise ValueError("frame budget must be >= 0 and batch >= 1")
        if self.max_errors is not None and self.max_errors < 1:
            raise ValueError("error budget must be positive")
        if len(self.ebn0_db) == 0:
            raise ValueError("empty Eb/N0 grid")

    @property
    def code_rate(self) -> float:
        return self.rate if self.rate is not None else self.spec.K / self.spec.N


@dataclass
class SimPoint:
    snr_db: float
    frames: int = 0
    errors: int = 0
    bit_errors: int = 0
    bits: int = 0
    base_errors: int | None = None
    disagreements: int | None = None
    tau: dict = field(default_factory=dict)  # node offset -> {steps: count}

    @property
    def fer(self) -> float:
        return self.errors / self.frames if self.frames else 0.0

    @property
    def ber(self) -> float:
        return self.bit_errors / self.bits if self.bits else 0.0

    @property
    def ci(self) -> tuple[float, float]:
        return wilson_ci(self.errors, self.frames)

    @property
    def base_fer(self) -> float | None:
        if self.base_errors is None:
            return None
        return self.base_errors / self.frames if self.frames else 0.0

    def tau_mean(self) -> dict[int, float]:
        out = {}
        for off, hist in self.tau.items():
            n = sum(hist.values())
            out[off] = sum(k * v for k, v in hist.items()) / n if n else 0.0
        return out

    def row(self) -> dict:
        lo, hi = self.ci
        return {"snr_db": self.snr_db, "frames": self.frames, "errors": self.errors,
                "fer": self.fer, "ber": self.ber, "ci_lo": lo, "ci_hi": hi}


@dataclass
class SimResult:
    points: list
    variant: str
    wall_s: float = 0.0

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=["snr_db", "frames", "errors", "fer", "ber", "ci_lo", "ci_hi"],
                           lineterminator="\n")
        w.writeheader()
        for p in self.points:
            w.writerow(p.row())
        return buf.getvalue()

    def to_json(self) -> str:
        pts = []
        for p in self.points:
            d = p.row()
            if p.disagreements is not None:
                d["base_errors"] = p.base_errors
                d["disagreements"] = p.disagreements
            if p.tau:
                d["tau_mean"] = {str(k): v for k, v in p.tau_mean().items()}
            pts.append(d)
        return json.dumps({"variant": self.variant, "wall_s": self.wall_s, "points": pts}, indent=2)


def _batch_rng(seed: int, point: int, batch: int) -> np.random.Generator:
    # every batch has its own stream so paired runs replay identical noise
    return np.random.default_rng(np.random.SeedSequence([seed, point, batch]))


def run_fer(cfg: SimConfig) -> SimResult:
    t0 = time.perf_counter()
    spec = cfg.spec
    dec = ListDecoder(spec, cfg.decoder)
    base = ListDecoder(spec, cfg.baseline) if cfg.baseline is not None else None
    points = []
    for pi, snr in enumerate(cfg.ebn0_db):
        pt = SimPoint(float(snr))
        if base is not None:
            pt.base_errors, pt.disagreements = 0, 0
        dec.tau_log.clear()
        b = 0
        while pt.frames < cfg.max_frames:
            if (cfg.max_errors is not None and pt.errors >= cfg.max_errors
                    and (pt.base_errors is None or pt.base_errors >= cfg.max_errors)
                    and pt.frames >= cfg.min_frames):
                break
            n = min(cfg.batch, cfg.max_frames - pt.frames)
            rng = _batch_rng(cfg.seed, pi, b)
            msg, x = random_frames(spec, n, rng)
            llr = awgn_llr(x, snr, cfg.code_rate, rng)
            est = dec.decode(llr)
            wrong = np.any(est != msg, axis=1)
            pt.frames += n
            pt.errors += int(wrong.sum())
            pt.bit_errors += int((est != msg).sum())
            pt.bits += msg.size
            if base is not None:
                ref = base.decode(llr)
                pt.base_errors += int(np.any(ref != msg, axis=1).sum())
                pt.disagreements += int(np.any(ref != est, axis=1).sum())
            b += 1
        pt.tau = {off: dict(Counter(v)) for off, v in dec.tau_log.items()}
        points.append(pt)
    return SimResult(points, cfg.decoder.variant, time.perf_counter() - t0)


def measure_tau(spec: CodeSpec, L: int, ebn0_db: float = 2.0, frames: int = 1000, seed: int = 0,
                **decoder_kw) -> dict[int, float]:
    """Mean stage-II step count of every RSR1 node under FSL decoding."""
    cfg = SimConfig(spec, DecoderConfig(variant="fsl", L=L, **decoder_kw), (ebn0_db,), max_frames=frames,
                    max_errors=None, seed=seed)
    return run_fer(cfg).points[0].tau_mean()
