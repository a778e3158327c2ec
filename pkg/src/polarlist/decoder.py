"""Tree-walking list decoder that dispatches special nodes to their fast decoders."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from .fastnodes import (decode_r0_list, decode_r1_fpl, decode_r1_fsl, decode_rep_list, decode_spc_fpl,
                        decode_spc_fsl)
from .kernel import f_llr, g_llr
from .nodes import NodeKind, SegmentationPolicy, build_tree
from .scl import NodeDecodeResult, PathList, combine, decode_ca_scl, decode_span_bitwise, select_codeword
from .sr1spc import Stage2Config, decode_sr1spc

VARIANTS = ("ca-scl", "fsl", "fpl-f", "fpl-p", "sota-tsp17", "sota-tcom19", "sota-cl21", "sota-tsp22")


def variant_policy(variant: str, max_source: int = 16) -> SegmentationPolicy:
    """Node types each decoder family can handle natively."""
    if variant in ("fsl", "fpl-f", "fpl-p"):
        return SegmentationPolicy(max_source=max_source)
    if variant == "sota-tsp22":
        return SegmentationPolicy(sr1spc="gpc", max_source=max_source)
    if variant == "sota-tcom19":
        return SegmentationPolicy(sr0rep=False, sr1spc="type34", max_source=max_source)
    if variant in ("sota-tsp17", "sota-cl21"):
        return SegmentationPolicy(sr0rep=False, sr1spc="none", max_source=max_source)
    if variant == "ca-scl":
        return SegmentationPolicy(r0=False, r1=False, rep=False, spc=False, sr0rep=False, sr1spc="none")
    raise ValueError(f"unknown variant {variant!r}")


@dataclass(frozen=True)
class DecoderConfig:
    variant: str = "fsl"
    L: int = 8
    mode: str = "hwf"
    t_max: int | None = None
    i_max: int | None = None
    upsilon: int | None = None
    rsr1_rule: str = "bound"
    max_source: int = 16
    generic_nodes: bool = False  # decode every special node bit by bit (reference mode)

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}; choose from {VARIANTS}")
        if self.L < 1 or self.L & (self.L - 1):
            raise ValueError("L must be a power of two")
        if self.mode not in ("hwf", "exact"):
            raise ValueError(f"unknown PM mode {self.mode!r}")

    @property
    def parallel(self) -> bool:
        return self.variant in ("fpl-f", "fpl-p") or self.variant == "sota-cl21"

    def stage2(self) -> Stage2Config:
        fpl = self.variant in ("fpl-f", "fpl-p")
        return Stage2Config(variant="fpl" if fpl else "fsl", t_max=self.t_max, upsilon=self.upsilon,
                            i_max=self.i_max, rsr1_rule=self.rsr1_rule,
                            sorter="pipeline_layered" if self.variant == "fpl-p" else "full_rank")


@dataclass
class ListDecoder:
    spec: object
    cfg: DecoderConfig = DecoderConfig()
    tau_log: dict = field(default_factory=lambda: defaultdict(list))

    def __post_init__(self):
        self.tree = build_tree(self.spec, variant_policy(self.cfg.variant, self.cfg.max_source))
        self._stage2 = self.cfg.stage2()

    def decode(self, llrs, return_paths: bool = False):
        """Message estimate(s) with CRC removed; ``llrs`` is (N,) or (B, N)."""
        if self.cfg.variant == "ca-scl":
            return decode_ca_scl(llrs, self.spec, self.cfg.L, self.cfg.mode, return_paths)
        llrs = np.asarray(llrs, dtype=float)
        single = llrs.ndim == 1
        batch = llrs[None, :] if single else llrs
        if batch.shape[1] != self.spec.N:
            raise ValueError(f"expected {self.spec.N} LLRs per frame")
        paths = PathList.fresh(batch.shape[0])
        res = self.decode_node(paths, batch, self.tree.root)
        frame = paths.frame[res.parent]
        msg = select_codeword(self.spec, frame, res.pm, res.beta, batch.shape[0])
        out = msg[0] if single else msg
        return (out, res) if return_paths else out

    def decode_node(self, paths: PathList, alpha: np.ndarray, node) -> NodeDecodeResult:
        cfg = self.cfg
        L, mode = cfg.L, cfg.mode
        kind = node.kind
        if kind is NodeKind.GENERIC:
            return self._fg(paths, alpha, lambda p, a: self.decode_node(p, a, node.left),
                            lambda p, a: self.decode_node(p, a, node.right))
        if cfg.generic_nodes:
            pattern = np.asarray(node.ntype.pattern, dtype=np.uint8)
            return decode_span_bitwise(paths, alpha, pattern, L, mode)
        if kind is NodeKind.R0:
            return decode_r0_list(paths, alpha, L, mode)
        if kind is NodeKind.REP:
            return decode_rep_list(paths, alpha, L, mode)
        if kind is NodeKind.R1:
            if cfg.parallel:
                return decode_r1_fpl(paths, alpha, L, mode, cfg.i_max)
            return decode_r1_fsl(paths, alpha, L, mode)
        if kind is NodeKind.SPC:
            if cfg.variant in ("fpl-f", "fpl-p"):
                return decode_spc_fpl(paths, alpha, L, mode, cfg.i_max)
            return decode_spc_fsl(paths, alpha, L, mode)
        if kind is NodeKind.SR0REP:
            return self._sr0rep(paths, alpha, node, node.ntype.p)
        if kind is NodeKind.SR1SPC:
            res = decode_sr1spc(paths, node.ntype, alpha, L, self._stage2, mode,
                                source_decoder=lambda p, a: self.decode_node(p, a, node.source))
            if res.tau is not None:
                self.tau_log[node.offset].extend(res.tau[np.unique(paths.frame)].tolist())
            return res
        raise ValueError(f"unhandled node kind {kind}")

    @staticmethod
    def _fg(paths, alpha, dec_left, dec_right) -> NodeDecodeResult:
        h = alpha.shape[1] // 2
        a, b = alpha[:, :h], alpha[:, h:]
        left = dec_left(paths, f_llr(a, b))
        p = left.parent
        right = dec_right(paths.take(p, left.pm), g_llr(a[p], b[p], left.beta))
        return combine(left, right)

    def _sr0rep(self, paths, alpha, node, s: int) -> NodeDecodeResult:
        # leading descendant (R0 or REP) on the left, the rest of the sequence on the right
        nt = node.ntype
        if s == nt.q:
            return self.decode_node(paths, alpha, node.source)
        desc = decode_rep_list if (s - 1) in nt.rep_levels else decode_r0_list
        L, mode = self.cfg.L, self.cfg.mode
        return self._fg(paths, alpha, lambda p, a: desc(p, a, L, mode),
                        lambda p, a: self._sr0rep(p, a, node, s - 1))

    def tau_means(self) -> dict[int, float]:
        return {k: float(np.mean(v)) for k, v in self.tau_log.items() if v}
