"""Time-step counts per node and per codeword for the baseline and proposed list decoders.

Counting rules: parallel operations take one step, real additions (f/g
LLR updates) take one step, hard decisions and bit operations are free.
Every generic tree node costs two steps (one f and one g update).
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .mcs import fit_to_size, gen_fcs, gen_mcs_r1, gen_mcs_spc, restrict_mcs
from .nodes import NodeKind, NodeType, TreeNode, build_tree

LATENCY_VARIANTS = ("sota-tsp17", "sota-tcom19", "sota-cl21", "sota-tsp22", "fsl", "fpl-f", "fpl-p", "ca-scl")
SOTA = ("sota-tsp17", "sota-tcom19", "sota-cl21", "sota-tsp22")


@dataclass(frozen=True)
class LatencyConfig:
    """``tau`` maps node offset to the measured mean step count of an RSR1 FSL node.

    Missing entries fall back to the worst case N_p - N_q.
    """

    t_max: int | None = None
    i_max: int | None = None
    upsilon: int | None = None  # default L - 1
    tau: dict = field(default_factory=dict)
    max_source: int = 16


def _clog2(x: float) -> int:
    return max(0, math.ceil(math.log2(x))) if x > 0 else 0


def _check_variant(variant: str) -> None:
    if variant not in LATENCY_VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; choose from {LATENCY_VARIANTS}")


def _mcs_size_spc(L: int, n_bits: int, i_max: int | None) -> int:
    sizes = []
    for g in (0, 1):
        c = fit_to_size(gen_mcs_spc(L, g), n_bits)
        if i_max is not None:
            c = restrict_mcs(c, i_max)
        sizes.append(len(c))
    return max(sizes)


def _mcs_size_r1(L: int, n_bits: int, i_max: int | None) -> int:
    c = fit_to_size(gen_mcs_r1(L), n_bits)
    if i_max is not None:
        c = restrict_mcs(c, i_max)
    return len(c)


def _r1_steps(variant: str, L: int, n: int, cfg: LatencyConfig) -> int:
    if variant == "sota-cl21" or variant == "fpl-f":
        return 1
    if variant == "fpl-p":
        return _clog2(_mcs_size_r1(L, n, cfg.i_max))
    if variant == "fsl":
        return 1 + min(L - 1, n)
    return min(L - 1, n)


def _spc_steps(variant: str, L: int, n: int, cfg: LatencyConfig) -> int:
    if variant == "fpl-f":
        return 1
    if variant == "fpl-p":
        return _clog2(_mcs_size_spc(L, n, cfg.i_max))
    return min(L, n)


def source_steps(ntype: NodeType, variant: str, L: int, cfg: LatencyConfig = LatencyConfig()) -> int:
    """Steps to decode the source of a sequence node, segmented as ``variant`` would."""
    from .decoder import variant_policy

    tree = build_tree(np.asarray(ntype.source_pattern), variant_policy(variant, cfg.max_source))
    return _subtree_steps(tree.root, variant, L, cfg)


def _sequence_sota(ntype: NodeType, variant: str, L: int, t_q: int) -> int:
    # source, then one f and one g per level, then each descendant on its own
    desc = sum(min(L, 1 << s) for s in ntype.spc_levels)
    if variant == "sota-cl21":
        desc += len(ntype.r1_levels)
    else:
        desc += sum(min(L - 1, 1 << s) for s in ntype.r1_levels)
    return t_q + 2 * (ntype.p - ntype.q) + desc


def node_steps(node, variant: str, L: int, cfg: LatencyConfig = LatencyConfig(), t_q: int | None = None) -> int:
    """Steps for one special node; ``node`` is a ``TreeNode`` or a ``NodeType``.

    ``t_q`` overrides the source cost of sequence nodes.
    """
    _check_variant(variant)
    tree_node = node if isinstance(node, TreeNode) else None
    nt = node.ntype if tree_node is not None else node
    n = nt.size
    kind = nt.kind
    if kind is NodeKind.R0:
        return 1
    if kind is NodeKind.REP:
        return 2
    if kind is NodeKind.R1:
        return _r1_steps(variant, L, n, cfg)
    if kind is NodeKind.SPC:
        return _spc_steps(variant, L, n, cfg)
    if kind is NodeKind.GENERIC:
        if tree_node is None:
            raise ValueError("generic nodes need their subtree")
        return _subtree_steps(tree_node, variant, L, cfg)
    if t_q is None:
        if tree_node is not None and tree_node.source is not None:
            t_q = _subtree_steps(tree_node.source, variant, L, cfg)
        else:
            t_q = source_steps(nt, variant, L, cfg)
    if kind is NodeKind.SR0REP:
        return t_q + 2
    n_q = nt.source_size
    if variant in SOTA or variant == "ca-scl":
        if variant == "sota-tcom19" and nt.type34 is not None:
            return 1 + min(L - 1, n - (2 if nt.type34 == 3 else 4))
        if variant == "sota-tsp22" and nt.is_gpc:
            return 1 + min(L - 1, n - n_q)
        return _sequence_sota(nt, variant, L, t_q)
    if not nt.spc_levels:
        if variant == "fsl":
            steps = min(L - 1, n - n_q)
            if cfg.t_max is not None:
                steps = min(steps, cfg.t_max)
            return t_q + 1 + steps
        if variant == "fpl-f":
            return t_q + 3
        c_spc = _mcs_size_spc(L, n // n_q, cfg.i_max)
        c_r1 = _mcs_size_r1(L, n, cfg.i_max)
        return t_q + 1 + _clog2(n_q * c_spc / L) + _clog2(c_r1)
    if variant == "fsl":
        offset = tree_node.offset if tree_node is not None else None
        tau = cfg.tau.get(offset, n - n_q)
        return t_q + 1 + math.ceil(tau)
    if variant == "fpl-f":
        return t_q + 4
    ups = L - 1 if cfg.upsilon is None else cfg.upsilon
    return t_q + 3 + _clog2((1 + ups) * len(gen_fcs(nt)))


def _subtree_steps(node: TreeNode, variant: str, L: int, cfg: LatencyConfig) -> int:
    if node.kind is NodeKind.GENERIC:
        return 2 + _subtree_steps(node.left, variant, L, cfg) + _subtree_steps(node.right, variant, L, cfg)
    return node_steps(node, variant, L, cfg)


@dataclass
class LatencyReport:
    variant: str
    L: int
    rows: list  # (node_id, type, steps) per top-level special node
    edge_steps: int
    cfg: LatencyConfig = LatencyConfig()

    @property
    def node_total(self) -> int:
        return sum(r[2] for r in self.rows)

    @property
    def total(self) -> int:
        return self.node_total + self.edge_steps

    def reduction_vs(self, baseline: "LatencyReport") -> float:
        """Fractional saving of this variant relative to ``baseline``."""
        return 1.0 - self.total / baseline.total

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["node_id", "type", "variant", "steps"])
        for node_id, typ, steps in self.rows:
            w.writerow([node_id, typ, self.variant, steps])
        w.writerow(["edges", "f/g", self.variant, self.edge_steps])
        w.writerow(["total", "", self.variant, self.total])
        return buf.getvalue()


def _count_generic(node: TreeNode) -> int:
    if node.kind is not NodeKind.GENERIC:
        return 0
    return 1 + _count_generic(node.left) + _count_generic(node.right)


def total_steps(tree_or_spec, variant: str, L: int, cfg: LatencyConfig = LatencyConfig()) -> LatencyReport:
    """Per-node and total steps; a bare code is segmented with the variant's own node set."""
    from .decoder import variant_policy

    _check_variant(variant)
    if hasattr(tree_or_spec, "root"):
        tree = tree_or_spec
    else:
        tree = build_tree(tree_or_spec, variant_policy(variant, cfg.max_source))
    rows = [(n.offset, n.ntype.subtype, node_steps(n, variant, L, cfg)) for n in tree.nodes()]
    return LatencyReport(variant, L, rows, 2 * _count_generic(tree.root), cfg)
