"""Special-node taxonomy and decoding-tree segmentation.

Levels follow the tree convention: a node at level ``s`` spans ``2**s`` bits.
Inside an SR1/SPC node rooted at level ``p`` the source occupies
``[0, 2**q)`` and the descendant at level ``s`` (``q <= s < p``) occupies
``[2**s, 2**(s+1))``.  Inside an SR0/REP node the order is mirrored: the
level ``p-1`` descendant comes first and the source sits at the right end.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum

import numpy as np


class NodeKind(str, Enum):
    R0 = "R0"
    R1 = "R1"
    REP = "REP"
    SPC = "SPC"
    SR0REP = "SR0REP"
    SR1SPC = "SR1SPC"
    GENERIC = "Generic"


@dataclass(frozen=True)
class NodeType:
    kind: NodeKind
    p: int
    q: int | None = None
    # SR1SPC: descendant SPC levels; SR0REP: descendant REP levels
    spc_levels: tuple[int, ...] = ()
    r1_levels: tuple[int, ...] = ()
    rep_levels: tuple[int, ...] = ()
    r0_levels: tuple[int, ...] = ()
    pattern: tuple[int, ...] = field(default=(), repr=False, compare=False)

    @property
    def size(self) -> int:
        return 1 << self.p

    @property
    def source_size(self) -> int:
        return 1 << self.q

    @property
    def source_pattern(self) -> tuple[int, ...]:
        if self.kind is NodeKind.SR1SPC:
            return self.pattern[: self.source_size]
        if self.kind is NodeKind.SR0REP:
            return self.pattern[-self.source_size:]
        raise AttributeError("node has no source")

    @property
    def subtype(self) -> str:
        if self.kind is NodeKind.SR1SPC:
            return "RSR1" if self.spc_levels else "SR1"
        return self.kind.value

    @property
    def is_gpc(self) -> bool:
        return (self.kind is NodeKind.SR1SPC and not self.spc_levels
                and not any(self.source_pattern))

    @property
    def is_egpc(self) -> bool:
        src = self.source_pattern if self.kind is NodeKind.SR1SPC else ()
        return (self.kind is NodeKind.SR1SPC and not self.spc_levels and len(src) > 1
                and not any(src[:-1]) and src[-1] == 1)

    @property
    def type34(self) -> int | None:
        """3 or 4 when the pattern is Type-III (0,0,1..1) / Type-IV (0,0,0,1..1)."""
        for t, zeros in ((3, 2), (4, 3)):
            if (len(self.pattern) > zeros + 1 and not any(self.pattern[:zeros])
                    and all(self.pattern[zeros:])):
                return t
        return None

    def to_dict(self) -> dict:
        d: dict = {"type": self.subtype if self.kind is NodeKind.SR1SPC else self.kind.value,
                   "level": self.p}
        if self.q is not None:
            d["q"] = self.q
        if self.kind is NodeKind.SR1SPC:
            d["spc_levels"] = list(self.spc_levels)
            d["r1_levels"] = list(self.r1_levels)
        if self.kind is NodeKind.SR0REP:
            d["rep_levels"] = list(self.rep_levels)
            d["r0_levels"] = list(self.r0_levels)
        return d


def _is_pow2(n: int) -> bool:
    return n >= 1 and not n & (n - 1)


def _simple_kind(c: tuple[int, ...]) -> NodeKind | None:
    if not any(c):
        return NodeKind.R0
    if all(c):
        return NodeKind.R1
    if len(c) >= 2 and c[-1] == 1 and not any(c[:-1]):
        return NodeKind.REP
    if len(c) >= 2 and c[0] == 0 and all(c[1:]):
        return NodeKind.SPC
    return None


def sr1spc_candidates(c: tuple[int, ...], min_source: int = 2, max_source: int = 16):
    """All SR1/SPC readings of ``c``, smallest source first."""
    p = len(c).bit_length() - 1
    out = []
    for q in range(p - 1, 0, -1):
        blk = c[1 << q: 1 << (q + 1)]
        kind = _simple_kind(blk)
        if kind is NodeKind.REP and len(blk) == 2:
            kind = NodeKind.SPC  # (0, 1) is both
        if kind not in (NodeKind.R1, NodeKind.SPC):
            break
        if min_source <= (1 << q) <= max_source:
            out.append(q)
    res = []
    for q in sorted(out):
        spc = tuple(s for s in range(q, p) if c[1 << s] == 0)
        r1 = tuple(s for s in range(q, p) if c[1 << s] == 1)
        res.append(NodeType(NodeKind.SR1SPC, p, q, spc_levels=spc, r1_levels=r1, pattern=c))
    return res


def sr0rep_candidates(c: tuple[int, ...], min_source: int = 2, max_source: int = 16):
    """All SR0/REP readings of ``c``, smallest source first."""
    n = len(c)
    p = n.bit_length() - 1
    out = []
    start = 0
    for s in range(p - 1, 0, -1):
        blk = c[start: start + (1 << s)]
        kind = _simple_kind(blk)
        if kind not in (NodeKind.R0, NodeKind.REP):
            break
        start += 1 << s
        # descendants p-1 .. s consumed; the remaining tail (size 2**s) is the source
        if min_source <= (1 << s) <= max_source:
            out.append(s)
    res = []
    for q in sorted(out):
        rep, r0 = [], []
        off = 0
        for s in range(p - 1, q - 1, -1):
            (rep if c[off + (1 << s) - 1] == 1 else r0).append(s)
            off += 1 << s
        res.append(NodeType(NodeKind.SR0REP, p, q, rep_levels=tuple(rep), r0_levels=tuple(r0), pattern=c))
    return res


@dataclass(frozen=True)
class SegmentationPolicy:
    """Which node types the segmentation may emit.

    ``sr1spc`` selects the admissible SR1/SPC readings: ``"all"``, ``"gpc"``
    (generalized parity-check only), ``"type34"`` (Type-III/IV only) or
    ``"none"``.
    """

    r0: bool = True
    r1: bool = True
    rep: bool = True
    spc: bool = True
    sr0rep: bool = True
    sr1spc: str = "all"
    min_source: int = 2
    max_source: int = 16

    def allows_sr1spc(self, nt: NodeType) -> bool:
        if self.sr1spc == "all":
            return True
        if self.sr1spc == "gpc":
            return nt.is_gpc
        if self.sr1spc == "type34":
            return nt.type34 is not None and not nt.spc_levels
        return False


BIT_LEVEL = SegmentationPolicy(r0=False, r1=False, rep=False, spc=False, sr0rep=False, sr1spc="none")


def classify_segment(c, policy: SegmentationPolicy = SegmentationPolicy()) -> NodeType:
    c = tuple(int(v) for v in np.asarray(c).ravel())
    if not _is_pow2(len(c)):
        raise ValueError("segment length must be a power of two")
    p = len(c).bit_length() - 1
    if len(c) == 1:
        return NodeType(NodeKind.R1 if c[0] else NodeKind.R0, 0, pattern=c)
    kind = _simple_kind(c)
    enabled = {NodeKind.R0: policy.r0, NodeKind.R1: policy.r1, NodeKind.REP: policy.rep,
               NodeKind.SPC: policy.spc}
    if kind is not None and enabled[kind]:
        return NodeType(kind, p, pattern=c)
    if policy.sr1spc != "none":
        for nt in sr1spc_candidates(c, policy.min_source, policy.max_source):
            if policy.allows_sr1spc(nt):
                return nt
    if policy.sr0rep:
        cands = sr0rep_candidates(c, policy.min_source, policy.max_source)
        if cands:
            return cands[0]
    return NodeType(NodeKind.GENERIC, p, pattern=c)


@dataclass
class TreeNode:
    ntype: NodeType
    offset: int
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None
    source: "TreeNode | None" = None  # sub-tree of a sequence node's source

    @property
    def kind(self) -> NodeKind:
        return self.ntype.kind

    @property
    def level(self) -> int:
        return self.ntype.p

    @property
    def size(self) -> int:
        return self.ntype.size

    def leaves(self):
        if self.kind is NodeKind.GENERIC:
            yield from self.left.leaves()
            yield from self.right.leaves()
        else:
            yield self


def _build(c: tuple[int, ...], offset: int, policy: SegmentationPolicy) -> TreeNode:
    nt = classify_segment(c, policy)
    if nt.kind is NodeKind.GENERIC:
        h = len(c) // 2
        return TreeNode(nt, offset, _build(c[:h], offset, policy), _build(c[h:], offset + h, policy))
    node = TreeNode(nt, offset)
    if nt.kind is NodeKind.SR1SPC:
        node.source = _build(nt.source_pattern, offset, policy)
    elif nt.kind is NodeKind.SR0REP:
        node.source = _build(nt.source_pattern, offset + nt.size - nt.source_size, policy)
    return node


@dataclass
class DecodeTree:
    root: TreeNode
    policy: SegmentationPolicy

    def nodes(self) -> list[TreeNode]:
        """Top-level special nodes in index order; they tile the code exactly."""
        return list(self.root.leaves())

    def census(self) -> dict[str, int]:
        return dict(sorted(Counter(n.ntype.subtype for n in self.nodes()).items()))

    def to_list(self) -> list[dict]:
        out = []
        for n in self.nodes():
            d = n.ntype.to_dict()
            d["offset"] = n.offset
            out.append(d)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_list())


def build_tree(spec_or_indicator, policy: SegmentationPolicy = SegmentationPolicy()) -> DecodeTree:
    """Greedy segmentation: the largest special node that covers a subtree wins."""
    ind = getattr(spec_or_indicator, "indicator", spec_or_indicator)
    c = tuple(int(v) for v in np.asarray(ind).ravel())
    if not _is_pow2(len(c)):
        raise ValueError("indicator length must be a power of two")
    return DecodeTree(_build(c, 0, policy), policy)
