import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from polarlist import make_code_spec
from polarlist.decoder import VARIANTS, DecoderConfig, ListDecoder, variant_policy
from polarlist.nodes import (BIT_LEVEL, NodeKind, SegmentationPolicy, build_tree, classify_segment,
                             sr0rep_candidates)
from polarlist.scl import decode_ca_scl

DATA = Path(__file__).parent / "data"

indicators = st.integers(1, 7).flatmap(lambda n: st.lists(st.integers(0, 1), min_size=2**n, max_size=2**n))


def test_classify_simple_patterns():
    assert classify_segment((0, 1, 1, 1)).kind is NodeKind.SPC
    assert classify_segment((1, 1, 1, 1)).kind is NodeKind.R1
    assert classify_segment((0, 0, 0, 1)).kind is NodeKind.REP
    assert classify_segment((0, 0, 0, 0)).kind is NodeKind.R0


def test_classify_sequence_node_by_hand():
    # source (1,1), SPC (0,1), SPC (0,1,1,1), R1 of eight
    nt = classify_segment((1, 1, 0, 1, 0, 1, 1, 1) + (1,) * 8)
    assert nt.kind is NodeKind.SR1SPC
    assert (nt.q, nt.p, nt.spc_levels, nt.r1_levels) == (1, 4, (1, 2), (3,))
    assert nt.subtype == "RSR1"


def test_sr1_without_spc_levels():
    nt = classify_segment((1, 0, 1, 1, 1, 1, 1, 1))
    assert nt.kind is NodeKind.SR1SPC and nt.subtype == "SR1"
    assert nt.spc_levels == () and set(nt.r1_levels) == set(range(nt.q, nt.p))


def test_sr0rep_mirrors_sr1spc():
    c = (0, 0, 0, 1, 0, 0, 1, 1)
    nt = classify_segment(c)
    assert nt.kind is NodeKind.SR0REP
    assert nt.source_pattern == c[-(1 << nt.q):]
    assert set(nt.rep_levels) | set(nt.r0_levels) == set(range(nt.q, nt.p))
    assert sr0rep_candidates(c)[0] == nt


def test_classify_rejects_bad_length():
    with pytest.raises(ValueError):
        classify_segment((0, 1, 1))


def test_policy_can_disable_node_types():
    assert classify_segment((0, 1, 1, 1), SegmentationPolicy(spc=False)).kind is not NodeKind.SPC
    assert classify_segment((1, 1, 0, 1, 0, 1, 1, 1) + (1,) * 8, BIT_LEVEL).kind is NodeKind.GENERIC


def test_all_frozen_and_rate_one():
    r0 = build_tree(make_code_spec(64, 0)).nodes()
    r1 = build_tree(make_code_spec(64, 64)).nodes()
    assert len(r0) == 1 and r0[0].kind is NodeKind.R0 and r0[0].size == 64
    assert len(r1) == 1 and r1[0].kind is NodeKind.R1 and r1[0].size == 64


def _descendant_blocks(nt):
    # (start, stop, level) of each descendant inside an SR1/SPC node
    return [(1 << s, 1 << (s + 1), s) for s in range(nt.q, nt.p)]


@settings(max_examples=200, deadline=None)
@given(indicators, st.sampled_from(VARIANTS))
def test_tree_tiles_the_code(ind, variant):
    tree = build_tree(np.array(ind), variant_policy(variant))
    pos = 0
    for node in tree.nodes():
        assert node.offset == pos
        assert node.size & (node.size - 1) == 0
        assert tuple(ind[pos: pos + node.size]) == node.ntype.pattern
        pos += node.size
    assert pos == len(ind)


@settings(max_examples=200, deadline=None)
@given(indicators)
def test_sequence_nodes_match_their_template(ind):
    for node in build_tree(np.array(ind)).nodes():
        nt = node.ntype
        if nt.kind is not NodeKind.SR1SPC:
            continue
        c = nt.pattern
        assert set(nt.spc_levels) | set(nt.r1_levels) == set(range(nt.q, nt.p))
        assert not set(nt.spc_levels) & set(nt.r1_levels)
        for lo, hi, s in _descendant_blocks(nt):
            blk = c[lo:hi]
            if s in nt.spc_levels:
                assert blk[0] == 0 and all(blk[1:])
            else:
                assert all(blk)


def test_tree_is_deterministic():
    spec = make_code_spec(256, 160, 8)
    assert build_tree(spec).to_json() == build_tree(spec).to_json()


def test_tree_dump_fields():
    d = json.loads(build_tree(make_code_spec(64, 40, 8)).to_json())
    assert all({"type", "level", "offset"} <= set(x) for x in d)


def test_census_matches_golden():
    golden = json.loads((DATA / "census_1024_768_8.json").read_text())
    spec = make_code_spec(*golden["code"])
    for variant, census in golden["census"].items():
        assert build_tree(spec, variant_policy(variant)).census() == census


@pytest.mark.parametrize("variant", ["fsl", "fpl-f", "sota-tsp22", "sota-tcom19"])
@pytest.mark.parametrize("N,K", [(64, 40), (128, 96), (256, 136)])
def test_generic_decoding_of_every_node_equals_ca_scl(variant, N, K, rng):
    spec = make_code_spec(N, K, 8)
    llr = rng.normal(2.0, 2.0, (100, N))
    ref = decode_ca_scl(llr, spec, 4)
    dec = ListDecoder(spec, DecoderConfig(variant=variant, L=4, generic_nodes=True))
    assert (dec.decode(llr) == ref).all()
