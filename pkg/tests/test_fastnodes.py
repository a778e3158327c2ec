import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import codebook, exact_cost, hwf_cost, tie_free
from polarlist.fastnodes import (decode_r0_list, decode_r1_fpl, decode_r1_fsl, decode_rep_list, decode_spc_fpl,
                                 decode_spc_fsl)
from polarlist.scl import PathList, decode_span_bitwise


def _one(alpha):
    return PathList.fresh(1), np.atleast_2d(np.asarray(alpha, dtype=float))


def _pattern(kind, n):
    return {"r0": [0] * n, "rep": [0] * (n - 1) + [1], "r1": [1] * n, "spc": [0] + [1] * (n - 1)}[kind]


def _list_oracle(pm, alpha, words, L, cost=hwf_cost):
    # every (parent, codeword) pair, best L
    cands = np.concatenate([p + cost(words, a) for p, a in zip(pm, alpha)])
    return np.sort(cands)[:L]


def _parents(rng, n_paths, n):
    pm = np.sort(rng.exponential(1.0, n_paths))
    alpha = np.stack([tie_free(rng, n) for _ in range(n_paths)])
    return PathList(pm, np.zeros(n_paths, np.int64)), alpha


DECODERS = {
    "rep": decode_rep_list,
    "r1-fsl": decode_r1_fsl,
    "r1-fpl": decode_r1_fpl,
    "spc-fsl": decode_spc_fsl,
    "spc-fpl": decode_spc_fpl,
}


def test_r0_examples():
    paths, a = _one([1.0, 2.0, 0.5, 3.0])
    assert decode_r0_list(paths, a).pm.tolist() == [0.0]
    paths, a = _one([1.0, -2.0, 0.5, -3.0])
    res = decode_r0_list(paths, a)
    assert res.pm.tolist() == [5.0] and not res.beta.any()


def test_rep_examples():
    paths, a = _one([1.0, -1.0])
    assert sorted(decode_rep_list(paths, a, 2).pm.tolist()) == [1.0, 1.0]


def test_r1_fpl_examples():
    paths, a = _one([0.1, -0.2, 0.3, 0.4])
    res = decode_r1_fpl(paths, a, 1)
    assert res.pm.tolist() == [0.0] and res.beta[0].tolist() == [0, 1, 0, 0]
    res = decode_r1_fpl(paths, a, 4)
    assert np.allclose(np.sort(res.pm), [0.0, 0.1, 0.2, 0.3])


def test_spc_examples():
    paths, a = _one([0.5, 0.2, 1.0, 2.0])
    assert decode_spc_fsl(paths, a, 1).beta[0].tolist() == [0, 0, 0, 0]
    paths, a = _one([0.5, -0.2, 1.0, 2.0])
    res = decode_spc_fsl(paths, a, 1)
    assert res.beta[0].tolist() == [0, 0, 0, 0] and res.pm[0] == pytest.approx(0.2)
    paths, a = _one([0.5, 0.2, 1.0, 2.0])
    assert np.allclose(np.sort(decode_spc_fpl(paths, a, 2).pm), [0.0, 0.7])
    paths, a = _one([0.5, -0.2, 1.0, 2.0])
    assert np.allclose(np.sort(decode_spc_fpl(paths, a, 2).pm), [0.2, 0.5])


@pytest.mark.parametrize("name", sorted(DECODERS))
@pytest.mark.parametrize("n", [2, 4, 8, 16])
@pytest.mark.parametrize("L", [1, 2, 4, 8])
def test_node_decoders_match_brute_force(name, n, L, rng):
    kind = name.split("-")[0]
    words = codebook(_pattern(kind, n))
    valid = {w.tobytes() for w in words}
    for _ in range(15):
        paths, alpha = _parents(rng, min(L, 3), n)
        res = DECODERS[name](paths, alpha, L)
        assert np.allclose(np.sort(res.pm), _list_oracle(paths.pm, alpha, words, L))
        # each survivor is a codeword whose cost reproduces its PM
        for par, beta, pm in zip(res.parent, res.beta, res.pm):
            assert beta.astype(np.uint8).tobytes() in valid
            assert pm == pytest.approx(paths.pm[par] + hwf_cost(beta[None], alpha[par])[0])


@pytest.mark.parametrize("name", sorted(DECODERS))
def test_exact_mode_adds_node_constant(name, rng):
    kind = name.split("-")[0]
    words = codebook(_pattern(kind, 8))
    for _ in range(10):
        paths, alpha = _parents(rng, 2, 8)
        res = DECODERS[name](paths, alpha, 4, "exact")
        assert np.allclose(np.sort(res.pm), _list_oracle(paths.pm, alpha, words, 4, exact_cost))


def test_r0_exact_mode(rng):
    paths, alpha = _parents(rng, 3, 8)
    res = decode_r0_list(paths, alpha, 4, "exact")
    assert np.allclose(res.pm, paths.pm + exact_cost(np.zeros((1, 8), np.uint8), alpha))


@pytest.mark.parametrize("n", [4, 8, 16])
@pytest.mark.parametrize("L", [2, 4, 8])
def test_spc_fpl_equals_fsl(n, L, rng):
    for _ in range(100):
        paths, alpha = _parents(rng, min(L, 4), n)
        a = decode_spc_fsl(paths, alpha, L)
        b = decode_spc_fpl(paths, alpha, L)
        assert np.allclose(np.sort(a.pm), np.sort(b.pm), atol=1e-9)
        assert {tuple(x) for x in a.beta} == {tuple(x) for x in b.beta}


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 4, 8, 16]), st.sampled_from([1, 2, 4, 8]),
       st.sampled_from(["spc-fsl", "spc-fpl"]))
def test_spc_outputs_have_even_parity(seed, n, L, name):
    rng = np.random.default_rng(seed)
    paths, alpha = _parents(rng, 2, n)
    res = DECODERS[name](paths, alpha, L)
    assert not (res.beta.sum(axis=1) % 2).any()


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(sorted(DECODERS)), st.sampled_from([1, 2, 4, 8]))
def test_emitted_pms_never_below_parent(seed, name, L):
    rng = np.random.default_rng(seed)
    paths = PathList(rng.exponential(1.0, 3), np.array([0, 0, 1]))
    alpha = rng.normal(0.5, 2.0, (3, 8))
    res = DECODERS[name](paths, alpha, L)
    assert (res.pm >= paths.pm[res.parent] - 1e-12).all()
    # pruning is per frame
    frames = paths.frame[res.parent]
    assert all((frames == f).sum() <= L for f in (0, 1))


@pytest.mark.parametrize("name,kind", [("rep", "rep"), ("spc-fsl", "spc"), ("r1-fsl", "r1")])
def test_fast_decoders_agree_with_bitwise_list(name, kind, rng):
    # the bitwise decoder keeps all codewords when the list is large enough
    pattern = np.array(_pattern(kind, 4))
    words = codebook(pattern)
    for _ in range(20):
        paths, alpha = _parents(rng, 1, 4)
        ref = decode_span_bitwise(paths, alpha, pattern, len(words))
        res = DECODERS[name](paths, alpha, 2)
        assert np.allclose(np.sort(res.pm), np.sort(ref.pm)[:2])
