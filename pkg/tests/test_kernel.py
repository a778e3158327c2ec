import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import kron_matrix
from polarlist import encode, make_code_spec, polar_transform
from polarlist.kernel import beta_combine, f_llr, g_llr, hard_decision
from polarlist.scl import decode_sc

bits = st.integers(1, 6).flatmap(lambda n: st.lists(st.integers(0, 1), min_size=2**n, max_size=2**n))


def test_kernel_by_hand():
    spec = make_code_spec(2, 2)
    assert encode([0, 1], spec).tolist() == [1, 1]
    assert encode([1, 0], spec).tolist() == [1, 0]


def test_encode_matches_kronecker_product(rng):
    spec = make_code_spec(8, 8)
    for _ in range(20):
        u = rng.integers(0, 2, 8)
        assert encode(u, spec).tolist() == ((u @ kron_matrix(8)) % 2).tolist()


def test_encode_rejects_frozen_ones():
    spec = make_code_spec(8, 4)
    u = np.zeros(8, np.uint8)
    u[spec.frozen_set[0]] = 1
    with pytest.raises(ValueError):
        encode(u, spec)
    with pytest.raises(ValueError):
        encode(np.zeros(4, np.uint8), spec)


@settings(max_examples=60, deadline=None)
@given(bits)
def test_transform_is_self_inverse(u):
    u = np.array(u, np.uint8)
    assert polar_transform(polar_transform(u)).tolist() == u.tolist()


def test_f_examples():
    assert f_llr(2, -3) == -2
    assert f_llr(0, 5) == 0
    assert f_llr(-1.5, -4) == 1.5


def test_g_examples():
    assert g_llr(2, 3, 0) == 5
    assert g_llr(2, 3, 1) == 1
    assert g_llr(-0.7, 0, 1) == 0.7


def test_beta_combine_examples(rng):
    assert beta_combine([1], [1]).tolist() == [0, 1]
    r = rng.integers(0, 2, 4)
    assert beta_combine(np.zeros(4), r).tolist() == list(r) + list(r)
    with pytest.raises(ValueError):
        beta_combine([1, 0], [1])


def test_beta_combine_matches_encoding(rng):
    for _ in range(10):
        a, b = rng.integers(0, 2, (2, 4))
        expect = polar_transform(np.concatenate([a, b]))
        assert beta_combine(polar_transform(a), polar_transform(b)).tolist() == expect.tolist()


def test_hard_decision_examples():
    assert hard_decision(3.2) == 0
    assert hard_decision(-0.1) == 1
    assert hard_decision(0.0) == 0


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 7), st.data())
def test_sc_recovers_noiseless_codeword(n, data):
    N = 1 << n
    K = data.draw(st.integers(0, N))
    spec = make_code_spec(N, K)
    u = np.zeros(N, np.uint8)
    u[spec.info_set] = data.draw(st.lists(st.integers(0, 1), min_size=K, max_size=K))
    x = encode(u, spec)
    llr = 20.0 * (1.0 - 2.0 * x)
    assert decode_sc(llr, spec).tolist() == u.tolist()
