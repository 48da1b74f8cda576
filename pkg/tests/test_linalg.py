import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eqbirat.linalg import (
    det,
    diagonal,
    identity,
    lift_class,
    matmul,
    present_quotient,
    reduce_element,
    snf,
)
from oracles import det_fraction, invariant_factors


def check_snf(m):
    u, s, v = snf(m)
    assert matmul(matmul(u, m), v) == s
    assert abs(det(u)) == 1 and abs(det(v)) == 1
    diag = diagonal(s)
    for i, row in enumerate(s):
        for j, x in enumerate(row):
            if i != j:
                assert x == 0
    assert all(x >= 0 for x in diag)
    nz = [x for x in diag if x]
    assert diag[: len(nz)] == nz, "zeros must trail"
    for a, b in zip(nz, nz[1:]):
        assert b % a == 0
    assert diag == invariant_factors(m)


def random_matrix(rng, max_dim=6, bound=20):
    r, c = rng.randint(1, max_dim), rng.randint(1, max_dim)
    return [[rng.randint(-bound, bound) for _ in range(c)] for _ in range(r)]


def test_identity_and_zero():
    u, s, v = snf(identity(3))
    assert u == s == v == identity(3)
    _, s, _ = snf([[0, 0], [0, 0]])
    assert s == [[0, 0], [0, 0]]


def test_small_example():
    _, s, _ = snf([[2, 4], [6, 8]])
    assert diagonal(s) == [2, 4]


def test_random_against_determinantal_divisors():
    rng = random.Random(20240611)
    for _ in range(200):
        check_snf(random_matrix(rng))


def test_rank_deficient():
    check_snf([[1, 2, 3], [2, 4, 6], [3, 6, 9]])
    check_snf([[0, 6, 0], [0, 0, 0], [4, 0, 0]])


def test_without_u_matches():
    m = [[3, 5, 7], [2, 4, 6], [1, 1, 1], [0, 0, 9]]
    u, s, v = snf(m)
    none, s2, v2 = snf(m, with_u=False)
    assert none is None and s2 == s and v2 == v


@settings(max_examples=100, deadline=None)
@given(st.lists(st.lists(st.integers(-30, 30), min_size=3, max_size=3), min_size=1, max_size=4))
def test_snf_property(m):
    check_snf(m)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.lists(st.integers(-9, 9), min_size=4, max_size=4), min_size=4, max_size=4))
def test_bareiss_matches_fraction_det(m):
    assert det(m) == det_fraction(m)


def test_present_quotient_basics():
    g = present_quotient(1, [[2]])
    assert (g.free_rank, g.torsion) == (0, (2,))
    g = present_quotient(2, [])
    assert (g.free_rank, g.torsion) == (2, ())
    assert str(present_quotient(3, [[2, 0, 0], [0, 6, 0]])) == "Z ⊕ Z/2 ⊕ Z/6"
    assert str(present_quotient(2, [[1, 0], [0, 1]])) == "0"


def test_reduce_element():
    g = present_quotient(3, [[2, 0, 0], [0, 6, 0], [1, 1, 0]])
    assert reduce_element(g, [0, 0, 0]).is_zero
    for rel in ([2, 0, 0], [0, 6, 0], [1, 1, 0]):
        assert reduce_element(g, rel).is_zero
    with pytest.raises(ValueError):
        reduce_element(g, [1, 2])


def test_lift_round_trip():
    rng = random.Random(5)
    for _ in range(30):
        m = random_matrix(rng, 5, 6)
        g = present_quotient(len(m[0]), m)
        x = [rng.randint(-5, 5) for _ in range(len(m[0]))]
        cls = reduce_element(g, x)
        assert reduce_element(g, lift_class(g, cls)) == cls


def test_relation_combinations_vanish():
    rng = random.Random(11)
    for _ in range(30):
        m = random_matrix(rng, 5, 6)
        n = len(m[0])
        g = present_quotient(n, m)
        coeffs = [rng.randint(-4, 4) for _ in m]
        combo = [sum(c * row[j] for c, row in zip(coeffs, m)) for j in range(n)]
        assert reduce_element(g, combo).is_zero
        x = [rng.randint(-5, 5) for _ in range(n)]
        assert reduce_element(g, [a + b for a, b in zip(x, combo)]) == reduce_element(g, x)
