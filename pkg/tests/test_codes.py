import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from evenlat.codes import (
    GqrParams,
    cardinality,
    code_from_rows,
    contains,
    dual_code,
    gqr_generators,
    isotropy_bruteforce,
    isotropy_check,
    span_bruteforce,
    zero_code,
)
from evenlat.errors import DimensionError, DomainError
from evenlat.lattice import GramLattice, discriminant_group
from evenlat.projective import arrangement, legendre, primitive_root, psl2_generators
from evenlat.symmetry import perm_group_order


def weights(C):
    return dict(Counter(sum(1 for x in w if x) for w in C.words()))


def test_arrangement_of_31():
    arr = arrangement(31)
    assert arr.alpha == 3
    assert arr.order[:4] == (31, 0, 1, 9)
    assert arr.order[17] == 3
    assert all(legendre(arr.order[i], 31) == 1 for i in arr.squares)
    assert all(legendre(arr.order[i], 31) == -1 for i in arr.nonsquares)


def test_primitive_roots():
    assert [primitive_root(p) for p in (3, 5, 7, 11, 13, 23, 31)] == [2, 2, 3, 2, 2, 5, 3]


@pytest.mark.parametrize("p,order", [(5, 60), (7, 168), (11, 660), (31, 14880)])
def test_psl2_order(p, order):
    assert perm_group_order(psl2_generators(arrangement(p)), p + 1) == order


def test_hamming_and_golay(hamming, golay):
    assert cardinality(hamming) == 16
    assert weights(hamming) == {0: 1, 4: 14, 8: 1}
    assert dual_code(hamming) == hamming
    assert cardinality(golay) == 4096
    assert weights(golay) == {0: 1, 8: 759, 12: 2576, 16: 759, 24: 1}


def test_code_equality_is_canonical():
    a = code_from_rows(6, 3, [[1, 2, 3], [0, 3, 3]])
    b = code_from_rows(6, 3, [[1, 5, 0], [5, 1, 3], [0, 3, 3]])
    assert (a == b) == (span_bruteforce(6, a.rows, 3) == span_bruteforce(6, b.rows, 3))


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([2, 3, 4, 6, 8, 9, 12]), st.integers(1, 4), st.integers(0, 3), st.randoms())
def test_cardinality_and_membership(N, m, k, rnd):
    rows = [[rnd.randrange(N) for _ in range(m)] for _ in range(k)]
    C = code_from_rows(N, m, rows)
    span = span_bruteforce(N, rows, m) if rows else {(0,) * m}
    assert cardinality(C) == len(span)
    assert set(C.words()) == span
    w = tuple(rnd.randrange(N) for _ in range(m))
    assert contains(C, w) == (w in span)
    # idempotence of the canonical form
    assert code_from_rows(N, m, C.rows) == C


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 4, 6, 9]), st.integers(1, 3), st.randoms())
def test_dual_code(N, m, rnd):
    rows = [[rnd.randrange(N) for _ in range(m)] for _ in range(rnd.randint(1, 2))]
    C = code_from_rows(N, m, rows)
    D = dual_code(C)
    words = list(C.words())
    for v in D.words():
        assert all(sum(a * b for a, b in zip(v, w)) % N == 0 for w in words)
    assert cardinality(C) * cardinality(D) == N**m


def test_zero_code_and_dimension_errors():
    Z = zero_code(5, 3)
    assert cardinality(Z) == 1
    with pytest.raises(DimensionError):
        code_from_rows(5, 3, [[1, 2]])
    with pytest.raises(DimensionError):
        contains(Z, (1, 2))


def test_gqr_generators_shape():
    g = gqr_generators(GqrParams(7, 0, 0, 0, 1, 0, 1), 2)
    assert len(g) == 8 and all(len(r) == 8 for r in g)
    assert g[0] == [0] * 8


@pytest.mark.parametrize("gram", [[[2, 1], [1, 2]], [[2, 1], [1, 4]], [[6, 1], [1, 6]], [[4, 1], [1, 2]]])
def test_isotropy_check_matches_bruteforce(gram):
    D = discriminant_group(GramLattice(gram))
    N = D.order
    rng = random.Random(N)
    for _ in range(30):
        m = rng.randint(1, 4)
        C = code_from_rows(N, m, [[rng.randrange(N) for _ in range(m)]])
        if cardinality(C) > 5000:
            continue
        assert isotropy_check(C, D) == isotropy_bruteforce(C, D)


def test_isotropy_modulus_mismatch(hamming):
    with pytest.raises(DomainError):
        isotropy_check(hamming, discriminant_group(GramLattice([[2, 1], [1, 2]])))


def test_q_is_isotropic(Q):
    D = discriminant_group(GramLattice([[6, 1], [1, 6]]))
    assert cardinality(Q) == 35**16
    assert isotropy_check(Q, D)
    assert Q.is_systematic()
