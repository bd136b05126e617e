import random

import pytest

from evenlat import linalg
from evenlat.errors import ClosureError, DomainError
from evenlat.lattice import GramLattice, enum_short_vectors
from evenlat.shortvec import (
    VectorSet,
    embed_config,
    harvest,
    lll_attempt,
    orbit,
    orbit_decompose,
    random_short_search,
    random_unimodular,
    reflection,
    vector_type,
)

A2 = GramLattice([[2, -1], [-1, 2]], "A2")


@pytest.fixture(scope="module")
def e8_roots(e8):
    S = VectorSet(e8.lattice, 2, complete=True)
    for v in enum_short_vectors(e8.lattice, 2):
        S.add(v)
    return S


def test_random_unimodular():
    rng = random.Random(0)
    for n in (1, 3, 6):
        assert abs(linalg.det_exact(random_unimodular(n, rng))) == 1


def test_harvest():
    G = [[2, -1], [-1, 2]]
    # b1, b2 and b1 + b2 have norm 2, b1 - b2 has norm 6
    assert sorted(harvest(G, 2)) == [(0, 1), (1, 0), (1, 1)]
    assert harvest(G, 6) == [(1, -1)]


def test_attempt_is_deterministic(e8):
    a = lll_attempt(e8.lattice.matrix, 2, seed=5)
    b = lll_attempt(e8.lattice.matrix, 2, seed=5)
    assert a == b and a.min_seen == 2
    assert all(e8.lattice.norm(v) == 2 for v in a.vectors)


def test_random_search_finds_e8_roots(e8, e8_roots):
    S = random_short_search(e8.lattice, 2, 50, seed=1)
    assert S.vectors <= e8_roots.vectors
    assert S.closed_under_negation()
    assert len(S) == 240


def test_vectorset_rejects_wrong_norm():
    S = VectorSet(A2, 2)
    assert S.add((1, 0)) and not S.add((1, 0))
    with pytest.raises(DomainError):
        S.add((2, 0))


def test_weyl_orbit_of_e8(e8, e8_roots):
    G = e8.lattice.matrix
    basis_reflections = [reflection(tuple(int(i == j) for j in range(8)), G) for i in range(8)]
    o = orbit(next(iter(e8_roots)), basis_reflections, gram=G)
    assert o == e8_roots.vectors
    parts = orbit_decompose(e8_roots, basis_reflections, gram=G)
    assert [len(p) for p in parts] == [240]


def test_orbit_partition_a2():
    S = [v for v in enum_short_vectors(A2, 6)]
    rot = [[0, 1], [-1, -1]]  # order 3 rotation of A2: rows are images of basis vectors
    assert linalg.matmul(linalg.matmul(rot, A2.matrix), linalg.transpose(rot)) == A2.matrix
    parts = orbit_decompose(S, [rot], gram=A2.matrix)
    assert sorted(len(p) for p in parts) == [3] * (len(S) // 3)
    assert set().union(*parts) == set(S)


def test_orbit_closure_error():
    S = [(1, 0)]
    with pytest.raises(ClosureError):
        orbit_decompose(S, [[[0, 1], [-1, -1]]])


def test_non_isometry_rejected():
    with pytest.raises(DomainError):
        orbit((1, 0), [[[1, 1], [0, 1]]], gram=A2.matrix)


def test_vector_type(e8, e8_roots):
    t = vector_type(next(iter(e8_roots)), e8_roots)
    # a root of E8 pairs with 1 root at 2, 56 at 1, 126 at 0, 56 at -1, 1 at -2
    assert t.counts == {2: 1, 1: 56, 0: 126, -1: 56, -2: 1}
    assert not t.approximate


def cartan_a(n):
    return [[2 if i == j else -1 if abs(i - j) == 1 else 0 for j in range(n)] for i in range(n)]


def test_embeddings_in_e8(e8_roots):
    r = embed_config(cartan_a(2), e8_roots)
    assert r.status == "found"
    G = e8_roots.lattice.gram
    assert [[linalg.bilinear(u, G, v) for v in r.embedding] for u in r.embedding] == cartan_a(2)
    assert embed_config(cartan_a(8), e8_roots).status == "found"
    # A1^9 does not fit in rank 8; the budgeted search may not prove it
    r = embed_config([[2 * (i == j) for j in range(9)] for i in range(9)], e8_roots, node_budget=2000)
    assert r.status in ("none", "inconclusive")


def test_embedding_none_small():
    S = VectorSet(A2, 2, complete=True)
    for v in enum_short_vectors(A2, 2):
        S.add(v)
    # two orthogonal roots do not exist in A2
    assert embed_config([[2, 0], [0, 2]], S).status == "none"


def test_pinned_vector_must_be_in_set(e8_roots):
    with pytest.raises(DomainError):
        embed_config(cartan_a(2), e8_roots, first_choices=[(9,) * 8])
