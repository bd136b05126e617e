import random
from fractions import Fraction
from itertools import combinations, product
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from evenlat import linalg
from evenlat.errors import DefinitenessError


def small_matrix(rows, cols, lo=-9, hi=9):
    return st.lists(st.lists(st.integers(lo, hi), min_size=cols, max_size=cols), min_size=rows, max_size=rows)


def laplace_det(M):
    if not M:
        return 1
    return sum((-1) ** j * M[0][j] * laplace_det([r[:j] + r[j + 1 :] for r in M[1:]]) for j in range(len(M)) if M[0][j])


def determinantal_factors(M):
    """Invariant factors from gcds of k x k minors (independent of the SNF code)."""
    r, c = len(M), len(M[0])
    d = [1]
    for k in range(1, min(r, c) + 1):
        g = 0
        for rows in combinations(range(r), k):
            for cols in combinations(range(c), k):
                g = gcd(g, laplace_det([[M[i][j] for j in cols] for i in rows]))
        if g == 0:
            break
        d.append(g)
    return [d[k] // d[k - 1] for k in range(1, len(d))]


def test_snf_of_R():
    U, D, V = linalg.smith_normal_form([[6, 1], [1, 6]])
    assert D == [[1, 0], [0, 35]]
    assert linalg.matmul(linalg.matmul(U, [[6, 1], [1, 6]]), V) == D


def test_snf_known_example():
    M = [[12, 6, 4, 8], [3, 9, 6, 12], [2, 16, 14, 28], [20, 10, 10, 20]]
    assert linalg.invariant_factors(M) == [1, 10, 30, 0]


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4).flatmap(lambda r: st.integers(1, 4).flatmap(lambda c: small_matrix(r, c))))
def test_snf_decomposition_and_factors(M):
    U, D, V = linalg.smith_normal_form(M)
    assert linalg.matmul(linalg.matmul(U, M), V) == D
    assert abs(linalg.det_exact(U)) == 1 and abs(linalg.det_exact(V)) == 1
    diag = [D[i][i] for i in range(min(len(D), len(D[0]))) if D[i][i]]
    assert all(b % a == 0 for a, b in zip(diag, diag[1:]))
    assert diag == determinantal_factors(M)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: small_matrix(n, n)))
def test_bareiss_matches_laplace(M):
    assert linalg.det_exact(M) == laplace_det(M)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5).flatmap(lambda r: small_matrix(r, 3)))
def test_hnf_shape_and_lattice(M):
    H = linalg.hermite_normal_form(M, 3)
    # echelon with positive pivots and reduced entries above them
    piv = []
    for row in H:
        c = next(j for j, x in enumerate(row) if x)
        assert row[c] > 0
        piv.append(c)
    assert piv == sorted(piv) and len(set(piv)) == len(piv)
    for k, c in enumerate(piv):
        for i in range(k):
            assert 0 <= H[i][c] < H[k][c]
    # same row lattice: HNF of the union equals H, and H is idempotent
    assert linalg.hermite_normal_form(H + M, 3) == H
    assert linalg.hermite_normal_form(H, 3) == H


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([2, 4, 6, 12, 35, 9]), st.integers(1, 5), st.integers(0, 4), st.randoms())
def test_hnf_mod_lattice_matches_integer_hnf(N, n, k, rnd):
    M = [[rnd.randrange(-40, 40) for _ in range(n)] for _ in range(k)]
    full = linalg.hermite_normal_form(M + [[N * int(i == j) for j in range(n)] for i in range(n)], n)
    assert linalg.hnf_mod_lattice(M, N, n) == full


def span_bruteforce(rows, N, n):
    out = set()
    for coeffs in product(range(N), repeat=len(rows)):
        w = tuple(sum(c * r[j] for c, r in zip(coeffs, rows)) % N for j in range(n))
        out.add(w)
    return out


@pytest.mark.parametrize("seed", range(40))
def test_howell_form_against_bruteforce_span(seed):
    rng = random.Random(seed)
    N = rng.choice([4, 6, 8, 9, 12])
    n = rng.randint(1, 4)
    rows = [[rng.randrange(N) for _ in range(n)] for _ in range(rng.randint(1, 3))]
    H = linalg.howell_form_mod(rows, N, n)
    span = span_bruteforce(rows, N, n)
    S = linalg.ModSubgroup(N, n, tuple(map(tuple, H)))
    assert set(S.elements()) == span
    assert S.order == len(span)
    assert linalg.howell_form_mod(H, N, n) == H
    for w in product(range(N), repeat=n):
        assert (w in S) == (w in span)


def test_howell_needs_annihilator_rows():
    # over Z/4 the span of (2, 1) contains (0, 2), which a plain echelon form misses
    H = linalg.howell_form_mod([[2, 1]], 4, 2)
    assert linalg.reduce_mod(H, [0, 2], 4) is not None
    assert H == [[2, 1], [0, 2]]


@pytest.mark.parametrize("seed", range(25))
def test_solve_mod_linear_is_the_kernel(seed):
    rng = random.Random(100 + seed)
    N = rng.choice([4, 6, 9, 10])
    n = rng.randint(1, 3)
    A = [[rng.randrange(N) for _ in range(n)] for _ in range(rng.randint(1, 3))]
    K = linalg.solve_mod_linear(A, N, n)
    kernel = {x for x in product(range(N), repeat=n) if all(sum(a * b for a, b in zip(row, x)) % N == 0 for row in A)}
    assert set(K.elements()) == kernel


def test_exact_vector_normalizes():
    v = linalg.ExactVector((2, 4), 6)
    assert (v.numerators, v.denominator) == ((1, 2), 3)
    w = linalg.ExactVector.from_fractions([Fraction(1, 2), Fraction(1, 3)])
    assert w.to_fractions() == [Fraction(1, 2), Fraction(1, 3)]
    assert (w - w).is_integral()
    assert not w.is_integral()


def test_inverse_rational():
    M = [[6, 1], [1, 6]]
    inv = linalg.inverse_rational(M)
    assert inv == [[Fraction(6, 35), Fraction(-1, 35)], [Fraction(-1, 35), Fraction(6, 35)]]


def test_positive_definite():
    assert linalg.is_positive_definite([[2, 1], [1, 2]])
    assert not linalg.is_positive_definite([[1, 2], [2, 1]])


def test_lll_small():
    G2, U = linalg.lll_reduce([[6, 7], [7, 10]])
    assert G2 == [[2, 1], [1, 6]]
    assert linalg.matmul(linalg.matmul(U, [[6, 7], [7, 10]]), linalg.transpose(U)) == G2


def lll_conditions(G, delta):
    """Size reduction and Lovasz conditions from a rational Gram-Schmidt computed here."""
    n = len(G)
    mu = [[Fraction(0)] * n for _ in range(n)]
    B = [Fraction(0)] * n
    for i in range(n):
        for j in range(i):
            mu[i][j] = (G[i][j] - sum(mu[j][k] * mu[i][k] * B[k] for k in range(j))) / B[j]
        B[i] = G[i][i] - sum(mu[i][k] ** 2 * B[k] for k in range(i))
    size = all(abs(mu[i][j]) <= Fraction(1, 2) for i in range(n) for j in range(i))
    lov = all(B[k] >= (delta - mu[k][k - 1] ** 2) * B[k - 1] for k in range(1, n))
    return size and lov


@pytest.mark.parametrize("seed", range(30))
def test_lll_reduces_random_grams(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 6)
    B = [[rng.randint(-12, 12) for _ in range(n)] for _ in range(n)]
    if linalg.det_exact(B) == 0:
        B[0][0] += 50
    if linalg.det_exact(B) == 0:
        return
    G = linalg.matmul(B, linalg.transpose(B))
    res = linalg.lll_reduce(G)
    assert res.complete
    assert abs(linalg.det_exact(res.transform)) == 1
    assert linalg.matmul(linalg.matmul(res.transform, G), linalg.transpose(res.transform)) == res.gram
    assert lll_conditions(res.gram, Fraction(99, 100))


def test_lll_rejects_indefinite():
    with pytest.raises(DefinitenessError):
        linalg.lll_reduce([[1, 2], [2, 1]])


def test_unit_normalizer():
    for N in (12, 35):
        for a in range(N):
            u = linalg.unit_normalizer(a, N)
            assert gcd(u, N) == 1
            assert u * a % N == gcd(a, N) % N
