"""End-to-end checks, one test per acceptance criterion.

Each test measures its own wall time against the stated limit.  A PASS/FAIL
line per criterion is printed in the terminal summary.
"""

import random
import time
from fractions import Fraction

from evenlat import linalg, rank64
from evenlat.codes import cardinality, code_from_rows, isotropy_check
from evenlat.gluing import glue, preserves_gram
from evenlat.lattice import GramLattice, discriminant_group, enum_short_vectors, lattice_invariants, minimum, theta_prefix
from evenlat.minsearch import SearchConfig, lambda_table, min_mu_backtrack, mu, read_checkpoint
from evenlat.projective import arrangement, psl2_generators
from evenlat.shortvec import lll_attempt, orbit, orbit_decompose, reflection
from evenlat.symmetry import lambda_set, perm_group_order, twisted_group_order
from evenlat.theta import extremal_theta
from oracles import mu_values, random_code

H_R = [1, 6, 29, 34]


class Clock:
    def __init__(self, limit):
        self.limit = limit
        self.t0 = time.perf_counter()

    def check(self):
        took = time.perf_counter() - self.t0
        print(f"wall time {took:.2f} s (limit {self.limit} s)")
        assert took < self.limit


def test_criterion_01_e8(A1, hamming):
    clk = Clock(5)
    L = glue(A1, 8, hamming)
    inv = lattice_invariants(L.lattice)
    assert inv.even and inv.unimodular and inv.rank == 8
    assert minimum(L.lattice) == 2
    assert theta_prefix(L.lattice, 4) == [1, 240, 2160]
    clk.check()


def test_criterion_02_niemeier_24a1(A1, golay):
    clk = Clock(60)
    L = glue(A1, 24, golay)
    inv = lattice_invariants(L.lattice)
    assert inv.even and inv.unimodular and inv.rank == 24
    assert len(enum_short_vectors(L.lattice, 2)) == 48
    clk.check()


def test_criterion_03_lq_construction():
    clk = Clock(60)
    Q = rank64.build_code()
    R = GramLattice(rank64.R_GRAM)
    D = discriminant_group(R, generator=rank64.GENERATOR)
    LQ = glue(R, 32, Q, D)
    assert len(LQ.gram) == 64 and all(len(r) == 64 for r in LQ.gram)
    assert LQ.lattice.is_even()
    assert linalg.det_exact(LQ.gram) == 1
    assert cardinality(Q) == 35**16
    assert isotropy_check(Q, D)
    assert [r[:16] for r in Q.rows] == linalg.identity(16)
    assert [r[16:] for r in Q.rows] == rank64.table_b()
    assert rank64.table_b_digest() == rank64.B_SHA256
    clk.check()


def test_criterion_04_lambda_table():
    clk = Clock(1)
    T = lambda_table(GramLattice([[6, 1], [1, 6]]))
    half = [0, 6, 24, 54, 26, 10, 6, 14, 34, 66, 40, 26, 24, 34, 56, 90, 66, 54]
    scaled = [int(35 * v) for v in T.values]
    assert scaled[:18] == half
    assert scaled[18:] == half[1:18][::-1]
    clk.check()


def test_criterion_05_extremal_theta_weight_32():
    clk = Clock(5)
    f = extremal_theta(64, 5)
    print("computed:", f)
    clk.check()
    assert f[3] == 2611200
    assert f[4] == 19525860480
    assert f[5] == 19715393260800


def test_criterion_06_symmetry(art):
    clk = Clock(600)
    xi, eta, zeta = psl2_generators(arrangement(31))
    assert perm_group_order([xi, eta, zeta], 32) == 14880
    Q = art.Q
    assert lambda_set(tuple(range(32)), Q, H_R) == [(h,) * 32 for h in H_R]
    lam = lambda_set(xi, Q, H_R)
    twist = (1, 34) + (29,) * 15 + (6,) * 15  # 1, -1, then -6 fifteen times and 6 fifteen times
    assert twist in lam
    assert twisted_group_order(art.gamma_bar, H_R) == 59520
    rep = rank64.gamma_check(art)
    assert rep["order_on_pm_E"] == 59520
    G = [list(r) for r in art.LQ.gram]
    assert all(preserves_gram(M, G) for M in art.gamma_gens)
    clk.check()


def test_criterion_07_orbit_of_e1(art):
    clk = Clock(300)
    pts = rank64.pm_e_points(art)
    o = orbit(pts[0], art.gamma_gens)
    assert len(o) == 128
    assert o == set(pts)
    clk.check()


def test_criterion_08_second_construction(art):
    clk = Clock(60)
    Mr = rank64.build_rho()
    G = rank64.ambient_gram()
    P = linalg.matmul(linalg.matmul(Mr, G), linalg.transpose(Mr))
    assert P == [[35 * 35 * x for x in row] for row in G]
    rep = rank64.rho_checks(Mr, art.LQ)
    assert rep["E_and_E_rho_generate_LQ"]
    assert rep["pair_e1_f_plus_all_2"] and rep["pair_e2_f_minus_all_minus_2"]
    assert rep["rho_basis_images_outside_LQ"] >= 1
    clk.check()


def test_criterion_09_minimum_substitutes(art, tmp_path):
    clk = Clock(1800)
    # (a) randomized LLL on L_Q
    G = art.LQ.lattice.matrix
    lowest, found = None, 0
    for seed in range(100):
        r = lll_attempt(G, 6, seed)
        lowest = r.min_seen if lowest is None else min(lowest, r.min_seen)
        found += len(r.vectors)
    print(f"(a) lowest norm seen {lowest}, norm-6 vectors harvested {found}")
    assert lowest >= 6 and found >= 1

    # (b) backtrack against brute force on 200 random codes
    rng = random.Random(2024)
    compared = 0
    for _ in range(200):
        R, C = random_code(rng, max_size=10**6)
        T = lambda_table(R)
        values = mu_values(C, T)
        low = values[0]
        eps = Fraction(1, T.scale)
        bounds = sorted({b for v in values for b in (v, v - eps) if b > 0})
        for b in bounds:
            for canon in (True, False):
                v = min_mu_backtrack(C, T, SearchConfig(b, canonicity=canon))
                assert v.kind == ("witness" if low <= b else "none"), (C, b, canon)
                if v.witness is not None:
                    assert tuple(v.witness) in C and any(v.witness) and mu(v.witness, T) <= b
                compared += 1
    print(f"(b) {compared} verdicts compared")

    # (c) checkpoint and resume
    rng = random.Random(7)
    for k in range(20):
        R, C = random_code(rng, max_size=20000)
        T = lambda_table(R)
        low = mu_values(C, T)[0]
        b = low if k % 2 else max(low - Fraction(1, T.scale), Fraction(1, T.scale))
        whole = min_mu_backtrack(C, T, SearchConfig(b, canonicity=k % 4 < 2))
        path = str(tmp_path / f"ck{k}.bin")
        cfg = SearchConfig(b, node_budget=2 + k % 3, canonicity=k % 4 < 2, checkpoint_path=path)
        v = min_mu_backtrack(C, T, cfg)
        hops = 0
        while v.kind == "exhausted":
            v = min_mu_backtrack(C, T, cfg, resume=read_checkpoint(path))
            hops += 1
        assert v.kind == whole.kind
        assert v.kind == "none" or mu(v.witness, T) <= b
    clk.check()


def test_criterion_10_property_suites(art, A1, hamming, golay):
    clk = Clock(600)
    # quadratic form law on D_R
    D = art.LQ.disc
    pairs = 0
    for x in range(35):
        for y in range(35):
            lhs = D.q(D.add(x, y)) - D.q(x) - D.q(y) - 2 * D.b(x, y)
            assert lhs.denominator == 1 and lhs.numerator % 2 == 0
            pairs += 1
    assert pairs == 1225

    # index formula det(gram) |C|^2 = det(R)^m
    for R, m, C, L in [
        (A1, 8, hamming, glue(A1, 8, hamming)),
        (A1, 24, golay, glue(A1, 24, golay)),
        (art.R, 32, art.Q, art.LQ),
    ]:
        assert linalg.det_exact(L.gram) * cardinality(C) ** 2 == linalg.det_exact(R.gram) ** m

    # orbit partition and Lagrange divisibility
    pts = rank64.pm_e_points(art)
    parts = orbit_decompose(pts, art.gamma_gens)
    assert sum(len(p) for p in parts) == len(pts) and set().union(*parts) == set(pts)
    assert all(59520 % len(p) == 0 for p in parts)
    E8 = glue(A1, 8, hamming).lattice
    roots = sorted(enum_short_vectors(E8, 2))
    refl = [reflection(tuple(int(i == j) for j in range(8)), E8.gram) for i in range(8)]
    parts = orbit_decompose(roots, refl, gram=E8.gram)
    index = {v: i for i, v in enumerate(roots)}
    perms = [tuple(index[tuple(linalg.matvec_row(v, M))] for v in roots) for M in refl]
    W = perm_group_order(perms, 240, cap=10**10)
    assert W == 696729600
    assert all(W % len(p) == 0 for p in parts) and [len(p) for p in parts] == [240]

    # Howell form: idempotence and membership against brute-force spans
    from itertools import product

    rng = random.Random(10)
    for _ in range(100):
        N = rng.choice([4, 6, 8, 9, 12, 35])
        m = rng.randint(1, 3)
        rows = [[rng.randrange(N) for _ in range(m)] for _ in range(rng.randint(1, 2))]
        H = linalg.howell_form_mod(rows, N, m)
        assert linalg.howell_form_mod(H, N, m) == H
        span = set()
        for cs in product(range(N), repeat=len(rows)):
            span.add(tuple(sum(c * r[j] for c, r in zip(cs, rows)) % N for j in range(m)))
        C = code_from_rows(N, m, rows)
        assert cardinality(C) == len(span)
        for _ in range(20):
            w = tuple(rng.randrange(N) for _ in range(m))
            assert (w in C) == (w in span)
    clk.check()
