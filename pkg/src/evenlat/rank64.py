"""The rank-64 even unimodular lattice L_Q glued from 32 copies of R = [[6, 1], [1, 6]].

Q is the generalized quadratic residue code of length 32 over Z/35 with
parameters (a, b, d, s, t, e) = (0, 0, 1, 7, 3, 2).  Its canonical
generator matrix [I_16 | B] is embedded below and regenerated independently.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .codes import CyclicCode, GqrParams, cardinality, code_from_rows, gqr_code, isotropy_check
from .errors import ConstructionFailure
from .gluing import GluedLattice, glue, lift_automorphism, orthogonal_lifts, preserves_gram
from .lattice import GramLattice, discriminant_group
from .projective import arrangement, legendre
from .symmetry import TwistedPermutation, gamma_bar, perm_group_contains, perm_group_order
from .shortvec import orbit

P = 31
N = 35
M = 32
R_GRAM = ((6, 1), (1, 6))
GQR = GqrParams(P, 0, 0, 1, 7, 3, 2)
H_R = (1, 6, 29, 34)
GENERATOR = (Fraction(34, 35), Fraction(6, 35))

B_TEXT = """\
32 30 15 11 7 29 19 10 26 11 31 33 28 22 22 12
16 13 23 21 19 30 25 3 11 21 31 32 12 9 9 4
34 6 30 22 22 19 20 32 17 30 30 24 10 33 0 20
34 26 1 17 9 6 4 17 14 12 25 19 34 8 33 20
34 26 21 23 4 28 26 1 34 9 7 14 29 32 8 18
34 24 21 8 10 23 13 23 18 29 4 31 24 27 32 28
34 34 19 8 30 29 8 10 5 13 24 28 6 22 27 17
34 23 29 6 30 14 14 5 27 0 8 13 3 4 22 12
34 18 18 16 28 14 34 11 22 22 30 32 23 1 4 7
34 13 13 5 3 12 34 31 28 17 17 19 7 21 1 24
34 30 8 0 27 22 32 31 13 23 12 6 29 5 21 21
34 27 25 30 22 11 7 29 13 8 18 1 16 27 5 6
34 12 22 12 17 6 31 4 11 8 3 7 11 14 27 25
34 31 7 9 34 1 26 28 21 6 3 27 17 9 14 12
34 18 26 29 31 18 21 23 10 16 1 27 2 15 9 34
34 5 13 13 16 15 3 18 5 5 11 25 2 0 15 29
"""
B_SHA256 = "066d2296138330638eb26b310c1408febcdbd25fa89cd26df58c5d79d4548122"

# 2x2 blocks (numerators over 35) substituted into the template matrix
RHO_BLOCKS = {
    "a": ((1, -6), (6, -1)),
    "b": ((12, -2), (2, -12)),
    "d": ((12, -2), (2, -12)),
    "s": ((-6, 1), (-1, 6)),
    "t": ((6, -1), (1, -6)),
    "e": ((-1, 6), (-6, 1)),
}


def table_b() -> list[list[int]]:
    return [[int(x) for x in line.split()] for line in B_TEXT.strip().splitlines()]


def table_b_digest() -> str:
    return hashlib.sha256(B_TEXT.encode()).hexdigest()


@dataclass
class Rank64Artifacts:
    B: list[list[int]]
    R: GramLattice
    Q: CyclicCode
    LQ: GluedLattice
    gamma_bar: list[TwistedPermutation]
    gamma_gens: list[linalg.IntMatrix]
    M_rho: list[list[int]] | None = None  # numerators over 35, ambient basis E, rows are images
    checks: dict = field(default_factory=dict)


def build_code() -> CyclicCode:
    Q = gqr_code(GQR, N)
    B = table_b()
    expected = code_from_rows(N, M, [[int(i == j) for j in range(16)] + B[i] for i in range(16)])
    if Q != expected:
        raise ConstructionFailure("GQR code differs from the embedded [I_16 | B]")
    if [r[16:] for r in Q.rows] != B or not Q.is_systematic():
        raise ConstructionFailure("canonical form of Q is not [I_16 | B]")
    return Q


def build_all(with_rho: bool = True) -> Rank64Artifacts:
    if table_b_digest() != B_SHA256:
        raise ConstructionFailure("embedded table B fails its checksum")
    R = GramLattice(R_GRAM, "R")
    D = discriminant_group(R, generator=GENERATOR)
    Q = build_code()
    LQ = glue(R, M, Q, D)
    gens = gamma_bar(Q, H_R, P)
    lifts = orthogonal_lifts(R, D)
    mats = [lift_automorphism(LQ, g, lifts) for g in gens]
    art = Rank64Artifacts(table_b(), R, Q, LQ, gens, mats)
    if with_rho:
        art.M_rho = build_rho()
    return art


def template_symbol(mu: int, nu: int, p: int = P) -> str:
    """Entry of the quadratic residue template at points (mu, nu); p stands for infinity."""
    inf = p
    if mu == inf:
        return "b" if nu == inf else "a"
    if nu == inf:
        return "e"
    if mu == nu:
        return "d"
    return "s" if legendre(mu - nu, p) == 1 else "t"


def build_rho(transpose_template: bool = False) -> list[list[int]]:
    """Numerators (over 35) of M_rho in the basis E; row 2i + k is the image of e_(k+1)^(i)."""
    order = arrangement(P).order
    out = [[0] * (2 * M) for _ in range(2 * M)]
    for I, mu in enumerate(order):
        for J, nu in enumerate(order):
            sym = template_symbol(nu, mu) if transpose_template else template_symbol(mu, nu)
            blk = RHO_BLOCKS[sym]
            for a in range(2):
                for b in range(2):
                    out[2 * I + a][2 * J + b] = blk[a][b]
    return out


def ambient_gram() -> linalg.IntMatrix:
    return linalg.block_diag(*([[list(r) for r in R_GRAM]] * M))


def e_vector(i: int, k: int) -> list[Fraction]:
    """e_k^(i) (copy i from 0, k in {1, 2}) in ambient coordinates."""
    v = [Fraction(0)] * (2 * M)
    v[2 * i + k - 1] = Fraction(1)
    return v


def e_coordinates(LQ: GluedLattice) -> list[tuple[int, ...]]:
    """The 64 vectors of E in glued-basis coordinates."""
    out = []
    for i in range(M):
        for k in (1, 2):
            c = LQ.integral_coordinates(e_vector(i, k))
            if c is None:
                raise ConstructionFailure("E is not contained in L_Q")
            out.append(tuple(c))
    return out


def rho_checks(Mr: list[list[int]], LQ: GluedLattice) -> dict:
    G = ambient_gram()
    P_ = linalg.matmul(linalg.matmul(Mr, G), linalg.transpose(Mr))
    orthogonal = all(P_[i][j] == N * N * G[i][j] for i in range(2 * M) for j in range(2 * M))
    pair_plus = []
    pair_minus = []
    for i in range(M):
        row1, row2 = Mr[2 * i], Mr[2 * i + 1]
        pair_plus.append(Fraction(linalg.dot(G[2 * i], row1), N))
        pair_minus.append(Fraction(linalg.dot(G[2 * i + 1], row2), N))
    norms = {Fraction(linalg.bilinear(r, G, r), N * N) for r in Mr}
    gen_basis = linalg.hnf_mod_lattice(Mr, N, 2 * M)
    generated = [tuple(r) for r in gen_basis] == [tuple(r) for r in LQ.numerators]
    e_only_index = LQ.index()  # <E> = R^32
    # does M_rho map L_Q into itself?
    leaves = 0
    for row in LQ.numerators:
        img = linalg.matvec_row(row, Mr)
        if LQ.integral_coordinates([Fraction(x, N * N) for x in img]) is None:
            leaves += 1
    return {
        "rho_orthogonal": orthogonal,
        "pair_e1_f_plus_all_2": all(x == 2 for x in pair_plus),
        "pair_e2_f_minus_all_minus_2": all(x == -2 for x in pair_minus),
        "rho_image_norms": sorted(str(x) for x in norms),
        "E_and_E_rho_generate_LQ": generated,
        "E_alone_index": e_only_index,
        "rho_basis_images_outside_LQ": leaves,
    }


def second_construction_check(art: Rank64Artifacts) -> dict:
    if art.M_rho is None:
        art.M_rho = build_rho()
    rep = rho_checks(art.M_rho, art.LQ)
    rep["ok"] = (
        rep["rho_orthogonal"]
        and rep["pair_e1_f_plus_all_2"]
        and rep["pair_e2_f_minus_all_minus_2"]
        and rep["rho_image_norms"] == ["6"]
        and rep["E_and_E_rho_generate_LQ"]
        and rep["E_alone_index"] == N**16
        and rep["rho_basis_images_outside_LQ"] > 0
    )
    return rep


def pm_e_points(art: Rank64Artifacts) -> list[tuple[int, ...]]:
    E = e_coordinates(art.LQ)
    return E + [tuple(-x for x in v) for v in E]


def gamma_check(art: Rank64Artifacts) -> dict:
    G = [list(r) for r in art.LQ.gram]
    preserve = [preserves_gram(Mx, G) for Mx in art.gamma_gens]
    pts = pm_e_points(art)
    index = {v: i for i, v in enumerate(pts)}
    orb = orbit(pts[0], art.gamma_gens)
    orbit_is_pm_e = orb == set(pts)
    perms = []
    for Mx in art.gamma_gens:
        perms.append(tuple(index[tuple(linalg.matvec_row(v, Mx))] for v in pts))
    order = perm_group_order(perms, len(pts))
    neg = tuple(index[tuple(-x for x in v)] for v in pts)
    E = [list(v) for v in pts[: 2 * M]]
    det_E = linalg.det_exact(E)
    rep = {
        "generators": len(perms),
        "generators_preserve_gram": all(preserve),
        "orbit_size": len(orb),
        "orbit_equals_pm_E": orbit_is_pm_e,
        "order_on_pm_E": order,
        "minus_identity_in_group": perm_group_contains(perms, neg, len(pts)),
        "E_spans_ambient": det_E != 0,
        "E_det": abs(det_E),
    }
    rep["ok"] = (
        rep["generators_preserve_gram"]
        and len(orb) == 128
        and orbit_is_pm_e
        and order == 59520
        and rep["minus_identity_in_group"]
        and rep["E_spans_ambient"]
    )
    return rep


def construction_check(art: Rank64Artifacts) -> dict:
    Q, LQ = art.Q, art.LQ
    D = LQ.disc
    det = linalg.det_exact([list(r) for r in LQ.gram])
    rep = {
        "table_b_checksum": table_b_digest() == B_SHA256,
        "canonical_form_is_I_B": Q.is_systematic() and [r[16:] for r in Q.rows] == art.B,
        "code_size_is_35^16": cardinality(Q) == N**16,
        "isotropic": isotropy_check(Q, D),
        "rank": LQ.rank,
        "even": all(LQ.gram[i][i] % 2 == 0 for i in range(LQ.rank)),
        "det": det,
        "index": LQ.index(),
    }
    rep["ok"] = (
        rep["table_b_checksum"]
        and rep["canonical_form_is_I_B"]
        and rep["code_size_is_35^16"]
        and rep["isotropic"]
        and rep["rank"] == 64
        and rep["even"]
        and det == 1
    )
    return rep
