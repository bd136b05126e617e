"""Codes over Z/N as subgroups of (Z/N)^m.

A code is stored by the Howell form of its generators, so two codes are
equal exactly when their stored matrices are equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from . import linalg
from .errors import DimensionError, DomainError
from .lattice import DiscriminantGroup
from .projective import arrangement, legendre


@dataclass(frozen=True)
class CyclicCode:
    modulus: int
    length: int
    howell: tuple[tuple[int, ...], ...]

    @property
    def rows(self) -> list[list[int]]:
        return [list(r) for r in self.howell]

    @property
    def pivots(self) -> list[tuple[int, int]]:
        return linalg.howell_pivots(self.howell)

    def __contains__(self, w) -> bool:
        return contains(self, w)

    def words(self):
        return linalg.ModSubgroup(self.modulus, self.length, self.howell).elements()

    def is_systematic(self) -> bool:
        """True when the generator matrix has the shape [I_k | B]."""
        return all(c == i and p == 1 for i, (c, p) in enumerate(self.pivots))


def code_from_rows(N: int, m: int, rows) -> CyclicCode:
    rows = [list(r) for r in rows]
    for r in rows:
        if len(r) != m:
            raise DimensionError(f"row of length {len(r)} in a code of length {m}")
    H = linalg.howell_form_mod(rows, N, m)
    return CyclicCode(N, m, tuple(tuple(r) for r in H))


def zero_code(N: int, m: int) -> CyclicCode:
    return CyclicCode(N, m, ())


def cardinality(C: CyclicCode) -> int:
    """|C| = N^m / det(HNF of the rows stacked with N*I_m)."""
    N, m = C.modulus, C.length
    H = linalg.hnf_mod_lattice(C.rows, N, m)
    det = 1
    for i in range(m):
        det *= H[i][i]
    return N**m // det


def contains(C: CyclicCode, w) -> bool:
    if len(w) != C.length:
        raise DimensionError(f"word of length {len(w)} tested against a code of length {C.length}")
    return linalg.reduce_mod(C.howell, w, C.modulus) is not None


def dual_code(C: CyclicCode) -> CyclicCode:
    """Orthogonal complement under the standard dot product mod N."""
    K = linalg.solve_mod_linear(C.rows, C.modulus, C.length) if C.howell else None
    if K is None:
        return code_from_rows(C.modulus, C.length, linalg.identity(C.length))
    return CyclicCode(C.modulus, C.length, K.basis)


@dataclass(frozen=True)
class GqrParams:
    p: int
    a: int
    b: int
    d: int
    s: int
    t: int
    e: int

    def reduced(self, N: int) -> "GqrParams":
        return GqrParams(self.p, *(x % N for x in (self.a, self.b, self.d, self.s, self.t, self.e)))


def gqr_generators(params: GqrParams, N: int) -> list[list[int]]:
    """The words v_inf, v_mu (mu in F_p, in arrangement order) of the GQR code."""
    P = params.reduced(N)
    arr = arrangement(P.p)
    p, INF = P.p, arr.INF

    def v_inf(nu):
        return P.b if nu == INF else P.a

    def v_mu(mu):
        def f(nu):
            if nu == INF:
                return P.e
            if nu == mu:
                return P.d
            return P.s if legendre(mu - nu, p) == 1 else P.t

        return f

    gens = [[v_inf(nu) for nu in arr.order]]
    for mu in arr.order[1:]:
        f = v_mu(mu)
        gens.append([f(nu) for nu in arr.order])
    return gens


def gqr_code(params: GqrParams, N: int) -> CyclicCode:
    gens = gqr_generators(params, N)
    return code_from_rows(N, params.p + 1, gens)


def _check_modulus(C: CyclicCode, D: DiscriminantGroup) -> Fraction:
    if not D.is_cyclic or D.order != C.modulus:
        raise DomainError(f"code over Z/{C.modulus} does not match discriminant group {D.invariant_factors}")
    return D.q(1)


def word_q(w, q1: Fraction) -> Fraction:
    """q^m of a word over a cyclic discriminant group with q(1) = q1."""
    x = q1 * sum(a * a for a in w)
    return x - 2 * (x.numerator // (2 * x.denominator))


def isotropy_check(C: CyclicCode, D: DiscriminantGroup) -> bool:
    """True iff q^m vanishes on C; checked on generators and their pairings."""
    q1 = _check_modulus(C, D)
    rows = C.rows
    for i, g in enumerate(rows):
        if word_q(g, q1) != 0:
            return False
        for h in rows[i + 1 :]:
            if (q1 * sum(a * b for a, b in zip(g, h))).denominator != 1:
                return False
    return True


def isotropy_bruteforce(C: CyclicCode, D: DiscriminantGroup) -> bool:
    q1 = _check_modulus(C, D)
    return all(word_q(w, q1) == 0 for w in C.words())


def span_bruteforce(N: int, rows, m: int) -> set[tuple[int, ...]]:
    """Every Z/N-combination of the rows; for oracles on tiny instances."""
    out = set()
    for coeffs in product(range(N), repeat=len(rows)):
        w = [0] * m
        for c, r in zip(coeffs, rows):
            if c:
                w = [(x + c * y) % N for x, y in zip(w, r)]
        out.add(tuple(w))
    return out
