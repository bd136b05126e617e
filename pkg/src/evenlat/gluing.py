"""Overlattices L_C = pr^-1(C) of R^m and lifts of code automorphisms.

Ambient coordinates are coordinates in the basis E of R^m (x) Q made of
the m copies of the basis of R.  Glued basis vectors are stored as integer
numerator rows over the common denominator N = |D_R|.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from . import linalg
from .codes import CyclicCode, isotropy_check
from .errors import DomainError, EvennessError, NotAnAutomorphism, UnsupportedError
from .lattice import DiscriminantGroup, GramLattice, discriminant_group, lattice_automorphisms
from .linalg import ExactVector, IntMatrix
from .symmetry import TwistedPermutation, preserves


class OddOverlattice(EvennessError):
    """The code is not totally isotropic, so pr^-1(C) is not an even lattice."""


@dataclass(frozen=True, eq=False)
class GluedLattice:
    base: GramLattice
    copies: int
    code: CyclicCode
    disc: DiscriminantGroup
    numerators: tuple[tuple[int, ...], ...]  # rows; the basis is numerators / denominator
    denominator: int
    gram: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.gram)

    @cached_property
    def lattice(self) -> GramLattice:
        return GramLattice(self.gram, f"L_C over {self.base.label or 'R'}^{self.copies}", check=False)

    @cached_property
    def ambient_gram(self) -> IntMatrix:
        return linalg.block_diag(*([self.base.gram] * self.copies))

    def to_ambient(self, coords: Sequence[int]) -> ExactVector:
        return ExactVector(tuple(linalg.matvec_row(coords, self.numerators)), self.denominator)

    def coordinates(self, v: ExactVector | Sequence) -> list[Fraction]:
        """Solve c * basis = v; rational in general, integral iff v lies in L_C."""
        if not isinstance(v, ExactVector):
            v = ExactVector.from_fractions(v)
        B = self.numerators
        n = len(B)
        # c * B = N * v with B upper triangular (row-style HNF)
        target = [Fraction(x * self.denominator, v.denominator) for x in v.numerators]
        c: list[Fraction] = [Fraction(0)] * n
        for j in range(n):
            s = target[j] - sum(c[i] * B[i][j] for i in range(j) if c[i] and B[i][j])
            c[j] = s / B[j][j]
        return c

    def integral_coordinates(self, v) -> list[int] | None:
        c = self.coordinates(v)
        if any(x.denominator != 1 for x in c):
            return None
        return [int(x) for x in c]

    def contains(self, v) -> bool:
        return self.integral_coordinates(v) is not None

    def index(self) -> int:
        """[L_C : R^m] from the basis determinant."""
        det = 1
        for i, row in enumerate(self.numerators):
            det *= row[i]
        return self.denominator ** self.rank // det


def _lift_rows(R: GramLattice, m: int, C: CyclicCode, D: DiscriminantGroup) -> tuple[IntMatrix, int]:
    N = C.modulus
    g = D.generators[0]
    if g.denominator != N:
        raise DomainError("generator denominator differs from the code modulus")
    rows = []
    for word in C.rows:
        row = []
        for a in word:
            row.extend(a * x for x in g.numerators)
        rows.append(row)
    return rows, N


def _check_inputs(R: GramLattice, m: int, C: CyclicCode, D: DiscriminantGroup | None) -> DiscriminantGroup:
    if D is None:
        D = discriminant_group(R)
    if not D.is_cyclic or D.order != C.modulus:
        raise DomainError(f"D_R has invariant factors {D.invariant_factors}, code is over Z/{C.modulus}")
    if C.length != m:
        raise DomainError(f"code length {C.length} differs from number of copies {m}")
    return D


def overlattice_gram(R: GramLattice, m: int, C: CyclicCode, D: DiscriminantGroup | None = None):
    """Rational Gram matrix of pr^-1(C) without the isotropy requirement."""
    D = _check_inputs(R, m, C, D)
    rows, N = _lift_rows(R, m, C, D)
    B = linalg.hnf_mod_lattice(rows, N, m * R.rank)
    G = linalg.block_diag(*([R.gram] * m))
    BG = linalg.matmul(B, G)
    return [[Fraction(linalg.dot(x, y), N * N) for y in B] for x in BG]


def glue(R: GramLattice, m: int, C: CyclicCode, D: DiscriminantGroup | None = None) -> GluedLattice:
    """The even overlattice L_C of R^m cut out by a totally isotropic code."""
    D = _check_inputs(R, m, C, D)
    if not isotropy_check(C, D):
        raise OddOverlattice("odd overlattice: code is not totally isotropic")
    rows, N = _lift_rows(R, m, C, D)
    n = m * R.rank
    B = linalg.hnf_mod_lattice(rows, N, n)
    G = linalg.block_diag(*([R.gram] * m))
    BG = linalg.matmul(B, G)
    NN = N * N
    gram = []
    for x in BG:
        row = []
        for y in B:
            val, rem = divmod(linalg.dot(x, y), NN)
            if rem:
                raise OddOverlattice("glued Gram matrix is not integral")
            row.append(val)
        gram.append(tuple(row))
    return GluedLattice(R, m, C, D, tuple(tuple(r) for r in B), N, tuple(gram))


# ---------------------------------------------------------------------------
# lifting automorphisms


def unit_of(M: IntMatrix, D: DiscriminantGroup) -> int:
    """eta_R(M): the unit k with g M = k g mod R for the generator g of cyclic D."""
    g = D.generators[0].to_fractions()
    gM = [sum(g[i] * M[i][j] for i in range(len(g))) for j in range(len(g))]
    for k in range(D.order):
        if all((a - k * b).denominator == 1 for a, b in zip(gM, g)):
            return k
    raise DomainError("matrix does not act on the discriminant group")


def orthogonal_lifts(R: GramLattice, D: DiscriminantGroup | None = None) -> dict[int, IntMatrix]:
    """Map each unit of H(R) = eta_R(O(R)) to its lift in O(R).

    Raises UnsupportedError if eta_R is not injective, since lifts would not
    be unique.
    """
    if D is None:
        D = discriminant_group(R)
    lifts: dict[int, IntMatrix] = {}
    auts = lattice_automorphisms(R)
    for M in auts:
        k = unit_of(M, D)
        if k in lifts:
            raise UnsupportedError("eta_R is not injective; lifts are not unique")
        lifts[k] = M
    return lifts


def ambient_matrix(g: TwistedPermutation, lifts: dict[int, IntMatrix], r: int) -> IntMatrix:
    """Block-monomial matrix of the lift of g on ambient coordinates (row vectors)."""
    m = g.length
    A = linalg.zeros(m * r, m * r)
    for i in range(m):
        j = g.perm[i]
        h = lifts.get(g.twists[j])
        if h is None:
            raise UnsupportedError(f"twist {g.twists[j]} has no lift in O(R)")
        for a in range(r):
            for b in range(r):
                A[i * r + a][j * r + b] = h[a][b]
    return A


def ambient_to_glued(Lc: GluedLattice, A: Sequence[Sequence]) -> IntMatrix:
    """Re-express an ambient linear map (row-vector convention) in the glued basis.

    Raises NotAnAutomorphism if some basis image leaves L_C.
    """
    out = []
    for row in Lc.numerators:
        img = ExactVector.from_fractions([Fraction(x, Lc.denominator) for x in linalg.matvec_row(row, A)])
        c = Lc.integral_coordinates(img)
        if c is None:
            raise NotAnAutomorphism("map does not preserve the glued lattice")
        out.append(c)
    return out


def lift_automorphism(Lc: GluedLattice, g: TwistedPermutation, lifts: dict[int, IntMatrix] | None = None) -> IntMatrix:
    """Integral matrix (glued basis, row vectors) of the lift of a code automorphism."""
    if lifts is None:
        lifts = orthogonal_lifts(Lc.base, Lc.disc)
    if not preserves(Lc.code, g):
        raise NotAnAutomorphism("twisted permutation does not preserve the code")
    A = ambient_matrix(g, lifts, Lc.base.rank)
    return ambient_to_glued(Lc, A)


def preserves_gram(M: Sequence[Sequence[int]], G: Sequence[Sequence[int]]) -> bool:
    return linalg.matmul(linalg.matmul(M, G), linalg.transpose(M)) == [list(r) for r in G]
