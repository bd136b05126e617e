"""Positive definite integral lattices given by Gram matrices.

Covers the basic predicates, the discriminant group with its quadratic
form, direct sums and rescaling, exact Fincke-Pohst enumeration of short
vectors and theta-series prefixes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from . import linalg
from .errors import BudgetExceeded, DefinitenessError, DomainError, EvennessError, UnsupportedError
from .linalg import ExactVector, IntMatrix


@dataclass(frozen=True)
class GramLattice:
    gram: tuple[tuple[int, ...], ...]
    label: str = ""
    basis: tuple[ExactVector, ...] | None = None

    def __init__(self, gram, label: str = "", basis=None, check: bool = True):
        g = tuple(tuple(int(x) for x in row) for row in gram)
        if check:
            n, c = linalg.shape(g)
            if n != c or n == 0:
                raise DefinitenessError("Gram matrix must be square and non-empty")
            if not linalg.is_positive_definite(g):
                raise DefinitenessError(f"Gram matrix of {label or 'lattice'} is not positive definite")
        object.__setattr__(self, "gram", g)
        object.__setattr__(self, "label", label)
        object.__setattr__(self, "basis", None if basis is None else tuple(basis))

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def matrix(self) -> IntMatrix:
        return [list(row) for row in self.gram]

    def norm(self, v: Sequence[int]) -> int:
        return linalg.bilinear(v, self.gram, v)

    def inner(self, u: Sequence[int], v: Sequence[int]) -> int:
        return linalg.bilinear(u, self.gram, v)

    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))


@dataclass(frozen=True)
class LatticeInvariants:
    even: bool
    determinant: int
    unimodular: bool
    rank: int


def lattice_invariants(L: GramLattice) -> LatticeInvariants:
    det = linalg.det_exact(L.gram)
    return LatticeInvariants(L.is_even(), det, det == 1, L.rank)


def direct_sum(L1: GramLattice, L2: GramLattice) -> GramLattice:
    label = f"{L1.label}+{L2.label}" if L1.label or L2.label else ""
    return GramLattice(linalg.block_diag(L1.gram, L2.gram), label, check=False)


def power(L: GramLattice, m: int) -> GramLattice:
    """Orthogonal direct sum of m copies of L."""
    return GramLattice(linalg.block_diag(*([L.gram] * m)), f"{L.label}^{m}", check=False)


def rescale(L: GramLattice, k: int) -> GramLattice:
    if k < 1:
        raise DomainError("scale factor must be a positive integer")
    if k == 1:
        return L
    return GramLattice([[k * x for x in row] for row in L.gram], f"{L.label}({k})", check=False)


# ---------------------------------------------------------------------------
# discriminant groups


def _mod2(x: Fraction) -> Fraction:
    return x - 2 * (x.numerator // (2 * x.denominator))


def _mod1(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


@dataclass(frozen=True)
class DiscriminantGroup:
    """R^v/R with its Q/2Z-valued form.

    Generators are stored in lattice coordinates (the basis of R, extended
    to R (x) Q); element ``(n_1, ..., n_k)`` is ``sum n_i * generators[i]``.
    For a cyclic group a bare integer n is accepted and means ``n * g``.
    """

    gram: tuple[tuple[int, ...], ...]
    invariant_factors: tuple[int, ...]
    generators: tuple[ExactVector, ...]

    @property
    def order(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    @property
    def is_cyclic(self) -> bool:
        return len(self.invariant_factors) <= 1

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def _coords(self, x) -> tuple[int, ...]:
        if isinstance(x, int):
            x = (x,)
        x = tuple(x)
        if len(x) != len(self.invariant_factors):
            raise DomainError(f"element {x} does not match invariant factors {self.invariant_factors}")
        for a, d in zip(x, self.invariant_factors):
            if not 0 <= a < d:
                raise DomainError(f"residue {a} out of range [0, {d})")
        return x

    def lift(self, x) -> list[Fraction]:
        """A representative of x in R^v, in lattice coordinates."""
        x = self._coords(x)
        n = len(self.gram)
        out = [Fraction(0)] * n
        for a, g in zip(x, self.generators):
            for i, y in enumerate(g.to_fractions()):
                out[i] += a * y
        return out

    def _form(self, u, v) -> Fraction:
        G = self.gram
        return sum(u[i] * G[i][j] * v[j] for i in range(len(G)) for j in range(len(G)) if u[i] and v[j])

    def q(self, x) -> Fraction:
        v = self.lift(x)
        return _mod2(self._form(v, v))

    def b(self, x, y) -> Fraction:
        return _mod1(self._form(self.lift(x), self.lift(y)))

    def elements(self):
        from itertools import product

        if self.is_cyclic:
            yield from range(self.order)
        else:
            yield from product(*(range(d) for d in self.invariant_factors))

    def add(self, x, y):
        if self.is_cyclic and isinstance(x, int):
            return (x + y) % self.order
        x, y = self._coords(x), self._coords(y)
        return tuple((a + b) % d for a, b, d in zip(x, y, self.invariant_factors))

    def element_of(self, v: Sequence[Fraction]):
        """Inverse of ``lift``: the class of a dual vector (cyclic groups only)."""
        if not self.is_cyclic:
            raise UnsupportedError("element_of is only implemented for cyclic groups")
        g = self.generators[0].to_fractions() if self.generators else []
        for n in range(self.order):
            if all((Fraction(a) - n * b).denominator == 1 for a, b in zip(v, g)):
                return n
        raise DomainError("vector is not in the dual lattice")


def _normalize_cyclic_generator(gram, g: ExactVector, N: int) -> ExactVector:
    # Among all generators k*g, prefer the smallest q value, then the
    # lexicographically largest numerator vector reduced mod N.
    best_key, best = None, None
    nums = g.numerators
    den = g.denominator
    for k in range(1, N):
        if gcd(k, N) != 1:
            continue
        cand = ExactVector(tuple((k * x) % den for x in nums), den)
        v = cand.to_fractions()
        n = len(gram)
        qv = _mod2(sum(v[i] * gram[i][j] * v[j] for i in range(n) for j in range(n)))
        key = (qv, tuple(-x for x in cand.numerators))
        if best_key is None or key < best_key:
            best_key, best = key, cand
    return best


def discriminant_group(L: GramLattice, generator: Sequence | None = None) -> DiscriminantGroup:
    """Discriminant group of an even lattice via the Smith form of its Gram.

    ``generator`` (lattice coordinates, rationals) overrides the normalized
    generator of a cyclic group.
    """
    if not L.is_even():
        raise EvennessError("discriminant form needs an even lattice")
    U, D, V = linalg.smith_normal_form(L.gram)
    n = L.rank
    factors, gens = [], []
    for i in range(n):
        d = D[i][i]
        if d > 1:
            factors.append(d)
            gens.append(ExactVector(tuple(V[r][i] % d for r in range(n)), d))
    if len(factors) == 1:
        if generator is not None:
            g = ExactVector.from_fractions(generator)
            D0 = DiscriminantGroup(L.gram, tuple(factors), (g,))
            if g.denominator != factors[0] or not _generates(D0):
                raise DomainError("supplied vector does not generate the discriminant group")
            gens = [g]
        else:
            gens = [_normalize_cyclic_generator(L.gram, gens[0], factors[0])]
    elif generator is not None:
        raise UnsupportedError("a generator override needs a cyclic discriminant group")
    return DiscriminantGroup(L.gram, tuple(factors), tuple(gens))


def _generates(D: DiscriminantGroup) -> bool:
    g = D.generators[0].to_fractions()
    # g must lie in the dual lattice: g G integral
    n = len(D.gram)
    if any(sum(g[i] * D.gram[i][j] for i in range(n)).denominator != 1 for j in range(n)):
        return False
    N = D.invariant_factors[0]
    for p in _prime_factors(N):
        if all((x * (N // p)).denominator == 1 for x in g):
            return False
    return True


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def q_value(D: DiscriminantGroup, x) -> Fraction:
    """q(x) as a rational in [0, 2)."""
    return D.q(x)


def form_automorphisms(D: DiscriminantGroup) -> list[int]:
    """Units k of Z/N with q(kx) = q(x) for all x, for cyclic D of order N."""
    if not D.is_cyclic:
        raise UnsupportedError("form automorphisms are implemented for cyclic groups only")
    N = D.order
    if N == 1:
        return [1]
    q1 = D.q(1)
    return [k for k in range(1, N) if gcd(k, N) == 1 and _mod2(k * k * q1) == q1]


# ---------------------------------------------------------------------------
# short vectors


def _gram_schmidt_form(G) -> tuple[list[Fraction], list[list[Fraction]]]:
    """Return (Bdiag, mu) with x G x^T = sum_i B_i (x_i + sum_{j>i} mu[j][i] x_j)^2.

    The decomposition is the LDL^T one, taken from the last coordinate
    backwards so the enumeration can fix x_{n-1} first.
    """
    n = len(G)
    A = [[Fraction(x) for x in row] for row in G]
    Bd = [Fraction(0)] * n
    mu = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        Bd[i] = A[i][i]
        if Bd[i] <= 0:
            raise DefinitenessError("Gram matrix is not positive definite")
        for j in range(i + 1, n):
            mu[j][i] = A[i][j] / Bd[i]
        for j in range(i + 1, n):
            for k in range(j, n):
                A[j][k] -= mu[j][i] * A[i][k]
                A[k][j] = A[j][k]
    return Bd, mu


def enum_short_vectors(
    L: GramLattice,
    bound: int,
    node_budget: int = 10**7,
    lll: bool = True,
) -> list[tuple[int, ...]]:
    """All nonzero v with v G v^T <= bound, both signs included.

    Exact Fincke-Pohst after LLL preprocessing.  Raises BudgetExceeded
    (with the number of vectors found so far) if ``node_budget`` tree nodes
    are not enough.
    """
    if bound <= 0:
        return []
    G = L.matrix
    n = L.rank
    if lll and n > 1:
        red = linalg.lll_reduce(G)
        Gr, U = red.gram, red.transform
    else:
        Gr, U = G, linalg.identity(n)
    Bd, mu = _gram_schmidt_form(Gr)
    found: list[tuple[int, ...]] = []
    x = [0] * n
    nodes = 0
    T = Fraction(bound)

    def center(i) -> Fraction:
        return sum((mu[j][i] * x[j] for j in range(i + 1, n) if x[j]), Fraction(0))

    # explicit stack of (level, remaining bound, all-higher-zero flag, iterator state)
    def candidates(i, rem, higher_zero):
        c = center(i)
        start = -round(c)
        if higher_zero:
            start = max(start, 0)
        out = []
        y = start
        while Bd[i] * (y + c) ** 2 <= rem:
            out.append((y, rem - Bd[i] * (y + c) ** 2))
            y += 1
        y = start - 1
        lo = 0 if higher_zero else None
        while (lo is None or y >= lo) and Bd[i] * (y + c) ** 2 <= rem:
            out.append((y, rem - Bd[i] * (y + c) ** 2))
            y -= 1
        out.sort()
        return out

    stack = [(n - 1, iter(candidates(n - 1, T, True)), True)]
    while stack:
        i, it, hz = stack[-1]
        nxt = next(it, None)
        if nxt is None:
            stack.pop()
            x[i] = 0
            continue
        nodes += 1
        if nodes > node_budget:
            raise BudgetExceeded(f"short-vector enumeration exceeded {node_budget} nodes", len(found) * 2)
        y, rem = nxt
        x[i] = y
        if i == 0:
            if any(x):
                found.append(tuple(x))
            continue
        stack.append((i - 1, iter(candidates(i - 1, rem, hz and y == 0)), hz and y == 0))
    out = []
    for y in found:
        v = tuple(linalg.matvec_row(y, U))
        out.append(v)
        out.append(tuple(-a for a in v))
    return out


def minimum(L: GramLattice, start: int = 2) -> int:
    """min(L) by enumerating with a growing bound."""
    b = start
    while True:
        vs = enum_short_vectors(L, b)
        if vs:
            return min(L.norm(v) for v in vs)
        b *= 2


def theta_prefix(L: GramLattice, max_norm: int, node_budget: int = 10**7) -> list[int]:
    """Coefficients of q^k, k = 0 .. max_norm // 2, counting vectors of norm 2k."""
    K = max_norm // 2
    coeffs = [1] + [0] * K
    if K == 0:
        return coeffs
    for v in enum_short_vectors(L, 2 * K, node_budget):
        nv = L.norm(v)
        if nv % 2 == 0:
            coeffs[nv // 2] += 1
    return coeffs


def lattice_automorphisms(L: GramLattice, node_budget: int = 10**6) -> list[IntMatrix]:
    """All M with M G M^T = G, for small rank (rows of M are basis images).

    Brute force over short vectors: image of b_i must have norm G_ii and
    the right inner products with the images already chosen.
    """
    G = L.gram
    n = L.rank
    pool = enum_short_vectors(L, max(G[i][i] for i in range(n)), node_budget)
    by_norm: dict[int, list[tuple[int, ...]]] = {}
    for v in pool:
        by_norm.setdefault(L.norm(v), []).append(v)
    out: list[IntMatrix] = []
    chosen: list[tuple[int, ...]] = []

    def extend(i):
        if i == n:
            if abs(linalg.det_exact(chosen)) == 1:
                out.append([list(v) for v in chosen])
            return
        for v in by_norm.get(G[i][i], []):
            if all(L.inner(v, chosen[j]) == G[i][j] for j in range(i)):
                chosen.append(v)
                extend(i + 1)
                chosen.pop()

    extend(0)
    out.sort()
    return out
