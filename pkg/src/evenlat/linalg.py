"""Exact integer and rational matrix kernel.

Matrices are plain ``list[list[int]]`` in row-major order; nothing here ever
rounds.  The module provides Smith, Hermite and Howell normal forms, a
fraction-free determinant, linear solving over ``Z/N`` and an integral LLL
reduction that works directly on Gram matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd
from typing import Iterator, Sequence

from .errors import DefinitenessError, DimensionError

IntMatrix = list[list[int]]


# ---------------------------------------------------------------------------
# small helpers


def shape(M: Sequence[Sequence[int]]) -> tuple[int, int]:
    rows = len(M)
    cols = len(M[0]) if rows else 0
    for row in M:
        if len(row) != cols:
            raise DimensionError("ragged matrix")
    return rows, cols


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(r: int, c: int) -> IntMatrix:
    return [[0] * c for _ in range(r)]


def copy(M: Sequence[Sequence[int]]) -> IntMatrix:
    return [list(row) for row in M]


def transpose(M: Sequence[Sequence[int]]) -> IntMatrix:
    return [list(col) for col in zip(*M)]


def matmul(A, B):
    """Product of two matrices; works for ints and Fractions alike."""
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec_row(v, M):
    """Row vector times matrix."""
    n = len(M[0]) if M else 0
    out = [0] * n
    for x, row in zip(v, M):
        if x:
            for j, y in enumerate(row):
                if y:
                    out[j] += x * y
    return out


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def bilinear(u, G, v):
    """u G v^T for row vectors u, v."""
    return dot(matvec_row(u, G), v)


def block_diag(*blocks: Sequence[Sequence[int]]) -> IntMatrix:
    n = sum(len(b) for b in blocks)
    out = zeros(n, n)
    k = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[k + i][k + j] = x
        k += len(b)
    return out


def is_symmetric(M) -> bool:
    n = len(M)
    return all(M[i][j] == M[j][i] for i in range(n) for j in range(i))


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


def unit_normalizer(a: int, N: int) -> int:
    """A unit u of Z/N with u*a = gcd(a, N) mod N."""
    a %= N
    g = gcd(a, N)
    if a == 0:
        return 1
    Np = N // g
    u = pow(a // g, -1, Np) if Np > 1 else 1
    while gcd(u, N) != 1:
        u += Np
    return u % N


def round_div(a: int, b: int) -> int:
    """Nearest integer to a/b (b > 0), halves rounded up."""
    return (2 * a + b) // (2 * b)


# ---------------------------------------------------------------------------
# ExactVector


@dataclass(frozen=True)
class ExactVector:
    """Rational vector as integer numerators over one positive denominator."""

    numerators: tuple[int, ...]
    denominator: int = 1

    def __post_init__(self):
        if self.denominator == 0:
            raise ZeroDivisionError("zero denominator")
        nums = tuple(int(x) for x in self.numerators)
        den = int(self.denominator)
        if den < 0:
            nums, den = tuple(-x for x in nums), -den
        g = den
        for x in nums:
            g = gcd(g, x)
        if not any(nums):
            nums, den = nums, 1
        elif g > 1:
            nums, den = tuple(x // g for x in nums), den // g
        object.__setattr__(self, "numerators", nums)
        object.__setattr__(self, "denominator", den)

    @classmethod
    def from_fractions(cls, entries) -> "ExactVector":
        entries = [Fraction(x) for x in entries]
        den = 1
        for x in entries:
            den = den * x.denominator // gcd(den, x.denominator)
        return cls(tuple(int(x * den) for x in entries), den)

    def to_fractions(self) -> list[Fraction]:
        return [Fraction(x, self.denominator) for x in self.numerators]

    def __len__(self) -> int:
        return len(self.numerators)

    def __add__(self, other: "ExactVector") -> "ExactVector":
        d = self.denominator * other.denominator // gcd(self.denominator, other.denominator)
        a, b = d // self.denominator, d // other.denominator
        return ExactVector(tuple(a * x + b * y for x, y in zip(self.numerators, other.numerators)), d)

    def __neg__(self) -> "ExactVector":
        return ExactVector(tuple(-x for x in self.numerators), self.denominator)

    def __sub__(self, other: "ExactVector") -> "ExactVector":
        return self + (-other)

    def scale(self, k) -> "ExactVector":
        k = Fraction(k)
        return ExactVector(tuple(x * k.numerator for x in self.numerators), self.denominator * k.denominator)

    def is_integral(self) -> bool:
        return self.denominator == 1


# ---------------------------------------------------------------------------
# determinant


def det_exact(M: Sequence[Sequence[int]]) -> int:
    """Determinant by Bareiss fraction-free elimination."""
    n, c = shape(M)
    if n != c:
        raise DimensionError(f"determinant of a non-square {n}x{c} matrix")
    if n == 0:
        return 1
    A = copy(M)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = A[k][k]
        rowk = A[k]
        for i in range(k + 1, n):
            rowi = A[i]
            aik = rowi[k]
            for j in range(k + 1, n):
                rowi[j] = (akk * rowi[j] - aik * rowk[j]) // prev
        prev = akk
    return sign * A[n - 1][n - 1]


def leading_minors(M) -> list[int]:
    """All leading principal minors, computed by one Bareiss pass (no pivoting)."""
    n = len(M)
    A = copy(M)
    out = []
    prev = 1
    for k in range(n):
        out.append(A[k][k])
        if A[k][k] == 0:
            # later minors need pivoting; fall back to direct evaluation
            out.extend(det_exact([row[: j + 1] for row in M[: j + 1]]) for j in range(k + 1, n))
            return out
        akk = A[k][k]
        for i in range(k + 1, n):
            aik = A[i][k]
            for j in range(k + 1, n):
                A[i][j] = (akk * A[i][j] - aik * A[k][j]) // prev
        prev = akk
    return out


def is_positive_definite(G) -> bool:
    return is_symmetric(G) and all(m > 0 for m in leading_minors(G))


def inverse_rational(M) -> list[list[Fraction]]:
    """Exact inverse over Q by Gauss-Jordan on Fractions."""
    n, c = shape(M)
    if n != c:
        raise DimensionError("inverse of a non-square matrix")
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for col in range(n):
        piv = next((i for i in range(col, n) if A[i][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        A[col], A[piv] = A[piv], A[col]
        inv = 1 / A[col][col]
        A[col] = [x * inv for x in A[col]]
        for i in range(n):
            if i != col and A[i][col] != 0:
                f = A[i][col]
                A[i] = [x - f * y for x, y in zip(A[i], A[col])]
    return [row[n:] for row in A]


# ---------------------------------------------------------------------------
# Smith normal form


def smith_normal_form(M: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (U, D, V) with U*M*V = D, U and V unimodular, D in Smith form."""
    r, c = shape(M)
    A = copy(M)
    U = identity(r)
    V = identity(c)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        A[dst] = [x + q * y for x, y in zip(A[dst], A[src])]
        U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for row in A:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    for t in range(min(r, c)):
        while True:
            best = None
            for i in range(t, r):
                for j in range(t, c):
                    if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            p = A[t][t]
            clean = True
            for i in range(t + 1, r):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    clean = clean and A[i][t] == 0
            for j in range(t + 1, c):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    clean = clean and A[t][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, r) for j in range(t + 1, c) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
    return U, A, V


def invariant_factors(M) -> list[int]:
    _, D, _ = smith_normal_form(M)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


# ---------------------------------------------------------------------------
# Hermite normal form


def hermite_normal_form(M: Sequence[Sequence[int]], ncols: int | None = None) -> IntMatrix:
    """Row-style HNF of the row lattice of M (zero rows dropped).

    Pivots are positive and the entries above each pivot lie in [0, pivot).
    """
    A = [list(row) for row in M if any(row)]
    if not A:
        return []
    n = len(A[0]) if ncols is None else ncols
    r = 0
    for c in range(n):
        if r >= len(A):
            break
        for i in range(r + 1, len(A)):
            b = A[i][c]
            if b == 0:
                continue
            a = A[r][c]
            if a == 0:
                A[r], A[i] = A[i], A[r]
                continue
            if b % a == 0:
                q = b // a
                A[i] = [y - q * x for x, y in zip(A[r], A[i])]
                continue
            g, s, t = xgcd(a, b)
            ag, bg = a // g, b // g
            ra, ri = A[r], A[i]
            A[r] = [s * x + t * y for x, y in zip(ra, ri)]
            A[i] = [ag * y - bg * x for x, y in zip(ra, ri)]
        if A[r][c] == 0:
            continue
        if A[r][c] < 0:
            A[r] = [-x for x in A[r]]
        p = A[r][c]
        for i in range(r):
            q = A[i][c] // p
            if q:
                A[i] = [x - q * y for x, y in zip(A[i], A[r])]
        r += 1
        # keep rows below short by dropping zero rows
        A = A[:r] + [row for row in A[r:] if any(row)]
    return A[:r]


# ---------------------------------------------------------------------------
# Howell form and linear algebra over Z/N


def howell_form_mod(M: Sequence[Sequence[int]], N: int, ncols: int | None = None) -> IntMatrix:
    """Howell canonical form of the row span of M over Z/N.

    Two generator matrices span the same subgroup of (Z/N)^m exactly when
    their Howell forms coincide.
    """
    if N < 2:
        raise ValueError("modulus must be at least 2")
    if ncols is None:
        ncols = len(M[0]) if M else 0
    A = [[x % N for x in row] for row in M]
    A = [row for row in A if any(row)]
    r = 0
    pivots = []
    for c in range(ncols):
        if r >= len(A):
            break
        for i in range(r, len(A)):
            if A[i][c]:
                A[r], A[i] = A[i], A[r]
                break
        else:
            continue
        for i in range(r + 1, len(A)):
            b = A[i][c]
            if b == 0:
                continue
            a = A[r][c]
            g, s, t = xgcd(a, b)
            ag, bg = a // g, b // g
            ra, ri = A[r], A[i]
            A[r] = [(s * x + t * y) % N for x, y in zip(ra, ri)]
            A[i] = [(ag * y - bg * x) % N for x, y in zip(ra, ri)]
        u = unit_normalizer(A[r][c], N)
        if u != 1:
            A[r] = [(u * x) % N for x in A[r]]
        p = A[r][c]
        ann = [(N // p * x) % N for x in A[r]]
        pivots.append((c, p))
        r += 1
        A = A[:r] + [row for row in A[r:] if any(row)]
        if any(ann):
            A.append(ann)
    A = A[:r]
    for k, (c, p) in enumerate(pivots):
        for i in range(k):
            q = A[i][c] // p
            if q:
                A[i] = [(x - q * y) % N for x, y in zip(A[i], A[k])]
    return A


def hnf_mod_lattice(M: Sequence[Sequence[int]], N: int, ncols: int | None = None) -> IntMatrix:
    """Square row HNF of the lattice spanned by M together with N * Z^n.

    Computed through the Howell form mod N, which avoids the coefficient
    growth of a plain integer HNF.  Equals ``hermite_normal_form(M + N*I)``.
    """
    if ncols is None:
        ncols = len(M[0]) if M else 0
    H = howell_form_mod(M, N, ncols) if M else []
    by_col = {c: row for row, (c, _) in zip(H, howell_pivots(H))}
    return [list(by_col[j]) if j in by_col else [N * int(i == j) for i in range(ncols)] for j in range(ncols)]


def howell_pivots(H: Sequence[Sequence[int]]) -> list[tuple[int, int]]:
    """(column, pivot value) for every row of an echelon matrix."""
    out = []
    for row in H:
        c = next(j for j, x in enumerate(row) if x)
        out.append((c, row[c]))
    return out


def reduce_mod(H: Sequence[Sequence[int]], w: Sequence[int], N: int) -> list[int] | None:
    """Reduce w against a Howell form; return coefficients or None if w is outside the span."""
    w = [x % N for x in w]
    coeffs = []
    col = 0
    for row in H:
        c = next(j for j, x in enumerate(row) if x)
        if any(w[col:c]):
            return None
        p = row[c]
        if w[c] % p:
            return None
        q = w[c] // p
        coeffs.append(q)
        if q:
            w = [(x - q * y) % N for x, y in zip(w, row)]
        col = c + 1
    if any(w):
        return None
    return coeffs


@dataclass(frozen=True)
class ModSubgroup:
    """A subgroup of (Z/N)^n held by its Howell form."""

    modulus: int
    length: int
    basis: tuple[tuple[int, ...], ...]

    @classmethod
    def from_generators(cls, rows, N: int, n: int) -> "ModSubgroup":
        H = howell_form_mod(rows, N, n)
        return cls(N, n, tuple(tuple(r) for r in H))

    @property
    def order(self) -> int:
        out = 1
        for _, p in howell_pivots(self.basis):
            out *= self.modulus // p
        return out

    def __contains__(self, w) -> bool:
        return reduce_mod(self.basis, w, self.modulus) is not None

    def elements(self) -> Iterator[tuple[int, ...]]:
        N, n = self.modulus, self.length
        ranges = [range(N // p) for _, p in howell_pivots(self.basis)]
        for coeffs in product(*ranges):
            w = [0] * n
            for q, row in zip(coeffs, self.basis):
                if q:
                    w = [(x + q * y) % N for x, y in zip(w, row)]
            yield tuple(w)

    def __iter__(self):
        return self.elements()


def solve_mod_linear(A: Sequence[Sequence[int]], N: int, n: int | None = None) -> ModSubgroup:
    """All x in (Z/N)^n with A x = 0 mod N, as a subgroup.

    Uses the Howell form of [A^T | I]: rows vanishing on the A^T block span
    exactly the kernel.
    """
    k = len(A)
    if n is None:
        if not k:
            raise DimensionError("number of unknowns required for an empty system")
        n = len(A[0])
    aug = [[A[i][j] % N for i in range(k)] + [int(j == l) for l in range(n)] for j in range(n)]
    H = howell_form_mod(aug, N, k + n)
    kernel = [row[k:] for row in H if not any(row[:k])]
    return ModSubgroup.from_generators(kernel, N, n)


# ---------------------------------------------------------------------------
# LLL


@dataclass
class LLLResult:
    gram: IntMatrix
    transform: IntMatrix
    complete: bool = True
    swaps: int = 0

    def __iter__(self):
        # allows ``G2, U = lll_reduce(G)``
        return iter((self.gram, self.transform))


def lll_reduce(G: Sequence[Sequence[int]], delta=Fraction(99, 100), max_swaps: int = 10**6) -> LLLResult:
    """Integral LLL on a positive definite Gram matrix.

    Returns G' = U G U^T and U.  Gram-Schmidt data are the integers
    d_i (leading minors) and lambda_ij = d_j * mu_ij, so everything is exact.
    ``complete`` is False only if ``max_swaps`` was hit.
    """
    delta = Fraction(delta)
    if not (Fraction(1, 4) < delta <= 1):
        raise ValueError("delta must lie in (1/4, 1]")
    n, c = shape(G)
    if n != c or not is_symmetric(G):
        raise DefinitenessError("Gram matrix must be square and symmetric")
    dp, dq = delta.numerator, delta.denominator
    B = copy(G)
    U = identity(n)
    if n == 0:
        return LLLResult(B, U)
    d = [0] * (n + 1)  # d[0] = 1, d[i+1] = d_i of basis vectors 0..i
    d[0] = 1
    lam = zeros(n, n)
    if B[0][0] <= 0:
        raise DefinitenessError("Gram matrix is not positive definite")
    d[1] = B[0][0]

    def red(k, l):
        if 2 * abs(lam[k][l]) <= d[l + 1]:
            return
        q = round_div(lam[k][l], d[l + 1])
        # b_k <- b_k - q b_l, applied to row and column k of the Gram matrix
        Bk, Bl = B[k], B[l]
        bkk, bkl, bll = Bk[k], Bk[l], Bl[l]
        for j in range(n):
            if j != k:
                v = Bk[j] - q * Bl[j]
                Bk[j] = v
                B[j][k] = v
        Bk[k] = bkk - 2 * q * bkl + q * q * bll
        U[k] = [x - q * y for x, y in zip(U[k], U[l])]
        lam[k][l] -= q * d[l + 1]
        for i in range(l):
            lam[k][i] -= q * lam[l][i]

    def swap(k):
        B[k], B[k - 1] = B[k - 1], B[k]
        for row in B:
            row[k], row[k - 1] = row[k - 1], row[k]
        U[k], U[k - 1] = U[k - 1], U[k]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lm = lam[k][k - 1]
        Bnew = (d[k - 1] * d[k + 1] + lm * lm) // d[k]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k + 1] * lam[i][k - 1] - lm * t) // d[k]
            lam[i][k - 1] = (Bnew * t + lm * lam[i][k]) // d[k + 1]
        d[k] = Bnew

    k = 1
    kmax = 0
    swaps = 0
    complete = True
    while k < n:
        if k > kmax:
            kmax = k
            for j in range(k + 1):
                u = B[k][j]
                for i in range(j):
                    u = (d[i + 1] * u - lam[k][i] * lam[j][i]) // d[i]
                if j < k:
                    lam[k][j] = u
                else:
                    if u <= 0:
                        raise DefinitenessError("Gram matrix is not positive definite")
                    d[k + 1] = u
        red(k, k - 1)
        lm = lam[k][k - 1]
        if dq * d[k + 1] * d[k - 1] < dp * d[k] * d[k] - dq * lm * lm:
            if swaps >= max_swaps:
                complete = False
                break
            swap(k)
            swaps += 1
            k = max(1, k - 1)
        else:
            for l in range(k - 2, -1, -1):
                red(k, l)
            k += 1
    return LLLResult(B, U, complete, swaps)
