"""Monomial code automorphisms and the group above PSL2(p).

Group elements act from the right.  A :class:`TwistedPermutation` ``g``
with permutation ``perm`` (``perm[i]`` is the image of position ``i``) and
twists ``x`` sends a word ``w`` to ``w^g`` with
``(w^g)[perm[i]] = x[perm[i]] * w[i]``, and ``g1 * g2`` means "first g1,
then g2".
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from . import linalg
from .codes import CyclicCode, code_from_rows
from .errors import BudgetExceeded, ConstructionFailure, DomainError, MalformedCode
from .projective import Arrangement, arrangement, psl2_generators  # noqa: F401  (re-exported)

Perm = tuple[int, ...]


# ---------------------------------------------------------------------------
# permutations


def perm_mul(a: Sequence[int], b: Sequence[int]) -> Perm:
    """First a, then b."""
    return tuple(b[x] for x in a)


def perm_inv(a: Sequence[int]) -> Perm:
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


def perm_identity(n: int) -> Perm:
    return tuple(range(n))


def is_identity(a: Sequence[int]) -> bool:
    return all(i == x for i, x in enumerate(a))


def _transversal(b: int, gens: list[Perm], n: int) -> dict[int, Perm]:
    T = {b: perm_identity(n)}
    queue = [b]
    for p in queue:
        u = T[p]
        for s in gens:
            q = s[p]
            if q not in T:
                T[q] = perm_mul(u, s)
                queue.append(q)
    return T


def stabilizer_chain(generators: Iterable[Sequence[int]], n: int | None = None):
    """Deterministic Schreier-Sims; returns (base, transversals)."""
    gens = [tuple(g) for g in generators]
    if n is None:
        n = len(gens[0]) if gens else 0
    gens = [g for g in gens if not is_identity(g)]
    base: list[int] = []
    for g in gens:
        if all(g[b] == b for b in base):
            base.append(next(x for x in range(n) if g[x] != x))
    S = [[g for g in gens if all(g[b] == b for b in base[:i])] for i in range(len(base))]
    T = [_transversal(base[i], S[i], n) for i in range(len(base))]

    def sift(g, start):
        for l in range(start, len(base)):
            beta = g[base[l]]
            if beta not in T[l]:
                return g, l
            g = perm_mul(g, perm_inv(T[l][beta]))
        return g, len(base)

    i = len(base) - 1
    while i >= 0:
        restart = False
        for p, u in list(T[i].items()):
            for s in S[i]:
                sg = perm_mul(perm_mul(u, s), perm_inv(T[i][s[p]]))
                h, j = sift(sg, i + 1)
                if is_identity(h):
                    continue
                if j == len(base):
                    base.append(next(x for x in range(n) if h[x] != x))
                    S.append([])
                    T.append({})
                for l in range(i + 1, j + 1):
                    S[l].append(h)
                    T[l] = _transversal(base[l], S[l], n)
                i = j
                restart = True
                break
            if restart:
                break
        if not restart:
            i -= 1
    return base, T


def perm_group_order(generators: Iterable[Sequence[int]], n: int | None = None, cap: int = 10**7) -> int:
    _, T = stabilizer_chain(generators, n)
    order = 1
    for t in T:
        order *= len(t)
    if order > cap:
        raise BudgetExceeded(f"group order {order} exceeds cap {cap}", order)
    return order


def perm_group_contains(generators: Iterable[Sequence[int]], g: Sequence[int], n: int | None = None) -> bool:
    """Membership test by sifting through a stabilizer chain."""
    base, T = stabilizer_chain(generators, n)
    g = tuple(g)
    for b, t in zip(base, T):
        beta = g[b]
        if beta not in t:
            return False
        g = perm_mul(g, perm_inv(t[beta]))
    return is_identity(g)


def perm_orbit(point: int, generators: Iterable[Sequence[int]]) -> set[int]:
    gens = list(generators)
    seen = {point}
    queue = [point]
    for p in queue:
        for g in gens:
            q = g[p]
            if q not in seen:
                seen.add(q)
                queue.append(q)
    return seen


# ---------------------------------------------------------------------------
# twisted permutations


@dataclass(frozen=True)
class TwistedPermutation:
    perm: Perm
    twists: tuple[int, ...]
    modulus: int

    @classmethod
    def identity(cls, m: int, N: int) -> "TwistedPermutation":
        return cls(perm_identity(m), (1,) * m, N)

    @classmethod
    def pure(cls, perm: Sequence[int], N: int) -> "TwistedPermutation":
        return cls(tuple(perm), (1,) * len(perm), N)

    @classmethod
    def diagonal(cls, h: int, m: int, N: int) -> "TwistedPermutation":
        return cls(perm_identity(m), (h % N,) * m, N)

    def __post_init__(self):
        if len(self.perm) != len(self.twists):
            raise DomainError("permutation and twist vector differ in length")
        object.__setattr__(self, "twists", tuple(x % self.modulus for x in self.twists))

    @property
    def length(self) -> int:
        return len(self.perm)

    def act(self, w: Sequence[int]) -> list[int]:
        N = self.modulus
        out = [0] * len(w)
        for i, x in enumerate(w):
            j = self.perm[i]
            out[j] = self.twists[j] * x % N
        return out

    def __mul__(self, other: "TwistedPermutation") -> "TwistedPermutation":
        N = self.modulus
        perm = perm_mul(self.perm, other.perm)
        inv2 = perm_inv(other.perm)
        twists = tuple(other.twists[v] * self.twists[inv2[v]] % N for v in range(self.length))
        return TwistedPermutation(perm, twists, N)

    def inverse(self) -> "TwistedPermutation":
        N = self.modulus
        inv = perm_inv(self.perm)
        # (w^g)[perm[i]] = x[perm[i]] w[i]  =>  w[i] = x[perm[i]]^-1 (w^g)[perm[i]]
        twists = tuple(pow(self.twists[self.perm[i]], -1, N) for i in range(self.length))
        return TwistedPermutation(inv, twists, N)

    def point_action(self, units: Sequence[int]) -> Perm:
        """Faithful permutation action on pairs (position, unit) for a unit group."""
        index = {(i, h): i * len(units) + k for i in range(self.length) for k, h in enumerate(units)}
        out = []
        for i in range(self.length):
            for h in units:
                j = self.perm[i]
                out.append(index[(j, self.twists[j] * h % self.modulus)])
        return tuple(out)


def apply_to_code(C: CyclicCode, g: TwistedPermutation) -> CyclicCode:
    return code_from_rows(C.modulus, C.length, [g.act(r) for r in C.rows])


def preserves(C: CyclicCode, g: TwistedPermutation) -> bool:
    return apply_to_code(C, g) == C


def twisted_group_order(gens: Sequence[TwistedPermutation], units: Sequence[int], cap: int = 10**7) -> int:
    """Order of the group generated by twisted permutations whose twists lie in ``units``."""
    units = sorted(set(units))
    return perm_group_order([g.point_action(units) for g in gens], len(units) * gens[0].length, cap)


# ---------------------------------------------------------------------------
# the Lambda(sigma) solver


def code_lattice_basis(C: CyclicCode) -> linalg.IntMatrix:
    """Square HNF basis Z of pr^-1(C) = C + N Z^m inside Z^m."""
    return linalg.hnf_mod_lattice(C.rows, C.modulus, C.length)


def _dual_scaled(Z: linalg.IntMatrix, N: int) -> linalg.IntMatrix:
    inv = linalg.inverse_rational(Z)
    out = []
    for row in inv:
        r = []
        for x in row:
            y = x * N
            if y.denominator != 1:
                raise MalformedCode("N * Z^-1 is not integral")
            r.append(int(y))
        out.append(r)
    return out


def filter_subgroup(S: linalg.ModSubgroup, allowed: set[int]) -> list[tuple[int, ...]]:
    """Elements of S with every coordinate in ``allowed`` (backtracking on the echelon basis)."""
    N, n = S.modulus, S.length
    basis = [list(r) for r in S.basis]
    piv = linalg.howell_pivots(basis)
    k = len(basis)
    bounds = [piv[r + 1][0] if r + 1 < k else n for r in range(k)]
    out = []
    if k == 0:
        if all(0 in allowed for _ in range(n)):
            out.append((0,) * n)
        return out

    def rec(r, w, done):
        if r == k:
            out.append(tuple(w))
            return
        for c in range(N // piv[r][1]):
            w2 = [(x + c * y) % N for x, y in zip(w, basis[r])] if c else w
            if all(w2[j] in allowed for j in range(done, bounds[r])):
                rec(r + 1, w2, bounds[r])

    # columns before the first pivot are identically zero
    if not all(0 in allowed for _ in range(piv[0][0])):
        return out
    rec(0, [0] * n, 0)
    return sorted(out)


def lambda_equations(sigma: Sequence[int], C: CyclicCode) -> linalg.IntMatrix:
    """Rows of the linear system Z^sigma . diag(x) . Z* = 0 mod N in the unknowns x."""
    N, m = C.modulus, C.length
    Z = code_lattice_basis(C)
    Zs = _dual_scaled(Z, N)
    inv = perm_inv(sigma)
    Zsig = [[row[inv[k]] for k in range(m)] for row in Z]
    eqs = set()
    for zrow in Zsig:
        for j in range(m):
            eq = tuple(zrow[k] * Zs[k][j] % N for k in range(m))
            if any(eq):
                eqs.add(eq)
    return [list(e) for e in sorted(eqs)]


def lambda_set(sigma: Sequence[int], C: CyclicCode, H: Sequence[int]) -> list[tuple[int, ...]]:
    """All twist vectors x in H^m with C^(sigma x) = C."""
    N, m = C.modulus, C.length
    eqs = lambda_equations(sigma, C)
    S = linalg.solve_mod_linear(eqs, N, m) if eqs else linalg.ModSubgroup.from_generators(linalg.identity(m), N, m)
    cands = filter_subgroup(S, {h % N for h in H})
    out = []
    for x in cands:
        if preserves(C, TwistedPermutation(tuple(sigma), x, N)):
            out.append(x)
    return out


def unit_group_generators(H: Sequence[int], N: int) -> list[int]:
    """A small generating set of the unit subgroup H (greedy)."""
    H = sorted({h % N for h in H})
    gens: list[int] = []
    span = {1}
    for h in H:
        if h in span:
            continue
        gens.append(h)
        span = set(span)
        changed = True
        while changed:
            changed = False
            for a in list(span):
                for g in gens:
                    b = a * g % N
                    if b not in span:
                        span.add(b)
                        changed = True
    return gens


def gamma_bar(C: CyclicCode, H: Sequence[int], p: int) -> list[TwistedPermutation]:
    """Generators of the preimage of PSL2(p) in Aut_H(C).

    eta and zeta with trivial twists, xi with a twist from Lambda(xi), and
    the diagonal elements delta(h).
    """
    arr = arrangement(p)
    if C.length != arr.length:
        raise DomainError(f"code length {C.length} does not match P^1(F_{p})")
    N = C.modulus
    xi, eta, zeta = psl2_generators(arr)
    gens = []
    for perm in (eta, zeta):
        g = TwistedPermutation.pure(perm, N)
        if not preserves(C, g):
            raise ConstructionFailure("eta/zeta do not preserve the code")
        gens.append(g)
    lam = lambda_set(xi, C, H)
    if not lam:
        raise ConstructionFailure("Lambda(xi) is empty")
    gens.insert(0, TwistedPermutation(xi, lam[0], N))
    for h in unit_group_generators(H, N):
        gens.append(TwistedPermutation.diagonal(h, C.length, N))
    return gens


def closure(gens: Sequence[TwistedPermutation], cap: int = 10**6) -> set[TwistedPermutation]:
    """All group elements by breadth-first closure (small groups only)."""
    m, N = gens[0].length, gens[0].modulus
    e = TwistedPermutation.identity(m, N)
    seen = {e}
    queue = [e]
    for g in queue:
        for s in gens:
            h = g * s
            if h not in seen:
                seen.add(h)
                if len(seen) > cap:
                    raise BudgetExceeded(f"closure exceeded {cap} elements", len(seen))
                queue.append(h)
    return seen
