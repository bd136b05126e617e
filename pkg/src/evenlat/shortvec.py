"""Short vectors: randomized LLL search, orbits under matrix groups, types and embeddings.

Vectors are integer coordinate rows in the lattice basis and matrices act
from the right (v -> v M).
"""

from __future__ import annotations

import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import linalg
from .errors import BudgetExceeded, ClosureError, DomainError
from .lattice import GramLattice

Vec = tuple[int, ...]


@dataclass
class VectorSet:
    lattice: GramLattice
    norm: int
    vectors: set[Vec] = field(default_factory=set)
    complete: bool = False

    def add(self, v: Sequence[int]) -> bool:
        v = tuple(v)
        if self.lattice.norm(v) != self.norm:
            raise DomainError(f"vector of norm {self.lattice.norm(v)} added to a norm-{self.norm} set")
        if v in self.vectors:
            return False
        self.vectors.add(v)
        return True

    def __len__(self) -> int:
        return len(self.vectors)

    def __contains__(self, v) -> bool:
        return tuple(v) in self.vectors

    def __iter__(self):
        return iter(sorted(self.vectors))

    def closed_under_negation(self) -> bool:
        return all(tuple(-x for x in v) in self.vectors for v in self.vectors)


# ---------------------------------------------------------------------------
# random search


def random_unimodular(n: int, rng: random.Random, steps: int = 200) -> linalg.IntMatrix:
    """Product of random elementary operations: row add (coefficient in -2..2), swap, negate."""
    U = linalg.identity(n)
    if n == 0:
        return U
    for _ in range(steps):
        op = rng.randrange(3)
        i = rng.randrange(n)
        if op == 0 and n > 1:
            j = rng.randrange(n - 1)
            j += j >= i
            c = rng.choice((-2, -1, 1, 2))
            U[i] = [a + c * b for a, b in zip(U[i], U[j])]
        elif op == 1:
            j = rng.randrange(n)
            U[i], U[j] = U[j], U[i]
        else:
            U[i] = [-a for a in U[i]]
    return U


def harvest(Gr: Sequence[Sequence[int]], target: int) -> list[tuple[int, ...]]:
    """Coordinate vectors among b_i and b_i +- b_j of a reduced Gram with norm ``target``."""
    n = len(Gr)
    out = []
    for i in range(n):
        if Gr[i][i] == target:
            out.append(tuple(int(k == i) for k in range(n)))
        for j in range(i + 1, n):
            for s in (1, -1):
                if Gr[i][i] + Gr[j][j] + 2 * s * Gr[i][j] == target:
                    out.append(tuple(1 if k == i else s if k == j else 0 for k in range(n)))
    return out


@dataclass
class AttemptResult:
    vectors: list[Vec]
    min_seen: int  # smallest norm among the harvested combinations


def lll_attempt(G: Sequence[Sequence[int]], target: int, seed: int, steps: int = 200, delta=Fraction(1)) -> AttemptResult:
    """One random basis change followed by LLL; returns the target-norm vectors found."""
    n = len(G)
    rng = random.Random(seed)
    U = random_unimodular(n, rng, steps)
    UG = linalg.matmul(linalg.matmul(U, G), linalg.transpose(U))
    res = linalg.lll_reduce(UG, delta=delta)
    W = linalg.matmul(res.transform, U)
    Gr = res.gram
    min_seen = min(
        [Gr[i][i] for i in range(n)]
        + [Gr[i][i] + Gr[j][j] - 2 * abs(Gr[i][j]) for i in range(n) for j in range(i + 1, n)]
    )
    found = []
    for c in harvest(Gr, target):
        v = tuple(linalg.matvec_row(c, W))
        found.append(v)
        found.append(tuple(-x for x in v))
    return AttemptResult(found, min_seen)


def _attempt_packed(args):
    return lll_attempt(*args)


def random_short_search(
    L: GramLattice,
    target: int,
    attempts: int,
    seed: int = 0,
    steps: int = 200,
    workers: int = 1,
    delta=Fraction(1),
) -> VectorSet:
    """Collect vectors of norm ``target`` from randomized LLL reductions.

    Attempt i uses the seed (seed, i), so the output only depends on
    ``seed`` and ``attempts``.  The result is closed under negation.
    """
    out = VectorSet(L, target)
    G = L.matrix
    jobs = [(G, target, seed * 1_000_003 + i, steps, delta) for i in range(attempts)]
    if workers > 1 and attempts > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_attempt_packed, jobs))
    else:
        results = [_attempt_packed(j) for j in jobs]
    for r in results:
        for v in r.vectors:
            out.add(v)
    return out


# ---------------------------------------------------------------------------
# orbits


def matrix_inverse_int(M: Sequence[Sequence[int]]) -> linalg.IntMatrix:
    inv = linalg.inverse_rational(M)
    if any(x.denominator != 1 for row in inv for x in row):
        raise DomainError("matrix is not unimodular")
    return [[int(x) for x in row] for row in inv]


def check_isometries(gens: Sequence[Sequence[Sequence[int]]], G: Sequence[Sequence[int]]) -> None:
    Gl = [list(r) for r in G]
    for k, M in enumerate(gens):
        if linalg.matmul(linalg.matmul(M, Gl), linalg.transpose(M)) != Gl:
            raise DomainError(f"generator {k} is not an isometry")


def _apply(v: Vec, M) -> Vec:
    return tuple(linalg.matvec_row(v, M))


def orbit(v: Sequence[int], gens: Sequence, gram: Sequence[Sequence[int]] | None = None, with_inverses: bool = True, cap: int = 10**7) -> set[Vec]:
    """Breadth-first closure of v under right multiplication by the generators."""
    if gram is not None:
        check_isometries(gens, gram)
    mats = [list(map(list, M)) for M in gens]
    if with_inverses:
        mats += [matrix_inverse_int(M) for M in mats]
    start = tuple(v)
    seen = {start}
    queue = [start]
    for x in queue:
        for M in mats:
            y = _apply(x, M)
            if y not in seen:
                seen.add(y)
                if len(seen) > cap:
                    raise BudgetExceeded(f"orbit exceeded {cap} vectors", len(seen))
                queue.append(y)
    return seen


def orbit_decompose(S: Iterable[Sequence[int]], gens: Sequence, gram=None) -> list[set[Vec]]:
    """Partition S into orbits; raises ClosureError if the action leaves S."""
    remaining = {tuple(v) for v in S}
    if gram is not None:
        check_isometries(gens, gram)
    orbits = []
    for v in sorted(remaining):
        if v not in remaining:
            continue
        o = orbit(v, gens, with_inverses=False)
        if not o <= remaining:
            raise ClosureError("group action escapes the vector set")
        remaining -= o
        orbits.append(o)
    return orbits


def reflection(r: Sequence[int], G: Sequence[Sequence[int]]) -> linalg.IntMatrix:
    """Matrix of the reflection in a vector r with r.r dividing 2 r.x for all x."""
    Gr = linalg.matvec_row(r, G)
    rr = linalg.dot(Gr, r)
    n = len(r)
    M = linalg.identity(n)
    for i in range(n):
        c, rem = divmod(2 * Gr[i], rr)
        if rem:
            raise DomainError("reflection is not integral")
        for j in range(n):
            M[i][j] -= c * r[j]
    return M


# ---------------------------------------------------------------------------
# types and embeddings


@dataclass
class VectorType:
    counts: dict[int, int]
    approximate: bool

    def t(self, m: int) -> int:
        return self.counts.get(m, 0)

    @property
    def tau(self) -> tuple[int, int, int, int, int]:
        return (self.t(0), self.t(1), self.t(2), self.t(3), self.t(6))


def vector_type(v: Sequence[int], S: VectorSet) -> VectorType:
    """Counts of x in S by the pairing <x, v>."""
    Gv = linalg.matvec_row(v, S.lattice.gram)
    c = Counter(linalg.dot(Gv, x) for x in S.vectors)
    return VectorType(dict(c), not S.complete)


@dataclass
class EmbedResult:
    status: str  # "found", "none" or "inconclusive"
    embedding: list[Vec] | None
    nodes: int


def embed_config(
    target: Sequence[Sequence[int]],
    S: VectorSet,
    first_choices: Iterable[Sequence[int]] | None = None,
    node_budget: int = 10**7,
) -> EmbedResult:
    """Find images of e_1 .. e_k in S with prescribed pairwise inner products.

    ``first_choices`` restricts the image of e_1, e.g. to orbit
    representatives when S is a union of orbits of a symmetry group.
    """
    k = len(target)
    if k == 0:
        return EmbedResult("found", [], 0)
    if any(target[i][i] != S.norm for i in range(k)):
        raise DomainError("diagonal of the target Gram must equal the norm of S")
    G = S.lattice.gram
    pool = sorted(S.vectors)
    firsts = pool if first_choices is None else [tuple(v) for v in first_choices]
    for v in firsts:
        if v not in S.vectors:
            raise DomainError("pinned vector is not in S")
    chosen: list[Vec] = []
    nodes = 0

    def rec(i, cands):
        # cands[j] lists the vectors still allowed in slot i + j
        nonlocal nodes
        if i == k:
            return True
        for v in cands[0]:
            nodes += 1
            if nodes > node_budget:
                raise BudgetExceeded("embedding search budget exhausted", list(chosen))
            if v in chosen:
                continue
            dv = linalg.matvec_row(v, G)
            rest = []
            for j, cj in enumerate(cands[1:], start=i + 1):
                want = target[i][j]
                f = [x for x in cj if x != v and linalg.dot(dv, x) == want]
                if not f:
                    break
                rest.append(f)
            else:
                chosen.append(v)
                if rec(i + 1, rest):
                    return True
                chosen.pop()
        return False

    try:
        ok = rec(0, [firsts] + [pool] * (k - 1))
    except BudgetExceeded:
        return EmbedResult("inconclusive", None, nodes)
    return EmbedResult("found" if ok else "none", list(chosen) if ok else None, nodes)
