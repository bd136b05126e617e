"""Points of P^1(F_p) in the residue arrangement and the PSL2 generators.

A point is an int in ``range(p)`` or ``INF`` (represented as ``p``).  The
arrangement lists infinity, zero, the even powers of the smallest primitive
root and then the odd powers.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .errors import DomainError


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def primitive_root(p: int) -> int:
    if p == 2:
        return 1
    factors = [q for q in range(2, p) if (p - 1) % q == 0 and is_prime(q)]
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in factors):
            return g
    raise DomainError(f"no primitive root mod {p}")


@dataclass(frozen=True)
class Arrangement:
    p: int
    alpha: int
    order: tuple[int, ...]  # INF is encoded as p

    @property
    def INF(self) -> int:
        return self.p

    @property
    def length(self) -> int:
        return self.p + 1

    @cached_property
    def position(self) -> dict[int, int]:
        return {pt: i for i, pt in enumerate(self.order)}

    @property
    def squares(self) -> range:
        """Positions holding the nonzero squares."""
        return range(2, 2 + (self.p - 1) // 2)

    @property
    def nonsquares(self) -> range:
        return range(2 + (self.p - 1) // 2, self.p + 1)

    def label(self, pt: int) -> str:
        return "inf" if pt == self.p else str(pt)

    def point_permutation(self, f) -> list[int]:
        """Turn a map on points into a permutation of positions (image list)."""
        pos = self.position
        return [pos[f(pt)] for pt in self.order]


def arrangement(p: int) -> Arrangement:
    if p < 3 or not is_prime(p):
        raise DomainError(f"{p} is not an odd prime")
    a = primitive_root(p)
    evens = [pow(a, 2 * k, p) for k in range((p - 1) // 2)]
    odds = [pow(a, 2 * k + 1, p) for k in range((p - 1) // 2)]
    return Arrangement(p, a, tuple([p, 0] + evens + odds))


def psl2_generators(arr: Arrangement) -> tuple[list[int], list[int], list[int]]:
    """xi: v -> -1/v, eta: v -> v+1, zeta: v -> alpha^2 v, as position permutations."""
    p, INF = arr.p, arr.p
    a2 = arr.alpha * arr.alpha % p

    def xi(v):
        if v == INF:
            return 0
        if v == 0:
            return INF
        return (-pow(v, -1, p)) % p

    def eta(v):
        return INF if v == INF else (v + 1) % p

    def zeta(v):
        return INF if v == INF else a2 * v % p

    return arr.point_permutation(xi), arr.point_permutation(eta), arr.point_permutation(zeta)
