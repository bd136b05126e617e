"""Exact q-expansions: E4, Delta and the extremal theta series."""

from __future__ import annotations

from .errors import DomainError


def sigma(n: int, k: int) -> int:
    return sum(d**k for d in range(1, n + 1) if n % d == 0)


def series_mul(a: list[int], b: list[int], terms: int) -> list[int]:
    """Product of two power series truncated after q^terms."""
    out = [0] * (terms + 1)
    for i, x in enumerate(a[: terms + 1]):
        if x:
            for j, y in enumerate(b[: terms + 1 - i]):
                out[i + j] += x * y
    return out


def series_pow(a: list[int], e: int, terms: int) -> list[int]:
    out = [1] + [0] * terms
    base = a[: terms + 1] + [0] * max(0, terms + 1 - len(a))
    while e:
        if e & 1:
            out = series_mul(out, base, terms)
        e >>= 1
        if e:
            base = series_mul(base, base, terms)
    return out


def eisenstein_e4(terms: int) -> list[int]:
    return [1] + [240 * sigma(n, 3) for n in range(1, terms + 1)]


def delta(terms: int) -> list[int]:
    """q * prod_{n>=1} (1 - q^n)^24, truncated after q^terms."""
    if terms < 1:
        return [0] * (terms + 1)
    prod = [1] + [0] * terms
    for n in range(1, terms + 1):
        factor = [0] * (terms + 1)
        factor[0] = 1
        factor[n] = -1
        prod = series_mul(prod, series_pow(factor, 24, terms), terms)
    return [0] + prod[:terms]


def extremal_theta(rank: int, terms: int) -> list[int]:
    """Theta series of a putative extremal even unimodular lattice of this rank.

    Returns the coefficients of q^0 .. q^terms.  The series is the unique
    form sum_b c_b E4^(k/4 - 3b) Delta^b of weight k = rank/2 with constant
    term 1 and vanishing coefficients at q^1 .. q^(rank // 24).
    """
    if rank <= 0 or rank % 8:
        raise DomainError("rank must be a positive multiple of 8")
    if terms < 0:
        raise DomainError("terms must be non-negative")
    k = rank // 2
    zeros_needed = rank // 24
    T = max(terms, zeros_needed)
    e4 = eisenstein_e4(T)
    dl = delta(T)
    basis = []
    for b in range(zeros_needed + 1):
        a = (k - 12 * b) // 4
        basis.append(series_mul(series_pow(e4, a, T), series_pow(dl, b, T), T))
    f = list(basis[0])
    # Delta^b starts at q^b with coefficient 1, so the system is unitriangular.
    for b in range(1, zeros_needed + 1):
        c = -f[b]
        if c:
            f = [x + c * y for x, y in zip(f, basis[b])]
    return f[: terms + 1]
