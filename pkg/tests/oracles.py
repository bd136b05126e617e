"""Independent brute-force oracles shared by the test modules."""

import random
from fractions import Fraction

from evenlat.codes import cardinality, code_from_rows
from evenlat.lattice import GramLattice
from evenlat.minsearch import lambda_table, mu

# a lattice with cyclic discriminant group Z/N for each modulus used in random codes
BASES = {
    2: [[2]],
    3: [[2, 1], [1, 2]],
    4: [[4]],
    6: [[6]],
    7: [[2, 1], [1, 4]],
    8: [[8]],
    10: [[10]],
    11: [[2, 1], [1, 6]],
    12: [[12]],
}


def random_code(rng: random.Random, max_size: int = 10**6, max_len: int = 6):
    """A random code over Z/N (N <= 12, m <= max_len, |C| <= max_size) with its base lattice."""
    while True:
        N = rng.choice(sorted(BASES))
        m = rng.randint(1, max_len)
        k = rng.randint(1, min(4, m))
        rows = [[rng.randrange(N) for _ in range(m)] for _ in range(k)]
        C = code_from_rows(N, m, rows)
        if C.howell and cardinality(C) <= max_size:
            return GramLattice(BASES[N]), C


def mu_values(C, T):
    """Sorted mu values of all nonzero codewords."""
    return sorted({mu(w, T) for w in C.words() if any(w)})


def min_norm_by_class(L, R, C, bound):
    """Minimum norm per codeword among glued vectors of norm <= bound (joint enumeration)."""
    from evenlat.lattice import discriminant_group, enum_short_vectors

    D = discriminant_group(R)
    r = R.rank
    out = {}
    for v in enum_short_vectors(L.lattice, bound):
        amb = L.to_ambient(v).to_fractions()
        w = tuple(D.element_of(amb[i * r : (i + 1) * r]) for i in range(C.length))
        n = L.lattice.norm(v)
        if w not in out or n < out[w]:
            out[w] = n
    return out


__all__ = ["BASES", "random_code", "mu_values", "min_norm_by_class", "lambda_table", "Fraction"]
