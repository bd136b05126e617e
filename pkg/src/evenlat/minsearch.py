"""Coset minima lambda(n), the bound mu(w) and the backtrack search for short codewords.

For a codeword w the coset pr^-1(w) of R^m has minimum norm
mu(w) = sum_i lambda(w_i), so min(L_C) is the smaller of min(R) and the
minimum of mu over nonzero codewords.

The search walks the Howell rows of the code depth-first.  Every codeword
has exactly one coefficient vector (c_r in [0, N/p_r)), and after choosing
c_0 .. c_r all positions before the next pivot column are final, which is
what the pruning works on.
"""

from __future__ import annotations

import hashlib
import math
import struct
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from . import linalg
from .codes import CyclicCode
from .errors import BudgetExceeded, DomainError, ParseError, UnsupportedError
from .lattice import GramLattice, discriminant_group
from .projective import arrangement
from .symmetry import gamma_bar


@dataclass(frozen=True)
class LambdaTable:
    modulus: int
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.values) != self.modulus:
            raise DomainError("lambda table length differs from its modulus")

    def __getitem__(self, n: int) -> Fraction:
        return self.values[n % self.modulus]

    @property
    def scale(self) -> int:
        """Common denominator of the table."""
        return math.lcm(*(v.denominator for v in self.values))

    def scaled(self) -> list[int]:
        s = self.scale
        return [int(v * s) for v in self.values]

    def invariant_units(self) -> tuple[int, ...]:
        """Units k with lambda(k n) = lambda(n) for all n."""
        N = self.modulus
        return tuple(
            k for k in range(N) if math.gcd(k, N) == 1 and all(self.values[k * n % N] == self.values[n] for n in range(N))
        )


def lambda_table(R: GramLattice) -> LambdaTable:
    """Minimum norm of each coset n*g + R of the cyclic discriminant group."""
    D = discriminant_group(R)
    if not D.is_cyclic:
        raise UnsupportedError(f"discriminant group {D.invariant_factors} is not cyclic")
    if R.rank > 4:
        raise UnsupportedError("lambda_table enumerates boxes; rank above 4 is not supported")
    N = D.order
    g = D.generators[0].to_fractions()
    G = R.gram
    r = R.rank
    Ginv = linalg.inverse_rational(G)

    def norm(x):
        return sum(x[i] * G[i][j] * x[j] for i in range(r) for j in range(r))

    values = []
    for n in range(N):
        x0 = [n * gi - math.floor(n * gi) for gi in g]
        best = norm(x0)
        # any x with x.G.x <= best has x_i^2 <= best * (G^-1)_ii
        ranges = []
        for i in range(r):
            bound = best * Ginv[i][i]
            rad = math.isqrt(bound.numerator // bound.denominator) + 1
            ranges.append(range(math.floor(-rad - x0[i]), math.ceil(rad - x0[i]) + 1))
        for y in product(*ranges):
            x = [a + b for a, b in zip(x0, y)]
            v = norm(x)
            if v < best:
                best = v
        values.append(best)
    return LambdaTable(N, tuple(values))


def mu(w: Sequence[int], T: LambdaTable) -> Fraction:
    return sum((T[x] for x in w), Fraction(0))


def _check_modulus(C: CyclicCode, T: LambdaTable):
    if C.modulus != T.modulus:
        raise DomainError(f"code over Z/{C.modulus} with a lambda table over Z/{T.modulus}")


def min_mu_bruteforce(C: CyclicCode, T: LambdaTable, cap: int = 10**7) -> tuple[Fraction, tuple[int, ...]]:
    """Exact minimum of mu over nonzero codewords, with a witness."""
    _check_modulus(C, T)
    if not C.howell:
        raise DomainError("no nonzero codeword")
    size = 1
    for _, p in C.pivots:
        size *= C.modulus // p
    if size > cap:
        raise BudgetExceeded(f"code has {size} words, above the cap {cap}", None)
    best = None
    for w in C.words():
        if any(w):
            v = mu(w, T)
            if best is None or v < best[0]:
                best = (v, tuple(w))
    return best


# ---------------------------------------------------------------------------
# canonical representatives


@dataclass(frozen=True)
class Canonicity:
    """Symmetry data for the orbit conditions on arranged P^1(F_p) positions.

    ``units`` is a group of units fixing lambda; the diagonal elements
    delta(k) always preserve a code, so the conditions on the first three
    positions alone are valid for every code.  With ``p`` set, the code is
    known to carry the group above PSL2(p) (pure eta and zeta, twists in
    ``units``) and the lambda-maximality conditions are used as well.
    """

    units: tuple[int, ...]
    p: int | None = None

    def stabilizer(self, n: int, N: int, within=None) -> tuple[int, ...]:
        base = self.units if within is None else within
        return tuple(k for k in base if k * n % N == n % N)


def canonicity_for(C: CyclicCode, T: LambdaTable, p: int | None = None, units=None) -> Canonicity:
    """Build and validate the symmetry data used by the canonicity pruning."""
    _check_modulus(C, T)
    if units is None:
        units = T.invariant_units()
    units = tuple(sorted({u % C.modulus for u in units}))
    inv = set(T.invariant_units())
    if not set(units) <= inv:
        raise DomainError("units do not preserve lambda")
    if p is None:
        return Canonicity(units)
    gens = gamma_bar(C, units, p)  # raises when the group cannot be built
    for g in gens:
        if not set(g.twists) <= set(units):
            raise DomainError("generator twist outside the unit group")
    return Canonicity(units, p)


# ---------------------------------------------------------------------------
# backtrack search


@dataclass
class SearchConfig:
    bound: Fraction
    node_budget: int = 10**6
    worker_count: int = 1
    checkpoint_path: str | None = None
    canonicity: bool = True
    split_levels: int = 2

    def __post_init__(self):
        self.bound = Fraction(self.bound)
        if self.bound <= 0:
            raise DomainError("bound must be positive")
        if self.node_budget < 1:
            raise DomainError("node budget must be at least 1")


@dataclass
class WorkItem:
    prefix: tuple[int, ...]
    path: tuple[int, ...] | None  # next node to visit; None once finished

    @property
    def done(self) -> bool:
        return self.path is None


@dataclass
class SearchState:
    digest: bytes
    items: list[WorkItem]
    nodes: int = 0


@dataclass
class Verdict:
    kind: str  # "none", "witness" or "exhausted"
    nodes: int
    witness: tuple[int, ...] | None = None
    mu: Fraction | None = None
    state: SearchState | None = None

    def as_dict(self) -> dict:
        out = {"verdict": self.kind, "nodes": self.nodes}
        if self.witness is not None:
            out["witness"] = list(self.witness)
            out["mu"] = str(self.mu)
        if self.state is not None:
            out["pending_items"] = sum(not it.done for it in self.state.items)
        return out


@dataclass
class _Context:
    N: int
    m: int
    rows: list[list[int]]
    ranges: list[int]
    ends: list[int]  # positions final after level r
    lam: list[int]
    bound: int
    units: tuple[int, ...] | None
    p: int | None
    squares: tuple[int, int] = (0, 0)

    def check(self, w, lo: int, hi: int, acc: int) -> int | None:
        """Extend the lambda sum over positions [lo, hi); None when the node is pruned."""
        lam = self.lam
        for j in range(lo, hi):
            acc += lam[w[j]]
        if acc > self.bound:
            return None
        if self.units is not None and not self._canonical(w, lo, hi):
            return None
        return acc

    def _canonical(self, w, lo: int, hi: int) -> bool:
        N, lam = self.N, self.lam
        full = self.p is not None
        for j in range(lo, hi):
            x = w[j]
            if j == 0:
                if any(k * x % N > x for k in self.units):
                    return False
                continue
            if full:
                if lam[x] > lam[w[0]]:
                    return False
                if j >= 2 and lam[x] > lam[w[1]]:
                    return False
                s0, s1 = self.squares
                if s0 < j < s1:
                    a = w[s0]
                    if lam[x] > lam[a] or (lam[x] == lam[a] and x > a):
                        return False
            if j == 1:
                st = [k for k in self.units if k * w[0] % N == w[0]]
                if any(k * x % N > x for k in st):
                    return False
            elif j == 2:
                st = [k for k in self.units if k * w[0] % N == w[0] and k * w[1] % N == w[1]]
                if any(k * x % N > x for k in st):
                    return False
        return True


def _make_context(C: CyclicCode, T: LambdaTable, cfg: SearchConfig, sym: Canonicity | None) -> _Context:
    N, m = C.modulus, C.length
    rows = C.rows
    piv = C.pivots
    ranges = [N // p for _, p in piv]
    ends = [piv[r + 1][0] if r + 1 < len(piv) else m for r in range(len(piv))]
    scale = T.scale
    bound = math.floor(cfg.bound * scale)
    units = None
    p = None
    squares = (0, 0)
    if cfg.canonicity:
        if sym is None:
            sym = Canonicity(T.invariant_units())
        units = sym.units
        if sym.p is not None:
            if sym.p + 1 != m:
                raise DomainError(f"canonicity for P^1(F_{sym.p}) on a code of length {m}")
            p = sym.p
            arr = arrangement(p)
            squares = (arr.squares.start, arr.squares.stop)
    return _Context(N, m, rows, ranges, ends, T.scaled(), bound, units, p, squares)


def _digest(C: CyclicCode, T: LambdaTable, cfg: SearchConfig, sym: Canonicity | None) -> bytes:
    h = hashlib.sha256()
    h.update(repr((C.modulus, C.length, C.howell)).encode())
    h.update(repr([str(v) for v in T.values]).encode())
    h.update(repr((str(cfg.bound), cfg.canonicity, cfg.split_levels)).encode())
    if cfg.canonicity and sym is not None:
        h.update(repr((sym.units, sym.p)).encode())
    return h.digest()


def _initial_items(ctx: _Context, levels: int) -> list[WorkItem]:
    depth = min(levels, len(ctx.rows))
    if depth == 0:
        return [WorkItem((), (0,))]
    return [WorkItem(pre, pre) for pre in product(*(range(ctx.ranges[r]) for r in range(depth)))]


def _word_for(ctx: _Context, path: Sequence[int]) -> list[list[int]]:
    """Word after each level of a coefficient path."""
    N = ctx.N
    w = [0] * ctx.m
    words = []
    for r, c in enumerate(path):
        if c:
            row = ctx.rows[r]
            w = [(x + c * y) % N for x, y in zip(w, row)]
        words.append(w)
    return words


def _run_item(ctx: _Context, item: WorkItem, quota: int):
    """Depth-first search below a fixed prefix.

    Returns (next path or None when finished, nodes used, witness or None).
    """
    if item.path is None:
        return None, 0, None
    top = len(item.prefix)
    last = len(ctx.rows) - 1
    N = ctx.N
    path = list(item.path)
    # words[r] and accs[r] belong to the ancestors (levels below the current node)
    words = _word_for(ctx, path[:-1])
    accs = []
    acc = 0
    for r in range(len(path) - 1):
        acc = ctx.check(words[r], ctx.ends[r - 1] if r else 0, ctx.ends[r], acc)
        if acc is None:  # a prefix level is already pruned, so is the whole unit
            return None, 0, None
        accs.append(acc)
    nodes = 0
    while True:
        if nodes >= quota:
            return tuple(path), nodes, None
        nodes += 1
        d = len(path) - 1
        c = path[d]
        prev = words[d - 1] if d else None
        if prev is None:
            w = [c * y % N for y in ctx.rows[0]]
        elif c:
            w = [(x + c * y) % N for x, y in zip(prev, ctx.rows[d])]
        else:
            w = prev
        acc = ctx.check(w, ctx.ends[d - 1] if d else 0, ctx.ends[d], accs[d - 1] if d else 0)
        if acc is not None:
            if d < last:
                words.append(w)
                accs.append(acc)
                path.append(0)
                continue
            if any(w):
                return None, nodes, tuple(w)
        # next sibling, climbing out of exhausted levels but never above the prefix
        while True:
            d = len(path) - 1
            if d < top or d < 0:
                return None, nodes, None
            path[d] += 1
            if path[d] < ctx.ranges[d]:
                break
            path.pop()
            if d > 0:
                words.pop()
                accs.pop()


def _run_item_packed(args):
    ctx, item, quota = args
    return _run_item(ctx, item, quota)


def min_mu_backtrack(
    C: CyclicCode,
    T: LambdaTable,
    cfg: SearchConfig,
    sym: Canonicity | None = None,
    resume: SearchState | str | None = None,
) -> Verdict:
    """Search for a nonzero codeword with mu(w) <= cfg.bound.

    With canonicity on, only orbit representatives are visited, so an
    exhausted search still certifies that no such codeword exists.  When the
    node budget runs out the verdict carries a resumable state (also written
    to ``cfg.checkpoint_path`` if set).
    """
    _check_modulus(C, T)
    ctx = _make_context(C, T, cfg, sym)
    digest = _digest(C, T, cfg, sym)
    if isinstance(resume, str):
        resume = read_checkpoint(resume)
    if resume is not None:
        if resume.digest != digest:
            raise DomainError("checkpoint belongs to a different search")
        state = SearchState(digest, [WorkItem(it.prefix, it.path) for it in resume.items], resume.nodes)
    else:
        state = SearchState(digest, _initial_items(ctx, cfg.split_levels))
    if not ctx.rows:
        return Verdict("none", state.nodes)

    budget = cfg.node_budget
    pool = ProcessPoolExecutor(cfg.worker_count) if cfg.worker_count > 1 else None
    try:
        while budget > 0:
            pending = [i for i, it in enumerate(state.items) if not it.done]
            if not pending:
                return Verdict("none", state.nodes)
            pending = pending[:budget]
            quota = budget // len(pending)
            jobs = [(ctx, state.items[i], quota) for i in pending]
            if pool is not None:
                results = list(pool.map(_run_item_packed, jobs, chunksize=max(1, len(jobs) // (4 * cfg.worker_count))))
            else:
                results = []
                for job in jobs:
                    res = _run_item_packed(job)
                    results.append(res)
                    if res[2] is not None:
                        break
            for i, (path, used, witness) in zip(pending, results):
                state.nodes += used
                budget -= used
                if witness is not None:
                    return Verdict("witness", state.nodes, witness, mu(witness, T))
                state.items[i].path = path
        if all(it.done for it in state.items):
            return Verdict("none", state.nodes)
    finally:
        if pool is not None:
            pool.shutdown()
    if cfg.checkpoint_path:
        write_checkpoint(cfg.checkpoint_path, state)
    return Verdict("exhausted", state.nodes, state=state)


# ---------------------------------------------------------------------------
# checkpoint files

_MAGIC = b"EVLCKPT\x00"
_VERSION = 1


def encode_state(state: SearchState) -> bytes:
    out = [_MAGIC, struct.pack("<H", _VERSION), state.digest, struct.pack("<QI", state.nodes, len(state.items))]
    for it in state.items:
        out.append(struct.pack("<H", len(it.prefix)))
        out.append(struct.pack(f"<{len(it.prefix)}I", *it.prefix))
        if it.path is None:
            out.append(struct.pack("<B", 1))
        else:
            out.append(struct.pack("<BH", 0, len(it.path)))
            out.append(struct.pack(f"<{len(it.path)}I", *it.path))
    return b"".join(out)


def decode_state(data: bytes) -> SearchState:
    try:
        if data[:8] != _MAGIC:
            raise ParseError("not a search checkpoint")
        (version,) = struct.unpack_from("<H", data, 8)
        if version != _VERSION:
            raise ParseError(f"unsupported checkpoint version {version}")
        digest = data[10:42]
        nodes, count = struct.unpack_from("<QI", data, 42)
        off = 54
        items = []
        for _ in range(count):
            (plen,) = struct.unpack_from("<H", data, off)
            off += 2
            prefix = struct.unpack_from(f"<{plen}I", data, off)
            off += 4 * plen
            (done,) = struct.unpack_from("<B", data, off)
            off += 1
            path = None
            if not done:
                (n,) = struct.unpack_from("<H", data, off)
                off += 2
                path = struct.unpack_from(f"<{n}I", data, off)
                off += 4 * n
            items.append(WorkItem(tuple(prefix), None if path is None else tuple(path)))
        if off != len(data):
            raise ParseError("trailing bytes in checkpoint")
    except struct.error as exc:
        raise ParseError(f"truncated checkpoint: {exc}") from None
    return SearchState(digest, items, nodes)


def write_checkpoint(path: str, state: SearchState) -> None:
    with open(path, "wb") as fh:
        fh.write(encode_state(state))


def read_checkpoint(path: str) -> SearchState:
    with open(path, "rb") as fh:
        return decode_state(fh.read())


# ---------------------------------------------------------------------------


@dataclass
class MinimumReport:
    value: int | None  # exact minimum when known
    lower_bound: int
    exact: bool
    statement: str


def min_glued(min_R: int, verdict: Verdict | None = None, bound: Fraction | None = None, min_mu: Fraction | None = None) -> MinimumReport:
    """Combine min(R) with what is known about mu over nonzero codewords.

    Either ``min_mu`` (the exact minimum of mu) or a "none" verdict at
    ``bound`` must be given.  Norms in an even lattice are even, so "no
    codeword with mu <= b" means mu >= 2*floor(b/2) + 2.
    """
    if min_mu is not None:
        v = min(Fraction(min_R), Fraction(min_mu))
        return MinimumReport(int(v), int(v), True, f"min = {v}")
    if verdict is None or bound is None:
        raise DomainError("need either the exact min of mu or a search verdict with its bound")
    if verdict.kind == "witness":
        v = min(Fraction(min_R), verdict.mu)
        return MinimumReport(None, 0, False, f"min <= {v}")
    if verdict.kind != "none":
        return MinimumReport(None, 0, False, "search incomplete; no bound certified")
    e = 2 * math.floor(Fraction(bound) / 2) + 2
    if min_R <= e:
        return MinimumReport(min_R, min_R, True, f"min = {min_R}")
    return MinimumReport(None, e, False, f"min >= {e}")
