"""Plain-text file formats.

matrix           "rows cols" header, then one row of integers per line
rational matrix  a matrix followed by a line "denominator D"
matrix list      several matrices one after another
code             "N m k" header, then k generator rows
vector list      "rank count norm" header, then one vector per line
theta            one "k count" line per coefficient

Blank lines and lines starting with '#' are ignored.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .codes import CyclicCode, code_from_rows
from .errors import ParseError


def _lines(text: str) -> list[tuple[int, str]]:
    out = []
    for no, raw in enumerate(text.splitlines(), start=1):
        s = raw.strip()
        if s and not s.startswith("#"):
            out.append((no, s))
    return out


def _ints(no: int, s: str, expect: int | None = None) -> list[int]:
    try:
        vals = [int(x) for x in s.split()]
    except ValueError:
        raise ParseError(f"line {no}: expected integers, got {s!r}") from None
    if expect is not None and len(vals) != expect:
        raise ParseError(f"line {no}: expected {expect} integers, got {len(vals)}")
    return vals


def _read_matrix(lines, pos: int) -> tuple[list[list[int]], int]:
    if pos >= len(lines):
        raise ParseError("missing matrix header")
    no, s = lines[pos]
    r, c = _ints(no, s, 2)
    if r < 0 or c < 0:
        raise ParseError(f"line {no}: negative matrix size")
    if pos + 1 + r > len(lines):
        raise ParseError(f"matrix declares {r} rows but the file ends early")
    rows = [_ints(no2, s2, c) for no2, s2 in lines[pos + 1 : pos + 1 + r]]
    return rows, pos + 1 + r


def format_matrix(M: Sequence[Sequence[int]], ncols: int | None = None) -> str:
    r = len(M)
    c = len(M[0]) if r else (ncols or 0)
    return "\n".join([f"{r} {c}"] + [" ".join(str(x) for x in row) for row in M]) + "\n"


def parse_matrix(text: str) -> list[list[int]]:
    lines = _lines(text)
    M, pos = _read_matrix(lines, 0)
    if pos != len(lines):
        raise ParseError(f"line {lines[pos][0]}: trailing data after matrix")
    return M


def format_rational_matrix(numerators: Sequence[Sequence[int]], denominator: int) -> str:
    return format_matrix(numerators) + f"denominator {denominator}\n"


def parse_rational_matrix(text: str) -> tuple[list[list[int]], int]:
    lines = _lines(text)
    M, pos = _read_matrix(lines, 0)
    if pos != len(lines) - 1:
        raise ParseError("expected exactly one 'denominator D' line after the matrix")
    no, s = lines[pos]
    parts = s.split()
    if len(parts) != 2 or parts[0] != "denominator":
        raise ParseError(f"line {no}: expected 'denominator D'")
    d = _ints(no, parts[1], 1)[0]
    if d <= 0:
        raise ParseError(f"line {no}: denominator must be positive")
    return M, d


def format_matrix_list(mats: Iterable[Sequence[Sequence[int]]]) -> str:
    return "".join(format_matrix(M) for M in mats)


def parse_matrix_list(text: str) -> list[list[list[int]]]:
    lines = _lines(text)
    pos = 0
    out = []
    while pos < len(lines):
        M, pos = _read_matrix(lines, pos)
        out.append(M)
    return out


def format_code(C: CyclicCode) -> str:
    rows = C.rows
    body = [f"{C.modulus} {C.length} {len(rows)}"] + [" ".join(str(x) for x in r) for r in rows]
    return "\n".join(body) + "\n"


def parse_code(text: str) -> CyclicCode:
    lines = _lines(text)
    if not lines:
        raise ParseError("empty code file")
    no, s = lines[0]
    N, m, k = _ints(no, s, 3)
    if N < 2 or m < 1 or k < 0:
        raise ParseError(f"line {no}: bad code header")
    if len(lines) != k + 1:
        raise ParseError(f"code declares {k} rows, found {len(lines) - 1}")
    rows = [_ints(no2, s2, m) for no2, s2 in lines[1:]]
    return code_from_rows(N, m, rows)


def format_vectors(vectors: Iterable[Sequence[int]], rank: int, norm: int) -> str:
    vs = sorted(tuple(v) for v in vectors)
    return "\n".join([f"{rank} {len(vs)} {norm}"] + [" ".join(str(x) for x in v) for v in vs]) + "\n"


def parse_vectors(text: str) -> tuple[int, int, list[tuple[int, ...]]]:
    """Returns (rank, norm, vectors)."""
    lines = _lines(text)
    if not lines:
        raise ParseError("empty vector file")
    no, s = lines[0]
    rank, count, norm = _ints(no, s, 3)
    if len(lines) != count + 1:
        raise ParseError(f"vector file declares {count} vectors, found {len(lines) - 1}")
    return rank, norm, [tuple(_ints(n2, s2, rank)) for n2, s2 in lines[1:]]


def format_theta(coeffs: Sequence[int]) -> str:
    return "".join(f"{k} {c}\n" for k, c in enumerate(coeffs))


def parse_theta(text: str) -> list[int]:
    out = []
    for no, s in _lines(text):
        k, c = _ints(no, s, 2)
        if k != len(out):
            raise ParseError(f"line {no}: expected index {len(out)}")
        out.append(c)
    return out
