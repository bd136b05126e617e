"""Command-line interface: ``evenlat <command> ...``.

Exit status is 0 when every check passes, 1 when a mathematical check
fails and 2 for malformed input or usage errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import formats, linalg
from .codes import GqrParams, cardinality, gqr_code, isotropy_check
from .errors import LatticeError, ParseError
from .gluing import glue, orthogonal_lifts
from .lattice import GramLattice, discriminant_group, lattice_invariants, theta_prefix
from .minsearch import SearchConfig, canonicity_for, lambda_table, min_mu_backtrack
from .projective import is_prime
from .symmetry import gamma_bar, twisted_group_order
from .theta import extremal_theta

SCHEMA = 1


@dataclass
class Report:
    command: str
    inputs: list = field(default_factory=list)
    checks: list = field(default_factory=list)
    result: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)

    def check(self, name: str, ok: bool, value=None) -> None:
        if any(c["name"] == name for c in self.checks):
            raise ValueError(f"duplicate check name {name}")
        self.checks.append({"name": name, "pass": bool(ok), "value": _jsonable(value)})

    def add_input(self, path: str) -> None:
        data = Path(path).read_bytes()
        self.inputs.append({"path": str(path), "sha256": hashlib.sha256(data).hexdigest()})

    @property
    def ok(self) -> bool:
        return all(c["pass"] for c in self.checks)

    def as_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "command": self.command,
            "inputs": self.inputs,
            "checks": self.checks,
            "result": _jsonable(self.result),
            "timings": self.timings,
        }

    def human(self) -> str:
        lines = [f"{self.command}:"]
        for c in self.checks:
            mark = "PASS" if c["pass"] else "FAIL"
            val = "" if c["value"] is None else f" ({c['value']})"
            lines.append(f"  [{mark}] {c['name']}{val}")
        return "\n".join(lines)


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        seq = sorted(x) if isinstance(x, (set, frozenset)) else x
        return [_jsonable(v) for v in seq]
    if isinstance(x, bytes):
        return x.hex()
    if isinstance(x, int) and not isinstance(x, bool) and abs(x) > 2**53:
        return str(x)
    return x


def _read(path: str, report: Report) -> str:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    report.add_input(path)
    return text


def _lattice(path: str, report: Report) -> GramLattice:
    return GramLattice(formats.parse_matrix(_read(path, report)), Path(path).stem)


def _seed(args) -> int:
    if args.seed is None:
        print("notice: no --seed given, using seed 0", file=sys.stderr)
        return 0
    return args.seed


# ---------------------------------------------------------------------------
# commands


def cmd_code(args, rep: Report) -> None:
    if args.action == "gqr":
        C = gqr_code(GqrParams(args.p, *args.params), args.modulus)
    else:
        C = formats.parse_code(_read(args.code, rep))
    size = cardinality(C)
    rep.result.update({"modulus": C.modulus, "length": C.length, "size": size, "rows": C.rows})
    rep.check("nonzero_code", bool(C.howell), len(C.rows))
    if args.lattice:
        R = _lattice(args.lattice, rep)
        D = discriminant_group(R)
        rep.check("isotropic", isotropy_check(C, D))
        rep.check("self_dual_size", size * size == C.modulus**C.length, size)
    if args.out:
        Path(args.out).write_text(formats.format_code(C))


def cmd_glue(args, rep: Report) -> None:
    R = _lattice(args.base, rep)
    C = formats.parse_code(_read(args.code, rep))
    D = discriminant_group(R)
    iso = isotropy_check(C, D)
    rep.check("isotropic", iso)
    if not iso:
        return
    Lc = glue(R, C.length, C, D)
    inv = lattice_invariants(Lc.lattice)
    rep.check("even", inv.even)
    rep.check("index_is_code_size", Lc.index() == cardinality(C), Lc.index())
    rep.result.update({"rank": inv.rank, "det": inv.determinant, "unimodular": inv.unimodular, "index": Lc.index()})
    if args.out:
        Path(args.out).write_text(formats.format_matrix(Lc.gram))


def _units(args, rep: Report, C) -> list[int]:
    if args.units:
        return [u % C.modulus for u in args.units]
    if args.lattice:
        return sorted(orthogonal_lifts(_lattice(args.lattice, rep)))
    return [1, C.modulus - 1]


def cmd_sym(args, rep: Report) -> None:
    C = formats.parse_code(_read(args.code, rep))
    p = args.p if args.p else C.length - 1
    H = _units(args, rep, C)
    gens = gamma_bar(C, H, p)
    order = twisted_group_order(gens, H)
    for g in gens:
        print("perm", " ".join(map(str, g.perm)))
        print("twist", " ".join(map(str, g.twists)))
    print("order", order)
    rep.result.update({"p": p, "units": H, "order": order, "generators": [{"perm": g.perm, "twists": g.twists} for g in gens]})
    if args.expect_order is not None:
        rep.check("order", order == args.expect_order, order)


def cmd_minsearch(args, rep: Report) -> None:
    C = formats.parse_code(_read(args.code, rep))
    R = _lattice(args.lattice, rep)
    T = lambda_table(R)
    sym = None
    if not args.no_canonicity:
        p = args.p if args.p else C.length - 1
        try:
            sym = canonicity_for(C, T, p if is_prime(p) and p > 2 else None)
        except LatticeError as exc:
            print(f"notice: full canonicity unavailable ({exc}); using the diagonal conditions only", file=sys.stderr)
            sym = canonicity_for(C, T)
    cfg = SearchConfig(
        Fraction(args.bound),
        node_budget=int(float(args.budget)),
        worker_count=args.workers,
        checkpoint_path=args.checkpoint,
        canonicity=not args.no_canonicity,
    )
    t0 = time.perf_counter()
    v = min_mu_backtrack(C, T, cfg, sym=sym, resume=args.resume)
    out = v.as_dict()
    out["wall_time"] = round(time.perf_counter() - t0, 3)
    print(json.dumps(out, sort_keys=True))
    rep.result.update({k: val for k, val in out.items() if k != "wall_time"})
    rep.timings["search_ms"] = round(1000 * out["wall_time"])
    if args.expect is not None:
        rep.check("verdict", v.kind == args.expect, v.kind)


def cmd_shortvec(args, rep: Report) -> None:
    from .shortvec import random_short_search

    L = _lattice(args.lattice, rep)
    seed = _seed(args)
    S = random_short_search(L, args.target, args.attempts, seed=seed, workers=args.workers)
    rep.result.update({"found": len(S), "target": args.target, "seed": seed, "attempts": args.attempts})
    rep.check("norms_exact", all(L.norm(v) == args.target for v in S.vectors), len(S))
    if args.min_found:
        rep.check("found_at_least", len(S) >= args.min_found, len(S))
    if args.out:
        Path(args.out).write_text(formats.format_vectors(S.vectors, L.rank, args.target))
    print(f"found {len(S)} vectors of norm {args.target}")


def cmd_theta(args, rep: Report) -> None:
    if args.lattice:
        L = _lattice(args.lattice, rep)
        coeffs = theta_prefix(L, 2 * args.terms)
    else:
        coeffs = extremal_theta(args.rank, args.terms)
    sys.stdout.write(formats.format_theta(coeffs))
    rep.result["coefficients"] = coeffs


def cmd_lll(args, rep: Report) -> None:
    G = formats.parse_matrix(_read(args.gram, rep))
    res = linalg.lll_reduce(G, delta=Fraction(args.delta))
    Gl = [list(r) for r in G]
    ok = linalg.matmul(linalg.matmul(res.transform, Gl), linalg.transpose(res.transform)) == res.gram
    rep.check("transform_consistent", ok)
    rep.check("unimodular", abs(linalg.det_exact(res.transform)) == 1)
    rep.check("complete", res.complete, res.swaps)
    rep.result["diagonal"] = [res.gram[i][i] for i in range(len(G))]
    sys.stdout.write(formats.format_matrix(res.gram))
    if args.out:
        Path(args.out).write_text(formats.format_matrix(res.gram))
    if args.transform_out:
        Path(args.transform_out).write_text(formats.format_matrix(res.transform))


def cmd_rank64(args, rep: Report) -> None:
    from . import rank64

    art = rank64.build_all()
    cons = rank64.construction_check(art)
    for k in ("table_b_checksum", "canonical_form_is_I_B", "code_size_is_35^16", "isotropic", "even"):
        rep.check(k, cons[k])
    rep.check("rank_64", cons["rank"] == 64, cons["rank"])
    rep.check("det_1", cons["det"] == 1, cons["det"])
    rep.result.update({"even": cons["even"], "det": cons["det"], "rank": cons["rank"]})
    if not args.skip_gamma:
        g = rank64.gamma_check(art)
        rep.check("gamma_generators_preserve_gram", g["generators_preserve_gram"])
        rep.check("gamma_order_59520", g["order_on_pm_E"] == 59520, g["order_on_pm_E"])
        rep.check("orbit_e1_is_pm_E", g["orbit_equals_pm_E"] and g["orbit_size"] == 128, g["orbit_size"])
        rep.check("minus_identity_in_gamma", g["minus_identity_in_group"])
    s = rank64.second_construction_check(art)
    rep.check("rho_orthogonal", s["rho_orthogonal"])
    rep.check("rho_pairings", s["pair_e1_f_plus_all_2"] and s["pair_e2_f_minus_all_minus_2"])
    rep.check("E_and_E_rho_generate_LQ", s["E_and_E_rho_generate_LQ"])
    rep.check("rho_does_not_preserve_LQ", s["rho_basis_images_outside_LQ"] > 0, s["rho_basis_images_outside_LQ"])
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "LQ.mat").write_text(formats.format_matrix(art.LQ.gram))
        (out / "Q.code").write_text(formats.format_code(art.Q))
        (out / "gamma_gens.mat").write_text(formats.format_matrix_list(art.gamma_gens))
        (out / "rho.mat").write_text(formats.format_rational_matrix(art.M_rho, rank64.N))
        rep.result["out_dir"] = str(out)


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="evenlat", description="Even unimodular lattices from codes over Z/N.")
    ap.add_argument("--json", metavar="PATH", help="write the machine-readable report here")
    sub = ap.add_subparsers(dest="command", required=True)
    workers_default = os.cpu_count() or 1

    p = sub.add_parser("code", help="build or inspect a code")
    p.add_argument("action", choices=["gqr", "info"])
    p.add_argument("--p", type=int, help="prime for a GQR code")
    p.add_argument("--params", type=int, nargs=6, metavar=("A", "B", "D", "S", "T", "E"))
    p.add_argument("--modulus", type=int)
    p.add_argument("--code", help="code file (for info)")
    p.add_argument("--lattice", help="lattice R whose discriminant form tests isotropy")
    p.add_argument("--out")
    p.set_defaults(func=cmd_code)

    p = sub.add_parser("glue", help="glue copies of R along a code")
    p.add_argument("--base", required=True)
    p.add_argument("--code", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_glue)

    p = sub.add_parser("sym", help="the automorphism group above PSL2(p)")
    p.add_argument("action", choices=["gamma"])
    p.add_argument("--code", required=True)
    p.add_argument("--p", type=int)
    p.add_argument("--units", type=int, nargs="+")
    p.add_argument("--lattice", help="take the units from O(R)")
    p.add_argument("--expect-order", type=int)
    p.set_defaults(func=cmd_sym)

    p = sub.add_parser("minsearch", help="search for codewords with small mu")
    p.add_argument("--code", required=True)
    p.add_argument("--lattice", required=True)
    p.add_argument("--bound", required=True)
    p.add_argument("--budget", default="1e6")
    p.add_argument("--workers", type=int, default=workers_default)
    p.add_argument("--checkpoint")
    p.add_argument("--resume", help="checkpoint file to resume from")
    p.add_argument("--p", type=int)
    p.add_argument("--no-canonicity", action="store_true")
    p.add_argument("--expect", choices=["none", "witness", "exhausted"])
    p.set_defaults(func=cmd_minsearch)

    p = sub.add_parser("shortvec", help="random LLL search for short vectors")
    p.add_argument("action", choices=["search"])
    p.add_argument("--lattice", required=True)
    p.add_argument("--target", type=int, required=True)
    p.add_argument("--attempts", type=int, default=100)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int, default=workers_default)
    p.add_argument("--min-found", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_shortvec)

    p = sub.add_parser("theta", help="theta series coefficients")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--rank", type=int, help="extremal theta series of this rank")
    g.add_argument("--lattice", help="enumerate a lattice")
    p.add_argument("--terms", type=int, required=True)
    p.set_defaults(func=cmd_theta)

    p = sub.add_parser("rank64", help="build and verify the rank-64 lattice")
    p.add_argument("action", choices=["build"])
    p.add_argument("--out-dir")
    p.add_argument("--skip-gamma", action="store_true")
    p.set_defaults(func=cmd_rank64)

    p = sub.add_parser("lll", help="LLL-reduce a Gram matrix")
    p.add_argument("--gram", required=True)
    p.add_argument("--delta", default="99/100")
    p.add_argument("--out")
    p.add_argument("--transform-out")
    p.set_defaults(func=cmd_lll)
    return ap


def run(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    if args.command == "code" and args.action == "gqr" and (args.p is None or args.params is None or args.modulus is None):
        print("error: code gqr needs --p, --params and --modulus", file=sys.stderr)
        return 2
    if args.command == "code" and args.action == "info" and not args.code:
        print("error: code info needs --code", file=sys.stderr)
        return 2
    rep = Report(args.command if not hasattr(args, "action") else f"{args.command} {args.action}")
    t0 = time.perf_counter()
    try:
        args.func(args, rep)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except LatticeError as exc:
        rep.check("completed", False, f"{type(exc).__name__}: {exc}")
    rep.timings["total_ms"] = round(1000 * (time.perf_counter() - t0))
    if rep.checks:
        print(rep.human(), file=sys.stderr)
    if args.json:
        Path(args.json).write_text(json.dumps(rep.as_dict(), indent=2, sort_keys=True) + "\n")
    return 0 if rep.ok else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
