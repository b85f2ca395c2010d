"""Command-line front end: ``nilpieces {maps,poset,polys,verify,census,filtration}``.

Exit status: 0 success, 1 verification failure, 2 usage error, 3 budget refusal.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Callable, Sequence

import numpy as np

from . import maps
from .combinatorics import (
    Bipartition,
    bipartition_leq,
    enumerate_bipartitions,
    is_B2_dist,
    is_B_dist,
    is_C_dist,
    is_special,
)
from .polycount import (
    IntPolynomial,
    exotic_point_poly,
    factored_degrees,
    piece_poly,
    typeB_point_poly,
    typeC_point_poly,
    verify_identities,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
MAX_N = 12
FILTRATION_BUDGET = 2**13

MAPS: dict[str, Callable] = {
    "phiC": maps.phi_C,
    "phiB": maps.phi_B,
    "phiB2": maps.phi_B2,
    "collapseC": maps.collapse_C,
    "collapseB": maps.collapse_B,
    "collapseSpecial": maps.collapse_special,
    "collapseTilde": maps.collapse_tilde,
}

SUBPOSETS: dict[str, Callable[[Bipartition], bool]] = {
    "all": lambda bp: True,
    "B": is_B_dist,
    "C": is_C_dist,
    "special": is_special,
    "B2": is_B2_dist,
}

POLYS: dict[str, tuple[Callable[[Bipartition], bool], Callable[[Bipartition], IntPolynomial]]] = {
    "orbit": (lambda bp: True, exotic_point_poly),
    "B": (is_B_dist, typeB_point_poly),
    "C": (is_C_dist, typeC_point_poly),
    "special": (is_special, lambda bp: piece_poly("special", bp)),
    "tilde": (is_B2_dist, lambda bp: piece_poly("tilde", bp)),
}

CENSUS_CONES = {"exotic": "exotic", "sp2": "C2", "o2": "B2", "spodd": "C-odd", "oodd": "B-odd"}


class UsageError(Exception):
    pass


class BudgetError(Exception):
    pass


# ------------------------------------------------------------------ serialization


def bp_json(bp: Bipartition) -> dict:
    return {"mu": list(bp.mu), "nu": list(bp.nu)}


def _image_json(img):
    return bp_json(img) if isinstance(img, Bipartition) else list(img)


def _image_text(img) -> str:
    return str(img) if isinstance(img, Bipartition) else "(" + ",".join(map(str, img)) + ")"


def dumps(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=False) + "\n"


def _csv_text(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _check_n(n: int) -> None:
    if n < 0 or n > MAX_N:
        raise UsageError(f"n must be between 0 and {MAX_N}")


# ------------------------------------------------------------------ commands


def cmd_maps(n: int, name: str, fmt: str = "text") -> tuple[str, int]:
    _check_n(n)
    if name not in MAPS:
        raise UsageError(f"unknown map {name!r}; choose from {', '.join(MAPS)}")
    f = MAPS[name]
    rows = [(bp, f(bp)) for bp in enumerate_bipartitions(n)]
    if fmt == "json":
        return dumps({"n": n, "map": name, "rows": [{"bp": bp_json(b), "image": _image_json(i)} for b, i in rows]}), EXIT_OK
    if fmt == "csv":
        return _csv_text(["mu", "nu", "image"], [(json.dumps(list(b.mu)), json.dumps(list(b.nu)), _image_text(i)) for b, i in rows]), EXIT_OK
    return "".join(f"{b} -> {_image_text(i)}\n" for b, i in rows), EXIT_OK


def covering_pairs(elements: Sequence[Bipartition]) -> list[tuple[int, int]]:
    """Pairs ``(upper, lower)`` of indices where ``upper`` covers ``lower``."""
    N = len(elements)
    less = np.zeros((N, N), bool)  # less[i, j]: elements[i] < elements[j]
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            if i != j and bipartition_leq(a, b):
                less[i, j] = True
    assert not (less & less.T).any(), "order is not antisymmetric"
    via = (less.astype(np.int64) @ less.astype(np.int64)) > 0
    cover = less & ~via
    return [(int(j), int(i)) for i, j in zip(*np.nonzero(cover))]


def cmd_poset(n: int, kind: str = "all", fmt: str = "dot") -> tuple[str, int]:
    _check_n(n)
    if kind not in SUBPOSETS:
        raise UsageError(f"unknown sub-poset {kind!r}")
    elems = [bp for bp in enumerate_bipartitions(n) if SUBPOSETS[kind](bp)]
    edges = sorted(covering_pairs(elems))
    if fmt == "json":
        return dumps(
            {
                "n": n,
                "kind": kind,
                "nodes": [bp_json(bp) for bp in elems],
                "covers": [{"upper": bp_json(elems[u]), "lower": bp_json(elems[l])} for u, l in edges],
            }
        ), EXIT_OK
    if fmt == "text":
        return "".join(f"{elems[u]} > {elems[l]}\n" for u, l in edges), EXIT_OK
    lines = [f'digraph "Q{n}_{kind}" {{']
    lines += [f'  "{bp}";' for bp in elems]
    lines += [f'  "{elems[u]}" -> "{elems[l]}";' for u, l in edges]
    lines.append("}")
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_polys(n: int, piece: str = "orbit", fmt: str = "text") -> tuple[str, int]:
    _check_n(n)
    if piece not in POLYS:
        raise UsageError(f"unknown piece {piece!r}")
    member, poly = POLYS[piece]
    rows = [(bp, poly(bp)) for bp in enumerate_bipartitions(n) if member(bp)]
    if fmt == "json":
        return dumps(
            {
                "n": n,
                "piece": piece,
                "rows": [{"bp": bp_json(b), "poly": p.to_json(), "factored": factored_degrees(p)} for b, p in rows],
            }
        ), EXIT_OK
    if fmt == "csv":
        return _csv_text(["mu", "nu", "poly", "factored"], [(json.dumps(list(b.mu)), json.dumps(list(b.nu)), str(p), factored_degrees(p)) for b, p in rows]), EXIT_OK
    return "".join(f"{b}: {p}    = {factored_degrees(p)}\n" for b, p in rows), EXIT_OK


def cmd_verify(n: int, fmt: str = "text", overrides=None) -> tuple[str, int]:
    if n < 0:
        raise UsageError("n must be nonnegative")
    rep = verify_identities(n, overrides)
    status = EXIT_OK if rep.ok else EXIT_FAIL
    if fmt == "json":
        return dumps(
            {
                "n": n,
                "ok": rep.ok,
                "checks": len(rep.checks),
                "failures": [{"identity": c.name, "bp": bp_json(c.label), "detail": c.detail} for c in rep.failures],
            }
        ), status
    out = [f"n={n}: {len(rep.checks)} checks, {len(rep.failures)} failures"]
    out += [f"FAIL {c.name} at {c.label}: {c.detail}" for c in rep.failures]
    return "\n".join(out) + "\n", status


def census_payload(rep) -> dict:
    return {
        "cone": rep.cone,
        "n": rep.n,
        "q": rep.q,
        "enumerated": rep.enumerated,
        "nilpotent": rep.nilpotent,
        "ok": rep.ok,
        "lines": [
            {
                "section": l.section,
                "label": bp_json(l.label) if l.label is not None else None,
                "jordan_type": list(l.jordan_type) if l.jordan_type is not None else None,
                "tally": l.tally,
                "expected": l.expected,
                "pass": l.ok,
            }
            for l in rep.lines
        ],
        "checks": rep.checks,
    }


def cmd_census(cone: str, n: int, q: int, override_budget: bool = False, fmt: str = "json", workers=None) -> tuple[str, int]:
    from .cones import census

    if cone not in CENSUS_CONES:
        raise UsageError(f"unknown cone {cone!r}; choose from {', '.join(CENSUS_CONES)}")
    try:
        rep = census.run_census(CENSUS_CONES[cone], n, q, override_budget=override_budget, workers=workers)
    except census.BudgetExceeded as e:
        raise BudgetError(str(e)) from e
    except (census.UnsupportedCensus, KeyError) as e:
        raise UsageError(str(e)) from e
    status = EXIT_OK if rep.ok else EXIT_FAIL
    if fmt == "csv":
        rows = []
        for l in rep.lines:
            rows.append(
                (
                    l.section,
                    json.dumps(list(l.label.mu)) if l.label else "",
                    json.dumps(list(l.label.nu)) if l.label else "",
                    json.dumps(list(l.jordan_type)) if l.jordan_type else "",
                    l.tally,
                    l.expected,
                    "pass" if l.ok else "FAIL",
                )
            )
        return _csv_text(["section", "label_mu", "label_nu", "jordan_type", "tally", "expected", "pass"], rows), status
    if fmt == "text":
        out = [f"{rep.cone} n={n} q={q}: {rep.nilpotent} nilpotent points, {'pass' if rep.ok else 'FAIL'}"]
        for l in rep.lines:
            out.append(f"  {l.section:14s} {str(l.label or ''):24s} {l.tally:>10d} {l.expected:>10d} {'ok' if l.ok else 'FAIL'}")
        for k, v in rep.checks.items():
            out.append(f"  check: {k}: {'ok' if v else 'FAIL'}")
        return "\n".join(out) + "\n", status
    return dumps(census_payload(rep)), status


def cmd_filtration(n: int, q: int, kind: str, sample: int | None = None, seed: int = 0, override_budget: bool = False, fmt: str = "json") -> tuple[str, int]:
    from .cones import filtration
    from .cones.census import exotic_points
    from .cones.points import ExoticPoint, random_exotic_point
    from .finitefield import get_field

    if kind not in ("B", "C"):
        raise UsageError("kind must be B or C")
    if n < 1:
        raise UsageError("n must be at least 1")
    try:
        F = get_field(q)
    except (KeyError, ValueError) as e:
        raise UsageError(f"unsupported field size {q}") from e
    if F.p != 2:
        raise UsageError("points are classified in characteristic 2 only")
    if sample is None:
        size = q ** (2 * n * n)
        if size > FILTRATION_BUDGET and not override_budget:
            raise BudgetError(f"exhaustive run over about {size:,} points exceeds {FILTRATION_BUDGET:,}; use --sample")
        points = (ExoticPoint(F, v, x) for V, X in exotic_points(F, n) for v, x in zip(V, X))
    else:
        rng = np.random.default_rng(seed)
        points = (random_exotic_point(F, n, rng) for _ in range(sample))
    by_type: dict = {}
    failures = []
    total = 0
    for p in points:
        total += 1
        try:
            f = filtration.build_filtration(p, kind)
            checks = filtration.verify_filtration(p, f, kind)
            lam = f.lam
        except filtration.FiltrationError as e:
            checks, lam = {"construction": False, "error": str(e)}, None
        ok = all(v is True for v in checks.values())
        key = json.dumps(list(lam)) if lam is not None else "error"
        by_type[key] = by_type.get(key, 0) + 1
        if not ok and len(failures) < 20:
            failures.append({"v": p.v.tolist(), "x": p.x.tolist(), "checks": checks})
        elif not ok:
            failures.append(None)
    status = EXIT_OK if not failures else EXIT_FAIL
    payload = {
        "n": n,
        "q": q,
        "kind": kind,
        "mode": "exhaustive" if sample is None else f"sample {sample} (seed {seed})",
        "points": total,
        "failed": len(failures),
        "by_jordan_type": dict(sorted(by_type.items())),
        "failures": [f for f in failures if f is not None],
    }
    if fmt == "text":
        out = [f"kind {kind}, n={n}, q={q}, {payload['mode']}: {total} points, {len(failures)} failed"]
        out += [f"  {k}: {v}" for k, v in payload["by_jordan_type"].items()]
        return "\n".join(out) + "\n", status
    return dumps(payload), status


# ------------------------------------------------------------------ argparse


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="nilpieces", description="Exotic nilpotent cone combinatorics, point counts and censuses.")
    p.add_argument("--out", help="write output to this file instead of stdout")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("maps", help="tabulate a map on all bipartitions of n")
    s.add_argument("n", type=int)
    s.add_argument("--map", required=True, choices=sorted(MAPS))
    s.add_argument("--format", default="text", choices=["text", "json", "csv"])

    s = sub.add_parser("poset", help="Hasse diagram of a sub-poset of bipartitions")
    s.add_argument("n", type=int)
    s.add_argument("--kind", default="all", choices=list(SUBPOSETS))
    s.add_argument("--format", default="dot", choices=["dot", "json", "text"])

    s = sub.add_parser("polys", help="point-count polynomials")
    s.add_argument("n", type=int)
    s.add_argument("--piece", default="orbit", choices=list(POLYS))
    s.add_argument("--format", default="text", choices=["text", "json", "csv"])

    s = sub.add_parser("verify", help="check the polynomial identities for n")
    s.add_argument("n", type=int)
    s.add_argument("--format", default="text", choices=["text", "json"])

    s = sub.add_parser("census", help="exhaustive point census over a small field")
    s.add_argument("--cone", required=True, choices=list(CENSUS_CONES))
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--override-budget", action="store_true")
    s.add_argument("--workers", type=int, default=None)
    s.add_argument("--format", default="json", choices=["json", "csv", "text"])

    s = sub.add_parser("filtration", help="build and verify adapted filtrations")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--kind", required=True, choices=["B", "C"])
    s.add_argument("--sample", type=int, default=None)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--override-budget", action="store_true")
    s.add_argument("--format", default="json", choices=["json", "text"])
    return p


def run(args: argparse.Namespace) -> tuple[str, int]:
    c = args.command
    if c == "maps":
        return cmd_maps(args.n, args.map, args.format)
    if c == "poset":
        return cmd_poset(args.n, args.kind, args.format)
    if c == "polys":
        return cmd_polys(args.n, args.piece, args.format)
    if c == "verify":
        return cmd_verify(args.n, args.format)
    if c == "census":
        return cmd_census(args.cone, args.n, args.q, args.override_budget, args.format, args.workers)
    return cmd_filtration(args.n, args.q, args.kind, args.sample, args.seed, args.override_budget, args.format)


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        text, status = run(args)
    except UsageError as e:
        print(f"nilpieces: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetError as e:
        print(f"nilpieces: refused: {e}", file=sys.stderr)
        return EXIT_BUDGET
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
