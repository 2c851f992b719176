"""Command-line entry point: gen, validate, solve, table.

Exit codes: 0 success, 1 bad input or usage, 2 a result differs from the
expected value, 3 a node budget ran out before a result was proven.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import time
from pathlib import Path

from . import families as fam
from .complexes import SimplexFamily, family_report
from .exactgeom import StructuralError
from .extremal import Budget, Mode, Sense, build_model, enumerate_optima, solve
from .pointconfig import ParseError, format_polytope, parse_polytope
from .simplexrel import format_simplices, parse_simplices

EXIT_OK, EXIT_INPUT, EXIT_MISMATCH, EXIT_BUDGET = 0, 1, 2, 3
BUDGET_ENV = "POLYDISSECT_NODE_BUDGET"
DEFAULT_BUDGET = 5_000_000


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if not raw:
        return DEFAULT_BUDGET
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"{BUDGET_ENV} must be an integer, got {raw!r}")


def _sha(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def _emit(report: dict, out: str | None) -> None:
    text = json.dumps(report, indent=2, default=str)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


# ---------------------------------------------------------------------------
# gen

_CONSTRUCTIONS = {
    fam.Kind.LATTICE_P: {"dissection": lambda a: fam.lattice_example_dissection(),
                         "triangulation": lambda a: fam.lattice_example_triangulation11()},
    fam.Kind.PM: {"halving": lambda a: fam.halving_dissection(a.m),
                  "small": lambda a: fam.small_Pm_triangulation(fam.build(fam.FamilySpec(fam.Kind.PM, a.m)))},
    fam.Kind.RM: {"halving": lambda a: fam.halving_triangulation(fam.build(fam.FamilySpec(fam.Kind.RM, a.m)))},
    fam.Kind.PRISM: {"min": lambda a: fam.prism_min_triangulation(a.m, a.coords),
                     "max-placing": lambda a: fam.prism_max_placing(a.m, a.coords),
                     "max-split": lambda a: fam.prism_max_split(a.m, a.coords)},
    fam.Kind.ANTIPRISM: {"min": lambda a: fam.antiprism_min_triangulation(a.m, a.coords),
                         "max": lambda a: fam.antiprism_max_construction(a.m, a.coords)},
    fam.Kind.TRAPEZOID_CUBE: {"seven": lambda a: fam.trapezoid_cube_7()},
    fam.Kind.SCHOENHARDT_BIPYRAMID: {"dissection": lambda a: fam.schoenhardt_bipyramid_dissection()},
}


def cmd_gen(args) -> int:
    kind = fam.Kind(args.family)
    try:
        spec = fam.FamilySpec(kind, args.m, args.d, args.coords)
        config = fam.build(spec)
    except (ValueError, fam.ConstructionError) as exc:
        print(f"gen: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = format_polytope(config)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.simplices:
        options = _CONSTRUCTIONS.get(kind, {})
        name = args.construction or next(iter(options), None)
        if name not in options:
            print(f"gen: no construction {name!r} for {kind.value}; choose from {sorted(options)}", file=sys.stderr)
            return EXIT_INPUT
        family = options[name](args)
        Path(args.simplices).write_text(format_simplices(family.labels()))
    return EXIT_OK


# ---------------------------------------------------------------------------
# validate

def _load(poly_path: str):
    text = Path(poly_path).read_text()
    return parse_polytope(text), text


def cmd_validate(args) -> int:
    start = time.perf_counter()
    try:
        config, ptext = _load(args.polytope)
        stext = Path(args.simplices).read_text()
        labels = parse_simplices(stext, config)
        family = SimplexFamily(config, labels)
    except (ParseError, StructuralError, OSError) as exc:
        print(f"validate: {exc}", file=sys.stderr)
        return EXIT_INPUT
    outputs = family_report(family)
    report = {"command": ["validate", args.polytope, args.simplices],
              "inputs": {"polytope": _sha(ptext), "simplices": _sha(stext)},
              "outputs": outputs, "timing": round(time.perf_counter() - start, 3)}
    _emit(report, args.out)
    if args.expect_status and outputs["status"] != args.expect_status:
        return EXIT_MISMATCH
    if args.expect_size is not None and outputs["size"] != args.expect_size:
        return EXIT_MISMATCH
    return EXIT_OK


# ---------------------------------------------------------------------------
# solve

def cmd_solve(args) -> int:
    start = time.perf_counter()
    try:
        config, ptext = _load(args.polytope)
    except (ParseError, StructuralError, OSError) as exc:
        print(f"solve: {exc}", file=sys.stderr)
        return EXIT_INPUT
    budget = Budget(nodes=args.node_budget if args.node_budget is not None else default_budget(),
                    seconds=args.time_limit)
    model = build_model(config, mode=Mode(args.mode), sense=Sense(args.sense))
    result = solve(model, budget)
    out = result.as_dict()
    if args.enumerate and result.proven:
        enum = enumerate_optima(model, budget, optimum=result.optimum)
        out["all_optima"] = enum.as_dict()["all_optima"]
        out["enumeration_complete"] = enum.enumeration_complete
    # wall-clock figures go to "timing" so outputs repeat exactly for equal inputs and budgets
    search_seconds = out["stats"].pop("seconds", None)
    report = {"command": ["solve", args.polytope, args.mode, args.sense],
              "inputs": {"polytope": _sha(ptext)}, "outputs": out,
              "timing": {"total": round(time.perf_counter() - start, 3), "search": search_seconds}}
    _emit(report, args.out)
    if not result.proven:
        return EXIT_BUDGET
    if args.expect is not None and result.optimum != args.expect:
        return EXIT_MISMATCH
    return EXIT_OK


# ---------------------------------------------------------------------------
# reproduction suites

PRISM_MAX = {3: 3, 4: 6, 5: 10, 6: 14, 7: 19, 8: 24, 9: 30, 10: 36, 11: 43, 12: 50}
ANTIPRISM_MAX = {3: 4, 4: 8, 5: 12, 6: 17, 7: 22, 8: 28, 9: 34, 10: 41, 11: 48, 12: 56}
SOLID_EXTREMES = {
    "truncated-tetrahedron": (10, 13),
    "cuboctahedron": (13, 17),
    "rhombic-dodecahedron": (12, 21),
    "truncated-octahedron": (27, None),
}
# expected None: no published value, the computed one is recorded
PROP_ROWS = [
    ("lattice-p", "diss", "min", None), ("lattice-p", "tri", "min", None),
    ("lattice-p", "diss", "max", 12), ("lattice-p", "tri", "max", 11),
    ("antiprism8-p", "diss", "min", 6), ("antiprism8-p", "tri", "min", 7),
    ("antiprism8-p", "tri", "max", 9), ("antiprism8-p", "diss", "max", 10),
]


def _solve_row(name, config, mode, sense, expected, source, budget, coords=None) -> dict:
    res = solve(build_model(config, mode=Mode(mode), sense=Sense(sense)), budget)
    if not res.proven:
        status = "budget"
    elif expected is None:
        status = "recorded"
    else:
        status = "pass" if res.optimum == expected else "fail"
    row = {"row": name, "mode": mode, "sense": sense, "computed": res.optimum, "proven": res.proven,
           "bound": res.bound, "expected": expected, "source": source, "status": status,
           "nodes": res.stats["nodes"], "fingerprint": config.fingerprint}
    if coords:
        row["coordinatization"] = coords
        if status == "fail" and coords == fam.Coords.REGULAR_APPROX.value:
            # rational points cannot carry every parallelism of the regular m-gon
            row["note"] = "coordinatization-sensitive"
    return row


def suite_rows(suite: str, budget: Budget, coords: fam.Coords, m_max: int):
    if suite == "prop23":
        for kind, mode, sense, want in PROP_ROWS:
            cfg = fam.build(fam.FamilySpec(fam.Kind(kind)))
            source = f"{kind}: {mode} {sense}" if want is not None else "no published value"
            yield _solve_row(kind, cfg, mode, sense, want, source, budget)
    elif suite in ("table2-prisms", "table2-antiprisms"):
        kind = fam.Kind.PRISM if suite == "table2-prisms" else fam.Kind.ANTIPRISM
        table = PRISM_MAX if kind == fam.Kind.PRISM else ANTIPRISM_MAX
        for m in range(3, m_max + 1):
            cfg = fam.build(fam.FamilySpec(kind, m, coordinatization=coords))
            yield _solve_row(f"{kind.value} m={m}", cfg, "tri", "max", table[m],
                             f"reference maxima, regular-base {kind.value} row, m={m}", budget, coords.value)
    elif suite == "table1-rational":
        for solid, (lo, hi) in SOLID_EXTREMES.items():
            cfg = fam.build(fam.FamilySpec(fam.Kind(solid)))
            yield _solve_row(solid, cfg, "tri", "min", lo, f"reference extremes, {solid} min", budget)
            if hi is not None:
                yield _solve_row(solid, cfg, "tri", "max", hi, f"reference extremes, {solid} max", budget)
    elif suite == "pm-gap":
        m = 8
        diss = fam.halving_dissection(m)
        cfg = diss.config
        res = solve(build_model(cfg, mode=Mode.TRIANGULATION, sense=Sense.MAX), budget)
        cap = math.floor(7 * m / 2) + 1
        yield {"row": f"pm m={m}", "max_dissection_construction": diss.size,
               "max_triangulation": res.optimum, "proven": res.proven, "bound": res.bound,
               "triangulation_cap": cap, "gap": diss.size - res.optimum if res.proven else None,
               "status": ("pass" if res.bound <= cap else "fail") if res.proven else "budget",
               "source": "triangulation cap floor(7m/2)+1; gap recorded, not asserted",
               "fingerprint": cfg.fingerprint}
    else:
        raise ValueError(f"unknown suite {suite}")


def cmd_table(args) -> int:
    start = time.perf_counter()
    budget = Budget(nodes=args.node_budget if args.node_budget is not None else default_budget())
    rows = []
    for row in suite_rows(args.suite, budget, args.coords, args.m_max):
        rows.append(row)
        if not args.quiet:
            print(f"{row['status'].upper():6s} {row['row']} {row.get('mode', '')} {row.get('sense', '')}", file=sys.stderr)
    report = {"command": ["table", args.suite], "outputs": rows,
              "timing": round(time.perf_counter() - start, 3)}
    _emit(report, args.out)
    statuses = {r["status"] for r in rows}
    if "budget" in statuses:
        return EXIT_BUDGET
    if "fail" in statuses:
        return EXIT_MISMATCH
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="polydissect", description="Dissections and triangulations of point configurations.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="write a polytope file (and optionally a simplex file)")
    g.add_argument("--family", required=True, choices=[k.value for k in fam.Kind])
    g.add_argument("--m", type=int)
    g.add_argument("--d", type=int)
    g.add_argument("--coords", type=fam.Coords, default=fam.Coords.REGULAR_APPROX,
                   choices=list(fam.Coords), metavar="{regular,parabola,canonical}")
    g.add_argument("--construction", help="which constructed family to write with --simplices")
    g.add_argument("--out", help="polytope file (default: stdout)")
    g.add_argument("--simplices", help="also write the constructed family here")
    g.set_defaults(func=cmd_gen)

    v = sub.add_parser("validate", help="classify a simplex family and audit it")
    v.add_argument("polytope")
    v.add_argument("simplices")
    v.add_argument("--out")
    v.add_argument("--expect-status", choices=["TRIANGULATION", "DISSECTION", "INVALID"])
    v.add_argument("--expect-size", type=int)
    v.set_defaults(func=cmd_validate)

    s = sub.add_parser("solve", help="minimal/maximal triangulation or dissection")
    s.add_argument("polytope")
    s.add_argument("--mode", choices=["tri", "diss"], default="tri")
    s.add_argument("--sense", choices=["min", "max"], default="min")
    s.add_argument("--enumerate", action="store_true", help="list every optimum")
    s.add_argument("--node-budget", type=int, help=f"default: ${BUDGET_ENV} or {DEFAULT_BUDGET}")
    s.add_argument("--time-limit", type=float, help="wall-clock seconds (not reproducible)")
    s.add_argument("--expect", type=int)
    s.add_argument("--out")
    s.set_defaults(func=cmd_solve)

    t = sub.add_parser("table", help="run a reproduction suite")
    t.add_argument("suite", choices=["table1-rational", "table2-prisms", "table2-antiprisms", "prop23", "pm-gap"])
    t.add_argument("--coords", type=fam.Coords, default=fam.Coords.REGULAR_APPROX,
                   choices=list(fam.Coords), metavar="{regular,parabola,canonical}")
    t.add_argument("--m-max", type=int, default=7)
    t.add_argument("--node-budget", type=int)
    t.add_argument("--quiet", action="store_true")
    t.add_argument("--out")
    t.set_defaults(func=cmd_table)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
