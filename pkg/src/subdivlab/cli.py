"""Batch experiment runner: pattern detection, regularization, scans,
incidence queries, and distance experiments, with JSON/CSV artifacts.

Every run is reproducible from its flags (seeds are recorded in all
outputs). Rationals are serialized as "num/den" strings, never floats.
Exit codes: 0 success, 2 input error (including malformed JSON), 3 budget or
capacity exhausted, 4 internal invariant failure. Errors are emitted as a
single JSON object on stderr.

SUBDIVLAB_THREADS caps worker threads for independent scan trials; output
rows are sorted before writing, so the artifact does not depend on it.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from .bigraph import Bigraph
from .construct import ScanRow, threshold_scan
from .distances import (
    PlanarPointSet,
    check_local_condition,
    distinct_distance_count,
    energy,
    find_violation,
    q_formula,
)
from .errors import (
    BudgetExceededError,
    CapacityError,
    InputError,
    InvariantViolation,
    StructuralError,
    SubdivlabError,
)
from .incidence import (
    config_from_json_dict,
    detect_grid,
    detect_triangle,
    distance_energy_exponents,
    grid2flat_exponents,
    grid_total_exponent,
)
from .jsonio import format_rational, parse_rational
from .patterns import DEFAULT_NODE_BUDGET, SubdividedPattern, find_embedding
from .regularize import reduce as regularize_reduce

SCAN_COLUMNS = ["m", "n", "s", "t", "exponent", "trial", "seed", "p",
                "edges_before", "copies", "edges_after", "ratio"]
EXPONENT_COLUMNS = ["s", "grid_x_exponent", "grid_y_exponent", "grid_total_exponent"]
EXPONENT_DISTANCE_COLUMNS = EXPONENT_COLUMNS + ["distance_lower_exponent",
                                                "energy_upper_exponent"]


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise InputError(f"no such file: {path}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path}: {exc}") from exc


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _write_csv(rows: list[list[str]], header: list[str], out: str | None) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, quoting=csv.QUOTE_MINIMAL, lineterminator="\r\n")
    writer.writerow(header)
    writer.writerows(rows)
    data = buf.getvalue()
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(data)
    else:
        sys.stdout.write(data)


def _load_point_set(path: str) -> PlanarPointSet:
    data = _load_json(path)
    try:
        coords = [(parse_rational(x), parse_rational(y)) for x, y in data["points"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed point-set JSON: {exc}") from exc
    return PlanarPointSet.from_coords(coords)


def _parse_int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x]
    except ValueError as exc:
        raise InputError(f"expected a comma-separated integer list: {text!r}") from exc


# ------------------------------------------------------------------ #
# subcommands


def cmd_detect(args) -> int:
    host = Bigraph.from_json_dict(_load_json(args.host))
    pattern = SubdividedPattern(tuple(_parse_int_list(args.parts)))
    emb = find_embedding(host, pattern, node_budget=args.budget)
    payload = {"found": emb is not None,
               "parts": list(pattern.part_sizes)}
    if emb is not None:
        payload["embedding"] = emb.to_json_dict()
    _emit(payload, args.out)
    return 0


def cmd_regularize(args) -> int:
    graph = Bigraph.from_json_dict(_load_json(args.input))
    trace, cert = regularize_reduce(graph, args.s, parse_rational(args.delta))
    _emit({"trace": trace.to_json_dict(), "certificate": cert.to_json_dict()},
          args.out)
    return 0


def _scan_row_to_csv(row: ScanRow) -> list[str]:
    return [str(row.m), str(row.n), str(row.s), str(row.t),
            format_rational(row.exponent), str(row.trial), str(row.seed),
            format_rational(row.p), str(row.edges_before), str(row.copies),
            str(row.edges_after), format_rational(row.ratio)]


def _threads() -> int:
    raw = os.environ.get("SUBDIVLAB_THREADS", "1")
    try:
        value = int(raw)
    except ValueError as exc:
        raise InputError(f"SUBDIVLAB_THREADS must be an integer, got {raw!r}") from exc
    return max(1, value)


def cmd_construct_scan(args) -> int:
    exponent = parse_rational(args.exp)
    m_list = _parse_int_list(args.m)
    result = threshold_scan(args.s, args.t, exponent, m_list, args.trials,
                            args.seed, workers=_threads())
    _write_csv([_scan_row_to_csv(r) for r in result.rows], SCAN_COLUMNS, args.out)
    return 0


def cmd_incidence_grid(args) -> int:
    points, lines = config_from_json_dict(_load_json(args.input))
    witness = detect_grid(points, lines, args.s, node_budget=args.budget)
    payload = {"found": witness is not None, "s": args.s}
    if witness is not None:
        payload["witness"] = witness.to_json_dict()
    _emit(payload, args.out)
    return 0


def cmd_incidence_triangle(args) -> int:
    points, lines = config_from_json_dict(_load_json(args.input))
    witness = detect_triangle(points, lines)
    payload = {"found": witness is not None}
    if witness is not None:
        payload["witness"] = witness.to_json_dict()
    _emit(payload, args.out)
    return 0


def cmd_incidence_exponents(args) -> int:
    s_max = args.s_max if args.s_max is not None else args.s
    if s_max < args.s:
        raise InputError("--s-max must be >= --s")
    rows = []
    for s in range(args.s, s_max + 1):
        gx, gy = grid2flat_exponents(s)
        row = [str(s), format_rational(gx), format_rational(gy),
               format_rational(grid_total_exponent(s))]
        if args.with_distance:
            energy_exp, dist_exp = distance_energy_exponents(s)
            row += [format_rational(dist_exp), format_rational(energy_exp)]
        rows.append(row)
    header = EXPONENT_DISTANCE_COLUMNS if args.with_distance else EXPONENT_COLUMNS
    _write_csv(rows, header, args.out)
    return 0


def cmd_distances_energy(args) -> int:
    ps = _load_point_set(args.input)
    rep = energy(ps)
    _emit({
        "n": len(ps),
        "distinct": distinct_distance_count(ps),
        "energy": rep.energy,
        "classes": [[format_rational(c.squared_distance), c.ordered_pair_count]
                    for c in rep.classes],
    }, args.out)
    return 0


def cmd_distances_check(args) -> int:
    ps = _load_point_set(args.input)
    report = check_local_condition(ps, args.p, args.q)
    payload = {"p": args.p, "q": args.q, "holds": report.holds}
    if report.violating_subset is not None:
        payload["violating_subset"] = list(report.violating_subset)
    _emit(payload, args.out)
    return 0


def cmd_distances_violate(args) -> int:
    ps = _load_point_set(args.input)
    witness = find_violation(ps, args.p, args.s, args.seed,
                             node_budget=args.budget)
    if witness is None:
        _emit({"found": False, "p": args.p, "s": args.s, "seed": args.seed,
               "q": q_formula(args.p, args.s)}, args.out)
        return 0
    payload = {"found": True, "p": args.p, "s": args.s, "seed": args.seed}
    payload.update(witness.to_json_dict(ps))
    _emit(payload, args.out)
    return 0


# ------------------------------------------------------------------ #
# wiring


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="subdivlab",
        description="Subdivision patterns, regularization, and incidence experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", help="search a host graph for a pattern copy")
    p.add_argument("--host", required=True, help="bigraph JSON file")
    p.add_argument("--parts", required=True, help="pattern part sizes, e.g. 2,2")
    p.add_argument("--budget", type=int, default=DEFAULT_NODE_BUDGET)
    p.add_argument("--out")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("regularize", help="run the two-phase reduction")
    p.add_argument("--input", required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--delta", default="1")
    p.add_argument("--out")
    p.set_defaults(func=cmd_regularize)

    pc = sub.add_parser("construct", help="lower-bound constructions")
    csub = pc.add_subparsers(dest="construct_command", required=True)
    p = csub.add_parser("scan", help="threshold scan CSV")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--exp", required=True, help="exponent as a rational, e.g. 1.2 or 6/5")
    p.add_argument("--m", required=True, help="comma-separated m values")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_construct_scan)

    pi = sub.add_parser("incidence", help="incidence-geometry queries")
    isub = pi.add_subparsers(dest="incidence_command", required=True)
    p = isub.add_parser("grid", help="detect an s-by-s grid")
    p.add_argument("--input", required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--budget", type=int, default=DEFAULT_NODE_BUDGET)
    p.add_argument("--out")
    p.set_defaults(func=cmd_incidence_grid)
    p = isub.add_parser("triangle", help="detect a triangle sub-configuration")
    p.add_argument("--input", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_incidence_triangle)
    p = isub.add_parser("exponents", help="exponent calculator CSV")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--s-max", type=int, default=None)
    p.add_argument("--with-distance", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_incidence_exponents)

    pd = sub.add_parser("distances", help="distinct-distance experiments")
    dsub = pd.add_subparsers(dest="distances_command", required=True)
    p = dsub.add_parser("energy", help="distance energy report")
    p.add_argument("--input", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_distances_energy)
    p = dsub.add_parser("check", help="(p, q) local condition")
    p.add_argument("--input", required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_distances_check)
    p = dsub.add_parser("violate", help="search for a local-condition violation")
    p.add_argument("--input", required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=DEFAULT_NODE_BUDGET)
    p.add_argument("--out")
    p.set_defaults(func=cmd_distances_violate)

    return parser


def _error_json(kind: str, exc: Exception) -> str:
    return json.dumps({"error": {"kind": kind, "message": str(exc)}})


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(_error_json("input", exc), file=sys.stderr)
        return 2
    except CapacityError as exc:
        print(_error_json("capacity", exc), file=sys.stderr)
        return 3
    except BudgetExceededError as exc:
        print(_error_json("budget", exc), file=sys.stderr)
        return 3
    except (InvariantViolation, StructuralError) as exc:
        print(_error_json("internal", exc), file=sys.stderr)
        return 4
    except SubdivlabError as exc:
        print(_error_json("error", exc), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
