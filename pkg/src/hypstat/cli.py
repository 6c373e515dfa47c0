"""Command-line front end: run any analysis, emit deterministic reports.

``hypstat COMMAND --coding SRC [--weights SRC] [options]`` wires the library
end to end: build or load a coding, decompose it, attach weights, run the
requested spectral/enumerative/limit-law analysis, and write the result as
JSON (default), CSV (limit-law tables), or aligned text.

Sources
-------
``--coding`` accepts ``free:RANK`` or a path to a coding JSON file.
``--weights`` accepts ``hom:a=1,b=0`` (vector values with ``|``, e.g.
``a=1|0,b=0|1``), ``wordlen``, ``edges:@FILE`` or a bare path to a weights
JSON file.

Exit codes
----------
0   command ran and every criterion passed
1   command ran but a criterion failed
2   usage error (unknown flag, malformed spec string)
3   numerical or validation error from the library, or an I/O failure

Determinism
-----------
Identical argv and input files produce identical output bytes: floats are
printed with 17 significant digits, counts above 2**53 as decimal strings,
keys in fixed insertion order.  Run metadata lives under the ``meta`` key
(golden comparisons exclude it).  ``HYPSTAT_THREADS`` caps the thread pool
used for frequency scans; results are byte-identical at any setting.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Sequence

from .coding import (
    MarkovCoding,
    build_free_group_coding,
    decompose_components,
    growth_rate,
    load_coding,
    sphere_counts,
    validate_coding,
)
from .enumerate import (
    distribution,
    distribution_overcounted,
    distribution_to_json,
)
from .errors import HypstatError
from .limits import (
    LimitLawReport,
    averaging_table,
    clt_distance,
    degeneracy_check,
    ldt_rate,
    llt_check,
    mclt_check,
    report_to_json,
)
from .spectral import limit_statistics, nonlattice_gap, pressure
from .weights import (
    lattice_scale,
    load_weights,
    weights_from_homomorphism,
    weights_word_length,
)

__version__ = "1.0.0"


class UsageError(Exception):
    """Malformed command line (exit code 2)."""


# ---------------------------------------------------------------------------
# Spec-string parsing
# ---------------------------------------------------------------------------


def _coding_from(spec: str) -> MarkovCoding:
    if spec.startswith("free:"):
        raw = spec[len("free:") :]
        try:
            rank = int(raw)
        except ValueError:
            raise UsageError(f"malformed coding spec {spec!r}: rank must be an integer")
        if rank < 1:
            raise UsageError(f"malformed coding spec {spec!r}: rank must be >= 1")
        return build_free_group_coding(rank)
    return load_coding(Path(spec))


def _parse_value(raw: str, context: str) -> float | tuple[float, ...]:
    parts = raw.split("|")
    try:
        values = [float(p) for p in parts]
    except ValueError:
        raise UsageError(f"malformed weight value {raw!r} in {context}")
    return values[0] if len(values) == 1 else tuple(values)


def _weights_from(spec: str, coding: MarkovCoding):
    if spec == "wordlen":
        return weights_word_length(coding)
    if spec.startswith("hom:"):
        body = spec[len("hom:") :]
        table = {}
        for item in body.split(","):
            if "=" not in item:
                raise UsageError(
                    f"malformed homomorphism spec {spec!r}: expected name=value pairs"
                )
            name, _, raw = item.partition("=")
            name = name.strip()
            if not name or name in table:
                raise UsageError(
                    f"malformed homomorphism spec {spec!r}: bad or repeated name {name!r}"
                )
            table[name] = _parse_value(raw.strip(), spec)
        try:
            return weights_from_homomorphism(coding, table)
        except HypstatError as exc:
            raise UsageError(str(exc))
    if spec.startswith("edges:@"):
        return load_weights(Path(spec[len("edges:@") :]), coding)
    return load_weights(Path(spec), coding)


def _parse_int_grid(text: str) -> list[int]:
    try:
        if ":" in text:
            parts = [int(p) for p in text.split(":")]
            if len(parts) == 2:
                lo, hi, step = parts[0], parts[1], 1
            elif len(parts) == 3:
                lo, hi, step = parts
            else:
                raise ValueError
            if step < 1 or hi < lo:
                raise ValueError
            grid = list(range(lo, hi + 1, step))
        else:
            grid = [int(p) for p in text.split(",")]
    except ValueError:
        raise UsageError(f"malformed n grid {text!r}: use lo:hi[:step] or comma list")
    if not grid or any(n < 1 for n in grid):
        raise UsageError(f"n grid {text!r} must contain positive integers")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise UsageError(f"n grid {text!r} must be strictly increasing")
    return grid


def _parse_float_grid(text: str) -> list[float]:
    try:
        if ":" in text:
            lo_s, hi_s, step_s = text.split(":")
            lo, hi, step = float(lo_s), float(hi_s), float(step_s)
            if step <= 0.0 or hi < lo:
                raise ValueError
            count = int(math.floor((hi - lo) / step + 1e-9)) + 1
            grid = [lo + k * step for k in range(count)]
        else:
            grid = [float(p) for p in text.split(",")]
    except ValueError:
        raise UsageError(f"malformed grid {text!r}: use lo:hi:step or comma list")
    if not grid:
        raise UsageError(f"grid {text!r} is empty")
    return grid


def _parse_interval(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"malformed interval {text!r}: expected a,b")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError:
        raise UsageError(f"malformed interval {text!r}: expected numbers")


def _parse_cell(text: str) -> tuple[tuple, tuple]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 4:
        raise UsageError(f"malformed cell {text!r}: expected a1,b1,a2,b2")
    bounds = []
    for p in parts:
        if p in ("inf", "-inf", ""):
            bounds.append(None)
        else:
            try:
                bounds.append(float(p))
            except ValueError:
                raise UsageError(f"malformed cell bound {p!r} in {text!r}")
    return (bounds[0], bounds[1]), (bounds[2], bounds[3])


def _thread_count() -> int:
    raw = os.environ.get("HYPSTAT_THREADS", "1")
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"HYPSTAT_THREADS must be an integer, got {raw!r}")
    return max(1, value)


# ---------------------------------------------------------------------------
# Deterministic emission
# ---------------------------------------------------------------------------


def _format_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        raise HypstatError(f"non-finite float {x!r} in report payload")
    text = format(x, ".17g")
    if not any(c in text for c in ".e"):
        text += ".0"
    return text


def _json_encode(obj, out: list[str]) -> None:
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, int):
        if abs(obj) >= 2**53:
            out.append(f'"{obj}"')
        else:
            out.append(str(obj))
    elif isinstance(obj, float):
        out.append(_format_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=True))
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, item in enumerate(obj):
            if i:
                out.append(", ")
            _json_encode(item, out)
        out.append("]")
    elif isinstance(obj, dict):
        out.append("{")
        for i, (key, value) in enumerate(obj.items()):
            if i:
                out.append(", ")
            out.append(json.dumps(str(key), ensure_ascii=True))
            out.append(": ")
            _json_encode(value, out)
        out.append("}")
    else:
        raise HypstatError(f"cannot serialize {type(obj).__name__} to JSON")


def _json_dumps(doc: dict) -> str:
    out: list[str] = []
    _json_encode(doc, out)
    return "".join(out) + "\n"


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return _format_float(value)
    return str(value)


def _csv_dumps(rows: Sequence[dict]) -> str:
    lines = ["n,observed,predicted,residual"]
    for row in rows:
        lines.append(
            ",".join(
                _csv_cell(row.get(key)) for key in ("n", "observed", "predicted", "residual")
            )
        )
    return "\n".join(lines) + "\n"


def _text_value(value) -> str:
    if isinstance(value, float):
        return _format_float(value)
    if value is None:
        return "-"
    return str(value)


def _text_lines(doc: dict, indent: str = "") -> list[str]:
    lines = []
    for key, value in doc.items():
        if isinstance(value, dict):
            lines.append(f"{indent}{key}:")
            lines.extend(_text_lines(value, indent + "  "))
        elif isinstance(value, (list, tuple)) and value and isinstance(value[0], dict):
            lines.append(f"{indent}{key}: [{len(value)} entries]")
        elif isinstance(value, (list, tuple)):
            lines.append(
                f"{indent}{key}: " + " ".join(_text_value(v) for v in value)
            )
        else:
            lines.append(f"{indent}{key}: {_text_value(value)}")
    return lines


def _report_text(doc: dict) -> str:
    lines = [f"law: {doc['law']}"]
    for section in ("params", "theory", "tolerances"):
        lines.append(f"{section}:")
        lines.extend(_text_lines(doc[section], "  "))
    header = ("n", "observed", "predicted", "residual")
    table = [header]
    for row in doc["rows"]:
        table.append(tuple(_text_value(row.get(k)) for k in header))
    widths = [max(len(r[j]) for r in table) for j in range(4)]
    lines.append("")
    for r in table:
        lines.append("  ".join(cell.rjust(w) for cell, w in zip(r, widths)))
    lines.append("")
    for check in doc["checks"]:
        verdict = "PASS" if check["passed"] else "FAIL"
        lines.append(
            f"{verdict}  {check['name']}: {_format_float(check['lhs'])} "
            f"{check['op']} {_format_float(check['rhs'])}"
        )
    lines.append(f"RESULT: {'PASS' if doc['passed'] else 'FAIL'}")
    return "\n".join(lines) + "\n"


def _emit(doc: dict, args, is_report: bool) -> None:
    fmt = args.format
    if fmt == "json":
        payload = _json_dumps(doc)
    elif fmt == "csv":
        if not is_report:
            raise UsageError("csv format is available for limit-law reports only")
        payload = _csv_dumps(doc["rows"])
    elif fmt == "text":
        payload = _report_text(doc) if is_report else "\n".join(_text_lines(doc)) + "\n"
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown format {fmt!r}")
    if args.out:
        Path(args.out).write_text(payload, encoding="utf-8")
    else:
        sys.stdout.write(payload)


def _meta(args) -> dict:
    return {"argv": list(args.raw_argv), "version": __version__}


def _finish_report(report: LimitLawReport, args, command: str) -> int:
    doc = {"command": command}
    doc.update(report_to_json(report))
    doc["meta"] = _meta(args)
    _emit(doc, args, is_report=True)
    return 0 if report.passed else 1


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _load_pair(args):
    coding = _coding_from(args.coding)
    decomposition = decompose_components(coding)
    weights = _weights_from(args.weights, coding)
    return coding, decomposition, weights


def _component_of(args, decomposition) -> int:
    if getattr(args, "component", None) is not None:
        return args.component
    return decomposition.maximal_indices[0]


def _pipeline(args):
    coding, decomposition, weights = _load_pair(args)
    stats = limit_statistics(
        coding, decomposition, weights, getattr(args, "component", None)
    )
    return coding, decomposition, weights, stats


def cmd_growth(args) -> int:
    coding = _coding_from(args.coding)
    report = growth_rate(coding, args.horizon)
    counts = sphere_counts(coding, min(args.horizon, 20))
    doc = {
        "command": "growth",
        "lam": report.lam,
        "entropy": report.entropy,
        "lam_ratio": report.lam_ratio,
        "elementary": report.elementary,
        "horizon": report.horizon,
        "ratio_trace": list(report.ratio_trace),
        "counts": {str(n): str(c) for n, c in enumerate(counts)},
        "meta": _meta(args),
    }
    _emit(doc, args, is_report=False)
    return 0


def cmd_pressure(args) -> int:
    coding, decomposition, weights = _load_pair(args)
    s = _parse_float_grid(args.s)
    component = _component_of(args, decomposition)
    report = pressure(coding, decomposition, weights, component, s)
    doc = {
        "command": "pressure",
        "component": report.component,
        "s": list(report.s),
        "value": report.value,
        "pressure": report.pressure,
        "vertices": list(report.vertices),
        "right": list(report.right),
        "left": list(report.left),
        "iterations": report.iterations,
        "residual": report.residual,
        "meta": _meta(args),
    }
    _emit(doc, args, is_report=False)
    return 0


def cmd_stats(args) -> int:
    coding, decomposition, weights, stats = _pipeline(args)
    doc = {
        "command": "stats",
        "component": stats.component,
        "drift": list(stats.drift),
        "sigma2": stats.sigma2,
        "covariance": None
        if stats.covariance is None
        else [list(row) for row in stats.covariance],
        "entropy": stats.entropy,
        "lam": stats.lam,
        "degenerate": stats.degenerate,
        "positive_definite": stats.positive_definite,
        "meta": _meta(args),
    }
    _emit(doc, args, is_report=False)
    return 0


def cmd_dist(args) -> int:
    coding, decomposition, weights = _load_pair(args)
    if args.overcounted:
        dist = distribution_overcounted(
            coding, decomposition, weights, args.n, args.bin
        )
    else:
        dist = distribution(coding, weights, args.n, args.bin)
    doc = {"command": "dist"}
    doc.update(distribution_to_json(dist))
    doc["meta"] = _meta(args)
    _emit(doc, args, is_report=False)
    return 0


def cmd_averaging(args) -> int:
    coding, decomposition, weights, stats = _pipeline(args)
    report = averaging_table(coding, weights, stats, _parse_int_grid(args.ngrid))
    return _finish_report(report, args, "averaging")


def cmd_clt(args) -> int:
    coding, decomposition, weights, stats = _pipeline(args)
    report = clt_distance(
        coding, decomposition, weights, stats, _parse_int_grid(args.ngrid)
    )
    return _finish_report(report, args, "clt")


def cmd_ldt(args) -> int:
    coding, decomposition, weights, stats = _pipeline(args)
    report = ldt_rate(
        coding,
        decomposition,
        weights,
        stats,
        args.epsilon,
        _parse_int_grid(args.ngrid),
        _parse_float_grid(args.tgrid),
    )
    return _finish_report(report, args, "ldt")


def cmd_mclt(args) -> int:
    coding, decomposition, weights, stats = _pipeline(args)
    cells = [_parse_cell(c) for c in args.cell] if args.cell else None
    report = mclt_check(
        coding, decomposition, weights, stats, _parse_int_grid(args.ngrid), cells
    )
    return _finish_report(report, args, "mclt")


def cmd_llt(args) -> int:
    coding, decomposition, weights, stats = _pipeline(args)
    a, b = _parse_interval(args.interval)
    report = llt_check(
        coding,
        decomposition,
        weights,
        stats,
        a,
        b,
        _parse_int_grid(args.ngrid),
        bin_width=args.bin,
        gate_t_grid=_parse_float_grid(args.gate_grid),
    )
    return _finish_report(report, args, "llt")


def cmd_degeneracy(args) -> int:
    coding, decomposition, weights, stats = _pipeline(args)
    report = degeneracy_check(coding, decomposition, weights, stats, args.ncap)
    return _finish_report(report, args, "degeneracy")


def cmd_scan_lattice(args) -> int:
    coding, decomposition, weights = _load_pair(args)
    grid = [t for t in _parse_float_grid(args.tgrid) if t > 0.0]
    if not grid:
        raise UsageError("scan grid must contain positive frequencies")
    component = _component_of(args, decomposition)
    threads = _thread_count()
    if threads > 1 and len(grid) >= 2 * threads:
        size = (len(grid) + threads - 1) // threads
        chunks = [grid[i : i + size] for i in range(0, len(grid), size)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(
                pool.map(
                    lambda ts: nonlattice_gap(
                        coding, decomposition, weights, component, ts
                    ),
                    chunks,
                )
            )
        points = [p for part in parts for p in part]
    else:
        points = list(
            nonlattice_gap(coding, decomposition, weights, component, grid)
        )
    scale = lattice_scale(weights)
    witness = None
    if scale is not None:
        t_w = 2.0 * math.pi * scale
        exact = nonlattice_gap(
            coding, decomposition, weights, component, [t_w]
        )[0]
        witness = {"t": exact.t, "gap": exact.gap, "radius": exact.radius}
    low = min(points, key=lambda p: p.gap)
    doc = {
        "command": "scan-lattice",
        "component": component,
        "min_gap": low.gap,
        "argmin_t": low.t,
        "lattice_scale": scale,
        "witness": witness,
        "points": [{"t": p.t, "gap": p.gap, "radius": p.radius} for p in points],
        "meta": _meta(args),
    }
    _emit(doc, args, is_report=False)
    return 0


def cmd_validate(args) -> int:
    coding = _coding_from(args.coding)
    expected = sphere_counts(coding, args.depth)
    report = validate_coding(coding, args.depth, expected)
    doc = {
        "command": "validate",
        "ok": report.ok,
        "depth": report.depth,
        "paths_per_depth": [str(c) for c in report.paths_per_depth],
        "failures": list(report.failures),
        "meta": _meta(args),
    }
    _emit(doc, args, is_report=False)
    return 0 if report.ok else 1


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _add_common(parser, weights: bool = True) -> None:
    parser.add_argument(
        "--coding", required=True, help="coding source: free:RANK or a JSON path"
    )
    if weights:
        parser.add_argument(
            "--weights",
            required=True,
            help="weights source: hom:a=1,b=0 | wordlen | edges:@FILE | path",
        )
        parser.add_argument(
            "--component",
            type=int,
            default=None,
            help="maximal component index (default: first in canonical order)",
        )
    parser.add_argument("--out", default=None, help="output path (default stdout)")
    parser.add_argument(
        "--format",
        choices=("json", "csv", "text"),
        default="json",
        help="output format (csv applies to limit-law reports)",
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hypstat",
        description="Statistical limit laws on word spheres of Markov-coded groups.",
    )
    parser.add_argument(
        "--version", action="version", version=f"hypstat {__version__}"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("growth", help="growth rate and sphere counts")
    _add_common(p, weights=False)
    p.add_argument("--horizon", type=int, default=40, help="count spheres up to here")
    p.set_defaults(func=cmd_growth)

    p = sub.add_parser("pressure", help="Perron data of the transfer matrix")
    _add_common(p)
    p.add_argument("--s", default="0", help="parameter (comma list for vectors)")
    p.set_defaults(func=cmd_pressure)

    p = sub.add_parser("stats", help="drift and variance/covariance")
    _add_common(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("dist", help="exact sphere distribution")
    _add_common(p)
    p.add_argument("--n", type=int, required=True, help="sphere radius")
    p.add_argument("--bin", type=float, default=None, help="bin width (real weights)")
    p.add_argument(
        "--overcounted",
        action="store_true",
        help="use the overcounted normalization (multiple maximal components)",
    )
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("averaging", help="sphere means against the drift")
    _add_common(p)
    p.add_argument("--ngrid", default="25:200:25", help="lo:hi[:step] or comma list")
    p.set_defaults(func=cmd_averaging)

    p = sub.add_parser("clt", help="Kolmogorov distance to the Gaussian")
    _add_common(p)
    p.add_argument("--ngrid", default="16,36,64,100,144,196")
    p.set_defaults(func=cmd_clt)

    p = sub.add_parser("ldt", help="large-deviation tails against the rate bound")
    _add_common(p)
    p.add_argument("--epsilon", type=float, required=True, help="deviation size")
    p.add_argument("--ngrid", default="10:200:10")
    p.add_argument("--tgrid", default="0:2:0.01", help="Chernoff parameter grid")
    p.set_defaults(func=cmd_ldt)

    p = sub.add_parser("mclt", help="vector CLT: covariance and cell masses")
    _add_common(p)
    p.add_argument("--ngrid", default="25,50,100,200")
    p.add_argument(
        "--cell",
        action="append",
        default=None,
        help="cell a1,b1,a2,b2 (inf/-inf/empty for unbounded); repeatable",
    )
    p.set_defaults(func=cmd_mclt)

    p = sub.add_parser("llt", help="local limit law on an interval")
    _add_common(p)
    p.add_argument("--interval", required=True, help="a,b")
    p.add_argument("--ngrid", default="100,200,300")
    p.add_argument("--bin", type=float, default=None, help="bin width override")
    p.add_argument(
        "--gate-grid",
        dest="gate_grid",
        default="0.1:20:0.05",
        help="frequency grid for the non-lattice gate",
    )
    p.set_defaults(func=cmd_llt)

    p = sub.add_parser("degeneracy", help="two-route variance degeneracy verdict")
    _add_common(p)
    p.add_argument("--ncap", type=int, default=64, help="largest radius checked")
    p.set_defaults(func=cmd_degeneracy)

    p = sub.add_parser("scan-lattice", help="non-lattice gap over a frequency grid")
    _add_common(p)
    p.add_argument("--tgrid", default="0.1:20:0.05")
    p.set_defaults(func=cmd_scan_lattice)

    p = sub.add_parser("validate", help="path-to-word bijection check")
    _add_common(p, weights=False)
    p.add_argument("--depth", type=int, default=8, help="enumeration depth")
    p.set_defaults(func=cmd_validate)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point; returns the exit code."""
    raw_argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        args = parser.parse_args(raw_argv)
    except SystemExit as exc:
        code = exc.code
        if code in (0, None):
            return 0
        return 2
    args.raw_argv = raw_argv
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"hypstat: usage error: {exc}", file=sys.stderr)
        return 2
    except HypstatError as exc:
        print(f"hypstat: error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"hypstat: i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
