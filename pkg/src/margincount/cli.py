"""Command-line front door for the margin-counting library.

Verbs map one-to-one onto library operations:

    feasible | count | maxent | bounds | independence | diagnose |
    concavity | asymptotic | sample | compare

Input is a margins JSON document {"rows": [...], "cols": [...]} with an
optional "mask" list of '0'/'1' strings (``concavity`` instead wants
{"items": [{"rows": ..., "cols": ..., "beta": ...}, ...]}).  Counts are
printed as exact decimal strings; everything else is reported in natural
logs.  Exit status: 0 on success (including "infeasible" verdicts), 1 on
domain errors (unbalanced margins, no interior point, exhausted sampling
budget, ...), 2 on I/O or parse errors, so shell pipelines can tell a
degenerate instance from a bad invocation.

Given identical inputs, options, and seed, output is byte-identical
across runs: JSON keys are sorted, floats are rendered with repr, and the
samplers are pure functions of (seed, stream, workers).
"""

from __future__ import annotations

import argparse
import dataclasses
import io
import json
import os
import sys

from .asymptotics import asymptotic_count
from .errors import MarginCountError
from .estimates import (
    _log_int,
    correlation_diagnostic,
    independence_estimate_01,
    independence_estimate_nonneg,
    log_concavity_check,
)
from .exact import count_01, count_nonneg
from .margins import CellMask, Margins, gale_ryser_feasible
from .maxent import bounds_01, bounds_nonneg, solve_maxent_01, solve_maxent_nonneg
from .sampler import RngSeed, sample_uniform

__all__ = ["main"]

# compare only prints an exact count when the instance is small enough for
# the brute-force oracles that validated the DP counters
ORACLE_CELL_GUARD = 36


# ---------------------------------------------------------------------------
# input parsing


def _load_json(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _parse_margins(doc) -> tuple[Margins, CellMask | None]:
    if not isinstance(doc, dict) or "rows" not in doc or "cols" not in doc:
        raise ValueError('margins JSON must be an object with "rows" and "cols"')
    margins = Margins(tuple(doc["rows"]), tuple(doc["cols"]))
    mask = CellMask.from_strings(doc["mask"]) if "mask" in doc else None
    return margins, mask


def _load_instance(args) -> tuple[Margins, CellMask | None]:
    if args.margins is None:
        raise ValueError("--margins <path> is required for this verb")
    margins, mask = _parse_margins(_load_json(args.margins))
    if args.mask is not None:
        doc = _load_json(args.mask)
        strings = doc["mask"] if isinstance(doc, dict) else doc
        mask = CellMask.from_strings(strings)
    if mask is not None:
        mask.validate_against(margins)
    return margins, mask


def _solve(margins: Margins, mode: str, mask, tol: float):
    if mode == "zero-one":
        return solve_maxent_01(margins, mask=mask, tol=tol)
    return solve_maxent_nonneg(margins, mask=mask, tol=tol)


# ---------------------------------------------------------------------------
# rendering


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _flat_items(payload: dict, prefix: str = ""):
    for key, value in payload.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            yield from _flat_items(value, prefix=name + ".")
        elif isinstance(value, (list, tuple)):
            yield name, json.dumps(value, sort_keys=True)
        else:
            yield name, _fmt(value)


def _render(payload: dict, fmt: str, text_lines: list[str], csv_rows=None) -> str:
    if fmt == "json":
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        import csv as _csv

        writer = _csv.writer(buf, lineterminator="\n")
        if csv_rows is None:
            writer.writerow(["key", "value"])
            for key, value in _flat_items(payload):
                writer.writerow([key, value])
        else:
            for row in csv_rows:
                writer.writerow(row)
        return buf.getvalue()
    return "\n".join(text_lines) + "\n"


# ---------------------------------------------------------------------------
# verbs


def _verb_feasible(args) -> tuple[dict, list[str], None]:
    margins, mask = _load_instance(args)
    if args.mode == "zero-one":
        ok = gale_ryser_feasible(margins)
        if ok and mask is not None:
            # the Gale-Ryser test knows nothing about prescribed zeros
            ok = count_01(margins, mask=mask) > 0
    else:
        ok = count_nonneg(margins, mask=mask) > 0 if mask is not None else True
    verdict = "feasible" if ok else "infeasible"
    return {"mode": args.mode, "feasible": bool(ok)}, [verdict], None


def _verb_count(args) -> tuple[dict, list[str], None]:
    margins, mask = _load_instance(args)
    if args.mode == "zero-one":
        value = count_01(margins, mask=mask)
    else:
        value = count_nonneg(margins, mask=mask)
    payload = {"mode": args.mode, "count": str(value)}
    return payload, [str(value)], None


def _verb_maxent(args) -> tuple[dict, list[str], None]:
    margins, mask = _load_instance(args)
    solution = _solve(margins, args.mode, mask, args.tol)
    payload = solution.to_dict()
    text = [
        f"mode: {solution.mode}",
        f"entropy: {_fmt(solution.entropy)}",
        f"log_alpha: {_fmt(solution.log_alpha)}",
        f"residual: {_fmt(solution.residual)}",
        f"iterations: {solution.iterations}",
        f"max_z: {_fmt(float(solution.Z.max()))}",
    ]
    return payload, text, None


def _verb_bounds(args) -> tuple[dict, list[str], None]:
    margins, mask = _load_instance(args)
    if mask is not None:
        raise MarginCountError("bounds are stated for unmasked margins only")
    solution = _solve(margins, args.mode, None, args.tol)
    if args.mode == "zero-one":
        lo, hi = bounds_01(margins, solution=solution)
        payload = {"mode": args.mode, "log_lower": lo, "log_upper": hi}
        text = [f"log_lower: {_fmt(lo)}", f"log_upper: {_fmt(hi)}"]
    else:
        hi, correction = bounds_nonneg(margins, solution=solution)
        payload = {
            "mode": args.mode,
            "log_upper": hi,
            "correction": correction,
            "log_lower_gamma1": hi - correction,
        }
        text = [
            f"log_upper: {_fmt(hi)}",
            f"correction: {_fmt(correction)}",
            f"log_lower_gamma1: {_fmt(hi - correction)}",
        ]
    return payload, text, None


def _verb_independence(args) -> tuple[dict, list[str], None]:
    margins, _ = _load_instance(args)
    if args.mode == "zero-one":
        value = independence_estimate_01(margins)
    else:
        value = independence_estimate_nonneg(margins)
    return {"mode": args.mode, "log_independence": value}, [_fmt(value)], None


def _verb_diagnose(args) -> tuple[dict, list[str], None]:
    margins, _ = _load_instance(args)
    report = correlation_diagnostic(margins, args.mode)
    payload = dataclasses.asdict(report)
    text = [f"{key}: {_fmt(value)}" for key, value in payload.items()]
    return payload, text, None


def _verb_concavity(args) -> tuple[dict, list[str], None]:
    if args.margins is None:
        raise ValueError("--margins <path> is required for this verb")
    doc = _load_json(args.margins)
    if not isinstance(doc, dict) or "items" not in doc:
        raise ValueError('concavity input must be an object with an "items" list')
    raw = doc["items"]
    if not raw:
        raise ValueError('"items" must be a non-empty list')
    items = []
    for entry in raw:
        margins = Margins(tuple(entry["rows"]), tuple(entry["cols"]))
        beta = float(entry.get("beta", 1.0 / len(raw)))
        items.append((margins, beta))
    use_exact = all(mg.m * mg.n <= ORACLE_CELL_GUARD for mg, _ in items)
    report = log_concavity_check(items, args.mode, use_exact=use_exact)
    payload = dataclasses.asdict(report)
    text = [f"{key}: {_fmt(value)}" for key, value in payload.items()]
    return payload, text, None


def _verb_asymptotic(args) -> tuple[dict, list[str], None]:
    margins, _ = _load_instance(args)
    data = asymptotic_count(margins, args.mode)
    payload = data.to_dict()
    text = [f"{key}: {_fmt(value)}" for key, value in sorted(payload.items())]
    return payload, text, None


def _verb_sample(args) -> tuple[dict, list[str], None]:
    margins, mask = _load_instance(args)
    if mask is not None:
        raise MarginCountError("sampling is defined for unmasked margins only")
    if args.out is None:
        raise ValueError("sample requires --out <path> for the JSON-lines sink")
    rng = RngSeed(args.seed)
    _, report = sample_uniform(
        margins,
        args.mode,
        rng,
        budget=args.budget,
        n_samples=args.n_samples,
        keep=args.n_samples,
        workers=args.threads,
    )
    with open(args.out, "w", encoding="utf-8") as sink:
        for mat in report.samples:
            sink.write(json.dumps(mat.tolist(), separators=(",", ":")) + "\n")
    payload = report.to_dict()
    payload["out"] = args.out
    text = [f"{key}: {_fmt(value)}" for key, value in sorted(payload.items())]
    return payload, text, None


def _verb_compare(args) -> tuple[dict, list[str], list]:
    margins, mask = _load_instance(args)
    if mask is not None:
        raise MarginCountError("compare is defined for unmasked margins only")
    mode = args.mode
    solution = _solve(margins, mode, None, args.tol)

    rows = []  # (verb, value_log, decimal_or_na, regime_flags)
    exact_log = None
    if margins.m * margins.n <= ORACLE_CELL_GUARD:
        count = count_01(margins) if mode == "zero-one" else count_nonneg(margins)
        exact_log = _log_int(count) if count > 0 else float("-inf")
        rows.append(("count", exact_log, str(count), "oracle"))
    else:
        rows.append(("count", None, "n/a", "outside-oracle-guard"))

    if mode == "zero-one":
        lo, hi = bounds_01(margins, solution=solution)
        rows.append(("bounds.lower", lo, "n/a", "certified"))
        rows.append(("bounds.upper", hi, "n/a", "certified"))
        ind = independence_estimate_01(margins)
    else:
        hi, correction = bounds_nonneg(margins, solution=solution)
        rows.append(("bounds.lower", hi - correction, "n/a", "gamma=1"))
        rows.append(("bounds.upper", hi, "n/a", "certified"))
        ind = independence_estimate_nonneg(margins)
    rows.append(("independence", ind, "n/a", "heuristic"))

    data = asymptotic_count(margins, mode, solution=solution)
    regime = "in-regime" if data.in_regime else "outside-regime"
    rows.append(("asymptotic.gaussian", data.gaussian_log, "n/a", regime))
    rows.append(("asymptotic.corrected", data.corrected_log, "n/a", regime))

    # gaps are measured against the exact count when the oracle ran,
    # otherwise against the certified upper bound
    reference = exact_log if exact_log is not None else solution.log_alpha
    ref_name = "count" if exact_log is not None else "bounds.upper"

    table = []
    for verb, value_log, decimal, flags in rows:
        gap = None if value_log is None else value_log - reference
        table.append(
            {
                "verb": verb,
                "value_log": value_log,
                "value_decimal_or_na": decimal,
                "gap_log": gap,
                "regime_flags": flags,
            }
        )
    payload = {"mode": mode, "reference": ref_name, "table": table}

    header = f"{'verb':<22}{'value_log':>18}{'gap_log':>14}  {'decimal':<14}flags"
    text = [header]
    for row in table:
        vlog = "n/a" if row["value_log"] is None else f"{row['value_log']:.6f}"
        gap = "n/a" if row["gap_log"] is None else f"{row['gap_log']:+.6f}"
        text.append(
            f"{row['verb']:<22}{vlog:>18}{gap:>14}  "
            f"{row['value_decimal_or_na']:<14}{row['regime_flags']}"
        )
    csv_rows = [["verb", "value_log", "value_decimal_or_na", "regime_flags"]]
    for row in table:
        vlog = "" if row["value_log"] is None else repr(row["value_log"])
        csv_rows.append([row["verb"], vlog, row["value_decimal_or_na"], row["regime_flags"]])
    return payload, text, csv_rows


_VERBS = {
    "feasible": _verb_feasible,
    "count": _verb_count,
    "maxent": _verb_maxent,
    "bounds": _verb_bounds,
    "independence": _verb_independence,
    "diagnose": _verb_diagnose,
    "concavity": _verb_concavity,
    "asymptotic": _verb_asymptotic,
    "sample": _verb_sample,
    "compare": _verb_compare,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="margincount",
        description="Count, bound, estimate, and uniformly sample matrices "
        "with prescribed row and column sums.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)
    for verb in _VERBS:
        p = sub.add_parser(verb)
        p.add_argument("--mode", choices=["zero-one", "nonneg"], default="zero-one")
        p.add_argument("--margins", metavar="PATH", help="margins JSON document")
        p.add_argument("--mask", metavar="PATH", help="mask JSON/text document")
        p.add_argument("--tol", type=float, default=1e-10)
        p.add_argument("--budget", type=int, default=10**7)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--n-samples", type=int, default=1, dest="n_samples")
        p.add_argument(
            "--threads",
            type=int,
            default=max(1, os.cpu_count() or 1),
            help="worker streams for the sampler (default: available parallelism)",
        )
        p.add_argument("--format", choices=["json", "csv", "text"], default="text")
        p.add_argument("--out", metavar="PATH")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        payload, text, csv_rows = _VERBS[args.verb](args)
    except MarginCountError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    rendered = _render(payload, args.format, text, csv_rows)
    if args.out is not None and args.verb != "sample":
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(rendered)
    else:
        sys.stdout.write(rendered)
    return 0


if __name__ == "__main__":
    sys.exit(main())
