"""Command-line interface.

Commands: perm, tq, series-check, chain-info, soup-sample, soup-verify,
cascade-verify.  Every command echoes its resolved configuration (including
the seed) and emits canonical JSON, so identical configurations produce
byte-identical output.  Exit codes: 0 ok, 2 usage, 3 domain/structure
errors, 4 failed verification verdicts.
"""

from __future__ import annotations

import argparse
import csv
import json
import secrets
import sys
from fractions import Fraction
from pathlib import Path

from .chains import SubMarkovChain, det_I_minus_P, det_identity_check, green_function
from .compare import empirical_compare, two_sample_compare
from .errors import LoopPermError
from .graphs import crossing_to_json, graph_of_matrix, tq_enumerate
from .laws import enumerate_crossing_outcomes, enumerate_theta_outcomes
from .loops import total_mass
from .matrices import RATIONAL, SquareMatrix
from .permanent import (
    DEFAULT_BRUTE_CAP,
    closed_form_coefficient,
    entry_monomial,
    per_alpha_block,
    per_alpha_starforest,
)
from .series import macmahon_check
from .serialize import dumps_canonical
from .soup import collect_soup_stats, write_soup_records
from .cascade import collect_cascade_stats

SCHEMA = "loopperm/1"

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_VERDICT = 4


def _alpha_arg(text: str):
    """Rational string for exact pipelines, decimal for float pipelines."""
    text = text.strip()
    try:
        if any(ch in text for ch in ".eE") and "/" not in text:
            return float(text)
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad alpha {text!r}: {exc}") from exc


def _int_list_arg(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(p) for p in text.split(",") if p.strip() != "")
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad integer list {text!r}") from exc


def _load_matrix(path: str) -> SquareMatrix:
    with open(path) as fh:
        return SquareMatrix.from_json(json.load(fh))


def _load_chain(path: str) -> SubMarkovChain:
    with open(path) as fh:
        return SubMarkovChain.from_json(json.load(fh))


def _alpha_json(alpha):
    return str(alpha) if isinstance(alpha, Fraction) else alpha


def _resolve_seed(seed: int | None) -> int:
    return secrets.randbits(48) if seed is None else int(seed)


def _emit(payload: dict, out: str | None) -> None:
    text = dumps_canonical(payload)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _write_csv(path: str, header: list[str], rows: list[tuple]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


# -- command handlers ---------------------------------------------------------


def cmd_perm(args) -> int:
    matrix = _load_matrix(args.matrix)
    q = args.q if args.q is not None else tuple([1] * matrix.d)
    graph = graph_of_matrix(matrix)
    use_closed = graph.is_star_forest and not args.force_brute and matrix.mode == RATIONAL
    if use_closed:
        poly = per_alpha_starforest(matrix, q)
    else:
        poly = per_alpha_block(matrix, q, args.brute_cap)
    config = {
        "command": "perm",
        "matrix": args.matrix,
        "q": list(q),
        "alpha": _alpha_json(args.alpha) if args.alpha is not None else None,
        "force_brute": bool(args.force_brute),
        "brute_cap": args.brute_cap or DEFAULT_BRUTE_CAP,
        "route": "closed-form" if use_closed else "brute-force",
    }
    result = {
        "classification": graph.classification,
        "poly": poly.to_json(),
        "pretty": str(poly),
    }
    if args.alpha is not None:
        value = poly.evaluate(args.alpha)
        result["value"] = str(value) if isinstance(value, Fraction) else float(value)
    if use_closed:
        monomials = []
        for n in tq_enumerate(graph, q):
            mono = entry_monomial(matrix, n)
            if mono == 0:
                continue
            monomials.append({
                "crossing": crossing_to_json(n),
                "coefficient": closed_form_coefficient(q, n).to_json(),
                "monomial": str(mono) if isinstance(mono, Fraction) else float(mono),
            })
        result["monomials"] = monomials
    _emit({"schema": SCHEMA, "config": config, "result": result}, args.out)
    return EXIT_OK


def cmd_tq(args) -> int:
    matrix = _load_matrix(args.matrix)
    graph = graph_of_matrix(matrix)
    crossings = tq_enumerate(graph, args.q)
    payload = {
        "schema": SCHEMA,
        "config": {"command": "tq", "matrix": args.matrix, "q": list(args.q)},
        "result": {
            "classification": graph.classification,
            "count": len(crossings),
            "crossings": [crossing_to_json(n) for n in crossings],
        },
    }
    _emit(payload, args.out)
    return EXIT_OK


def cmd_series_check(args) -> int:
    matrix = _load_matrix(args.matrix)
    exact_alpha = isinstance(args.alpha, Fraction)
    if (matrix.mode == RATIONAL) != exact_alpha:
        raise LoopPermError(
            "mixed modes: rational matrices take rational alpha (e.g. 1/2), "
            "float matrices take decimal alpha (e.g. 0.5)"
        )
    report = macmahon_check(matrix, args.alpha, args.cap, args.brute_cap)
    payload = {
        "schema": SCHEMA,
        "config": {
            "command": "series-check",
            "matrix": args.matrix,
            "alpha": _alpha_json(args.alpha),
            "cap": list(args.cap),
            "brute_cap": args.brute_cap or DEFAULT_BRUTE_CAP,
        },
        "result": report.to_json(),
    }
    _emit(payload, args.out)
    if args.csv:
        rows = [(" ".join(str(x) for x in r.q),
                 str(r.series_coeff), str(r.permanent_coeff), str(r.residual))
                for r in report.rows]
        _write_csv(args.csv, ["q", "series", "permanent", "residual"], rows)
    if args.plot:
        from .plots import save_figure, series_report_figure

        save_figure(series_report_figure(report, title="series residuals"), args.plot)
    return EXIT_OK if report.passed else EXIT_VERDICT


def cmd_chain_info(args) -> int:
    chain = _load_chain(args.matrix)
    det = det_I_minus_P(chain)
    green = green_function(chain)
    orderings = [tuple(range(chain.d))]
    identity_reports = [det_identity_check(chain, o) for o in orderings]
    payload = {
        "schema": SCHEMA,
        "config": {"command": "chain-info", "matrix": args.matrix},
        "result": {
            "labels": list(chain.labels),
            "classification": chain.graph().classification,
            "spectral_radius": chain.spectral_radius,
            "killing": [str(k) if isinstance(k, Fraction) else float(k)
                        for k in chain.killing],
            "det_I_minus_P": str(det) if isinstance(det, Fraction) else float(det),
            "total_mass": total_mass(chain),
            "green": green.to_json(),
            "det_identity": [r.to_json() for r in identity_reports],
        },
    }
    _emit(payload, args.out)
    return EXIT_OK


def cmd_soup_sample(args) -> int:
    chain = _load_chain(args.matrix)
    seed = _resolve_seed(args.seed)
    alpha = float(args.alpha)
    config = {
        "command": "soup-sample",
        "matrix": args.matrix,
        "alpha": _alpha_json(args.alpha),
        "samples": args.samples,
        "seed": seed,
        "workers": args.workers,
        "out_samples": args.out_samples,
    }
    if args.out_samples:
        with open(args.out_samples, "w") as fh:
            empty, loop_total = write_soup_records(
                chain, alpha, seed, args.samples, fh, workers=args.workers
            )
    else:
        stats = collect_soup_stats(chain, alpha, seed, args.samples,
                                   workers=args.workers)
        empty, loop_total = stats.empty, stats.loops_total
    result = {
        "samples": args.samples,
        "empty_frequency": empty / args.samples if args.samples else 0.0,
        "mean_loop_count": loop_total / args.samples if args.samples else 0.0,
    }
    _emit({"schema": SCHEMA, "config": config, "result": result}, args.out)
    return EXIT_OK


def cmd_soup_verify(args) -> int:
    chain = _load_chain(args.matrix)
    seed = _resolve_seed(args.seed)
    alpha_value = float(args.alpha)
    qcap = args.qcap if args.qcap is not None else tuple([4] * chain.d)
    stats = collect_soup_stats(chain, alpha_value, seed, args.samples,
                               workers=args.workers)
    outcomes = enumerate_theta_outcomes(chain, args.alpha, qcap,
                                        pmin=args.pmin, total_cap=args.qsum_cap)
    report = empirical_compare(stats.theta, stats.total, outcomes,
                               z_threshold=args.z_threshold)
    config = {
        "command": "soup-verify",
        "matrix": args.matrix,
        "alpha": _alpha_json(args.alpha),
        "samples": args.samples,
        "seed": seed,
        "workers": args.workers,
        "qcap": list(qcap),
        "qsum_cap": args.qsum_cap,
        "pmin": args.pmin,
        "z_threshold": args.z_threshold,
    }
    payload = {"schema": SCHEMA, "config": config, "result": report.to_json()}
    _emit(payload, args.out)
    if args.csv:
        _write_csv(args.csv, ["outcome", "theory", "empirical"], report.csv_rows())
    if args.plot:
        from .plots import law_report_figure, save_figure

        save_figure(law_report_figure(report, title="visit-field law"), args.plot)
    return EXIT_OK if report.passed else EXIT_VERDICT


def cmd_cascade_verify(args) -> int:
    chain = _load_chain(args.matrix)
    seed = _resolve_seed(args.seed)
    alpha_value = float(args.alpha)
    qcap = args.qcap if args.qcap is not None else tuple([3] * chain.d)
    cascade_stats = collect_cascade_stats(chain, alpha_value, seed, args.samples,
                                          workers=args.workers, root=args.root)
    soup_stats = collect_soup_stats(chain, alpha_value, seed + 1, args.samples,
                                    workers=args.workers)
    crossing_outcomes = enumerate_crossing_outcomes(chain, args.alpha, qcap,
                                                    pmin=args.pmin,
                                                    total_cap=args.qsum_cap)
    theta_outcomes = enumerate_theta_outcomes(chain, args.alpha, qcap,
                                              pmin=args.pmin,
                                              total_cap=args.qsum_cap)
    reports = {
        "cascade_theta": empirical_compare(cascade_stats.theta, cascade_stats.total,
                                           theta_outcomes, z_threshold=args.z_threshold),
        "cascade_crossings": empirical_compare(cascade_stats.crossings,
                                               cascade_stats.total, crossing_outcomes,
                                               z_threshold=args.z_threshold),
        "soup_theta": empirical_compare(soup_stats.theta, soup_stats.total,
                                        theta_outcomes, z_threshold=args.z_threshold),
        "soup_crossings": empirical_compare(soup_stats.crossings, soup_stats.total,
                                            crossing_outcomes,
                                            z_threshold=args.z_threshold),
    }
    cross_check = two_sample_compare(cascade_stats.crossings, cascade_stats.total,
                                     soup_stats.crossings, soup_stats.total)
    passed = all(r.passed for r in reports.values()) and cross_check["passed"]
    config = {
        "command": "cascade-verify",
        "matrix": args.matrix,
        "alpha": _alpha_json(args.alpha),
        "samples": args.samples,
        "seed": seed,
        "workers": args.workers,
        "root": args.root,
        "qcap": list(qcap),
        "qsum_cap": args.qsum_cap,
        "pmin": args.pmin,
        "z_threshold": args.z_threshold,
    }
    payload = {
        "schema": SCHEMA,
        "config": config,
        "result": {
            "passed": passed,
            "reports": {k: r.to_json() for k, r in reports.items()},
            "cascade_vs_soup": cross_check,
        },
    }
    _emit(payload, args.out)
    if args.csv:
        cascade_rows = {tuple(map(tuple, r.outcome)) if isinstance(r.outcome, tuple)
                        else r.outcome: r.empirical
                        for r in reports["cascade_crossings"].rows}
        rows = []
        for row in reports["soup_crossings"].rows:
            key = row.outcome
            rows.append((
                ";".join(" ".join(str(x) for x in rr) for rr in key),
                row.theory,
                cascade_rows.get(key, 0.0),
                row.empirical,
            ))
        _write_csv(args.csv, ["outcome", "theory", "cascade", "soup"], rows)
    if args.plot:
        from .plots import law_report_figure, save_figure

        save_figure(law_report_figure(reports["cascade_crossings"],
                                      title="crossing-field law (cascade)"), args.plot)
    return EXIT_OK if passed else EXIT_VERDICT


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="loopperm",
        description="alpha-permanents of block matrices and Markov loop soups",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--matrix", required=True, help="matrix/chain JSON file")
        p.add_argument("--out", help="write JSON output here instead of stdout")

    p = sub.add_parser("perm", help="block alpha-permanent as a polynomial")
    add_common(p)
    p.add_argument("--q", type=_int_list_arg, help="repetition counts, e.g. 1,2,1")
    p.add_argument("--alpha", type=_alpha_arg, help="evaluate the polynomial here")
    p.add_argument("--force-brute", action="store_true",
                   help="skip the closed form even on star-forests")
    p.add_argument("--brute-cap", type=int, default=None,
                   help=f"permutation order cap (default {DEFAULT_BRUTE_CAP})")
    p.set_defaults(func=cmd_perm)

    p = sub.add_parser("tq", help="enumerate crossing supports for given row sums")
    add_common(p)
    p.add_argument("--q", type=_int_list_arg, required=True)
    p.set_defaults(func=cmd_tq)

    p = sub.add_parser("series-check",
                       help="determinant power series vs block permanents")
    add_common(p)
    p.add_argument("--alpha", type=_alpha_arg, required=True)
    p.add_argument("--cap", type=_int_list_arg, required=True,
                   help="per-variable degree bounds, e.g. 3,3,3")
    p.add_argument("--brute-cap", type=int, default=None)
    p.add_argument("--csv", help="write per-q rows as CSV")
    p.add_argument("--plot", help="write a residual figure (png)")
    p.set_defaults(func=cmd_series_check)

    p = sub.add_parser("chain-info", help="validate a chain and report invariants")
    add_common(p)
    p.set_defaults(func=cmd_chain_info)

    p = sub.add_parser("soup-sample", help="sample loop soups")
    add_common(p)
    p.add_argument("--alpha", type=_alpha_arg, required=True)
    p.add_argument("--samples", type=int, default=1)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out-samples", help="newline-delimited JSON of sampled soups")
    p.set_defaults(func=cmd_soup_sample)

    p = sub.add_parser("soup-verify", help="soup visit field vs permanental law")
    add_common(p)
    p.add_argument("--alpha", type=_alpha_arg, required=True)
    p.add_argument("--samples", type=int, default=100000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--qcap", type=_int_list_arg, default=None)
    p.add_argument("--qsum-cap", type=int, default=8)
    p.add_argument("--pmin", type=float, default=1e-3)
    p.add_argument("--z-threshold", type=float, default=4.0)
    p.add_argument("--csv", help="write (outcome, theory, empirical) CSV")
    p.add_argument("--plot", help="write a comparison figure (png)")
    p.set_defaults(func=cmd_soup_verify)

    p = sub.add_parser("cascade-verify",
                       help="cascade sampler vs soup sampler vs closed-form laws")
    add_common(p)
    p.add_argument("--alpha", type=_alpha_arg, required=True)
    p.add_argument("--samples", type=int, default=100000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--root", type=int, default=None,
                   help="root vertex (1-indexed) for the cascade")
    p.add_argument("--qcap", type=_int_list_arg, default=None)
    p.add_argument("--qsum-cap", type=int, default=6)
    p.add_argument("--pmin", type=float, default=1e-3)
    p.add_argument("--z-threshold", type=float, default=4.0)
    p.add_argument("--csv", help="write (outcome, theory, cascade, soup) CSV")
    p.add_argument("--plot", help="write a comparison figure (png)")
    p.set_defaults(func=cmd_cascade_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "root", None) is not None:
        args.root = args.root - 1  # external labels are 1-indexed
    try:
        return args.func(args)
    except LoopPermError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except json.JSONDecodeError as exc:
        print(f"error: bad JSON input: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
