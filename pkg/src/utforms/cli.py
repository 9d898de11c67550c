"""Command-line interface: ``utforms {gen,decompose,calc,verify,brown}``.

Every command writes one JSON document to stdout. When ``--out`` (or
``--report``) is given, the main document goes to that file and stdout gets a
short summary instead. Diagnostics go to stderr.

Exit codes: 0 success; 1 some verification check failed; 2 bad input (arguments,
files, function source, no usable contour); 3 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from . import io
from .decomp import decompose
from .errors import (
    InputError,
    NoValidContour,
    SingularityHit,
    UtformsError,
)
from .generate import KINDS, generate
from .holo import Contour, calc_contour, calc_triangular, parse
from .linalg import fro
from .ordering import OrderingTag
from .tracial import brown_measure, fk_determinant, is_nilpotent, nilpotency_in_basis
from .verify import SuiteConfig, run_suite

log = logging.getLogger("utforms")

EXIT_OK, EXIT_CHECK_FAILED, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3
SEED_ENV = "UTF_SEED"
INPUT_ERRORS = (InputError, NoValidContour, SingularityHit)


def _emit(doc) -> None:
    sys.stdout.write(io.dumps(doc))


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise InputError(f"{SEED_ENV} must be an integer, got {env!r}") from None


def _order(name: str) -> OrderingTag:
    try:
        return OrderingTag.from_name(name)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def cmd_gen(args) -> int:
    seed = _resolve_seed(args)
    inst = generate(args.kind, args.n, seed)
    if args.kind == "commuting-pair":
        docs = {"N": io.matrix_to_json(inst[0]), "Q": io.matrix_to_json(inst[1])}
        if args.out is None:
            _emit(docs)
            return EXIT_OK
        out = Path(args.out)
        stem = out.with_suffix("") if out.suffix == ".json" else out
        files = []
        for key, doc in docs.items():
            path = f"{stem}.{key}.json"
            io.write_json(path, doc)
            files.append(path)
        _emit({"kind": args.kind, "n": args.n, "seed": seed, "files": files})
        return EXIT_OK
    if args.out is None:
        _emit(io.matrix_to_json(inst))
    else:
        io.write_matrix(args.out, inst)
        _emit({"kind": args.kind, "n": args.n, "seed": seed, "files": [args.out]})
    return EXIT_OK


def cmd_decompose(args) -> int:
    t = io.read_matrix(args.input)
    d = decompose(t, _order(args.order))
    radius, lower = nilpotency_in_basis(d.q_part, d.flag.basis)
    witness = is_nilpotent(d.q_part, 1e-8 * args.tol_scale, basis=d.flag.basis)
    summary = {
        "n_norm": fro(d.n_part),
        "q_norm": fro(d.q_part),
        "q_spectral_radius": radius,
        "q_lower_residual": lower,
        "q_eigenvalue_radius": witness.spectral_radius,
        "q_nilpotent": witness.nilpotent,
        "brown": brown_measure(t).to_json(),
    }
    if args.out is None:
        _emit({"decomposition": io.decomposition_to_json(d), "summary": summary})
    else:
        io.write_json(args.out, io.decomposition_to_json(d))
        _emit(summary)
    return EXIT_OK


def cmd_calc(args) -> int:
    t = io.read_matrix(args.input)
    h = parse(args.fn)
    contour = Contour.from_json(io.read_json(args.contour)) if args.contour else None
    result, summary = None, {"function": h.pretty(), "method": args.method}
    if args.method in ("contour", "both"):
        result = calc_contour(t, h, contour, nodes=args.nodes, workers=args.workers)
        summary["nodes"] = args.nodes
    if args.method in ("schur", "both"):
        schur = calc_triangular(t, h)
        if result is None:
            result = schur
        else:
            cross = fro(result - schur) / max(1.0, fro(schur))
            summary["cross_method_residual"] = cross
            log.info("contour vs Schur relative residual: %.3e", cross)
    if args.out is None:
        if "cross_method_residual" in summary:
            print(
                f"cross-method residual {summary['cross_method_residual']:.3e}", file=sys.stderr
            )
        _emit(io.matrix_to_json(result))
    else:
        io.write_matrix(args.out, result)
        _emit(summary)
    return EXIT_OK


def cmd_verify(args) -> int:
    t = io.read_matrix(args.input)
    h = parse(args.fn)
    config = SuiteConfig(
        tol_scale=args.tol_scale,
        nodes=args.nodes,
        trials=args.trials,
        workers=args.workers,
        order=_order(args.order),
    )
    report = run_suite(t, h, _resolve_seed(args), config)
    doc = report.to_json(include_timings=args.timings)
    counts = {s: sum(c.status == s for c in report.checks) for s in ("passed", "failed", "skipped")}
    for c in report.checks:
        if c.status != "passed":
            log.warning("%s %s: %s", c.name, c.status, c.details)
    if args.report is None:
        _emit(doc)
    else:
        io.write_json(args.report, doc)
        _emit({"ok": report.ok, **counts, "report": args.report})
    return EXIT_OK if report.ok else EXIT_CHECK_FAILED


def cmd_brown(args) -> int:
    t = io.read_matrix(args.input)
    doc = brown_measure(t).to_json()
    doc["fk_determinant"] = fk_determinant(t)
    _emit(doc)
    return EXIT_OK


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="utforms",
        description="Normal-plus-nilpotent decomposition of matrices and checks of its "
        "behaviour under holomorphic functional calculus.",
    )
    parser.add_argument(
        "--tol-scale", type=float, default=1.0, help="multiply every default tolerance"
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a seeded random instance")
    p.add_argument("kind", choices=KINDS)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=None, help=f"default: ${SEED_ENV} or 0")
    p.add_argument("--out", help="output path (commuting-pair writes STEM.N.json and STEM.Q.json)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("decompose", help="T = N + Q from the ordered Schur flag")
    p.add_argument("input")
    p.add_argument("--order", default="modulus", help="modulus or real-imag")
    p.add_argument("--out")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("calc", help="evaluate h(T)")
    p.add_argument("input")
    p.add_argument("--fn", required=True, help='function of z, e.g. "exp(z)" or "1/(z-3)"')
    p.add_argument("--method", choices=("contour", "schur", "both"), default="contour")
    p.add_argument("--nodes", type=_positive_int, default=256)
    p.add_argument("--contour", help="contour JSON to use instead of the automatic one")
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_calc)

    p = sub.add_parser("verify", help="run every check and write a report")
    p.add_argument("input")
    p.add_argument("--fn", required=True)
    p.add_argument("--seed", type=int, default=None, help=f"default: ${SEED_ENV} or 0")
    p.add_argument("--report")
    p.add_argument("--order", default="modulus")
    p.add_argument("--nodes", type=_positive_int, default=256)
    p.add_argument("--trials", type=_positive_int, default=20)
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--timings", action="store_true", help="include wall-clock timings")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("brown", help="Brown measure and Fuglede-Kadison determinant")
    p.add_argument("input")
    p.set_defaults(func=cmd_brown)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="utforms: %(message)s",
        stream=sys.stderr,
    )
    if getattr(args, "n", None) is not None and args.n < 2:
        parser.error("--n must be at least 2")
    if not args.tol_scale > 0:
        parser.error("--tol-scale must be positive")
    try:
        return args.func(args)
    except INPUT_ERRORS as exc:
        print(f"utforms: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except UtformsError as exc:
        print(f"utforms: numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
