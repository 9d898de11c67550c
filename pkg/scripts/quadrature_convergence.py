"""Relative error of the contour quadrature against the Schur route as nodes double.

Usage::

    python scripts/quadrature_convergence.py --n 16 --fn "exp(z)" --seeds 0 1 2

For each seed prints the error at 16, 32, ..., 1024 nodes per circle and the
ratio between consecutive errors.
"""

from __future__ import annotations

import argparse

from utforms.decomp import decompose
from utforms.generate import KINDS, generate
from utforms.holo import Circle, Contour, calc_contour, calc_triangular, contour_for, parse
from utforms.linalg import fro

NODES = (16, 32, 64, 128, 256, 512, 1024)


def errors(t, h) -> list[float]:
    exact = calc_triangular(t, h)
    base = contour_for(t, h, extra_points=decompose(t).diagonal)
    out = []
    for m in NODES:
        c = Contour(tuple(Circle(k.center, k.radius, m) for k in base.circles))
        out.append(fro(calc_contour(t, h, c) - exact) / max(1.0, fro(exact)))
    return out


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=16)
    parser.add_argument("--kind", choices=[k for k in KINDS if k != "commuting-pair"], default="triangular")
    parser.add_argument("--fn", default="exp(z)")
    parser.add_argument("--seeds", type=int, nargs="+", default=[0, 1, 2])
    args = parser.parse_args(argv)

    h = parse(args.fn)
    print("seed  " + "  ".join(f"{m:>8d}" for m in NODES))
    for seed in args.seeds:
        errs = errors(generate(args.kind, args.n, seed), h)
        print(f"{seed:4d}  " + "  ".join(f"{e:8.1e}" for e in errs))
        ratios = [b / a if a > 0 else 0.0 for a, b in zip(errs, errs[1:])]
        print("      " + " " * 5 + "  ".join(f"{r:8.2f}" for r in ratios))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
