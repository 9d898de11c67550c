"""Run the full verification suite over seeded random instances and tally the outcomes.

Usage::

    python scripts/suite_sweep.py --per-size 100 --sizes 2 4 8 16 32

Each instance gets one of four functions in rotation. Prints one line per size
with passed/failed/skipped counts and the worst residual-to-tolerance ratio per
check, then exits 1 if anything failed.
"""

from __future__ import annotations

import argparse
import collections
import sys
import time

import numpy as np

from utforms.generate import generate
from utforms.holo import parse
from utforms.linalg import fro
from utforms.verify import CHECK_ORDER, run_suite

KINDS = ("triangular", "near-defective")


def function_sources(t: np.ndarray, i: int) -> list[str]:
    s = complex(3 * max(fro(t), 1e-3) * np.exp(2j * np.pi * (i % 97) / 97))
    return ["z^2", "z^3 - 2*z + 1", "exp(z)", f"1/(z - ({s.real!r} + {s.imag!r}i))"]


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[2, 4, 8, 16, 32])
    parser.add_argument("--per-size", type=int, default=100)
    parser.add_argument("--seed", type=int, default=0, help="offset added to every instance seed")
    args = parser.parse_args(argv)

    total_failed = 0
    for n in args.sizes:
        counts = collections.Counter()
        ratio = collections.defaultdict(float)
        start = time.perf_counter()
        for i in range(args.per_size):
            t = generate(KINDS[i % 2], n, args.seed + 1000 * n + i)
            source = function_sources(t, i)[i % 4]
            report = run_suite(t, parse(source), seed=i)
            for c in report.checks:
                counts[c.status] += 1
                if c.status == "failed":
                    print(f"  n={n} i={i} {source}: {c.name} {c.residuals}", file=sys.stderr)
                for key, value in c.residuals.items():
                    tol = c.tolerances[key]
                    ratio[c.name] = max(ratio[c.name], value / tol if tol else 0.0)
        total_failed += counts["failed"]
        worst = ", ".join(f"{name} {ratio[name]:.1e}" for name in CHECK_ORDER if name in ratio)
        print(
            f"n={n:3d}: passed {counts['passed']}, failed {counts['failed']}, "
            f"skipped {counts['skipped']} in {time.perf_counter() - start:.1f}s; "
            f"worst residual/tolerance: {worst}"
        )
    return 1 if total_failed else 0


if __name__ == "__main__":
    raise SystemExit(main())
