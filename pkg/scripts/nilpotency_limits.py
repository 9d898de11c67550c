"""How well each nilpotency test does on conjugated strictly upper triangular matrices.

Usage::

    python scripts/nilpotency_limits.py --sizes 4 8 16 24 32 --trials 40

For ``Q = U R U^*`` with ``R`` strictly upper triangular (entries scaled by
``1/sqrt(n)``) and ``U`` Haar, prints per size:

* the median and largest computed eigenvalue radius relative to ``||Q||_F``,
  which rounding inflates to roughly ``eps^(1/n)``;
* how often the staircase certificate alone accepts ``Q`` at ``1e-8``;
* how often the certificate accepts when given the basis ``U``.
"""

from __future__ import annotations

import argparse

import numpy as np

from utforms.generate import random_strict_upper, random_unitary
from utforms.linalg import eigenvalues, fro
from utforms.tracial import is_nilpotent


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[4, 8, 16, 24, 32])
    parser.add_argument("--trials", type=int, default=40)
    args = parser.parse_args(argv)

    print(f"{'n':>3}  {'eig radius (median, max)':>26}  {'staircase':>9}  {'with basis':>10}")
    for n in args.sizes:
        radii, staircase, with_basis = [], 0, 0
        for trial in range(args.trials):
            rng = np.random.default_rng([n, trial])
            u = random_unitary(n, rng)
            q = u @ random_strict_upper(rng, n) @ u.conj().T
            radii.append(np.max(np.abs(eigenvalues(q))) / fro(q))
            staircase += bool(is_nilpotent(q))
            with_basis += bool(is_nilpotent(q, basis=u))
        print(
            f"{n:3d}  {np.median(radii):12.1e} {np.max(radii):12.1e}  "
            f"{staircase:>4d}/{args.trials:<4d}  {with_basis:>5d}/{args.trials:<4d}"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
