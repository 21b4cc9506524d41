#!/usr/bin/env python
"""Compare the closed-form lambda(A) with a bisection root of the
normalization quadratic 2 l^2 - A l sqrt(1 - l^2) - 1 = 0.

The closed form coincides with the bisection root at -A, i.e. it solves the
quadratic with the sign of A flipped. The maximal alive probability is the
same either way; only the endpoint at which it is reached changes.
"""
from __future__ import annotations

import argparse
import math

import numpy as np
from scipy.optimize import brentq

from catbound.catmodel import lambda_from_A, lambda_residual


def root(a: float) -> float:
    return brentq(lambda l: lambda_residual(l, a), 1e-12, 1 - 1e-12, xtol=1e-15)


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--steps", type=int, default=9)
    args = p.parse_args()

    print(f"{'A':>6} {'closed^2':>12} {'root(A)^2':>12} {'root(-A)^2':>12} {'resid(closed)':>14}")
    for a in np.linspace(-2, 2, args.steps):
        lc = lambda_from_A(a)
        print(
            f"{a:6.2f} {lc**2:12.9f} {root(a)**2:12.9f} {root(-a)**2:12.9f} "
            f"{lambda_residual(lc, a):14.3e}"
        )
    print(f"1/2 + sqrt(2)/4 = {0.5 + math.sqrt(2) / 4:.12f}")


if __name__ == "__main__":
    main()
