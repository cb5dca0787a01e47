"""Gauss-Legendre rules and Richardson extrapolation in the regularization width."""

from __future__ import annotations

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=32)
def _legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre(half_width: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of an ``n``-point rule on ``[-half_width, half_width]``."""
    x, w = _legendre(int(n))
    return x * half_width, w * half_width


def richardson(values, ratio: float = 2.0) -> tuple[complex, float]:
    """Extrapolate ``values[i] = S(h / ratio**i)`` to ``h -> 0``.

    Assumes an error expansion in even powers of ``h`` (true for symmetric
    nascent deltas). Returns the extrapolated value and the size of the last
    correction as an error estimate.
    """
    table = [complex(v) for v in values]
    if len(table) == 1:
        return table[0], float("nan")
    estimate = 0.0
    power = 2
    while len(table) > 1:
        f = ratio**power
        new = [(f * table[i + 1] - table[i]) / (f - 1) for i in range(len(table) - 1)]
        estimate = abs(new[-1] - table[-1])
        table = new
        power += 2
    return table[0], estimate
