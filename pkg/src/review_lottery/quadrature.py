"""Composite Simpson rules on data-dependent pieces of [0, 1].

The integrands in this package are smooth except at the participation
threshold tau (a jump in the survival factor) and, when the effective
noise is small, inside a narrow sigmoid window around the acceptance
cutoff. Every integral is therefore split at those locations and each
piece carries its own Simpson rule; degenerate (zero-length) pieces
contribute zero weight.
"""

from __future__ import annotations

import numpy as np

DEFAULT_POINTS = 50


def simpson_rule(points: int = DEFAULT_POINTS):
    """Simpson nodes and weights on the reference interval [0, 1].

    The count is rounded up to the next odd number of nodes (Simpson
    needs an even number of subintervals).
    """
    n = max(int(points), 3)
    if n % 2 == 0:
        n += 1
    x = np.linspace(0.0, 1.0, n)
    w = np.ones(n)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    w /= 3.0 * (n - 1)
    return x, w


def piecewise_rule(breaks, points: int = DEFAULT_POINTS):
    """Map the reference Simpson rule onto each piece of row-wise breakpoints.

    breaks: array (rows, pieces+1), nondecreasing along the last axis.
    Returns (nodes, weights) of shape (rows, pieces, n). Weights of each
    row sum to breaks[-1] - breaks[0].
    """
    x, w = simpson_rule(points)
    breaks = np.atleast_2d(np.asarray(breaks, dtype=float))
    lo = breaks[:, :-1]
    length = np.diff(breaks, axis=1)
    nodes = lo[:, :, None] + length[:, :, None] * x
    weights = length[:, :, None] * w
    return nodes, weights


def integrate(fn, a: float, b: float, points: int = DEFAULT_POINTS) -> float:
    """Simpson integral of a vectorized function over a single interval."""
    if b <= a:
        return 0.0
    x, w = simpson_rule(points)
    nodes = a + (b - a) * x
    return float((b - a) * np.sum(w * fn(nodes)))
