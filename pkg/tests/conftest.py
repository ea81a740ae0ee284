"""Shared helpers for the test suite."""

import math

import numpy as np

from affilfit.graph import BipartiteGraph, ParameterVector, degrees
from affilfit.likelihood import score, sigmoid
from affilfit.solver import existence_precheck


def random_interior_graph(rng, m_range=(2, 6), n_range=(3, 8)):
    """Random small graph with no boundary degrees, or None on a bad draw."""
    m = int(rng.integers(m_range[0], m_range[1] + 1))
    n = int(rng.integers(n_range[0], n_range[1] + 1))
    p = float(rng.uniform(0.25, 0.75))
    x = (rng.random((m, n)) < p).astype(np.int8)
    g = BipartiteGraph(x=x)
    bad_e, bad_a = existence_precheck(degrees(g), m, n)
    if bad_e or bad_a or degrees(g).b[-1] in (0, m):
        return None
    return g


def _solve_coordinate(target, others, x):
    """Root of sum_k sigmoid(x + others[k]) = target in x, by scalar Newton
    safeguarded with a bisection bracket. The left side is strictly
    increasing, so the bracket always closes in."""
    lo, hi = -40.0, 40.0
    for _ in range(200):
        f = -target
        fp = 0.0
        for o in others:
            p = 1.0 / (1.0 + math.exp(-(x + o)))
            f += p
            fp += p * (1.0 - p)
        if abs(f) < 1e-13:
            return x
        if f > 0.0:
            hi = x
        else:
            lo = x
        x_new = x - f / fp if fp > 0.0 else 0.5 * (lo + hi)
        if not lo < x_new < hi:
            x_new = 0.5 * (lo + hi)
        x = x_new
    return x


def coordinate_ascent_mle(g, max_sweeps=300, tol=1e-11):
    """Independent maximizer: cyclically re-solve each likelihood equation
    in its own coordinate, warm-starting every scalar solve at the current
    value. Returns None if the sweep limit is hit before the score norm
    drops below tol."""
    ds = degrees(g)
    alpha = [0.0] * g.m
    beta = [0.0] * g.n  # trailing entry pinned at zero
    for _ in range(max_sweeps):
        for i in range(g.m):
            alpha[i] = _solve_coordinate(float(ds.d[i]), beta, alpha[i])
        for j in range(g.n - 1):
            beta[j] = _solve_coordinate(float(ds.b[j]), alpha, beta[j])
        theta = ParameterVector(alpha=np.array(alpha), beta=np.array(beta[:-1]))
        if np.abs(score(g, theta)).max() <= tol:
            return theta
    return None
