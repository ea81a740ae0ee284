"""Graph sampling and simulation parameter scenarios.

Scenario parameters take the linear ramp alpha_{i+1} = (m-1-i) L_a/(m-1)
down to zero, and likewise for the free actor parameters with L_b resolved
against n. The ramp height L is one of 0, log(log(size)), sqrt(log(size)),
log(size), or an explicit number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import BipartiteGraph, ParameterVector
from .likelihood import edge_probability_matrix

L_KINDS = ("zero", "loglog", "sqrtlog", "log")


def resolve_ramp_height(l_kind: str | float, size: int) -> float:
    if isinstance(l_kind, (int, float)):
        return float(l_kind)
    if l_kind == "zero":
        return 0.0
    if l_kind == "loglog":
        return math.log(math.log(size))
    if l_kind == "sqrtlog":
        return math.sqrt(math.log(size))
    if l_kind == "log":
        return math.log(size)
    raise ValueError(f"unknown ramp kind {l_kind!r}; expected one of {L_KINDS} or a number")


@dataclass(frozen=True)
class Scenario:
    m: int
    n: int
    l_kind: str | float
    l_alpha: float
    l_beta: float
    theta_star: ParameterVector

    @property
    def label(self) -> str:
        return f"m={self.m},n={self.n},L_alpha={self.l_alpha:.6g},L_beta={self.l_beta:.6g}"


def make_scenario(m: int, n: int, l_kind: str | float) -> Scenario:
    """Linear-ramp scenario; the event height uses m, the actor height n."""
    if m < 2 or n < 2:
        raise ValueError(f"need m >= 2 and n >= 2, got m={m}, n={n}")
    l_alpha = resolve_ramp_height(l_kind, m)
    l_beta = resolve_ramp_height(l_kind, n)
    alpha = np.arange(m - 1, -1, -1) * l_alpha / (m - 1)
    beta = np.arange(n - 1, 0, -1) * l_beta / (n - 1)
    return Scenario(
        m=m,
        n=n,
        l_kind=l_kind,
        l_alpha=l_alpha,
        l_beta=l_beta,
        theta_star=ParameterVector(alpha=alpha, beta=beta),
    )


def sample_graph(theta: ParameterVector, seed: int) -> BipartiteGraph:
    """Independent Bernoulli draw of every edge; deterministic per seed.

    Uses the PCG64 generator, which is platform-independent for a fixed
    64-bit seed. Replications should derive their seeds as
    base_seed + replication_index.
    """
    p = edge_probability_matrix(theta)
    rng = np.random.default_rng(seed)
    x = (rng.random(p.shape) < p).astype(np.int8)
    return BipartiteGraph(x=x)
