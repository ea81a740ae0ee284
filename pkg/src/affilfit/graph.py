"""Core data types for affiliation networks.

Events are rows, actors are columns. All numeric code works on indices;
labels are optional metadata carried along for reporting.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AllPrunedError, DimensionMismatchError


@dataclass(frozen=True)
class BipartiteGraph:
    """Binary m x n affiliation matrix with optional labels on both sides."""

    x: np.ndarray
    event_labels: tuple[str, ...] | None = None
    actor_labels: tuple[str, ...] | None = None

    def __post_init__(self):
        x = np.asarray(self.x)
        if x.ndim != 2:
            raise DimensionMismatchError(f"affiliation matrix must be 2-D, got shape {x.shape}")
        if not np.isin(x, (0, 1)).all():
            raise ValueError("affiliation matrix entries must be 0 or 1")
        x = x.astype(np.int8)
        x.setflags(write=False)
        object.__setattr__(self, "x", x)
        for name, labels, size in (
            ("event_labels", self.event_labels, x.shape[0]),
            ("actor_labels", self.actor_labels, x.shape[1]),
        ):
            if labels is None:
                continue
            labels = tuple(labels)
            if len(labels) != size:
                raise DimensionMismatchError(f"{name}: expected {size} labels, got {len(labels)}")
            if len(set(labels)) != len(labels):
                raise ValueError(f"{name} must be unique")
            object.__setattr__(self, name, labels)

    @property
    def m(self) -> int:
        return self.x.shape[0]

    @property
    def n(self) -> int:
        return self.x.shape[1]


@dataclass(frozen=True)
class DegreeSequence:
    """Event degrees d (row sums) and actor degrees b (column sums)."""

    d: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.d, dtype=np.int64)
        b = np.asarray(self.b, dtype=np.int64)
        if d.ndim != 1 or b.ndim != 1:
            raise DimensionMismatchError("degree vectors must be 1-D")
        if (d < 0).any() or (b < 0).any():
            raise ValueError("degrees must be nonnegative")
        if d.sum() != b.sum():
            raise ValueError("event and actor degrees must sum to the same edge count")
        d.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "b", b)

    @property
    def edge_count(self) -> int:
        return int(self.d.sum())


@dataclass(frozen=True)
class ParameterVector:
    """Event parameters alpha (length m) and free actor parameters beta
    (length n-1); the last actor parameter is fixed to zero and never stored."""

    alpha: np.ndarray
    beta: np.ndarray

    def __post_init__(self):
        alpha = np.asarray(self.alpha, dtype=np.float64)
        beta = np.asarray(self.beta, dtype=np.float64)
        if alpha.ndim != 1 or beta.ndim != 1:
            raise DimensionMismatchError("parameter vectors must be 1-D")
        if not (np.isfinite(alpha).all() and np.isfinite(beta).all()):
            raise ValueError("parameters must be finite")
        alpha.setflags(write=False)
        beta.setflags(write=False)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    @property
    def m(self) -> int:
        return self.alpha.size

    @property
    def n(self) -> int:
        return self.beta.size + 1

    @property
    def dim(self) -> int:
        """Free dimension m + n - 1."""
        return self.alpha.size + self.beta.size

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.alpha, self.beta])

    def beta_full(self) -> np.ndarray:
        """Actor parameters including the constrained trailing zero."""
        return np.append(self.beta, 0.0)

    def norm_inf(self) -> float:
        return float(np.abs(self.as_vector()).max(initial=0.0))

    @classmethod
    def from_vector(cls, vec: np.ndarray, m: int) -> "ParameterVector":
        vec = np.asarray(vec, dtype=np.float64)
        if vec.ndim != 1 or vec.size < m:
            raise DimensionMismatchError("parameter vector too short for the given m")
        return cls(alpha=vec[:m].copy(), beta=vec[m:].copy())

    @classmethod
    def zeros(cls, m: int, n: int) -> "ParameterVector":
        return cls(alpha=np.zeros(m), beta=np.zeros(n - 1))


def degrees(g: BipartiteGraph) -> DegreeSequence:
    """Row and column sums of the affiliation matrix."""
    return DegreeSequence(d=g.x.sum(axis=1), b=g.x.sum(axis=0))


def prune_zero_degree(g: BipartiteGraph) -> tuple[BipartiteGraph, list[int], list[int]]:
    """Remove zero-degree events and actors until none remain.

    Removal cascades: dropping an actor can zero out an event row, so the
    pass repeats until stable. Returns the pruned graph plus the original
    indices of removed events and actors.
    """
    keep_e = np.ones(g.m, dtype=bool)
    keep_a = np.ones(g.n, dtype=bool)
    while True:
        sub = g.x[np.ix_(keep_e, keep_a)]
        dead_e = sub.sum(axis=1) == 0
        dead_a = sub.sum(axis=0) == 0
        if not dead_e.any() and not dead_a.any():
            break
        keep_e[np.flatnonzero(keep_e)[dead_e]] = False
        keep_a[np.flatnonzero(keep_a)[dead_a]] = False
        if not keep_e.any() or not keep_a.any():
            raise AllPrunedError("no nonzero-degree nodes remain after pruning")
    removed_e = np.flatnonzero(~keep_e)
    removed_a = np.flatnonzero(~keep_a)
    pruned = BipartiteGraph(
        x=g.x[np.ix_(keep_e, keep_a)],
        event_labels=None
        if g.event_labels is None
        else tuple(g.event_labels[i] for i in np.flatnonzero(keep_e)),
        actor_labels=None
        if g.actor_labels is None
        else tuple(g.actor_labels[j] for j in np.flatnonzero(keep_a)),
    )
    return pruned, removed_e.tolist(), removed_a.tolist()
