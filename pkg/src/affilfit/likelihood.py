"""Edge probabilities, log-likelihood, score and Fisher information.

All probability work routes through a stable logistic: for z >= 0 use
1/(1+e^-z), for z < 0 use e^z/(1+e^z), and log(1+e^z) is evaluated as
max(z,0) + log1p(e^-|z|). Simulation scenarios push alpha+beta to
+-2 log n, where the naive forms overflow.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError
from .graph import BipartiteGraph, ParameterVector, degrees


def sigmoid(z):
    """Numerically stable logistic function, elementwise."""
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def log1pexp(z):
    """log(1 + e^z) without overflow."""
    z = np.asarray(z, dtype=np.float64)
    return np.maximum(z, 0.0) + np.log1p(np.exp(-np.abs(z)))


def edge_probability(alpha_i: float, beta_j: float) -> float:
    """Probability that event i and actor j are linked."""
    return float(sigmoid(np.float64(alpha_i) + np.float64(beta_j)))


def edge_probability_matrix(theta: ParameterVector) -> np.ndarray:
    """m x n matrix of edge probabilities, last column using beta_n = 0."""
    return sigmoid(theta.alpha[:, None] + theta.beta_full()[None, :])


def _check_dims(g: BipartiteGraph, theta: ParameterVector) -> None:
    if theta.m != g.m or theta.n != g.n:
        raise DimensionMismatchError(
            f"graph is {g.m}x{g.n} but parameters imply {theta.m}x{theta.n}"
        )


def log_likelihood(g: BipartiteGraph, theta: ParameterVector) -> float:
    _check_dims(g, theta)
    ds = degrees(g)
    z = theta.alpha[:, None] + theta.beta_full()[None, :]
    linear = float(theta.alpha @ ds.d + theta.beta @ ds.b[:-1])
    return linear - float(log1pexp(z).sum())


def score(g: BipartiteGraph, theta: ParameterVector) -> np.ndarray:
    """Observed minus expected degrees, length m+n-1.

    The equation for the constrained actor degree b_n is omitted; the score
    is exactly zero at the MLE.
    """
    _check_dims(g, theta)
    ds = degrees(g)
    p = edge_probability_matrix(theta)
    return np.concatenate([ds.d - p.sum(axis=1), ds.b[:-1] - p.sum(axis=0)[:-1]])


@dataclass(frozen=True)
class FisherInfo:
    """Structured Fisher information of the free parameters.

    The full (m+n-1)^2 matrix has diagonal blocks that are themselves
    diagonal plus a dense cross block of p(1-p) entries; only those pieces
    are stored, along with the entries tied to the constrained actor column
    (aug_row, aug_total) that the approximate inverse needs.
    """

    v_event_diag: np.ndarray
    v_actor_diag: np.ndarray
    v_cross: np.ndarray
    v_aug_row: np.ndarray
    v_aug_total: float

    @property
    def m(self) -> int:
        return self.v_event_diag.size

    @property
    def n(self) -> int:
        return self.v_actor_diag.size + 1

    @property
    def dim(self) -> int:
        return self.v_event_diag.size + self.v_actor_diag.size


def fisher_info(theta: ParameterVector) -> FisherInfo:
    """Fisher information at theta; depends only on theta, not on data."""
    if theta.m > theta.n:
        warnings.warn(
            f"m={theta.m} exceeds n={theta.n}; the model is intended for m <= n",
            stacklevel=2,
        )
    p = edge_probability_matrix(theta)
    w = p * (1.0 - p)
    return FisherInfo(
        v_event_diag=w.sum(axis=1),
        v_actor_diag=w.sum(axis=0)[:-1],
        v_cross=w[:, :-1],
        v_aug_row=w[:, -1],
        v_aug_total=float(w[:, -1].sum()),
    )


def cross_entry_bounds(theta: ParameterVector) -> tuple[float, float]:
    """Bounds (q, Q) such that every off-diagonal Fisher entry p(1-p)
    lies in [q, Q]: q = e^(2t)/(1+e^(2t))^2 with t = ||theta||_inf, Q = 1/4."""
    t = theta.norm_inf()
    q = float(np.exp(2.0 * t) / (1.0 + np.exp(2.0 * t)) ** 2)
    return q, 0.25
