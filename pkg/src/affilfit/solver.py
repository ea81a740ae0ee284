"""Maximum likelihood fitting by Newton-type iteration.

Three methods share one outer loop:

* ``newton_exact``   -- solve the dense Newton system each step
* ``newton_approx``  -- replace the inverse Hessian by the closed-form
                        approximate inverse (O(m+n) per step beyond the
                        O(mn) score evaluation); the default
* ``fixed_point``    -- iterate the degree-matching map

All methods declare convergence on the max-norm of the score, so they share
the same fixed point. Non-existence of the MLE is a result, not an
exception: it is reported through ``FitResult.existence``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .approx_inverse import apply_approx_inverse, build_approx_inverse, dense_fisher
from .errors import DimensionMismatchError
from .graph import BipartiteGraph, DegreeSequence, ParameterVector, degrees
from .likelihood import FisherInfo, fisher_info, log_likelihood, score

METHODS = ("newton_exact", "newton_approx", "fixed_point")
MAX_HALVINGS = 30


@dataclass(frozen=True)
class FitConfig:
    method: str = "newton_approx"
    tol_score: float = 1e-8
    tol_step: float = 1e-10
    max_iter: int = 200
    divergence_threshold: float = 30.0
    init: str = "zeros"  # zeros | moment | user
    theta0: ParameterVector | None = None

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; expected one of {METHODS}")
        if self.tol_score <= 0 or self.tol_step <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if self.init not in ("zeros", "moment", "user"):
            raise ValueError(f"unknown init {self.init!r}")
        if self.init == "user" and self.theta0 is None:
            raise ValueError("init='user' requires theta0")


@dataclass(frozen=True)
class FitResult:
    theta_hat: ParameterVector | None
    converged: bool
    existence: str  # exists | boundary_degree | diverged | max_iter
    iterations: int
    final_score_norm: float
    score_trace: list[float] = field(default_factory=list)
    boundary_events: list[int] = field(default_factory=list)
    boundary_actors: list[int] = field(default_factory=list)

    @property
    def exists(self) -> bool:
        return self.existence == "exists"


def existence_precheck(ds: DegreeSequence, m: int, n: int) -> tuple[list[int], list[int]]:
    """Indices of events with degree 0 or n and free actors with degree 0 or m.

    Any such degree forces a fitted probability of 0 or 1, so the MLE cannot
    exist. Empty lists are necessary but not sufficient for existence;
    non-existence beyond these boundary cases surfaces as divergence.
    """
    bad_events = np.flatnonzero((ds.d == 0) | (ds.d == n)).tolist()
    bad_actors = np.flatnonzero((ds.b[:-1] == 0) | (ds.b[:-1] == m)).tolist()
    return bad_events, bad_actors


def newton_step(
    theta: ParameterVector, F: np.ndarray, V: FisherInfo, method: str = "newton_exact"
) -> ParameterVector:
    """One full Newton update theta + V^-1 F (the Jacobian of the score is -V)."""
    delta = _solve_direction(F, V, method)
    return ParameterVector.from_vector(theta.as_vector() + delta, theta.m)


def _solve_direction(F: np.ndarray, V: FisherInfo, method: str) -> np.ndarray:
    if F.shape != (V.dim,):
        raise DimensionMismatchError(f"score has shape {F.shape}, expected ({V.dim},)")
    if method == "newton_approx":
        return _deflated_approx_direction(F, V)
    cho = scipy.linalg.cho_factor(dense_fisher(V))
    return scipy.linalg.cho_solve(cho, F)


def _deflated_approx_direction(F: np.ndarray, V: FisherInfo) -> np.ndarray:
    """Approximate-inverse direction with its one spurious mode removed.

    The product of the approximate inverse with V has an exact eigenvalue 2
    on u = (1,...,1, 0,...,0) (ones on the event block), with exact left
    eigenvector V u = (v_event_diag, v_actor_diag); all other eigenvalues
    cluster at 1. Iterating the raw direction therefore cycles in the
    u-mode instead of converging. Halving the u-component, measured against
    the left eigenvector, deflates that eigenvalue to exactly 1 and leaves
    the rest of the spectrum untouched, all in O(m+n) time.
    """
    d = apply_approx_inverse(build_approx_inverse(V), F)
    w = np.concatenate([V.v_event_diag, V.v_actor_diag])
    coeff = 0.5 * float(w @ d) / float(V.v_event_diag.sum())
    d[: V.m] -= coeff
    return d


def _moment_init(ds: DegreeSequence, m: int, n: int) -> ParameterVector:
    # clip keeps the logit finite for degrees at the boundary
    dr = np.clip(ds.d / n, 1.0 / (2 * n), 1.0 - 1.0 / (2 * n))
    br = np.clip(ds.b / m, 1.0 / (2 * m), 1.0 - 1.0 / (2 * m))
    alpha = np.log(dr / (1.0 - dr))
    beta = np.log(br / (1.0 - br))
    shift = beta[-1]  # enforce the trailing-zero convention
    return ParameterVector(alpha=alpha + shift, beta=beta[:-1] - shift)


def _fixed_point_update(theta: ParameterVector, ds: DegreeSequence) -> ParameterVector:
    """Degree-matching map: each parameter is re-solved in log scale against
    the current opposite-side parameters."""
    bf = theta.beta_full()
    # sum_j e^{beta_j} / (1 + e^{alpha_i + beta_j}) = sum_j 1/(e^{-beta_j} + e^{alpha_i})
    denom_a = (1.0 / (np.exp(-bf)[None, :] + np.exp(theta.alpha)[:, None])).sum(axis=1)
    alpha_new = np.log(ds.d) - np.log(denom_a)
    denom_b = (1.0 / (np.exp(-theta.alpha)[:, None] + np.exp(bf)[None, :])).sum(axis=0)
    beta_new = np.log(ds.b[:-1]) - np.log(denom_b[:-1])
    return ParameterVector(alpha=alpha_new, beta=beta_new)


def fit(g: BipartiteGraph, cfg: FitConfig | None = None) -> FitResult:
    """Maximize the likelihood; the MLE is unique whenever it exists.

    Newton steps are safeguarded by step-halving: a full step that lowers
    the log-likelihood is halved up to MAX_HALVINGS times, which leaves the
    fixed point unchanged but makes the iteration robust far from it.
    """
    if g.m < 1 or g.n < 2:
        raise DimensionMismatchError(f"need m >= 1 and n >= 2, got {g.m}x{g.n}")
    cfg = cfg or FitConfig()
    ds = degrees(g)
    bad_events, bad_actors = existence_precheck(ds, g.m, g.n)
    if bad_events or bad_actors:
        return FitResult(
            theta_hat=None,
            converged=False,
            existence="boundary_degree",
            iterations=0,
            final_score_norm=float("inf"),
            boundary_events=bad_events,
            boundary_actors=bad_actors,
        )

    if cfg.init == "user":
        theta = cfg.theta0
        if theta.m != g.m or theta.n != g.n:
            raise DimensionMismatchError("theta0 dimensions do not match the graph")
    elif cfg.init == "moment":
        theta = _moment_init(ds, g.m, g.n)
    else:
        theta = ParameterVector.zeros(g.m, g.n)

    trace: list[float] = []
    F = score(g, theta)
    norm = float(np.abs(F).max())
    trace.append(norm)
    existence = "max_iter"
    iterations = 0
    for iterations in range(1, cfg.max_iter + 1):
        if norm <= cfg.tol_score:
            existence = "exists"
            iterations -= 1
            break
        try:
            if cfg.method == "fixed_point":
                theta_new = _fixed_point_update(theta, ds)
            else:
                delta = _solve_direction(F, V=fisher_info(theta), method=cfg.method)
                theta_new = _halved_step(g, theta, delta)
        except (ValueError, scipy.linalg.LinAlgError):
            # overflow in the update or a numerically singular Newton system:
            # the iterates have left the region where the MLE could exist
            return FitResult(
                theta_hat=None,
                converged=False,
                existence="diverged",
                iterations=iterations,
                final_score_norm=norm,
                score_trace=trace,
            )
        step = float(
            np.abs(theta_new.as_vector() - theta.as_vector()).max(initial=0.0)
        )
        theta = theta_new
        if theta.norm_inf() > cfg.divergence_threshold:
            return FitResult(
                theta_hat=None,
                converged=False,
                existence="diverged",
                iterations=iterations,
                final_score_norm=norm,
                score_trace=trace,
            )
        F = score(g, theta)
        norm = float(np.abs(F).max())
        trace.append(norm)
        if step <= cfg.tol_step:
            existence = "exists" if norm <= cfg.tol_score else "max_iter"
            break
    else:
        existence = "exists" if norm <= cfg.tol_score else "max_iter"

    converged = existence == "exists"
    return FitResult(
        theta_hat=theta if converged else None,
        converged=converged,
        existence=existence,
        iterations=iterations,
        final_score_norm=norm,
        score_trace=trace,
    )


def _halved_step(g: BipartiteGraph, theta: ParameterVector, delta: np.ndarray) -> ParameterVector:
    base = log_likelihood(g, theta)
    # comparisons below the float resolution of the total log-likelihood are
    # noise; the slack accepts those steps instead of halving on noise
    slack = 1e-12 * (1.0 + abs(base))
    vec = theta.as_vector()
    scale = 1.0
    for _ in range(MAX_HALVINGS):
        candidate = ParameterVector.from_vector(vec + scale * delta, theta.m)
        if log_likelihood(g, candidate) >= base - slack:
            return candidate
        scale *= 0.5
    # Exhaustion happens only near the optimum, where per-step likelihood
    # gains fall below the float resolution of the total log-likelihood.
    # The approximate-inverse direction can overshoot there (the iteration
    # matrix has modes up to 2), so pick the damping that most reduces the
    # score norm instead of creeping along with a 2^-30 step.
    best = None
    best_norm = np.inf
    for scale in (1.0, 0.5, 0.25):
        candidate = ParameterVector.from_vector(vec + scale * delta, theta.m)
        norm = float(np.abs(score(g, candidate)).max())
        if norm < best_norm:
            best, best_norm = candidate, norm
    return best
