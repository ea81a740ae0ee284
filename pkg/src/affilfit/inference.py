"""Standard errors, confidence intervals, and same-side contrasts.

Single-parameter variances come from the diagonal of the plug-in
approximate inverse of the Fisher information; same-side contrast SEs use
the simpler (1/v_ii + 1/v_jj)^(1/2) form, which is identical because the
shared rank-one terms cancel: s_ii + s_jj - 2 s_ij = 1/v_ii + 1/v_jj.

The constrained trailing actor parameter is a convention, not an estimate,
so it is reported with value 0 and no standard error.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

from .approx_inverse import ApproxInverse, build_approx_inverse
from .errors import BadLevelError, DimensionMismatchError, SameIndexError
from .graph import ParameterVector
from .likelihood import FisherInfo, fisher_info

# high-precision quantiles for common levels; anything else goes to ndtri
_COMMON_Z = {
    0.90: 1.644854,
    0.95: 1.959964,
    0.99: 2.575829,
}


def normal_quantile(p: float) -> float:
    """Upper quantile helper: returns z with P(|N(0,1)| <= z) = p."""
    for level, z in _COMMON_Z.items():
        if abs(p - level) < 1e-12:
            return z
    return float(ndtri(0.5 + p / 2.0))


def plugin_covariance(theta_hat: ParameterVector) -> ApproxInverse:
    """Asymptotic covariance of the estimates: the approximate inverse of
    the Fisher information evaluated at the fitted parameters."""
    return build_approx_inverse(fisher_info(theta_hat))


def contrast_se(v_hat: FisherInfo, side: str, i: int, j: int) -> float:
    """Standard error of a same-side parameter difference."""
    if i == j:
        raise SameIndexError(f"contrast needs two distinct indices, got {i} twice")
    if side == "event":
        diag = v_hat.v_event_diag
    elif side == "actor":
        diag = v_hat.v_actor_diag
    else:
        raise ValueError(f"side must be 'event' or 'actor', got {side!r}")
    if not (0 <= i < diag.size and 0 <= j < diag.size):
        raise DimensionMismatchError(f"indices ({i}, {j}) outside the {side} range")
    return float(np.sqrt(1.0 / diag[i] + 1.0 / diag[j]))


def confidence_interval(estimate: float, se: float, level: float) -> tuple[float, float]:
    if not 0.0 < level < 1.0:
        raise BadLevelError(f"level must be in (0, 1), got {level}")
    if se <= 0:
        raise BadLevelError(f"standard error must be positive, got {se}")
    half = normal_quantile(level) * se
    return estimate - half, estimate + half


@dataclass(frozen=True)
class InferenceResult:
    se_alpha: np.ndarray
    se_beta: np.ndarray  # length n-1; the constrained parameter has no SE
    ci_level: float
    ci_alpha: np.ndarray  # (m, 2)
    ci_beta: np.ndarray  # (n-1, 2)


def infer(theta_hat: ParameterVector, level: float = 0.95) -> InferenceResult:
    """Standard errors and Wald intervals for every free parameter."""
    if not 0.0 < level < 1.0:
        raise BadLevelError(f"level must be in (0, 1), got {level}")
    S = plugin_covariance(theta_hat)
    se_alpha = np.sqrt(S.inv_event_diag + S.inv_aug_total)
    se_beta = np.sqrt(S.inv_actor_diag + S.inv_aug_total)
    z = normal_quantile(level)
    ci_alpha = np.column_stack(
        [theta_hat.alpha - z * se_alpha, theta_hat.alpha + z * se_alpha]
    )
    ci_beta = np.column_stack(
        [theta_hat.beta - z * se_beta, theta_hat.beta + z * se_beta]
    )
    return InferenceResult(
        se_alpha=se_alpha,
        se_beta=se_beta,
        ci_level=level,
        ci_alpha=ci_alpha,
        ci_beta=ci_beta,
    )
