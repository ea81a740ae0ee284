"""Closed-form approximate inverse of the Fisher information.

The approximation keeps only the reciprocal diagonal of V plus a rank-one
correction built from the augmented total entry, so it stores O(m+n)
numbers and applies in O(m+n) time. A dense inverse is provided purely as
a reference oracle for error measurements and tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    DimensionMismatchError,
    NumericallySingularError,
    SingularAugmentedError,
    TooLargeError,
)
from .likelihood import FisherInfo

_DENSE_GUARD = 2000


@dataclass(frozen=True)
class ApproxInverse:
    """Approximate inverse in factored form.

    The implied full matrix is diag(1/v_ii) + sign_i sign_j / v_aug_total,
    where sign is +1 on event indices and -1 on actor indices.
    """

    inv_event_diag: np.ndarray
    inv_actor_diag: np.ndarray
    inv_aug_total: float

    @property
    def m(self) -> int:
        return self.inv_event_diag.size

    @property
    def n(self) -> int:
        return self.inv_actor_diag.size + 1

    @property
    def dim(self) -> int:
        return self.inv_event_diag.size + self.inv_actor_diag.size

    def entry(self, i: int, j: int) -> float:
        """Entry (i, j) of the implied full matrix, zero-based indices."""
        m, dim = self.m, self.dim
        if not (0 <= i < dim and 0 <= j < dim):
            raise DimensionMismatchError(f"index ({i}, {j}) outside {dim}x{dim}")
        sign = 1.0 if (i < m) == (j < m) else -1.0
        val = sign * self.inv_aug_total
        if i == j:
            val += self.inv_event_diag[i] if i < m else self.inv_actor_diag[i - m]
        return val

    def dense(self) -> np.ndarray:
        """Materialize the full matrix. Oracle/test use only."""
        diag = np.concatenate([self.inv_event_diag, self.inv_actor_diag])
        sign = np.concatenate([np.ones(self.m), -np.ones(self.n - 1)])
        return np.diag(diag) + self.inv_aug_total * np.outer(sign, sign)


def build_approx_inverse(V: FisherInfo) -> ApproxInverse:
    if V.v_aug_total <= 0:
        raise SingularAugmentedError(
            f"augmented total entry {V.v_aug_total} is not positive"
        )
    return ApproxInverse(
        inv_event_diag=1.0 / V.v_event_diag,
        inv_actor_diag=1.0 / V.v_actor_diag,
        inv_aug_total=1.0 / V.v_aug_total,
    )


def apply_approx_inverse(S: ApproxInverse, x: np.ndarray) -> np.ndarray:
    """Product of the implied full matrix with x in O(m+n) time."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (S.dim,):
        raise DimensionMismatchError(f"expected vector of length {S.dim}, got {x.shape}")
    m = S.m
    x_aug = x[:m].sum() - x[m:].sum()
    out = np.empty_like(x)
    out[:m] = x[:m] * S.inv_event_diag + x_aug * S.inv_aug_total
    out[m:] = x[m:] * S.inv_actor_diag - x_aug * S.inv_aug_total
    return out


def dense_fisher(V: FisherInfo) -> np.ndarray:
    """Assemble the full (m+n-1)^2 Fisher matrix."""
    m, dim = V.m, V.dim
    full = np.zeros((dim, dim))
    full[:m, :m] = np.diag(V.v_event_diag)
    full[m:, m:] = np.diag(V.v_actor_diag)
    full[:m, m:] = V.v_cross
    full[m:, :m] = V.v_cross.T
    return full


def dense_inverse(V: FisherInfo) -> np.ndarray:
    """Exact inverse of the Fisher matrix by dense symmetric factorization.

    Reference oracle; refuses systems above the size guard and verifies the
    residual of the computed inverse.
    """
    if V.dim > _DENSE_GUARD:
        raise TooLargeError(f"dimension {V.dim} exceeds dense guard {_DENSE_GUARD}")
    full = dense_fisher(V)
    eye = np.eye(V.dim)
    try:
        cho = scipy.linalg.cho_factor(full)
        inv = scipy.linalg.cho_solve(cho, eye)
    except scipy.linalg.LinAlgError:
        # near-singular for extreme parameters; retry with a pivoted solve
        try:
            inv = scipy.linalg.solve(full, eye, assume_a="sym")
        except scipy.linalg.LinAlgError as exc:
            raise NumericallySingularError(str(exc)) from exc
    residual = np.abs(full @ inv - eye).max()
    if residual > 1e-8:
        raise NumericallySingularError(f"inverse residual {residual:.3e} exceeds 1e-8")
    return inv


def inverse_approximation_error(V: FisherInfo) -> tuple[float, float]:
    """Max-entry error of the approximate inverse and its scaled ratio.

    Returns (max_abs_err, bound_ratio) where bound_ratio = err * q^3 m n / Q^2
    with q, Q the smallest and largest off-diagonal entries of V. The ratio
    should stay bounded as m, n grow for bounded parameters.
    """
    exact = dense_inverse(V)
    approx = build_approx_inverse(V).dense()
    max_abs_err = float(np.abs(exact - approx).max())
    off = np.concatenate([V.v_cross.ravel(), V.v_aug_row])
    q = float(off.min())
    Q = float(off.max())
    bound_ratio = max_abs_err * q**3 * V.m * V.n / Q**2
    return max_abs_err, bound_ratio
