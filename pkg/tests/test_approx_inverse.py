import numpy as np
import pytest

from affilfit.approx_inverse import (
    apply_approx_inverse,
    build_approx_inverse,
    dense_fisher,
    dense_inverse,
    inverse_approximation_error,
)
from affilfit.errors import (
    DimensionMismatchError,
    SingularAugmentedError,
    TooLargeError,
)
from affilfit.graph import ParameterVector
from affilfit.likelihood import FisherInfo, fisher_info


def _random_theta(rng, m=5, n=7, scale=0.8):
    return ParameterVector(alpha=rng.normal(0, scale, m), beta=rng.normal(0, scale, n - 1))


def test_apply_matches_dense_materialization():
    rng = np.random.default_rng(23)
    theta = _random_theta(rng)
    S = build_approx_inverse(fisher_info(theta))
    x = rng.normal(size=S.dim)
    assert np.allclose(apply_approx_inverse(S, x), S.dense() @ x, rtol=1e-13)


def test_entry_matches_dense():
    rng = np.random.default_rng(29)
    S = build_approx_inverse(fisher_info(_random_theta(rng)))
    full = S.dense()
    for i in range(S.dim):
        for j in range(S.dim):
            assert S.entry(i, j) == pytest.approx(full[i, j], rel=1e-14)
    with pytest.raises(DimensionMismatchError):
        S.entry(S.dim, 0)


def test_apply_rejects_wrong_length():
    S = build_approx_inverse(fisher_info(ParameterVector.zeros(3, 4)))
    with pytest.raises(DimensionMismatchError):
        apply_approx_inverse(S, np.zeros(S.dim + 1))


def test_dense_fisher_is_symmetric_with_expected_blocks():
    rng = np.random.default_rng(31)
    theta = _random_theta(rng)
    V = fisher_info(theta)
    full = dense_fisher(V)
    assert np.allclose(full, full.T)
    assert np.allclose(np.diag(full)[: V.m], V.v_event_diag)
    assert np.allclose(np.diag(full)[V.m :], V.v_actor_diag)
    assert np.allclose(full[: V.m, V.m :], V.v_cross)
    assert np.count_nonzero(full[: V.m, : V.m] - np.diag(V.v_event_diag)) == 0


def test_dense_inverse_is_an_inverse():
    rng = np.random.default_rng(37)
    V = fisher_info(_random_theta(rng))
    inv = dense_inverse(V)
    assert np.abs(dense_fisher(V) @ inv - np.eye(V.dim)).max() < 1e-10


def test_build_rejects_nonpositive_augmented_total():
    V = FisherInfo(
        v_event_diag=np.ones(2),
        v_actor_diag=np.ones(1),
        v_cross=np.full((2, 1), 0.1),
        v_aug_row=np.zeros(2),
        v_aug_total=0.0,
    )
    with pytest.raises(SingularAugmentedError):
        build_approx_inverse(V)


def test_dense_inverse_refuses_large_systems():
    m = 2005
    V = FisherInfo(
        v_event_diag=np.ones(m),
        v_actor_diag=np.ones(0),
        v_cross=np.zeros((m, 0)),
        v_aug_row=np.full(m, 0.25),
        v_aug_total=0.25 * m,
    )
    with pytest.raises(TooLargeError):
        dense_inverse(V)


def test_approximation_error_small_at_zero():
    V = fisher_info(ParameterVector.zeros(20, 20))
    err, ratio = inverse_approximation_error(V)
    assert err >= 0
    # at theta = 0 every off-diagonal entry is exactly 1/4, so q = Q and the
    # scaled ratio reduces to err * mn / 4
    assert ratio == pytest.approx(err * 0.25 * 20 * 20)
    assert err < 0.05
