import numpy as np
import pytest

from affilfit.graph import BipartiteGraph, ParameterVector, degrees
from affilfit.likelihood import fisher_info, score
from affilfit.solver import (
    FitConfig,
    existence_precheck,
    fit,
    newton_step,
)
from conftest import coordinate_ascent_mle, random_interior_graph


def _interior_graph(seed):
    rng = np.random.default_rng(seed)
    while True:
        g = random_interior_graph(rng, m_range=(4, 4), n_range=(6, 6))
        if g is not None:
            return g


def test_fit_config_validation():
    with pytest.raises(ValueError):
        FitConfig(method="bogus")
    with pytest.raises(ValueError):
        FitConfig(tol_score=0.0)
    with pytest.raises(ValueError):
        FitConfig(max_iter=0)
    with pytest.raises(ValueError):
        FitConfig(init="user")  # needs theta0


def test_existence_precheck_flags_boundary_degrees():
    x = np.array(
        [
            [0, 0, 0],  # empty event
            [1, 1, 1],  # full event
            [1, 0, 1],
        ]
    )
    ds = degrees(BipartiteGraph(x=x))
    bad_e, bad_a = existence_precheck(ds, 3, 3)
    assert bad_e == [0, 1]
    # actor 1 has degree 1, actors 0 and 2 have degree 2; none at 0 or m=3
    assert bad_a == []


def test_fit_reports_boundary_degree_without_raising():
    x = np.array([[1, 1, 1], [1, 0, 1]])
    res = fit(BipartiteGraph(x=x))
    assert res.existence == "boundary_degree"
    assert not res.exists
    assert res.theta_hat is None
    assert res.boundary_events == [0]


def test_fit_reports_divergence_when_threshold_is_tiny():
    g = _interior_graph(3)
    res = fit(g, FitConfig(divergence_threshold=1e-6))
    assert res.existence == "diverged"
    assert res.theta_hat is None


def test_all_methods_reach_the_same_fixed_point():
    g = _interior_graph(5)
    results = {}
    for method in ("newton_exact", "newton_approx", "fixed_point"):
        res = fit(
            g,
            FitConfig(method=method, tol_score=1e-10, tol_step=1e-13, max_iter=5000),
        )
        assert res.exists, method
        assert res.final_score_norm <= 1e-10
        results[method] = res.theta_hat.as_vector()
    base = results["newton_exact"]
    for method, vec in results.items():
        assert np.abs(vec - base).max() < 1e-7, method


def test_fit_matches_coordinate_ascent_oracle():
    g = _interior_graph(9)
    oracle = coordinate_ascent_mle(g)
    assert oracle is not None
    res = fit(g, FitConfig(tol_score=1e-10))
    assert res.exists
    assert np.abs(res.theta_hat.as_vector() - oracle.as_vector()).max() < 1e-7


def test_fitted_degrees_match_observed():
    from affilfit.likelihood import edge_probability_matrix

    g = _interior_graph(21)
    res = fit(g, FitConfig(tol_score=1e-10))
    p = edge_probability_matrix(res.theta_hat)
    ds = degrees(g)
    assert np.allclose(p.sum(axis=1), ds.d, atol=1e-8)
    assert np.allclose(p.sum(axis=0)[:-1], ds.b[:-1], atol=1e-8)


def test_equal_degrees_give_equal_estimates():
    x = np.array(
        [
            [1, 1, 0, 0],
            [0, 0, 1, 1],  # same degree as event 0, different row
            [1, 0, 1, 0],
        ]
    )
    res = fit(BipartiteGraph(x=x), FitConfig(tol_score=1e-12))
    assert res.exists
    assert abs(res.theta_hat.alpha[0] - res.theta_hat.alpha[1]) < 1e-8
    assert abs(res.theta_hat.alpha[0] - res.theta_hat.alpha[2]) < 1e-8


def test_moment_init_converges_and_agrees_with_zeros_init():
    g = _interior_graph(33)
    a = fit(g, FitConfig(init="zeros", tol_score=1e-10))
    b = fit(g, FitConfig(init="moment", tol_score=1e-10))
    assert a.exists and b.exists
    assert np.abs(a.theta_hat.as_vector() - b.theta_hat.as_vector()).max() < 1e-7


def test_user_init_dimension_mismatch():
    g = _interior_graph(41)
    cfg = FitConfig(init="user", theta0=ParameterVector.zeros(g.m + 1, g.n))
    with pytest.raises(ValueError):
        fit(g, cfg)


def test_newton_step_reduces_score_near_optimum():
    g = _interior_graph(55)
    res = fit(g, FitConfig(tol_score=1e-6))
    theta = res.theta_hat
    for method in ("newton_exact", "newton_approx"):
        F = score(g, theta)
        stepped = newton_step(theta, F, fisher_info(theta), method)
        # exact Newton contracts quadratically this close in
        if method == "newton_exact":
            assert np.abs(score(g, stepped)).max() < np.abs(F).max()


def test_score_trace_is_recorded():
    g = _interior_graph(60)
    res = fit(g)
    assert res.score_trace[0] >= res.final_score_norm
    assert len(res.score_trace) == res.iterations + 1
