"""Monte-Carlo studies: coverage tables, QQ exports, consistency trends.

Replications are independent with per-replication seeds (base + index), so
they may run across processes; results are always reduced in replication
order, making every report deterministic for a fixed seed regardless of the
worker count.

Coverage is tallied only over replications where the MLE exists;
non-existence (boundary degrees or divergence) is counted separately, never
raised. The reported interval length is the half-width z * SE, the quantity
the reference tabulations use.
"""

from __future__ import annotations

import csv
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial

import numpy as np

from .inference import contrast_se, normal_quantile
from .likelihood import fisher_info
from .sampler import Scenario, sample_graph
from .solver import FitConfig, FitResult, fit

# (side, i, j) with side in {event, actor}; indices are zero-based
PairSpec = tuple[str, int, int]
# ("event_contrast"|"actor_contrast", i, j) or ("event_single"|"actor_single", i)
TargetSpec = tuple


@dataclass(frozen=True)
class CoverageReport:
    scenario: str
    pairs: list[PairSpec]
    coverage_pct: list[float | None]
    mean_ci_length: list[float | None]
    replications_used: int
    nonexistence_pct: float
    total_replications: int
    ci_level: float = 0.95


@dataclass(frozen=True)
class QQExport:
    kind: str
    indices: tuple[int, ...]
    empirical: np.ndarray  # sorted standardized values
    theoretical: np.ndarray  # normal quantiles at plotting positions


def _true_contrast(scenario: Scenario, pair: PairSpec) -> float:
    side, i, j = pair
    vec = scenario.theta_star.alpha if side == "event" else scenario.theta_star.beta
    return float(vec[i] - vec[j])


def _fit_replication(rep: int, scenario: Scenario, base_seed: int, cfg: FitConfig) -> FitResult:
    g = sample_graph(scenario.theta_star, base_seed + rep)
    return fit(g, cfg)


def _map_replications(worker, reps: int, threads: int):
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            yield from pool.map(worker, range(reps), chunksize=max(1, reps // (8 * threads)))
    else:
        yield from map(worker, range(reps))


def _coverage_replication(
    rep: int, scenario: Scenario, pairs: list[PairSpec], base_seed: int, cfg: FitConfig, z: float
) -> list[tuple[bool, float]] | None:
    res = _fit_replication(rep, scenario, base_seed, cfg)
    if not res.exists:
        return None
    v_hat = fisher_info(res.theta_hat)
    out = []
    for pair in pairs:
        side, i, j = pair
        est_vec = res.theta_hat.alpha if side == "event" else res.theta_hat.beta
        est = float(est_vec[i] - est_vec[j])
        se = contrast_se(v_hat, side, i, j)
        covered = abs(est - _true_contrast(scenario, pair)) <= z * se
        out.append((covered, z * se))
    return out


def run_coverage(
    scenario: Scenario,
    pairs: list[PairSpec],
    reps: int,
    seed: int,
    cfg: FitConfig | None = None,
    level: float = 0.95,
    threads: int = 1,
) -> CoverageReport:
    """Coverage of the nominal-level interval for each parameter contrast."""
    cfg = cfg or FitConfig()
    z = normal_quantile(level)
    worker = partial(
        _coverage_replication, scenario=scenario, pairs=pairs, base_seed=seed, cfg=cfg, z=z
    )
    hits = np.zeros(len(pairs), dtype=np.int64)
    lengths = np.zeros(len(pairs))
    used = 0
    for rec in _map_replications(worker, reps, threads):
        if rec is None:
            continue
        used += 1
        for k, (covered, length) in enumerate(rec):
            hits[k] += covered
            lengths[k] += length
    coverage = [100.0 * hits[k] / used if used else None for k in range(len(pairs))]
    mean_len = [lengths[k] / used if used else None for k in range(len(pairs))]
    return CoverageReport(
        scenario=scenario.label,
        pairs=list(pairs),
        coverage_pct=coverage,
        mean_ci_length=mean_len,
        replications_used=used,
        nonexistence_pct=100.0 * (reps - used) / reps,
        total_replications=reps,
        ci_level=level,
    )


def _standardized(res: FitResult, scenario: Scenario, target: TargetSpec) -> float:
    v_hat = fisher_info(res.theta_hat)
    kind = target[0]
    if kind in ("event_contrast", "actor_contrast"):
        side = "event" if kind.startswith("event") else "actor"
        _, i, j = target
        pair: PairSpec = (side, i, j)
        est_vec = res.theta_hat.alpha if side == "event" else res.theta_hat.beta
        est = float(est_vec[i] - est_vec[j])
        return (est - _true_contrast(scenario, pair)) / contrast_se(v_hat, side, i, j)
    if kind in ("event_single", "actor_single"):
        # single-coordinate variance includes the augmented rank-one term
        _, i = target
        if kind == "event_single":
            err = float(res.theta_hat.alpha[i] - scenario.theta_star.alpha[i])
            var = 1.0 / v_hat.v_event_diag[i] + 1.0 / v_hat.v_aug_total
        else:
            err = float(res.theta_hat.beta[i] - scenario.theta_star.beta[i])
            var = 1.0 / v_hat.v_actor_diag[i] + 1.0 / v_hat.v_aug_total
        return err / float(np.sqrt(var))
    raise ValueError(f"unknown target kind {kind!r}")


def _qq_replication(
    rep: int, scenario: Scenario, targets: list[TargetSpec], base_seed: int, cfg: FitConfig
) -> list[float] | None:
    res = _fit_replication(rep, scenario, base_seed, cfg)
    if not res.exists:
        return None
    return [_standardized(res, scenario, t) for t in targets]


def run_qq(
    scenario: Scenario,
    targets: list[TargetSpec],
    reps: int,
    seed: int,
    cfg: FitConfig | None = None,
    threads: int = 1,
) -> list[QQExport]:
    """Standardized statistics over existing-MLE replications, paired with
    standard normal quantiles at plotting positions (k - 0.5) / R."""
    from scipy.special import ndtri

    cfg = cfg or FitConfig()
    worker = partial(
        _qq_replication, scenario=scenario, targets=targets, base_seed=seed, cfg=cfg
    )
    samples: list[list[float]] = [[] for _ in targets]
    for rec in _map_replications(worker, reps, threads):
        if rec is None:
            continue
        for k, val in enumerate(rec):
            samples[k].append(val)
    exports = []
    for target, vals in zip(targets, samples):
        emp = np.sort(np.asarray(vals))
        r = emp.size
        theo = ndtri((np.arange(1, r + 1) - 0.5) / r) if r else np.empty(0)
        exports.append(
            QQExport(kind=target[0], indices=tuple(target[1:]), empirical=emp, theoretical=theo)
        )
    return exports


@dataclass(frozen=True)
class ConsistencyRow:
    scenario: str
    n: int
    mean_max_error: float
    p90_max_error: float
    replications_used: int
    nonexistence_pct: float


def _consistency_replication(
    rep: int, scenario: Scenario, base_seed: int, cfg: FitConfig
) -> float | None:
    res = _fit_replication(rep, scenario, base_seed, cfg)
    if not res.exists:
        return None
    err = res.theta_hat.as_vector() - scenario.theta_star.as_vector()
    return float(np.abs(err).max())


def run_consistency(
    scenarios: list[Scenario],
    reps: int,
    seed: int,
    cfg: FitConfig | None = None,
    threads: int = 1,
) -> list[ConsistencyRow]:
    """Mean and 90th percentile of the max-norm estimation error per scenario."""
    cfg = cfg or FitConfig()
    rows = []
    for scenario in scenarios:
        worker = partial(_consistency_replication, scenario=scenario, base_seed=seed, cfg=cfg)
        errs = [e for e in _map_replications(worker, reps, threads) if e is not None]
        arr = np.asarray(errs)
        rows.append(
            ConsistencyRow(
                scenario=scenario.label,
                n=scenario.n,
                mean_max_error=float(arr.mean()) if arr.size else float("nan"),
                p90_max_error=float(np.percentile(arr, 90)) if arr.size else float("nan"),
                replications_used=arr.size,
                nonexistence_pct=100.0 * (reps - arr.size) / reps,
            )
        )
    return rows


def coverage_to_csv(report: CoverageReport, path) -> None:
    """One row per pair, plus the shared non-existence tally."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            [
                "scenario",
                "side",
                "i",
                "j",
                "coverage_pct",
                "mean_ci_length",
                "replications_used",
                "nonexistence_pct",
                "total_replications",
            ]
        )
        for pair, cov, length in zip(report.pairs, report.coverage_pct, report.mean_ci_length):
            writer.writerow(
                [
                    report.scenario,
                    pair[0],
                    pair[1],
                    pair[2],
                    "" if cov is None else f"{cov:.10g}",
                    "" if length is None else f"{length:.10g}",
                    report.replications_used,
                    f"{report.nonexistence_pct:.10g}",
                    report.total_replications,
                ]
            )


def qq_to_csv(export: QQExport, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("theoretical,empirical\n")
        for t, e in zip(export.theoretical, export.empirical):
            fh.write(f"{float(t)!r},{float(e)!r}\n")
