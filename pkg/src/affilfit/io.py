"""File ingestion and result serialization.

Two input formats: a dense 0/1 matrix (events as rows, comma separated) and
an edge list of (event_label, actor_label) pairs, tab or comma separated,
with indices assigned by first appearance. Fit reports carry a human table
with the reference rounding (est[lo,hi](se), two decimals) plus a
machine-readable section at full precision.
"""

from __future__ import annotations

import json
import warnings

import numpy as np

from .errors import EmptyInputError, NonBinaryEntryError, ParseError
from .graph import BipartiteGraph, ParameterVector, degrees
from .inference import InferenceResult
from .solver import FitConfig, FitResult

_HEADER_WORDS = {"event", "actor", "event_label", "actor_label", "source", "target", "org", "member"}


def parse_input(path, format: str = "edge_list") -> BipartiteGraph:
    if format == "dense_matrix":
        return _parse_dense(path)
    if format == "edge_list":
        return _parse_edge_list(path)
    raise ValueError(f"unknown format {format!r}; expected 'edge_list' or 'dense_matrix'")


def _split(line: str) -> list[str]:
    sep = "\t" if "\t" in line else ","
    return [f.strip() for f in line.split(sep)]


def _parse_dense(path) -> BipartiteGraph:
    rows = []
    width = None
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            fields = _split(line)
            if width is None:
                width = len(fields)
            elif len(fields) != width:
                raise ParseError(f"expected {width} columns, found {len(fields)}", lineno)
            row = []
            for f in fields:
                if f not in ("0", "1"):
                    raise NonBinaryEntryError(f"entry {f!r} is not 0 or 1", lineno)
                row.append(int(f))
            rows.append(row)
    if not rows:
        raise EmptyInputError("no matrix rows found")
    return BipartiteGraph(x=np.array(rows, dtype=np.int8))


def _parse_edge_list(path) -> BipartiteGraph:
    pairs: list[tuple[str, str]] = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            fields = _split(line)
            if len(fields) != 2:
                raise ParseError(f"expected 2 fields, found {len(fields)}", lineno)
            if lineno == 1 and all(f.lower() in _HEADER_WORDS for f in fields):
                continue
            pairs.append((fields[0], fields[1]))
    if not pairs:
        raise EmptyInputError("no edges found")
    events: dict[str, int] = {}
    actors: dict[str, int] = {}
    for e, a in pairs:
        events.setdefault(e, len(events))
        actors.setdefault(a, len(actors))
    x = np.zeros((len(events), len(actors)), dtype=np.int8)
    duplicates = 0
    for e, a in pairs:
        i, j = events[e], actors[a]
        duplicates += x[i, j]
        x[i, j] = 1
    if duplicates:
        warnings.warn(f"{duplicates} duplicate edge(s) collapsed", stacklevel=2)
    return BipartiteGraph(
        x=x, event_labels=tuple(events), actor_labels=tuple(actors)
    )


def write_dense(g: BipartiteGraph, path) -> None:
    with open(path, "w") as fh:
        for row in g.x:
            fh.write(",".join(str(int(v)) for v in row) + "\n")


def write_theta(theta: ParameterVector, path) -> None:
    with open(path, "w") as fh:
        json.dump(
            {"alpha": theta.alpha.tolist(), "beta": theta.beta.tolist()}, fh, indent=1
        )
        fh.write("\n")


def read_theta(path) -> ParameterVector:
    with open(path) as fh:
        data = json.load(fh)
    return ParameterVector(alpha=np.asarray(data["alpha"]), beta=np.asarray(data["beta"]))


def _human_row(label: str, degree: int, est: float, lo, hi, se) -> str:
    if se is None:
        return f"{label}\t{degree}\t{est:.2f} (constrained)"
    return f"{label}\t{degree}\t{est:.2f}[{lo:.2f},{hi:.2f}]({se:.2f})"


def format_fit_report(
    g: BipartiteGraph,
    result: FitResult,
    inference: InferenceResult | None,
    cfg: FitConfig,
    pruning: tuple[int, int] = (0, 0),
) -> str:
    """Render a fit as text: metadata, per-side tables sorted by degree
    descending, then a full-precision machine section."""
    ds = degrees(g)
    lines = []
    lines.append("# affiliation model fit report")
    lines.append(f"events: {g.m}")
    lines.append(f"actors: {g.n}")
    lines.append(f"edges: {ds.edge_count}")
    lines.append(f"pruned_events: {pruning[0]}")
    lines.append(f"pruned_actors: {pruning[1]}")
    lines.append(f"method: {cfg.method}")
    lines.append(f"existence: {result.existence}")
    lines.append(f"converged: {result.converged}")
    lines.append(f"iterations: {result.iterations}")
    lines.append(f"final_score_norm: {result.final_score_norm:.3e}")
    if result.existence == "boundary_degree":
        lines.append(f"boundary_events: {result.boundary_events}")
        lines.append(f"boundary_actors: {result.boundary_actors}")
    if result.exists and inference is not None:
        theta = result.theta_hat
        e_labels = g.event_labels or tuple(f"event_{i+1}" for i in range(g.m))
        a_labels = g.actor_labels or tuple(f"actor_{j+1}" for j in range(g.n))
        lines.append("")
        lines.append(f"## events (level {inference.ci_level:g})")
        for i in sorted(range(g.m), key=lambda i: (-ds.d[i], e_labels[i])):
            lines.append(
                _human_row(
                    e_labels[i],
                    int(ds.d[i]),
                    theta.alpha[i],
                    inference.ci_alpha[i, 0],
                    inference.ci_alpha[i, 1],
                    inference.se_alpha[i],
                )
            )
        lines.append("")
        lines.append(f"## actors (level {inference.ci_level:g})")
        beta_full = theta.beta_full()
        for j in sorted(range(g.n), key=lambda j: (-ds.b[j], a_labels[j])):
            if j < g.n - 1:
                lines.append(
                    _human_row(
                        a_labels[j],
                        int(ds.b[j]),
                        beta_full[j],
                        inference.ci_beta[j, 0],
                        inference.ci_beta[j, 1],
                        inference.se_beta[j],
                    )
                )
            else:
                lines.append(_human_row(a_labels[j], int(ds.b[j]), 0.0, None, None, None))
        lines.append("")
        lines.append("## machine")
        lines.append("side,label,degree,estimate,se,ci_low,ci_high")
        for i in range(g.m):
            lines.append(
                f"event,{e_labels[i]},{int(ds.d[i])},{float(theta.alpha[i])!r},"
                f"{float(inference.se_alpha[i])!r},"
                f"{float(inference.ci_alpha[i, 0])!r},{float(inference.ci_alpha[i, 1])!r}"
            )
        for j in range(g.n - 1):
            lines.append(
                f"actor,{a_labels[j]},{int(ds.b[j])},{float(theta.beta[j])!r},"
                f"{float(inference.se_beta[j])!r},"
                f"{float(inference.ci_beta[j, 0])!r},{float(inference.ci_beta[j, 1])!r}"
            )
        lines.append(f"actor,{a_labels[g.n-1]},{int(ds.b[g.n-1])},0.0,,,")
    return "\n".join(lines) + "\n"
