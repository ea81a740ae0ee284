import numpy as np
import pytest

from affilfit.cli import EXIT_OK, EXIT_PARSE, main
from affilfit.errors import EmptyInputError, NonBinaryEntryError, ParseError
from affilfit.graph import BipartiteGraph, ParameterVector
from affilfit.inference import infer
from affilfit.io import (
    format_fit_report,
    parse_input,
    read_theta,
    write_dense,
    write_theta,
)
from affilfit.solver import FitConfig, fit

EDGES = """\
event\tactor
e1\ta1
e1\ta2
e2\ta2
e2\ta3
e3\ta1
e3\ta3
"""


def test_dense_write_parse_roundtrip(tmp_path):
    g = BipartiteGraph(x=np.array([[0, 1, 1], [1, 0, 1]]))
    path = tmp_path / "net.csv"
    write_dense(g, path)
    back = parse_input(path, "dense_matrix")
    assert np.array_equal(back.x, g.x)


def test_dense_parse_reports_offending_line(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("0,1\n1,2\n")
    with pytest.raises(NonBinaryEntryError) as exc:
        parse_input(path, "dense_matrix")
    assert exc.value.line == 2


def test_dense_parse_rejects_ragged_rows(tmp_path):
    path = tmp_path / "ragged.csv"
    path.write_text("0,1\n1\n")
    with pytest.raises(ParseError):
        parse_input(path, "dense_matrix")


def test_edge_list_first_appearance_order(tmp_path):
    path = tmp_path / "edges.tsv"
    path.write_text(EDGES)
    g = parse_input(path, "edge_list")
    assert g.event_labels == ("e1", "e2", "e3")
    assert g.actor_labels == ("a1", "a2", "a3")
    assert g.x.tolist() == [[1, 1, 0], [0, 1, 1], [1, 0, 1]]


def test_edge_list_collapses_duplicates_with_warning(tmp_path):
    path = tmp_path / "dup.tsv"
    path.write_text("e1\ta1\ne1\ta1\ne2\ta1\n")
    with pytest.warns(UserWarning, match="duplicate"):
        g = parse_input(path, "edge_list")
    assert g.x.sum() == 2


def test_empty_inputs_raise(tmp_path):
    path = tmp_path / "empty.txt"
    path.write_text("# only a comment\n")
    with pytest.raises(EmptyInputError):
        parse_input(path, "edge_list")
    with pytest.raises(EmptyInputError):
        parse_input(path, "dense_matrix")


def test_theta_json_roundtrip(tmp_path):
    theta = ParameterVector(alpha=np.array([0.25, -1.5]), beta=np.array([0.75]))
    path = tmp_path / "theta.json"
    write_theta(theta, path)
    back = read_theta(path)
    assert np.array_equal(back.alpha, theta.alpha)
    assert np.array_equal(back.beta, theta.beta)


def _fitted_example(tmp_path):
    path = tmp_path / "edges.tsv"
    path.write_text(EDGES)
    g = parse_input(path, "edge_list")
    cfg = FitConfig()
    result = fit(g, cfg)
    return g, result, cfg


def test_fit_report_sections(tmp_path):
    g, result, cfg = _fitted_example(tmp_path)
    report = format_fit_report(g, result, infer(result.theta_hat), cfg)
    assert "existence: exists" in report
    assert "(constrained)" in report
    assert "## machine" in report
    assert "side,label,degree,estimate,se,ci_low,ci_high" in report
    # every labelled node appears in the human tables
    for label in g.event_labels + g.actor_labels:
        assert label in report


def test_fit_report_boundary_case():
    g = BipartiteGraph(x=np.array([[1, 1], [1, 0]]))
    cfg = FitConfig()
    result = fit(g, cfg)
    report = format_fit_report(g, result, None, cfg)
    assert "existence: boundary_degree" in report
    assert "boundary_events: [0]" in report


def test_cli_fit_writes_report(tmp_path):
    path = tmp_path / "edges.tsv"
    path.write_text(EDGES)
    out = tmp_path / "report.txt"
    code = main(["fit", "--input", str(path), "--out", str(out)])
    assert code == EXIT_OK
    assert "existence: exists" in out.read_text()


def test_cli_fit_parse_error_exit_code(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("0,1\n5,1\n")
    code = main(["fit", "--input", str(path), "--format", "dense_matrix"])
    assert code == EXIT_PARSE


def test_cli_sample_then_fit(tmp_path):
    net = tmp_path / "net.csv"
    theta_out = tmp_path / "theta.json"
    code = main(
        [
            "sample",
            "--m", "15",
            "--n", "20",
            "--L", "0",
            "--seed", "4",
            "--out", str(net),
            "--theta-out", str(theta_out),
        ]
    )
    assert code == EXIT_OK
    truth = read_theta(theta_out)
    assert truth.m == 15 and truth.n == 20
    report = tmp_path / "rep.txt"
    code = main(
        ["fit", "--input", str(net), "--format", "dense_matrix", "--out", str(report)]
    )
    assert code == EXIT_OK


def test_cli_coverage_csv(tmp_path):
    out = tmp_path / "cov.csv"
    code = main(
        [
            "coverage",
            "--m", "10",
            "--n", "12",
            "--pairs", "alpha:1,2;beta:1,2",
            "--reps", "10",
            "--seed", "3",
            "--out", str(out),
        ]
    )
    assert code == EXIT_OK
    lines = out.read_text().strip().splitlines()
    assert lines[0].startswith("scenario,side,i,j,coverage_pct")
    assert len(lines) == 3


def test_cli_qq_csv(tmp_path):
    out = tmp_path / "qq.csv"
    code = main(
        [
            "qq",
            "--m", "10",
            "--n", "12",
            "--pairs", "alpha:1,2",
            "--reps", "10",
            "--seed", "3",
            "--out", str(out),
        ]
    )
    assert code == EXIT_OK
    assert out.read_text().startswith("theoretical,empirical")


def test_cli_check_approx(tmp_path):
    out = tmp_path / "approx.csv"
    code = main(["check-approx", "--sizes", "5,10", "--out", str(out)])
    assert code == EXIT_OK
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "m,n,max_abs_err,err_times_mn,bound_ratio"
    assert len(lines) == 3


def test_cli_rejects_bad_pair_spec():
    with pytest.raises(SystemExit):
        main(["coverage", "--m", "5", "--n", "6", "--pairs", "gamma:1,2", "--out", "x"])


def test_cli_rejects_bad_ramp():
    with pytest.raises(SystemExit):
        main(["sample", "--m", "5", "--n", "6", "--L", "cubic", "--out", "x"])
