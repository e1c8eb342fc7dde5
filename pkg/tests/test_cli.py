"""Command-line interface: schemas, exit codes, determinism."""

import json

import pytest

from ellstab.cli import main


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_fixed_points_command(capsys):
    code, doc = run(capsys, ["fixed-points", "--N", "3", "--w", "1,0,0",
                             "--v", "1,1,1"])
    assert code == 0
    assert doc["results"]["count"] == 3
    assert [[3]] in doc["results"]["labels"]
    assert {"seed", "param_point", "residuals", "timings"} <= set(doc)


def test_shuffle_check_command(capsys):
    code, doc = run(capsys, ["shuffle-check", "--N", "3", "--boxes", "1,1",
                             "--seed", "7", "--assignments", "2"])
    assert code == 0
    assert doc["residuals"]["worst"] < 1e-8


def test_vertex_degree_zero_law(capsys):
    code, doc = run(capsys, ["vertex", "--N", "3", "--w", "1,0,0",
                             "--v", "1,1,1", "--D", "2"])
    assert code == 0
    d0 = doc["results"]["coefficients"]["0,0,0"]
    env = doc["results"]["envelope_at_mu"]
    assert d0 == env


def test_rmatrix_command(capsys):
    code, doc = run(capsys, ["rmatrix", "--N", "3", "--v", "1,0,0",
                             "--w1", "1,0,0", "--w2", "1,0,0"])
    assert code == 0
    assert len(doc["results"]["matrix"]) == 2
    assert doc["residuals"]["composition"] < 1e-8
    assert doc["residuals"]["weight_blocks"] < 1e-10


def test_ybe_command(capsys):
    code, doc = run(capsys, ["ybe", "--N", "3", "--boxes", "1", "--seed", "2"])
    assert code == 0
    assert doc["residuals"]["ybe"] < 1e-7


def test_fock_command(capsys):
    code, doc = run(capsys, ["fock", "--N", "3", "--k", "0",
                             "--partition", "[2,1]"])
    assert code == 0
    assert doc["residuals"]["dual_forms"] < 1e-10


def test_bethe_command(capsys):
    code, doc = run(capsys, ["bethe", "--N", "3", "--w", "1,0,0",
                             "--v", "1,0,0"])
    assert code == 0
    assert doc["results"]["converged"]


def test_scalars_command(capsys):
    code, doc = run(capsys, ["scalars", "--N", "3", "--points", "2"])
    assert code == 0
    assert doc["residuals"]["rll_worst"] < 1e-7


def test_results_deterministic_apart_from_timings(capsys):
    argv = ["vertex", "--N", "3", "--w", "1,0,0", "--v", "1,1,0",
            "--D", "2", "--seed", "5"]
    _, doc1 = run(capsys, argv)
    _, doc2 = run(capsys, argv)
    doc1.pop("timings")
    doc2.pop("timings")
    assert json.dumps(doc1, sort_keys=True) == json.dumps(doc2, sort_keys=True)


def test_usage_error_exit_code():
    assert main(["no-such-command"]) == 2


def test_singularity_exit_code(capsys):
    # the divergent off-diagonal normalization surfaces as exit code 3
    code = main(["vertex", "--N", "3", "--w", "1,0,0", "--v", "1,1,1",
                 "--D", "1", "--lam", "1", "--mu", "2"])
    capsys.readouterr()
    assert code == 3
