import json

import numpy as np
import pytest

from twinsurf.cli import run
from twinsurf.fields import GridDomain
from twinsurf.gfield import read_gfield, read_heightmap, write_gfield


@pytest.fixture
def catenoid_file(tmp_path):
    path = str(tmp_path / "cat.gf")
    code = run(
        [
            "catalog", "sample", "--name", "catenoid",
            "--domain", "1.5,-0.75,3,0.75", "--grid", "65,33", "--out", path,
        ]
    )
    assert code == 0
    return path


def _json_out(capsys):
    return json.loads(capsys.readouterr().out)


def test_catalog_list(capsys):
    assert run(["catalog", "list"]) == 0
    names = capsys.readouterr().out.split()
    assert "catenoid" in names and "scherk" in names


def test_catalog_sample_writes_gfield(catenoid_file):
    dom, comps = read_gfield(catenoid_file)
    assert (dom.nx, dom.ny) == (65, 33)
    assert len(comps) == 1


def test_residual_report(catenoid_file, capsys):
    assert run(["residual", "--system", "minimal", "--in", catenoid_file]) == 0
    out = _json_out(capsys)
    assert out["op"] == "minimal_residual"
    assert out["max_abs"] <= 50 * (1.5 / 64) ** 2


def test_twin_forward_roundtrip(catenoid_file, tmp_path, capsys):
    twin_path = str(tmp_path / "twin.gf")
    code = run(["twin", "forward", "--in", catenoid_file, "--out", twin_path])
    assert code == 0
    report = _json_out(capsys)
    assert report["c2_residual"] <= 5e-3
    g = read_heightmap(twin_path)
    assert g.n == 1


def test_twin_forward_rejects_non_closed(tmp_path, capsys):
    dom = GridDomain.from_bounds(-0.5, -0.5, 0.5, 0.5, 33, 33)
    X, _ = dom.meshgrid()
    path = str(tmp_path / "cube.gf")
    write_gfield(path, dom, [X**3])
    assert run(["twin", "forward", "--in", path]) == 2
    assert "NOT_CLOSED" in capsys.readouterr().err


def test_sl_lift_and_detect_angle(catenoid_file, tmp_path, capsys):
    lift_path = str(tmp_path / "lift.gf")
    assert run(["sl", "lift", "--in", catenoid_file, "--out", lift_path]) == 0
    report = _json_out(capsys)
    # file inputs carry no gradient fields, so one-sided boundary stencils
    # dominate this diagnostic; the interior identity is tested in test_slag
    assert report["hessian_det_residual"] <= 0.1
    _, comps = read_gfield(lift_path)
    assert len(comps) == 3  # h, M, N
    h_path = str(tmp_path / "h.gf")
    dom, comps = read_gfield(lift_path)
    write_gfield(h_path, dom, comps[:1])
    assert run(["sl", "detect-angle", "--in", h_path, "--mode", "euclidean"]) == 0
    out = _json_out(capsys)
    assert out["theta"] == pytest.approx(np.pi / 2, abs=1e-2)


def test_sl_rotate_rejects_bad_params(catenoid_file, capsys):
    code = run(
        [
            "sl", "rotate", "--in", catenoid_file,
            "--lambda1", "1", "--lambda2", "1", "--epsilon", "1",
        ]
    )
    assert code == 2
    assert "PARAM_CONSTRAINT_VIOLATION" in capsys.readouterr().err


def test_gauss_quadric(catenoid_file, capsys):
    assert run(["gauss", "quadric", "--in", catenoid_file]) == 0
    out = _json_out(capsys)
    assert out["quadric_residual"] <= 1e-10


def test_solve_minimal_from_boundary(catenoid_file, tmp_path, capsys):
    out_path = str(tmp_path / "solved.gf")
    code = run(
        ["solve", "minimal", "--boundary", catenoid_file, "--out", out_path]
    )
    assert code == 0
    solved = read_heightmap(out_path)
    target = read_heightmap(catenoid_file)
    err = np.abs(
        (solved.components[0] - target.components[0])[1:-1, 1:-1]
    ).max()
    assert err <= 2e-3


def test_verify_all_passes_on_scherk(capsys):
    code = run(["verify-all", "--name", "scherk", "--grid", "33,33"])
    assert code == 0
    report = _json_out(capsys)
    assert report["pass"] is True
    names = {c["name"] for c in report["checks"]}
    assert {"quadric_residual", "minimal_residual", "twin_c2"} <= names
    for c in report["checks"]:
        assert set(c) == {"name", "value", "tol", "pass"}


def test_verify_all_fails_with_exit_3(tmp_path, capsys):
    code = run(
        ["verify-all", "--name", "scherk", "--grid", "33,33", "--tol", "1e-14"]
    )
    assert code == 3
    report = _json_out(capsys)
    assert report["pass"] is False


def test_missing_file_is_validation_error(capsys):
    assert run(["residual", "--system", "minimal", "--in", "/no/such.gf"]) == 1
    assert "VALIDATION" in capsys.readouterr().err


def test_bad_arguments_exit_1():
    assert run(["frobnicate"]) == 1
    assert run(["catalog", "sample", "--name", "catenoid", "--threads", "0"]) == 1


def test_unicode_minus_accepted_in_domain(tmp_path):
    path = str(tmp_path / "cat.gf")
    code = run(
        [
            "catalog", "sample", "--name", "catenoid",
            "--domain", "1.5,−0.75,3,0.75", "--grid", "65,33", "--out", path,
        ]
    )
    assert code == 0
