import math
import pathlib

import pytest

import pssc

CATALOG = pathlib.Path(__file__).resolve().parents[2] / "catalog"


def test_catalog_listing():
    names = pssc.catalog_names()
    assert "euclidean3" in names and "sphere3_bad_xi" in names
    assert len(pssc.tensor_ids()) == 12
    assert pssc.check_ids()[0] == "parallel_unit_xi"


def test_evaluate_projective_curvature():
    arr, names, variance = pssc.evaluate("riemann_tilde", [0, 0, 0], manifold="euclidean3")
    assert arr.shape == (3, 3, 3, 3)
    assert names == "lijk" and variance == "ulll"
    assert arr[1, 0, 1, 0] == pytest.approx(-9 / 16, abs=1e-15)


def test_evaluate_from_file():
    arr, _, _ = pssc.evaluate("ricci_tilde", [math.pi / 2, 1.0, 0.0], file=str(CATALOG / "cylinder_s2xr.manifold"))
    assert arr[2, 2] == pytest.approx(9 / 8, abs=1e-13)


def test_verify_reports():
    reports = pssc.verify(manifold="cylinder_s2xr", samples=20, checks=["eq17", "eq10"])
    assert [r["check_id"] for r in reports] == ["eq10", "eq17"]
    assert all(r["pass"] for r in reports)
    assert reports[0]["samples"] == 20 and reports[0]["seed"] == 42


def test_negative_control_is_skipped():
    reports = pssc.verify(manifold="sphere3_bad_xi", samples=20)
    gated = [r for r in reports if r["gate_status"] == "failed"]
    assert gated and all(r["status"] == "skipped" for r in gated)


def test_expression_helpers():
    assert pssc.eval_expr(pssc.diff("sin(t)^2", "t"), {"t": 0.3}) == pytest.approx(math.sin(0.6))
    assert pssc.simplify("(x)") == "x"


def test_errors_map_to_python():
    with pytest.raises(pssc.CatalogError):
        pssc.verify(manifold="torus")
    with pytest.raises(pssc.ParseError):
        pssc.diff("1 +", "x")
    with pytest.raises(pssc.GeometryError):
        pssc.evaluate("ricci", [0.0, 1.0, 0.0], manifold="cylinder_s2xr")
    with pytest.raises(ValueError):
        pssc.evaluate("nope", [0, 0, 0], manifold="euclidean3")
