"""End-to-end CLI runs: exit codes, schemas, determinism, parsers."""

import json
from importlib import resources

import jsonschema
import pytest

from catacaustic.cli import main, parse_curve, parse_source
from catacaustic.errors import NonHomogeneousError, ParseError

CONIC = "x0^2+2*x1^2-x2^2"
CIRCLE = "x0^2+x1^2-x2^2"
FERMAT = "x0^3+x1^3+x2^3"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def load_schema(name):
    path = resources.files("catacaustic") / "schemas" / f"{name}.schema.json"
    return json.loads(path.read_text())


class TestCurveParser:
    def test_conic(self):
        p = parse_curve(CONIC)
        assert p.degree == 2
        assert p.terms[(0, 2, 0)] == 2

    def test_rational_coefficients(self):
        p = parse_curve("1/2*x0^2 - 3/4*x1*x2")
        assert str(p.terms[(2, 0, 0)]) == "1/2"

    def test_implicit_multiplication_sign(self):
        p = parse_curve("-x0*x1*x2")
        assert p.terms[(1, 1, 1)] == -1

    def test_non_homogeneous(self):
        with pytest.raises(NonHomogeneousError):
            parse_curve("x0^2 + x1")

    def test_garbage_position(self):
        with pytest.raises(ParseError) as exc:
            parse_curve("x0^2 + x3")
        assert "position" in str(exc.value)

    def test_empty(self):
        with pytest.raises(ParseError):
            parse_curve("   ")

    def test_zero_denominator(self):
        with pytest.raises(ParseError):
            parse_curve("1/0*x0^2")

    def test_source_parsing(self):
        s = parse_source("2,1,1")
        assert list(s.coords) == [2, 1, 1]
        with pytest.raises(ParseError):
            parse_source("0,0,0")
        with pytest.raises(ParseError):
            parse_source("1,2")


class TestExitCodes:
    def test_success(self, capsys):
        code, out, err = run(capsys, "class", "--curve", CONIC, "--source", "2,1,1")
        assert code == 0
        assert err == ""

    def test_parse_error(self, capsys):
        code, out, err = run(capsys, "class", "--curve", "x0^2+x1", "--source", "2,1,1")
        assert code == 2
        assert out == ""
        assert "parse error" in err

    def test_degenerate(self, capsys):
        # a line mirror has no dual curve
        code, out, err = run(capsys, "normals", "--curve", "x0+2*x1-x2")
        assert code == 3
        assert "degenerate" in err

    def test_bad_flag(self, capsys):
        code, out, err = run(capsys, "class", "--curve", CONIC)
        assert code == 2

    def test_bad_seed_rejected(self, capsys):
        code, out, err = run(
            capsys, "class", "--curve", CONIC, "--source", "2,1,1", "--seed", "-1"
        )
        assert code == 2


class TestReports:
    def test_class_report(self, capsys):
        rep = run_json(capsys, "class", "--curve", CONIC, "--source", "2,1,1")
        assert rep["command"] == "class"
        assert rep["result"]["degree_gamma"] == 6
        assert rep["result"]["base_point_count"] == 0
        assert rep["config"]["curve"] == CONIC
        jsonschema.validate(rep, load_schema("class"))

    def test_birational_report(self, capsys):
        rep = run_json(capsys, "birational", "--curve", CONIC, "--source", "2,1,1")
        assert rep["result"]["verdict"] == "birational"
        assert rep["result"]["generic_fiber"] == 1
        jsonschema.validate(rep, load_schema("birational"))

    def test_birational_infinite_fiber_encoding(self, capsys):
        rep = run_json(capsys, "birational", "--curve", CIRCLE, "--source", "0,0,1")
        assert rep["result"]["verdict"] == "non-birational"
        assert rep["result"]["generic_fiber"] == 2
        jsonschema.validate(rep, load_schema("birational"))

    def test_project_report(self, capsys, tmp_path):
        path = tmp_path / "veronese.json"
        path.write_text(json.dumps(
            {"b00": "1", "b01": "t", "b02": "t^2", "b11": "t^2", "b12": "t^3", "b22": "t^4"}
        ))
        rep = run_json(capsys, "project", "--matrix-curve", str(path))
        assert rep["result"]["verdict"] == "birational"
        assert rep["result"]["s_prime"] is None
        jsonschema.validate(rep, load_schema("project"))

    def test_project_exceptional(self, capsys, tmp_path):
        path = tmp_path / "exceptional.json"
        path.write_text(json.dumps({"b00": "1", "b01": "t", "b11": "t^3"}))
        rep = run_json(capsys, "project", "--matrix-curve", str(path))
        assert rep["result"]["verdict"] == "exceptional"
        assert rep["result"]["s_prime"] is not None
        jsonschema.validate(rep, load_schema("project"))

    def test_pencil_report(self, capsys):
        rep = run_json(
            capsys, "pencil",
            "--b0", "1,0,0,1,0,1",
            "--b1", "1,0,0,1,0,0",
        )
        assert rep["result"]["kind"] == "not_in_delta"
        assert rep["result"]["det_form"] is not None
        jsonschema.validate(rep, load_schema("pencil"))

    def test_pencil_in_delta(self, capsys):
        # both generators kill (0,0,1)
        rep = run_json(
            capsys, "pencil",
            "--b0", "1,0,0,0,0,0",
            "--b1", "0,1,0,0,0,0",
        )
        assert rep["result"]["kind"] == "in_delta"
        assert rep["result"]["delta_s"] is not None
        jsonschema.validate(rep, load_schema("pencil"))

    def test_envelope_report(self, capsys):
        rep = run_json(
            capsys, "envelope", "--curve", CONIC, "--source", "2,1,1", "--samples", "12"
        )
        assert rep["result"]["outcome"] == "envelope"
        assert len(rep["result"]["points"]) > 0
        jsonschema.validate(rep, load_schema("envelope"))

    def test_envelope_point_caustic(self, capsys):
        rep = run_json(capsys, "envelope", "--curve", CIRCLE, "--source", "0,0,1")
        assert rep["result"]["outcome"] == "point caustic"
        assert rep["result"]["point"] is not None
        jsonschema.validate(rep, load_schema("envelope"))

    def test_implicit_report(self, capsys):
        rep = run_json(capsys, "implicit", "--curve", CONIC, "--source", "2,1,1")
        assert rep["result"]["degree"] == 6
        assert rep["result"]["coefficients"]
        jsonschema.validate(rep, load_schema("implicit"))

    def test_normals_report(self, capsys):
        rep = run_json(capsys, "normals", "--curve", CIRCLE)
        r = rep["result"]
        assert r["feet_through_general_point"] == 2
        assert r["distinct_normal_lines"] == 1
        assert r["feet_per_normal_line"] == 2
        assert r["dual_degree"] == 2
        assert r["degree_D"] == 4
        jsonschema.validate(rep, load_schema("normals"))

    def test_config_echo_round_trips_flags(self, capsys):
        rep = run_json(
            capsys, "class", "--curve", CONIC, "--source", "2,1,1",
            "--seed", "42", "--tol", "1e-9",
        )
        cfg = rep["config"]
        assert cfg["seed"] == 42
        assert cfg["tol"] == 1e-9
        assert cfg["format"] == "json"


class TestDeterminism:
    def test_byte_identical_json(self, capsys):
        argv = ("birational", "--curve", CONIC, "--source", "2,1,1", "--seed", "7")
        _, out1, _ = run(capsys, *argv)
        _, out2, _ = run(capsys, *argv)
        assert out1 == out2

    def test_byte_identical_svg(self, capsys):
        argv = ("render", "--curve", CIRCLE, "--source", "2,0,1", "--rays", "6")
        _, out1, _ = run(capsys, *argv)
        _, out2, _ = run(capsys, *argv)
        assert out1 == out2

    def test_out_flag_writes_file(self, capsys, tmp_path):
        target = tmp_path / "report.json"
        code, out, err = run(
            capsys, "normals", "--curve", CIRCLE, "--out", str(target)
        )
        assert code == 0
        assert out == ""
        rep = json.loads(target.read_text())
        assert rep["command"] == "normals"


class TestTextFormat:
    def test_text_is_flat_key_values(self, capsys):
        code, out, err = run(
            capsys, "normals", "--curve", CIRCLE, "--format", "text"
        )
        assert code == 0
        lines = [l for l in out.splitlines() if l]
        assert any(l.startswith("result.degree_D") for l in lines)
        for l in lines:
            assert ": " in l


class TestRender:
    def test_svg_structure(self, capsys):
        code, out, err = run(
            capsys, "render", "--curve", CIRCLE, "--source", "2,0,1", "--rays", "8"
        )
        assert code == 0
        assert out.startswith("<?xml")
        assert "<svg" in out and 'id="curve"' in out
        assert 'id="incident"' in out and 'id="reflected"' in out

    def test_no_real_points_is_degenerate(self, capsys):
        # empty viewport: circle has no real points inside [5, 6] x [5, 6]
        code, out, err = run(
            capsys, "render", "--curve", CIRCLE, "--source", "2,0,1",
            "--viewport", "5,6,5,6",
        )
        assert code == 3
        assert "degenerate" in err

    def test_render_to_file(self, capsys, tmp_path):
        target = tmp_path / "scene.svg"
        code, out, err = run(
            capsys, "render", "--curve", CIRCLE, "--source", "2,0,1",
            "--out", str(target),
        )
        assert code == 0
        assert target.read_text().startswith("<?xml")
