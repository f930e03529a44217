"""Tests for the CLI module."""

import json
import os
import subprocess
import sys

import pytest
from typer.testing import CliRunner

from jacres.cli import app, run

runner = CliRunner(mix_stderr=False)

SWEEP_COMMANDS = ["dim", "jactest", "socle", "residue", "pairing", "samuel", "loja", "hessian", "relative"]


def _invoke(*args):
    return runner.invoke(app, [str(a) for a in args])


def _json(*args):
    result = _invoke(*args, "--json")
    assert result.exit_code == 0, result.stderr
    return json.loads(result.stdout)


class TestVersionCommand:
    def test_version_output(self):
        result = _invoke("version")
        assert result.exit_code == 0
        assert "jacres version 0.1.0" in result.stdout


class TestHeadlines:
    """Text mode prints the headline alone."""

    def test_dim(self, corpus_dir):
        result = _invoke("dim", corpus_dir / "x2y3.sys")
        assert result.exit_code == 0
        assert result.stdout.strip() == "6"

    def test_dim_infinite(self, corpus_dir):
        assert _invoke("dim", corpus_dir / "x_xy.sys").stdout.strip() == "inf"

    @pytest.mark.parametrize("poly, expected", [("x*y^2", "false"), ("x^2*y + y^3", "true")])
    def test_member(self, corpus_dir, poly, expected):
        result = _invoke("member", corpus_dir / "x2y3.sys", "--poly", poly)
        assert result.exit_code == 0
        assert result.stdout.strip() == expected

    def test_samuel(self, corpus_dir):
        result = _invoke("samuel", corpus_dir / "x3y3.sys", "--poly", "9*x^2*y^2")
        assert result.stdout.strip() == "4/3"

    def test_loja(self, corpus_dir):
        assert _invoke("loja", corpus_dir / "x2y2z2.sys").stdout.strip() == "5/4"

    def test_loja_no_statement(self, corpus_dir):
        assert _invoke("loja", corpus_dir / "x_y2.sys").stdout.strip() == "no statement"

    @pytest.mark.parametrize("extra", [(), ("--poly", "x^2", "--powers", "2,1")])
    def test_residue(self, corpus_dir, extra):
        result = _invoke("residue", corpus_dir / "x2y3.sys", *extra)
        assert result.exit_code == 0
        assert result.stdout.strip() == "6"

    def test_table_without_headline(self, corpus_dir):
        result = _invoke("jactest", corpus_dir / "x2y3.sys")
        assert result.exit_code == 0
        assert "socle_generated" in result.stdout


class TestJsonReports:
    """Flat JSON with exact values."""

    def test_jactest(self, corpus_dir):
        data = _json("jactest", corpus_dir / "x2y3.sys")
        assert data["command"] == "jactest"
        assert "headline" not in data
        assert data["dim_finite"] is True
        assert data["dim"] == 6
        assert data["jacobian"] == "6*x*y^2"
        assert data["jacobian_in_ideal"] is False
        assert data["socle_generated"] is True

    def test_dim(self, corpus_dir):
        data = _json("dim", corpus_dir / "x2y3.sys")
        assert data["headline"] == "6"
        assert data["containment_index"] == 4
        assert data["macaulay_dim"] == 6
        assert len(data["standard_monomials"]) == 6
        assert "1" in data["standard_monomials"]

    def test_dim_witness(self, corpus_dir):
        data = _json("dim", corpus_dir / "x_xy.sys")
        assert data["dim_finite"] is False
        assert data["witness"] == "y"

    def test_socle(self, corpus_dir):
        data = _json("socle", corpus_dir / "x2y3.sys")
        assert data["gorenstein"] is True
        assert data["socle"] == ["x*y^2"]
        assert data["jacobian_spans_socle"] is True

    def test_pairing(self, corpus_dir):
        data = _json("pairing", corpus_dir / "x2y3.sys")
        assert data["pairing_invertible"] is True
        assert data["residue_of_jacobian"] == 6
        assert data["functional"]["x*y^2"] == 1

    def test_samuel_bounds(self, corpus_dir):
        data = _json("samuel", corpus_dir / "x3y3.sys", "--poly", "x^2*y^2")
        assert data["lower"] == "4/3"
        assert data["lower_power"] == 3
        assert data["exact"] == "4/3"

    def test_arcs(self, corpus_dir):
        data = _json("arcs", corpus_dir / "x2y3.sys", "--arcs", corpus_dir / "x2y3.arc")
        assert data["cramer_ok"] is True
        assert len(data["arcs"]) == 3
        assert data["least_ratio"] == "7/6"

    def test_hessian(self, corpus_dir):
        data = _json("hessian", corpus_dir / "cusp.sys")
        assert data["isolated"] is True
        assert data["milnor_number"] == 2
        assert data["morse_type"] is True

    def test_relative_domain(self, corpus_dir):
        data = _json("relative", corpus_dir / "rel_u.sys", "--poly", "x^2")
        assert data["coefficient_kind"] == "domain-polynomial"
        assert data["trace"]["trace"] == "2*u"
        assert data["radical_check"]["asserted"] is True
        assert "non_artinian_probe" not in data
        assert data["outcome"] == "observed"

    def test_relative_not_observed(self, corpus_dir):
        data = _json("relative", corpus_dir / "rel_art2.sys")
        assert data["non_artinian_probe"]["non_artinian_outcome"] == "not observed"
        assert data["radical_check"]["outcome"] == "not applicable"
        assert data["outcome"] == "not observed"

    def test_relative_with_witness(self, corpus_dir):
        data = _json("relative", corpus_dir / "rel_art1.sys", "--witness", "u")
        assert data["radical_check"]["witnesses"][0]["power"] == 2
        assert data["outcome"] == "not observed"


class TestDeterminism:
    """Repeated runs print the same bytes."""

    @pytest.mark.parametrize(
        "args",
        [
            ("jactest", "x2y3.sys"),
            ("pairing", "x2py2_xy.sys"),
            ("samuel", "x3y3.sys", "--poly", "x^2*y^2"),
            ("member", "unit_mix.sys", "--poly", "x^3 + y^2"),
            ("relative", "rel_u.sys", "--poly", "x^2"),
        ],
    )
    def test_json_is_byte_identical(self, corpus_dir, args):
        command, name, *extra = args
        first = _invoke(command, corpus_dir / name, *extra, "--json")
        second = _invoke(command, corpus_dir / name, *extra, "--json")
        assert first.exit_code == 0, first.stderr
        assert first.stdout_bytes == second.stdout_bytes

    def test_json_independent_of_hash_seed(self, corpus_dir):
        outputs = []
        for seed in ("0", "1"):
            done = subprocess.run(
                [sys.executable, "-m", "jacres.cli", "pairing", str(corpus_dir / "x2py2_xy.sys"), "--json"],
                capture_output=True,
                env={**os.environ, "PYTHONHASHSEED": seed},
                check=False,
            )
            assert done.returncode == 0, done.stderr
            outputs.append(done.stdout)
        assert outputs[0] == outputs[1]


class TestConfigOption:
    """--config loads a YAML limits file."""

    def test_mcap_from_file(self, corpus_dir, write_file):
        config = write_file("limits.yml", "mcap: 2\n")
        result = runner.invoke(
            app, ["--config", str(config), "samuel", str(corpus_dir / "x3y3.sys"), "--poly", "x^2*y^2", "--json"]
        )
        assert result.exit_code == 0, result.stderr
        data = json.loads(result.stdout)
        assert data["lower"] == 1
        assert data["lower_power"] == 2

    def test_bad_config(self, corpus_dir, write_file):
        config = write_file("limits.yml", "mcap: 0\n")
        assert run(["--config", str(config), "dim", str(corpus_dir / "x2y3.sys")]) == 3

    def test_exponent_cap_from_file(self, corpus_dir, write_file):
        config = write_file("limits.yml", "max_exponent: 2\n")
        result = runner.invoke(app, ["--config", str(config), "dim", str(corpus_dir / "x2y3.sys")])
        assert result.exit_code == 3
        assert "max_exponent=2" in result.stderr


class TestExitCodes:
    """0 ok, 2 inconclusive, 3 invalid input."""

    def test_unknown_command(self):
        assert run(["frobnicate"]) == 3

    def test_missing_option(self, corpus_dir):
        assert run(["member", str(corpus_dir / "x2y3.sys")]) == 3

    def test_missing_file(self, tmp_path):
        assert run(["dim", str(tmp_path / "absent.sys")]) == 3

    def test_exponent_over_cap(self, corpus_dir):
        result = _invoke("member", corpus_dir / "x2y3.sys", "--poly", "x^100000")
        assert result.exit_code == 3
        assert "max_exponent" in result.stderr

    def test_parse_error(self, write_file):
        path = write_file("bad.sys", "ring: Q[x]\ng: x\n")
        result = _invoke("dim", path)
        assert result.exit_code == 3
        assert "unknown keyword" in result.stderr

    def test_coefficient_ring_needs_relative(self, corpus_dir):
        result = _invoke("dim", corpus_dir / "rel_u.sys")
        assert result.exit_code == 3
        assert "relative" in result.stderr

    def test_hessian_needs_one_generator(self, corpus_dir):
        assert _invoke("hessian", corpus_dir / "x2y3.sys").exit_code == 3

    def test_ok(self, corpus_dir):
        assert run(["dim", str(corpus_dir / "x2y3.sys")]) == 0

    def test_step_cap(self, write_file, monkeypatch):
        path = write_file("steps.sys", "ring: Q[x,y]\nf: x^2 + y^3\nf: x*y + y^4\n")
        monkeypatch.setenv("JACRES_MAX_STEPS", "1")
        result = _invoke("dim", path)
        assert result.exit_code == 2
        assert "steps" in result.stderr


@pytest.mark.slow
class TestCorpusSweep:
    """No command reports a violated statement on the example corpus."""

    @pytest.mark.parametrize("command", SWEEP_COMMANDS)
    def test_no_violation(self, corpus_dir, command):
        for path in sorted(corpus_dir.glob("*.sys")):
            result = _invoke(command, path)
            assert result.exit_code in (0, 2, 3), f"{command} {path.name}: {result.stderr}"
