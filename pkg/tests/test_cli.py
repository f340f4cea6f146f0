import json
from pathlib import Path

import pytest
import yaml
from click.testing import CliRunner

from depthkit import errors
from depthkit.main import cli


@pytest.fixture
def runner():
    return CliRunner()


def test_hh_eval(runner):
    result = runner.invoke(cli, ["hh", "--ext", "tame(3)", "--fn", "psi", "--eval", "1/3"])
    assert result.exit_code == 0
    assert result.output.strip() == "1"

    result = runner.invoke(cli, ["hh", "--ext", "cyclo(2, 3)", "--fn", "phi", "--eval", "4", "--jumps"])
    assert result.exit_code == 0
    assert result.output.splitlines() == ["9/4", "upper jumps: 0, 1, 2"]


def test_hh_describe(runner):
    result = runner.invoke(cli, ["hh", "--ext", "as(2,1)", "--fn", "psi"])
    assert result.exit_code == 0
    assert result.output.splitlines() == [
        "psi_{as(p=2, m=1)}:",
        "  [0, 1]: 1*x",
        "  [1, oo): 2*x - 1",
    ]


def test_hh_json(runner):
    result = runner.invoke(cli, ["hh", "--ext", "as(p=2, m=1)", "--fn", "phi", "--eval", "2", "--json"])
    assert result.exit_code == 0
    data = json.loads(result.stdout)
    assert data["value"] == "3/2"
    assert data["function"]["slopes"] == ["1", "1/2"]


def test_depth_operations(runner):
    result = runner.invoke(cli, ["depth", "--ext", "as(p=2,m=1)", "--dep", "1", "--llc"])
    assert result.exit_code == 0
    assert result.output.strip() == "3/2"

    result = runner.invoke(cli, ["depth", "--ext", "tame(2) * as(p=2, m=1)", "--dep", "1", "--shapiro"])
    assert result.output.strip() == "3"

    result = runner.invoke(cli, ["depth", "--ext", "tame(4)", "--dep", "3/4", "--restrict", "--json"])
    data = json.loads(result.stdout)
    assert data == {"extension": "tame(e=4)", "operation": "restrict", "depth": "3/4", "kappa": "1", "result": "3"}

    result = runner.invoke(cli, ["depth", "--ext", "as(p=2,m=1)", "--dep", "1", "--kappa", "1/2", "--llc"])
    assert result.output.strip() == "1"


def test_depth_needs_an_operation(runner):
    result = runner.invoke(cli, ["depth", "--ext", "tame(2)", "--dep", "1"])
    assert result.exit_code == 2


def test_conductor(runner):
    result = runner.invoke(cli, ["conductor", "--n", "2", "--dep", "1/2"])
    assert result.exit_code == 0
    assert result.output.strip() == "n = 2, f = 3, swan = 1/2, depth = 1/2"

    result = runner.invoke(cli, ["conductor", "--n", "1", "--dep", "3", "--ext", "as(2, 1)", "--ai"])
    assert result.exit_code == 0
    assert result.output.strip() == "ai: n = 2, f = 6, swan = 2, depth = 2"

    result = runner.invoke(cli, ["conductor", "--n", "2", "--dep", "5", "--ext", "as(2, 3)", "--asai", "--json"])
    data = json.loads(result.stdout)
    assert data["asai"]["conductor"] == 20
    assert data["base"]["conductor"] == 12

    result = runner.invoke(cli, ["conductor", "--n", "2", "--dep", "1", "--asai"])
    assert result.exit_code == 2


def test_library_errors_exit_2(runner):
    result = runner.invoke(cli, ["depth", "--ext", "as(p=2, m=2)", "--dep", "1", "--llc"])
    assert result.exit_code == 2
    assert "Error [E_SEMANTIC]" in result.output
    assert "gcd(m, p) must be 1" in result.output

    result = runner.invoke(cli, ["conductor", "--n", "2", "--dep", "1/3"])
    assert result.exit_code == 2
    assert "Error [E_CONDUCTOR]" in result.output

    result = runner.invoke(cli, ["hh", "--ext", "as(p=2", "--fn", "psi", "--json"])
    assert result.exit_code == 2
    error = json.loads(result.stdout)["error"]
    assert error["code"] == "E_SYNTAX"
    assert error["offset"] == 6

    result = runner.invoke(cli, ["hh", "--ext", "tame(2)", "--fn", "psi", "--eval", "-1"])
    assert result.exit_code == 2
    assert "Error [E_DOMAIN]" in result.output

    result = runner.invoke(cli, ["hh", "--ext", "tame(2)", "--fn", "psi", "--eval", "x"])
    assert result.exit_code == 2


@pytest.mark.parametrize(
    "ext, message",
    [
        ("breaks(p=2, e=0, f=1, breaks=[(0, 0)])", "e must be >= 1"),
        ("breaks(p=2, e=2, f=0, breaks=[(0, 2)])", "f must be >= 1"),
        ("breaks(p=2, e=2, f=1, breaks=[(0, 2), (1, 0)])", "group orders must be >= 1"),
    ],
)
def test_degenerate_breaks_exit_2(runner, ext, message):
    result = runner.invoke(cli, ["hh", "--ext", ext, "--fn", "psi"])
    assert result.exit_code == 2
    assert "Error [E_SEMANTIC]" in result.output
    assert message in result.output
    assert result.exception is None or isinstance(result.exception, SystemExit)


def test_verify_json_and_report(runner, tmp_path):
    report = tmp_path / "reports" / "depth.yaml"
    result = runner.invoke(cli, ["verify", "depth", "--json", "--report", str(report)])
    assert result.exit_code == 0
    data = json.loads(result.stdout)
    assert data["suite"] == "depth"
    assert data["passed"] is True
    assert all(case["pass"] for case in data["cases"])

    saved = yaml.safe_load(report.read_text())
    assert saved["passed"] is True
    assert saved["digest_sha256"] == data["digest"]


def test_verify_text(runner):
    result = runner.invoke(cli, ["verify", "herbrand", "--failures-only"])
    assert result.exit_code == 0
    assert "passed" in result.output


def test_verify_usage_errors(runner):
    result = runner.invoke(cli, ["verify", "shapiro", "--p", "2"])
    assert result.exit_code == 2
    result = runner.invoke(cli, ["verify", "nonsense"])
    assert result.exit_code == 2


@pytest.mark.slow
def test_verify_laurent_subset(runner):
    result = runner.invoke(cli, ["verify", "laurent", "--p", "2", "--m", "1", "--prec", "64", "--trials", "3", "--json"])
    assert result.exit_code == 0
    data = json.loads(result.stdout)
    assert data["passed"] is True
    assert data["seed"] == 0


def test_config_export(runner, tmp_path):
    path = tmp_path / "depthkit.yaml"
    result = runner.invoke(cli, ["config", "--format", "yaml", "-o", str(path), "--precision", "64"])
    assert result.exit_code == 0
    assert yaml.safe_load(path.read_text())["laurent"]["precision"] == 64

    env = tmp_path / ".env"
    result = runner.invoke(cli, ["-c", str(path), "config", "--format", "env", "-o", str(env), "--jobs", "3"])
    assert result.exit_code == 0
    text = env.read_text()
    assert "DEPTHKIT_PRECISION=64" in text
    assert "DEPTHKIT_JOBS=3" in text


def test_config_export_rejects_bad_values(runner, tmp_path):
    result = runner.invoke(cli, ["config", "--format", "yaml", "-o", str(tmp_path / "c.yaml"), "--precision", "2"])
    assert result.exit_code == 2
    assert "Error [E_CONFIG]" in result.output


def test_schema_lists_every_error_code():
    schema = json.loads((Path(__file__).parent.parent / "docs" / "output_schema.json").read_text())
    codes = set(schema["$defs"]["error"]["properties"]["error"]["properties"]["code"]["enum"])
    classes = [c for c in vars(errors).values() if isinstance(c, type) and issubclass(c, errors.DepthkitError)]
    assert codes == {c.code for c in classes}
