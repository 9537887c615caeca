import json

import pytest
import yaml
from typer.testing import CliRunner

from coblab.cli import app

runner = CliRunner()

CONFIG = {
    "name": "cli",
    "alpha": "golden",
    "chain": {"eps": 0.0625, "L": 2, "count": 20},
    "system": {"kind": "lemma31-T", "k": 3, "j": 1},
    "verify": {
        "samples": 500,
        "sup_growth": [5, 10, 20],
        "cesaro": [1000, 2000],
        "birkhoff": {"characters": [[1, 0, 0]], "starts": 2, "checkpoints": [100, 1000]},
    },
    "rpk": {
        "k": 1,
        "n_bound": 8,
        "grid": 20,
        "pairs": [{"x": ["0", "0", "0"], "y": ["0", "0", "0"]}],
    },
}


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "experiment.yaml"
    path.write_text(yaml.safe_dump(CONFIG))
    return path


def invoke(*args, **kwargs):
    return runner.invoke(app, [str(a) for a in args], **kwargs)


def test_full_pipeline(config_file, tmp_path):
    out = tmp_path / "out"
    assert invoke("build", "-c", config_file, "-o", out).exit_code == 0
    assert invoke("verify", "-c", config_file, "-o", out).exit_code == 0
    assert invoke("rpk", "-c", config_file, "-o", out).exit_code == 0
    result = invoke("report", "-o", out)
    assert result.exit_code == 0
    for name in ("chains.json", "spec.json", "report.json", "certificates.json", "report.md", "birkhoff.csv"):
        assert (out / name).is_file()


def test_reruns_are_byte_identical(config_file, tmp_path):
    outputs = [tmp_path / "a", tmp_path / "b"]
    for out in outputs:
        assert invoke("build", "-c", config_file, "-o", out).exit_code == 0
        assert invoke("verify", "-c", config_file, "-o", out).exit_code == 0
    for name in ("subsequence.json", "chains.json", "spec.json", "report.json", "sup_growth.csv", "birkhoff.csv"):
        assert (outputs[0] / name).read_bytes() == (outputs[1] / name).read_bytes()


def test_json_config(tmp_path):
    path = tmp_path / "experiment.json"
    path.write_text(json.dumps(CONFIG))
    assert invoke("-v", "build", "-c", path, "-o", tmp_path / "out").exit_code == 0


def test_verify_fails_on_tampered_chain(config_file, tmp_path):
    out = tmp_path / "out"
    invoke("build", "-c", config_file, "-o", out)
    path = out / "chains.json"
    data = json.loads(path.read_text())
    for term in data["chains"][0]["G"][0][:2]:
        term["re"] += 1e-3
    path.write_text(json.dumps(data))
    assert invoke("verify", "-c", config_file, "-o", out).exit_code == 1


def test_verify_empty_selection(tmp_path):
    config = {**CONFIG, "verify": {"coboundary": False, "conjugacy": False, "l2": False}}
    path = tmp_path / "empty.yaml"
    path.write_text(yaml.safe_dump(config))
    out = tmp_path / "out"
    invoke("build", "-c", path, "-o", out)
    assert invoke("verify", "-c", path, "-o", out).exit_code == 0
    assert json.loads((out / "report.json").read_text())["checks"] == []


def test_verify_without_build(config_file, tmp_path):
    assert invoke("verify", "-c", config_file, "-o", tmp_path / "missing").exit_code == 1


def test_missing_alpha(tmp_path):
    config = {k: v for k, v in CONFIG.items() if k != "alpha"}
    path = tmp_path / "bad.yaml"
    path.write_text(yaml.safe_dump(config))
    result = invoke("build", "-c", path, "-o", tmp_path / "out")
    assert result.exit_code == 1
    assert not (tmp_path / "out").exists()


def test_missing_config(tmp_path):
    assert invoke("build", "-c", tmp_path / "none.yaml").exit_code != 0


def test_rpk_guard(tmp_path):
    config = {**CONFIG, "rpk": {**CONFIG["rpk"], "k": 3}}
    path = tmp_path / "guard.yaml"
    path.write_text(yaml.safe_dump(config))
    out = tmp_path / "out"
    invoke("build", "-c", path, "-o", out)
    result = invoke("rpk", "-c", path, "-o", out)
    assert result.exit_code == 1
    assert not (out / "certificates.json").exists()


def test_report_without_verify(tmp_path):
    assert invoke("report", "-o", tmp_path).exit_code == 1


def test_report_with_malformed_json(tmp_path):
    (tmp_path / "report.json").write_text("{")
    result = invoke("report", "-o", tmp_path)
    assert result.exit_code == 1
    assert not (tmp_path / "report.md").exists()


def test_init(tmp_path):
    path = tmp_path / "new.yaml"
    assert invoke("init", "-o", path).exit_code == 0
    text = path.read_text()
    assert yaml.safe_load(text)["system"]["kind"] == "lemma31-T"

    path.write_text("keep")
    result = invoke("init", "-o", path, input="n\n")
    assert result.exit_code == 0
    assert path.read_text() == "keep"

    assert invoke("init", "-o", path, input="y\n").exit_code == 0
    assert path.read_text() == text
