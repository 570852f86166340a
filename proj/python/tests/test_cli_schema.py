import json
import os
import pathlib
import subprocess

import pytest

jsonschema = pytest.importorskip("jsonschema")

ROOT = pathlib.Path(__file__).resolve().parents[2]
SCHEMA = json.loads((ROOT / "docs" / "report.schema.json").read_text())
CLI = os.environ.get("GMT_CLI")

pytestmark = pytest.mark.skipif(not CLI, reason="GMT_CLI not set")

COMMANDS = [
    ["modulus", "check", "--name", "power:1,0.5"],
    ["modulus", "diverge", "--name", "iterlog:2,1"],
    ["whitney", "build", "--depth", "6"],
    ["family", "build", "--depth", "6", "--c-pm", "0.5"],
    ["cover", "run", "--depth", "10", "--directions", "8"],
    ["measure", "box", "--points", "{points}", "--delta", "0.25", "0.125"],
    ["example", "energy", "--p", "1", "--depth", "8", "--fd-max", "2"],
    ["example", "witness", "--p", "1", "--depth", "8"],
]


@pytest.mark.parametrize("args", COMMANDS, ids=[" ".join(a[:2]) for a in COMMANDS])
def test_reports_match_schema(args, tmp_path):
    points = tmp_path / "points.csv"
    points.write_text("x,y\n" + "".join(f"{i / 16},{i * i / 256}\n" for i in range(17)))
    args = [a.replace("{points}", str(points)) for a in args]
    out = subprocess.run([CLI, *args], check=True, capture_output=True, text=True).stdout
    report = json.loads(out)
    jsonschema.validate(report, SCHEMA)
    assert report["command"] == " ".join(args[:2])


def test_errors_match_schema():
    proc = subprocess.run([CLI, "modulus", "check", "--name", "bogus"], capture_output=True, text=True)
    assert proc.returncode == 2
    jsonschema.validate(json.loads(proc.stderr), SCHEMA)
