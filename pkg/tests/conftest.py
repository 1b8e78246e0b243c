import json
import sys
from pathlib import Path

import pytest

from slaiot.vocabulary import default_registry

ROOT = Path(__file__).resolve().parents[1]
CORPUS_DIR = ROOT / "corpus"
GOLDEN_DIR = CORPUS_DIR / "golden"
INVALID_DIR = Path(__file__).resolve().parent / "fixtures" / "invalid"
SCHEMA_PATH = ROOT / "schema" / "sla-1.0.schema.json"
RHMS_DSL = CORPUS_DIR / "rhms-request.slaiot"
RHMS_GOLDEN = GOLDEN_DIR / "rhms-request.sla.json"


@pytest.fixture(scope="session")
def registry():
    return default_registry()


@pytest.fixture(scope="session")
def corpus_paths():
    paths = sorted(CORPUS_DIR.glob("*.slaiot"))
    assert paths, "corpus directory is empty"
    return paths


@pytest.fixture(scope="session")
def rhms_text():
    return RHMS_DSL.read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def rhms_golden_text():
    return RHMS_GOLDEN.read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def invalid_expectations():
    return json.loads((INVALID_DIR / "expectations.json").read_text(encoding="utf-8"))


def run_cli(*args: str, stdin: str | None = None):
    """Run the installed CLI in a subprocess; returns (code, stdout, stderr)."""
    import subprocess

    proc = subprocess.run(
        [sys.executable, "-m", "slaiot.cli", *args],
        input=stdin, capture_output=True, text=True, cwd=ROOT)
    return proc.returncode, proc.stdout, proc.stderr
