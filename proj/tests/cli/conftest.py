import json
import struct
import subprocess
from pathlib import Path

import jsonschema
import numpy as np
import pytest


def pytest_addoption(parser):
    parser.addoption("--multiway-bin", required=True, help="path to the multiway executable")
    parser.addoption("--schema-dir", required=True, help="directory holding the JSON schemas")


@pytest.fixture(scope="session")
def multiway_bin(request):
    return Path(request.config.getoption("--multiway-bin"))


@pytest.fixture(scope="session")
def schemas(request):
    root = Path(request.config.getoption("--schema-dir"))
    return {
        name: json.loads((root / f"{name}.schema.json").read_text())
        for name in ("manifest", "model")
    }


@pytest.fixture
def run(multiway_bin, tmp_path):
    """Runs the CLI with --out-dir inside tmp_path; returns (process, out_dir)."""

    def _run(*args, out="out", seed=42):
        out_dir = tmp_path / out
        cmd = [str(multiway_bin), "--seed", str(seed), "--out-dir", str(out_dir), *map(str, args)]
        proc = subprocess.run(cmd, capture_output=True, text=True, timeout=300)
        return proc, out_dir

    return _run


@pytest.fixture
def check_manifest(schemas):
    def _check(out_dir):
        doc = json.loads((Path(out_dir) / "manifest.json").read_text())
        jsonschema.validate(doc, schemas["manifest"])
        return doc

    return _check


def write_mwt1(path, array):
    """Canonical layout: first index fastest."""
    array = np.asarray(array, dtype="<f8")
    with open(path, "wb") as f:
        f.write(b"MWT1")
        f.write(struct.pack("<I", array.ndim))
        f.write(struct.pack(f"<{array.ndim}Q", *array.shape))
        f.write(array.ravel(order="F").tobytes())


def read_mwt1(path):
    raw = Path(path).read_bytes()
    assert raw[:4] == b"MWT1"
    (order,) = struct.unpack_from("<I", raw, 4)
    shape = struct.unpack_from(f"<{order}Q", raw, 8)
    data = np.frombuffer(raw, dtype="<f8", offset=8 + 8 * order)
    return data.reshape(shape, order="F")
