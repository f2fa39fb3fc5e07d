"""Shared fixtures: frozen oracle data and an artifact directory."""

import json
import pathlib

import pytest

DATA = pathlib.Path(__file__).parent / "data"
ARTIFACTS = pathlib.Path(__file__).parent / "artifacts"


@pytest.fixture(scope="session")
def oracles():
    """Frozen high-precision reference values (tools/gen_sum_oracles.py)."""
    with open(DATA / "sum_oracles.json", "r", encoding="utf-8") as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def artifacts_dir():
    ARTIFACTS.mkdir(exist_ok=True)
    return ARTIFACTS


def as_complex(pair):
    """Oracle complex values are stored as [re, im] string lists."""
    return complex(float(pair[0]), float(pair[1]))
