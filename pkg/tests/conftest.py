"""Shared fixture helpers: paths into the data directories."""

import pathlib

import pytest

from odesplit.fileio import read_generators, read_system

HERE = pathlib.Path(__file__).parent
GOLDEN = HERE / "golden"
DERIVED = HERE / "derived"
GENS = HERE / "gens"


@pytest.fixture
def golden_dir():
    return GOLDEN


@pytest.fixture
def derived_dir():
    return DERIVED


@pytest.fixture
def gens_dir():
    return GENS


@pytest.fixture
def load_system():
    def _load(name):
        for root in (GOLDEN, DERIVED):
            path = root / name
            if path.exists():
                return read_system(path)
        raise FileNotFoundError(name)

    return _load


@pytest.fixture
def load_gens():
    def _load(name):
        return read_generators(GENS / name)

    return _load
