# tests/conftest.py
from __future__ import annotations

import json

import pytest

from src.algebra.lie_core import GeneratorSet


@pytest.fixture
def chain_so5() -> GeneratorSet:
    return GeneratorSet.standard(5, [(1, 2), (2, 3), (3, 4), (4, 5)])


@pytest.fixture
def two_blocks_so5() -> GeneratorSet:
    return GeneratorSet.standard(5, [(1, 2), (2, 3), (4, 5)])


@pytest.fixture
def triangle_with_tail_so4() -> GeneratorSet:
    return GeneratorSet.standard(4, [(1, 2), (2, 3), (1, 3), (3, 4)])


@pytest.fixture
def path_with_isolated_vertex_so5() -> GeneratorSet:
    return GeneratorSet.standard(5, [(1, 2), (2, 3), (3, 4)])


@pytest.fixture
def forest_choice_so6() -> GeneratorSet:
    return GeneratorSet.standard(6, [(1, 2), (1, 4), (2, 3), (2, 4), (3, 4), (5, 6)])


@pytest.fixture
def write_spec(tmp_path):
    """Writes a spec dict (or raw text) to a file and returns its path."""

    def _write(spec, name: str = "system.json"):
        path = tmp_path / name
        path.write_text(spec if isinstance(spec, str) else json.dumps(spec), encoding="utf-8")
        return path

    return _write
