from __future__ import annotations

import pandas as pd
import pytest

from src.analysis.sweep import (
    SweepRow,
    run_sweep,
    sweep_formation,
    sweep_sl3,
    sweep_split,
    sweep_standard,
    write_csv,
)
from src.errors import CapExceededError


@pytest.mark.parametrize("n, subsets", [(2, 2), (3, 8), (4, 64)])
def test_standard_sweep_backends_agree(n, subsets):
    result = sweep_standard(n)
    assert len(result.rows) == subsets
    assert result.mismatches == ()
    assert all(r.orbit_dim == r.rank for r in result.rows)
    assert [r.index for r in result.rows] == list(range(subsets))


@pytest.mark.slow
def test_standard_sweep_on_so5():
    result = sweep_standard(5)
    assert len(result.rows) == 1024
    assert result.mismatches == ()
    # controllable subsets need at least n - 1 generators
    assert result.min_controllable_size == 4
    assert all(r.size >= 4 for r in result.controllable)


def test_counts_by_size_on_so3():
    counts = sweep_standard(3).counts_by_size()
    assert counts["size"].tolist() == [0, 1, 2, 3]
    assert counts["subsets"].tolist() == [1, 3, 3, 1]
    assert counts["controllable"].tolist() == [0, 0, 3, 1]


def test_parallel_sweep_matches_serial():
    serial = sweep_standard(4)
    parallel = sweep_standard(4, workers=2, chunk_size=16)
    assert parallel.rows == serial.rows


def test_split_sweep():
    result = sweep_split()
    assert len(result.rows) == 64
    assert result.mismatches == ()
    assert result.min_controllable_size == 4


def test_sl3_sweep_surfaces_disagreements():
    result = sweep_sl3()
    assert len(result.rows) == 256
    assert result.mismatches
    assert all(r.cycle and not r.larc for r in result.mismatches)
    assert "X3 Y3" in {r.labels for r in result.mismatches}


def test_formation_sweep_on_four_agents():
    result = sweep_formation(4)
    assert len(result.rows) == 64
    assert result.mismatches == ()
    # connected coupling graphs on 4 agents need at least 3 edges
    assert result.min_controllable_size == 3


@pytest.mark.slow
def test_formation_sweep_on_five_agents():
    result = sweep_formation(5)
    assert len(result.rows) == 1024
    assert result.mismatches == ()


def test_row_mismatch_flags():
    assert not SweepRow(0, 1, "a", 1, larc=False, graph=False, cycle=False, orbit_dim=1).mismatch
    assert SweepRow(0, 1, "a", 1, larc=False, graph=True).mismatch
    assert SweepRow(0, 1, "a", 1, larc=False, graph=False, orbit_dim=3).mismatch


def test_caps_and_argument_errors():
    with pytest.raises(CapExceededError):
        sweep_standard(7)
    with pytest.raises(CapExceededError):
        sweep_formation(6)
    with pytest.raises(ValueError):
        run_sweep("standard")
    with pytest.raises(ValueError):
        run_sweep("unknown")
    with pytest.raises(ValueError):
        sweep_formation(1)


def test_run_sweep_dispatch():
    assert run_sweep("standard", 3).kind == "standard"
    assert run_sweep("split").n == 4


def test_write_csv(tmp_path):
    result = sweep_standard(3)
    path = write_csv(result, tmp_path / "sweeps")
    assert path.name == "standard_n3.csv"
    df = pd.read_csv(path)
    assert len(df) == 8
    assert not df["mismatch"].any()
    assert set(df.columns) >= {"index", "size", "labels", "rank", "larc", "graph", "cycle", "orbit_dim"}
