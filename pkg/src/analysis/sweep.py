# src/analysis/sweep.py
from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from functools import lru_cache
from pathlib import Path

import pandas as pd

from src.algebra.lie_core import GeneratorSet, lie_closure, son_dimension
from src.combinatorics.liegraph import SimpleGraph, graph_controllable
from src.combinatorics.permgroup import cycle_controllable, submanifold_orbits
from src.decomp.formation import formation_controllable, formation_oracle_rank, full_formation_rank
from src.decomp.sl3c import SL3_LABELS, sl3_sweep
from src.decomp.so4_split import (
    SO4_DIMENSION,
    SPLIT_LABELS,
    split_controllable,
    split_cycle_controllable,
    split_generator_set,
)
from src.errors import CapExceededError

log = logging.getLogger(__name__)

SWEEP_KINDS = ("standard", "split", "sl3c", "formation")
VERDICT_COLUMNS = ("larc", "graph", "cycle")


@dataclass(frozen=True)
class SweepRow:
    index: int
    size: int
    labels: str
    rank: int
    larc: bool
    graph: bool | None = None
    cycle: bool | None = None
    orbit_dim: int | None = None

    @property
    def verdicts(self) -> dict[str, bool]:
        return {c: getattr(self, c) for c in VERDICT_COLUMNS if getattr(self, c) is not None}

    @property
    def mismatch(self) -> bool:
        if len(set(self.verdicts.values())) > 1:
            return True
        return self.orbit_dim is not None and self.orbit_dim != self.rank


@dataclass(frozen=True)
class SweepResult:
    kind: str
    n: int
    rows: tuple[SweepRow, ...]
    elapsed_s: float = 0.0

    @property
    def mismatches(self) -> tuple[SweepRow, ...]:
        return tuple(r for r in self.rows if r.mismatch)

    @property
    def controllable(self) -> tuple[SweepRow, ...]:
        return tuple(r for r in self.rows if r.larc)

    @property
    def min_controllable_size(self) -> int | None:
        sizes = [r.size for r in self.controllable]
        return min(sizes) if sizes else None

    def to_frame(self) -> pd.DataFrame:
        df = pd.DataFrame([asdict(r) for r in self.rows])
        df["mismatch"] = [r.mismatch for r in self.rows]
        return df

    def counts_by_size(self) -> pd.DataFrame:
        df = self.to_frame()
        grouped = df.groupby("size").agg(subsets=("index", "count"), controllable=("larc", "sum"))
        return grouped.astype(int).reset_index()

    def summary(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "subsets": len(self.rows),
            "controllable": len(self.controllable),
            "mismatches": len(self.mismatches),
            "min_controllable_size": self.min_controllable_size,
            "elapsed_s": round(self.elapsed_s, 3),
        }


# ------------------------------------------------------------
# Per-subset evaluation (top level so worker processes can pickle it)
# ------------------------------------------------------------

@lru_cache(maxsize=None)
def _full_standard(n: int) -> GeneratorSet:
    return GeneratorSet.full_standard(n)


def _formation_edges(N: int) -> list[tuple[int, int]]:
    return SimpleGraph.complete(N).edge_list()


def _evaluate(kind: str, n: int, mask: int) -> SweepRow:
    if kind == "standard":
        gens = _full_standard(n).by_mask(mask)
        rank = lie_closure(gens).rank if len(gens) else 0
        return SweepRow(
            index=mask,
            size=len(gens),
            labels=" ".join(gens.labels),
            rank=rank,
            larc=rank == son_dimension(n),
            graph=graph_controllable(gens),
            cycle=cycle_controllable(gens).controllable,
            orbit_dim=submanifold_orbits(gens).lie_dimension,
        )

    if kind == "formation":
        edges = [e for k, e in enumerate(_formation_edges(n)) if mask >> k & 1]
        coupling = SimpleGraph.from_edges(n, edges)
        rank = formation_oracle_rank(coupling)
        return SweepRow(
            index=mask,
            size=len(edges),
            labels=" ".join(f"{i}-{j}" for i, j in edges),
            rank=rank,
            larc=rank == full_formation_rank(n),
            graph=formation_controllable(coupling),
        )

    if kind == "split":
        labels = tuple(lb for k, lb in enumerate(SPLIT_LABELS) if mask >> k & 1)
        gens = split_generator_set(labels)
        rank = lie_closure(gens).rank if labels else 0
        return SweepRow(
            index=mask,
            size=len(labels),
            labels=" ".join(labels),
            rank=rank,
            larc=rank == SO4_DIMENSION,
            graph=split_controllable(gens),
            cycle=split_cycle_controllable(gens),
        )

    raise ValueError(f"Unknown sweep kind {kind!r}")


def _evaluate_chunk(kind: str, n: int, start: int, stop: int) -> list[SweepRow]:
    return [_evaluate(kind, n, mask) for mask in range(start, stop)]


def _run(kind: str, n: int, total: int, workers: int, chunk_size: int) -> tuple[SweepRow, ...]:
    bounds = [(s, min(s + chunk_size, total)) for s in range(0, total, chunk_size)]
    if workers <= 1 or len(bounds) == 1:
        rows = [row for s, e in bounds for row in _evaluate_chunk(kind, n, s, e)]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_evaluate_chunk, kind, n, s, e) for s, e in bounds]
            # chunks come back in submission order, so rows stay sorted by subset index
            rows = [row for f in futures for row in f.result()]
    return tuple(rows)


def _check_cap(name: str, value: int, cap: int, allow_large: bool) -> None:
    if value > cap and not allow_large:
        raise CapExceededError(f"{name}={value} exceeds the sweep cap {cap}; pass --allow-large to override")


def _finish(kind: str, n: int, rows: tuple[SweepRow, ...], started: float) -> SweepResult:
    result = SweepResult(kind, n, rows, time.perf_counter() - started)
    s = result.summary()
    log.info(
        "event=SWEEP_DONE | kind=%s n=%d subsets=%d controllable=%d mismatches=%d elapsed=%.2fs",
        kind, n, s["subsets"], s["controllable"], s["mismatches"], s["elapsed_s"],
    )
    return result


# ------------------------------------------------------------
# Public sweeps
# ------------------------------------------------------------

def sweep_standard(n: int, workers: int = 1, chunk_size: int = 64, cap: int = 6, allow_large: bool = False) -> SweepResult:
    """
    Every Γ ⊆ {Ω_ij} on so(n): rank oracle, connectivity and n-cycle
    verdicts plus the orbit dimension. Subset k holds generator j when bit j
    of k is set (generators in lexicographic order).
    """
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    _check_cap("n", n, cap, allow_large)
    started = time.perf_counter()
    total = 1 << son_dimension(n)
    return _finish("standard", n, _run("standard", n, total, workers, chunk_size), started)


def sweep_formation(N: int, workers: int = 1, chunk_size: int = 64, cap: int = 5, allow_large: bool = False) -> SweepResult:
    """Every coupling graph on N agents: connectivity against oracle rank equality."""
    if N < 2:
        raise ValueError(f"Formation sweeps need N >= 2, got {N}")
    _check_cap("N", N, cap, allow_large)
    started = time.perf_counter()
    full_formation_rank(N)
    total = 1 << son_dimension(N)
    return _finish("formation", N, _run("formation", N, total, workers, chunk_size), started)


def sweep_split() -> SweepResult:
    started = time.perf_counter()
    return _finish("split", 4, _run("split", 4, 1 << len(SPLIT_LABELS), 1, 64), started)


def sweep_sl3() -> SweepResult:
    """Cycle test against the complex oracle; disagreements stay in the result as mismatches."""
    started = time.perf_counter()
    report = sl3_sweep()
    rows = tuple(
        SweepRow(
            index=sum(1 << SL3_LABELS.index(lb) for lb in r.labels),
            size=len(r.labels),
            labels=" ".join(r.labels),
            rank=r.rank,
            larc=r.larc,
            cycle=r.cycle,
        )
        for r in report.rows
    )
    for r in report.minimal_counterexamples:
        log.warning("event=SL3_COUNTEREXAMPLE | subset=%s cycle=%s larc=%s rank=%d", r.name, r.cycle, r.larc, r.rank)
    return _finish("sl3c", 3, rows, started)


def run_sweep(
    kind: str,
    n: int | None = None,
    workers: int = 1,
    chunk_size: int = 64,
    max_n: int = 6,
    max_formation: int = 5,
    allow_large: bool = False,
) -> SweepResult:
    if kind == "standard":
        if n is None:
            raise ValueError("standard sweeps need n")
        return sweep_standard(n, workers, chunk_size, max_n, allow_large)
    if kind == "formation":
        if n is None:
            raise ValueError("formation sweeps need N")
        return sweep_formation(n, workers, chunk_size, max_formation, allow_large)
    if kind == "split":
        return sweep_split()
    if kind == "sl3c":
        return sweep_sl3()
    raise ValueError(f"Unknown sweep kind {kind!r}; expected one of {SWEEP_KINDS}")


def write_csv(result: SweepResult, out_dir: Path) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{result.kind}_n{result.n}.csv"
    result.to_frame().to_csv(path, index=False)
    log.info("event=SWEEP_CSV_WRITTEN | path=%s rows=%d", path, len(result.rows))
    return path
