# src/decomp/sl3c.py
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache

from src.algebra.lie_core import BasisKind, ExactMatrix, GeneratorSet, lie_closure
from src.algebra.scalars import COMPLEX
from src.combinatorics.permgroup import Permutation
from src.decomp.direct_sum import SumPermutation, compose_all
from src.errors import GeneratorSetError

log = logging.getLogger(__name__)

SL3_LABELS = ("H1", "H2", "X1", "X2", "X3", "Y1", "Y2", "Y3")
SL3_COMPLEX_DIMENSION = 8
SL3_REAL_DIMENSION = 16

SL3_ENTRIES = {
    "H1": [[1, 0, 0], [0, -1, 0], [0, 0, 0]],
    "H2": [[0, 0, 0], [0, 1, 0], [0, 0, -1]],
    "X1": [[0, 1, 0], [0, 0, 0], [0, 0, 0]],
    "X2": [[0, 0, 0], [0, 0, 1], [0, 0, 0]],
    "X3": [[0, 0, 1], [0, 0, 0], [0, 0, 0]],
    "Y1": [[0, 0, 0], [1, 0, 0], [0, 0, 0]],
    "Y2": [[0, 0, 0], [0, 0, 0], [0, 1, 0]],
    "Y3": [[0, 0, 0], [0, 0, 0], [1, 0, 0]],
}

# slot images under ι: None is the identity, otherwise the transposition
SL3_IOTA = {
    "H1": (None, None),
    "H2": (None, None),
    "X1": ((1, 2), None),
    "X2": (None, (1, 2)),
    "X3": ((1, 2), (1, 2)),
    "Y1": ((2, 3), None),
    "Y2": (None, (2, 3)),
    "Y3": ((2, 3), (2, 3)),
}


@dataclass(frozen=True)
class SL3Basis:
    """Cartan basis of sl(3, C) over Gaussian rationals."""

    elements: tuple[tuple[str, ExactMatrix], ...]

    @classmethod
    def build(cls) -> "SL3Basis":
        elements = tuple((label, ExactMatrix.from_entries(SL3_ENTRIES[label], COMPLEX)) for label in SL3_LABELS)
        basis = cls(elements)
        if not all(m.is_traceless() for _, m in elements):
            raise RuntimeError("sl(3) basis element with nonzero trace")
        h1, h2 = basis.matrix("H1"), basis.matrix("H2")
        if not (h1 @ h2 == h2 @ h1):
            raise RuntimeError("Cartan elements H1, H2 do not commute")
        return basis

    def matrix(self, label: str) -> ExactMatrix:
        for name, m in self.elements:
            if name == label:
                return m
        raise GeneratorSetError(f"{label!r} is not an sl(3) basis label; expected one of {SL3_LABELS}")


@lru_cache(maxsize=1)
def sl3_basis() -> SL3Basis:
    return SL3Basis.build()


def sl3_generator_set(labels) -> GeneratorSet:
    basis = sl3_basis()
    return GeneratorSet(3, tuple((label, basis.matrix(label)) for label in labels), BasisKind.SL3C)


def _sl3_labels(gens: GeneratorSet) -> list[str]:
    gens.require_kind(BasisKind.SL3C)
    basis = sl3_basis()
    for label, m in gens.generators:
        if basis.matrix(label) != m.convert_to(COMPLEX):
            raise GeneratorSetError(f"Generator {label!r} does not match the sl(3) basis element")
    return list(gens.labels)


def _slot(t: tuple[int, int] | None) -> Permutation:
    return Permutation.identity(3) if t is None else Permutation.transposition(3, *t)


def sl3_image(label: str) -> SumPermutation:
    if label not in SL3_IOTA:
        raise GeneratorSetError(f"{label!r} is not an sl(3) basis label")
    first, second = SL3_IOTA[label]
    return SumPermutation(_slot(first), _slot(second))


def sl3_iota(ordering) -> SumPermutation:
    """Slotwise composition of the images of `ordering`, left to right as written."""
    return compose_all(sl3_image(label) for label in ordering)


def sl3_cycle_controllable(gens: GeneratorSet) -> bool:
    """
    Some Σ ⊆ Γ maps to a 6-cycle. Each slot is a triangle graph with edges
    (12) and (23); a slot is a 3-cycle when Σ hands it exactly one of each,
    i.e. a spanning tree of that triangle. Searched over subsets of the
    non-Cartan generators.
    """
    labels = [lb for lb in _sl3_labels(gens) if SL3_IOTA[lb] != (None, None)]
    for size in range(2, len(labels) + 1):
        for subset in itertools.combinations(labels, size):
            if _slots_are_trees(subset):
                return True
    return False


def _slots_are_trees(subset) -> bool:
    for slot in (0, 1):
        given = [SL3_IOTA[lb][slot] for lb in subset if SL3_IOTA[lb][slot] is not None]
        if sorted(given) != [(1, 2), (2, 3)]:
            return False
    return True


@lru_cache(maxsize=1)
def _orderings_reaching_six_cycle() -> frozenset[frozenset[str]]:
    """Non-Cartan subsets with at least one ordering whose image is a 6-cycle."""
    movers = [lb for lb in SL3_LABELS if SL3_IOTA[lb] != (None, None)]
    good = set()
    for size in range(len(movers) + 1):
        for subset in itertools.combinations(movers, size):
            if any(sl3_iota(order).is_maximal_cycle for order in itertools.permutations(subset)):
                good.add(frozenset(subset))
    return frozenset(good)


def sl3_cycle_controllable_bruteforce(gens: GeneratorSet) -> bool:
    """Exhaustive subset and ordering search; Cartan elements map to (e, e) and are skipped."""
    present = set(_sl3_labels(gens))
    return any(subset <= present for subset in _orderings_reaching_six_cycle())


def sl3_larc_controllable(gens: GeneratorSet, real_scalars: bool = False) -> bool:
    """Complex closure against dim 8; with real_scalars, real closure against dim 16."""
    if len(gens) == 0:
        return False
    full = SL3_REAL_DIMENSION if real_scalars else SL3_COMPLEX_DIMENSION
    return lie_closure(gens, real_scalars=real_scalars).rank == full


# ------------------------------------------------------------
# Exhaustive comparison over all subsets
# ------------------------------------------------------------

@dataclass(frozen=True)
class SL3SweepRow:
    labels: tuple[str, ...]
    cycle: bool
    larc: bool
    rank: int

    @property
    def agree(self) -> bool:
        return self.cycle == self.larc

    @property
    def name(self) -> str:
        return "{" + ", ".join(self.labels) + "}"


@dataclass(frozen=True)
class SL3SweepReport:
    rows: tuple[SL3SweepRow, ...]

    @property
    def counterexamples(self) -> tuple[SL3SweepRow, ...]:
        return tuple(r for r in self.rows if not r.agree)

    @property
    def minimal_counterexamples(self) -> tuple[SL3SweepRow, ...]:
        """Disagreeing subsets none of whose proper subsets disagree."""
        bad = self.counterexamples
        return tuple(r for r in bad if not any(set(o.labels) < set(r.labels) for o in bad))


def sl3_sweep() -> SL3SweepReport:
    """Cycle test vs complex rank oracle on all 256 subsets; disagreements are kept, never reconciled."""
    rows = []
    for mask in range(1 << len(SL3_LABELS)):
        labels = tuple(lb for k, lb in enumerate(SL3_LABELS) if mask >> k & 1)
        gens = sl3_generator_set(labels)
        rank = lie_closure(gens).rank if labels else 0
        rows.append(SL3SweepRow(labels, sl3_cycle_controllable(gens), rank == SL3_COMPLEX_DIMENSION, rank))
    report = SL3SweepReport(tuple(rows))
    log.info(
        "event=SL3_SWEEP_DONE | subsets=%d counterexamples=%d minimal=%s",
        len(rows),
        len(report.counterexamples),
        [r.name for r in report.minimal_counterexamples],
    )
    return report
