# src/decomp/so4_split.py
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache

from src.algebra.lie_core import (
    BasisKind,
    ExactMatrix,
    GeneratorSet,
    bracket,
    larc_controllable,
    linear_combination,
    omega,
)
from src.combinatorics.liegraph import SimpleGraph, is_connected
from src.combinatorics.permgroup import Permutation
from src.decomp.direct_sum import DecompositionComponent, SumPermutation, compose_all
from src.errors import GeneratorSetError

log = logging.getLogger(__name__)

SPLIT_LABELS = ("A1", "A2", "A3", "B1", "B2", "B3")
SO4_DIMENSION = 6

# (label, [(coefficient, (i, j)), ...]) for Ω_ij in so(4)
SPLIT_DEFINITIONS = {
    "A1": [("1/2", (2, 3)), ("1/2", (1, 4))],
    "A2": [("1/2", (1, 3)), ("-1/2", (2, 4))],
    "A3": [("1/2", (1, 2)), ("1/2", (3, 4))],
    "B1": [("1/2", (1, 3)), ("1/2", (2, 4))],
    "B2": [("1/2", (1, 4)), ("-1/2", (2, 3))],
    "B3": [("1/2", (1, 2)), ("-1/2", (3, 4))],
}

# index k -> edge (k, k+1) on a triangle, indices mod 3
TRIANGLE_EDGES = {1: (1, 2), 2: (2, 3), 3: (1, 3)}


@dataclass(frozen=True)
class BracketCheck:
    left: str
    right: str
    expected: str
    ok: bool


@dataclass(frozen=True)
class SplitBasisSO4:
    """so(4) = Lie{A1, A2, A3} ⊕ Lie{B1, B2, B3}, two commuting copies of so(3)."""

    elements: tuple[tuple[str, ExactMatrix], ...]

    @classmethod
    def build(cls) -> "SplitBasisSO4":
        elements = tuple(
            (label, linear_combination((coef, omega(4, i, j)) for coef, (i, j) in SPLIT_DEFINITIONS[label]))
            for label in SPLIT_LABELS
        )
        basis = cls(elements)
        failed = [c for c in basis.relation_table() if not c.ok]
        if failed:
            raise RuntimeError(f"Split basis relations fail for {[(c.left, c.right) for c in failed]}")
        return basis

    def matrix(self, label: str) -> ExactMatrix:
        for name, m in self.elements:
            if name == label:
                return m
        raise GeneratorSetError(f"{label!r} is not a split basis label; expected one of {SPLIT_LABELS}")

    def expected_bracket(self, left: str, right: str) -> tuple[int, str | None]:
        """
        [A_i, A_j] = A_k and [B_i, B_j] = B_k for cyclic (i, j, k), reversed
        order flips the sign, mixed pairs commute. Returns (sign, label).
        """
        if left[0] != right[0] or left == right:
            return (0, None)
        i, j = int(left[1]), int(right[1])
        k = 6 - i - j
        sign = 1 if (i, j, k) in {(1, 2, 3), (2, 3, 1), (3, 1, 2)} else -1
        return (sign, f"{left[0]}{k}")

    def relation_table(self) -> list[BracketCheck]:
        checks = []
        for left, right in itertools.combinations(SPLIT_LABELS, 2):
            sign, label = self.expected_bracket(left, right)
            actual = bracket(self.matrix(left), self.matrix(right))
            if label is None:
                expected_text, ok = "0", actual.is_zero()
            else:
                target = self.matrix(label)
                expected_text = label if sign > 0 else f"-{label}"
                ok = actual == (target if sign > 0 else -target)
            checks.append(BracketCheck(left, right, expected_text, ok))
        return checks


@lru_cache(maxsize=1)
def split_basis() -> SplitBasisSO4:
    return SplitBasisSO4.build()


def verify_split_relations() -> bool:
    table = split_basis().relation_table()
    log.info("event=SPLIT_RELATIONS | pairs=%d failed=%d", len(table), sum(not c.ok for c in table))
    return len(table) == 15 and all(c.ok for c in table)


def split_generator_set(labels) -> GeneratorSet:
    basis = split_basis()
    return GeneratorSet(4, tuple((label, basis.matrix(label)) for label in labels), BasisKind.SON_SPLIT)


def split_components() -> tuple[DecompositionComponent, DecompositionComponent]:
    basis = split_basis()
    return tuple(
        DecompositionComponent(
            name=part,
            basis=tuple((f"{part}{k}", basis.matrix(f"{part}{k}")) for k in (1, 2, 3)),
            edges=tuple(TRIANGLE_EDGES[k] for k in (1, 2, 3)),
            vertex_count=3,
        )
        for part in ("A", "B")
    )


def _split_labels(gens: GeneratorSet) -> list[str]:
    gens.require_kind(BasisKind.SON_SPLIT)
    basis = split_basis()
    for label, m in gens.generators:
        if basis.matrix(label) != m:
            raise GeneratorSetError(f"Generator {label!r} does not match the split basis element")
    return list(gens.labels)


def tau_split(gens: GeneratorSet) -> tuple[SimpleGraph, SimpleGraph]:
    """A_i -> v_i v_{i+1}, B_i -> w_i w_{i+1} on two triangles."""
    labels = _split_labels(gens)
    v = SimpleGraph.from_edges(3, [TRIANGLE_EDGES[int(lb[1])] for lb in labels if lb[0] == "A"])
    w = SimpleGraph.from_edges(3, [TRIANGLE_EDGES[int(lb[1])] for lb in labels if lb[0] == "B"])
    return v, w


def split_controllable(gens: GeneratorSet) -> bool:
    v, w = tau_split(gens)
    return is_connected(v) and is_connected(w)


def split_larc_controllable(gens: GeneratorSet) -> bool:
    return larc_controllable(gens, SO4_DIMENSION) if len(gens) else False


def split_iota(labels) -> SumPermutation:
    """A_i -> ((i i+1), e), B_j -> (e, (j j+1)), indices mod 3, composed in order."""
    parts = []
    for label in labels:
        if label not in SPLIT_LABELS:
            raise GeneratorSetError(f"{label!r} is not a split basis label")
        i, j = TRIANGLE_EDGES[int(label[1])]
        t = Permutation.transposition(3, i, j)
        e = Permutation.identity(3)
        parts.append(SumPermutation(t, e) if label[0] == "A" else SumPermutation(e, t))
    return compose_all(parts)


def split_cycle_controllable(gens: GeneratorSet) -> bool:
    """Some subset maps to two 3-cycles; two distinct edges per triangle suffice."""
    labels = _split_labels(gens)
    for size in range(len(labels) + 1):
        for subset in itertools.combinations(labels, size):
            if split_iota(subset).is_maximal_cycle:
                return True
    return False
