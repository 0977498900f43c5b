# src/decomp/direct_sum.py
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Iterable, Sequence

from src.algebra.lie_core import (
    ExactMatrix,
    GeneratorSet,
    SpanBasis,
    bracket,
    lie_closure,
    omega,
    standard_indices,
)
from src.combinatorics.liegraph import SimpleGraph, is_connected
from src.combinatorics.permgroup import Permutation, compose, format_cycles
from src.errors import DecompositionError, GeneratorSetError

log = logging.getLogger(__name__)


# ------------------------------------------------------------
# Direct sums of symmetric groups
# ------------------------------------------------------------

@dataclass(frozen=True)
class SumPermutation:
    """(σ1, σ2) in S_k ⊕ S_k, composed slot by slot."""

    first: Permutation
    second: Permutation

    @classmethod
    def identity(cls, n: int = 3) -> "SumPermutation":
        return cls(Permutation.identity(n), Permutation.identity(n))

    def compose(self, other: "SumPermutation") -> "SumPermutation":
        return SumPermutation(compose(self.first, other.first), compose(self.second, other.second))

    @staticmethod
    def _component_cycle_length(p: Permutation) -> int | None:
        cycles = p.cycles()
        return len(cycles[0]) if len(cycles) == 1 else None

    @property
    def is_cycle(self) -> bool:
        """Both slots are single cycles."""
        return (
            self._component_cycle_length(self.first) is not None
            and self._component_cycle_length(self.second) is not None
        )

    @property
    def length(self) -> int | None:
        """Sum of the slot cycle lengths; None unless is_cycle."""
        if not self.is_cycle:
            return None
        return self._component_cycle_length(self.first) + self._component_cycle_length(self.second)

    @property
    def is_maximal_cycle(self) -> bool:
        return self.length == self.first.n + self.second.n

    def __str__(self) -> str:
        return f"({format_cycles(self.first)}, {format_cycles(self.second)})"


def compose_all(parts: Iterable[SumPermutation], n: int = 3) -> SumPermutation:
    result = SumPermutation.identity(n)
    for p in parts:
        result = result.compose(p)
    return result


# ------------------------------------------------------------
# Non-intertwining decompositions
# ------------------------------------------------------------

@dataclass(frozen=True)
class DecompositionComponent:
    """
    Basis of one summand g_i with its graph map: each basis label is sent
    to an edge of a graph on `vertex_count` vertices.
    """

    name: str
    basis: tuple[tuple[str, ExactMatrix], ...]
    edges: tuple[tuple[int, int], ...]
    vertex_count: int

    def __post_init__(self):
        if len(self.basis) != len(self.edges):
            raise DecompositionError(f"Component {self.name!r}: every basis element needs one edge")
        if len(set(self.edges)) != len(self.edges):
            raise DecompositionError(f"Component {self.name!r}: graph map is not injective")
        SimpleGraph.from_edges(self.vertex_count, self.edges)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.basis)

    def edge_of(self, label: str) -> tuple[int, int]:
        return self.edges[self.labels.index(label)]

    def matrix_of(self, label: str) -> ExactMatrix:
        return self.basis[self.labels.index(label)][1]

    def graph(self, labels: Iterable[str]) -> SimpleGraph:
        return SimpleGraph.from_edges(self.vertex_count, [self.edge_of(label) for label in labels])


def standard_component(n: int, name: str = "so") -> DecompositionComponent:
    """so(n) itself as a single summand with the Ω_ij -> v_i v_j map."""
    indices = standard_indices(n)
    return DecompositionComponent(
        name=name,
        basis=tuple((idx.label, omega(n, idx.i, idx.j)) for idx in indices),
        edges=tuple(idx.as_pair() for idx in indices),
        vertex_count=n,
    )


def verify_decomposition(components: Sequence[DecompositionComponent]) -> None:
    """Raises DecompositionError unless the bases are independent and every cross bracket vanishes."""
    all_matrices = [m for c in components for _, m in c.basis]
    if not all_matrices:
        raise DecompositionError("Decomposition has no basis elements")
    span = SpanBasis.from_matrices(all_matrices)
    if span.rank != len(all_matrices):
        raise DecompositionError("Component bases are not jointly independent; the sum is not direct")

    for first, second in itertools.combinations(components, 2):
        for la, ma in first.basis:
            for lb, mb in second.basis:
                if not bracket(ma, mb).is_zero():
                    raise DecompositionError(
                        f"[{la}, {lb}] != 0 across components {first.name!r} and {second.name!r}"
                    )


def non_intertwining_controllable(components: Sequence[DecompositionComponent], gens: GeneratorSet) -> bool:
    """
    Controllable iff, for every summand, the graph of the generators drawn
    from that summand is connected.
    """
    verify_decomposition(components)

    owned: list[list[str]] = [[] for _ in components]
    for label, m in gens.generators:
        owner = None
        for k, comp in enumerate(components):
            if label in comp.labels and comp.matrix_of(label) == m:
                owner = k
                break
        if owner is None:
            raise GeneratorSetError(f"Generator {label!r} is not a basis element of any declared component")
        owned[owner].append(label)

    verdicts = []
    for comp, labels in zip(components, owned):
        connected = is_connected(comp.graph(labels))
        log.debug("component=%s generators=%s connected=%s", comp.name, labels, connected)
        verdicts.append(connected)
    return all(verdicts)


def graph_map_is_faithful(component: DecompositionComponent) -> bool:
    """
    Brute force over every subset Σ of the component basis:
    Lie(Σ) is the whole summand iff its graph is connected.
    """
    full_rank = SpanBasis.from_matrices([m for _, m in component.basis]).rank
    dim = component.basis[0][1].dim
    for mask in range(1, 1 << len(component.basis)):
        chosen = [g for k, g in enumerate(component.basis) if mask >> k & 1]
        rank = lie_closure(GeneratorSet(dim, tuple(chosen))).rank
        if (rank == full_rank) != is_connected(component.graph(label for label, _ in chosen)):
            return False
    return True
