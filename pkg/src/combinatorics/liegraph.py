# src/combinatorics/liegraph.py
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable

import networkx as nx
from networkx.utils import UnionFind

from src.algebra.lie_core import (
    BasisKind,
    GeneratorSet,
    SpanBasis,
    bracket_chain,
    lie_closure,
    son_dimension,
)
from src.errors import GeneratorSetError, InvalidIndexError

log = logging.getLogger(__name__)

Edge = tuple[int, int]


@dataclass(frozen=True)
class SimpleGraph:
    """Undirected simple graph on vertices 1..n; edges stored as (i, j) with i < j."""

    n: int
    edges: frozenset[Edge]

    def __post_init__(self):
        if self.n < 1:
            raise InvalidIndexError(f"Graph needs at least one vertex, got n={self.n}")
        for i, j in self.edges:
            if not (1 <= i < j <= self.n):
                raise InvalidIndexError(f"Edge ({i},{j}) invalid on {self.n} vertices (loops and reversed pairs are rejected)")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Iterable[int]]) -> "SimpleGraph":
        normalized = set()
        for e in edges:
            a, b = tuple(e)
            if a == b:
                raise InvalidIndexError(f"Loop at vertex {a} is not allowed")
            normalized.add((min(a, b), max(a, b)))
        return cls(n, frozenset(normalized))

    @classmethod
    def empty(cls, n: int) -> "SimpleGraph":
        return cls(n, frozenset())

    @classmethod
    def complete(cls, n: int) -> "SimpleGraph":
        return cls(n, frozenset((i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)))

    @classmethod
    def path(cls, n: int, vertices: Iterable[int] | None = None) -> "SimpleGraph":
        seq = list(vertices) if vertices is not None else list(range(1, n + 1))
        return cls.from_edges(n, zip(seq, seq[1:]))

    def edge_list(self) -> list[Edge]:
        return sorted(self.edges)

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(1, self.n + 1))
        g.add_edges_from(self.edge_list())
        return g

    def adjacency(self) -> dict[int, set[int]]:
        adj: dict[int, set[int]] = {v: set() for v in range(1, self.n + 1)}
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        return adj

    def is_complete(self) -> bool:
        return len(self.edges) == son_dimension(self.n)

    def __len__(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class ClosureTrace:
    """
    G^0 ⊆ G^1 ⊆ ... ⊆ G^m with G^m = G^{m+1}.

    added[k] holds the edges that appear in chain[k + 1].
    """

    chain: tuple[SimpleGraph, ...]
    added: tuple[frozenset[Edge], ...]

    @property
    def steps(self) -> int:
        return len(self.chain) - 1

    def step_of(self, edge: Edge) -> int:
        """0 for base edges, k for edges added at step k."""
        for k, edges in enumerate(self.added, start=1):
            if edge in edges:
                return k
        if edge in self.chain[0].edges:
            return 0
        raise KeyError(edge)


def _require_standard(gens: GeneratorSet) -> None:
    if gens.basis_kind != BasisKind.STANDARD_SON:
        raise GeneratorSetError(f"Graph map needs standard basis generators, got {gens.basis_kind.value}")


def tau(gens: GeneratorSet) -> SimpleGraph:
    _require_standard(gens)
    return SimpleGraph(gens.dim, frozenset(idx.as_pair() for idx in gens.standard_indices()))


def tau_inverse(g: SimpleGraph) -> GeneratorSet:
    return GeneratorSet.standard(g.n, g.edge_list())


def triangular_closure(g: SimpleGraph) -> tuple[SimpleGraph, ClosureTrace]:
    """
    v_i v_j enters E^{m+1} when it is in E^m or v_i v_k, v_k v_j are in E^m.

    Semi-naive: a pair new at step m+1 needs at least one of its two
    supporting edges to be new at step m, so only frontier edges are expanded.
    """
    adj = g.adjacency()
    current = set(g.edges)
    frontier = set(g.edges)
    chain = [g]
    added_steps: list[frozenset[Edge]] = []

    while frontier:
        candidates: set[Edge] = set()
        for a, b in frontier:
            for c in adj[a]:
                if c != b:
                    candidates.add((min(b, c), max(b, c)))
            for c in adj[b]:
                if c != a:
                    candidates.add((min(a, c), max(a, c)))
        new_edges = frozenset(candidates - current)
        if not new_edges:
            break
        for i, j in new_edges:
            adj[i].add(j)
            adj[j].add(i)
        current |= new_edges
        added_steps.append(new_edges)
        chain.append(SimpleGraph(g.n, frozenset(current)))
        log.debug("triangular closure step=%d added=%s", len(added_steps), sorted(new_edges))
        frontier = set(new_edges)

    return chain[-1], ClosureTrace(tuple(chain), tuple(added_steps))


def components(g: SimpleGraph) -> list[tuple[int, ...]]:
    """Connected components (singletons included), sorted by smallest vertex."""
    return sorted(tuple(sorted(c)) for c in nx.connected_components(g.to_networkx()))


def nontrivial_components(g: SimpleGraph) -> list[tuple[int, ...]]:
    return [c for c in components(g) if len(c) >= 2]


def forest_edges(g: SimpleGraph) -> list[Edge]:
    """Kruskal over lexicographically sorted edges: the lexicographically smallest spanning forest."""
    uf = UnionFind(range(1, g.n + 1))
    chosen = []
    for i, j in g.edge_list():
        if uf[i] != uf[j]:
            uf.union(i, j)
            chosen.append((i, j))
    return chosen


def is_connected(g: SimpleGraph) -> bool:
    return nx.is_connected(g.to_networkx())


def graph_controllable(gens: GeneratorSet) -> bool:
    """Controllable on SO(n) iff τ(Γ) is connected."""
    return is_connected(tau(gens))


def closure_controllable(gens: GeneratorSet) -> bool:
    """Controllable on SO(n) iff the triangular closure of τ(Γ) is K_n."""
    closed, _ = triangular_closure(tau(gens))
    return closed.is_complete()


def closure_equals_lie_span_check(gens: GeneratorSet) -> bool:
    """span τ⁻¹(closure of τ(Γ)) == Lie(Γ)."""
    g = tau(gens)
    closed, _ = triangular_closure(g)
    if not closed.edges:
        # an edgeless graph only comes from the empty set, whose Lie algebra is {0}
        return len(gens) == 0
    closure_span = SpanBasis.from_matrices(tau_inverse(closed).matrices)
    return closure_span.same_span(lie_closure(gens))


def bracket_chain_matches_closure(gens: GeneratorSet) -> bool:
    """G^m == τ(Γ^m) at every step m."""
    _require_standard(gens)
    if len(gens) == 0:
        return True
    _, trace = triangular_closure(tau(gens))
    chain = bracket_chain(gens)
    if len(chain) != len(trace.chain):
        log.debug("chain lengths differ: brackets=%d closure=%d", len(chain), len(trace.chain))
        return False
    for graded, graph in zip(chain, trace.chain):
        if {idx.as_pair() for idx in graded} != set(graph.edges):
            return False
    return True


def min_inputs_check(gens: GeneratorSet) -> bool:
    """A controllable Γ has at least n-1 members (m >= n-2 controls plus drift)."""
    if not graph_controllable(gens):
        return True
    return len(gens) >= gens.dim - 1
