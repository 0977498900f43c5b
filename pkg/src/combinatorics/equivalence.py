# src/combinatorics/equivalence.py
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Iterable

import networkx as nx

from src.algebra.lie_core import GeneratorSet, StandardBasisIndex, exact_determinant, lie_closure
from src.combinatorics.liegraph import (
    Edge,
    SimpleGraph,
    components,
    forest_edges,
    is_connected,
    tau,
)
from src.combinatorics.permgroup import (
    OrbitPartition,
    Permutation,
    TranspositionSequence,
    iota,
    is_n_cycle,
)
from src.errors import GeneratorSetError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SpanningForest:
    """
    One spanning tree per connected component of `parent`.

    trees[k] lives on vertex set component_vertices[k]; singleton components
    carry a tree with no edges.
    """

    parent: SimpleGraph
    component_vertices: tuple[tuple[int, ...], ...]
    trees: tuple[SimpleGraph, ...]

    def __post_init__(self):
        if len(self.component_vertices) != len(self.trees):
            raise ValueError("Every component needs exactly one tree")
        covered = sorted(v for c in self.component_vertices for v in c)
        if covered != list(range(1, self.parent.n + 1)):
            raise ValueError(f"Forest components {self.component_vertices} do not cover 1..{self.parent.n}")
        for vertices, tree in zip(self.component_vertices, self.trees):
            if not tree.edges <= self.parent.edges:
                raise ValueError(f"Tree edges {sorted(tree.edges - self.parent.edges)} are not in the parent graph")
            if len(tree.edges) != len(vertices) - 1:
                raise ValueError(f"Tree on {vertices} has {len(tree.edges)} edges, expected {len(vertices) - 1}")
            if tree.edges:
                t = nx.Graph(tree.edge_list())
                if set(t.nodes) != set(vertices) or not nx.is_tree(t):
                    raise ValueError(f"Edges {tree.edge_list()} are not a spanning tree of {vertices}")

    @property
    def edges(self) -> list[Edge]:
        return sorted(e for t in self.trees for e in t.edges)


def spanning_forest_from_edges(parent: SimpleGraph, edges: Iterable[Edge]) -> SpanningForest:
    """Groups a chosen acyclic edge set by the parent's components (validated)."""
    chosen = SimpleGraph.from_edges(parent.n, edges)
    comps = components(parent)
    trees = tuple(
        SimpleGraph(parent.n, frozenset(e for e in chosen.edges if e[0] in comp))
        for comp in comps
    )
    return SpanningForest(parent, tuple(comps), trees)


def spanning_forest(g: SimpleGraph) -> SpanningForest:
    return spanning_forest_from_edges(g, forest_edges(g))


def tree_to_cycle(t: SimpleGraph) -> Permutation:
    """
    ι of the tree's transpositions (edges in lexicographic order). Any
    ordering gives a cycle on the tree's vertices; this one is canonical.
    """
    if not t.edges:
        raise ValueError("tree_to_cycle needs a tree with at least one edge")
    shape = nx.Graph(t.edge_list())
    if not nx.is_tree(shape):
        raise ValueError(f"Edges {t.edge_list()} do not form a tree")

    perm = iota(TranspositionSequence(t.n, tuple(t.edge_list())))
    cycles = perm.cycles()
    if len(cycles) != 1 or set(cycles[0]) != set(shape.nodes):
        raise RuntimeError(f"Tree {t.edge_list()} mapped to {perm}, not a cycle on its vertices")
    return perm


# ------------------------------------------------------------
# Spanning tree enumeration
# ------------------------------------------------------------

def spanning_trees(g: SimpleGraph, limit: int | None = None) -> list[tuple[Edge, ...]]:
    """
    Spanning trees of a connected graph, each as a sorted edge tuple, in
    lexicographic order. Backtracking over sorted edges: include an edge
    unless it closes a cycle, exclude it unless it is a bridge of what
    remains. Include-first search yields trees already sorted, so `limit`
    returns the first trees without enumerating the rest.
    """
    if not is_connected(g):
        return []
    target = g.n - 1
    if target == 0:
        return [()]

    edges = g.edge_list()
    found: list[tuple[Edge, ...]] = []

    def available_connected(included: list[Edge], rest: list[Edge]) -> bool:
        h = nx.Graph()
        h.add_nodes_from(range(1, g.n + 1))
        h.add_edges_from(included)
        h.add_edges_from(rest)
        return nx.is_connected(h)

    def closes_cycle(included: list[Edge], edge: Edge) -> bool:
        h = nx.Graph(included)
        a, b = edge
        return h.has_node(a) and h.has_node(b) and nx.has_path(h, a, b)

    def extend(included: list[Edge], position: int) -> None:
        if limit is not None and len(found) >= limit:
            return
        if len(included) == target:
            found.append(tuple(included))
            return
        if position == len(edges) or len(included) + len(edges) - position < target:
            return
        edge = edges[position]
        if not closes_cycle(included, edge):
            extend(included + [edge], position + 1)
        rest = edges[position + 1:]
        if available_connected(included, rest):
            extend(included, position + 1)

    extend([], 0)
    return found


def kirchhoff_tree_count(g: SimpleGraph) -> int:
    """Matrix-tree theorem: any cofactor of the Laplacian, computed exactly."""
    if g.n == 1:
        return 1
    degree = {v: 0 for v in range(1, g.n + 1)}
    for i, j in g.edges:
        degree[i] += 1
        degree[j] += 1
    laplacian = [[0] * g.n for _ in range(g.n)]
    for v in range(1, g.n + 1):
        laplacian[v - 1][v - 1] = degree[v]
    for i, j in g.edges:
        laplacian[i - 1][j - 1] = -1
        laplacian[j - 1][i - 1] = -1
    reduced = [row[1:] for row in laplacian[1:]]
    return int(exact_determinant(reduced))


def all_spanning_forests(g: SimpleGraph) -> list[SpanningForest]:
    per_component = []
    for comp in components(g):
        sub = SimpleGraph(g.n, frozenset(e for e in g.edges if e[0] in comp))
        if len(comp) == 1:
            per_component.append([()])
            continue
        relabel = {v: k + 1 for k, v in enumerate(comp)}
        back = {k: v for v, k in relabel.items()}
        local = SimpleGraph.from_edges(len(comp), [(relabel[a], relabel[b]) for a, b in sub.edges])
        per_component.append([
            tuple((back[a], back[b]) for a, b in tree) for tree in spanning_trees(local)
        ])
    return [
        spanning_forest_from_edges(g, [e for part in choice for e in part])
        for choice in itertools.product(*per_component)
    ]


# ------------------------------------------------------------
# Witnesses and submanifolds
# ------------------------------------------------------------

@dataclass(frozen=True)
class CycleWitness:
    labels: tuple[str, ...]
    cycle: Permutation


def _label_lookup(gens: GeneratorSet) -> dict[Edge, str]:
    return {idx.as_pair(): label for label, idx in zip(gens.labels, gens.standard_indices())}


def enumerate_cycle_witnesses(gens: GeneratorSet, limit: int | None = None) -> list[CycleWitness]:
    """
    Subsets Σ ⊆ Γ of size n-1 whose ι is an n-cycle: exactly the spanning
    trees of τ(Γ). Labels follow Γ's order.
    """
    g = tau(gens)
    lookup = _label_lookup(gens)
    order = {label: k for k, label in enumerate(gens.labels)}

    witnesses = []
    for tree in spanning_trees(g, limit=limit):
        labels = tuple(sorted((lookup[e] for e in tree), key=order.__getitem__))
        witnesses.append(CycleWitness(labels, tree_to_cycle(SimpleGraph(g.n, frozenset(tree)))))
    log.debug("cycle witnesses=%d n=%d", len(witnesses), g.n)
    return witnesses


@dataclass(frozen=True)
class SubmanifoldDecomposition:
    """Lie(Γ) = ⊕_k span{Ω_ij : i, j ∈ O_k}."""

    forest: SpanningForest
    xi_labels: tuple[str, ...]
    permutation: Permutation
    orbits: OrbitPartition
    summands: tuple[tuple[StandardBasisIndex, ...], ...]

    @property
    def dimension(self) -> int:
        return self.orbits.lie_dimension

    def describe(self) -> str:
        if not self.summands:
            return "{0}"
        parts = []
        for block in self.orbits.nontrivial_blocks:
            parts.append("so(" + ",".join(str(v) for v in block) + ")")
        return " + ".join(parts)


def forest_to_submanifold(gens: GeneratorSet, forest: SpanningForest | None = None, verify: bool = True) -> SubmanifoldDecomposition:
    """
    Ξ = τ⁻¹(spanning forest) and the orbits of ι(Ξ). With `verify`, the
    implied dimension is compared with the Lie closure rank.
    """
    g = tau(gens)
    if forest is None:
        forest = spanning_forest(g)
    elif forest.parent != g:
        raise GeneratorSetError("Spanning forest does not belong to the graph of this generator set")

    lookup = _label_lookup(gens)
    order = {label: k for k, label in enumerate(gens.labels)}
    xi = tuple(sorted((lookup[e] for e in forest.edges), key=order.__getitem__))
    edge_of = {label: e for e, label in lookup.items()}

    perm = iota(TranspositionSequence(g.n, tuple(edge_of[label] for label in xi)))
    orbits = OrbitPartition.from_permutation(perm)
    summands = tuple(
        tuple(StandardBasisIndex(a, b) for a, b in itertools.combinations(block, 2))
        for block in orbits.nontrivial_blocks
    )
    decomposition = SubmanifoldDecomposition(forest, xi, perm, orbits, summands)

    if verify and len(gens) > 0:
        rank = lie_closure(gens).rank
        if rank != decomposition.dimension:
            raise RuntimeError(
                f"Orbit dimension {decomposition.dimension} differs from Lie closure rank {rank} for {gens.labels}"
            )
    return decomposition


# ------------------------------------------------------------
# Minimality notions, brute force
# ------------------------------------------------------------

def minimal_generating_subsets(gens: GeneratorSet) -> list[tuple[str, ...]]:
    """
    Ξ ⊆ Γ with Lie(Ξ) = Lie(Γ) such that dropping any single member shrinks
    the Lie algebra. Exponential; small inputs only.
    """
    if len(gens) == 0:
        return [()]
    target = lie_closure(gens)
    rank_cache: dict[int, int] = {0: 0}

    def rank_of(mask: int) -> int:
        if mask not in rank_cache:
            rank_cache[mask] = lie_closure(gens.by_mask(mask)).rank
        return rank_cache[mask]

    found = []
    full = len(gens)
    for mask in range(1, 1 << full):
        if rank_of(mask) != target.rank:
            continue
        if all(rank_of(mask & ~(1 << k)) < target.rank for k in range(full) if mask >> k & 1):
            found.append(gens.by_mask(mask).labels)
    return sorted(found, key=lambda labels: (len(labels), labels))


def minimal_cycle_subsets(gens: GeneratorSet) -> list[tuple[str, ...]]:
    """
    Σ ⊆ Γ such that some ordering of Σ maps to an n-cycle under ι and no
    proper subset does. Exponential; small inputs only.
    """
    n = gens.dim
    pairs = list(zip(gens.labels, gens.standard_indices()))

    def reaches_cycle(subset) -> bool:
        return any(
            is_n_cycle(iota(TranspositionSequence.from_indices(n, [idx for _, idx in ordering])))
            for ordering in itertools.permutations(subset)
        )

    hits: list[tuple[str, ...]] = []
    for size in range(0, len(pairs) + 1):
        for subset in itertools.combinations(pairs, size):
            labels = tuple(label for label, _ in subset)
            if any(set(h) < set(labels) for h in hits):
                continue
            if reaches_cycle(subset):
                hits.append(labels)
    return sorted(hits, key=lambda labels: (len(labels), labels))
