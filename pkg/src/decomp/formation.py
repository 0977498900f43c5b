# src/decomp/formation.py
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import lru_cache

from src.algebra.lie_core import (
    BasisKind,
    ExactMatrix,
    GeneratorSet,
    SpanBasis,
    bracket,
    lie_closure,
    omega,
)
from src.combinatorics.liegraph import SimpleGraph, is_connected
from src.errors import InvalidIndexError

log = logging.getLogger(__name__)

MIN_AGENTS_FULL_CHECK = 5


def _check_agents(N: int, *indices: int) -> None:
    if N < 2:
        raise InvalidIndexError(f"Formation needs at least 2 agents, got N={N}")
    if len(set(indices)) != len(indices):
        raise InvalidIndexError(f"Formation indices must be distinct, got {indices}")
    for x in indices:
        if not 1 <= x <= N:
            raise InvalidIndexError(f"Agent index {x} outside 1..{N}")


def signed_omega(N: int, a: int, b: int) -> ExactMatrix:
    """Ω_ab for any a != b, using Ω_ba = -Ω_ab."""
    return omega(N, a, b) if a < b else -omega(N, b, a)


@lru_cache(maxsize=None)
def formation_a(N: int, i: int, j: int) -> ExactMatrix:
    """A_ij = E_ii + E_jj - E_ij - E_ji."""
    _check_agents(N, i, j)
    return (
        ExactMatrix.unit(N, i, i) + ExactMatrix.unit(N, j, j)
        - ExactMatrix.unit(N, i, j) - ExactMatrix.unit(N, j, i)
    )


@lru_cache(maxsize=None)
def formation_b(N: int, i: int, j: int, k: int) -> ExactMatrix:
    """B_ijk = -(Ω_ij + Ω_jk + Ω_ki)."""
    _check_agents(N, i, j, k)
    return -(signed_omega(N, i, j) + signed_omega(N, j, k) + signed_omega(N, k, i))


def a_label(i: int, j: int) -> str:
    return f"A({min(i, j)},{max(i, j)})"


@dataclass(frozen=True)
class FormationGenerators:
    coupling: SimpleGraph
    generators: GeneratorSet = field(init=False)

    def __post_init__(self):
        N = self.coupling.n
        if N < 2:
            raise InvalidIndexError(f"Formation needs at least 2 agents, got N={N}")
        gens = tuple((a_label(i, j), formation_a(N, i, j)) for i, j in self.coupling.edge_list())
        for label, m in gens:
            if not m.is_symmetric():
                raise RuntimeError(f"{label} is not symmetric")
            if any(sum(row, m.domain.zero) != m.domain.zero for row in m.rows):
                raise RuntimeError(f"{label} has a nonzero row sum")
        object.__setattr__(self, "generators", GeneratorSet(N, gens, BasisKind.FORMATION))

    @property
    def N(self) -> int:
        return self.coupling.n


@lru_cache(maxsize=16)
def full_formation_rank(N: int) -> int:
    """dim Lie{A_ij : all i < j}, computed by the closure oracle."""
    rank = lie_closure(FormationGenerators(SimpleGraph.complete(N)).generators).rank
    log.info("event=FORMATION_FULL_RANK | N=%d rank=%d", N, rank)
    return rank


def formation_oracle_rank(coupling: SimpleGraph) -> int:
    gens = FormationGenerators(coupling).generators
    return lie_closure(gens).rank if len(gens) else 0


def formation_controllable(coupling: SimpleGraph) -> bool:
    """Formation control is governed by connectivity of the coupling graph."""
    if coupling.n < 2:
        raise InvalidIndexError(f"Formation needs at least 2 agents, got N={coupling.n}")
    return is_connected(coupling)


@dataclass(frozen=True)
class FormationCheck:
    connected: bool
    oracle_rank: int
    full_rank: int

    @property
    def oracle_controllable(self) -> bool:
        return self.oracle_rank == self.full_rank

    @property
    def agree(self) -> bool:
        return self.connected == self.oracle_controllable


def formation_cross_check(coupling: SimpleGraph) -> FormationCheck:
    return FormationCheck(
        connected=formation_controllable(coupling),
        oracle_rank=formation_oracle_rank(coupling),
        full_rank=full_formation_rank(coupling.n),
    )


# ------------------------------------------------------------
# Bracket identities
# ------------------------------------------------------------

@dataclass(frozen=True)
class FormationRelationReport:
    N: int
    checked: int
    failures: tuple[str, ...]
    partial: bool

    @property
    def ok(self) -> bool:
        return not self.failures


def formation_relation_report(N: int) -> FormationRelationReport:
    """
    Instantiates, over all distinct index tuples:
      [A_ij, A_jk] = B_ijk
      [B_ijk, A_ij] = 2(A_ik - A_jk)
      [B_ijk, A_il] = -A_ij + A_jl + A_ik - A_kl
      [B_ijk, B_ijl] = B_ikl + B_jkl
      [B_ijk, B_ilm] = B_jlm + B_kml = B_lkj + B_mjk
    Identities needing more than N indices are skipped and the report is
    flagged partial.
    """
    if N < 2:
        raise InvalidIndexError(f"Formation needs at least 2 agents, got N={N}")

    def A(i: int, j: int) -> ExactMatrix:
        return formation_a(N, i, j)

    def B(i: int, j: int, k: int) -> ExactMatrix:
        return formation_b(N, i, j, k)

    agents = range(1, N + 1)
    checked = 0
    failures: list[str] = []

    def check(name: str, lhs: ExactMatrix, *rhs: ExactMatrix) -> None:
        nonlocal checked
        checked += 1
        for r in rhs:
            if lhs != r:
                failures.append(name)
                return

    for i, j, k in itertools.permutations(agents, 3):
        check(f"[A{i}{j},A{j}{k}]=B{i}{j}{k}", bracket(A(i, j), A(j, k)), B(i, j, k))
        check(f"[B{i}{j}{k},A{i}{j}]=2(A{i}{k}-A{j}{k})", bracket(B(i, j, k), A(i, j)), (A(i, k) - A(j, k)).scale(2))

    for i, j, k, l in itertools.permutations(agents, 4):
        check(
            f"[B{i}{j}{k},A{i}{l}]",
            bracket(B(i, j, k), A(i, l)),
            -A(i, j) + A(j, l) + A(i, k) - A(k, l),
        )
        check(f"[B{i}{j}{k},B{i}{j}{l}]", bracket(B(i, j, k), B(i, j, l)), B(i, k, l) + B(j, k, l))

    for i, j, k, l, m in itertools.permutations(agents, 5):
        check(
            f"[B{i}{j}{k},B{i}{l}{m}]",
            bracket(B(i, j, k), B(i, l, m)),
            B(j, l, m) + B(k, m, l),
            B(l, k, j) + B(m, j, k),
        )

    partial = N < MIN_AGENTS_FULL_CHECK
    log.info("event=FORMATION_RELATIONS | N=%d checked=%d failed=%d partial=%s", N, checked, len(failures), partial)
    return FormationRelationReport(N, checked, tuple(failures), partial)


def verify_formation_relations(N: int) -> bool:
    """True iff every instantiated identity holds; see formation_relation_report for the partial flag."""
    return formation_relation_report(N).ok


def grading_holds(N: int) -> bool:
    """[A, A] ⊆ span{B}, [A, B] ⊆ span{A}, [B, B] ⊆ span{B}."""
    a_elems = [formation_a(N, i, j) for i, j in itertools.combinations(range(1, N + 1), 2)]
    b_elems = [formation_b(N, i, j, k) for i, j, k in itertools.combinations(range(1, N + 1), 3)]
    a_span = SpanBasis.from_matrices(a_elems)
    if not b_elems:
        return all(bracket(x, y).is_zero() for x, y in itertools.combinations(a_elems, 2))
    b_span = SpanBasis.from_matrices(b_elems)
    return (
        all(b_span.contains(bracket(x, y)) for x, y in itertools.combinations(a_elems, 2))
        and all(a_span.contains(bracket(x, y)) for x in a_elems for y in b_elems)
        and all(b_span.contains(bracket(x, y)) for x, y in itertools.combinations(b_elems, 2))
    )
