# src/analysis/worked_examples.py
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Callable

from colorama import Fore, Style

from src.algebra.lie_core import (
    BasisKind,
    GeneratorSet,
    larc_controllable,
    lie_closure,
    linear_combination,
    omega,
    son_dimension,
)
from src.combinatorics.equivalence import (
    enumerate_cycle_witnesses,
    forest_to_submanifold,
    kirchhoff_tree_count,
    spanning_forest_from_edges,
)
from src.combinatorics.liegraph import components, graph_controllable, tau, triangular_closure
from src.combinatorics.permgroup import TranspositionSequence, format_cycles, iota
from src.decomp.formation import verify_formation_relations
from src.decomp.sl3c import sl3_sweep
from src.decomp.so4_split import SO4_DIMENSION, SPLIT_LABELS, split_generator_set, verify_split_relations

log = logging.getLogger(__name__)


@dataclass
class ExampleCheck:
    name: str
    description: str
    facts: list[tuple[str, bool]] = field(default_factory=list)
    elapsed_ms: float = 0.0

    def expect(self, fact: str, ok: bool) -> None:
        self.facts.append((fact, bool(ok)))

    @property
    def ok(self) -> bool:
        return all(ok for _, ok in self.facts)


def _iota_text(gens: GeneratorSet) -> str:
    return format_cycles(iota(TranspositionSequence.from_generators(gens)))


def two_input_generators(n: int) -> GeneratorSet:
    """C1 = Ω_12 and C2 = Ω_12 + Ω_23 + ... + Ω_{n-1,n} as a raw generator set."""
    if n < 2:
        raise ValueError(f"two-input system needs n >= 2, got {n}")
    chain = linear_combination((1, omega(n, i, i + 1)) for i in range(1, n))
    return GeneratorSet(n, (("C1", omega(n, 1, 2)), ("C2", chain)), BasisKind.RAW)


# ------------------------------------------------------------
# Examples
# ------------------------------------------------------------

def chain_so5(check: ExampleCheck) -> None:
    gens = GeneratorSet.standard(5, [(1, 2), (2, 3), (3, 4), (4, 5)])
    check.expect("Lie rank 10 = dim so(5)", lie_closure(gens).rank == 10)
    check.expect("iota(Γ) = (1 2 3 4 5)", _iota_text(gens) == "(1 2 3 4 5)")
    check.expect("controllable", larc_controllable(gens, 10) and graph_controllable(gens))


def two_blocks_so5(check: ExampleCheck) -> None:
    gens = GeneratorSet.standard(5, [(1, 2), (2, 3), (4, 5)])
    decomposition = forest_to_submanifold(gens)
    check.expect("Lie rank 4", lie_closure(gens).rank == 4)
    check.expect("iota(Γ) = (1 2 3)(4 5)", _iota_text(gens) == "(1 2 3)(4 5)")
    check.expect("orbits {1,2,3}, {4,5}", decomposition.orbits.nontrivial_blocks == ((1, 2, 3), (4, 5)))
    check.expect("uncontrollable", not larc_controllable(gens, 10) and not graph_controllable(gens))


def triangle_with_tail_so4(check: ExampleCheck) -> None:
    gens = GeneratorSet.standard(4, [(1, 2), (2, 3), (1, 3), (3, 4)])
    closed, trace = triangular_closure(tau(gens))
    check.expect("closure reaches K4 in one step", closed.is_complete() and trace.steps == 1)
    check.expect("added edges v1v4, v2v4", trace.added == (frozenset({(1, 4), (2, 4)}),))

    witnesses = enumerate_cycle_witnesses(gens)
    cycles = sorted(format_cycles(w.cycle) for w in witnesses)
    check.expect("three witness subsets", len(witnesses) == 3 == kirchhoff_tree_count(tau(gens)))
    check.expect("witness cycles (1 3 4 2) twice and (1 2 3 4)", cycles == ["(1 2 3 4)", "(1 3 4 2)", "(1 3 4 2)"])
    check.expect("iota(Γ) = (2 3 4)", _iota_text(gens) == "(2 3 4)")


def path_with_isolated_vertex_so5(check: ExampleCheck) -> None:
    gens = GeneratorSet.standard(5, [(1, 2), (2, 3), (3, 4)])
    closed, trace = triangular_closure(tau(gens))
    check.expect("Lie rank 6", lie_closure(gens).rank == 6)
    check.expect("closure stabilizes after two steps", trace.steps == 2)
    check.expect("step 1 adds v1v3, v2v4; step 2 adds v1v4", trace.added == (frozenset({(1, 3), (2, 4)}), frozenset({(1, 4)})))
    check.expect("components {1,2,3,4}, {5}", components(closed) == [(1, 2, 3, 4), (5,)])


def two_triangles_so6(check: ExampleCheck) -> None:
    first = GeneratorSet.standard(6, [(1, 2), (2, 3), (4, 5), (4, 6)])
    second = GeneratorSet.standard(6, [(1, 3), (2, 3), (4, 6), (5, 6)])
    a, b = lie_closure(first), lie_closure(second)
    check.expect("both Lie ranks 6", a.rank == b.rank == 6)
    check.expect("Lie(Γ1) = Lie(Γ2) exactly", a.same_span(b))
    check.expect(
        "components {1,2,3}, {4,5,6}",
        components(tau(first)) == components(tau(second)) == [(1, 2, 3), (4, 5, 6)],
    )


def forest_choice_so6(check: ExampleCheck) -> None:
    gens = GeneratorSet.standard(6, [(1, 2), (1, 4), (2, 3), (2, 4), (3, 4), (5, 6)])
    g = tau(gens)
    xi_1 = forest_to_submanifold(gens, spanning_forest_from_edges(g, [(1, 4), (2, 4), (3, 4), (5, 6)]))
    xi_2 = forest_to_submanifold(gens, spanning_forest_from_edges(g, [(1, 2), (2, 4), (3, 4), (5, 6)]))
    check.expect("iota(Γ) = (1 4)(5 6)", _iota_text(gens) == "(1 4)(5 6)")
    check.expect("iota(Ξ1) = (1 4 3 2)(5 6)", format_cycles(xi_1.permutation) == "(1 4 3 2)(5 6)")
    check.expect("iota(Ξ2) = (1 2 4 3)(5 6)", format_cycles(xi_2.permutation) == "(1 2 4 3)(5 6)")
    check.expect("identical orbits", xi_1.orbits == xi_2.orbits)


def two_input_systems(check: ExampleCheck) -> None:
    for n in range(3, 11):
        gens = two_input_generators(n)
        check.expect(f"n={n}: Lie rank {son_dimension(n)}", larc_controllable(gens, son_dimension(n)))


def split_basis_so4(check: ExampleCheck) -> None:
    check.expect("split bracket relations", verify_split_relations())
    sizes = []
    for mask in range(1 << len(SPLIT_LABELS)):
        labels = [lb for k, lb in enumerate(SPLIT_LABELS) if mask >> k & 1]
        if labels and lie_closure(split_generator_set(labels)).rank == SO4_DIMENSION:
            sizes.append(len(labels))
    check.expect("smallest controllable subset has 4 elements", min(sizes) == 4)


def sl3_counterexample(check: ExampleCheck) -> None:
    report = sl3_sweep()
    names = {r.name for r in report.counterexamples}
    check.expect("{X3, Y3}: six-cycle found but rank < 8", "{X3, Y3}" in names)
    check.expect("every disagreement is a cycle without full rank", all(r.cycle and not r.larc for r in report.counterexamples))


def formation_five_agents(check: ExampleCheck) -> None:
    check.expect("bracket identities for N=5", verify_formation_relations(5))


EXAMPLES: dict[str, tuple[str, Callable[[ExampleCheck], None]]] = {
    "chain_so5": ("Ω_{i,i+1} chain on SO(5)", chain_so5),
    "two_blocks_so5": ("{Ω12, Ω23, Ω45} on SO(5)", two_blocks_so5),
    "triangle_with_tail_so4": ("triangle plus pendant edge on SO(4)", triangle_with_tail_so4),
    "path_with_isolated_vertex_so5": ("path v1..v4 with v5 isolated", path_with_isolated_vertex_so5),
    "two_triangles_so6": ("two generator sets with equal Lie algebras on SO(6)", two_triangles_so6),
    "forest_choice_so6": ("two spanning forests, same orbits", forest_choice_so6),
    "two_input_systems": ("{Ω12, Σ Ω_{i,i+1}} for n = 3..10", two_input_systems),
    "split_basis_so4": ("so(4) split basis", split_basis_so4),
    "sl3_counterexample": ("six-cycle criterion on sl(3,C)", sl3_counterexample),
    "formation_five_agents": ("formation control identities", formation_five_agents),
}


def run_examples(names: list[str] | None = None) -> list[ExampleCheck]:
    selected = names or list(EXAMPLES)
    unknown = [n for n in selected if n not in EXAMPLES]
    if unknown:
        raise ValueError(f"Unknown examples {unknown}; expected some of {list(EXAMPLES)}")

    checks = []
    for name in selected:
        description, fn = EXAMPLES[name]
        check = ExampleCheck(name, description)
        started = time.perf_counter()
        fn(check)
        check.elapsed_ms = (time.perf_counter() - started) * 1000.0
        log.info("event=EXAMPLE | name=%s ok=%s facts=%d elapsed=%.1fms", name, check.ok, len(check.facts), check.elapsed_ms)
        checks.append(check)
    return checks


def render_examples(checks: list[ExampleCheck]) -> str:
    lines = []
    for check in checks:
        color = Fore.GREEN if check.ok else Fore.RED
        lines.append(f"{color}{'PASS' if check.ok else 'FAIL'}{Style.RESET_ALL} {check.name}: {check.description}")
        for fact, ok in check.facts:
            mark = f"{Fore.GREEN}ok{Style.RESET_ALL}" if ok else f"{Fore.RED}failed{Style.RESET_ALL}"
            lines.append(f"    {mark}  {fact}")
    return "\n".join(lines)
