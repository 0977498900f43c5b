from __future__ import annotations

import itertools

import pytest

from src.algebra.lie_core import ExactMatrix, GeneratorSet, bracket, omega
from src.combinatorics.permgroup import Permutation
from src.decomp.direct_sum import (
    DecompositionComponent,
    SumPermutation,
    compose_all,
    graph_map_is_faithful,
    non_intertwining_controllable,
    standard_component,
    verify_decomposition,
)
from src.decomp.formation import (
    FormationGenerators,
    formation_a,
    formation_b,
    formation_controllable,
    formation_cross_check,
    formation_relation_report,
    full_formation_rank,
    grading_holds,
    verify_formation_relations,
)
from src.decomp.sl3c import (
    SL3_LABELS,
    sl3_cycle_controllable,
    sl3_cycle_controllable_bruteforce,
    sl3_generator_set,
    sl3_iota,
    sl3_larc_controllable,
    sl3_sweep,
)
from src.decomp.so4_split import (
    SPLIT_LABELS,
    split_basis,
    split_components,
    split_controllable,
    split_cycle_controllable,
    split_generator_set,
    split_iota,
    split_larc_controllable,
    tau_split,
    verify_split_relations,
)
from src.combinatorics.liegraph import SimpleGraph
from src.errors import DecompositionError, GeneratorSetError, InvalidIndexError


def _split_subsets():
    for mask in range(1 << len(SPLIT_LABELS)):
        yield [lb for k, lb in enumerate(SPLIT_LABELS) if mask >> k & 1]


# ------------------------------------------------------------
# so(4) split basis
# ------------------------------------------------------------

def test_split_relation_table():
    assert verify_split_relations()
    table = split_basis().relation_table()
    assert len(table) == 15
    expected = {(c.left, c.right): c.expected for c in table}
    assert expected[("A1", "A2")] == "A3"
    assert expected[("A1", "A3")] == "-A2"
    assert expected[("A2", "B1")] == "0"


def test_split_elements_are_skew_and_commute_across():
    basis = split_basis()
    for label in SPLIT_LABELS:
        assert basis.matrix(label).is_skew_symmetric()
    for a, b in itertools.product("123", repeat=2):
        assert bracket(basis.matrix(f"A{a}"), basis.matrix(f"B{b}")).is_zero()


def test_split_components_are_a_direct_sum():
    verify_decomposition(split_components())
    assert all(graph_map_is_faithful(c) for c in split_components())


def test_split_graph_test_agrees_with_rank_oracle():
    for labels in _split_subsets():
        gens = split_generator_set(labels)
        assert split_controllable(gens) == split_larc_controllable(gens)
        assert split_cycle_controllable(gens) == split_controllable(gens)
        assert non_intertwining_controllable(split_components(), gens) == split_controllable(gens)


def test_split_minimum_controllable_size_is_four():
    sizes = [len(labels) for labels in _split_subsets() if split_larc_controllable(split_generator_set(labels))]
    assert min(sizes) == 4
    assert split_controllable(split_generator_set(["A1", "A2", "B2", "B3"]))
    assert not split_controllable(split_generator_set(["A1", "A2", "A3", "B1"]))


def test_tau_split_and_iota():
    v, w = tau_split(split_generator_set(["A1", "A3", "B2"]))
    assert v.edge_list() == [(1, 2), (1, 3)]
    assert w.edge_list() == [(2, 3)]
    assert str(split_iota(["A1", "A2", "B1", "B2"])) == "((1 2 3), (1 2 3))"
    assert split_iota(["A1", "A2", "B1", "B2"]).is_maximal_cycle
    with pytest.raises(GeneratorSetError):
        split_iota(["C1"])


def test_split_generator_set_rejects_unknown_labels():
    with pytest.raises(GeneratorSetError):
        split_generator_set(["A4"])


# ------------------------------------------------------------
# Direct sums
# ------------------------------------------------------------

def test_sum_permutation_composition():
    t12 = Permutation.transposition(3, 1, 2)
    t23 = Permutation.transposition(3, 2, 3)
    e = Permutation.identity(3)
    total = compose_all([SumPermutation(t12, e), SumPermutation(e, t23), SumPermutation(t23, t12)])
    assert str(total) == "((1 2 3), (1 3 2))"
    assert total.length == 6
    assert not SumPermutation(t12, e).is_cycle


def test_verify_decomposition_rejects_intertwined_summands():
    overlapping = DecompositionComponent("x", (("a", omega(3, 1, 2)), ("b", omega(3, 2, 3))), ((1, 2), (2, 3)), 3)
    other = DecompositionComponent("y", (("c", omega(3, 1, 3)),), ((1, 2),), 2)
    with pytest.raises(DecompositionError):
        verify_decomposition([overlapping, other])


def test_component_graph_map_must_be_injective():
    with pytest.raises(DecompositionError):
        DecompositionComponent("x", (("a", omega(3, 1, 2)), ("b", omega(3, 2, 3))), ((1, 2), (1, 2)), 3)


def test_standard_component_recovers_graph_verdict(chain_so5, two_blocks_so5):
    component = standard_component(5)
    assert non_intertwining_controllable([component], chain_so5)
    assert not non_intertwining_controllable([component], two_blocks_so5)


def test_generator_outside_every_component_is_rejected():
    stray = GeneratorSet(5, (("m", ExactMatrix.unit(5, 1, 1)),))
    with pytest.raises(GeneratorSetError):
        non_intertwining_controllable([standard_component(5)], stray)


# ------------------------------------------------------------
# sl(3, C)
# ------------------------------------------------------------

def test_sl3_six_cycle_orderings():
    assert sl3_iota(["X1", "Y1", "X2", "Y2"]).is_maximal_cycle
    assert not sl3_iota(["X1", "X2"]).is_maximal_cycle
    assert sl3_iota(["H1", "H2"]) == SumPermutation.identity(3)


def test_sl3_fast_cycle_test_matches_bruteforce():
    for mask in range(1 << len(SL3_LABELS)):
        gens = sl3_generator_set([lb for k, lb in enumerate(SL3_LABELS) if mask >> k & 1])
        assert sl3_cycle_controllable(gens) == sl3_cycle_controllable_bruteforce(gens)


def test_sl3_full_and_root_subsets():
    assert sl3_larc_controllable(sl3_generator_set(SL3_LABELS))
    both = sl3_generator_set(["X1", "Y1", "X2", "Y2"])
    assert sl3_cycle_controllable(both) and sl3_larc_controllable(both)
    assert not sl3_larc_controllable(sl3_generator_set([]))


def test_sl3_x3_y3_is_a_counterexample():
    gens = sl3_generator_set(["X3", "Y3"])
    assert sl3_cycle_controllable(gens)
    assert not sl3_larc_controllable(gens)


def test_sl3_sweep_reports_disagreements():
    report = sl3_sweep()
    assert len(report.rows) == 256
    names = {r.name for r in report.counterexamples}
    assert "{X3, Y3}" in names
    assert all(r.cycle and not r.larc for r in report.counterexamples)
    assert {r.name for r in report.minimal_counterexamples} <= names
    assert next(r for r in report.rows if r.name == "{X3, Y3}").rank == 3


# ------------------------------------------------------------
# Formation control
# ------------------------------------------------------------

def test_formation_generators_are_symmetric_laplacians():
    a = formation_a(4, 1, 3)
    assert a.is_symmetric()
    assert a.entry(1, 1) == 1 and a.entry(1, 3) == -1
    assert formation_b(4, 1, 2, 3).is_skew_symmetric()


def test_formation_bracket_of_adjacent_couplings():
    assert bracket(formation_a(4, 1, 2), formation_a(4, 2, 3)) == formation_b(4, 1, 2, 3)


@pytest.mark.parametrize("N", [3, 4, 5])
def test_formation_identities(N):
    assert verify_formation_relations(N)
    assert grading_holds(N)


def test_formation_report_flags_partial_checks():
    assert formation_relation_report(4).partial
    report = formation_relation_report(5)
    assert report.ok and not report.partial


def test_formation_indices_validated():
    with pytest.raises(InvalidIndexError):
        formation_a(3, 1, 1)
    with pytest.raises(InvalidIndexError):
        formation_b(3, 1, 2, 4)
    with pytest.raises(InvalidIndexError):
        formation_controllable(SimpleGraph.empty(1))


def test_formation_connectivity_matches_oracle_on_small_graphs():
    path = SimpleGraph.path(4)
    assert formation_cross_check(path).agree
    assert formation_cross_check(path).connected
    split = SimpleGraph.from_edges(4, [(1, 2), (3, 4)])
    check = formation_cross_check(split)
    assert check.agree and not check.connected
    assert check.oracle_rank < full_formation_rank(4)


def _all_couplings(N: int):
    edges = SimpleGraph.complete(N).edge_list()
    for mask in range(1 << len(edges)):
        yield SimpleGraph.from_edges(N, [e for k, e in enumerate(edges) if mask >> k & 1])


def test_formation_connectivity_matches_oracle_for_four_agents():
    assert all(formation_cross_check(g).agree for g in _all_couplings(4))


@pytest.mark.slow
def test_formation_connectivity_matches_oracle_for_five_agents():
    assert all(formation_cross_check(g).agree for g in _all_couplings(5))


def test_formation_generator_labels():
    gens = FormationGenerators(SimpleGraph.from_edges(3, [(2, 1), (2, 3)])).generators
    assert gens.labels == ("A(1,2)", "A(2,3)")
