from __future__ import annotations

import pytest

from src.algebra.lie_core import GeneratorSet
from src.combinatorics.dot_export import closure_dot, write_dot
from src.combinatorics.liegraph import (
    SimpleGraph,
    bracket_chain_matches_closure,
    closure_controllable,
    closure_equals_lie_span_check,
    components,
    forest_edges,
    graph_controllable,
    is_connected,
    min_inputs_check,
    nontrivial_components,
    tau,
    tau_inverse,
    triangular_closure,
)
from src.errors import GeneratorSetError, InvalidIndexError


def test_simple_graph_normalizes_and_validates():
    g = SimpleGraph.from_edges(4, [(3, 1), (2, 4)])
    assert g.edge_list() == [(1, 3), (2, 4)]
    with pytest.raises(InvalidIndexError):
        SimpleGraph.from_edges(3, [(2, 2)])
    with pytest.raises(InvalidIndexError):
        SimpleGraph.from_edges(3, [(1, 4)])
    with pytest.raises(InvalidIndexError):
        SimpleGraph.empty(0)


def test_tau_round_trip(triangle_with_tail_so4):
    g = tau(triangle_with_tail_so4)
    assert g.edge_list() == [(1, 2), (1, 3), (2, 3), (3, 4)]
    assert tau(tau_inverse(g)) == g


def test_tau_needs_standard_basis():
    with pytest.raises(GeneratorSetError):
        tau(GeneratorSet(3, ()))


def test_triangle_with_tail_closes_in_one_step(triangle_with_tail_so4):
    closed, trace = triangular_closure(tau(triangle_with_tail_so4))
    assert closed.is_complete()
    assert trace.steps == 1
    assert trace.added == (frozenset({(1, 4), (2, 4)}),)
    assert trace.step_of((1, 4)) == 1
    assert trace.step_of((1, 2)) == 0


def test_path_with_isolated_vertex_closes_in_two_steps(path_with_isolated_vertex_so5):
    closed, trace = triangular_closure(tau(path_with_isolated_vertex_so5))
    assert trace.added == (frozenset({(1, 3), (2, 4)}), frozenset({(1, 4)}))
    assert components(closed) == [(1, 2, 3, 4), (5,)]
    assert nontrivial_components(closed) == [(1, 2, 3, 4)]
    assert not closed.is_complete()


def test_complete_graph_is_already_closed():
    closed, trace = triangular_closure(SimpleGraph.complete(5))
    assert trace.steps == 0
    assert trace.chain == (closed,)


def test_closure_completes_every_component():
    g = SimpleGraph.from_edges(7, [(1, 2), (2, 3), (3, 4), (5, 6), (6, 7)])
    closed, _ = triangular_closure(g)
    for comp in components(g):
        for i in comp:
            for j in comp:
                if i < j:
                    assert (i, j) in closed.edges
    assert len(closed) == 6 + 3


def test_forest_edges_is_kruskal_over_sorted_edges():
    g = SimpleGraph.from_edges(6, [(1, 2), (1, 4), (2, 3), (2, 4), (3, 4), (5, 6)])
    assert forest_edges(g) == [(1, 2), (1, 4), (2, 3), (5, 6)]


def test_graph_verdicts(chain_so5, two_blocks_so5):
    assert graph_controllable(chain_so5)
    assert closure_controllable(chain_so5)
    assert not graph_controllable(two_blocks_so5)
    assert not closure_controllable(two_blocks_so5)
    assert is_connected(SimpleGraph.empty(1))


def test_closure_span_equals_lie_closure(path_with_isolated_vertex_so5, two_blocks_so5):
    assert closure_equals_lie_span_check(path_with_isolated_vertex_so5)
    assert closure_equals_lie_span_check(two_blocks_so5)
    assert closure_equals_lie_span_check(GeneratorSet.standard(4, []))


@pytest.mark.slow
def test_bracket_chain_matches_closure_for_every_subset_on_four_vertices():
    full = GeneratorSet.full_standard(4)
    for mask in range(1 << len(full)):
        assert bracket_chain_matches_closure(full.by_mask(mask))


def test_min_inputs_check(chain_so5):
    assert min_inputs_check(chain_so5)
    assert min_inputs_check(GeneratorSet.standard(5, [(1, 2)]))


def test_dot_for_path_with_isolated_vertex(path_with_isolated_vertex_so5):
    text = closure_dot(tau(path_with_isolated_vertex_so5), "path")
    assert text == (
        "graph path {\n"
        "    node [shape=circle];\n"
        '    v1 [label="v1"];\n'
        '    v2 [label="v2"];\n'
        '    v3 [label="v3"];\n'
        '    v4 [label="v4"];\n'
        '    v5 [label="v5"];\n'
        "    v1 -- v2 [color=black];\n"
        "    v2 -- v3 [color=black];\n"
        "    v3 -- v4 [color=black];\n"
        '    v1 -- v3 [color=red, label="1"];\n'
        '    v2 -- v4 [color=red, label="1"];\n'
        '    v1 -- v4 [color=red, label="2"];\n'
        "}\n"
    )


def test_dot_of_complete_graph_has_no_closure_edges():
    text = closure_dot(SimpleGraph.complete(4), "k4")
    assert "color=red" not in text
    assert text.count("color=black") == 6


def test_dot_of_two_triangles_keeps_components_apart():
    g = SimpleGraph.from_edges(6, [(1, 2), (2, 3), (4, 5), (4, 6)])
    text = closure_dot(g, "two triangles")
    assert text.startswith("graph two_triangles {")
    assert 'v1 -- v3 [color=red, label="1"];' in text
    assert 'v5 -- v6 [color=red, label="1"];' in text
    assert text.count("color=red") == 2


def test_write_dot_is_byte_stable(tmp_path, triangle_with_tail_so4):
    text = closure_dot(tau(triangle_with_tail_so4), "tail")
    first = write_dot(tmp_path / "a" / "tail.dot", text).read_bytes()
    second = write_dot(tmp_path / "b" / "tail.dot", closure_dot(tau(triangle_with_tail_so4), "tail")).read_bytes()
    assert first == second
    assert b"\r\n" not in first
