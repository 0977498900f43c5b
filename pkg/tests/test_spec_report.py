from __future__ import annotations

import json
from pathlib import Path

import pytest

from src.algebra.lie_core import BasisKind
from src.algebra.scalars import COMPLEX, to_scalar
from src.analysis.report import (
    AGREE,
    MISMATCH,
    AnalysisReport,
    analyze,
    emit_dot,
    render_text,
)
from src.analysis.spec import parse_spec, spec_to_dict
from src.config.settings import Settings
from src.decomp.formation import full_formation_rank
from src.errors import CapExceededError, SpecError

SYSTEMS_DIR = Path(__file__).resolve().parent.parent / "config" / "systems"


def _load(name: str):
    return parse_spec((SYSTEMS_DIR / f"{name}.json").read_text(encoding="utf-8"))


def _so(n, generators, **extra):
    spec = {"name": "t", "group": {"kind": "SO", "n": n}, "basis_kind": "standard_son", "generators": generators}
    spec.update(extra)
    return json.dumps(spec)


# ------------------------------------------------------------
# parse_spec
# ------------------------------------------------------------

def test_parse_standard_spec():
    spec = _load("chain_so5")
    assert spec.name == "chain_so5"
    assert spec.group.text == "SO(5)"
    assert spec.basis_kind == BasisKind.STANDARD_SON
    assert spec.generators == ((1, 2), (2, 3), (3, 4), (4, 5))
    assert spec.options.max_witnesses == 5
    assert spec.generator_set().labels[0] == "Omega(1,2)"


@pytest.mark.parametrize(
    "text, field",
    [
        (_so(3, [[2, 2]]), "generators[0]"),
        (_so(3, [[3, 1]]), "generators[0]"),
        (_so(3, [[1, 4]]), "generators[0]"),
        (_so(3, [[1, 2], [1, 2]]), "generators[1]"),
        (_so(0, []), "group.n"),
        (_so(3, [], extra_key=1), "<document>"),
        (_so(3, [], options={"backends": ["magic"]}), "options.backends"),
        (_so(3, [], options={"max_witnesses": -1}), "options.max_witnesses"),
        (_so(3, [], options={"trace_closure": "yes"}), "options.trace_closure"),
    ],
)
def test_parse_errors_name_the_field(text, field):
    with pytest.raises(SpecError) as info:
        parse_spec(text)
    assert info.value.field == field
    assert f"field={field}" in str(info.value)


def test_parse_rejects_unknown_basis_kind_and_group():
    with pytest.raises(SpecError) as info:
        parse_spec(json.dumps({"group": {"kind": "SO", "n": 3}, "basis_kind": "weird", "generators": []}))
    assert info.value.field == "basis_kind"
    with pytest.raises(SpecError) as info:
        parse_spec(json.dumps({"group": {"kind": "SU", "n": 3}, "basis_kind": "raw", "generators": []}))
    assert info.value.field == "group.kind"


def test_split_basis_needs_so4():
    text = json.dumps({"group": {"kind": "SO", "n": 5}, "basis_kind": "son_split", "generators": ["A1"]})
    with pytest.raises(SpecError) as info:
        parse_spec(text)
    assert info.value.field == "group.n"


def test_unknown_split_label():
    text = json.dumps({"group": {"kind": "SO", "n": 4}, "basis_kind": "son_split", "generators": ["A1", "C1"]})
    with pytest.raises(SpecError) as info:
        parse_spec(text)
    assert info.value.field == "generators[1]"


def test_raw_generator_must_be_skew_for_so():
    text = json.dumps({
        "group": {"kind": "SO", "n": 2},
        "basis_kind": "raw",
        "generators": [{"label": "M", "entries": [[1, 0], [0, -1]]}],
    })
    with pytest.raises(SpecError) as info:
        parse_spec(text)
    assert info.value.field == "generators[0]"


@pytest.mark.parametrize("where", ["entries", "omega_terms"])
def test_scalar_strings_are_never_evaluated(tmp_path, where):
    marker = tmp_path / "touched"
    payload = f"__import__('pathlib').Path({str(marker)!r}).touch() or 0"
    if where == "entries":
        generator = {"label": "M", "entries": [["0", payload], ["0", "0"]]}
    else:
        generator = {"label": "M", "omega_terms": [{"coef": payload, "omega": [1, 2]}]}
    text = json.dumps({"group": {"kind": "SO", "n": 2}, "basis_kind": "raw", "generators": [generator]})
    with pytest.raises(SpecError) as info:
        parse_spec(text)
    assert info.value.field == "generators[0]"
    assert not marker.exists()


def test_raw_sl3_entries_accept_gaussian_strings():
    text = json.dumps({
        "group": {"kind": "SL3C"},
        "basis_kind": "raw",
        "generators": [{"label": "Z", "entries": [["I/2", "1 - 2*I", "0"], ["0", "-I/2", "3/4"], ["0", "0", "0"]]}],
    })
    _, matrix = parse_spec(text).generator_set().generators[0]
    assert matrix.entry(1, 2) == to_scalar("1 - 2*I", COMPLEX)
    assert matrix.entry(2, 2) == to_scalar("-I/2", COMPLEX)


def test_malformed_json_reports_position():
    with pytest.raises(SpecError) as info:
        parse_spec('{"name": "x",\n  "group": }')
    assert info.value.location.startswith("line 2 column")


def test_graph_cap_and_override():
    text = _so(13, [[1, 2]])
    with pytest.raises(CapExceededError):
        parse_spec(text, max_n_graph=12)
    assert parse_spec(text, max_n_graph=12, allow_large=True).group.n == 13


def test_spec_round_trip_through_dict():
    for name in ("chain_so5", "split_so4", "sl3_x3_y3", "formation_path_n4", "triangle_with_tail_so4"):
        spec = _load(name)
        assert parse_spec(json.dumps(spec_to_dict(spec))) == spec


def test_raw_spec_round_trips_as_entries():
    spec = _load("two_input_so4")
    again = parse_spec(json.dumps(spec_to_dict(spec)))
    assert again.generator_set().generators == spec.generator_set().generators


# ------------------------------------------------------------
# analyze
# ------------------------------------------------------------

def test_analyze_chain():
    report = analyze(_load("chain_so5"))
    assert report.verdicts == {"larc": True, "cycle": True, "graph": True}
    assert (report.lie_rank, report.full_dim) == (10, 10)
    assert report.cross_check == AGREE
    assert report.iota_of_generators == "(1 2 3 4 5)"
    assert report.witness_total == 1
    assert len(report.witnesses) == 1
    assert report.exit_code == 0


def test_analyze_two_blocks():
    report = analyze(_load("two_blocks_so5"))
    assert report.verdicts == {"larc": False, "cycle": False, "graph": False}
    assert report.orbits == ((1, 2, 3), (4, 5))
    assert report.decomposition == "so(1,2,3) + so(4,5)"
    assert report.dimension_formula == "3 + 1 = 4"
    assert report.components == ((1, 2, 3), (4, 5))
    assert report.witnesses == ()
    assert report.witness_total == 0
    assert report.exit_code == 1


def test_analyze_traces_closure():
    report = analyze(_load("triangle_with_tail_so4"))
    assert report.closure_steps == (((1, 4), (2, 4)),)
    assert report.witness_total == 3
    assert "closure step 1: v1v4, v2v4" in render_text(report)


def test_closure_steps_absent_unless_requested():
    assert analyze(_load("two_blocks_so5")).closure_steps is None
    assert analyze(_load("two_blocks_so5"), Settings(trace_closure=True)).closure_steps == (((1, 3),),)


def test_backend_override_limits_backends():
    report = analyze(_load("chain_so5"), backends=("graph",))
    assert [b.backend for b in report.backends] == ["graph"]
    assert report.controllable


def test_analyze_split():
    report = analyze(_load("split_so4"))
    assert report.verdicts == {"larc": True, "cycle": True, "graph": True}
    assert report.full_dim == 6
    assert report.components == ((1, 2, 3), (4, 5, 6))


def test_analyze_sl3_counterexample_is_a_mismatch():
    report = analyze(_load("sl3_x3_y3"))
    assert report.verdicts == {"larc": False, "cycle": True}
    assert report.cross_check == MISMATCH
    assert report.exit_code == 3
    assert any("{X3, Y3}" in n for n in report.notes)
    graph = next(b for b in report.backends if b.backend == "graph")
    assert not graph.ran and graph.controllable is None


def test_analyze_formation():
    report = analyze(_load("formation_path_n4"))
    assert report.full_dim == full_formation_rank(4)
    assert report.verdicts == {"larc": True, "graph": True}
    assert report.exit_code == 0


def test_analyze_raw_runs_rank_oracle_only():
    report = analyze(_load("two_input_so4"))
    assert report.verdicts == {"larc": True}
    assert report.lie_rank == 6
    assert sum(1 for b in report.backends if not b.ran) == 2
    assert report.exit_code == 0


def test_empty_generator_set_is_uncontrollable():
    report = analyze(parse_spec(_so(3, [])))
    assert report.lie_rank == 0
    assert report.exit_code == 1


def test_report_json_round_trip():
    report = analyze(_load("triangle_with_tail_so4"))
    assert AnalysisReport.from_json(report.to_json()) == report
    data = json.loads(report.to_json(include_timing=False))
    assert "timing_ms" not in data
    assert data["schema_version"] == 1


def test_report_json_is_deterministic_without_timing():
    first = analyze(_load("chain_so5")).to_json(include_timing=False)
    second = analyze(_load("chain_so5")).to_json(include_timing=False)
    assert first == second


def test_report_rejects_other_schema_versions():
    data = analyze(_load("chain_so5")).to_dict()
    data["schema_version"] = 99
    with pytest.raises(ValueError):
        AnalysisReport.from_dict(data)


# ------------------------------------------------------------
# DOT
# ------------------------------------------------------------

def test_emit_dot_per_basis_kind():
    chain = _load("chain_so5")
    assert list(emit_dot(analyze(chain), chain)) == ["chain_so5.dot"]
    split = _load("split_so4")
    assert sorted(emit_dot(analyze(split), split)) == ["split_so4_A.dot", "split_so4_B.dot"]
    formation = _load("formation_path_n4")
    assert list(emit_dot(analyze(formation), formation)) == ["formation_path_n4.dot"]


def test_emit_dot_needs_graph_backend():
    chain = _load("chain_so5")
    assert emit_dot(analyze(chain, backends=("larc",)), chain) == {}
    raw = _load("two_input_so4")
    assert emit_dot(analyze(raw), raw) == {}
