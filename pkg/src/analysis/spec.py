# src/analysis/spec.py
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from typing import Any

from src.algebra.lie_core import (
    BasisKind,
    ExactMatrix,
    GeneratorSet,
    linear_combination,
    omega,
    son_dimension,
)
from src.algebra.scalars import COMPLEX, REAL
from src.combinatorics.liegraph import SimpleGraph
from src.config.settings import KNOWN_BACKENDS
from src.decomp.sl3c import SL3_COMPLEX_DIMENSION, SL3_LABELS, sl3_generator_set
from src.decomp.so4_split import SPLIT_LABELS, split_generator_set
from src.errors import CapExceededError, LieCtrlError, SpecError

log = logging.getLogger(__name__)

TOP_LEVEL_KEYS = {"name", "group", "basis_kind", "generators", "options"}
OPTION_KEYS = {"backends", "trace_closure", "max_witnesses"}
GROUP_KINDS = ("SO", "SL3C", "FORMATION")

ALLOWED_KINDS = {
    "SO": {BasisKind.STANDARD_SON, BasisKind.SON_SPLIT, BasisKind.RAW},
    "SL3C": {BasisKind.SL3C, BasisKind.RAW},
    "FORMATION": {BasisKind.FORMATION},
}


@dataclass(frozen=True)
class GroupDescriptor:
    kind: str
    n: int

    @property
    def text(self) -> str:
        if self.kind == "SO":
            return f"SO({self.n})"
        if self.kind == "FORMATION":
            return f"FORMATION({self.n})"
        return "SL(3,C)"

    def full_dim(self) -> int | None:
        """Dimension of the target Lie algebra; None when it must be computed (formation)."""
        if self.kind == "SO":
            return son_dimension(self.n)
        if self.kind == "SL3C":
            return SL3_COMPLEX_DIMENSION
        return None


@dataclass(frozen=True)
class SpecOptions:
    backends: tuple[str, ...] | None = None
    trace_closure: bool = False
    max_witnesses: int | None = None


@dataclass(frozen=True)
class SystemSpec:
    """
    Parsed system description. `generators` holds index pairs (standard_son),
    labels (son_split, sl3c), coupling edges (formation) or labelled
    matrices (raw).
    """

    name: str
    group: GroupDescriptor
    basis_kind: BasisKind
    generators: tuple[Any, ...]
    options: SpecOptions = field(default_factory=SpecOptions)

    def generator_set(self) -> GeneratorSet:
        if self.basis_kind == BasisKind.STANDARD_SON:
            return GeneratorSet.standard(self.group.n, self.generators)
        if self.basis_kind == BasisKind.SON_SPLIT:
            return split_generator_set(self.generators)
        if self.basis_kind == BasisKind.SL3C:
            return sl3_generator_set(self.generators)
        if self.basis_kind == BasisKind.RAW:
            return GeneratorSet(self.group.n, tuple(self.generators), BasisKind.RAW)
        from src.decomp.formation import FormationGenerators

        return FormationGenerators(self.coupling_graph()).generators

    def coupling_graph(self) -> SimpleGraph:
        if self.basis_kind != BasisKind.FORMATION:
            raise ValueError(f"Spec {self.name!r} has no coupling graph (basis_kind={self.basis_kind.value})")
        return SimpleGraph.from_edges(self.group.n, self.generators)


# ------------------------------------------------------------
# Parsing
# ------------------------------------------------------------

def _require(cond: bool, message: str, field_path: str) -> None:
    if not cond:
        raise SpecError(message, field=field_path)


def _as_int(value: Any, field_path: str) -> int:
    _require(isinstance(value, int) and not isinstance(value, bool), f"expected an integer, got {value!r}", field_path)
    return value


def _parse_group(raw: Any) -> GroupDescriptor:
    _require(isinstance(raw, dict), "group must be an object", "group")
    kind = raw.get("kind")
    _require(kind in GROUP_KINDS, f"unknown group kind {kind!r}; expected one of {GROUP_KINDS}", "group.kind")

    if kind == "SO":
        extra = set(raw) - {"kind", "n"}
        _require(not extra, f"unknown keys {sorted(extra)}", "group")
        n = _as_int(raw.get("n"), "group.n")
        _require(n >= 1, f"n must be at least 1, got {n}", "group.n")
        return GroupDescriptor("SO", n)
    if kind == "FORMATION":
        extra = set(raw) - {"kind", "N"}
        _require(not extra, f"unknown keys {sorted(extra)}", "group")
        N = _as_int(raw.get("N"), "group.N")
        _require(N >= 2, f"formation needs N >= 2, got {N}", "group.N")
        return GroupDescriptor("FORMATION", N)

    extra = set(raw) - {"kind"}
    _require(not extra, f"unknown keys {sorted(extra)}", "group")
    return GroupDescriptor("SL3C", 3)


def _parse_pair(raw: Any, n: int, field_path: str, ordered: bool) -> tuple[int, int]:
    _require(isinstance(raw, list) and len(raw) == 2, f"expected a pair [i, j], got {raw!r}", field_path)
    i, j = (_as_int(x, field_path) for x in raw)
    if ordered:
        _require(i < j, f"invalid index: need i < j, got ({i},{j})", field_path)
    else:
        _require(i != j, f"invalid index: loop ({i},{j})", field_path)
    _require(1 <= min(i, j) and max(i, j) <= n, f"invalid index: ({i},{j}) outside 1..{n}", field_path)
    return (i, j) if ordered else (min(i, j), max(i, j))


def _parse_raw_generator(raw: Any, group: GroupDescriptor, field_path: str) -> tuple[str, ExactMatrix]:
    _require(isinstance(raw, dict), "raw generators must be objects with label and entries/omega_terms", field_path)
    extra = set(raw) - {"label", "entries", "omega_terms"}
    _require(not extra, f"unknown keys {sorted(extra)}", field_path)
    label = raw.get("label")
    _require(isinstance(label, str) and label != "", "label must be a nonempty string", f"{field_path}.label")
    has_entries, has_terms = "entries" in raw, "omega_terms" in raw
    _require(has_entries != has_terms, "give exactly one of entries / omega_terms", field_path)

    n = group.n
    domain = COMPLEX if group.kind == "SL3C" else REAL
    try:
        if has_entries:
            rows = raw["entries"]
            _require(
                isinstance(rows, list) and len(rows) == n and all(isinstance(r, list) and len(r) == n for r in rows),
                f"entries must be a {n}x{n} array",
                f"{field_path}.entries",
            )
            matrix = ExactMatrix.from_entries([[str(x) for x in r] for r in rows], domain)
        else:
            _require(group.kind == "SO", "omega_terms only apply to SO groups", f"{field_path}.omega_terms")
            terms = raw["omega_terms"]
            _require(isinstance(terms, list) and terms, "omega_terms must be a nonempty list", f"{field_path}.omega_terms")
            parsed = []
            for k, term in enumerate(terms):
                term_path = f"{field_path}.omega_terms[{k}]"
                _require(isinstance(term, dict) and set(term) == {"coef", "omega"}, "term needs coef and omega", term_path)
                i, j = _parse_pair(term["omega"], n, f"{term_path}.omega", ordered=True)
                parsed.append((str(term["coef"]), omega(n, i, j)))
            matrix = linear_combination(parsed)
    except SpecError:
        raise
    except (ValueError, LieCtrlError) as e:
        raise SpecError(str(e), field=field_path) from e

    if group.kind == "SO":
        _require(matrix.is_skew_symmetric(), "SO generators must be skew-symmetric", field_path)
    else:
        _require(matrix.is_traceless(), "SL(3,C) generators must be traceless", field_path)
    return (label, matrix)


def _parse_generators(raw: Any, group: GroupDescriptor, kind: BasisKind) -> tuple[Any, ...]:
    _require(isinstance(raw, list), "generators must be a list", "generators")
    parsed: list[Any] = []
    seen: set[Any] = set()
    for k, item in enumerate(raw):
        path = f"generators[{k}]"
        if kind == BasisKind.STANDARD_SON:
            value = _parse_pair(item, group.n, path, ordered=True)
            key = value
        elif kind == BasisKind.FORMATION:
            value = _parse_pair(item, group.n, path, ordered=False)
            key = value
        elif kind in (BasisKind.SON_SPLIT, BasisKind.SL3C):
            allowed = SPLIT_LABELS if kind == BasisKind.SON_SPLIT else SL3_LABELS
            _require(item in allowed, f"unknown label {item!r}; expected one of {allowed}", path)
            value = key = item
        else:
            value = _parse_raw_generator(item, group, path)
            key = value[0]
        _require(key not in seen, f"duplicate generator {key!r}", path)
        seen.add(key)
        parsed.append(value)
    return tuple(parsed)


def _parse_options(raw: Any) -> SpecOptions:
    if raw is None:
        return SpecOptions()
    _require(isinstance(raw, dict), "options must be an object", "options")
    extra = set(raw) - OPTION_KEYS
    _require(not extra, f"unknown keys {sorted(extra)}", "options")

    backends = raw.get("backends")
    if backends is not None:
        _require(isinstance(backends, list) and backends, "backends must be a nonempty list", "options.backends")
        for b in backends:
            _require(b in KNOWN_BACKENDS, f"unknown backend {b!r}; expected one of {KNOWN_BACKENDS}", "options.backends")
        backends = tuple(dict.fromkeys(backends))

    trace = raw.get("trace_closure", False)
    _require(isinstance(trace, bool), "trace_closure must be true/false", "options.trace_closure")

    max_witnesses = raw.get("max_witnesses")
    if max_witnesses is not None:
        max_witnesses = _as_int(max_witnesses, "options.max_witnesses")
        _require(max_witnesses >= 0, "max_witnesses must be non-negative", "options.max_witnesses")
    return SpecOptions(backends, trace, max_witnesses)


def parse_spec(text: str, max_n_graph: int | None = None, allow_large: bool = False) -> SystemSpec:
    """
    Validates a JSON system spec. Every rejection is a SpecError naming the
    offending field; JSON syntax errors carry line/column.
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise SpecError(f"malformed JSON: {e.msg}", field="<document>", location=f"line {e.lineno} column {e.colno}") from e

    _require(isinstance(raw, dict), "spec must be a JSON object", "<document>")
    extra = set(raw) - TOP_LEVEL_KEYS
    _require(not extra, f"unknown keys {sorted(extra)}", "<document>")

    name = raw.get("name", "system")
    _require(isinstance(name, str) and name != "", "name must be a nonempty string", "name")

    group = _parse_group(raw.get("group"))

    kind_text = raw.get("basis_kind")
    try:
        kind = BasisKind(kind_text)
    except ValueError:
        raise SpecError(
            f"unknown basis_kind {kind_text!r}; expected one of {[k.value for k in BasisKind]}", field="basis_kind"
        ) from None
    _require(
        kind in ALLOWED_KINDS[group.kind],
        f"basis_kind {kind.value} does not apply to group {group.kind}",
        "basis_kind",
    )
    if kind == BasisKind.SON_SPLIT:
        _require(group.n == 4, f"son_split needs SO(4), got SO({group.n})", "group.n")

    generators = _parse_generators(raw.get("generators"), group, kind)
    options = _parse_options(raw.get("options"))

    if max_n_graph is not None and not allow_large and kind in (BasisKind.STANDARD_SON, BasisKind.FORMATION):
        if group.n > max_n_graph:
            raise CapExceededError(
                f"n={group.n} exceeds the graph/cycle cap {max_n_graph}; pass --allow-large to override"
            )

    spec = SystemSpec(name, group, kind, generators, options)
    log.debug("parsed spec name=%s group=%s kind=%s generators=%d", name, group.text, kind.value, len(generators))
    return spec


def spec_to_dict(spec: SystemSpec) -> dict:
    """JSON-ready form of a spec; parse_spec(json.dumps(spec_to_dict(s))) == s."""
    group: dict[str, Any] = {"kind": spec.group.kind}
    if spec.group.kind == "SO":
        group["n"] = spec.group.n
    elif spec.group.kind == "FORMATION":
        group["N"] = spec.group.n

    if spec.basis_kind == BasisKind.RAW:
        generators = [{"label": label, "entries": m.to_strings()} for label, m in spec.generators]
    elif spec.basis_kind in (BasisKind.STANDARD_SON, BasisKind.FORMATION):
        generators = [list(p) for p in spec.generators]
    else:
        generators = list(spec.generators)

    options: dict[str, Any] = {"trace_closure": spec.options.trace_closure}
    if spec.options.backends is not None:
        options["backends"] = list(spec.options.backends)
    if spec.options.max_witnesses is not None:
        options["max_witnesses"] = spec.options.max_witnesses

    return {
        "name": spec.name,
        "group": group,
        "basis_kind": spec.basis_kind.value,
        "generators": generators,
        "options": options,
    }

