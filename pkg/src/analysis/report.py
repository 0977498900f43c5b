# src/analysis/report.py
from __future__ import annotations

import json
import logging
import time
from dataclasses import asdict, dataclass, field
from typing import Any

from colorama import Fore, Style

from src.algebra.lie_core import BasisKind, GeneratorSet, lie_closure
from src.analysis.spec import SystemSpec
from src.combinatorics.dot_export import closure_dot
from src.combinatorics.equivalence import (
    enumerate_cycle_witnesses,
    forest_to_submanifold,
    kirchhoff_tree_count,
)
from src.combinatorics.liegraph import (
    closure_equals_lie_span_check,
    components,
    graph_controllable,
    min_inputs_check,
    tau,
    triangular_closure,
)
from src.combinatorics.permgroup import TranspositionSequence, cycle_controllable, format_cycles, iota
from src.config.settings import KNOWN_BACKENDS, Settings
from src.decomp.formation import formation_controllable, full_formation_rank
from src.decomp.sl3c import SL3_COMPLEX_DIMENSION, sl3_cycle_controllable
from src.decomp.so4_split import SO4_DIMENSION, split_cycle_controllable, split_controllable, tau_split

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
AGREE = "agree"
MISMATCH = "MISMATCH"

EXIT_CONTROLLABLE = 0
EXIT_UNCONTROLLABLE = 1
EXIT_SPEC_ERROR = 2
EXIT_MISMATCH = 3

APPLICABLE = {
    BasisKind.STANDARD_SON: ("larc", "cycle", "graph"),
    BasisKind.SON_SPLIT: ("larc", "cycle", "graph"),
    BasisKind.SL3C: ("larc", "cycle"),
    BasisKind.FORMATION: ("larc", "graph"),
    BasisKind.RAW: ("larc",),
}


@dataclass(frozen=True)
class BackendResult:
    backend: str
    ran: bool
    controllable: bool | None = None
    note: str = ""


@dataclass(frozen=True)
class WitnessEntry:
    labels: tuple[str, ...]
    cycle: str


@dataclass(frozen=True)
class AnalysisReport:
    name: str
    group: str
    basis_kind: str
    generators: tuple[str, ...]
    backends: tuple[BackendResult, ...]
    lie_rank: int
    full_dim: int
    cross_check: str = AGREE
    mismatch_details: tuple[str, ...] = ()
    witnesses: tuple[WitnessEntry, ...] = ()
    witness_total: int | None = None
    iota_of_generators: str | None = None
    orbits: tuple[tuple[int, ...], ...] | None = None
    dimension_formula: str | None = None
    decomposition: str | None = None
    components: tuple[tuple[int, ...], ...] | None = None
    closure_steps: tuple[tuple[tuple[int, int], ...], ...] | None = None
    notes: tuple[str, ...] = ()
    timing_ms: float = 0.0
    schema_version: int = SCHEMA_VERSION

    @property
    def verdicts(self) -> dict[str, bool]:
        return {b.backend: b.controllable for b in self.backends if b.ran}

    @property
    def controllable(self) -> bool:
        """Rank oracle verdict when it ran, otherwise the first backend that did."""
        verdicts = self.verdicts
        if "larc" in verdicts:
            return verdicts["larc"]
        return next(iter(verdicts.values()), False)

    @property
    def exit_code(self) -> int:
        if self.cross_check == MISMATCH:
            return EXIT_MISMATCH
        return EXIT_CONTROLLABLE if self.controllable else EXIT_UNCONTROLLABLE

    # -- JSON -----------------------------------------------------------

    def to_dict(self, include_timing: bool = True) -> dict[str, Any]:
        data = asdict(self)
        if not include_timing:
            data.pop("timing_ms")
        return data

    def to_json(self, include_timing: bool = True) -> str:
        return json.dumps(self.to_dict(include_timing), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "AnalysisReport":
        version = data.get("schema_version")
        if version != SCHEMA_VERSION:
            raise ValueError(f"Unsupported report schema_version {version!r}, expected {SCHEMA_VERSION}")

        def tuples(value):
            return None if value is None else tuple(tuple(x) for x in value)

        closure = data.get("closure_steps")
        return cls(
            name=data["name"],
            group=data["group"],
            basis_kind=data["basis_kind"],
            generators=tuple(data["generators"]),
            backends=tuple(BackendResult(**b) for b in data["backends"]),
            lie_rank=data["lie_rank"],
            full_dim=data["full_dim"],
            cross_check=data.get("cross_check", AGREE),
            mismatch_details=tuple(data.get("mismatch_details", ())),
            witnesses=tuple(WitnessEntry(tuple(w["labels"]), w["cycle"]) for w in data.get("witnesses", ())),
            witness_total=data.get("witness_total"),
            iota_of_generators=data.get("iota_of_generators"),
            orbits=tuples(data.get("orbits")),
            dimension_formula=data.get("dimension_formula"),
            decomposition=data.get("decomposition"),
            components=tuples(data.get("components")),
            closure_steps=None if closure is None else tuple(tuple(tuple(e) for e in step) for step in closure),
            notes=tuple(data.get("notes", ())),
            timing_ms=data.get("timing_ms", 0.0),
            schema_version=version,
        )

    @classmethod
    def from_json(cls, text: str) -> "AnalysisReport":
        return cls.from_dict(json.loads(text))


# ------------------------------------------------------------
# analyze
# ------------------------------------------------------------

@dataclass
class _Draft:
    backends: list[BackendResult] = field(default_factory=list)
    details: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    extra: dict[str, Any] = field(default_factory=dict)


def _closure_rank(gens: GeneratorSet) -> int:
    return lie_closure(gens).rank if len(gens) else 0


def _selected_backends(spec: SystemSpec, settings: Settings, override: tuple[str, ...] | None) -> tuple[str, ...]:
    requested = override or spec.options.backends or settings.backends
    return tuple(b for b in KNOWN_BACKENDS if b in requested)


def _standard_extras(spec: SystemSpec, gens: GeneratorSet, rank: int, settings: Settings, draft: _Draft) -> None:
    n = gens.dim
    g = tau(gens)
    _, trace = triangular_closure(g)
    if spec.options.trace_closure or settings.trace_closure:
        draft.extra["closure_steps"] = tuple(tuple(sorted(step)) for step in trace.added)

    draft.extra["components"] = tuple(components(g))

    draft.extra["iota_of_generators"] = format_cycles(iota(TranspositionSequence.from_generators(gens)))

    decomposition = forest_to_submanifold(gens, verify=False)
    draft.extra["orbits"] = decomposition.orbits.nontrivial_blocks
    sizes = [len(b) * (len(b) - 1) // 2 for b in decomposition.orbits.nontrivial_blocks]
    draft.extra["dimension_formula"] = (" + ".join(str(s) for s in sizes) or "0") + f" = {decomposition.dimension}"
    draft.extra["decomposition"] = decomposition.describe()
    if decomposition.dimension != rank:
        draft.details.append(f"orbit dimension {decomposition.dimension} != Lie closure rank {rank}")

    if len(gens) and not closure_equals_lie_span_check(gens):
        draft.details.append("span of the triangular closure differs from the Lie closure")
    if not min_inputs_check(gens):
        draft.details.append(f"controllable with {len(gens)} generators, fewer than n-1 = {n - 1}")

    limit = spec.options.max_witnesses if spec.options.max_witnesses is not None else settings.max_witnesses
    if limit > 0 and n > 1:
        witnesses = enumerate_cycle_witnesses(gens, limit=limit)
        draft.extra["witnesses"] = tuple(WitnessEntry(w.labels, format_cycles(w.cycle)) for w in witnesses)
        draft.extra["witness_total"] = kirchhoff_tree_count(g)


def analyze(spec: SystemSpec, settings: Settings | None = None, backends: tuple[str, ...] | None = None) -> AnalysisReport:
    """
    Runs every requested backend that applies to the system's basis kind and
    cross-checks the verdicts. Inapplicable backends are reported as
    skipped.
    """
    settings = settings or Settings()
    started = time.perf_counter()
    gens = spec.generator_set()
    kind = spec.basis_kind
    wanted = _selected_backends(spec, settings, backends)
    draft = _Draft()

    rank = _closure_rank(gens)
    if kind == BasisKind.FORMATION:
        full_dim = full_formation_rank(spec.group.n)
    elif kind == BasisKind.SON_SPLIT:
        full_dim = SO4_DIMENSION
    elif kind == BasisKind.SL3C:
        full_dim = SL3_COMPLEX_DIMENSION
    else:
        full_dim = spec.group.full_dim()

    def run(backend: str, fn) -> None:
        if backend not in wanted:
            return
        if backend not in APPLICABLE[kind]:
            draft.backends.append(BackendResult(backend, False, None, f"not applicable to {kind.value}"))
            draft.notes.append(f"{backend} skipped: not applicable to basis_kind {kind.value}")
            return
        draft.backends.append(BackendResult(backend, True, bool(fn())))

    run("larc", lambda: rank == full_dim)

    if kind == BasisKind.STANDARD_SON:
        run("cycle", lambda: cycle_controllable(gens).controllable)
        run("graph", lambda: graph_controllable(gens))
        _standard_extras(spec, gens, rank, settings, draft)
    elif kind == BasisKind.SON_SPLIT:
        run("cycle", lambda: split_cycle_controllable(gens))
        run("graph", lambda: split_controllable(gens))
        v, w = tau_split(gens)
        draft.extra["components"] = tuple(components(v)) + tuple(tuple(x + 3 for x in c) for c in components(w))
        draft.notes.append("graph backend uses two triangles: vertices 1-3 carry A1..A3, vertices 4-6 carry B1..B3")
    elif kind == BasisKind.SL3C:
        run("cycle", lambda: sl3_cycle_controllable(gens))
        run("graph", lambda: None)
    elif kind == BasisKind.FORMATION:
        coupling = spec.coupling_graph()
        run("cycle", lambda: None)
        run("graph", lambda: formation_controllable(coupling))
        draft.extra["components"] = tuple(components(coupling))
        draft.notes.append(f"dim Lie{{A_ij}} for N={spec.group.n} computed by closure: {full_dim}")
    else:
        run("cycle", lambda: None)
        run("graph", lambda: None)

    verdicts = {b.backend: b.controllable for b in draft.backends if b.ran}
    if len(set(verdicts.values())) > 1:
        draft.details.append("backend verdicts disagree: " + ", ".join(f"{k}={v}" for k, v in verdicts.items()))
        if kind == BasisKind.SL3C:
            draft.notes.append("counterexample to the S3+S3 six-cycle criterion: " + "{" + ", ".join(gens.labels) + "}")

    cross_check = MISMATCH if draft.details else AGREE
    elapsed = (time.perf_counter() - started) * 1000.0
    report = AnalysisReport(
        name=spec.name,
        group=spec.group.text,
        basis_kind=kind.value,
        generators=gens.labels,
        backends=tuple(draft.backends),
        lie_rank=rank,
        full_dim=full_dim,
        cross_check=cross_check,
        mismatch_details=tuple(draft.details),
        notes=tuple(draft.notes),
        timing_ms=round(elapsed, 3),
        **draft.extra,
    )
    log.info(
        "event=ANALYZE_DONE | name=%s rank=%d/%d verdicts=%s cross_check=%s",
        spec.name, rank, full_dim, verdicts, cross_check,
    )
    return report


# ------------------------------------------------------------
# DOT and text output
# ------------------------------------------------------------

def emit_dot(report: AnalysisReport, spec: SystemSpec) -> dict[str, str]:
    """
    DOT files keyed by file name. Needs a graph backend run; returns an
    empty mapping otherwise.
    """
    if "graph" not in report.verdicts:
        log.warning("event=DOT_SKIPPED | name=%s | graph backend did not run", spec.name)
        return {}

    kind = spec.basis_kind
    if kind == BasisKind.STANDARD_SON:
        return {f"{spec.name}.dot": closure_dot(tau(spec.generator_set()), spec.name)}
    if kind == BasisKind.FORMATION:
        return {f"{spec.name}.dot": closure_dot(spec.coupling_graph(), spec.name)}
    if kind == BasisKind.SON_SPLIT:
        v, w = tau_split(spec.generator_set())
        return {
            f"{spec.name}_A.dot": closure_dot(v, f"{spec.name}_A"),
            f"{spec.name}_B.dot": closure_dot(w, f"{spec.name}_B"),
        }
    return {}


def _yes_no(value: bool | None) -> str:
    if value is None:
        return f"{Fore.YELLOW}skipped{Style.RESET_ALL}"
    return f"{Fore.GREEN}controllable{Style.RESET_ALL}" if value else f"{Fore.RED}uncontrollable{Style.RESET_ALL}"


def render_text(report: AnalysisReport) -> str:
    lines = [
        f"=== {report.name} on {report.group} ({report.basis_kind}) ===",
        f"generators: {', '.join(report.generators) or '(none)'}",
        f"Lie closure rank: {report.lie_rank} / {report.full_dim}",
    ]
    for b in report.backends:
        lines.append(f"  {b.backend:<6} {_yes_no(b.controllable if b.ran else None)}{'  ' + b.note if b.note else ''}")

    if report.iota_of_generators is not None:
        lines.append(f"iota(generators) = {report.iota_of_generators}")
    if report.witnesses:
        shown = len(report.witnesses)
        total = report.witness_total if report.witness_total is not None else shown
        lines.append(f"cycle witnesses ({shown} of {total}):")
        for w in report.witnesses:
            lines.append(f"  {{{', '.join(w.labels)}}}  ->  {w.cycle}")
    if report.orbits is not None:
        blocks = ", ".join("{" + ",".join(str(v) for v in b) + "}" for b in report.orbits) or "none"
        lines.append(f"orbits: {blocks}")
        lines.append(f"submanifold algebra: {report.decomposition}  (dim {report.dimension_formula})")
    if report.components is not None:
        lines.append("components: " + ", ".join("{" + ",".join(str(v) for v in c) + "}" for c in report.components))
    if report.closure_steps:
        for step, added in enumerate(report.closure_steps, start=1):
            lines.append(f"closure step {step}: " + ", ".join(f"v{i}v{j}" for i, j in added))

    if report.cross_check == MISMATCH:
        lines.append(f"{Fore.RED}cross-check: MISMATCH{Style.RESET_ALL}")
        lines.extend(f"  - {d}" for d in report.mismatch_details)
    else:
        lines.append(f"{Fore.GREEN}cross-check: agree{Style.RESET_ALL}")
    lines.extend(f"note: {n}" for n in report.notes)
    lines.append(f"time: {report.timing_ms:.1f} ms")
    return "\n".join(lines)
