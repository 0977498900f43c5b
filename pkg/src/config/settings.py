# src/config/settings.py
from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field, replace
from pathlib import Path

import yaml

log = logging.getLogger(__name__)

DEFAULT_PARAMS_PATH = Path("config/analysis_params.yaml")
THREADS_ENV = "LIECTRL_THREADS"
KNOWN_BACKENDS = ("larc", "cycle", "graph")


@dataclass(frozen=True)
class Settings:
    max_n_graph: int = 12
    max_n_sweep: int = 6
    max_formation_sweep: int = 5
    backends: tuple[str, ...] = KNOWN_BACKENDS
    max_witnesses: int = 20
    trace_closure: bool = False
    workers: int = 1
    chunk_size: int = 64
    reports_dir: Path = field(default=Path("data/reports"))
    dot_dir: Path = field(default=Path("data/dot"))
    sweeps_dir: Path = field(default=Path("data/sweeps"))

    def with_overrides(self, **changes) -> "Settings":
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


def _positive_int(value, name: str) -> int:
    try:
        number = int(value)
    except (TypeError, ValueError) as e:
        raise ValueError(f"{name} must be an integer, got {value!r}") from e
    if number < 1:
        raise ValueError(f"{name} must be positive, got {number}")
    return number


def load_settings(path: Path | str | None = None) -> Settings:
    """
    Reads the YAML parameters file. A missing file falls back to defaults,
    LIECTRL_THREADS (if set) replaces the worker count.
    """
    params_path = Path(path) if path is not None else DEFAULT_PARAMS_PATH
    params: dict = {}
    if params_path.exists():
        with params_path.open("r") as f:
            params = yaml.safe_load(f) or {}
    else:
        log.warning("event=CONFIG_MISSING | %s not found, using defaults", params_path)

    defaults = Settings()
    caps = params.get("caps", {}) or {}
    analysis = params.get("analysis", {}) or {}
    sweep = params.get("sweep", {}) or {}
    output = params.get("output", {}) or {}

    backends = tuple(analysis.get("backends", defaults.backends))
    unknown = [b for b in backends if b not in KNOWN_BACKENDS]
    if unknown:
        raise ValueError(f"Unknown backends in {params_path}: {unknown}")

    settings = Settings(
        max_n_graph=_positive_int(caps.get("max_n_graph", defaults.max_n_graph), "caps.max_n_graph"),
        max_n_sweep=_positive_int(caps.get("max_n_sweep", defaults.max_n_sweep), "caps.max_n_sweep"),
        max_formation_sweep=_positive_int(
            caps.get("max_formation_sweep", defaults.max_formation_sweep), "caps.max_formation_sweep"
        ),
        backends=backends,
        max_witnesses=_positive_int(analysis.get("max_witnesses", defaults.max_witnesses), "analysis.max_witnesses"),
        trace_closure=bool(analysis.get("trace_closure", defaults.trace_closure)),
        workers=_positive_int(sweep.get("workers", defaults.workers), "sweep.workers"),
        chunk_size=_positive_int(sweep.get("chunk_size", defaults.chunk_size), "sweep.chunk_size"),
        reports_dir=Path(output.get("reports_dir", defaults.reports_dir)),
        dot_dir=Path(output.get("dot_dir", defaults.dot_dir)),
        sweeps_dir=Path(output.get("sweeps_dir", defaults.sweeps_dir)),
    )

    threads = os.environ.get(THREADS_ENV)
    if threads:
        settings = replace(settings, workers=_positive_int(threads, THREADS_ENV))
        log.info("event=THREADS_OVERRIDE | workers=%d", settings.workers)
    return settings
