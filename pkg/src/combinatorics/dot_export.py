# src/combinatorics/dot_export.py
from __future__ import annotations

import logging
import re
from pathlib import Path
from typing import Iterator

from src.combinatorics.liegraph import ClosureTrace, SimpleGraph, triangular_closure

log = logging.getLogger(__name__)

BASE_COLOR = "black"
CLOSURE_COLOR = "red"


def _graph_name(name: str) -> str:
    cleaned = re.sub(r"[^A-Za-z0-9_]", "_", name) or "G"
    return cleaned if not cleaned[0].isdigit() else f"G_{cleaned}"


def closure_dot_lines(g: SimpleGraph, name: str = "G", trace: ClosureTrace | None = None) -> Iterator[str]:
    """
    Undirected DOT text: every vertex listed (isolated ones stay visible),
    base edges black, closure edges red with their step as label.
    Edges are emitted base first, then by step, each group sorted.
    """
    if trace is None:
        _, trace = triangular_closure(g)

    yield f"graph {_graph_name(name)} {{"
    yield "    node [shape=circle];"
    for v in range(1, g.n + 1):
        yield f'    v{v} [label="v{v}"];'
    for i, j in g.edge_list():
        yield f"    v{i} -- v{j} [color={BASE_COLOR}];"
    for step, added in enumerate(trace.added, start=1):
        for i, j in sorted(added):
            yield f'    v{i} -- v{j} [color={CLOSURE_COLOR}, label="{step}"];'
    yield "}"


def closure_dot(g: SimpleGraph, name: str = "G", trace: ClosureTrace | None = None) -> str:
    return "\n".join(closure_dot_lines(g, name, trace)) + "\n"


def write_dot(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    # newline="\n" keeps files byte-identical across platforms
    with path.open("w", encoding="utf-8", newline="\n") as f:
        f.write(text)
    log.info("event=DOT_WRITTEN | path=%s", path)
    return path
