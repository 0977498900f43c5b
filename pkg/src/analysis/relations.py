# src/analysis/relations.py
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass

import numpy as np
from colorama import Fore, Style

from src.algebra.lie_core import (
    ExactMatrix,
    bracket,
    bracket_structure,
    linear_combination,
    omega,
    standard_indices,
)
from src.decomp.formation import formation_relation_report, grading_holds
from src.decomp.so4_split import split_basis

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class RelationTable:
    name: str
    checked: int
    failures: tuple[str, ...] = ()
    note: str = ""

    @property
    def ok(self) -> bool:
        return not self.failures


def standard_bracket_table(n: int) -> RelationTable:
    """Closed-form [Ω_ij, Ω_kl] against the matrix commutator for every ordered pair."""
    indices = standard_indices(n)
    failures = []
    checked = 0
    for p, q in itertools.product(indices, repeat=2):
        checked += 1
        actual = bracket(omega(n, p.i, p.j), omega(n, q.i, q.j))
        predicted = bracket_structure(n, p, q)
        if predicted is None:
            expected = ExactMatrix.zeros(n)
        else:
            sign, idx = predicted
            expected = omega(n, idx.i, idx.j).scale(sign)
        if actual != expected:
            failures.append(f"[{p.label},{q.label}]")
    return RelationTable(f"so({n}) standard brackets", checked, tuple(failures))


def _random_element(rng: np.random.Generator, n: int, bound: int) -> ExactMatrix:
    coefs = rng.integers(-bound, bound + 1, size=n * (n - 1) // 2)
    return linear_combination(
        (int(c), omega(n, idx.i, idx.j)) for c, idx in zip(coefs, standard_indices(n))
    )


def jacobi_table(max_n: int = 6, samples: int = 1000, seed: int = 0, bound: int = 5) -> RelationTable:
    """[X,[Y,Z]] + [Y,[Z,X]] + [Z,[X,Y]] = 0 on seeded random integer elements of so(n)."""
    rng = np.random.default_rng(seed)
    failures = []
    for k in range(samples):
        n = int(rng.integers(2, max_n + 1))
        x, y, z = (_random_element(rng, n, bound) for _ in range(3))
        total = bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y))
        if not total.is_zero():
            failures.append(f"sample {k} (n={n})")
    return RelationTable(f"Jacobi identity, n <= {max_n}", samples, tuple(failures), note=f"seed={seed}")


def split_table() -> RelationTable:
    table = split_basis().relation_table()
    failures = tuple(f"[{c.left},{c.right}]={c.expected}" for c in table if not c.ok)
    return RelationTable("so(4) split basis", len(table), failures)


def formation_table(N: int) -> RelationTable:
    report = formation_relation_report(N)
    failures = list(report.failures)
    if not grading_holds(N):
        failures.append("grading [A,A] in B, [A,B] in A, [B,B] in B")
    note = "partial: identities with more than N indices skipped" if report.partial else ""
    return RelationTable(f"formation N={N}", report.checked + 1, tuple(failures), note)


def verify_all(max_n: int = 8, formation_N: int = 5, jacobi_samples: int = 1000) -> list[RelationTable]:
    tables = [standard_bracket_table(n) for n in range(2, max_n + 1)]
    tables.append(jacobi_table(samples=jacobi_samples))
    tables.append(split_table())
    tables.append(formation_table(formation_N))
    failed = [t.name for t in tables if not t.ok]
    log.info("event=RELATIONS_DONE | tables=%d failed=%s", len(tables), failed)
    return tables


def render_tables(tables: list[RelationTable]) -> str:
    header = f"{'table':<34}{'checked':>9}{'failed':>8}  status"
    lines = [header, "-" * len(header)]
    for t in tables:
        status = f"{Fore.GREEN}OK{Style.RESET_ALL}" if t.ok else f"{Fore.RED}FAIL{Style.RESET_ALL}"
        lines.append(f"{t.name:<34}{t.checked:>9}{len(t.failures):>8}  {status}{'  ' + t.note if t.note else ''}")
        for f in t.failures[:10]:
            lines.append(f"    {Fore.RED}{f}{Style.RESET_ALL}")
    return "\n".join(lines)
