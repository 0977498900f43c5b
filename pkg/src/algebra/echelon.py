# src/algebra/echelon.py
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Sequence

from sympy.polys.matrices import DomainMatrix

from src.algebra.scalars import Scalar
from src.errors import DimensionMismatchError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class EchelonRows:
    """
    Reduced row echelon form of a set of coordinate vectors.

    Rows are sorted by pivot column, every pivot entry is 1 and every other
    row is zero in a pivot column. Two spans are equal iff their
    EchelonRows are equal.
    """

    width: int
    domain: object
    pivots: tuple[int, ...]
    rows: tuple[tuple[Scalar, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, vector: Sequence[Scalar]) -> list[Scalar]:
        """Remainder of `vector` after eliminating every pivot column."""
        if len(vector) != self.width:
            raise DimensionMismatchError(
                f"Vector of length {len(vector)} against echelon width {self.width}"
            )
        return _reduce(list(vector), self.pivots, self.rows, self.domain)

    def contains(self, vector: Sequence[Scalar]) -> bool:
        zero = self.domain.zero
        return all(x == zero for x in self.reduce(vector))


class EchelonBuilder:
    """Mutable accumulator used while a span is still growing."""

    def __init__(self, width: int, domain):
        self.width = width
        self.domain = domain
        self._pivots: list[int] = []
        self._rows: list[list[Scalar]] = []

    @property
    def rank(self) -> int:
        return len(self._rows)

    def insert(self, vector: Sequence[Scalar]) -> bool:
        """Adds `vector` to the span; returns False when it was already inside."""
        if len(vector) != self.width:
            raise DimensionMismatchError(
                f"Vector of length {len(vector)} against echelon width {self.width}"
            )
        remainder = _reduce(list(vector), self._pivots, self._rows, self.domain)
        zero = self.domain.zero

        pivot = next((k for k, x in enumerate(remainder) if x != zero), None)
        if pivot is None:
            return False

        lead = remainder[pivot]
        remainder = [self.domain.quo(x, lead) for x in remainder]

        # keep the form reduced: clear the new pivot column from older rows
        for row in self._rows:
            factor = row[pivot]
            if factor != zero:
                for k in range(pivot, self.width):
                    if remainder[k] != zero:
                        row[k] = row[k] - factor * remainder[k]

        position = 0
        while position < len(self._pivots) and self._pivots[position] < pivot:
            position += 1
        self._pivots.insert(position, pivot)
        self._rows.insert(position, remainder)
        return True

    def freeze(self) -> EchelonRows:
        return EchelonRows(
            width=self.width,
            domain=self.domain,
            pivots=tuple(self._pivots),
            rows=tuple(tuple(r) for r in self._rows),
        )


def _reduce(vector: list[Scalar], pivots: Sequence[int], rows: Sequence[Sequence[Scalar]], domain) -> list[Scalar]:
    zero = domain.zero
    for pivot, row in zip(pivots, rows):
        factor = vector[pivot]
        if factor == zero:
            continue
        for k in range(pivot, len(vector)):
            if row[k] != zero:
                vector[k] = vector[k] - factor * row[k]
    return vector


def echelon_from_vectors(vectors: Iterable[Sequence[Scalar]], width: int, domain) -> EchelonRows:
    builder = EchelonBuilder(width, domain)
    for v in vectors:
        builder.insert(v)
    return builder.freeze()


def matrix_rank(vectors: Sequence[Sequence[Scalar]], width: int, domain) -> int:
    """Rank computed by sympy's DomainMatrix; independent of EchelonBuilder."""
    if not vectors:
        return 0
    dm = DomainMatrix([list(v) for v in vectors], (len(vectors), width), domain)
    return dm.rank()
