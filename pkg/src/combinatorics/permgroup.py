# src/combinatorics/permgroup.py
from __future__ import annotations

import itertools
import logging
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from sympy.combinatorics import Permutation as SympyPermutation

from src.algebra.lie_core import BasisKind, GeneratorSet, StandardBasisIndex
from src.errors import DimensionMismatchError, GeneratorSetError, InvalidIndexError

log = logging.getLogger(__name__)

IDENTITY_TEXT = "e"


@dataclass(frozen=True)
class Permutation:
    """
    Bijection on {1..n}; images[k - 1] = σ(k).

    Cycle decompositions come from sympy (0-based) and are shifted back to
    1-based, each cycle starting at its minimum, cycles sorted by minimum.
    """

    images: tuple[int, ...]

    def __post_init__(self):
        n = len(self.images)
        if n < 1:
            raise InvalidIndexError("Permutation degree must be at least 1")
        if sorted(self.images) != list(range(1, n + 1)):
            raise InvalidIndexError(f"Images {self.images} are not a bijection on 1..{n}")

    @property
    def n(self) -> int:
        return len(self.images)

    # -- constructors ---------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def transposition(cls, n: int, i: int, j: int) -> "Permutation":
        if i == j or not (1 <= i <= n and 1 <= j <= n):
            raise InvalidIndexError(f"Transposition ({i} {j}) invalid for degree {n}")
        images = list(range(1, n + 1))
        images[i - 1], images[j - 1] = j, i
        return cls(tuple(images))

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        images = list(range(1, n + 1))
        touched: set[int] = set()
        for cycle in cycles:
            for x in cycle:
                if not 1 <= x <= n:
                    raise InvalidIndexError(f"Cycle entry {x} outside 1..{n}")
                if x in touched:
                    raise InvalidIndexError(f"Cycles are not disjoint: {x} repeated")
                touched.add(x)
            for a, b in zip(cycle, list(cycle[1:]) + [cycle[0]]):
                images[a - 1] = b
        return cls(tuple(images))

    @classmethod
    def from_sympy(cls, p: SympyPermutation, n: int | None = None) -> "Permutation":
        size = n if n is not None else p.size
        array = p.array_form + list(range(p.size, size))
        return cls(tuple(x + 1 for x in array))

    def to_sympy(self) -> SympyPermutation:
        return SympyPermutation([x - 1 for x in self.images])

    # -- views ----------------------------------------------------------

    def __call__(self, x: int) -> int:
        return self.images[x - 1]

    def inverse(self) -> "Permutation":
        return Permutation.from_sympy(~self.to_sympy(), self.n)

    def cycles(self) -> tuple[tuple[int, ...], ...]:
        """Nontrivial disjoint cycles in canonical form."""
        canonical = []
        for cycle in self.to_sympy().cyclic_form:
            shifted = [x + 1 for x in cycle]
            k = shifted.index(min(shifted))
            canonical.append(tuple(shifted[k:] + shifted[:k]))
        return tuple(sorted(canonical))

    def orbits(self) -> tuple[tuple[int, ...], ...]:
        """All orbits including fixed points, each sorted, ordered by minimum."""
        blocks = [tuple(sorted(c)) for c in self.cycles()]
        moved = {x for c in blocks for x in c}
        blocks.extend((x,) for x in range(1, self.n + 1) if x not in moved)
        return tuple(sorted(blocks))

    def __str__(self) -> str:
        return format_cycles(self)


def compose(a: Permutation, b: Permutation) -> Permutation:
    """(a ∘ b)(x) = a(b(x))."""
    if a.n != b.n:
        raise DimensionMismatchError(f"Cannot compose permutations of degree {a.n} and {b.n}")
    # sympy multiplies left to right: (p*q)(x) = q(p(x))
    return Permutation.from_sympy(b.to_sympy() * a.to_sympy(), a.n)


def format_cycles(p: Permutation) -> str:
    cycles = p.cycles()
    if not cycles:
        return IDENTITY_TEXT
    return "".join("(" + " ".join(str(x) for x in c) + ")" for c in cycles)


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, n: int) -> Permutation:
    """Reads "(1 2 3)(4 5)" or "e" back into a Permutation of degree n."""
    stripped = text.strip()
    if stripped == IDENTITY_TEXT:
        return Permutation.identity(n)
    if _CYCLE_RE.sub("", stripped).strip():
        raise ValueError(f"Malformed cycle notation: {text!r}")
    cycles = []
    for body in _CYCLE_RE.findall(stripped):
        parts = body.split()
        if len(parts) < 2:
            raise ValueError(f"Cycle {body!r} needs at least two entries")
        cycles.append([int(x) for x in parts])
    return Permutation.from_cycles(n, cycles)


# ------------------------------------------------------------
# ι on ordered transpositions
# ------------------------------------------------------------

@dataclass(frozen=True)
class TranspositionSequence:
    n: int
    seq: tuple[tuple[int, int], ...]

    def __post_init__(self):
        for i, j in self.seq:
            if i == j or not (1 <= i <= self.n and 1 <= j <= self.n):
                raise InvalidIndexError(f"Transposition ({i} {j}) invalid for degree {self.n}")

    @classmethod
    def from_generators(cls, gens: GeneratorSet) -> "TranspositionSequence":
        return cls(gens.dim, tuple(idx.as_pair() for idx in gens.standard_indices()))

    @classmethod
    def from_indices(cls, n: int, indices: Iterable[StandardBasisIndex]) -> "TranspositionSequence":
        return cls(n, tuple(idx.as_pair() for idx in indices))

    def reversed(self) -> "TranspositionSequence":
        return TranspositionSequence(self.n, tuple(reversed(self.seq)))


def iota(ts: TranspositionSequence) -> Permutation:
    """(i0 j0)(i1 j1)...(im jm) composed right to left; empty gives the identity."""
    result = Permutation.identity(ts.n)
    for i, j in ts.seq:
        result = compose(result, Permutation.transposition(ts.n, i, j))
    return result


def cycle_type(p: Permutation) -> tuple[tuple[int, ...], ...]:
    return p.cycles()


def is_n_cycle(p: Permutation) -> bool:
    if p.n == 1:
        return True
    cycles = p.cycles()
    return len(cycles) == 1 and len(cycles[0]) == p.n


# ------------------------------------------------------------
# Orbits
# ------------------------------------------------------------

@dataclass(frozen=True)
class OrbitPartition:
    n: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        flat = sorted(x for b in self.blocks for x in b)
        if flat != list(range(1, self.n + 1)):
            raise ValueError(f"Blocks {self.blocks} do not partition 1..{self.n}")

    @classmethod
    def from_blocks(cls, n: int, blocks: Iterable[Iterable[int]]) -> "OrbitPartition":
        return cls(n, tuple(sorted(tuple(sorted(b)) for b in blocks)))

    @classmethod
    def from_permutation(cls, p: Permutation) -> "OrbitPartition":
        return cls(p.n, p.orbits())

    @property
    def nontrivial_blocks(self) -> tuple[tuple[int, ...], ...]:
        return tuple(b for b in self.blocks if len(b) >= 2)

    @property
    def lie_dimension(self) -> int:
        """Σ_k |O_k|(|O_k| - 1)/2."""
        return sum(len(b) * (len(b) - 1) // 2 for b in self.blocks)


# ------------------------------------------------------------
# Controllability via cycles
# ------------------------------------------------------------

@dataclass(frozen=True)
class CycleVerdict:
    controllable: bool
    witness: tuple[str, ...] | None = None
    permutation: Permutation | None = None


def _require_standard(gens: GeneratorSet) -> None:
    if gens.basis_kind != BasisKind.STANDARD_SON:
        raise GeneratorSetError(f"Cycle test needs standard basis generators, got {gens.basis_kind.value}")


def cycle_controllable(gens: GeneratorSet) -> CycleVerdict:
    """
    n-cycle test. A subset ι-maps to an n-cycle exactly when its edges form
    a spanning tree, and then every ordering works, so the witness is the
    lexicographically first spanning tree of τ(Γ) listed in Γ's order.
    """
    _require_standard(gens)
    from src.combinatorics.liegraph import forest_edges, tau

    n = gens.dim
    if n == 1:
        return CycleVerdict(True, (), Permutation.identity(1))

    g = tau(gens)
    edges = forest_edges(g)
    if len(edges) != n - 1:
        return CycleVerdict(False)

    chosen = set(edges)
    witness = [(label, idx) for label, idx in zip(gens.labels, gens.standard_indices()) if idx.as_pair() in chosen]
    perm = iota(TranspositionSequence.from_indices(n, [idx for _, idx in witness]))
    if not is_n_cycle(perm):
        raise RuntimeError(f"Spanning tree {sorted(chosen)} did not map to an n-cycle: {perm}")
    return CycleVerdict(True, tuple(label for label, _ in witness), perm)


def cycle_controllable_bruteforce(gens: GeneratorSet) -> CycleVerdict:
    """
    Direct search over subsets of size n-1 (generator order) and all their
    orderings. Only for small inputs.
    """
    _require_standard(gens)
    n = gens.dim
    if n == 1:
        return CycleVerdict(True, (), Permutation.identity(1))

    pairs = list(zip(gens.labels, gens.standard_indices()))
    for subset in itertools.combinations(pairs, n - 1):
        for ordering in itertools.permutations(subset):
            perm = iota(TranspositionSequence.from_indices(n, [idx for _, idx in ordering]))
            if is_n_cycle(perm):
                return CycleVerdict(True, tuple(label for label, _ in ordering), perm)
    return CycleVerdict(False)


def submanifold_orbits(gens: GeneratorSet) -> OrbitPartition:
    """Orbits of ι(Ξ) for Ξ the spanning forest subset of Γ."""
    _require_standard(gens)
    from src.combinatorics.liegraph import forest_edges, tau

    edges = forest_edges(tau(gens))
    perm = iota(TranspositionSequence(gens.dim, tuple(edges)))
    return OrbitPartition.from_permutation(perm)
