# src/algebra/lie_core.py
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterable, Sequence

from sympy.polys.domains import QQ, QQ_I, ZZ
from sympy.polys.matrices import DomainMatrix

from src.algebra.echelon import EchelonBuilder, EchelonRows, echelon_from_vectors
from src.algebra.scalars import (
    Scalar,
    format_scalar,
    from_real_coordinates,
    real_coordinates,
    to_scalar,
    unify_domains,
)
from src.errors import DimensionMismatchError, GeneratorSetError, InvalidIndexError

log = logging.getLogger(__name__)


# ------------------------------------------------------------
# Matrices
# ------------------------------------------------------------

@dataclass(frozen=True)
class ExactMatrix:
    """
    Square matrix with exact entries from QQ or QQ_I.

    Products go through sympy's DomainMatrix; entries are kept as a tuple of
    rows so the value is hashable and comparable.
    """

    rows: tuple[tuple[Scalar, ...], ...]
    domain: Any = QQ

    def __post_init__(self):
        n = len(self.rows)
        if n == 0:
            raise DimensionMismatchError("ExactMatrix needs at least one row")
        for r, row in enumerate(self.rows):
            if len(row) != n:
                raise DimensionMismatchError(f"Row {r + 1} has {len(row)} entries, expected {n} (square)")

    # -- constructors -------------------------------------------------

    @classmethod
    def from_entries(cls, entries: Sequence[Sequence[Any]], domain=QQ) -> "ExactMatrix":
        rows = tuple(tuple(to_scalar(x, domain) for x in row) for row in entries)
        return cls(rows, domain)

    @classmethod
    def zeros(cls, n: int, domain=QQ) -> "ExactMatrix":
        if n < 1:
            raise DimensionMismatchError(f"Matrix dimension must be positive, got {n}")
        return cls(tuple(tuple(domain.zero for _ in range(n)) for _ in range(n)), domain)

    @classmethod
    def unit(cls, n: int, i: int, j: int, domain=QQ) -> "ExactMatrix":
        """E_ij: 1 at (i, j), 1-based."""
        if not (1 <= i <= n and 1 <= j <= n):
            raise InvalidIndexError(f"Unit matrix index ({i},{j}) outside 1..{n}")
        return cls(
            tuple(
                tuple(domain.one if (r, c) == (i - 1, j - 1) else domain.zero for c in range(n))
                for r in range(n)
            ),
            domain,
        )

    @classmethod
    def from_domain_matrix(cls, dm: DomainMatrix) -> "ExactMatrix":
        return cls(tuple(tuple(row) for row in dm.to_list()), dm.domain)

    # -- views ----------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.rows)

    def to_domain_matrix(self) -> DomainMatrix:
        return DomainMatrix([list(r) for r in self.rows], (self.dim, self.dim), self.domain)

    def vectorize(self) -> tuple[Scalar, ...]:
        """Row-major coordinates over the n² entries."""
        return tuple(x for row in self.rows for x in row)

    def real_vectorize(self) -> tuple[Scalar, ...]:
        """Row-major (re, im) pairs: 2n² real coordinates."""
        coords: list[Scalar] = []
        for x in self.vectorize():
            coords.extend(real_coordinates(x, self.domain))
        return tuple(coords)

    def entry(self, i: int, j: int) -> Scalar:
        return self.rows[i - 1][j - 1]

    def to_strings(self) -> list[list[str]]:
        return [[format_scalar(x, self.domain) for x in row] for row in self.rows]

    def __str__(self) -> str:
        cells = self.to_strings()
        width = max(len(c) for row in cells for c in row)
        return "\n".join("[" + " ".join(c.rjust(width) for c in row) + "]" for row in cells)

    # -- arithmetic -----------------------------------------------------

    def convert_to(self, domain) -> "ExactMatrix":
        if domain == self.domain:
            return self
        return ExactMatrix.from_domain_matrix(self.to_domain_matrix().convert_to(domain))

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        a, b = _aligned(self, other)
        return ExactMatrix.from_domain_matrix(a.to_domain_matrix() + b.to_domain_matrix())

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        a, b = _aligned(self, other)
        return ExactMatrix.from_domain_matrix(a.to_domain_matrix() - b.to_domain_matrix())

    def __neg__(self) -> "ExactMatrix":
        return ExactMatrix.from_domain_matrix(-self.to_domain_matrix())

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        a, b = _aligned(self, other)
        return ExactMatrix.from_domain_matrix(a.to_domain_matrix() * b.to_domain_matrix())

    def scale(self, factor: Any) -> "ExactMatrix":
        """Multiplies by a domain element or anything to_scalar accepts."""
        c = factor if self.domain.of_type(factor) else to_scalar(factor, self.domain)
        return ExactMatrix(tuple(tuple(c * x for x in row) for row in self.rows), self.domain)

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(tuple(zip(*self.rows)), self.domain)

    def trace(self) -> Scalar:
        total = self.domain.zero
        for k in range(self.dim):
            total += self.rows[k][k]
        return total

    def is_zero(self) -> bool:
        zero = self.domain.zero
        return all(x == zero for row in self.rows for x in row)

    def is_skew_symmetric(self) -> bool:
        return (self + self.transpose()).is_zero()

    def is_symmetric(self) -> bool:
        return self == self.transpose()

    def is_traceless(self) -> bool:
        return self.trace() == self.domain.zero


def _aligned(a: ExactMatrix, b: ExactMatrix) -> tuple[ExactMatrix, ExactMatrix]:
    if a.dim != b.dim:
        raise DimensionMismatchError(f"Dimension mismatch: {a.dim}x{a.dim} vs {b.dim}x{b.dim}")
    domain = unify_domains(a.domain, b.domain)
    return a.convert_to(domain), b.convert_to(domain)


def linear_combination(terms: Iterable[tuple[Any, ExactMatrix]]) -> ExactMatrix:
    """Σ c_k M_k; all M_k must share a dimension."""
    terms = list(terms)
    if not terms:
        raise GeneratorSetError("linear_combination needs at least one term")
    total = None
    for coef, m in terms:
        part = m.scale(coef)
        total = part if total is None else total + part
    return total


def exact_determinant(entries: Sequence[Sequence[Any]]) -> int | Scalar:
    """Exact determinant of an integer (or rational) square array."""
    n = len(entries)
    if n == 0:
        return 1
    if all(isinstance(x, int) for row in entries for x in row):
        return int(DomainMatrix([[ZZ(x) for x in row] for row in entries], (n, n), ZZ).det())
    return ExactMatrix.from_entries(entries).to_domain_matrix().det()


# ------------------------------------------------------------
# Standard basis of so(n)
# ------------------------------------------------------------

@dataclass(frozen=True, order=True)
class StandardBasisIndex:
    i: int
    j: int

    def __post_init__(self):
        if not self.i < self.j:
            raise InvalidIndexError(f"Standard basis index needs i < j, got ({self.i},{self.j})")
        if self.i < 1:
            raise InvalidIndexError(f"Standard basis index must be 1-based, got ({self.i},{self.j})")

    def validate(self, n: int) -> "StandardBasisIndex":
        if self.j > n:
            raise InvalidIndexError(f"Index ({self.i},{self.j}) out of range for n={n}")
        return self

    @property
    def label(self) -> str:
        return f"Omega({self.i},{self.j})"

    def as_pair(self) -> tuple[int, int]:
        return (self.i, self.j)


def son_dimension(n: int) -> int:
    return n * (n - 1) // 2


def standard_indices(n: int) -> list[StandardBasisIndex]:
    return [StandardBasisIndex(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]


def omega(n: int, i: int, j: int, domain=QQ) -> ExactMatrix:
    """Ω_ij: +1 at (i, j), -1 at (j, i)."""
    if not (1 <= i < j <= n):
        raise InvalidIndexError(f"omega needs 1 <= i < j <= n, got i={i} j={j} n={n}")
    one, zero = domain.one, domain.zero
    rows = []
    for r in range(1, n + 1):
        row = []
        for c in range(1, n + 1):
            if (r, c) == (i, j):
                row.append(one)
            elif (r, c) == (j, i):
                row.append(-one)
            else:
                row.append(zero)
        rows.append(tuple(row))
    return ExactMatrix(tuple(rows), domain)


def bracket(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    """[A, B] = AB - BA."""
    a, b = _aligned(a, b)
    x, y = a.to_domain_matrix(), b.to_domain_matrix()
    return ExactMatrix.from_domain_matrix(x * y - y * x)


def _signed_index(a: int, b: int) -> tuple[int, StandardBasisIndex] | None:
    if a == b:
        return None
    if a < b:
        return (1, StandardBasisIndex(a, b))
    return (-1, StandardBasisIndex(b, a))


def bracket_structure(
    n: int, p: StandardBasisIndex, q: StandardBasisIndex
) -> tuple[int, StandardBasisIndex] | None:
    """
    [Ω_ij, Ω_kl] = δ_jk Ω_il + δ_il Ω_jk + δ_jl Ω_ki + δ_ik Ω_lj
    evaluated symbolically, with Ω_ba = -Ω_ab.

    Returns (sign, index) or None when the bracket vanishes.
    """
    p.validate(n)
    q.validate(n)
    i, j, k, l = p.i, p.j, q.i, q.j

    terms: dict[StandardBasisIndex, int] = {}
    for delta, (a, b) in (
        (j == k, (i, l)),
        (i == l, (j, k)),
        (j == l, (k, i)),
        (i == k, (l, j)),
    ):
        if not delta:
            continue
        signed = _signed_index(a, b)
        if signed is None:
            continue
        sign, idx = signed
        terms[idx] = terms.get(idx, 0) + sign

    nonzero = [(s, idx) for idx, s in terms.items() if s != 0]
    if not nonzero:
        return None
    if len(nonzero) > 1 or abs(nonzero[0][0]) != 1:
        raise RuntimeError(f"Bracket of {p.label} and {q.label} is not a single signed basis element")
    return nonzero[0]


def standard_index_of(m: ExactMatrix) -> tuple[int, StandardBasisIndex] | None:
    """Recognizes ±Ω_ij; returns None for the zero matrix, raises otherwise."""
    if m.is_zero():
        return None
    n = m.dim
    zero = m.domain.zero
    idx = next((s for s in standard_indices(n) if m.entry(s.i, s.j) != zero), None)
    if idx is not None:
        base = omega(n, idx.i, idx.j, m.domain)
        if m == base:
            return (1, idx)
        if m == -base:
            return (-1, idx)
    raise ValueError(f"Matrix is not a signed standard basis element:\n{m}")


# ------------------------------------------------------------
# Generator sets
# ------------------------------------------------------------

class BasisKind(str, Enum):
    STANDARD_SON = "standard_son"
    SON_SPLIT = "son_split"
    SL3C = "sl3c"
    FORMATION = "formation"
    RAW = "raw"


@dataclass(frozen=True)
class GeneratorSet:
    """Ordered, labelled vector fields Γ of a bilinear system (drift included as an ordinary member)."""

    dim: int
    generators: tuple[tuple[str, ExactMatrix], ...]
    basis_kind: BasisKind = BasisKind.RAW
    _standard: tuple[StandardBasisIndex, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        if self.dim < 1:
            raise DimensionMismatchError(f"Generator set dimension must be positive, got {self.dim}")
        seen: set[str] = set()
        for label, m in self.generators:
            if label in seen:
                raise GeneratorSetError(f"Duplicate generator label {label!r}")
            seen.add(label)
            if m.dim != self.dim:
                raise DimensionMismatchError(f"Generator {label!r} is {m.dim}x{m.dim}, expected {self.dim}x{self.dim}")

        if self.basis_kind == BasisKind.STANDARD_SON:
            indices = []
            for label, m in self.generators:
                try:
                    signed = standard_index_of(m)
                except ValueError:
                    signed = None
                if signed is None or signed[0] != 1:
                    raise GeneratorSetError(f"Generator {label!r} is not a standard basis element Omega_ij")
                indices.append(signed[1])
            object.__setattr__(self, "_standard", tuple(indices))

    # -- constructors ---------------------------------------------------

    @classmethod
    def standard(cls, n: int, pairs: Iterable[tuple[int, int] | StandardBasisIndex]) -> "GeneratorSet":
        gens = []
        for pair in pairs:
            idx = pair if isinstance(pair, StandardBasisIndex) else StandardBasisIndex(*pair)
            idx.validate(n)
            gens.append((idx.label, omega(n, idx.i, idx.j)))
        return cls(n, tuple(gens), BasisKind.STANDARD_SON)

    @classmethod
    def full_standard(cls, n: int) -> "GeneratorSet":
        return cls.standard(n, standard_indices(n))

    # -- views ----------------------------------------------------------

    def __len__(self) -> int:
        return len(self.generators)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.generators)

    @property
    def matrices(self) -> tuple[ExactMatrix, ...]:
        return tuple(m for _, m in self.generators)

    @property
    def domain(self):
        return unify_domains(*(m.domain for m in self.matrices)) if self.generators else QQ

    def standard_indices(self) -> tuple[StandardBasisIndex, ...]:
        self.require_kind(BasisKind.STANDARD_SON)
        return self._standard

    def require_kind(self, kind: BasisKind) -> None:
        if self.basis_kind != kind:
            raise GeneratorSetError(f"Operation needs basis_kind={kind.value}, got {self.basis_kind.value}")

    def subset(self, labels: Iterable[str]) -> "GeneratorSet":
        """Generators whose label is in `labels`, in this set's order."""
        wanted = set(labels)
        unknown = wanted - set(self.labels)
        if unknown:
            raise GeneratorSetError(f"Unknown generator labels: {sorted(unknown)}")
        return GeneratorSet(
            self.dim,
            tuple((label, m) for label, m in self.generators if label in wanted),
            self.basis_kind,
        )

    def by_mask(self, mask: int) -> "GeneratorSet":
        """Subset selected by bit k of `mask` for the k-th generator."""
        return GeneratorSet(
            self.dim,
            tuple(g for k, g in enumerate(self.generators) if mask >> k & 1),
            self.basis_kind,
        )


# ------------------------------------------------------------
# Spans and Lie closure
# ------------------------------------------------------------

@dataclass(frozen=True)
class SpanBasis:
    """
    Subspace of n×n matrices in reduced echelon form over row-major coordinates.

    With `real_scalars` the coordinates are the 2n² real and imaginary parts,
    i.e. the span is taken over the reals.
    """

    dim_ambient: int
    echelon: EchelonRows
    real_scalars: bool = False

    @property
    def rank(self) -> int:
        return self.echelon.rank

    @property
    def domain(self):
        return self.echelon.domain

    @property
    def basis(self) -> tuple[ExactMatrix, ...]:
        n = self.dim_ambient
        if self.real_scalars:
            out = []
            for row in self.echelon.rows:
                entries = [from_real_coordinates(row[2 * k], row[2 * k + 1]) for k in range(n * n)]
                out.append(ExactMatrix(tuple(tuple(entries[r * n:(r + 1) * n]) for r in range(n)), QQ_I))
            return tuple(out)
        return tuple(
            ExactMatrix(tuple(tuple(row[r * n:(r + 1) * n]) for r in range(n)), self.domain)
            for row in self.echelon.rows
        )

    def coordinates(self, m: ExactMatrix) -> tuple[Scalar, ...]:
        if m.dim != self.dim_ambient:
            raise DimensionMismatchError(f"Matrix is {m.dim}x{m.dim}, span lives in {self.dim_ambient}x{self.dim_ambient}")
        if self.real_scalars:
            return m.real_vectorize()
        return m.convert_to(self.domain).vectorize()

    def contains(self, m: ExactMatrix) -> bool:
        return self.echelon.contains(self.coordinates(m))

    def same_span(self, other: "SpanBasis") -> bool:
        if self.dim_ambient != other.dim_ambient or self.real_scalars != other.real_scalars:
            return False
        if self.domain != other.domain:
            domain = unify_domains(self.domain, other.domain)
            return _lift(self, domain).echelon == _lift(other, domain).echelon
        return self.echelon == other.echelon

    @classmethod
    def from_matrices(cls, matrices: Sequence[ExactMatrix], real_scalars: bool = False, dim: int | None = None) -> "SpanBasis":
        if not matrices and dim is None:
            raise GeneratorSetError("Cannot infer the ambient dimension of an empty span")
        n = dim if dim is not None else matrices[0].dim
        domain = QQ if real_scalars else unify_domains(*(m.domain for m in matrices))
        width = 2 * n * n if real_scalars else n * n
        span = cls(n, echelon_from_vectors((), width, domain), real_scalars)
        vectors = [span.coordinates(m) for m in matrices]
        return cls(n, echelon_from_vectors(vectors, width, domain), real_scalars)


def _lift(span: SpanBasis, domain) -> SpanBasis:
    return SpanBasis.from_matrices([m.convert_to(domain) for m in span.basis], span.real_scalars, span.dim_ambient)


def membership(span: SpanBasis, m: ExactMatrix) -> bool:
    return span.contains(m)


def lie_closure_elements(gens: GeneratorSet, real_scalars: bool = False) -> tuple[SpanBasis, tuple[ExactMatrix, ...]]:
    """
    Closure of span(Γ) under brackets.

    Semi-naive rounds: every element added in the previous round is
    bracketed against all kept elements; the loop ends when a round adds
    nothing. Returns the span and the kept (independent) bracket elements.
    """
    if len(gens) == 0:
        raise GeneratorSetError("lie_closure needs a nonempty generator set")

    n = gens.dim
    domain = QQ if real_scalars else gens.domain
    width = 2 * n * n if real_scalars else n * n
    builder = EchelonBuilder(width, domain)

    def coords(m: ExactMatrix):
        return m.real_vectorize() if real_scalars else m.convert_to(domain).vectorize()

    elements: list[ExactMatrix] = []
    for _, m in gens.generators:
        if builder.insert(coords(m)):
            elements.append(m)

    frontier = list(elements)
    rounds = 0
    while frontier:
        rounds += 1
        added: list[ExactMatrix] = []
        for a in frontier:
            for b in list(elements):
                c = bracket(a, b)
                if c.is_zero():
                    continue
                if builder.insert(coords(c)):
                    elements.append(c)
                    added.append(c)
        log.debug("closure round=%d added=%d rank=%d", rounds, len(added), builder.rank)
        frontier = added

    return SpanBasis(n, builder.freeze(), real_scalars), tuple(elements)


def lie_closure(gens: GeneratorSet, real_scalars: bool = False) -> SpanBasis:
    span, _ = lie_closure_elements(gens, real_scalars)
    return span


def ambient_dimension(n: int, domain=QQ, real_scalars: bool = False) -> int:
    """Largest possible closure rank for n×n matrices."""
    if real_scalars and domain == QQ_I:
        return 2 * n * n
    return n * n


def larc_controllable(gens: GeneratorSet, full_dim: int, real_scalars: bool = False) -> bool:
    """Lie algebra rank condition: rank(Lie(Γ)) == dim g."""
    bound = ambient_dimension(gens.dim, gens.domain, real_scalars)
    if full_dim < 0 or full_dim > bound:
        raise DimensionMismatchError(
            f"full_dim={full_dim} is inconsistent with {gens.dim}x{gens.dim} matrices (at most {bound})"
        )
    rank = lie_closure(gens, real_scalars).rank
    if rank > full_dim:
        raise DimensionMismatchError(f"Lie closure rank {rank} exceeds declared full_dim={full_dim}")
    return rank == full_dim


def bracket_chain(gens: GeneratorSet) -> list[frozenset[StandardBasisIndex]]:
    """
    Graded bracket sets for standard basis generators:
    Γ^{m+1} = Γ^m ∪ {±[C, D] != 0 : C, D in Γ^m}, signs dropped.

    The returned chain ends at the first m with Γ^{m+1} = Γ^m.
    """
    n = gens.dim
    current = frozenset(gens.standard_indices())
    chain = [current]
    while True:
        grown = set(current)
        ordered = sorted(current)
        for a_pos, a in enumerate(ordered):
            ma = omega(n, a.i, a.j)
            for b in ordered[a_pos + 1:]:
                signed = standard_index_of(bracket(ma, omega(n, b.i, b.j)))
                if signed is not None:
                    grown.add(signed[1])
        nxt = frozenset(grown)
        if nxt == current:
            return chain
        chain.append(nxt)
        current = nxt
