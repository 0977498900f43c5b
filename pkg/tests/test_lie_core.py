from __future__ import annotations

import itertools

import pytest
from sympy import I, Rational
from sympy.polys.domains import QQ, QQ_I

from src.algebra.echelon import EchelonBuilder, matrix_rank
from src.algebra.lie_core import (
    BasisKind,
    ExactMatrix,
    GeneratorSet,
    SpanBasis,
    StandardBasisIndex,
    bracket,
    bracket_chain,
    bracket_structure,
    exact_determinant,
    larc_controllable,
    lie_closure,
    linear_combination,
    membership,
    omega,
    son_dimension,
    standard_index_of,
    standard_indices,
)
from src.algebra.scalars import COMPLEX, format_scalar, to_scalar
from src.decomp.sl3c import SL3_LABELS, sl3_generator_set
from src.errors import DimensionMismatchError, GeneratorSetError, InvalidIndexError


def test_omega_is_skew_with_single_pair():
    m = omega(4, 2, 4)
    assert m.is_skew_symmetric()
    assert m.entry(2, 4) == QQ(1)
    assert m.entry(4, 2) == QQ(-1)
    assert sum(1 for row in m.rows for x in row if x != 0) == 2


@pytest.mark.parametrize("n, i, j", [(3, 2, 2), (3, 3, 1), (3, 0, 2), (3, 1, 4)])
def test_omega_rejects_invalid_indices(n, i, j):
    with pytest.raises(InvalidIndexError):
        omega(n, i, j)


def test_standard_basis_index_rejects_unordered_pair():
    with pytest.raises(InvalidIndexError):
        StandardBasisIndex(2, 2)
    with pytest.raises(InvalidIndexError):
        StandardBasisIndex(1, 5).validate(4)


def test_bracket_of_omega13_and_omega12_is_omega23():
    assert bracket(omega(3, 1, 3), omega(3, 1, 2)) == omega(3, 2, 3)


def test_bracket_is_antisymmetric():
    a, b = omega(4, 1, 2), omega(4, 2, 3)
    assert bracket(a, b) == -bracket(b, a)
    assert bracket(a, a).is_zero()


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_bracket_structure_matches_commutator(n):
    for p, q in itertools.product(standard_indices(n), repeat=2):
        actual = bracket(omega(n, p.i, p.j), omega(n, q.i, q.j))
        predicted = bracket_structure(n, p, q)
        if predicted is None:
            assert actual.is_zero()
        else:
            sign, idx = predicted
            assert actual == omega(n, idx.i, idx.j).scale(sign)


def test_standard_index_of_recognizes_signed_elements():
    assert standard_index_of(omega(4, 1, 3)) == (1, StandardBasisIndex(1, 3))
    assert standard_index_of(-omega(4, 1, 3)) == (-1, StandardBasisIndex(1, 3))
    assert standard_index_of(ExactMatrix.zeros(4)) is None
    with pytest.raises(ValueError):
        standard_index_of(omega(4, 1, 2) + omega(4, 3, 4))


def test_exact_matrix_requires_square_rows():
    with pytest.raises(DimensionMismatchError):
        ExactMatrix.from_entries([[1, 2], [3]])


def test_dimension_mismatch_on_arithmetic():
    with pytest.raises(DimensionMismatchError):
        omega(3, 1, 2) + omega(4, 1, 2)


def test_scalars_parse_rationals_and_gaussian_rationals():
    assert to_scalar("1/2") == QQ(1, 2)
    assert format_scalar(to_scalar("-3/4")) == "-3/4"
    z = to_scalar("1/2 + 2*I", COMPLEX)
    assert QQ_I.to_sympy(z).as_real_imag() == (QQ.to_sympy(QQ(1, 2)), 2)
    with pytest.raises(ValueError):
        to_scalar("2*I")
    with pytest.raises(ValueError):
        to_scalar(True)


@pytest.mark.parametrize(
    "text, real, imag",
    [
        ("7", 7, 0),
        ("-3/4", Rational(-3, 4), 0),
        ("0.25", Rational(1, 4), 0),
        ("I", 0, 1),
        ("-I/2", 0, Rational(-1, 2)),
        ("3*I/4", 0, Rational(3, 4)),
        ("2/3*I", 0, Rational(2, 3)),
        ("1/2 - 3*I/4", Rational(1, 2), Rational(-3, 4)),
    ],
)
def test_scalar_grammar_accepts_rational_and_gaussian_forms(text, real, imag):
    z = to_scalar(text, COMPLEX)
    assert QQ_I.to_sympy(z) == real + I * imag


@pytest.mark.parametrize(
    "text",
    ["", "x", "1/0", "1 + 2", "I + I", "2**3", "--1", "sqrt(2)", "__import__('os').getcwd()", "1e3"],
)
def test_scalar_grammar_rejects_everything_else(text):
    with pytest.raises(ValueError):
        to_scalar(text, COMPLEX)


def test_gaussian_scalars_round_trip_through_format():
    for text in ("1/2 + 2*I", "-I/2", "3 - I", "5*I/7"):
        z = to_scalar(text, COMPLEX)
        assert to_scalar(format_scalar(z, COMPLEX), COMPLEX) == z


def test_linear_combination_and_mixed_domains():
    m = linear_combination([("1/2", omega(3, 1, 2)), (2, omega(3, 2, 3))])
    assert m.entry(1, 2) == QQ(1, 2)
    assert m.entry(3, 2) == QQ(-2)
    lifted = omega(3, 1, 2) + ExactMatrix.zeros(3, COMPLEX)
    assert lifted.domain == QQ_I


def test_exact_determinant_of_integer_array():
    assert exact_determinant([[2, 1], [1, 2]]) == 3
    assert exact_determinant([]) == 1


def test_generator_set_rejects_duplicates_and_wrong_dims():
    with pytest.raises(GeneratorSetError):
        GeneratorSet(3, (("a", omega(3, 1, 2)), ("a", omega(3, 2, 3))))
    with pytest.raises(DimensionMismatchError):
        GeneratorSet(3, (("a", omega(4, 1, 2)),))


def test_standard_generator_set_requires_standard_elements():
    with pytest.raises(GeneratorSetError):
        GeneratorSet(3, (("x", -omega(3, 1, 2)),), BasisKind.STANDARD_SON)


def test_standard_keeps_order_and_labels():
    gens = GeneratorSet.standard(4, [(3, 4), (1, 2)])
    assert gens.labels == ("Omega(3,4)", "Omega(1,2)")
    assert [idx.as_pair() for idx in gens.standard_indices()] == [(3, 4), (1, 2)]
    assert gens.by_mask(0b10).labels == ("Omega(1,2)",)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_full_standard_basis_closure_has_full_rank(n):
    assert lie_closure(GeneratorSet.full_standard(n)).rank == son_dimension(n)


def test_closure_rank_of_worked_systems(chain_so5, two_blocks_so5, path_with_isolated_vertex_so5):
    assert lie_closure(chain_so5).rank == 10
    assert lie_closure(two_blocks_so5).rank == 4
    assert lie_closure(path_with_isolated_vertex_so5).rank == 6


def test_empty_generator_set_has_no_closure():
    with pytest.raises(GeneratorSetError):
        lie_closure(GeneratorSet(3, ()))


def test_larc_controllable_checks_declared_dimension(chain_so5, two_blocks_so5):
    assert larc_controllable(chain_so5, 10)
    assert not larc_controllable(two_blocks_so5, 10)
    with pytest.raises(DimensionMismatchError):
        larc_controllable(chain_so5, 26)
    with pytest.raises(DimensionMismatchError):
        larc_controllable(chain_so5, 3)


def test_span_membership_and_equality():
    span = lie_closure(GeneratorSet.standard(3, [(1, 2), (2, 3)]))
    assert membership(span, omega(3, 1, 3))
    assert span.same_span(SpanBasis.from_matrices([omega(3, i, j) for i, j in [(1, 2), (1, 3), (2, 3)]]))
    assert not span.contains(ExactMatrix.unit(3, 1, 1))


def test_closure_rank_matches_domain_matrix_rank(chain_so5):
    span = lie_closure(chain_so5)
    vectors = [m.vectorize() for m in span.basis]
    assert matrix_rank(vectors, 25, QQ) == span.rank


def test_echelon_builder_rejects_dependent_vectors():
    builder = EchelonBuilder(3, QQ)
    assert builder.insert([QQ(1), QQ(2), QQ(0)])
    assert builder.insert([QQ(0), QQ(1), QQ(1)])
    assert not builder.insert([QQ(2), QQ(5), QQ(1)])
    assert builder.rank == 2


def test_sl3_closure_complex_and_real_scalars():
    full = sl3_generator_set(SL3_LABELS)
    assert lie_closure(full).rank == 8
    # real span of real matrices stays in sl(3, R)
    assert lie_closure(full, real_scalars=True).rank == 8

    i_h1 = ExactMatrix.from_entries([["I", 0, 0], [0, "-I", 0], [0, 0, 0]], COMPLEX)
    with_imaginary = GeneratorSet(3, full.generators + (("iH1", i_h1),), BasisKind.RAW)
    assert lie_closure(with_imaginary).rank == 8
    assert lie_closure(with_imaginary, real_scalars=True).rank == 16


def test_real_scalar_span_basis_rebuilds_complex_matrices():
    i_h1 = ExactMatrix.from_entries([["I", 0, 0], [0, "-I", 0], [0, 0, 0]], COMPLEX)
    span = lie_closure(GeneratorSet(3, (("iH1", i_h1),)), real_scalars=True)
    assert span.rank == 1
    assert span.contains(i_h1)
    assert span.basis[0].domain == QQ_I


def test_bracket_chain_for_path_with_isolated_vertex(path_with_isolated_vertex_so5):
    chain = bracket_chain(path_with_isolated_vertex_so5)
    pairs = [{idx.as_pair() for idx in level} for level in chain]
    assert pairs[0] == {(1, 2), (2, 3), (3, 4)}
    assert pairs[1] - pairs[0] == {(1, 3), (2, 4)}
    assert pairs[2] - pairs[1] == {(1, 4)}
    assert len(chain) == 3


def _closures_by_mask(n):
    gens = GeneratorSet.full_standard(n)
    return {mask: lie_closure(gens.by_mask(mask)) for mask in range(1, 1 << len(gens))}


@pytest.mark.parametrize("n", [2, 3, 4])
def test_closure_is_monotone_in_the_generators(n):
    spans = _closures_by_mask(n)
    for sub, sup in itertools.product(spans, repeat=2):
        if sub & ~sup:
            continue
        assert all(spans[sup].contains(m) for m in spans[sub].basis), (sub, sup)
        assert spans[sub].rank <= spans[sup].rank


@pytest.mark.parametrize("n", [2, 3, 4])
def test_closing_a_closure_adds_nothing(n):
    for mask, span in _closures_by_mask(n).items():
        again = lie_closure(GeneratorSet(n, tuple((f"b{k}", m) for k, m in enumerate(span.basis))))
        assert again.rank == span.rank, mask
        assert again.same_span(span), mask


def test_closing_the_sl3_closure_adds_nothing():
    span = lie_closure(sl3_generator_set(["X3", "Y3"]))
    again = lie_closure(GeneratorSet(3, tuple((f"b{k}", m) for k, m in enumerate(span.basis))))
    assert (again.rank, span.rank) == (3, 3)
    assert again.same_span(span)
