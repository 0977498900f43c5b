# src/algebra/scalars.py
from __future__ import annotations

import numbers
import re
from fractions import Fraction
from typing import Any

from sympy import Basic, I, Rational
from sympy.polys.domains import QQ, QQ_I

# Elements of QQ (rationals) or QQ_I (Gaussian rationals). sympy keeps them
# gcd-reduced with a positive denominator.
Scalar = Any

REAL = QQ
COMPLEX = QQ_I

_RATIONAL = r"\d+(?:\.\d+)?(?:/\d+)?"
_REAL_TERM = re.compile(rf"(?P<sign>[+-]?)(?P<value>{_RATIONAL})")
# I, 2*I, 2/3*I, I/2, 3*I/4
_IMAG_TERM = re.compile(rf"(?P<sign>[+-]?)(?:(?P<coef>{_RATIONAL})\*)?I(?:/(?P<den>\d+))?")
_TERMS = re.compile(r"[+-]?[^+-]+")


def _parse_scalar_text(text: str) -> tuple[Fraction, Fraction]:
    """
    Strict grammar for scalar strings: an optional rational part and an
    optional imaginary part, e.g. "-3/4", "0.5", "1/2 + 2*I", "-I/2".
    Nothing is evaluated.
    """
    compact = "".join(text.split())
    terms = _TERMS.findall(compact)
    if not compact or "".join(terms) != compact or len(terms) > 2:
        raise ValueError(f"Cannot parse scalar {text!r}")

    real_part: Fraction | None = None
    imag_part: Fraction | None = None
    for term in terms:
        if m := _REAL_TERM.fullmatch(term):
            if real_part is not None:
                raise ValueError(f"Cannot parse scalar {text!r}: two real parts")
            real_part = _signed_fraction(m["sign"], m["value"], text)
        elif m := _IMAG_TERM.fullmatch(term):
            if imag_part is not None:
                raise ValueError(f"Cannot parse scalar {text!r}: two imaginary parts")
            value = _signed_fraction(m["sign"], m["coef"] or "1", text)
            if m["den"] is not None:
                value = _divide(value, m["den"], text)
            imag_part = value
        else:
            raise ValueError(f"Cannot parse scalar {text!r}: bad term {term!r}")
    return real_part or Fraction(0), imag_part or Fraction(0)


def _signed_fraction(sign: str, value: str, text: str) -> Fraction:
    try:
        number = Fraction(value)
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError(f"Cannot parse scalar {text!r}: {e}") from e
    return -number if sign == "-" else number


def _divide(value: Fraction, den: str, text: str) -> Fraction:
    if int(den) == 0:
        raise ValueError(f"Cannot parse scalar {text!r}: division by zero")
    return value / int(den)


def _sympy_parts(expr: Basic, value: Any) -> tuple[Fraction, Fraction]:
    if not expr.is_number:
        raise ValueError(f"Scalar {value!r} is not a number")
    real_part, imag_part = expr.as_real_imag()
    if not (real_part.is_rational and imag_part.is_rational):
        raise ValueError(f"Scalar {value!r} is not an exact Gaussian rational")
    return (
        Fraction(int(real_part.p), int(real_part.q)),
        Fraction(int(imag_part.p), int(imag_part.q)),
    )


def to_scalar(value: Any, domain=QQ) -> Scalar:
    """
    Converts ints, Fractions, sympy numbers or strings like "1/2", "3-2*I"
    into an element of `domain`.
    """
    if isinstance(value, bool):
        raise ValueError(f"Boolean {value!r} is not a scalar")
    if isinstance(value, str):
        real_part, imag_part = _parse_scalar_text(value)
    elif isinstance(value, numbers.Integral):
        real_part, imag_part = Fraction(int(value)), Fraction(0)
    elif isinstance(value, Fraction):
        real_part, imag_part = value, Fraction(0)
    elif QQ.of_type(value):
        real_part, imag_part = Fraction(int(value.numerator), int(value.denominator)), Fraction(0)
    elif QQ_I.of_type(value):
        real_part, imag_part = _sympy_parts(QQ_I.to_sympy(value), value)
    elif isinstance(value, Basic):
        real_part, imag_part = _sympy_parts(value, value)
    else:
        raise ValueError(f"Cannot use {type(value).__name__} {value!r} as an exact scalar")

    if domain == QQ:
        if imag_part != 0:
            raise ValueError(f"Scalar {value!r} is not real; use the Gaussian domain")
        return QQ(real_part.numerator, real_part.denominator)
    return QQ_I.from_sympy(
        Rational(real_part.numerator, real_part.denominator)
        + I * Rational(imag_part.numerator, imag_part.denominator)
    )


def format_scalar(value: Scalar, domain=QQ) -> str:
    """Inverse of to_scalar for reports: "0", "-1/2", "1 + 2*I"."""
    return str(domain.to_sympy(value))


def unify_domains(*domains):
    # QQ embeds into QQ_I; any complex operand lifts the result
    return QQ_I if any(d == QQ_I for d in domains) else QQ


def real_coordinates(value: Scalar, domain=QQ) -> tuple[Scalar, Scalar]:
    """(re, im) of a scalar as QQ elements."""
    if domain == QQ:
        return value, QQ.zero
    expr = QQ_I.to_sympy(value)
    real_part, imag_part = expr.as_real_imag()
    return QQ.from_sympy(Rational(real_part)), QQ.from_sympy(Rational(imag_part))


def from_real_coordinates(real_part: Scalar, imag_part: Scalar) -> Scalar:
    return QQ_I.from_sympy(QQ.to_sympy(real_part) + I * QQ.to_sympy(imag_part))
