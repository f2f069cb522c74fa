"""Exact rational scalars and the "p/q" wire format.

Every number in the package is a rational held in lowest terms with an
arbitrary-precision numerator and a positive denominator.  gmpy2's ``mpq``
is used when available (it is a drop-in ``numbers.Rational``), with
``fractions.Fraction`` as the pure-Python fallback.  No value is ever
converted to float.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence, Union

try:
    from gmpy2 import mpq as Q  # type: ignore[import-untyped]
except ImportError:  # pragma: no cover - gmpy2 is normally present
    Q = Fraction

QLike = Union[int, str, Fraction, "Q"]

ZERO = Q(0)
ONE = Q(1)


def qof(value: QLike) -> Q:
    """Coerce ints, Fractions, and "p/q" strings to the canonical rational type."""
    if isinstance(value, float):
        raise TypeError("floats are not accepted; use exact rationals")
    return Q(value)


def qstr(value: QLike) -> str:
    """Serialize a rational as "p/q", omitting the denominator when it is 1."""
    q = qof(value)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def qparse(text: str) -> Q:
    """Parse the "p/q" wire format (also accepts a bare integer string)."""
    if not isinstance(text, str):
        raise TypeError(f"expected a 'p/q' string, got {type(text).__name__}")
    q = Q(text.strip())
    if q.denominator <= 0:  # mpq/Fraction normalize, so this cannot trigger
        raise ValueError(f"non-positive denominator in {text!r}")
    return q


def qvec(values: Iterable[QLike]) -> tuple[Q, ...]:
    return tuple(qof(v) for v in values)


def vec_str(vector: Sequence[QLike]) -> list[str]:
    return [qstr(v) for v in vector]


def vec_parse(items: Sequence[str]) -> tuple[Q, ...]:
    return tuple(qparse(s) for s in items)
