"""Extended real scalars with the two extended additions.

The extended real line R ∪ {-inf, +inf} carries two additions that differ
only on the pair (+inf, -inf): the *lower* addition, for which -inf is
absorbing, and the *upper* addition, for which +inf is absorbing.  Scalar
multiplication follows the optimization convention 0 * (±inf) = 0.

Finite scalars are exact `fractions.Fraction` values under the default
"rational" backing; a global flag (or the INTERLAB_BACKING environment
variable) switches to plain floats.  Floats entering under rational backing
are read with decimal semantics, so 0.7 becomes exactly 7/10.  NaN is
rejected at construction and can never appear inside arithmetic.

ExtReal is totally ordered with -inf < finite < +inf, so the builtin
``min``/``max`` are the lattice operations on it.
"""

from __future__ import annotations

import math
import os
from decimal import Decimal
from fractions import Fraction
from typing import Union

from .errors import DomainError, InputError

Scalar = Union[int, Fraction, float]

_VALID_BACKINGS = ("rational", "float")
_backing = os.environ.get("INTERLAB_BACKING", "rational")
if _backing not in _VALID_BACKINGS:
    _backing = "rational"


def set_backing(kind: str) -> None:
    """Select the scalar backing, ``"rational"`` (exact) or ``"float"``."""
    global _backing
    if kind not in _VALID_BACKINGS:
        raise InputError(f"unknown backing {kind!r}; expected one of {_VALID_BACKINGS}")
    _backing = kind


def get_backing() -> str:
    return _backing


def as_scalar(x: Scalar) -> Scalar:
    """Coerce a finite number to the active backing.

    Rational backing converts floats via their shortest decimal repr, which
    keeps values like 0.7 exact and makes JSON round trips deterministic.
    """
    if isinstance(x, float):
        if math.isnan(x):
            raise InputError("NaN is not a valid scalar")
        if math.isinf(x):
            raise InputError("infinite scalars must be built as ExtReal infinities")
        return Fraction(Decimal(repr(x))) if _backing == "rational" else x
    if isinstance(x, (int, Fraction)):
        return Fraction(x) if _backing == "rational" else float(x)
    if isinstance(x, str):
        try:
            frac = Fraction(x) if "/" in x else Fraction(Decimal(x))
        except (ValueError, ArithmeticError) as e:
            raise InputError(f"cannot interpret {x!r} as a scalar") from e
        return frac if _backing == "rational" else float(frac)
    raise InputError(f"cannot interpret {x!r} as a scalar")


# Internal kind codes; their ordering encodes -inf < finite < +inf.
_NEG, _FIN, _POS = -1, 0, 1


class ExtReal:
    """An immutable extended real: a finite scalar, +inf, or -inf."""

    __slots__ = ("_kind", "_value")

    def __init__(self, value: Scalar):
        self._kind = _FIN
        self._value = as_scalar(value)

    @classmethod
    def _make(cls, kind: int) -> "ExtReal":
        obj = object.__new__(cls)
        obj._kind = kind
        obj._value = None
        return obj

    @property
    def is_finite(self) -> bool:
        return self._kind == _FIN

    @property
    def is_pos_inf(self) -> bool:
        return self._kind == _POS

    @property
    def is_neg_inf(self) -> bool:
        return self._kind == _NEG

    @property
    def finite_value(self) -> Scalar:
        if self._kind != _FIN:
            raise DomainError(f"{self} has no finite value")
        return self._value

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExtReal):
            return NotImplemented
        if self._kind != other._kind:
            return False
        return self._kind != _FIN or self._value == other._value

    def __hash__(self) -> int:
        return hash((self._kind, self._value))

    def __lt__(self, other: "ExtReal") -> bool:
        if self._kind != other._kind:
            return self._kind < other._kind
        return self._kind == _FIN and self._value < other._value

    def __le__(self, other: "ExtReal") -> bool:
        return self == other or self < other

    def __gt__(self, other: "ExtReal") -> bool:
        return other < self

    def __ge__(self, other: "ExtReal") -> bool:
        return other <= self

    def __neg__(self) -> "ExtReal":
        if self._kind == _FIN:
            return ExtReal(-self._value)
        return NEG_INF if self._kind == _POS else POS_INF

    def __float__(self) -> float:
        if self._kind == _POS:
            return math.inf
        if self._kind == _NEG:
            return -math.inf
        return float(self._value)

    def __repr__(self) -> str:
        if self._kind == _POS:
            return "+inf"
        if self._kind == _NEG:
            return "-inf"
        v = self._value
        if isinstance(v, Fraction) and v.denominator == 1:
            return str(v.numerator)
        return str(v)


POS_INF = ExtReal._make(_POS)
NEG_INF = ExtReal._make(_NEG)
ZERO = ExtReal(0)


def ext(x) -> ExtReal:
    """Build an ExtReal from an ExtReal, a finite number, or "+inf"/"-inf"."""
    if isinstance(x, ExtReal):
        return x
    if isinstance(x, str):
        if x in ("+inf", "inf"):
            return POS_INF
        if x == "-inf":
            return NEG_INF
        if "/" in x:
            return ExtReal(Fraction(x))
        return ExtReal(Fraction(Decimal(x)) if _backing == "rational" else float(x))
    if isinstance(x, float) and math.isinf(x):
        return POS_INF if x > 0 else NEG_INF
    return ExtReal(x)


def lower_add(a: ExtReal, b: ExtReal) -> ExtReal:
    """Extended addition for which -inf is absorbing."""
    if a._kind == _FIN and b._kind == _FIN:
        return ExtReal(a._value + b._value)
    if a._kind == _NEG or b._kind == _NEG:
        return NEG_INF
    return POS_INF


def upper_add(a: ExtReal, b: ExtReal) -> ExtReal:
    """Extended addition for which +inf is absorbing."""
    if a._kind == _FIN and b._kind == _FIN:
        return ExtReal(a._value + b._value)
    if a._kind == _POS or b._kind == _POS:
        return POS_INF
    return NEG_INF


def add(a: ExtReal, b: ExtReal) -> ExtReal:
    """Plain extended addition, defined only when not (+inf) + (-inf)."""
    if a._kind == -b._kind and a._kind != _FIN:
        raise DomainError("(+inf) + (-inf) is undefined for the plain addition")
    return lower_add(a, b)


def scalar_mul(lam: Scalar, a: ExtReal) -> ExtReal:
    """Multiply by a finite scalar; 0 * (±inf) = 0."""
    lam = as_scalar(lam)
    if a._kind == _FIN:
        return ExtReal(lam * a._value)
    if lam == 0:
        return ZERO
    if lam > 0:
        return a
    return -a


def neg(a: ExtReal) -> ExtReal:
    return -a


def pos_part(a: ExtReal) -> ExtReal:
    """max(0, a); always nonnegative."""
    return a if a > ZERO else ZERO


def neg_part(a: ExtReal) -> ExtReal:
    """max(0, -a); always nonnegative."""
    return -a if a < ZERO else ZERO


def abs_value(a: ExtReal) -> ExtReal:
    return -a if a < ZERO else a


def scalar_to_jsonable(x: Scalar):
    """Encode a finite scalar so that decoding reproduces it exactly.

    Values whose float repr round-trips are emitted as JSON numbers;
    anything else (e.g. 1/3 under rational backing) becomes a "p/q" string.
    """
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return int(x)
        f = float(x)
        if not math.isinf(f) and Fraction(Decimal(repr(f))) == x:
            return f
        return f"{x.numerator}/{x.denominator}"
    return x


def to_jsonable(a: ExtReal):
    """Encode an ExtReal as a JSON number, "p/q", "+inf", or "-inf"."""
    if a._kind == _POS:
        return "+inf"
    if a._kind == _NEG:
        return "-inf"
    return scalar_to_jsonable(a._value)


def from_jsonable(v) -> ExtReal:
    """Decode the output of :func:`to_jsonable` (also accepts plain numbers)."""
    if isinstance(v, bool) or not isinstance(v, (int, float, str)):
        raise InputError(f"cannot decode {v!r} as an extended real")
    return ext(v)
