"""The lattice of measurable functions modulo almost-everywhere equality.

A function is an atom-indexed vector of extended reals on a fixed space.
Two functions are equal as classes when they agree on every atom of positive
weight; ordering works the same way.  Representatives are stored exactly as
given (never normalized), so every comparison goes through the null-atom
filter.

On an atomic space the essential infimum of a finite family is the
per-atom minimum, which this module computes literally on all atoms; the
result is then simultaneously a pointwise and an essential greatest lower
bound.

Integrability classification splits functions into the integrable cone
(both parts finite), the two semi-integrable cones, and the rest:

* L1_PLUS  - positive part has finite integral (so f < +inf a.e.);
* L1_MINUS - negative part has finite integral (so f > -inf a.e.);
* L1_FULL  - both;
* L0_ONLY  - neither.
"""

from __future__ import annotations

from enum import Enum
from typing import Callable, Iterable, Sequence, Tuple

from .errors import InputError
from .extreal import (
    NEG_INF,
    POS_INF,
    ZERO,
    ExtReal,
    Scalar,
    abs_value,
    add,
    as_scalar,
    ext,
    lower_add,
    neg,
    neg_part,
    pos_part,
    scalar_mul,
    to_jsonable,
    upper_add,
)
from .measure import MeasureSpace


class IntegrabilityTag(Enum):
    L1_FULL = "L1_FULL"
    L1_PLUS = "L1_PLUS"
    L1_MINUS = "L1_MINUS"
    L0_ONLY = "L0_ONLY"

    @property
    def semi_integrable(self) -> bool:
        return self is not IntegrabilityTag.L0_ONLY

    @property
    def in_l1_plus(self) -> bool:
        return self in (IntegrabilityTag.L1_PLUS, IntegrabilityTag.L1_FULL)

    @property
    def in_l1_minus(self) -> bool:
        return self in (IntegrabilityTag.L1_MINUS, IntegrabilityTag.L1_FULL)


class FnClass:
    """A measurable function as a vector of ExtReal values over the atoms."""

    __slots__ = ("space", "values")

    def __init__(self, space: MeasureSpace, values: Sequence):
        if len(values) != len(space.atoms):
            raise InputError(
                f"function has {len(values)} values for {len(space.atoms)} atoms"
            )
        self.space = space
        self.values = tuple(ext(v) for v in values)

    @classmethod
    def constant(cls, space: MeasureSpace, value) -> "FnClass":
        return cls(space, [ext(value)] * len(space.atoms))

    def value_at(self, atom: str) -> ExtReal:
        return self.values[self.space.index(atom)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, FnClass):
            return NotImplemented
        if self.space != other.space:
            return False
        return all(
            self.values[i] == other.values[i] for i in self.space.non_null_indices()
        )

    def __hash__(self) -> int:
        return hash(
            (self.space, tuple(self.values[i] for i in self.space.non_null_indices()))
        )

    def __repr__(self) -> str:
        return f"FnClass({list(self.values)!r})"

    def map(self, op: Callable[[ExtReal], ExtReal]) -> "FnClass":
        return FnClass(self.space, [op(v) for v in self.values])

    def to_jsonable(self) -> list:
        return [to_jsonable(v) for v in self.values]


def _same_space(f: FnClass, g: FnClass) -> None:
    if f.space != g.space:
        raise InputError("functions live on different measure spaces")


def mu_leq(f: FnClass, g: FnClass) -> bool:
    """f <= g outside a null set, i.e. on every atom of positive weight."""
    _same_space(f, g)
    return all(f.values[i] <= g.values[i] for i in f.space.non_null_indices())


def leq_everywhere(f: FnClass, g: FnClass) -> bool:
    """Plain pointwise order, null atoms included."""
    _same_space(f, g)
    return all(a <= b for a, b in zip(f.values, g.values))


def pointwise_inf(family: Iterable[FnClass]) -> FnClass:
    """Per-atom minimum; the greatest lower bound for the mu-pointwise order."""
    members = list(family)
    if not members:
        raise InputError("pointwise_inf of an empty family")
    space = members[0].space
    for m in members[1:]:
        _same_space(members[0], m)
    return FnClass(space, [min(m.values[i] for m in members) for i in range(len(space))])


def pointwise_sup(family: Iterable[FnClass]) -> FnClass:
    members = list(family)
    if not members:
        raise InputError("pointwise_sup of an empty family")
    for m in members[1:]:
        _same_space(members[0], m)
    space = members[0].space
    return FnClass(space, [max(m.values[i] for m in members) for i in range(len(space))])


def pos_neg_parts(f: FnClass) -> Tuple[FnClass, FnClass]:
    """(f_plus, f_minus), both nonnegative, with f = f_plus + (-f_minus)."""
    return f.map(pos_part), f.map(neg_part)


def fn_neg(f: FnClass) -> FnClass:
    return f.map(neg)


def fn_scale(lam: Scalar, f: FnClass) -> FnClass:
    return f.map(lambda v: scalar_mul(lam, v))


def fn_add(f: FnClass, g: FnClass, mode: str = "plain") -> FnClass:
    """Atomwise sum under the chosen addition ("plain", "lower", "upper")."""
    _same_space(f, g)
    op = {"plain": add, "lower": lower_add, "upper": upper_add}.get(mode)
    if op is None:
        raise InputError(f"unknown addition mode {mode!r}")
    return FnClass(f.space, [op(a, b) for a, b in zip(f.values, g.values)])


def fn_shift(f: FnClass, c) -> FnClass:
    """Add the constant c atomwise (plain addition; c must be finite)."""
    c = ext(c)
    return f.map(lambda v: add(v, c))


def classify(f: FnClass) -> IntegrabilityTag:
    """Integrability of f from the finiteness of the integrals of its parts."""
    from .integrals import part_integrals

    ip, im = part_integrals(f)
    plus = ip.is_finite
    minus = im.is_finite
    if plus and minus:
        return IntegrabilityTag.L1_FULL
    if plus:
        return IntegrabilityTag.L1_PLUS
    if minus:
        return IntegrabilityTag.L1_MINUS
    return IntegrabilityTag.L0_ONLY


def lp_norm(f: FnClass, p: Scalar) -> ExtReal:
    """(sum of weight * |f|^p)^(1/p) for p in [1, inf).

    Exact under rational backing when p == 1; otherwise evaluated in float.
    Returns +inf when f is infinite on an atom of positive weight.
    """
    p = as_scalar(p)
    if p < 1:
        raise InputError("lp_norm requires p >= 1")
    space = f.space
    for i in space.non_null_indices():
        if not f.values[i].is_finite:
            return POS_INF
    if p == 1:
        total = ZERO
        for i in space.non_null_indices():
            total = lower_add(total, scalar_mul(space.weights[i], abs_value(f.values[i])))
        return total
    acc = 0.0
    for i in space.non_null_indices():
        acc += float(space.weights[i]) * abs(float(f.values[i])) ** float(p)
    return ExtReal(acc ** (1.0 / float(p)))


def ess_sup_value(f: FnClass) -> ExtReal:
    """Largest value on non-null atoms; -inf when every atom is null."""
    best = NEG_INF
    for i in f.space.non_null_indices():
        if f.values[i] > best:
            best = f.values[i]
    return best
