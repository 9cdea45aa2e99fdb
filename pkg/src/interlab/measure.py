"""Finite atomic measure spaces.

A space is an ordered list of named atoms with nonnegative finite weights.
Null sets are exactly the sets of zero-weight atoms, which keeps the
almost-everywhere machinery of the function lattice to a per-atom scan.
A space may carry a ``truncation_of`` label describing the countable space
it finitely truncates (used by the gallery's diverging-sequence examples).
"""

from __future__ import annotations

from itertools import combinations
from typing import FrozenSet, Iterable, Iterator, Optional, Sequence

from .errors import InputError
from .extreal import ExtReal, Scalar, as_scalar, scalar_to_jsonable

AtomSet = FrozenSet[str]


class MeasureSpace:
    """Atoms with weights; immutable after construction."""

    __slots__ = ("atoms", "weights", "truncation_of", "_index")

    def __init__(
        self,
        atoms: Sequence[str],
        weights: Sequence[Scalar],
        truncation_of: Optional[str] = None,
    ):
        atoms = tuple(atoms)
        if not atoms:
            raise InputError("a measure space needs at least one atom")
        if len(set(atoms)) != len(atoms):
            raise InputError("atom identifiers must be distinct")
        if len(weights) != len(atoms):
            raise InputError("weights and atoms must align")
        ws = []
        for w in weights:
            w = as_scalar(w)
            if w < 0:
                raise InputError(f"negative atom weight {w}")
            ws.append(w)
        self.atoms = atoms
        self.weights = tuple(ws)
        self.truncation_of = truncation_of
        self._index = {a: i for i, a in enumerate(atoms)}

    def index(self, atom: str) -> int:
        try:
            return self._index[atom]
        except KeyError:
            raise InputError(f"unknown atom {atom!r}") from None

    def weight(self, atom: str) -> Scalar:
        return self.weights[self.index(atom)]

    def is_null_atom(self, i: int) -> bool:
        return self.weights[i] == 0

    def non_null_indices(self) -> Iterator[int]:
        return (i for i, w in enumerate(self.weights) if w != 0)

    def total_mass(self) -> Scalar:
        return sum(self.weights, as_scalar(0))

    def __len__(self) -> int:
        return len(self.atoms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MeasureSpace):
            return NotImplemented
        return (
            self.atoms == other.atoms
            and self.weights == other.weights
            and self.truncation_of == other.truncation_of
        )

    def __hash__(self) -> int:
        return hash((self.atoms, self.weights, self.truncation_of))

    def __repr__(self) -> str:
        label = f", truncation_of={self.truncation_of!r}" if self.truncation_of else ""
        return f"MeasureSpace({list(self.atoms)!r}, {list(self.weights)!r}{label})"

    def to_json_dict(self) -> dict:
        d = {
            "atoms": list(self.atoms),
            "weights": [scalar_to_jsonable(w) for w in self.weights],
        }
        if self.truncation_of is not None:
            d["truncation_of"] = self.truncation_of
        return d

    @classmethod
    def from_json_dict(cls, d: dict) -> "MeasureSpace":
        if not isinstance(d, dict) or "atoms" not in d or "weights" not in d:
            raise InputError("space object needs 'atoms' and 'weights'")
        weights = [_scalar_from_json(w) for w in d["weights"]]
        return cls(d["atoms"], weights, d.get("truncation_of"))


def _scalar_from_json(v) -> Scalar:
    from fractions import Fraction

    if isinstance(v, str) and "/" in v:
        return as_scalar(Fraction(v))
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise InputError(f"cannot decode {v!r} as a weight")
    return as_scalar(v)


def _check_subset(space: MeasureSpace, s: Iterable[str]) -> AtomSet:
    s = frozenset(s)
    for a in s:
        space.index(a)
    return s


def measure(space: MeasureSpace, s: Iterable[str]) -> ExtReal:
    """Total weight of the atoms in ``s``; finite and nonnegative."""
    s = _check_subset(space, s)
    return ExtReal(sum((space.weight(a) for a in s), as_scalar(0)))


def is_null(space: MeasureSpace, s: Iterable[str]) -> bool:
    """True iff ``s`` has measure zero."""
    return measure(space, s) == ExtReal(0)


def iter_atom_subsets(space: MeasureSpace) -> Iterator[AtomSet]:
    """All subsets of the atoms, smallest first; 2**len(space) of them."""
    for k in range(len(space.atoms) + 1):
        for combo in combinations(space.atoms, k):
            yield frozenset(combo)
