"""Desk-scale interchange over decomposable selection sets.

An integrand is a finite table f(atom, control); a selection assigns one
control index to every atom, and G maps selections to functions by
G(u)(atom) = f(atom, u(atom)).  Selection sets come in two forms: PRODUCT
(per-atom admissible control subsets) and EXPLICIT (a plain list).

Decomposability at this scale means closure under patching members with
arbitrary reachable values on arbitrary atom sets, which is the same as
being the product of the per-atom projections; both characterizations are
computed and must agree.  Note the patching clause uses the values the set
actually reaches at each atom: constraining controls per atom is expressed
through the selection set (or with +inf penalties in the integrand), and
the minimized side of the interchange uses the same reachable sets.

``verify_rw_interchange`` brute-forces the selection side against the
integral of the per-atom minimum; ``verify_rw_argmin`` checks the
selection-by-selection argmin characterization whenever the common value is
finite.  ``verify_shapiro`` checks the hypotheses and conclusion of the
norm-convergence interchange for general order-preserving functionals on a
probability space.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import List, Optional, Sequence, Tuple

from .errors import BudgetError, DomainError, InputError, InvariantError
from .extreal import (
    NEG_INF,
    ExtReal,
    Scalar,
    as_scalar,
    ext,
    to_jsonable,
)
from .fnlattice import FnClass, classify, fn_add, fn_neg, lp_norm
from .functionals import Functional
from .integrals import outer_integral
from .interchange import _eq_within, default_tolerance
from .measure import MeasureSpace

DEFAULT_ENUM_BUDGET = 10**6

Selection = Tuple[int, ...]


@dataclass(frozen=True)
class Integrand:
    """A total table over atoms x controls, with extended-real entries."""

    space: MeasureSpace
    controls: Tuple
    table: Tuple[Tuple[ExtReal, ...], ...]

    def __init__(self, space: MeasureSpace, controls: Sequence, table: Sequence[Sequence]):
        controls = tuple(tuple(c) if isinstance(c, (list, tuple)) else (c,) for c in controls)
        if not controls:
            raise InputError("an integrand needs at least one control")
        rows = []
        if len(table) != len(space.atoms):
            raise InputError("integrand table must have one row per atom")
        for row in table:
            if len(row) != len(controls):
                raise InputError("integrand table row must have one entry per control")
            rows.append(tuple(ext(v) for v in row))
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "controls", controls)
        object.__setattr__(self, "table", tuple(rows))

    @property
    def n_controls(self) -> int:
        return len(self.controls)

    def value(self, atom_index: int, control_index: int) -> ExtReal:
        return self.table[atom_index][control_index]

    def g_of(self, selection: Selection) -> FnClass:
        """The function omega -> f(omega, u(omega)) for a selection u."""
        if len(selection) != len(self.space.atoms):
            raise InputError("selection must assign a control to every atom")
        return FnClass(
            self.space,
            [self.table[i][c] for i, c in enumerate(selection)],
        )

    def g_flat(self, admissible: Optional[Sequence[Sequence[int]]] = None) -> FnClass:
        """Per-atom minimum of f(omega, .) over the given control sets."""
        sets = admissible or [range(self.n_controls)] * len(self.space.atoms)
        return FnClass(
            self.space,
            [min(self.table[i][c] for c in cs) for i, cs in enumerate(sets)],
        )

    def per_atom_argmin(self, admissible: Optional[Sequence[Sequence[int]]] = None) -> List[Tuple[int, ...]]:
        sets = admissible or [range(self.n_controls)] * len(self.space.atoms)
        out = []
        for i, cs in enumerate(sets):
            best = min(self.table[i][c] for c in cs)
            out.append(tuple(c for c in cs if self.table[i][c] == best))
        return out

    def to_json_dict(self) -> dict:
        return {
            "controls": [list(c) for c in self.controls],
            "table": [[to_jsonable(v) for v in row] for row in self.table],
        }

    @classmethod
    def from_json_dict(cls, d: dict, space: MeasureSpace) -> "Integrand":
        if "controls" not in d or "table" not in d:
            raise InputError("integrand object needs 'controls' and 'table'")
        return cls(space, d["controls"], d["table"])


class SelectionSet:
    """Either an explicit list of selections or a per-atom product."""

    __slots__ = ("kind", "n_atoms", "n_controls", "selections", "admissible")

    def __init__(self, kind, n_atoms, n_controls, selections=None, admissible=None):
        self.kind = kind
        self.n_atoms = n_atoms
        self.n_controls = n_controls
        if kind == "explicit":
            sels = []
            seen = set()
            for s in selections or ():
                s = tuple(int(c) for c in s)
                if len(s) != n_atoms:
                    raise InputError("selection length must equal the atom count")
                if any(not 0 <= c < n_controls for c in s):
                    raise InputError("selection uses an out-of-range control index")
                if s not in seen:
                    seen.add(s)
                    sels.append(s)
            if not sels:
                raise InputError("a selection set must be nonempty")
            self.selections = tuple(sels)
            self.admissible = None
        elif kind == "product":
            adm = []
            if admissible is None or len(admissible) != n_atoms:
                raise InputError("product form needs one admissible set per atom")
            for s in admissible:
                s = tuple(sorted(set(int(c) for c in s)))
                if not s:
                    raise InputError("admissible sets must be nonempty")
                if any(not 0 <= c < n_controls for c in s):
                    raise InputError("admissible set uses an out-of-range control index")
                adm.append(s)
            self.admissible = tuple(adm)
            self.selections = None
        else:
            raise InputError(f"unknown selection-set kind {kind!r}")

    @classmethod
    def explicit(cls, selections: Sequence[Selection], n_atoms: int, n_controls: int):
        return cls("explicit", n_atoms, n_controls, selections=selections)

    @classmethod
    def full_product(cls, n_atoms: int, n_controls: int):
        return cls("product", n_atoms, n_controls,
                   admissible=[range(n_controls)] * n_atoms)

    def count(self) -> int:
        if self.kind == "explicit":
            return len(self.selections)
        total = 1
        for s in self.admissible:
            total *= len(s)
        return total

    def iter_selections(self, budget: int = DEFAULT_ENUM_BUDGET):
        if self.count() > budget:
            raise BudgetError(
                f"selection enumeration needs {self.count()} > budget {budget}; "
                "refusing to sample where exact equality is claimed"
            )
        if self.kind == "explicit":
            return iter(self.selections)
        return product(*self.admissible)

    def contains(self, sel: Selection) -> bool:
        if self.kind == "explicit":
            return tuple(sel) in self.selections
        return all(c in s for c, s in zip(sel, self.admissible))

    def projections(self) -> Tuple[Tuple[int, ...], ...]:
        """Per-atom sets of reachable control indices."""
        if self.kind == "product":
            return self.admissible
        return tuple(
            tuple(sorted({s[i] for s in self.selections}))
            for i in range(self.n_atoms)
        )

    def to_json_dict(self) -> dict:
        if self.kind == "explicit":
            return {"kind": "explicit", "selections": [list(s) for s in self.selections]}
        return {"kind": "product", "admissible": [list(s) for s in self.admissible]}

    @classmethod
    def from_json_dict(cls, d: dict, n_atoms: int, n_controls: int) -> "SelectionSet":
        kind = d.get("kind")
        if kind == "explicit":
            return cls.explicit(d.get("selections", []), n_atoms, n_controls)
        if kind == "product":
            return cls("product", n_atoms, n_controls, admissible=d.get("admissible"))
        raise InputError(f"unknown selection-set kind {kind!r}")


@dataclass
class DecomposabilityReport:
    decomposable: bool
    witness_patch: Optional[dict] = None
    notes: List[str] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "decomposable": self.decomposable,
            "witness_patch": self.witness_patch,
            "notes": list(self.notes),
        }


def is_decomposable(u_set: SelectionSet) -> DecomposabilityReport:
    """Patch-closure check, cross-validated against the projection product.

    Explicit sets are decomposable exactly when they equal the product of
    their per-atom projections; the direct patch enumeration (replace the
    values of a member on any atom set by arbitrary reachable values) must
    agree, and a violating patch is reported on failure.
    """
    if u_set.kind == "product":
        return DecomposabilityReport(True, notes=["product form: decomposable by construction"])

    members = set(u_set.selections)
    projections = u_set.projections()
    n = u_set.n_atoms

    by_patching = True
    witness = None
    for u in u_set.selections:
        for k in range(1, n + 1):
            for atoms in combinations(range(n), k):
                for patch_values in product(*(projections[i] for i in atoms)):
                    patched = list(u)
                    for i, v in zip(atoms, patch_values):
                        patched[i] = v
                    if tuple(patched) not in members:
                        by_patching = False
                        witness = {
                            "base": list(u),
                            "atoms": list(atoms),
                            "values": list(patch_values),
                            "patched": patched,
                        }
                        break
                if witness:
                    break
            if witness:
                break
        if witness:
            break

    expected = 1
    for p in projections:
        expected *= len(p)
    by_product = len(members) == expected

    if by_patching != by_product:
        raise InvariantError(
            "patch-closure and projection-product decomposability tests disagree"
        )
    return DecomposabilityReport(by_patching, witness_patch=witness)


@dataclass
class RwInterchangeReport:
    lhs: ExtReal
    rhs: ExtReal
    equal: bool
    decomposable: bool
    hypothesis_notes: List[str] = field(default_factory=list)
    minimizers: List[Selection] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "lhs": to_jsonable(self.lhs),
            "rhs": to_jsonable(self.rhs),
            "equal": self.equal,
            "decomposable": self.decomposable,
            "hypothesis_notes": list(self.hypothesis_notes),
            "minimizers": [list(s) for s in self.minimizers],
        }


def verify_rw_interchange(
    integrand: Integrand,
    u_set: SelectionSet,
    enum_budget: int = DEFAULT_ENUM_BUDGET,
    tolerance: Optional[Scalar] = None,
) -> RwInterchangeReport:
    """Brute-force min over selections of the outer integral, against the
    outer integral of the per-atom minimum over the reachable controls.

    A non-decomposable set is still evaluated, flagged as a hypothesis
    violation (the inequality lhs >= rhs always holds; equality may fail).
    Requires some selection with integrable positive part.
    """
    tol = default_tolerance() if tolerance is None else as_scalar(tolerance)
    if u_set.n_atoms != len(integrand.space.atoms):
        raise InputError("selection set and integrand disagree on the atom count")
    if u_set.n_controls != integrand.n_controls:
        raise InputError("selection set and integrand disagree on the control count")

    decomp = is_decomposable(u_set)
    notes = list(decomp.notes)
    if not decomp.decomposable:
        notes.append("hypothesis violated: selection set is not decomposable")

    lhs = None
    minimizers: List[Selection] = []
    has_l1_plus = False
    for sel in u_set.iter_selections(enum_budget):
        g = integrand.g_of(sel)
        if classify(g).in_l1_plus:
            has_l1_plus = True
        v = outer_integral(g)
        if lhs is None or v < lhs:
            lhs, minimizers = v, [tuple(sel)]
        elif v == lhs:
            minimizers.append(tuple(sel))
    if not has_l1_plus:
        raise DomainError(
            "precondition failure: no selection has integrable positive part"
        )

    rhs = outer_integral(integrand.g_flat(u_set.projections()))
    equal = _eq_within(lhs, rhs, tol)
    if not equal and decomp.decomposable:
        raise InvariantError(
            f"interchange equality failed on a decomposable set: lhs={lhs}, rhs={rhs}"
        )
    if not equal:
        notes.append(
            "strict inequality lhs > rhs" if lhs > rhs else "lhs below rhs (unexpected)"
        )
    return RwInterchangeReport(
        lhs=lhs, rhs=rhs, equal=equal, decomposable=decomp.decomposable,
        hypothesis_notes=notes, minimizers=minimizers,
    )


@dataclass
class RwArgminReport:
    applicable: bool
    characterization_holds: Optional[bool]
    common_value: Optional[ExtReal]
    argmin_selections: List[Selection] = field(default_factory=list)
    per_atom_argmin: List[Tuple[int, ...]] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "applicable": self.applicable,
            "characterization_holds": self.characterization_holds,
            "common_value": None if self.common_value is None else to_jsonable(self.common_value),
            "argmin_selections": [list(s) for s in self.argmin_selections],
            "per_atom_argmin": [list(s) for s in self.per_atom_argmin],
            "notes": list(self.notes),
        }


def verify_rw_argmin(
    integrand: Integrand,
    u_set: SelectionSet,
    enum_budget: int = DEFAULT_ENUM_BUDGET,
) -> RwArgminReport:
    """Check: u minimizes the selection problem iff u picks per-atom
    minimizers on every non-null atom.  Not applicable at common value -inf.
    """
    base = verify_rw_interchange(integrand, u_set, enum_budget)
    if base.lhs == NEG_INF:
        return RwArgminReport(
            applicable=False, characterization_holds=None, common_value=base.lhs,
            notes=["common value is -inf: characterization not applicable"],
        )
    projections = u_set.projections()
    atom_argmin = integrand.per_atom_argmin(projections)
    non_null = set(integrand.space.non_null_indices())
    pointwise_set = [
        tuple(sel)
        for sel in u_set.iter_selections(enum_budget)
        if all(i not in non_null or sel[i] in atom_argmin[i] for i in range(u_set.n_atoms))
    ]
    holds = set(base.minimizers) == set(pointwise_set)
    return RwArgminReport(
        applicable=True,
        characterization_holds=holds,
        common_value=base.lhs,
        argmin_selections=base.minimizers,
        per_atom_argmin=atom_argmin,
        notes=[] if holds else ["argmin sets differ"],
    )


@dataclass
class ShapiroScenario:
    """Inputs for the norm-convergence interchange check.

    ``selection_prefix`` is the finite prefix of the sequence (u_n);
    ``selection_set`` is the full feasible set (defaults to the prefix as an
    explicit set).  The flat function G-flat minimizes the integrand
    per atom over all controls; a declared one, when given, is checked
    against the computed one.
    """

    functional: Functional
    p: Scalar
    integrand: Integrand
    selection_prefix: List[Selection]
    declared_gflat: Optional[FnClass] = None
    selection_set: Optional[SelectionSet] = None
    tolerance: Optional[Scalar] = None


@dataclass
class ShapiroReport:
    hypotheses: List[Tuple[str, bool, str]]
    norms: List[ExtReal]
    conclusion_lhs: ExtReal
    conclusion_rhs: ExtReal
    conclusion_holds: bool
    conclusion_mode: str  # "exact" or "sampled"
    notes: List[str] = field(default_factory=list)

    @property
    def hypotheses_ok(self) -> bool:
        return all(ok for _, ok, _ in self.hypotheses)

    def to_json_dict(self) -> dict:
        return {
            "hypotheses": [
                {"name": n, "ok": ok, "detail": d} for n, ok, d in self.hypotheses
            ],
            "norms": [to_jsonable(v) for v in self.norms],
            "conclusion_lhs": to_jsonable(self.conclusion_lhs),
            "conclusion_rhs": to_jsonable(self.conclusion_rhs),
            "conclusion_holds": self.conclusion_holds,
            "conclusion_mode": self.conclusion_mode,
            "notes": list(self.notes),
        }


def verify_shapiro(sc: ShapiroScenario, enum_budget: int = DEFAULT_ENUM_BUDGET) -> ShapiroReport:
    """Itemize the hypotheses and test the conclusion inf Phi(G(u)) = Phi(G-flat)."""
    space = sc.integrand.space
    if space.total_mass() != as_scalar(1):
        raise InputError("Shapiro scenarios require a probability space (mass 1)")
    p = as_scalar(sc.p)
    if p < 1:
        raise InputError("exponent p must lie in [1, inf)")
    tol = default_tolerance() if sc.tolerance is None else as_scalar(sc.tolerance)
    if not sc.selection_prefix:
        raise InputError("the selection sequence prefix must be nonempty")
    u_set = sc.selection_set or SelectionSet.explicit(
        sc.selection_prefix, len(space.atoms), sc.integrand.n_controls
    )

    gflat = sc.integrand.g_flat()
    notes: List[str] = []
    hypotheses: List[Tuple[str, bool, str]] = []
    if sc.declared_gflat is not None:
        if sc.declared_gflat == gflat:
            notes.append("declared G-flat matches the computed per-atom minimum")
        else:
            hypotheses.append(
                ("declared_gflat", False, "declared G-flat differs from computed")
            )
        gflat = sc.declared_gflat

    gflat_finite = all(gflat.values[i].is_finite for i in space.non_null_indices())
    hypotheses.append(
        ("gflat_in_lp", gflat_finite,
         "G-flat finite on non-null atoms" if gflat_finite else "G-flat is infinite somewhere")
    )

    s1_ok, s1_detail = True, "all G(u) finite on non-null atoms"
    try:
        sels = list(u_set.iter_selections(enum_budget))
    except BudgetError:
        sels = [tuple(s) for s in sc.selection_prefix]
        notes.append("selection set beyond budget: S1 checked on the prefix only")
    for sel in sels:
        g = sc.integrand.g_of(sel)
        if any(not g.values[i].is_finite for i in space.non_null_indices()):
            s1_ok, s1_detail = False, f"G({list(sel)}) is infinite on a non-null atom"
            break
    hypotheses.append(("S1_image_in_lp", s1_ok, s1_detail))

    prefix_fns = [sc.integrand.g_of(tuple(s)) for s in sc.selection_prefix]
    norms = [lp_norm(fn_add(g, fn_neg(gflat), mode="lower"), p) for g in prefix_fns]
    norm_tol = _norm_tolerance(tol)
    converged = norms[-1].is_finite and float(norms[-1]) <= float(norm_tol)
    hypotheses.append(
        ("S2a_norm_convergence", converged,
         f"last prefix norm {norms[-1]} vs tolerance {norm_tol}")
    )

    phi_vals = [sc.functional(g) for g in prefix_fns]
    tail = phi_vals[len(phi_vals) // 2:]
    liminf_est = min(tail)
    phi_flat = sc.functional(gflat)
    s2b = phi_flat >= liminf_est or _eq_within(phi_flat, liminf_est, tol)
    hypotheses.append(
        ("S2b_liminf", s2b,
         f"Phi(G-flat) = {phi_flat} vs prefix liminf {liminf_est}")
    )

    try:
        inf_val = min(sc.functional(sc.integrand.g_of(tuple(s)))
                      for s in u_set.iter_selections(enum_budget))
        mode = "exact"
    except BudgetError:
        inf_val = min(phi_vals)
        mode = "sampled"
        notes.append(
            "conclusion estimated from the prefix only (an upper bound on inf)"
        )
    holds = _eq_within(inf_val, phi_flat, tol)
    return ShapiroReport(
        hypotheses=hypotheses,
        norms=norms,
        conclusion_lhs=inf_val,
        conclusion_rhs=phi_flat,
        conclusion_holds=holds,
        conclusion_mode=mode,
        notes=notes,
    )


def _norm_tolerance(tol: Scalar) -> Scalar:
    # Norms are float-valued for p != 1, so a zero tolerance would be
    # unsatisfiable for genuinely converging (never stabilizing) sequences.
    return tol if tol > 0 else as_scalar(1e-6)
