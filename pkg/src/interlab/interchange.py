"""Interchange of minimization and monotone functionals.

The central check: a family X is Phi-inf-directed when, for every finite
subset S of X,

    min over x in X of Phi(x)  <=  Phi(pointwise inf of S),

and for an order-preserving Phi with the family's infimum available this is
equivalent to the interchange formula

    min over x in X of Phi(x)  =  Phi(pointwise inf of X).

``verify_interchange`` computes both sides, runs the directedness scan, and
cross-checks the equivalence; a disagreement is raised as InvariantError,
never reported silently.  For order-preserving functionals there is a
shortcut: on a finite family the subset condition for S = X implies all the
others, and the scan asserts agreement with it.

Lazily truncated families (finite prefixes of infinite sequences) go through
``verify_interchange_sequence``, which watches the prefix trend of both
sides and declares divergence to -inf once a monotone run crosses the
configured threshold; verdicts then refer to the limit, not the prefix.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .errors import DomainError, InputError, InvariantError
from .extreal import (
    NEG_INF,
    POS_INF,
    ZERO,
    ExtReal,
    Scalar,
    abs_value,
    as_scalar,
    get_backing,
    to_jsonable,
)
from .fnlattice import (
    FnClass,
    IntegrabilityTag,
    classify,
    fn_add,
    fn_neg,
    mu_leq,
    pointwise_inf,
)
from .functionals import Functional, check_order_preserving
from .integrals import lebesgue_extended

DEFAULT_SUBSET_BUDGET = 12
DEFAULT_DIVERGENCE_THRESHOLD = 10**9
DEFAULT_SAMPLED_SUBSETS = 64


def default_tolerance() -> Scalar:
    return as_scalar(0) if get_backing() == "rational" else 1e-9


def _eq_within(a: ExtReal, b: ExtReal, tol: Scalar) -> bool:
    if a.is_finite and b.is_finite:
        diff = abs_value(ExtReal(a.finite_value - b.finite_value))
        return diff <= ExtReal(tol)
    return a == b


def _leq_within(a: ExtReal, b: ExtReal, tol: Scalar) -> bool:
    return a <= b or _eq_within(a, b, tol)


@dataclass(frozen=True)
class Family:
    """A nonempty finite family of functions on one shared space."""

    members: Tuple[FnClass, ...]
    origin: str = "literal"

    def __init__(self, members: Sequence[FnClass], origin: str = "literal"):
        members = tuple(members)
        if not members:
            raise InputError("a family must be nonempty")
        for m in members[1:]:
            if m.space != members[0].space:
                raise InputError("family members live on different spaces")
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "origin", origin)

    @property
    def space(self):
        return self.members[0].space


@dataclass
class SequenceSpec:
    """A lazily generated sequence inspected through a finite prefix.

    ``exhaustive`` marks the prefix as the entire sequence (a finite family
    in sequence clothing); otherwise the prefix is a truncation and verdicts
    about the limit rely on trend detection against the divergence
    threshold.
    """

    generator: Callable[[int], FnClass]
    prefix_len: int
    declared_limit: Optional[FnClass] = None
    divergence_threshold: Scalar = DEFAULT_DIVERGENCE_THRESHOLD
    exhaustive: bool = False

    def prefix(self) -> List[FnClass]:
        if self.prefix_len < 1:
            raise InputError("prefix_len must be at least 1")
        members = [self.generator(i) for i in range(self.prefix_len)]
        for m in members[1:]:
            if m.space != members[0].space:
                raise InputError("sequence terms must share one aligned space")
        return members


@dataclass
class DirectednessResult:
    directed: Optional[bool]
    witness: Optional[Tuple[int, ...]]
    mode: str  # "exhaustive" or "sampled"
    shortcut_agrees: Optional[bool] = None

    @property
    def verdict(self) -> str:
        if self.directed is None:
            return "inconclusive"
        return "yes" if self.directed else "no"


@dataclass
class InterchangeReport:
    functional: str
    lhs: ExtReal
    rhs: ExtReal
    phi_inf_directed: str
    interchange_holds: str
    witness: Optional[Tuple[int, ...]] = None
    notes: List[str] = field(default_factory=list)
    mode: str = "family"
    prefix: Optional[Dict] = None

    @property
    def holds(self) -> bool:
        return self.interchange_holds in ("holds", "holds-in-limit")

    def to_json_dict(self) -> dict:
        d = {
            "functional": self.functional,
            "lhs": to_jsonable(self.lhs),
            "rhs": to_jsonable(self.rhs),
            "phi_inf_directed": self.phi_inf_directed,
            "interchange_holds": self.interchange_holds,
            "witness": list(self.witness) if self.witness is not None else None,
            "notes": list(self.notes),
            "mode": self.mode,
        }
        if self.prefix is not None:
            d["prefix"] = {
                k: ([to_jsonable(v) for v in vs] if isinstance(vs, list) else vs)
                for k, vs in self.prefix.items()
            }
        return d


def is_inf_directed(family: Family) -> Tuple[bool, Optional[Tuple[int, int]]]:
    """Every pair must have a lower bound inside the family (mu-order)."""
    members = family.members
    for i, j in combinations(range(len(members)), 2):
        found = any(
            mu_leq(m, members[i]) and mu_leq(m, members[j]) for m in members
        )
        if not found:
            return False, (i, j)
    return True, None


def _nonempty_subsets(n: int):
    for k in range(1, n + 1):
        yield from combinations(range(n), k)


def _sampled_subsets(n: int, seed: int, samples: int):
    seen = set()
    for i in range(n):
        seen.add((i,))
    for pair in combinations(range(n), 2):
        seen.add(pair)
    seen.add(tuple(range(n)))
    rng = random.Random(seed)
    for _ in range(samples):
        subset = tuple(i for i in range(n) if rng.random() < 0.5)
        if subset:
            seen.add(subset)
    return sorted(seen, key=lambda s: (len(s), s))


def is_phi_inf_directed(
    family: Family,
    phi: Functional,
    subset_budget: int = DEFAULT_SUBSET_BUDGET,
    seed: int = 0,
    samples: int = DEFAULT_SAMPLED_SUBSETS,
) -> DirectednessResult:
    """Scan finite subsets for the directedness condition.

    Exhaustive over all 2^n - 1 nonempty subsets while the family size is
    within ``subset_budget``; beyond that, singletons, pairs, the full
    family, and ``samples`` random subsets are checked and the result is
    labeled "sampled".  Subsets are visited smallest first, so the witness
    on failure is a smallest violating subset.
    """
    members = family.members
    n = len(members)
    values = [phi(x) for x in members]
    lhs = min(values)
    exhaustive = n <= subset_budget
    subsets = _nonempty_subsets(n) if exhaustive else _sampled_subsets(n, seed, samples)
    witness = None
    for idx in subsets:
        rhs = phi(pointwise_inf([members[i] for i in idx]))
        if not lhs <= rhs:
            witness = idx
            break
    directed = witness is None
    shortcut = lhs <= phi(pointwise_inf(members))
    result = DirectednessResult(
        directed=directed,
        witness=witness,
        mode="exhaustive" if exhaustive else "sampled",
        shortcut_agrees=(shortcut == directed) if exhaustive else None,
    )
    if exhaustive and phi.order_preserving and shortcut != directed:
        raise InvariantError(
            f"finite-family shortcut disagrees with the exhaustive subset scan "
            f"for {phi.name}: shortcut={shortcut}, scan={directed}"
        )
    return result


def verify_interchange(
    family: Family,
    phi: Functional,
    subset_budget: int = DEFAULT_SUBSET_BUDGET,
    tolerance: Optional[Scalar] = None,
    seed: int = 0,
) -> InterchangeReport:
    """Compute both sides of the interchange formula and cross-check.

    The report's verdict must match the directedness scan whenever the
    functional's hypotheses hold; a mismatch raises InvariantError.
    """
    tol = default_tolerance() if tolerance is None else as_scalar(tolerance)
    notes = [
        "existence hypotheses hold automatically: finite family on an atomic space"
    ]
    hyp_ok = phi.order_preserving
    if not hyp_ok:
        sample = check_order_preserving(phi, family.space, trials=64, seed=seed)
        notes.append(
            "order preservation not declared; sample-checked only: "
            + ("no violation found" if sample.ok else "violations found")
        )
        hyp_ok = sample.ok

    values = [phi(x) for x in family.members]
    lhs = min(values)
    rhs = phi(pointwise_inf(family.members))
    holds = _eq_within(lhs, rhs, tol)

    if phi.order_preserving and not _leq_within(rhs, lhs, tol):
        raise InvariantError(
            f"one-sided bound violated for {phi.name}: Phi(inf X) = {rhs} "
            f"> min Phi = {lhs}"
        )

    directed = is_phi_inf_directed(family, phi, subset_budget, seed=seed)
    if hyp_ok and directed.directed is not None and holds != directed.directed:
        if directed.mode == "exhaustive" or not directed.directed:
            raise InvariantError(
                f"interchange verdict ({holds}) disagrees with the "
                f"Phi-inf-directedness scan ({directed.directed}) for {phi.name}; "
                f"witness={directed.witness}"
            )
    if directed.mode == "sampled":
        notes.append("directedness scan sampled (family larger than subset budget)")
    return InterchangeReport(
        functional=phi.name,
        lhs=lhs,
        rhs=rhs,
        phi_inf_directed=directed.verdict,
        interchange_holds="holds" if holds else "fails",
        witness=directed.witness,
        notes=notes,
        mode="family",
    )


def _classify_prefix_limit(
    values: Sequence[ExtReal], threshold: Scalar
) -> Tuple[str, ExtReal]:
    """Trend of a prefix: ("stabilized"|"diverging"|"inconclusive", value)."""
    last = values[-1]
    if not last.is_finite:
        return "stabilized", last
    if len(values) == 1:
        return "stabilized", last
    window = max(2, len(values) // 4)
    tail = values[-window:]
    if all(v == last for v in tail):
        return "stabilized", last
    bound = ExtReal(abs(as_scalar(threshold)))
    nonincreasing = all(a >= b for a, b in zip(values, values[1:]))
    if nonincreasing and last <= -bound:
        return "diverging", NEG_INF
    nondecreasing = all(a <= b for a, b in zip(values, values[1:]))
    if nondecreasing and last >= bound:
        return "diverging", POS_INF
    return "inconclusive", last


def verify_interchange_sequence(
    spec: SequenceSpec,
    phi: Functional,
    subset_budget: int = DEFAULT_SUBSET_BUDGET,
    tolerance: Optional[Scalar] = None,
    seed: int = 0,
) -> InterchangeReport:
    """Interchange verdict for a sequence seen through a finite prefix."""
    tol = default_tolerance() if tolerance is None else as_scalar(tolerance)
    members = spec.prefix()

    phi_values = [phi(x) for x in members]
    prefix_lhs: List[ExtReal] = []
    running = phi_values[0]
    for v in phi_values:
        running = min(running, v)
        prefix_lhs.append(running)
    prefix_infs: List[FnClass] = []
    acc = members[0]
    for m in members:
        acc = pointwise_inf([acc, m])
        prefix_infs.append(acc)
    prefix_rhs = [phi(x) for x in prefix_infs]

    prefix_data: Dict = {
        "phi_values": list(phi_values),
        "prefix_lhs": list(prefix_lhs),
        "prefix_rhs": list(prefix_rhs),
        "prefix_len": spec.prefix_len,
    }

    if spec.exhaustive:
        base = verify_interchange(
            Family(members, origin="generated"), phi, subset_budget, tolerance, seed
        )
        base.mode = "sequence"
        base.prefix = prefix_data
        base.notes.append("prefix is exhaustive: verdicts are exact, not limits")
        return base

    notes: List[str] = []
    lhs_kind, lhs = _classify_prefix_limit(prefix_lhs, spec.divergence_threshold)
    prefix_data["lhs_trend"] = lhs_kind

    if spec.declared_limit is not None:
        limit = spec.declared_limit
        if not mu_leq(limit, prefix_infs[-1]):
            raise InputError(
                "declared limit is not below the prefix infimum (mu-a.e.)"
            )
        rhs_kind = "declared"
        rhs = phi(limit)
        if limit == prefix_infs[-1]:
            notes.append("declared limit witnessed by the prefix infimum")
        else:
            notes.append(
                "hypothesis unverified: declared limit not witnessed by the prefix"
            )
    else:
        rhs_kind, rhs = _classify_prefix_limit(prefix_rhs, spec.divergence_threshold)
    prefix_data["rhs_trend"] = rhs_kind

    if lhs_kind == "diverging":
        directed_verdict = "diverging"
        witness = None
        notes.append(
            "lhs diverges to -inf: Phi-inf-directedness condition vacuously "
            "satisfied in the limit"
        )
    elif lhs_kind == "inconclusive":
        directed_verdict = "inconclusive"
        witness = None
        notes.append("prefix lhs neither stabilizes nor crosses the threshold")
    else:
        directed = is_phi_inf_directed(
            Family(members, origin="generated"), phi, subset_budget, seed=seed
        )
        directed_verdict = directed.verdict
        witness = directed.witness
        notes.append("directedness checked on the prefix family")

    if lhs_kind == "inconclusive" or rhs_kind == "inconclusive":
        holds = "inconclusive"
        notes.append("no stabilization and no monotone threshold crossing; no guess")
    elif lhs_kind == "diverging":
        if rhs == NEG_INF:
            holds = "holds-in-limit"
            notes.append("interchange holds in the limit (-inf = -inf)")
        else:
            holds = "fails-in-limit"
    else:
        holds = "holds" if _eq_within(lhs, rhs, tol) else "fails"

    return InterchangeReport(
        functional=phi.name,
        lhs=lhs,
        rhs=rhs,
        phi_inf_directed=directed_verdict,
        interchange_holds=holds,
        witness=witness,
        notes=notes,
        mode="sequence",
        prefix=prefix_data,
    )


@dataclass
class SeqContinuityReport:
    functional: str
    prefix_values: List[ExtReal]
    rhs: ExtReal
    verdict: str  # "holds" or "fails"
    exact: bool
    diverging: bool
    gaps: List[Optional[ExtReal]]
    notes: List[str] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "functional": self.functional,
            "prefix_values": [to_jsonable(v) for v in self.prefix_values],
            "rhs": to_jsonable(self.rhs),
            "verdict": self.verdict,
            "exact": self.exact,
            "diverging": self.diverging,
            "gaps": [None if g is None else to_jsonable(g) for g in self.gaps],
            "notes": list(self.notes),
        }


def check_seq_inf_continuity(
    phi: Functional,
    spec: SequenceSpec,
    tolerance: Optional[Scalar] = None,
) -> SeqContinuityReport:
    """Check min over n of Phi(x_n) <= Phi(limit) along a nonincreasing prefix.

    The limit is the declared one when given, otherwise the prefix infimum
    (its last term, since the sequence is nonincreasing).  A monotone run of
    Phi-values crossing the divergence threshold counts as -inf, which
    satisfies the inequality against any right-hand side.
    """
    tol = default_tolerance() if tolerance is None else as_scalar(tolerance)
    members = spec.prefix()
    for a, b in zip(members, members[1:]):
        if not mu_leq(b, a):
            raise InputError("sequence prefix is not nonincreasing (mu-a.e.)")
    values = [phi(x) for x in members]
    limit = spec.declared_limit if spec.declared_limit is not None else members[-1]
    if spec.declared_limit is not None and not mu_leq(limit, members[-1]):
        raise InputError("declared limit is not below the prefix (mu-a.e.)")
    rhs = phi(limit)
    notes: List[str] = []

    gaps: List[Optional[ExtReal]] = []
    for v in values:
        if v.is_finite and rhs.is_finite:
            gaps.append(ExtReal(v.finite_value - rhs.finite_value))
        elif v == rhs:
            gaps.append(ZERO)
        else:
            gaps.append(None)

    kind, lhs_limit = _classify_prefix_limit(values, spec.divergence_threshold)
    if kind == "diverging" and lhs_limit == NEG_INF:
        notes.append("prefix Phi-values diverge to -inf")
        return SeqContinuityReport(
            phi.name, values, rhs, "holds", exact=False, diverging=True,
            gaps=gaps, notes=notes,
        )
    last = values[-1]
    exact = last <= rhs
    verdict = "holds" if _leq_within(last, rhs, tol) else "fails"
    if verdict == "holds" and not exact:
        notes.append("inequality holds within tolerance at the prefix end")
    return SeqContinuityReport(
        phi.name, values, rhs, verdict, exact=exact, diverging=False,
        gaps=gaps, notes=notes,
    )


def giner_gap_directed(
    family: Family,
    subset_budget: int = DEFAULT_SUBSET_BUDGET,
    seed: int = 0,
) -> DirectednessResult:
    """Integrably-inf-directed check in gap form.

    For every finite subset S: min over x in X of the integral of
    (x - inf S) must be <= 0.  Only evaluated on integrable families whose
    members are finite mu-a.e.; the subtraction convention for infinite
    values is deliberately not guessed (the direct condition covers those).
    """
    members = family.members
    for m in members:
        if classify(m) is not IntegrabilityTag.L1_FULL:
            raise DomainError(
                "gap form needs an integrable, mu-a.e. finite family; "
                "use the direct Phi-inf-directedness condition instead"
            )
    n = len(members)
    exhaustive = n <= subset_budget
    subsets = (
        _nonempty_subsets(n)
        if exhaustive
        else _sampled_subsets(n, seed, DEFAULT_SAMPLED_SUBSETS)
    )
    witness = None
    for idx in subsets:
        m = pointwise_inf([members[i] for i in idx])
        gap = min(
            lebesgue_extended(fn_add(x, fn_neg(m), mode="lower")) for x in members
        )
        if not gap <= ZERO:
            witness = idx
            break
    return DirectednessResult(
        directed=witness is None,
        witness=witness,
        mode="exhaustive" if exhaustive else "sampled",
    )
