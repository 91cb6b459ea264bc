"""
Conditioning a bba on the event that the truth lies in a set ``A``.

All rules start from the same transfer: each focal element ``Y`` moves its
mass to ``Y & A``.  They differ only in what happens to the mass of the
focal elements disjoint from ``A`` (the conflict ``k_cond``):

``DCR``
    dropped, survivors renormalized by ``Pl(A)`` (undefined when ``Pl(A) = 0``)
``TBM``
    kept on the empty set
``DSM1``
    moved onto ``A`` itself
``DSM2``
    split uniformly over the subsets of ``A`` that already received mass,
    or over the atoms of ``A``, their unions and ``A`` when none did
``CLASS``
    like DCR, with each focal element weighted by a product of
    user-supplied factors instead of by its mass
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from typing import Callable

from .algebra import (
    FrameMismatchError,
    SetElement,
    atoms_under,
    element_sort_key,
    format_expr,
)
from .mass import ConditioningEvent, MassFunction, require_closed

__all__ = [
    "RuleId",
    "UndefinedConditioning",
    "InvalidFactorError",
    "ClassParams",
    "ConditioningReport",
    "conflict_mass",
    "condition",
    "condition_dcr",
    "condition_tbm",
    "condition_dsm1",
    "condition_dsm2",
    "condition_class",
    "compare_all",
    "dsm2_fallback_recipients",
    "mass_factor",
    "cardinality_factor",
    "constant_factor",
    "resolve_factor",
]

Factor = Callable[[SetElement], float]


class RuleId(str, enum.Enum):
    DCR = "DCR"
    TBM = "TBM"
    DSM1 = "DSM1"
    DSM2 = "DSM2"
    CLASS = "CLASS"

    def __str__(self):
        return self.value


class UndefinedConditioning(ArithmeticError):
    """The rule's normalizing denominator is zero for this bba and event."""

    def __init__(self, rule: RuleId, event: ConditioningEvent, reason: str):
        self.rule = rule
        self.event = event
        self.reason = reason
        super().__init__(f"{rule.value} is undefined given {format_expr(event.element)}: {reason}")


class InvalidFactorError(ValueError):
    pass


@dataclass(frozen=True)
class ClassParams:
    """Weights for the CLASS rule.

    A focal element ``Y`` gets weight ``prod(alpha(Y)) / prod(beta(Y))``.
    Each factor is a callable ``SetElement -> float`` that must be finite and
    strictly positive on every element it is queried on.  Empty lists mean 1.
    """

    alpha_factors: tuple[Factor, ...] = ()
    beta_factors: tuple[Factor, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "alpha_factors", tuple(self.alpha_factors))
        object.__setattr__(self, "beta_factors", tuple(self.beta_factors))

    def weight(self, y: SetElement) -> float:
        num = 1.0
        for f in self.alpha_factors:
            num *= _factor_value(f, y)
        den = 1.0
        for f in self.beta_factors:
            den *= _factor_value(f, y)
        return num / den


def _factor_value(f: Factor, y: SetElement) -> float:
    value = float(f(y))
    if not math.isfinite(value) or value <= 0:
        raise InvalidFactorError(
            f"factor {getattr(f, '__name__', f)!r} gave {value!r} on {format_expr(y)}; "
            "factors must be finite and > 0"
        )
    return value


def mass_factor(m: MassFunction) -> Factor:
    """Weight each focal element by its mass (CLASS then reduces to DCR)."""

    def mass(y: SetElement) -> float:
        return m[y]

    return mass


def cardinality_factor(y: SetElement) -> float:
    """Number of live minterms of ``y``."""
    return float(y.size)


def constant_factor(value: float) -> Factor:
    value = float(value)

    def constant(y: SetElement) -> float:
        return value

    constant.__name__ = f"constant:{value:g}"
    return constant


def resolve_factor(name: str, m: MassFunction) -> Factor:
    """Built-in factor by name: ``mass``, ``cardinality`` or ``constant:<v>``."""
    if name == "mass":
        return mass_factor(m)
    if name == "cardinality":
        return cardinality_factor
    if name.startswith("constant:"):
        try:
            return constant_factor(float(name.split(":", 1)[1]))
        except ValueError:
            raise InvalidFactorError(f"bad constant in factor {name!r}") from None
    raise InvalidFactorError(
        f"unknown factor {name!r}; use 'mass', 'cardinality' or 'constant:<v>'"
    )


@dataclass(frozen=True)
class ConditioningReport:
    rule: RuleId
    event: ConditioningEvent
    result: MassFunction
    k_cond: float
    recipients: tuple[SetElement, ...] = ()
    degenerate_fallback_used: bool = False


def _as_event(a) -> ConditioningEvent:
    if isinstance(a, ConditioningEvent):
        return a
    return ConditioningEvent(a)


def _transfer(
    m: MassFunction, event: ConditioningEvent
) -> tuple[dict[SetElement, float], float]:
    """Group masses by ``Y & A``: returns (non-empty targets, conflict)."""
    require_closed(m)
    a = event.element
    if a.frame != m.frame:
        raise FrameMismatchError("event and bba belong to different frames")
    parts: dict[SetElement, list[float]] = {}
    conflict = []
    for y, v in m.items():
        x = y & a
        if x.bits:
            parts.setdefault(x, []).append(v)
        else:
            conflict.append(v)
    return {x: math.fsum(vs) for x, vs in parts.items()}, math.fsum(conflict)


def _sorted(elements) -> tuple[SetElement, ...]:
    return tuple(sorted(elements, key=element_sort_key))


def conflict_mass(m: MassFunction, a) -> float:
    """Total mass of the focal elements disjoint from ``a``."""
    return _transfer(m, _as_event(a))[1]


def condition_dcr(m: MassFunction, a) -> ConditioningReport:
    event = _as_event(a)
    base, k = _transfer(m, event)
    if not base:
        raise UndefinedConditioning(
            RuleId.DCR, event, f"Pl({format_expr(event.element)}) = 0, the denominator vanishes"
        )
    plausibility = math.fsum(base.values())
    result = MassFunction(m.frame, {x: v / plausibility for x, v in base.items()})
    return ConditioningReport(RuleId.DCR, event, result, k)


def condition_tbm(m: MassFunction, a) -> ConditioningReport:
    event = _as_event(a)
    base, k = _transfer(m, event)
    entries = dict(base)
    entries[m.frame.empty] = k
    result = MassFunction(m.frame, entries, allow_empty_focal=True)
    return ConditioningReport(RuleId.TBM, event, result, k)


def condition_dsm1(m: MassFunction, a) -> ConditioningReport:
    event = _as_event(a)
    base, k = _transfer(m, event)
    entries = dict(base)
    entries[event.element] = math.fsum([entries.get(event.element, 0.0), k])
    result = MassFunction(m.frame, entries)
    return ConditioningReport(RuleId.DSM1, event, result, k)


def dsm2_fallback_recipients(a: SetElement) -> tuple[SetElement, ...]:
    """Atoms inside ``a``, every union of two or more of them, and ``a``,
    deduplicated."""
    atoms = atoms_under(a)
    found = {x.bits: x for x in atoms}
    for r in range(2, len(atoms) + 1):
        for combo in itertools.combinations(atoms, r):
            bits = 0
            for atom in combo:
                bits |= atom.bits
            found.setdefault(bits, a.frame.element(bits))
    found.setdefault(a.bits, a)
    return _sorted(found.values())


def condition_dsm2(m: MassFunction, a) -> ConditioningReport:
    event = _as_event(a)
    base, k = _transfer(m, event)
    recipients = _sorted(base)
    fallback = not recipients
    if fallback:
        recipients = dsm2_fallback_recipients(event.element)
    share = k / len(recipients)
    entries = dict(base)
    for x in recipients:
        entries[x] = math.fsum([entries.get(x, 0.0), share])
    result = MassFunction(m.frame, entries)
    return ConditioningReport(
        RuleId.DSM2, event, result, k, recipients=recipients, degenerate_fallback_used=fallback
    )


def condition_class(m: MassFunction, a, params: ClassParams | None = None) -> ConditioningReport:
    """Weighted generalization of DCR.

    ``result(X) = sum of w(Y) over Y & A == X``, divided by the sum of
    ``w(Y)`` over all focal ``Y`` meeting ``A``.  With ``alpha = [mass]`` and
    no beta factors this is exactly DCR.  ``params=None`` means that choice.
    """
    event = _as_event(a)
    if params is None:
        params = ClassParams(alpha_factors=(mass_factor(m),))
    require_closed(m)
    _, k = _transfer(m, event)
    parts: dict[SetElement, list[float]] = {}
    for y in m:
        x = y & event.element
        if x.bits:
            parts.setdefault(x, []).append(params.weight(y))
    numerators = {x: math.fsum(ws) for x, ws in parts.items()}
    denominator = math.fsum(numerators.values())
    if denominator <= 0:
        raise UndefinedConditioning(
            RuleId.CLASS, event, "no focal element meets the event, the denominator vanishes"
        )
    result = MassFunction(m.frame, {x: w / denominator for x, w in numerators.items()})
    return ConditioningReport(RuleId.CLASS, event, result, k)


_RULES = {
    RuleId.DCR: condition_dcr,
    RuleId.TBM: condition_tbm,
    RuleId.DSM1: condition_dsm1,
    RuleId.DSM2: condition_dsm2,
}


def condition(
    m: MassFunction, a, rule: "RuleId | str", class_params: ClassParams | None = None
) -> ConditioningReport:
    rule = RuleId(rule)
    if rule is RuleId.CLASS:
        return condition_class(m, a, class_params)
    return _RULES[rule](m, a)


def compare_all(
    m: MassFunction, a, class_params: ClassParams | None = None
) -> list["ConditioningReport | UndefinedConditioning"]:
    """Run every rule in the order DCR, TBM, DSM1, DSM2, CLASS.

    A rule that is undefined for this input contributes its
    :class:`UndefinedConditioning` instance instead of a report.
    """
    event = _as_event(a)
    outcomes: list[ConditioningReport | UndefinedConditioning] = []
    for rule in RuleId:
        try:
            outcomes.append(condition(m, event, rule, class_params))
        except UndefinedConditioning as exc:
            outcomes.append(exc)
    return outcomes
