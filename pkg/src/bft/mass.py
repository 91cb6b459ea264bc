"""Basic belief assignments and the belief / plausibility functions."""

from __future__ import annotations

import math
from collections.abc import Mapping
from dataclasses import dataclass
from typing import Iterable, Iterator

from .algebra import Frame, FrameMismatchError, SetElement, element_sort_key, format_expr

__all__ = [
    "TOLERANCE",
    "InvalidMassError",
    "Violation",
    "MassFunction",
    "ConditioningEvent",
    "validate_bba",
    "vacuous",
    "point_mass",
    "require_closed",
    "bel",
    "pl",
]

TOLERANCE = 1e-12


class InvalidMassError(ValueError):
    def __init__(self, violations: list["Violation"]):
        self.violations = violations
        super().__init__("; ".join(str(v) for v in violations))


@dataclass(frozen=True)
class Violation:
    invariant: str
    message: str
    element: SetElement | None = None

    def __str__(self):
        if self.element is None:
            return f"{self.invariant}: {self.message}"
        return f"{self.invariant} [{format_expr(self.element)}]: {self.message}"


class MassFunction(Mapping):
    """An immutable bba: a finite map from canonical elements to masses.

    Entries may be given as a mapping or as ``(element, mass)`` pairs;
    repeated elements accumulate.  Entries of exactly zero are dropped, so
    iteration yields the focal elements.  Looking up an element that is not
    focal returns ``0.0``.

    The constructor does not enforce normalization; use :func:`validate_bba`
    (or :meth:`check`) for that.
    """

    __slots__ = ("_frame", "_entries", "_allow_empty_focal")

    def __init__(
        self,
        frame: Frame,
        entries: "Mapping[SetElement, float] | Iterable[tuple[SetElement, float]]" = (),
        allow_empty_focal: bool = False,
    ):
        if isinstance(entries, Mapping):
            entries = entries.items()
        acc: dict[SetElement, float] = {}
        for element, value in entries:
            if not isinstance(element, SetElement):
                raise TypeError(f"mass keys must be SetElement, got {type(element).__name__}")
            if element.frame != frame:
                raise FrameMismatchError("focal element belongs to a different frame")
            acc[element] = acc.get(element, 0.0) + float(value)
        self._frame = frame
        self._entries = {k: v for k, v in acc.items() if v != 0.0}
        self._allow_empty_focal = allow_empty_focal

    @property
    def frame(self) -> Frame:
        return self._frame

    @property
    def allow_empty_focal(self) -> bool:
        return self._allow_empty_focal

    def __getitem__(self, element: SetElement) -> float:
        return self._entries.get(element, 0.0)

    def __contains__(self, element) -> bool:
        return element in self._entries

    def __iter__(self) -> Iterator[SetElement]:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other):
        if not isinstance(other, MassFunction):
            return NotImplemented
        return self._frame == other._frame and self._entries == other._entries

    __hash__ = None

    def total(self) -> float:
        return math.fsum(self._entries.values())

    def sorted_items(self) -> list[tuple[SetElement, float]]:
        return sorted(self._entries.items(), key=lambda kv: element_sort_key(kv[0]))

    def isclose(self, other: "MassFunction", tol: float = TOLERANCE) -> bool:
        """Entrywise comparison within absolute tolerance ``tol``."""
        if self._frame != other.frame:
            return False
        keys = set(self) | set(other)
        return all(abs(self[k] - other[k]) <= tol for k in keys)

    def check(self) -> "MassFunction":
        violations = validate_bba(self)
        if violations:
            raise InvalidMassError(violations)
        return self

    def __repr__(self):
        body = ", ".join(f"{format_expr(k)}: {v:.12g}" for k, v in self.sorted_items())
        return f"MassFunction({{{body}}})"


@dataclass(frozen=True)
class ConditioningEvent:
    """The set in which the truth is later known to lie."""

    element: SetElement

    def __post_init__(self):
        if not self.element.bits:
            raise ValueError("a conditioning event must be non-empty")

    @property
    def frame(self) -> Frame:
        return self.element.frame

    def __str__(self):
        return format_expr(self.element)


def validate_bba(m: MassFunction) -> list[Violation]:
    violations = []
    for element, value in m.items():
        if not math.isfinite(value):
            violations.append(Violation("finite", f"mass {value!r} is not finite", element))
        elif value < 0:
            violations.append(Violation("non-negative", f"mass {value:.12g} < 0", element))
        elif value > 1 + TOLERANCE:
            violations.append(Violation("at-most-one", f"mass {value:.12g} > 1", element))
    if not m.allow_empty_focal and m[m.frame.empty] != 0:
        violations.append(
            Violation("empty-set", f"mass {m[m.frame.empty]:.12g} on the empty set", m.frame.empty)
        )
    total = m.total()
    if not math.isfinite(total) or abs(total - 1.0) > TOLERANCE:
        violations.append(Violation("sum", f"masses sum to {total:.12g}, not 1"))
    return violations


def vacuous(frame: Frame) -> MassFunction:
    """Total ignorance: all mass on the whole frame."""
    return MassFunction(frame, {frame.whole: 1.0})


def point_mass(element: SetElement) -> MassFunction:
    return MassFunction(element.frame, {element: 1.0}, allow_empty_focal=not element.bits)


def require_closed(m: MassFunction) -> None:
    """Raise unless ``m`` is a valid bba with no mass on the empty set."""
    violations = validate_bba(m)
    if m[m.frame.empty] != 0 and not any(v.invariant == "empty-set" for v in violations):
        violations.append(Violation("empty-set", "input bba carries mass on the empty set"))
    if violations:
        raise InvalidMassError(violations)


def _check_frame(m: MassFunction, a: SetElement) -> None:
    if a.frame != m.frame:
        raise FrameMismatchError("element and mass function belong to different frames")


def bel(m: MassFunction, a: SetElement) -> float:
    """Total mass of the non-empty focal elements contained in ``a``."""
    _check_frame(m, a)
    return math.fsum(v for x, v in m.items() if x.bits and x <= a)


def pl(m: MassFunction, a: SetElement) -> float:
    """Total mass of the focal elements that intersect ``a``."""
    _check_frame(m, a)
    return math.fsum(v for x, v in m.items() if x.bits & a.bits)
