"""
Frames of discernment and the canonical fusion-space algebra.

Every element of a fusion space (power set, hyper-power set or super-power
set) is stored the same way: as a bitset over the ``2**n`` minterms of the
free Boolean algebra generated by the atoms.  Minterm ``k`` is the region
lying inside atom ``i`` exactly when bit ``i`` of ``k`` is set.  A model lists
the minterms that are forced empty; those bits are always cleared, which
makes the representation unique.  Minterm 0 (outside every atom) is forced
empty in every model, so the frame is a closed world.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence, Union as _Union

__all__ = [
    "AlgebraError",
    "FrameError",
    "FrameMismatchError",
    "ExprSyntaxError",
    "UnknownAtomError",
    "Model",
    "Frame",
    "SetElement",
    "Atom",
    "Union",
    "Intersect",
    "Complement",
    "Empty",
    "Whole",
    "build_frame",
    "parse_ast",
    "parse_expr",
    "evaluate",
    "format_expr",
    "union_of",
    "intersect_of",
    "complement_of",
    "is_empty",
    "is_subset",
    "atoms_under",
    "enumerate_space",
    "element_sort_key",
    "MAX_ATOMS",
    "MAX_ENUMERATE_ATOMS",
]

MAX_ATOMS = 16
MAX_ENUMERATE_ATOMS = 4

_ATOM_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


class AlgebraError(ValueError):
    pass


class FrameError(AlgebraError):
    pass


class FrameMismatchError(AlgebraError):
    pass


class ExprSyntaxError(AlgebraError):
    """Malformed set expression; ``pos`` is the 0-based character offset."""

    def __init__(self, message: str, text: str, pos: int):
        self.text = text
        self.pos = pos
        super().__init__(f"{message} at position {pos} in {text!r}")


class UnknownAtomError(AlgebraError):
    def __init__(self, name: str, text: str, pos: int):
        self.name = name
        self.text = text
        self.pos = pos
        super().__init__(f"unknown atom {name!r} at position {pos} in {text!r}")


# ---------------------------------------------------------------------------
# Expression trees
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Atom:
    name: str
    pos: int = field(default=-1, compare=False)


@dataclass(frozen=True)
class Union:
    left: "ExprAst"
    right: "ExprAst"


@dataclass(frozen=True)
class Intersect:
    left: "ExprAst"
    right: "ExprAst"


@dataclass(frozen=True)
class Complement:
    child: "ExprAst"


@dataclass(frozen=True)
class Empty:
    pass


@dataclass(frozen=True)
class Whole:
    pass


ExprAst = _Union[Atom, Union, Intersect, Complement, Empty, Whole]


_TOKEN_RE = re.compile(r"\s*(?:([A-Za-z][A-Za-z0-9_]*)|([|&!()01]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", text, pos)
        start = match.start(1) if match.group(1) else match.start(2)
        if match.group(1):
            tokens.append(("ATOM", match.group(1), start))
        else:
            tokens.append((match.group(2), match.group(2), start))
        pos = match.end()
    tokens.append(("EOF", "", len(text)))
    return tokens


class _Parser:
    # expr   := term ('|' term)*
    # term   := factor ('&' factor)*
    # factor := '!' factor | '(' expr ')' | ATOM | '0' | '1'

    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def advance(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def parse(self) -> ExprAst:
        node = self.expr()
        kind, value, pos = self.peek()
        if kind != "EOF":
            raise ExprSyntaxError(f"unexpected token {value!r}", self.text, pos)
        return node

    def expr(self) -> ExprAst:
        node = self.term()
        while self.peek()[0] == "|":
            self.advance()
            node = Union(node, self.term())
        return node

    def term(self) -> ExprAst:
        node = self.factor()
        while self.peek()[0] == "&":
            self.advance()
            node = Intersect(node, self.factor())
        return node

    def factor(self) -> ExprAst:
        kind, value, pos = self.advance()
        if kind == "!":
            return Complement(self.factor())
        if kind == "(":
            node = self.expr()
            kind, value, close_pos = self.advance()
            if kind != ")":
                what = "end of input" if kind == "EOF" else repr(value)
                raise ExprSyntaxError(f"expected ')' but found {what}", self.text, close_pos)
            return node
        if kind == "ATOM":
            return Atom(value, pos)
        if kind == "0":
            return Empty()
        if kind == "1":
            return Whole()
        what = "end of input" if kind == "EOF" else repr(value)
        raise ExprSyntaxError(f"expected an operand but found {what}", self.text, pos)


def parse_ast(text: str) -> ExprAst:
    """Parse ``text`` into an expression tree without resolving atom names."""
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# Frames and models
# ---------------------------------------------------------------------------


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _full_mask(n: int) -> int:
    return (1 << (1 << n)) - 1


def _raw_atom_mask(i: int, n: int) -> int:
    # minterms with bit i set: runs of 2**i ones after 2**i zeros, period 2**(i+1)
    run = 1 << i
    period = run << 1
    block = ((1 << run) - 1) << run
    repeat = _full_mask(n) // ((1 << period) - 1)
    return block * repeat


def _eval_raw(node: ExprAst, atom_masks: dict[str, int], full: int, text: str) -> int:
    if isinstance(node, Atom):
        try:
            return atom_masks[node.name]
        except KeyError:
            raise UnknownAtomError(node.name, text, node.pos) from None
    if isinstance(node, Union):
        return _eval_raw(node.left, atom_masks, full, text) | _eval_raw(
            node.right, atom_masks, full, text
        )
    if isinstance(node, Intersect):
        return _eval_raw(node.left, atom_masks, full, text) & _eval_raw(
            node.right, atom_masks, full, text
        )
    if isinstance(node, Complement):
        return full ^ _eval_raw(node.child, atom_masks, full, text)
    if isinstance(node, Empty):
        return 0
    if isinstance(node, Whole):
        return full
    raise TypeError(f"not an expression node: {node!r}")


@dataclass(frozen=True)
class Model:
    """Which minterms are forced empty.

    ``kind`` is ``"shafer"``, ``"free"`` or ``"hybrid"``.  ``forced_mask`` has
    bit ``k`` set when minterm ``k`` is forced empty.  ``constraints`` keeps the
    source expressions of a hybrid model for display.
    """

    kind: str
    forced_mask: int
    constraints: tuple[str, ...] = ()

    @property
    def forced_empty(self) -> frozenset[int]:
        mask = self.forced_mask
        return frozenset(k for k in range(mask.bit_length()) if mask >> k & 1)


@dataclass(frozen=True)
class Frame:
    atoms: tuple[str, ...]
    model: Model
    _atom_masks: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = len(self.atoms)
        object.__setattr__(
            self, "_atom_masks", tuple(_raw_atom_mask(i, n) for i in range(n))
        )

    @property
    def n(self) -> int:
        return len(self.atoms)

    @property
    def full_mask(self) -> int:
        return _full_mask(self.n)

    @property
    def live_mask(self) -> int:
        return self.full_mask & ~self.model.forced_mask

    @property
    def empty(self) -> "SetElement":
        return SetElement(0, self)

    @property
    def whole(self) -> "SetElement":
        return SetElement(self.live_mask, self)

    def raw_atom_mask(self, i: int) -> int:
        return self._atom_masks[i]

    def atom(self, name: str) -> "SetElement":
        try:
            i = self.atoms.index(name)
        except ValueError:
            raise UnknownAtomError(name, name, 0) from None
        return SetElement(self._atom_masks[i] & self.live_mask, self)

    def atom_elements(self) -> list["SetElement"]:
        live = self.live_mask
        return [SetElement(mask & live, self) for mask in self._atom_masks]

    def element(self, bits: int) -> "SetElement":
        """Canonical element for an arbitrary minterm bitset."""
        return SetElement(bits & self.live_mask, self)

    def parse(self, text: str) -> "SetElement":
        return parse_expr(text, self)

    def __repr__(self):
        return f"Frame(atoms={list(self.atoms)!r}, model={self.model.kind!r})"


def build_frame(atoms: Sequence[str], model_spec: "str | Iterable[str]" = "shafer") -> Frame:
    """Build a frame from atom names and a model descriptor.

    ``model_spec`` is ``"shafer"`` (atoms pairwise disjoint), ``"free"`` (no
    intersection forced empty) or an iterable of expressions, each of which
    is declared empty (a hybrid model).
    """
    atoms = tuple(atoms)
    n = len(atoms)
    if n < 2:
        raise FrameError(f"a frame needs at least 2 atoms, got {n}")
    if n > MAX_ATOMS:
        raise FrameError(f"at most {MAX_ATOMS} atoms are supported, got {n}")
    for name in atoms:
        if not isinstance(name, str) or not _ATOM_RE.match(name):
            raise FrameError(f"invalid atom name {name!r}")
    seen = set()
    for name in atoms:
        if name in seen:
            raise FrameError(f"duplicate atom name {name!r}")
        seen.add(name)

    full = _full_mask(n)
    outside = 1  # minterm 0
    if model_spec == "free":
        model = Model("free", outside)
    elif model_spec == "shafer":
        singles = 0
        for i in range(n):
            singles |= 1 << (1 << i)
        model = Model("shafer", full & ~singles)
    elif isinstance(model_spec, str):
        raise FrameError(f"unknown model {model_spec!r}; use 'shafer', 'free' or a constraint list")
    else:
        constraints = tuple(model_spec)
        masks = {name: _raw_atom_mask(i, n) for i, name in enumerate(atoms)}
        forced = outside
        for text in constraints:
            forced |= _eval_raw(parse_ast(text), masks, full, text)
        model = Model("hybrid", forced, constraints)
    return Frame(atoms, model)


# ---------------------------------------------------------------------------
# Elements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SetElement:
    """Canonical element of a fusion space; see the module docstring."""

    bits: int
    frame: Frame = field(repr=False)

    def _check(self, other: "SetElement") -> None:
        if not isinstance(other, SetElement):
            raise TypeError(f"expected SetElement, got {type(other).__name__}")
        if other.frame != self.frame:
            raise FrameMismatchError("elements belong to different frames")

    def __or__(self, other: "SetElement") -> "SetElement":
        self._check(other)
        return SetElement(self.bits | other.bits, self.frame)

    def __and__(self, other: "SetElement") -> "SetElement":
        self._check(other)
        return SetElement(self.bits & other.bits, self.frame)

    def __invert__(self) -> "SetElement":
        return SetElement(self.frame.live_mask & ~self.bits, self.frame)

    def __le__(self, other: "SetElement") -> bool:
        self._check(other)
        return self.bits & ~other.bits == 0

    def __lt__(self, other: "SetElement") -> bool:
        return self <= other and self.bits != other.bits

    def __bool__(self) -> bool:
        return self.bits != 0

    @property
    def size(self) -> int:
        """Number of live minterms in the element."""
        return _popcount(self.bits)

    def __str__(self):
        return format_expr(self)

    def __repr__(self):
        return f"SetElement({format_expr(self)!r})"


def evaluate(node: ExprAst, frame: Frame, text: str = "") -> SetElement:
    masks = {name: frame.raw_atom_mask(i) for i, name in enumerate(frame.atoms)}
    return frame.element(_eval_raw(node, masks, frame.full_mask, text))


def parse_expr(text: str, frame: Frame) -> SetElement:
    """Parse a set expression into its canonical element of ``frame``.

    Grammar (``!`` binds tighter than ``&``, which binds tighter than ``|``)::

        expr   := term ('|' term)*
        term   := factor ('&' factor)*
        factor := '!' factor | '(' expr ')' | ATOM | '0' | '1'

    ``0`` is the empty set and ``1`` the whole frame.
    """
    return evaluate(parse_ast(text), frame, text)


def union_of(a: SetElement, b: SetElement) -> SetElement:
    return a | b


def intersect_of(a: SetElement, b: SetElement) -> SetElement:
    return a & b


def complement_of(a: SetElement) -> SetElement:
    return ~a


def is_empty(x: SetElement) -> bool:
    return x.bits == 0


def is_subset(a: SetElement, b: SetElement) -> bool:
    return a <= b


def atoms_under(a: SetElement, frame: Frame | None = None) -> list[SetElement]:
    """Non-empty atoms contained in ``a``, in frame order."""
    frame = a.frame if frame is None else frame
    if frame != a.frame:
        raise FrameMismatchError("element does not belong to the given frame")
    return [atom for atom in frame.atom_elements() if atom.bits and atom <= a]


# ---------------------------------------------------------------------------
# Canonical formatting
# ---------------------------------------------------------------------------

# A term is a tuple of literals (atom index, negated), sorted by atom index.
_Term = tuple[tuple[int, bool], ...]


def _term_bits(frame: Frame, term: _Term) -> int:
    bits = frame.live_mask
    full = frame.full_mask
    for i, negated in term:
        mask = frame.raw_atom_mask(i)
        bits &= (full ^ mask) if negated else mask
    return bits


def _positive_terms(x: SetElement) -> list[_Term]:
    # Intersections of atoms inside x, grown breadth-first; a branch stops
    # once its intersection is empty or already inside x.
    frame = x.frame
    found: list[_Term] = []
    frontier = [((), frame.live_mask)]
    while frontier:
        nxt = []
        for term, bits in frontier:
            start = term[-1][0] + 1 if term else 0
            for j in range(start, frame.n):
                sub = bits & frame.raw_atom_mask(j)
                if not sub:
                    continue
                extended = term + ((j, False),)
                if sub & ~x.bits == 0:
                    found.append(extended)
                else:
                    nxt.append((extended, sub))
        frontier = nxt
    return found


def _general_terms(x: SetElement) -> list[_Term]:
    # Grow each uncovered minterm into a maximal cube, dropping negative
    # literals before positive ones, in atom order.
    frame = x.frame
    outside = frame.live_mask & ~x.bits
    covered = 0
    terms: list[_Term] = []
    for k in range(1 << frame.n):
        if not (x.bits >> k & 1) or covered >> k & 1:
            continue
        lits = {i: not (k >> i & 1) for i in range(frame.n)}
        order = [i for i in range(frame.n) if lits[i]] + [i for i in range(frame.n) if not lits[i]]
        for i in order:
            trial = dict(lits)
            del trial[i]
            if _term_bits(frame, tuple(sorted(trial.items()))) & outside == 0:
                lits = trial
        term = tuple(sorted(lits.items()))
        covered |= _term_bits(frame, term)
        terms.append(term)
    return terms


@lru_cache(maxsize=8192)
def _canonical_terms(x: SetElement) -> tuple[_Term, ...]:
    frame = x.frame
    candidates = _positive_terms(x)
    cover = 0
    for term in candidates:
        cover |= _term_bits(frame, term)
    if cover != x.bits:
        candidates = _general_terms(x)

    # keep terms whose region is maximal; equal regions keep the first term
    by_bits: dict[int, _Term] = {}
    for term in sorted(candidates, key=lambda t: (len(t), t)):
        by_bits.setdefault(_term_bits(frame, term), term)
    maximal = [
        (bits, term)
        for bits, term in by_bits.items()
        if not any(bits != other and bits & ~other == 0 for other in by_bits)
    ]
    maximal.sort(key=lambda item: item[1])

    # drop redundant terms, latest first
    kept = list(maximal)
    for item in reversed(maximal):
        rest = 0
        for other in kept:
            if other is not item:
                rest |= other[0]
        if rest == x.bits:
            kept.remove(item)
    return tuple(term for _, term in kept)


def _format_term(frame: Frame, term: _Term) -> str:
    return "&".join(("!" if negated else "") + frame.atoms[i] for i, negated in term)


def format_expr(x: SetElement) -> str:
    """Deterministic canonical text for ``x``; ``parse_expr`` inverts it.

    ``0`` is the empty set, ``1`` the whole frame, anything else a union of
    maximal terms.  Atom-only (hyper-power set) elements are written without
    complements whenever possible.
    """
    if x.bits == 0:
        return "0"
    if x.bits == x.frame.live_mask:
        return "1"
    return "|".join(_format_term(x.frame, term) for term in _canonical_terms(x))


def element_sort_key(x: SetElement):
    """Ordering used for tables and listings: by size, then by canonical terms."""
    if x.bits == 0 or x.bits == x.frame.live_mask:
        return (x.size, ())
    return (x.size, _canonical_terms(x))


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------


def _check_enumerable(frame: Frame) -> None:
    if frame.n > MAX_ENUMERATE_ATOMS:
        raise FrameError(
            f"enumeration is limited to {MAX_ENUMERATE_ATOMS} atoms, frame has {frame.n}"
        )


def enumerate_space(frame: Frame, closure: str = "super") -> list[SetElement]:
    """All distinct elements of the power (``"power"``), hyper-power
    (``"hyper"``) or super-power (``"super"``) set of ``frame``, empty set
    included, sorted by :func:`element_sort_key`.
    """
    _check_enumerable(frame)
    atoms = frame.atom_elements()
    found: set[int] = {0}
    if closure == "power":
        for r in range(1, frame.n + 1):
            for combo in itertools.combinations(atoms, r):
                bits = 0
                for atom in combo:
                    bits |= atom.bits
                found.add(bits)
    elif closure == "hyper":
        # every lattice element is a union of intersections of atoms
        meets = set()
        for r in range(1, frame.n + 1):
            for combo in itertools.combinations(atoms, r):
                bits = frame.live_mask
                for atom in combo:
                    bits &= atom.bits
                if bits:
                    meets.add(bits)
        meets = sorted(meets)
        for r in range(1, len(meets) + 1):
            for combo in itertools.combinations(meets, r):
                bits = 0
                for m in combo:
                    bits |= m
                found.add(bits)
    elif closure == "super":
        live = [k for k in range(1 << frame.n) if frame.live_mask >> k & 1]
        for r in range(len(live) + 1):
            for combo in itertools.combinations(live, r):
                bits = 0
                for k in combo:
                    bits |= 1 << k
                found.add(bits)
    else:
        raise ValueError(f"unknown closure {closure!r}; use 'power', 'hyper' or 'super'")
    return sorted((SetElement(bits, frame) for bits in found), key=element_sort_key)
