"""Literal-definition reference implementation for Shafer frames.

Sets are frozensets of atom names and every sum runs over the whole power
set, exactly as the defining formulas are written.  Nothing here touches
the minterm bitsets of the production code except the two converters.
"""

from itertools import combinations

from bft import SetElement, parse_expr


def powerset(atoms):
    atoms = list(atoms)
    return [frozenset(c) for r in range(len(atoms) + 1) for c in combinations(atoms, r)]


def to_set(x: SetElement) -> frozenset:
    # Shafer frames: the live minterms are the singletons, minterm 2**i for atom i
    return frozenset(a for i, a in enumerate(x.frame.atoms) if x.bits >> (1 << i) & 1)


def from_set(frame, s) -> SetElement:
    return parse_expr("|".join(sorted(s)) or "0", frame)


def as_dict(m):
    """Production MassFunction -> {frozenset: mass}."""
    return {to_set(x): v for x, v in m.items()}


def mass_of(m, y):
    return m.get(y, 0.0)


def bel(m, A, space):
    return sum(mass_of(m, X) for X in space if X and X <= A)


def pl(m, A, space):
    return sum(mass_of(m, X) for X in space if X & A)


def conjunctive(m1, m2, space):
    return {A: sum(mass_of(m1, X) * mass_of(m2, Y) for X in space for Y in space if X & Y == A)
            for A in space}


def dcr(m, A, space):
    den = sum(mass_of(m, Y) for Y in space if Y & A)
    if den == 0:
        return None
    return {X: sum(mass_of(m, Y) for Y in space if Y & A == X) / den for X in space if X}


def tbm(m, A, space):
    return {X: sum(mass_of(m, Y) for Y in space if Y & A == X) for X in space}


def dsm1(m, A, space):
    return {
        X: sum(mass_of(m, Y) for Y in space if (Y & A == X) or (not (Y & A) and X == A))
        for X in space
        if X
    }


def dsm2(m, A, space):
    k = sum(mass_of(m, Y) for Y in space if not (Y & A))
    base = {X: sum(mass_of(m, Y) for Y in space if Y & A == X) for X in space if X}
    recipients = [Z for Z in space if Z and Z <= A and base[Z] != 0]
    if not recipients:
        # singletons in A, unions of singletons in A, and A itself
        recipients = [Z for Z in space if Z and Z <= A]
    return {X: base[X] + (k / len(recipients) if X in recipients else 0.0) for X in space if X}


def dense(d, space, include_empty=False):
    return {X: d.get(X, 0.0) for X in space if X or include_empty}
