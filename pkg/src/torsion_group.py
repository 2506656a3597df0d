"""
Exact arithmetic on finite subgroups of (Q/Z)^2.

Points are pairs of Fractions reduced into [0, 1). Subgroups are stored by
their full element set, so equality is set equality and every enumeration is
deterministic under ``TorsionPoint.sort_key``.
"""

import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import FrozenSet, Iterable, List, Sequence, Tuple

from sympy.polys.domains import ZZ
from sympy.polys.matrices import DM
from sympy.polys.matrices.normalforms import smith_normal_form

from src.errors import DomainError, InvariantViolation, ParseError

logger = logging.getLogger(__name__)

Rational01 = Fraction


def rational01(numerator: int, denominator: int = 1) -> Rational01:
    """Return numerator/denominator reduced into [0, 1)."""
    if denominator == 0:
        raise DomainError("zero denominator", condition="rational mod 1")
    return Fraction(numerator, denominator) % 1


@dataclass(frozen=True)
class TorsionPoint:
    c1: Fraction
    c2: Fraction

    def __post_init__(self):
        object.__setattr__(self, "c1", Fraction(self.c1) % 1)
        object.__setattr__(self, "c2", Fraction(self.c2) % 1)

    @classmethod
    def from_ints(cls, a: int, b: int, d: int) -> "TorsionPoint":
        return cls(Fraction(a, d), Fraction(b, d))

    def __add__(self, other: "TorsionPoint") -> "TorsionPoint":
        return TorsionPoint(self.c1 + other.c1, self.c2 + other.c2)

    def __sub__(self, other: "TorsionPoint") -> "TorsionPoint":
        return TorsionPoint(self.c1 - other.c1, self.c2 - other.c2)

    def __neg__(self) -> "TorsionPoint":
        return TorsionPoint(-self.c1, -self.c2)

    def __rmul__(self, n: int) -> "TorsionPoint":
        return TorsionPoint(n * self.c1, n * self.c2)

    __mul__ = __rmul__

    def is_zero(self) -> bool:
        return self.c1 == 0 and self.c2 == 0

    def sort_key(self):
        return (
            (self.c1.denominator, self.c2.denominator),
            (self.c1.numerator, self.c2.numerator),
        )

    def coordinates(self, d: int) -> Tuple[int, int]:
        """Integer coordinates (a, b) with self = (a/d, b/d)."""
        a, b = self.c1 * d, self.c2 * d
        if a.denominator != 1 or b.denominator != 1:
            raise DomainError(f"{self} is not {d}-torsion", condition="coordinates")
        return int(a), int(b)

    def __str__(self) -> str:
        return f"({self.c1},{self.c2})"


ZERO = TorsionPoint(Fraction(0), Fraction(0))


def point_order(p: TorsionPoint) -> int:
    """
    Order of a torsion point.

    Args:
        p (TorsionPoint): Point of (Q/Z)^2

    Returns:
        int: Least n >= 1 with n*p = 0
    """
    return lcm(p.c1.denominator, p.c2.denominator)


def _invariant_factors(generators: Sequence[TorsionPoint]) -> Tuple[int, int]:
    # The subgroup is Z^2-lattice / N Z^2 scaled by 1/N; Smith form of the
    # lattice gives the cyclic decomposition.
    n = lcm(*(point_order(g) for g in generators)) if generators else 1
    columns = [[int(g.c1 * n), int(g.c2 * n)] for g in generators] + [[n, 0], [0, n]]
    rows = [[c[i] for c in columns] for i in range(2)]
    snf = smith_normal_form(DM(rows, ZZ)).to_Matrix()
    a1, a2 = sorted(abs(int(snf[i, i])) for i in range(2))
    return n // a1, n // a2


@dataclass(frozen=True)
class FiniteSubgroup:
    """A finite subgroup of (Q/Z)^2 with its sorted element list."""

    elements: Tuple[TorsionPoint, ...]
    generators: Tuple[TorsionPoint, ...] = field(compare=False)
    invariant_factors: Tuple[int, int] = field(compare=False)
    _members: FrozenSet[TorsionPoint] = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_members", frozenset(self.elements))

    def __hash__(self):
        return hash(self._members)

    def __contains__(self, p: TorsionPoint) -> bool:
        return p in self._members

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def members(self) -> FrozenSet[TorsionPoint]:
        return self._members

    @property
    def exponent(self) -> int:
        return self.invariant_factors[0]

    def is_cyclic(self) -> bool:
        return self.invariant_factors[1] == 1

    def is_subgroup_of(self, other: "FiniteSubgroup") -> bool:
        return self._members <= other.members

    def sort_key(self):
        return (self.order, tuple(p.sort_key() for p in self.elements))

    def sylow_subgroup(self, prime: int) -> "FiniteSubgroup":
        return span([p for p in self.elements if _is_power_of(point_order(p), prime)] or [ZERO])

    def canonical_generators(self) -> Tuple[TorsionPoint, ...]:
        """Smallest generating set chosen by sort key, for display."""
        return _canonical_generators(self)


def _is_power_of(n: int, prime: int) -> bool:
    while n % prime == 0:
        n //= prime
    return n == 1


@lru_cache(maxsize=None)
def _canonical_generators(group: FiniteSubgroup) -> Tuple[TorsionPoint, ...]:
    if group.order == 1:
        return ()
    exponent = group.exponent
    first = min((p for p in group if point_order(p) == exponent), key=TorsionPoint.sort_key)
    if group.is_cyclic():
        return (first,)
    for p in sorted(group.elements, key=TorsionPoint.sort_key):
        if span([first, p]) == group:
            return (first, p)
    raise InvariantViolation(f"no two-element generating set for {group}")


def span(generators: Iterable[TorsionPoint]) -> FiniteSubgroup:
    """
    Subgroup generated by the given points.

    Args:
        generators (Iterable[TorsionPoint]): Non-empty list of points, 0 allowed

    Returns:
        FiniteSubgroup: Closure under addition, with Smith-form invariant factors
    """
    gens = tuple(generators)
    if not gens:
        raise DomainError("empty generator list", condition="span")
    elements = {ZERO}
    frontier = [ZERO]
    while frontier:
        p = frontier.pop()
        for g in gens:
            q = p + g
            if q not in elements:
                elements.add(q)
                frontier.append(q)
    factors = _invariant_factors(gens)
    if factors[0] * factors[1] != len(elements):
        raise InvariantViolation(f"invariant factors {factors} disagree with order {len(elements)}")
    return FiniteSubgroup(tuple(sorted(elements, key=TorsionPoint.sort_key)), gens, factors)


@lru_cache(maxsize=None)
def torsion_grid(n: int) -> FiniteSubgroup:
    """The full n-torsion (1/n Z / Z)^2."""
    if n < 1:
        raise DomainError(f"n must be positive, got {n}", condition="torsion grid")
    return span([TorsionPoint(Fraction(1, n), 0), TorsionPoint(0, Fraction(1, n))])


@lru_cache(maxsize=None)
def all_subgroups(ambient: FiniteSubgroup) -> Tuple[FiniteSubgroup, ...]:
    """Every subgroup of ``ambient``, sorted by (order, elements)."""
    cyclic = {}
    for p in ambient.elements:
        c = span([p])
        cyclic.setdefault(c, c)
    cyclics = sorted(cyclic.values(), key=FiniteSubgroup.sort_key)
    found = dict(cyclic)
    # rank <= 2, so pairs of cyclic subgroups reach everything
    for i, a in enumerate(cyclics):
        for b in cyclics[i + 1:]:
            if a.is_subgroup_of(b) or b.is_subgroup_of(a):
                continue
            s = span([a.generators[0], b.generators[0]])
            found.setdefault(s, s)
    logger.debug("ambient of order %d has %d subgroups", ambient.order, len(found))
    return tuple(sorted(found.values(), key=FiniteSubgroup.sort_key))


def subgroups_of_order(ambient: FiniteSubgroup, n: int) -> List[FiniteSubgroup]:
    """
    Every subgroup of ``ambient`` with exactly ``n`` elements.

    Args:
        ambient (FiniteSubgroup): Group to search
        n (int): Required order, a divisor of |ambient|

    Returns:
        List[FiniteSubgroup]: Subgroups in canonical order
    """
    if n < 1 or ambient.order % n:
        raise DomainError(f"{n} does not divide {ambient.order}", condition="subgroup order")
    return [h for h in all_subgroups(ambient) if h.order == n]


def halvings_in(x: TorsionPoint, ambient: FiniteSubgroup) -> List[TorsionPoint]:
    """
    All y in ``ambient`` with 2y = x.

    Args:
        x (TorsionPoint): Point to halve, must lie in ``ambient``
        ambient (FiniteSubgroup): Group the halvings are taken from

    Returns:
        List[TorsionPoint]: Halvings in canonical order; empty or a coset of ambient[2]
    """
    if x not in ambient:
        raise DomainError(f"{x} is not in the ambient group", condition="halving")
    return [y for y in ambient.elements if 2 * y == x]


_GENERATOR = re.compile(r"^\s*(-?\d+)\s*,\s*(-?\d+)\s*$")


def parse_subgroup(d: int, text: str) -> List[TorsionPoint]:
    """Parse ``"a,b;c,e"`` into the points (a/d, b/d), (c/d, e/d)."""
    if d < 1:
        raise ParseError(f"d must be a positive integer, got {d}")
    points = []
    for chunk in text.split(";"):
        match = _GENERATOR.match(chunk)
        if not match:
            raise ParseError(f"cannot read generator {chunk!r}; expected 'a,b'")
        points.append(TorsionPoint.from_ints(int(match.group(1)), int(match.group(2)), d))
    return points


def format_points(d: int, points: Iterable[TorsionPoint]) -> str:
    """Inverse of ``parse_subgroup`` for d-torsion points."""
    return ";".join("{},{}".format(*p.coordinates(d)) for p in points)
