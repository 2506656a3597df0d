"""
Symbolic isogeny classes: factors, products of factors and relations.
"""

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from functools import reduce
from math import gcd
from typing import Dict, Iterable, Iterator, Mapping, Tuple, Union

from src.errors import InvariantViolation


class FactorKind(Enum):
    SURFACE = "surface"
    JACOBIAN = "jacobian"
    ELLIPTIC = "elliptic"
    REMAINDER = "remainder"
    TRIVIAL = "trivial"


_KIND_RANK = {
    FactorKind.SURFACE: 0,
    FactorKind.JACOBIAN: 1,
    FactorKind.ELLIPTIC: 2,
    FactorKind.REMAINDER: 3,
    FactorKind.TRIVIAL: 4,
}


@dataclass(frozen=True)
class IsogenyFactor:
    """One symbolic abelian variety.

    ``label`` names the underlying curve (``C/<-1>``) for Jacobian-type
    factors; the surface is always labelled ``A``.
    """

    kind: FactorKind
    label: str
    dimension: int

    def __post_init__(self):
        fixed = {FactorKind.SURFACE: 2, FactorKind.ELLIPTIC: 1, FactorKind.TRIVIAL: 0}
        expected = fixed.get(self.kind)
        if expected is not None and self.dimension != expected:
            raise InvariantViolation(f"{self.kind.value} factor of dimension {self.dimension}")
        if self.dimension < 0:
            raise InvariantViolation(f"negative dimension for {self.label}")

    @classmethod
    def surface(cls) -> "IsogenyFactor":
        return cls(FactorKind.SURFACE, "A", 2)

    @classmethod
    def curve_jacobian(cls, label: str, genus: int) -> "IsogenyFactor":
        """Jacobian of a curve, normalized by genus."""
        if genus == 0:
            return cls(FactorKind.TRIVIAL, label, 0)
        if genus == 1:
            return cls(FactorKind.ELLIPTIC, label, 1)
        return cls(FactorKind.JACOBIAN, label, genus)

    @classmethod
    def remainder(cls, label: str, dimension: int) -> "IsogenyFactor":
        return cls(FactorKind.REMAINDER, label, dimension)

    @property
    def is_atomic(self) -> bool:
        return self.kind is not FactorKind.JACOBIAN

    def sort_key(self):
        return (_KIND_RANK[self.kind], -self.dimension, self.label)

    def __str__(self) -> str:
        if self.kind is FactorKind.SURFACE:
            return self.label
        if self.kind is FactorKind.ELLIPTIC:
            return f"E({self.label})"
        if self.kind is FactorKind.REMAINDER:
            return f"P({self.label})"
        return f"J({self.label})"


class IsogenyExpression:
    """A formal product of factors with positive multiplicities."""

    def __init__(self, factors: Union[Mapping[IsogenyFactor, int], Iterable[IsogenyFactor]] = ()):
        counts = Counter(factors)
        if any(m < 0 for m in counts.values()):
            raise InvariantViolation(f"negative multiplicity in {dict(counts)}")
        self._factors: Dict[IsogenyFactor, int] = {f: m for f, m in counts.items() if m}

    @classmethod
    def of(cls, *factors: IsogenyFactor) -> "IsogenyExpression":
        return cls(factors)

    @property
    def dimension(self) -> int:
        return sum(f.dimension * m for f, m in self._factors.items())

    def items(self) -> Iterator[Tuple[IsogenyFactor, int]]:
        return iter(sorted(self._factors.items(), key=lambda item: item[0].sort_key()))

    def factors(self) -> Tuple[IsogenyFactor, ...]:
        return tuple(f for f, _ in self.items())

    def multiplicity(self, factor: IsogenyFactor) -> int:
        return self._factors.get(factor, 0)

    def is_empty(self) -> bool:
        return not self._factors

    def nontrivial(self) -> "IsogenyExpression":
        return IsogenyExpression({f: m for f, m in self._factors.items() if f.kind is not FactorKind.TRIVIAL})

    def __add__(self, other: "IsogenyExpression") -> "IsogenyExpression":
        return IsogenyExpression(Counter(self._factors) + Counter(other._factors))

    def __mul__(self, n: int) -> "IsogenyExpression":
        return IsogenyExpression({f: m * n for f, m in self._factors.items()})

    __rmul__ = __mul__

    def substitute(self, factor: IsogenyFactor, replacement: "IsogenyExpression") -> "IsogenyExpression":
        m = self.multiplicity(factor)
        if not m:
            return self
        rest = {f: k for f, k in self._factors.items() if f != factor}
        return IsogenyExpression(rest) + replacement * m

    def __eq__(self, other) -> bool:
        return isinstance(other, IsogenyExpression) and self._factors == other._factors

    def __hash__(self) -> int:
        return hash(frozenset(self._factors.items()))

    def __repr__(self) -> str:
        return f"IsogenyExpression({self})"

    def __str__(self) -> str:
        if not self._factors:
            return "0"
        return " x ".join(str(f) if m == 1 else f"{f}^{m}" for f, m in self.items())


@dataclass(frozen=True)
class Relation:
    """left ~ right, an isogeny between two products."""

    left: IsogenyExpression
    right: IsogenyExpression
    source: str = ""

    def is_balanced(self) -> bool:
        return self.left.dimension == self.right.dimension

    def coefficient(self, factor: IsogenyFactor) -> int:
        return self.left.multiplicity(factor) - self.right.multiplicity(factor)

    def factors(self) -> Tuple[IsogenyFactor, ...]:
        return tuple(sorted(set(self.left.factors()) | set(self.right.factors()), key=IsogenyFactor.sort_key))

    def cancelled(self) -> "Relation":
        """Drop trivial factors, cancel common ones and take the exact root.

        Cancellation is valid up to isogeny by Poincare reducibility.
        """
        left, right = Counter(), Counter()
        for f in self.factors():
            if f.kind is FactorKind.TRIVIAL:
                continue
            c = self.coefficient(f)
            if c > 0:
                left[f] = c
            elif c < 0:
                right[f] = -c
        g = reduce(gcd, list(left.values()) + list(right.values()), 0)
        if g > 1:
            left = Counter({f: m // g for f, m in left.items()})
            right = Counter({f: m // g for f, m in right.items()})
        return Relation(IsogenyExpression(left), IsogenyExpression(right), self.source)

    def __str__(self) -> str:
        return f"{self.left} ~ {self.right}"
