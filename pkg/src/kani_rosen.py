"""
The group G = <[-1]> x| X acting on C, subgroup partitions of it, and the
Kani-Rosen isogeny relations those partitions produce.

Group elements are affine maps z -> s*z + c of A restricted to C. Subgroups
are frozensets of element indices into a ``GroupTable``.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Tuple, Union

from src.cover_curve import CoverCurve, fix_count, involution_quotient_genus
from src.errors import DomainError, InconsistentRamificationError, SearchBoundExceeded
from src.isogeny import IsogenyExpression, IsogenyFactor, Relation
from src.torsion_group import FiniteSubgroup, TorsionPoint, all_subgroups, span

logger = logging.getLogger(__name__)

Subgroup = FrozenSet[int]


@dataclass(frozen=True)
class AutElement:
    """[-1]^(sign == -1) o t_shift."""

    sign: int
    shift: TorsionPoint

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise DomainError(f"sign must be +1 or -1, got {self.sign}", condition="automorphism")

    def _affine(self) -> Tuple[int, TorsionPoint]:
        return self.sign, self.shift if self.sign == 1 else -self.shift

    @classmethod
    def _from_affine(cls, sign: int, offset: TorsionPoint) -> "AutElement":
        return cls(sign, offset if sign == 1 else -offset)

    def compose(self, other: "AutElement") -> "AutElement":
        """self o other."""
        s1, c1 = self._affine()
        s2, c2 = other._affine()
        return AutElement._from_affine(s1 * s2, s1 * c2 + c1)

    @property
    def is_reflection(self) -> bool:
        return self.sign == -1

    def __str__(self) -> str:
        if self.sign == 1:
            return "1" if self.shift.is_zero() else f"t{self.shift}"
        return "-1" if self.shift.is_zero() else f"-1∘t{self.shift}"


@dataclass(frozen=True)
class GroupTable:
    """Multiplication table of a finite group with its subgroup lattice."""

    labels: Tuple[str, ...]
    product: Tuple[Tuple[int, ...], ...]
    subgroups: Tuple[Subgroup, ...]
    identity: int = 0

    @property
    def order(self) -> int:
        return len(self.labels)

    @property
    def whole(self) -> Subgroup:
        return frozenset(range(self.order))

    @property
    def trivial(self) -> Subgroup:
        return frozenset({self.identity})

    @cached_property
    def inverses(self) -> Tuple[int, ...]:
        return tuple(row.index(self.identity) for row in self.product)

    def is_subgroup(self, indices: Iterable[int]) -> bool:
        members = frozenset(indices)
        return self.identity in members and all(
            self.product[a][b] in members for a in members for b in members
        )

    def conjugates(self, subgroup: Subgroup) -> List[Subgroup]:
        found = {
            frozenset(self.product[self.product[g][h]][self.inverses[g]] for h in subgroup)
            for g in range(self.order)
        }
        return sorted(found, key=lambda h: tuple(sorted(h)))

    def canonical_key(self, subgroup: Subgroup) -> Tuple[int, ...]:
        return tuple(sorted(self.conjugates(subgroup)[0]))

    @classmethod
    def from_subgroup(cls, group: FiniteSubgroup) -> "GroupTable":
        points = group.elements
        position = {p: i for i, p in enumerate(points)}
        product = tuple(tuple(position[p + q] for q in points) for p in points)
        subgroups = tuple(frozenset(position[p] for p in h) for h in all_subgroups(group))
        return cls(tuple(f"t{p}" for p in points), product, subgroups)


class AutGroup:
    """G = <[-1]> x| X acting on the cover curve C."""

    def __init__(self, curve: CoverCurve):
        self.curve = curve
        self.translations = curve.subgroup
        points = self.translations.elements
        self._n = len(points)
        self.elements: Tuple[AutElement, ...] = tuple(
            [AutElement(1, p) for p in points] + [AutElement(-1, p) for p in points]
        )
        self._index = {e: i for i, e in enumerate(self.elements)}
        self._position = {p: i for i, p in enumerate(points)}
        product = tuple(
            tuple(self._index[a.compose(b)] for b in self.elements) for a in self.elements
        )
        self.table = GroupTable(tuple(str(e) for e in self.elements), product, self._enumerate_subgroups())
        self._labels: Dict[Subgroup, str] = {}
        self._genera: Dict[Subgroup, int] = {}

    def _enumerate_subgroups(self) -> Tuple[Subgroup, ...]:
        n, position = self._n, self._position
        found = []
        for t in all_subgroups(self.translations):
            t_idx = frozenset(position[p] for p in t)
            found.append(t_idx)
            seen = set()
            for a in self.translations:
                coset = frozenset(a + b for b in t)
                if coset in seen:
                    continue
                seen.add(coset)
                found.append(t_idx | {n + position[c] for c in coset})
        return tuple(found)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def subgroups(self) -> Tuple[Subgroup, ...]:
        return self.table.subgroups

    def index(self, element: AutElement) -> int:
        try:
            return self._index[element]
        except KeyError:
            raise DomainError(f"{element} is not in G", condition="automorphism") from None

    def translation_subgroup(self) -> Subgroup:
        return frozenset(range(self._n))

    def translation_subgroups(self) -> List[Subgroup]:
        return [h for h in self.subgroups if max(h) < self._n]

    def generate(self, elements: Iterable[AutElement]) -> Subgroup:
        gens = [self.index(e) for e in elements]
        members = {self.table.identity}
        frontier = [self.table.identity]
        while frontier:
            a = frontier.pop()
            for g in gens:
                b = self.table.product[a][g]
                if b not in members:
                    members.add(b)
                    frontier.append(b)
        return frozenset(members)

    def translation_part(self, subgroup: Subgroup) -> FiniteSubgroup:
        points = [self.elements[i].shift for i in subgroup if i < self._n]
        return span(points)

    def reflection_shifts(self, subgroup: Subgroup) -> List[TorsionPoint]:
        return sorted(
            (self.elements[i].shift for i in subgroup if i >= self._n), key=TorsionPoint.sort_key
        )

    @cached_property
    def fix_counts(self) -> Dict[TorsionPoint, int]:
        return {x: fix_count(self.curve, x).count for x in self.translations}

    def describe(self, subgroup: Subgroup) -> str:
        """Name of the quotient curve C/H, via the least conjugate of H."""
        if subgroup not in self._labels:
            rep = self.table.conjugates(subgroup)[0]
            gens = [f"t{p}" for p in self.translation_part(rep).canonical_generators()]
            shifts = self.reflection_shifts(rep)
            if shifts:
                gens.append(str(AutElement(-1, shifts[0])))
            self._labels[subgroup] = f"C/<{','.join(gens)}>" if gens else "C"
        return self._labels[subgroup]


def subgroup_quotient_genus(aut: AutGroup, subgroup: Subgroup) -> int:
    """
    Genus of C/H, through the intermediate quotient C/(H meet X).

    The result is checked against Riemann-Hurwitz for H acting on C directly.

    Args:
        aut (AutGroup): Automorphism group of the curve
        subgroup (Subgroup): Subgroup H as a set of element indices

    Returns:
        int: Genus of the quotient curve
    """
    if subgroup in aut._genera:
        return aut._genera[subgroup]
    d = aut.curve.d
    translations = aut.translation_part(subgroup)
    t = translations.order
    genus_t = d // t + 1
    shifts = aut.reflection_shifts(subgroup)
    ramification = sum(aut.fix_counts[a] for a in shifts)
    if not shifts:
        genus = genus_t
    else:
        # fixed points of the shifts in a + T descend in orbits of size |T|
        if ramification % t:
            raise InconsistentRamificationError(
                f"ramification {ramification} is not divisible by |T|={t}"
            )
        genus = involution_quotient_genus(genus_t, ramification // t)
    # Riemann-Hurwitz on C directly: 2g_C - 2 = |H|(2g' - 2) + sum of fixed points
    numerator = 2 * aut.curve.genus - 2 - ramification
    if numerator % (2 * len(subgroup)) or numerator // (2 * len(subgroup)) + 1 != genus:
        raise InconsistentRamificationError(
            f"Riemann-Hurwitz disagrees for {aut.describe(subgroup)}: genus {genus}"
        )
    aut._genera[subgroup] = genus
    return genus


def factor_for_subgroup(aut: AutGroup, subgroup: Subgroup) -> IsogenyFactor:
    """The Jacobian of C/H as a symbolic factor.

    C/X is the genus 2 curve H in A/X, whose Jacobian is isogenous to A.
    """
    if subgroup == aut.translation_subgroup():
        return IsogenyFactor.surface()
    return IsogenyFactor.curve_jacobian(aut.describe(subgroup), subgroup_quotient_genus(aut, subgroup))


@dataclass(frozen=True)
class Partition:
    """Subgroups H_1..H_t of ``top`` containing ``base``, meeting pairwise in
    exactly ``base`` and covering ``top``."""

    parts: Tuple[Subgroup, ...]
    base: Subgroup
    top: Subgroup

    def __post_init__(self):
        ordered = tuple(sorted(self.parts, key=lambda h: (-len(h), tuple(sorted(h)))))
        object.__setattr__(self, "parts", ordered)

    @property
    def size(self) -> int:
        return len(self.parts)

    def is_valid(self) -> bool:
        if len(self.parts) < 2:
            return False
        if any(not (self.base < h < self.top) for h in self.parts):
            return False
        for i, a in enumerate(self.parts):
            for b in self.parts[i + 1:]:
                if a & b != self.base:
                    return False
        return frozenset().union(*self.parts) == self.top


def partitions_between(
    table: GroupTable, base: Subgroup, top: Subgroup, max_group_order: int = 200
) -> List[Partition]:
    """
    All partitions of ``top`` relative to ``base`` (partitions of top/base).

    Backtracking exact cover: the least uncovered element must land in some
    part, and parts are tried largest first.

    Args:
        table (GroupTable): Multiplication table of G
        base (Subgroup): Common intersection of the parts
        top (Subgroup): Subgroup to cover
        max_group_order (int): Refuse to search groups larger than this

    Returns:
        List[Partition]: Partitions with at least two parts, in search order
    """
    if len(top) > max_group_order:
        raise SearchBoundExceeded(f"group of order {len(top)} exceeds bound {max_group_order}")
    candidates = sorted(
        (h for h in table.subgroups if base < h < top),
        key=lambda h: (-len(h), tuple(sorted(h))),
    )
    results: List[Partition] = []

    def backtrack(chosen: List[Subgroup], covered: FrozenSet[int]) -> None:
        uncovered = top - covered
        if not uncovered:
            results.append(Partition(tuple(chosen), base, top))
            return
        target = min(uncovered)
        for h in candidates:
            if target in h and all(h & c == base for c in chosen):
                chosen.append(h)
                backtrack(chosen, covered | h)
                chosen.pop()

    backtrack([], base)
    # a single part would have to be top itself
    return [p for p in results if p.size >= 2]


def find_partitions(
    group: Union[AutGroup, FiniteSubgroup], max_group_order: int = 200
) -> List[Partition]:
    """
    Partitions of a whole group into proper subgroups meeting pairwise trivially.

    Args:
        group (Union[AutGroup, FiniteSubgroup]): G acting on C, or a translation group X
        max_group_order (int): Refuse to search groups larger than this

    Returns:
        List[Partition]: Every partition; empty for cyclic groups
    """
    table = group.table if isinstance(group, AutGroup) else GroupTable.from_subgroup(group)
    if table.order > max_group_order:
        raise SearchBoundExceeded(f"group of order {table.order} exceeds bound {max_group_order}")
    partitions = partitions_between(table, table.trivial, table.whole, max_group_order)
    logger.debug("group of order %d has %d partitions", table.order, len(partitions))
    return partitions


def dihedral_partition(aut: AutGroup) -> Partition:
    """X together with every reflection subgroup <[-1] o t_a>."""
    n = len(aut.translations)
    parts = (aut.translation_subgroup(),) + tuple(
        frozenset({aut.table.identity, n + i}) for i in range(n)
    )
    return Partition(parts, aut.table.trivial, aut.table.whole)


def relation_from_partition(aut: AutGroup, partition: Partition) -> Relation:
    """J_{C/B}^(t-1) x J_{C/K}^|K/B| ~ prod J_{C/H_i}^|H_i/B| for B = base, K = top."""
    if not partition.is_valid():
        raise DomainError("parts do not form a partition", condition="partition")
    for h in partition.parts + (partition.base, partition.top):
        if not aut.table.is_subgroup(h):
            raise DomainError("a part is not a subgroup of G", condition="partition")
    b = len(partition.base)
    left = IsogenyExpression({factor_for_subgroup(aut, partition.base): partition.size - 1}) + IsogenyExpression(
        {factor_for_subgroup(aut, partition.top): len(partition.top) // b}
    )
    right = IsogenyExpression()
    for h in partition.parts:
        right = right + IsogenyExpression({factor_for_subgroup(aut, h): len(h) // b})
    source = " + ".join(aut.describe(h) for h in partition.parts)
    return Relation(left, right, source)
