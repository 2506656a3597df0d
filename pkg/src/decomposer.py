"""
Isogeny decomposition of the Jacobian of a cover curve.

Relations come from partitions of G acting on C and of the quotient groups
K/T acting on C/T. The relations are solved exactly over Q with sympy; a
Jacobian is considered expressed when its row in the reduced system has
non-negative integer coefficients.

Two levels are produced:

* ``expression``: relations of G, of X, and of G/T on C/T only. This keeps
  the quotient Jacobians of the reflection subgroups visible.
* ``split``: relations of every subgroup, followed by cover divisibility for
  Jacobians the linear system leaves free.
"""

import logging
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

from sympy import Matrix

from src.cover_curve import CoverCurve, make_cover_curve
from src.errors import CurveAlgebraError, InvariantViolation, NotRealizableError, SearchBoundExceeded
from src.isogeny import FactorKind, IsogenyExpression, IsogenyFactor, Relation
from src.kani_rosen import (
    AutElement,
    AutGroup,
    Partition,
    Subgroup,
    factor_for_subgroup,
    find_partitions,
    partitions_between,
    relation_from_partition,
    subgroup_quotient_genus,
)
from src.settings import AnalysisSettings
from src.torsion_group import TorsionPoint

logger = logging.getLogger(__name__)


class DecompositionLevel(Enum):
    EXPRESSION = "expression"
    SPLIT = "split"


class Verdict(Enum):
    COMPLETELY_DECOMPOSABLE = "completely decomposable"
    DECOMPOSABLE_IF_A_SPLITS = "completely decomposable if A splits"
    NOT_ESTABLISHED = "not established"


@dataclass(frozen=True)
class DecompositionResult:
    curve_label: str
    genus: int
    expression: IsogenyExpression
    split: IsogenyExpression
    verdict: Verdict
    assumptions: Tuple[str, ...]
    partitions: Tuple[Partition, ...]
    relations: Tuple[Relation, ...]
    quotients: Dict[IsogenyFactor, IsogenyExpression] = field(default_factory=dict)
    split_quotients: Dict[IsogenyFactor, IsogenyExpression] = field(default_factory=dict)
    # False when the expression-level relations leave J(C) itself free
    expression_resolved: bool = True


def _column_key(factor: IsogenyFactor):
    return (1 if factor.is_atomic else 0, -factor.dimension, factor.label)


def solve_relations(relations: List[Relation]) -> Dict[IsogenyFactor, IsogenyExpression]:
    """
    Express every determined Jacobian through the free factors.

    The relation matrix is row reduced over Q. Columns hold composite
    Jacobians first, so a pivot row reads composite = sum of later columns; it
    is kept only when those coefficients are non-negative integers.

    Args:
        relations (List[Relation]): Balanced relations to combine

    Returns:
        Dict[IsogenyFactor, IsogenyExpression]: Solved factors mapped to their expressions
    """
    columns = sorted(
        {f for r in relations for f in r.factors() if f.kind is not FactorKind.TRIVIAL},
        key=_column_key,
    )
    if not columns:
        return {}
    matrix = Matrix([[r.coefficient(f) for f in columns] for r in relations])
    reduced, pivots = matrix.rref()
    solved = {}
    for row, col in enumerate(pivots):
        coefficients = {}
        for j, factor in enumerate(columns):
            if j == col:
                continue
            value = -reduced[row, j]
            if value == 0:
                continue
            if not value.is_integer or value < 0:
                break
            coefficients[factor] = int(value)
        else:
            expression = IsogenyExpression(coefficients)
            if expression.dimension != columns[col].dimension:
                raise InvariantViolation(
                    f"relations give {columns[col]} ~ {expression} with mismatched dimension"
                )
            solved[columns[col]] = expression
    return solved


class JacobianDecomposer:
    """Builds and solves Kani-Rosen relations for cover curves."""

    def __init__(self, settings: Optional[AnalysisSettings] = None):
        self.settings = settings or AnalysisSettings()

    def _settings_for(self, aut: AutGroup, level: DecompositionLevel) -> List[Tuple[Subgroup, Subgroup]]:
        table = aut.table
        pairs = [(table.trivial, table.whole)]
        translation_subgroups = aut.translation_subgroups()
        if level is DecompositionLevel.EXPRESSION:
            pairs.append((table.trivial, aut.translation_subgroup()))
            pairs.extend((t, table.whole) for t in translation_subgroups if t != table.trivial)
        else:
            for k in aut.subgroups:
                pairs.extend((t, k) for t in translation_subgroups if t < k)
        return list(dict.fromkeys(pairs))

    def gather_relations(self, aut: AutGroup, level: DecompositionLevel) -> List[Relation]:
        limit = self.settings.max_group_order

        def relations_for(pair):
            base, top = pair
            return [relation_from_partition(aut, p) for p in partitions_between(aut.table, base, top, limit)]

        pairs = self._settings_for(aut, level)
        if self.settings.jobs > 1:
            with ThreadPoolExecutor(max_workers=self.settings.jobs) as pool:
                batches = list(pool.map(relations_for, pairs))
        else:
            batches = [relations_for(pair) for pair in pairs]

        relations, seen = [], set()
        for relation in (r for batch in batches for r in batch):
            if not relation.is_balanced():
                raise InvariantViolation(f"unbalanced relation {relation}")
            reduced = relation.cancelled()
            if reduced.left.is_empty() and reduced.right.is_empty():
                continue
            if (reduced.left, reduced.right) not in seen:
                seen.add((reduced.left, reduced.right))
                relations.append(relation)
        logger.debug("%s level: %d relations from %d settings", level.value, len(relations), len(pairs))
        return relations

    def refine_by_covers(
        self,
        aut: AutGroup,
        expression: IsogenyExpression,
        quotients: Dict[IsogenyFactor, IsogenyExpression],
    ) -> Tuple[IsogenyExpression, List[str]]:
        """Split free Jacobians using the Jacobians of the curves they cover."""
        catalog: Dict[IsogenyFactor, List[Subgroup]] = {}
        for h in aut.subgroups:
            catalog.setdefault(factor_for_subgroup(aut, h), []).append(h)

        notes = []
        refined = expression
        for factor, _ in expression.items():
            if factor.kind is not FactorKind.JACOBIAN:
                continue
            best: Counter = Counter()
            sources: Dict[IsogenyFactor, str] = {}
            for h in catalog.get(factor, []):
                for k in aut.subgroups:
                    if not h < k:
                        continue
                    image = factor_for_subgroup(aut, k)
                    if image.is_atomic:
                        pieces = IsogenyExpression.of(image)
                    elif image in quotients and all(f.is_atomic for f in quotients[image].factors()):
                        pieces = quotients[image]
                    else:
                        continue
                    for atom, m in pieces.nontrivial().items():
                        if m > best[atom]:
                            best[atom] = m
                            sources.setdefault(atom, aut.describe(k))
            taken, total = Counter(), 0
            for atom in sorted(best, key=IsogenyFactor.sort_key):
                room = (factor.dimension - total) // atom.dimension
                take = min(best[atom], room)
                if take > 0:
                    taken[atom] = take
                    total += take * atom.dimension
                    notes.append(f"{factor} contains {atom} since {factor.label} covers {sources[atom]}")
            if not taken:
                continue
            replacement = IsogenyExpression(taken)
            if factor.dimension > total:
                replacement = replacement + IsogenyExpression.of(
                    IsogenyFactor.remainder(factor.label, factor.dimension - total)
                )
            refined = refined.substitute(factor, replacement)
        return refined, notes

    def decompose(self, curve: CoverCurve) -> DecompositionResult:
        """
        Decompose J(C) at both levels and judge complete decomposability.

        Args:
            curve (CoverCurve): Curve to decompose

        Returns:
            DecompositionResult: Expressions, verdict, assumption trace and the partitions used
        """
        try:
            aut = AutGroup(curve)
            if aut.order > self.settings.max_group_order:
                raise SearchBoundExceeded(
                    f"|G|={aut.order} exceeds the bound {self.settings.max_group_order}"
                )
            partitions = find_partitions(aut, self.settings.max_group_order)
            jacobian = factor_for_subgroup(aut, aut.table.trivial)

            expression_relations = self.gather_relations(aut, DecompositionLevel.EXPRESSION)
            quotients = solve_relations(expression_relations)
            expression = quotients.get(jacobian, IsogenyExpression.of(jacobian))

            split_quotients = solve_relations(self.gather_relations(aut, DecompositionLevel.SPLIT))
            split = split_quotients.get(jacobian, IsogenyExpression.of(jacobian))
            split, assumptions = self.refine_by_covers(aut, split, split_quotients)
        except CurveAlgebraError:
            logger.exception("decomposition of %s failed", curve.label)
            raise

        for level, expr in (("expression", expression), ("split", split)):
            if expr.nontrivial().dimension != curve.genus:
                raise InvariantViolation(f"{level} {expr} has dimension != genus {curve.genus}")

        elliptic = [f for f in split.factors() if f.kind is FactorKind.ELLIPTIC]
        if len(elliptic) > 1:
            assumptions.append(
                "elliptic factors " + ", ".join(str(f) for f in elliptic) + " treated as pairwise non-isogenous"
            )
        small = all(f.dimension <= 1 for f in split.factors() if f.kind is not FactorKind.SURFACE)
        if small and self.settings.assume_a_split:
            verdict = Verdict.COMPLETELY_DECOMPOSABLE
            assumptions.append("A assumed isogenous to a product of elliptic curves")
        elif small:
            verdict = Verdict.DECOMPOSABLE_IF_A_SPLITS
        else:
            verdict = Verdict.NOT_ESTABLISHED

        logger.info("%s: J ~ %s (split %s, %s)", curve.label, expression, split, verdict.value)
        return DecompositionResult(
            curve_label=curve.label,
            genus=curve.genus,
            expression=expression,
            split=split,
            verdict=verdict,
            assumptions=tuple(assumptions),
            partitions=tuple(partitions),
            relations=tuple(relation_from_partition(aut, p) for p in partitions),
            quotients=quotients,
            split_quotients=split_quotients,
            expression_resolved=jacobian in quotients,
        )


@dataclass(frozen=True)
class EllipticCoverReport:
    d: int
    j: int
    k: int
    intermediate_label: str
    intermediate_genus: int
    intermediate_expression: IsogenyExpression
    elliptic_factor: Optional[IsogenyFactor]
    cover_label: str
    cover_degree: int
    prym_dimension: int
    jacobian: IsogenyExpression


def elliptic_cover_report(
    d: int, j: int, k: int, decomposer: Optional[JacobianDecomposer] = None
) -> EllipticCoverReport:
    """Cover curve for X = Z/j + Z/k and the elliptic curve it maps onto."""
    if j not in (2, 3, 4) or k < 1 or j * k != d:
        raise NotRealizableError(f"need j in {{2,3,4}} and j*k = d, got d={d}, j={j}, k={k}")
    decomposer = decomposer or JacobianDecomposer()
    x1 = TorsionPoint.from_ints(1, 0, k)
    x2 = TorsionPoint.from_ints(0, 1, j)
    curve = make_cover_curve(d, [x1, x2])
    aut = AutGroup(curve)
    result = decomposer.decompose(curve)

    intermediate = aut.generate([AutElement(1, x1)])
    factor = factor_for_subgroup(aut, intermediate)
    expression = result.split_quotients.get(factor)
    if expression is None:
        expression, _ = decomposer.refine_by_covers(aut, IsogenyExpression.of(factor), result.split_quotients)
    elliptic = next((f for f in expression.factors() if f.kind is FactorKind.ELLIPTIC), None)

    covers = [h for h in aut.subgroups if subgroup_quotient_genus(aut, h) == 1]
    if not covers:
        raise InvariantViolation(f"no elliptic quotient of {curve.label}")
    cover = max(covers, key=len)

    genus = subgroup_quotient_genus(aut, intermediate)
    prym = curve.genus - genus
    jacobian = expression + IsogenyExpression.of(IsogenyFactor.remainder(f"C -> {aut.describe(intermediate)}", prym))
    return EllipticCoverReport(
        d, j, k,
        aut.describe(intermediate), genus, expression, elliptic,
        aut.describe(cover), len(cover), prym, jacobian,
    )
