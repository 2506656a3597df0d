import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

import pandas as pd

from src.cover_curve import (
    CoverCurve,
    fix_count,
    hyperelliptic_census,
    make_cover_curve,
)
from src.decomposer import JacobianDecomposer, Verdict, elliptic_cover_report
from src.errors import CurveAlgebraError
from src.isogeny import FactorKind, IsogenyExpression
from src.kani_rosen import (
    AutElement,
    AutGroup,
    GroupTable,
    Partition,
    dihedral_partition,
    factor_for_subgroup,
    find_partitions,
    relation_from_partition,
)
from src.polarization import PolarizationContext, is_isotropic, normalize_decomposition, splits_subgroup
from src.settings import AnalysisSettings
from src.theta_parity import quadratic_form_oracle, translate_image, translated_M_parity
from src.torsion_group import (
    FiniteSubgroup,
    TorsionPoint,
    format_points,
    point_order,
    span,
    subgroups_of_order,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FixtureResult:
    fixture_id: str
    passed: bool
    detail: str = ""


def isotropic_covers(d: int) -> List[CoverCurve]:
    """A cover curve for every isotropic subgroup of order d in K(L)."""
    ctx = PolarizationContext.standard(d)
    return [
        make_cover_curve(d, x.canonical_generators() or [TorsionPoint(0, 0)])
        for x in subgroups_of_order(ctx.kernel, d)
        if is_isotropic(ctx, x)
    ]


def cyclic_cover(d: int) -> CoverCurve:
    return make_cover_curve(d, [TorsionPoint.from_ints(1, 0, d)])


def two_primary_part(x: TorsionPoint) -> TorsionPoint:
    """Component of x in the Sylow 2-subgroup of <x>."""
    n = point_order(x)
    power, odd = 1, n
    while odd % 2 == 0:
        odd //= 2
        power *= 2
    return (odd * pow(odd, -1, power)) * x if power > 1 else TorsionPoint(0, 0)


def structural_fix_count(subgroup: FiniteSubgroup, x: TorsionPoint) -> Optional[int]:
    """Fixed points predicted from the 2-primary part of X alone.

    Returns None when the 2-primary part is non-cyclic, where only the set
    {4, 12} is predicted.
    """
    sylow = subgroup.sylow_subgroup(2)
    if not sylow.is_cyclic():
        return None
    if sylow.order == 1:
        return 6
    return 8 if span([two_primary_part(x)]) == sylow else 4


class FixtureEvaluator:
    """Runs the exact-match fixture suite behind ``verify-paper``."""

    def __init__(self, settings: Optional[AnalysisSettings] = None):
        self.settings = settings or AnalysisSettings()
        self.decomposer = JacobianDecomposer(self.settings)

    def fixtures(self) -> Dict[str, Callable[[], Tuple[bool, str]]]:
        return {
            "normalization-up-to-12": self._check_normalization,
            "fix-counts-odd-degree": self._check_odd_degree,
            "fix-counts-d2": self._check_d2,
            "fix-counts-d4-klein": self._check_d4_klein,
            "fix-counts-d4-cyclic": self._check_d4_cyclic,
            "census-d1-to-d4": self._check_census,
            "parity-structural-oracle": self._check_structural_oracle,
            "cyclic-decomposition": self._check_cyclic_decomposition,
            "decomposition-d9-lines": self._check_d9,
            "kani-rosen-balance": self._check_balance,
            "partition-search": self._check_partition_search,
            "complete-decomposability": self._check_complete_decomposability,
            "elliptic-covers": self._check_elliptic_covers,
        }

    def run_all(self) -> List[FixtureResult]:
        results = []
        for fixture_id, check in self.fixtures().items():
            try:
                passed, detail = check()
            except CurveAlgebraError as e:
                logger.exception("fixture %s raised", fixture_id)
                passed, detail = False, f"{type(e).__name__}: {e}"
            logger.info("fixture %s: %s", fixture_id, "pass" if passed else "FAIL")
            results.append(FixtureResult(fixture_id, passed, detail))
        return results

    # -------------------
    # Polarization
    # -------------------

    def _check_normalization(self) -> Tuple[bool, str]:
        """Every isotropic X of order d <= 12 admits a compatible symplectic basis."""
        bad, checked = [], 0
        for d in range(1, 13):
            ctx = PolarizationContext.standard(d)
            for x in subgroups_of_order(ctx.kernel, d):
                if not is_isotropic(ctx, x):
                    continue
                checked += 1
                if not splits_subgroup(normalize_decomposition(ctx, x), x):
                    bad.append(f"d={d} X=<{format_points(d, x.canonical_generators())}>")
        return not bad, f"{checked} subgroups normalized; " + ", ".join(bad[:3])

    # -------------------
    # Fixed-point counts
    # -------------------

    def _check_odd_degree(self) -> Tuple[bool, str]:
        bad = [
            f"d={c.d} x={x}"
            for d in (1, 3, 5, 7, 9)
            for c in isotropic_covers(d)
            for x in c.subgroup
            if fix_count(c, x).count != 6
        ]
        return not bad, ", ".join(bad[:5])

    def _check_d2(self) -> Tuple[bool, str]:
        counts = {
            tuple(fix_count(c, x).count for x in c.subgroup) for c in isotropic_covers(2)
        }
        return counts == {(4, 8)}, f"counts {sorted(counts)}"

    def _check_d4_klein(self) -> Tuple[bool, str]:
        curve = make_cover_curve(4, [TorsionPoint.from_ints(2, 0, 4), TorsionPoint.from_ints(0, 2, 4)])
        table = {x.coordinates(4): fix_count(curve, x).count for x in curve.subgroup}
        expected = {(0, 0): 4, (2, 0): 4, (0, 2): 4, (2, 2): 12}
        return table == expected, f"table {table}"

    def _check_d4_cyclic(self) -> Tuple[bool, str]:
        bad = []
        for curve in isotropic_covers(4):
            if not curve.subgroup.is_cyclic():
                continue
            for x in curve.subgroup:
                expected = structural_fix_count(curve.subgroup, x)
                if fix_count(curve, x).count != expected:
                    bad.append(f"{curve.label} x={x}")
        return not bad, ", ".join(bad[:5])

    def _check_census(self) -> Tuple[bool, str]:
        totals = tuple(hyperelliptic_census(d).total for d in (1, 2, 3, 4))
        return totals == (1, 6, 9, 4), f"totals {totals}"

    def _check_structural_oracle(self) -> Tuple[bool, str]:
        bad = []
        for d in (2, 4, 6, 8):
            for curve in isotropic_covers(d):
                counts = {}
                for x in curve.subgroup:
                    report = fix_count(curve, x)
                    counts[x] = report.count
                    for y in report.halvings:
                        z = translate_image(curve.quotient, y)
                        if quadratic_form_oracle(curve.quotient, z) is not translated_M_parity(curve.quotient, y):
                            bad.append(f"{curve.label} y={y}: quadratic form disagrees")
                    expected = structural_fix_count(curve.subgroup, x)
                    if expected is not None and report.count != expected:
                        bad.append(f"{curve.label} x={x}: {report.count} != {expected}")
                if curve.subgroup.sylow_subgroup(2).is_cyclic():
                    continue
                if set(counts.values()) - {4, 12} or 12 not in counts.values():
                    bad.append(f"{curve.label}: counts {sorted(set(counts.values()))}")
        return not bad, ", ".join(bad[:5])

    # -------------------
    # Decompositions
    # -------------------

    def _check_cyclic_decomposition(self) -> Tuple[bool, str]:
        bad = []
        for d in range(2, 13):
            curve = cyclic_cover(d)
            aut = AutGroup(curve)
            result = self.decomposer.decompose(curve)
            x = TorsionPoint.from_ints(1, 0, d)
            reflections = [aut.generate([AutElement(-1, TorsionPoint(0, 0))])]
            if d % 2 == 0:
                reflections.append(aut.generate([AutElement(-1, x)]))
            expected = IsogenyExpression.of(factor_for_subgroup(aut, aut.translation_subgroup()))
            for h in reflections:
                expected = expected + IsogenyExpression({factor_for_subgroup(aut, h): 2 if d % 2 else 1})
            expected = expected.nontrivial()
            if result.expression != expected or expected.dimension != d + 1:
                bad.append(f"d={d}: {result.expression} != {expected}")
        return not bad, "; ".join(bad)

    def _check_d9(self) -> Tuple[bool, str]:
        third = TorsionPoint.from_ints(3, 0, 9), TorsionPoint.from_ints(0, 3, 9)
        curve = make_cover_curve(9, list(third))
        aut = AutGroup(curve)
        result = self.decomposer.decompose(curve)
        elliptic = [f for f, m in result.expression.items() if f.kind is FactorKind.ELLIPTIC and m == 2]
        shape_ok = len(elliptic) == 4 and result.expression.dimension == 10 and (
            result.expression.multiplicity(factor_for_subgroup(aut, aut.translation_subgroup())) == 1
        )
        involution = factor_for_subgroup(aut, aut.generate([AutElement(-1, TorsionPoint(0, 0))]))
        companion_ok = result.quotients.get(involution) == IsogenyExpression(elliptic)

        dihedral = dihedral_partition(aut)
        lines = find_partitions(curve.subgroup)
        partitions_ok = dihedral in find_partitions(aut, self.settings.max_group_order) and len(lines) == 1
        line_relation = relation_from_partition(
            aut, _lift_translation_partition(aut, curve.subgroup, lines[0])
        ) if lines else None
        balance_ok = line_relation is not None and line_relation.left.dimension == 48 == line_relation.right.dimension
        ok = shape_ok and companion_ok and partitions_ok and balance_ok
        return ok, f"J(C) ~ {result.expression}; {involution} ~ {result.quotients.get(involution)}"

    def _check_balance(self) -> Tuple[bool, str]:
        bad, checked = [], 0
        for d in range(1, 9):
            for curve in isotropic_covers(d):
                aut = AutGroup(curve)
                for partition in find_partitions(aut, self.settings.max_group_order):
                    checked += 1
                    if not relation_from_partition(aut, partition).is_balanced():
                        bad.append(f"{curve.label}: {[aut.describe(h) for h in partition.parts]}")
        return not bad, f"{checked} partitions checked; " + ", ".join(bad[:3])

    def _check_partition_search(self) -> Tuple[bool, str]:
        bad = []
        for d in range(2, 11):
            aut = AutGroup(cyclic_cover(d))
            if dihedral_partition(aut) not in find_partitions(aut, self.settings.max_group_order):
                bad.append(f"dihedral d={d}")
        klein = span([TorsionPoint.from_ints(1, 0, 2), TorsionPoint.from_ints(0, 1, 2)])
        klein_parts = find_partitions(klein)
        if len(klein_parts) != 1 or klein_parts[0].size != 3:
            bad.append("klein")
        plane = span([TorsionPoint.from_ints(1, 0, 3), TorsionPoint.from_ints(0, 1, 3)])
        plane_parts = find_partitions(plane)
        if len(plane_parts) != 1 or plane_parts[0].size != 4:
            bad.append("(Z/3)^2")
        for n in (2, 4, 6, 9):
            if find_partitions(span([TorsionPoint.from_ints(1, 0, n)])):
                bad.append(f"cyclic {n}")
        return not bad, ", ".join(bad)

    def _check_complete_decomposability(self) -> Tuple[bool, str]:
        decomposer = JacobianDecomposer(AnalysisSettings(
            max_group_order=self.settings.max_group_order, jobs=self.settings.jobs, assume_a_split=True
        ))
        klein = make_cover_curve(4, [TorsionPoint.from_ints(2, 0, 4), TorsionPoint.from_ints(0, 2, 4)])
        cases = {"d2": cyclic_cover(2), "d3": cyclic_cover(3), "d4-cyclic": cyclic_cover(4),
                 "d4-klein": klein, "d6-cyclic": cyclic_cover(6)}
        bad = []
        for name, curve in cases.items():
            result = decomposer.decompose(curve)
            if result.verdict is not Verdict.COMPLETELY_DECOMPOSABLE:
                bad.append(f"{name}: {result.verdict.value}")
            if name == "d4-klein":
                kinds = sorted(f.kind.value for f, m in result.split.items() for _ in range(m))
                if kinds != ["elliptic", "elliptic", "elliptic", "surface"]:
                    bad.append(f"klein: {result.split}")
            if name == "d6-cyclic" and not any("non-isogenous" in a for a in result.assumptions):
                bad.append("d6: no distinctness assumption logged")
        return not bad, ", ".join(bad)

    def _check_elliptic_covers(self) -> Tuple[bool, str]:
        bad = []
        for (d, j, k), genus in {(4, 2, 2): 3, (6, 3, 2): 4, (8, 4, 2): 5}.items():
            report = elliptic_cover_report(d, j, k, self.decomposer)
            if report.intermediate_genus != genus or report.cover_degree != d or report.elliptic_factor is None:
                bad.append(f"({d},{j},{k}): genus {report.intermediate_genus}, degree {report.cover_degree}")
        return not bad, ", ".join(bad)

    # -------------------
    # Reporting
    # -------------------

    def generate_evaluation_report(self, results: List[FixtureResult]) -> str:
        """Format fixture results as a table followed by the failing ids."""
        frame = pd.DataFrame(
            [{"fixture": r.fixture_id, "status": "pass" if r.passed else "FAIL", "detail": r.detail} for r in results]
        )
        failing = [r.fixture_id for r in results if not r.passed]
        summary = f"{len(results) - len(failing)}/{len(results)} fixtures passed"
        if failing:
            summary += "; failing: " + ", ".join(failing)
        return frame.to_string(index=False) + "\n\n" + summary


def _lift_translation_partition(aut: AutGroup, subgroup: FiniteSubgroup, partition: Partition) -> Partition:
    """Re-index a partition of X as a partition of X inside G."""
    table = GroupTable.from_subgroup(subgroup)
    index = {e.shift: aut.index(e) for e in aut.elements if not e.is_reflection}
    points = subgroup.elements

    def lift(h):
        return frozenset(index[points[i]] for i in h)

    return Partition(tuple(lift(h) for h in partition.parts), lift(table.trivial), lift(table.whole))
