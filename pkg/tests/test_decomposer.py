"""
Tests for relation solving, Jacobian decompositions and elliptic covers
"""
import sys
import os
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import pytest

from src.cover_curve import make_cover_curve
from src.evaluator import isotropic_covers
from src.decomposer import (
    JacobianDecomposer,
    Verdict,
    elliptic_cover_report,
    solve_relations,
)
from src.errors import NotRealizableError, SearchBoundExceeded
from src.isogeny import FactorKind, IsogenyExpression, IsogenyFactor, Relation
from src.kani_rosen import AutElement, AutGroup, factor_for_subgroup
from src.settings import AnalysisSettings
from src.torsion_group import TorsionPoint


def P(a, b, d):
    return TorsionPoint.from_ints(a, b, d)


ZERO = TorsionPoint(0, 0)


def kinds(expression):
    return sorted((f.kind.value, f.dimension, m) for f, m in expression.items())


def test_solve_single_relation():
    j = IsogenyFactor.curve_jacobian("C", 3)
    e = IsogenyFactor.curve_jacobian("E", 1)
    relation = Relation(IsogenyExpression.of(j), IsogenyExpression.of(IsogenyFactor.surface(), e))
    assert solve_relations([relation]) == {j: IsogenyExpression.of(IsogenyFactor.surface(), e)}
    assert solve_relations([]) == {}


def test_d1_is_the_surface():
    result = JacobianDecomposer().decompose(make_cover_curve(1, [ZERO]))
    assert result.expression == IsogenyExpression.of(IsogenyFactor.surface())


def test_d3_cyclic():
    curve = make_cover_curve(3, [P(1, 0, 3)])
    aut = AutGroup(curve)
    involution = factor_for_subgroup(aut, aut.generate([AutElement(-1, ZERO)]))
    result = JacobianDecomposer().decompose(curve)
    assert result.expression == IsogenyExpression({IsogenyFactor.surface(): 1, involution: 2})
    assert result.verdict is Verdict.DECOMPOSABLE_IF_A_SPLITS


def test_d4_klein_splits_into_three_elliptic_curves():
    curve = make_cover_curve(4, [P(2, 0, 4), P(0, 2, 4)])
    result = JacobianDecomposer(AnalysisSettings(assume_a_split=True)).decompose(curve)
    assert kinds(result.expression) == [
        ("elliptic", 1, 1), ("elliptic", 1, 1), ("elliptic", 1, 1), ("surface", 2, 1)
    ]
    assert result.split == result.expression
    assert result.verdict is Verdict.COMPLETELY_DECOMPOSABLE
    assert len(result.partitions) == 8


def test_d4_cyclic_expression_and_split():
    curve = make_cover_curve(4, [P(1, 0, 4)])
    aut = AutGroup(curve)
    even = factor_for_subgroup(aut, aut.generate([AutElement(-1, ZERO)]))
    odd = factor_for_subgroup(aut, aut.generate([AutElement(-1, P(1, 0, 4))]))
    result = JacobianDecomposer().decompose(curve)
    assert result.expression == IsogenyExpression({IsogenyFactor.surface(): 1, even: 1, odd: 1})
    assert even.dimension == 2 and odd.kind is FactorKind.ELLIPTIC
    assert kinds(result.split) == [("elliptic", 1, 1), ("elliptic", 1, 2), ("surface", 2, 1)]
    assert result.split.multiplicity(odd) == 2


def test_d6_cyclic_needs_distinctness_assumption():
    curve = make_cover_curve(6, [P(1, 0, 6)])
    result = JacobianDecomposer(AnalysisSettings(assume_a_split=True)).decompose(curve)
    assert kinds(result.expression) == [("jacobian", 2, 1), ("jacobian", 3, 1), ("surface", 2, 1)]
    assert result.split.dimension == 7
    assert all(f.dimension <= 2 for f in result.split.factors())
    assert result.verdict is Verdict.COMPLETELY_DECOMPOSABLE
    assert any("non-isogenous" in a for a in result.assumptions)
    assert any("covers" in a for a in result.assumptions)


def test_d9_four_squared_elliptic_curves():
    curve = make_cover_curve(9, [P(3, 0, 9), P(0, 3, 9)])
    aut = AutGroup(curve)
    result = JacobianDecomposer().decompose(curve)
    elliptic = [f for f, m in result.expression.items() if f.kind is FactorKind.ELLIPTIC]
    assert len(elliptic) == 4
    assert all(result.expression.multiplicity(e) == 2 for e in elliptic)
    assert result.expression.multiplicity(IsogenyFactor.surface()) == 1
    involution = factor_for_subgroup(aut, aut.generate([AutElement(-1, ZERO)]))
    assert result.quotients[involution] == IsogenyExpression(elliptic)


def test_cyclic_expression_shape():
    for d in range(2, 9):
        curve = make_cover_curve(d, [P(1, 0, d)])
        result = JacobianDecomposer().decompose(curve)
        assert result.expression.dimension == d + 1
        surfaces = result.expression.multiplicity(IsogenyFactor.surface())
        assert surfaces == 1, f"d={d}: {result.expression}"


def test_group_bound():
    curve = make_cover_curve(6, [P(1, 0, 6)])
    with pytest.raises(SearchBoundExceeded):
        JacobianDecomposer(AnalysisSettings(max_group_order=8)).decompose(curve)


def test_parallel_gathering_matches_sequential():
    curve = make_cover_curve(6, [P(1, 0, 6)])
    sequential = JacobianDecomposer().decompose(curve)
    parallel = JacobianDecomposer(AnalysisSettings(jobs=4)).decompose(curve)
    assert sequential.expression == parallel.expression
    assert sequential.split == parallel.split


@pytest.mark.parametrize("d, j, k, genus", [(4, 2, 2, 3), (6, 3, 2, 4), (8, 4, 2, 5)])
def test_elliptic_cover_report(d, j, k, genus):
    report = elliptic_cover_report(d, j, k)
    assert report.intermediate_genus == genus
    assert report.elliptic_factor is not None
    assert report.cover_degree == d
    assert report.prym_dimension == d - j
    assert report.jacobian.dimension == d + 1


def test_elliptic_cover_report_rejects_bad_shapes():
    with pytest.raises(NotRealizableError):
        elliptic_cover_report(5, 2, 2)
    with pytest.raises(NotRealizableError):
        elliptic_cover_report(10, 5, 2)


def test_odd_degree_shape_ignores_choice_of_generator():
    decomposer = JacobianDecomposer()
    for d in (3, 5, 7):
        reference = kinds(decomposer.decompose(make_cover_curve(d, [P(1, 0, d)])).expression)
        assert reference[-1] == ("surface", 2, 1)
        for curve in isotropic_covers(d):
            assert curve.subgroup.is_cyclic()
            shape = kinds(decomposer.decompose(curve).expression)
            assert shape == reference, f"{curve.label}"
        # any generator of one X rebuilds the same curve
        x = P(1, 1, d)
        assert make_cover_curve(d, [x]) == make_cover_curve(d, [2 * x])
