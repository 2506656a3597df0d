"""
Tests for exact torsion point and subgroup arithmetic
"""
import sys
import os
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from fractions import Fraction

import pytest

from src.errors import DomainError, ParseError
from src.torsion_group import (
    TorsionPoint,
    all_subgroups,
    format_points,
    halvings_in,
    parse_subgroup,
    point_order,
    rational01,
    span,
    subgroups_of_order,
    torsion_grid,
)


def P(a, b, d):
    return TorsionPoint.from_ints(a, b, d)


def test_rational01_reduces_into_unit_interval():
    assert rational01(-1, 4) == Fraction(3, 4)
    assert rational01(5, 4) == Fraction(1, 4)
    with pytest.raises(DomainError):
        rational01(1, 0)


def test_point_arithmetic():
    p = P(1, 0, 4)
    assert (4 * p).is_zero()
    assert -p == P(3, 0, 4)
    assert p + p == P(1, 0, 2)
    assert point_order(TorsionPoint(Fraction(1, 4), Fraction(1, 6))) == 12


def test_span_invariant_factors():
    cyclic = span([P(1, 0, 4)])
    assert cyclic.order == 4 and cyclic.invariant_factors == (4, 1) and cyclic.is_cyclic()

    klein = span([P(1, 0, 2), P(0, 1, 2)])
    assert klein.order == 4 and klein.invariant_factors == (2, 2)

    # redundant generators still give the cyclic group of order 4
    assert span([P(1, 0, 2), P(1, 0, 4)]) == cyclic


def test_subgroup_counts():
    assert len(all_subgroups(torsion_grid(2))) == 5
    assert len(all_subgroups(torsion_grid(3))) == 6
    assert len(all_subgroups(torsion_grid(4))) == 15
    assert len(subgroups_of_order(torsion_grid(4), 4)) == 7
    with pytest.raises(DomainError):
        subgroups_of_order(torsion_grid(4), 3)


def test_halvings():
    grid = torsion_grid(4)
    halves = halvings_in(P(1, 0, 2), grid)
    assert sorted(halves, key=TorsionPoint.sort_key) == halves
    assert set(halves) == {P(1, 0, 4), P(3, 0, 4), P(1, 2, 4), P(3, 2, 4)}
    assert halvings_in(P(1, 0, 4), grid) == []
    with pytest.raises(DomainError):
        halvings_in(P(1, 0, 8), grid)


def test_parse_and_format():
    points = parse_subgroup(4, "2,0;0,2")
    assert points == [P(1, 0, 2), P(0, 1, 2)]
    assert format_points(4, points) == "2,0;0,2"
    with pytest.raises(ParseError):
        parse_subgroup(4, "2,0;x")
    with pytest.raises(ParseError):
        parse_subgroup(0, "1,0")


def test_sylow_and_canonical_generators():
    assert span([P(1, 0, 6)]).sylow_subgroup(2).order == 2
    assert span([P(1, 0, 6)]).sylow_subgroup(3).order == 3
    klein = span([P(1, 0, 2), P(0, 1, 2)])
    assert klein.canonical_generators() == (P(0, 1, 2), P(1, 0, 2))
    assert span([TorsionPoint(0, 0)]).canonical_generators() == ()


def _closure(generators):
    elements = {TorsionPoint(0, 0)}
    frontier = list(elements)
    while frontier:
        p = frontier.pop()
        for g in generators:
            q = p + g
            if q not in elements:
                elements.add(q)
                frontier.append(q)
    return frozenset(elements)


def test_subgroups_match_closed_subsets():
    """Every subgroup of a rank-2 group is the closure of at most two elements."""
    ambients = [torsion_grid(n) for n in range(1, 9)] + [span([P(1, 0, 4), P(0, 1, 2)])]
    for ambient in ambients:
        points = ambient.elements
        closed = {
            _closure([p, q]) for i, p in enumerate(points) for q in points[i:]
        }
        assert ambient.order <= 64
        assert {h.members for h in all_subgroups(ambient)} == closed
        for n in range(1, ambient.order + 1):
            if ambient.order % n == 0:
                expected = sum(1 for c in closed if len(c) == n)
                assert len(subgroups_of_order(ambient, n)) == expected, f"|A|={ambient.order} n={n}"


def test_span_is_idempotent():
    for n in range(1, 7):
        for h in all_subgroups(torsion_grid(n)):
            again = span(h.elements)
            assert again == h
            assert again.invariant_factors == h.invariant_factors
            assert span(h.canonical_generators() or [TorsionPoint(0, 0)]) == h


def test_halving_counts_are_all_or_nothing():
    for n in range(1, 9):
        ambient = torsion_grid(n)
        two_torsion = sum(1 for p in ambient if (2 * p).is_zero())
        assert two_torsion == (4 if n % 2 == 0 else 1)
        for x in ambient:
            assert len(halvings_in(x, ambient)) in (0, two_torsion), f"n={n} x={x}"
