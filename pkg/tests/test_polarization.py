"""
Tests for the commutator pairing, isotropy and basis normalization
"""
import sys
import os
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import pytest

from src.errors import DomainError, NotIsotropicError
from src.polarization import (
    PolarizationContext,
    build_quotient,
    commutator_pairing,
    is_isotropic,
    normalize_decomposition,
    pushforward_type,
    splits_subgroup,
)
from src.torsion_group import TorsionPoint, span, subgroups_of_order, torsion_grid


def P(a, b, d):
    return TorsionPoint.from_ints(a, b, d)


def test_pairing_on_standard_basis():
    ctx = PolarizationContext.standard(4)
    assert commutator_pairing(ctx, ctx.k1, ctx.k2).exponent == 1
    assert commutator_pairing(ctx, ctx.k2, ctx.k1).exponent == 3
    assert commutator_pairing(ctx, ctx.k1, ctx.k2).is_primitive
    with pytest.raises(DomainError):
        commutator_pairing(ctx, P(1, 0, 8), ctx.k2)


def test_isotropy():
    ctx = PolarizationContext.standard(4)
    assert is_isotropic(ctx, span([P(2, 0, 4), P(0, 2, 4)]))
    assert is_isotropic(ctx, span([P(1, 1, 4)]))
    assert not is_isotropic(ctx, torsion_grid(4))


def test_every_order_d_subgroup_is_isotropic():
    for d in (2, 4, 6, 8):
        ctx = PolarizationContext.standard(d)
        assert all(is_isotropic(ctx, x) for x in subgroups_of_order(ctx.kernel, d))


def test_pushforward_type():
    ctx = PolarizationContext.standard(4)
    assert pushforward_type(ctx, span([P(2, 0, 4), P(0, 2, 4)])) == (1, 1)
    assert pushforward_type(ctx, span([P(2, 0, 4)])) == (1, 2)
    with pytest.raises(NotIsotropicError):
        pushforward_type(ctx, torsion_grid(4))


def test_normalization_keeps_compatible_basis():
    ctx = PolarizationContext.standard(4)
    assert normalize_decomposition(ctx, span([P(1, 0, 4)])) is ctx


def test_normalization_diagonal_subgroup():
    ctx = PolarizationContext.standard(4)
    x = span([P(1, 1, 4)])
    normalized = normalize_decomposition(ctx, x)
    assert (normalized.k1, normalized.k2) == (P(1, 1, 4), P(0, 1, 4))
    assert splits_subgroup(normalized, x)


def test_normalization_exists_for_all_isotropic_subgroups():
    for d in range(1, 13):
        ctx = PolarizationContext.standard(d)
        for x in subgroups_of_order(ctx.kernel, d):
            assert splits_subgroup(normalize_decomposition(ctx, x), x), f"d={d} X={x.generators}"


def test_quotient_model_klein():
    ctx = PolarizationContext.standard(4)
    x = span([P(2, 0, 4), P(0, 2, 4)])
    model = build_quotient(ctx, x)
    assert model.w1 == P(1, 0, 4) and model.w2 == P(0, 1, 4)
    assert model.project(P(3, 3, 4)) == P(1, 1, 4)
    assert model.order_in_quotient(ctx.k1) == 2
    assert len(model.two_torsion_images()) == 4


def test_quotient_requires_normalized_basis():
    ctx = PolarizationContext.standard(4)
    with pytest.raises(DomainError):
        build_quotient(ctx, span([P(1, 1, 4)]))


def test_pairing_is_antisymmetric():
    for d in range(1, 9):
        ctx = PolarizationContext.standard(d)
        for p in ctx.kernel:
            for q in ctx.kernel:
                total = commutator_pairing(ctx, p, q).exponent + commutator_pairing(ctx, q, p).exponent
                assert total % d == 0, f"d={d} p={p} q={q}"


def test_pairing_is_bilinear():
    for d in range(1, 6):
        ctx = PolarizationContext.standard(d)
        for p in ctx.kernel:
            for r in ctx.kernel:
                for q in ctx.kernel:
                    left = commutator_pairing(ctx, p + r, q).exponent
                    right = commutator_pairing(ctx, p, q).exponent + commutator_pairing(ctx, r, q).exponent
                    assert left == right % d, f"d={d} p={p} r={r} q={q}"
