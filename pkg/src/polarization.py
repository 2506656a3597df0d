"""
Polarization data of type (1, d) on an abelian surface A.

The kernel K(L) is modelled as the d-torsion grid of (Q/Z)^2 with the
defining decomposition k1 = (1/d, 0), k2 = (0, 1/d). The commutator pairing
is attached to that decomposition and never changes; normalization only picks
a new basis (k1', k2') adapted to a subgroup X.
"""

import logging
from dataclasses import dataclass, replace
from functools import cached_property
from math import gcd
from typing import Optional, Tuple

from src.errors import DomainError, NotIsotropicError, NotRealizableError
from src.torsion_group import (
    FiniteSubgroup,
    TorsionPoint,
    point_order,
    span,
    torsion_grid,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PairingValue:
    """The root of unity zeta_d^exponent."""

    exponent: int
    d: int

    def __post_init__(self):
        object.__setattr__(self, "exponent", self.exponent % self.d)

    @property
    def is_trivial(self) -> bool:
        return self.exponent == 0

    @property
    def is_primitive(self) -> bool:
        return gcd(self.exponent, self.d) == 1

    def __str__(self) -> str:
        return f"zeta_{self.d}^{self.exponent}"


@dataclass(frozen=True)
class PolarizationContext:
    """A (1, d) polarization with a chosen symplectic basis of K(L).

    ``even`` and ``has_sts`` describe L itself; the setting studied here
    always starts from an even L with a symmetric theta structure.
    """

    d: int
    k1: TorsionPoint
    k2: TorsionPoint
    characteristic_zero: bool = True
    even: bool = True
    has_sts: bool = True

    @classmethod
    def standard(cls, d: int) -> "PolarizationContext":
        if d < 1:
            raise DomainError(f"d must be a positive integer, got {d}", condition="polarization type")
        return cls(d, TorsionPoint.from_ints(1, 0, d), TorsionPoint.from_ints(0, 1, d))

    @cached_property
    def kernel(self) -> FiniteSubgroup:
        return torsion_grid(self.d)

    def require_in_kernel(self, p: TorsionPoint) -> None:
        if not (self.d * p).is_zero():
            raise DomainError(f"{p} is not in K(L) for d={self.d}", condition="kernel membership")


def commutator_pairing(ctx: PolarizationContext, p: TorsionPoint, q: TorsionPoint) -> PairingValue:
    """e^L(p, q) for p = (a/d, alpha/d), q = (b/d, beta/d): zeta^(a*beta - b*alpha)."""
    ctx.require_in_kernel(p)
    ctx.require_in_kernel(q)
    a, alpha = p.coordinates(ctx.d)
    b, beta = q.coordinates(ctx.d)
    return PairingValue(a * beta - b * alpha, ctx.d)


def _require_subgroup_of_kernel(ctx: PolarizationContext, subgroup: FiniteSubgroup) -> None:
    if not subgroup.is_subgroup_of(ctx.kernel):
        raise DomainError("subgroup is not contained in K(L)", condition="kernel membership")


def is_isotropic(ctx: PolarizationContext, subgroup: FiniteSubgroup) -> bool:
    """
    Check that the commutator pairing vanishes on a subgroup.

    The pairing is bilinear, so it is enough to test pairs of generators.

    Args:
        ctx (PolarizationContext): Polarization supplying the pairing
        subgroup (FiniteSubgroup): Subgroup of K(L)

    Returns:
        bool: True when e^L is trivial on the subgroup
    """
    _require_subgroup_of_kernel(ctx, subgroup)
    gens = subgroup.generators
    return all(commutator_pairing(ctx, p, q).is_trivial for p in gens for q in gens)


def pushforward_type(ctx: PolarizationContext, subgroup: FiniteSubgroup) -> Tuple[int, int]:
    """Type of the polarization induced on A/X."""
    if not is_isotropic(ctx, subgroup):
        raise NotIsotropicError("subgroup pairs non-trivially, L does not descend")
    if ctx.d % subgroup.order:
        raise DomainError(
            f"|X|={subgroup.order} does not divide d={ctx.d}", condition="subgroup order"
        )
    return 1, ctx.d // subgroup.order


def splits_subgroup(ctx: PolarizationContext, subgroup: FiniteSubgroup) -> bool:
    """True iff X = <(d/d1) k1> + <(d/d2) k2> and e(k1, k2) is primitive."""
    d1, d2 = subgroup.invariant_factors
    if not commutator_pairing(ctx, ctx.k1, ctx.k2).is_primitive:
        return False
    if point_order(ctx.k1) != ctx.d or point_order(ctx.k2) != ctx.d:
        return False
    a, b = (ctx.d // d1) * ctx.k1, (ctx.d // d2) * ctx.k2
    return a in subgroup and b in subgroup and span([a, b]) == subgroup


def normalize_decomposition(ctx: PolarizationContext, subgroup: FiniteSubgroup) -> PolarizationContext:
    """
    Return a context whose basis is compatible with the isotropic subgroup X.

    Bases are tried in canonical order and the first (k1', k2') with a
    primitive pairing that splits X wins, so the result is deterministic.

    Args:
        ctx (PolarizationContext): Current polarization context
        subgroup (FiniteSubgroup): Isotropic subgroup X with |X| dividing d

    Returns:
        PolarizationContext: ``ctx`` itself if it already splits X, else a copy with the new basis
    """
    _require_subgroup_of_kernel(ctx, subgroup)
    if not is_isotropic(ctx, subgroup):
        raise NotIsotropicError("cannot normalize against a non-isotropic subgroup")
    if ctx.d % subgroup.order:
        raise DomainError(
            f"|X|={subgroup.order} does not divide d={ctx.d}", condition="subgroup order"
        )
    if splits_subgroup(ctx, subgroup):
        return ctx

    d = ctx.d
    d1, d2 = subgroup.invariant_factors
    maximal = sorted((p for p in ctx.kernel if point_order(p) == d), key=TorsionPoint.sort_key)
    for first in maximal:
        if (d // d1) * first not in subgroup:
            continue
        for second in maximal:
            if (d // d2) * second not in subgroup:
                continue
            if not commutator_pairing(ctx, first, second).is_primitive:
                continue
            candidate = replace(ctx, k1=first, k2=second)
            if splits_subgroup(candidate, subgroup):
                logger.debug("normalized basis for d=%d: k1=%s k2=%s", d, first, second)
                return candidate
    raise NotRealizableError("no symplectic basis of K(L) is compatible with the subgroup")


@dataclass(frozen=True)
class QuotientModel:
    """The images of K(L) in A/X together with the 2-torsion points w1, w2.

    ``w1``/``w2`` are None when the corresponding image of k_i has odd order.
    """

    context: PolarizationContext
    subgroup: FiniteSubgroup
    w1: Optional[TorsionPoint]
    w2: Optional[TorsionPoint]

    def project(self, p: TorsionPoint) -> TorsionPoint:
        """Least representative of the coset p + X."""
        return min((p + x for x in self.subgroup), key=TorsionPoint.sort_key)

    def order_in_quotient(self, p: TorsionPoint) -> int:
        n, q = 1, p
        while q not in self.subgroup:
            n += 1
            q = q + p
        return n

    def two_torsion_images(self) -> Tuple[TorsionPoint, ...]:
        """{0, w1, w2, w1 + w2} with missing halves dropped, projected."""
        halves = [w for w in (self.w1, self.w2) if w is not None]
        images = {self.project(TorsionPoint(0, 0))}
        images.update(self.project(w) for w in halves)
        if len(halves) == 2:
            images.add(self.project(halves[0] + halves[1]))
        return tuple(sorted(images, key=TorsionPoint.sort_key))


def build_quotient(ctx: PolarizationContext, subgroup: FiniteSubgroup) -> QuotientModel:
    if not splits_subgroup(ctx, subgroup):
        raise DomainError(
            "context basis is not compatible with the subgroup; normalize first",
            condition="normalized decomposition",
        )
    model = QuotientModel(ctx, subgroup, None, None)
    halves = []
    for k in (ctx.k1, ctx.k2):
        m = model.order_in_quotient(k)
        halves.append(model.project((m // 2) * k) if m % 2 == 0 else None)
    return replace(model, w1=halves[0], w2=halves[1])
