"""
The curve C = pi^{-1}(H) in A for an isotropic X of order d, and fixed-point
counts of the involutions [-1] o t_x acting on it.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Sequence, Tuple

from src.errors import (
    DomainError,
    InconsistentRamificationError,
    InvariantViolation,
    NotIsotropicError,
    NotPolarizingSubgroupError,
)
from src.polarization import (
    PolarizationContext,
    QuotientModel,
    build_quotient,
    is_isotropic,
    normalize_decomposition,
)
from src.theta_parity import (
    Parity,
    StsStatus,
    profile_lookup,
    sts_after_translate,
    translated_M_parity,
)
from src.torsion_group import (
    FiniteSubgroup,
    TorsionPoint,
    format_points,
    halvings_in,
    span,
    subgroups_of_order,
    torsion_grid,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CoverCurve:
    context: PolarizationContext
    subgroup: FiniteSubgroup
    genus: int
    quotient: QuotientModel = field(compare=False, repr=False)

    @property
    def d(self) -> int:
        return self.context.d

    @property
    def label(self) -> str:
        gens = self.subgroup.canonical_generators()
        return f"C(d={self.d}, X=<{format_points(self.d, gens) or '0,0'}>)"


class FixBranch(Enum):
    ODD_DEGREE = "d odd: halving inside K(L), even translate"
    NO_SYMMETRIC_THETA_STRUCTURE = "no halving in K(L): translate has no symmetric theta structure"
    EVEN_TRANSLATE = "halving in K(L), translate of M even"
    ODD_TRANSLATE = "halving in K(L), translate of M odd"


@dataclass(frozen=True)
class FixReport:
    x: TorsionPoint
    count: int
    branch: FixBranch
    sts: StsStatus
    parity: Optional[Parity] = None
    halvings: Tuple[TorsionPoint, ...] = ()


def make_cover_curve(d: int, generators: Sequence[TorsionPoint]) -> CoverCurve:
    """
    Build the curve C of genus d+1 attached to an order-d subgroup X.

    Args:
        d (int): Polarization type (1, d)
        generators (Sequence[TorsionPoint]): Generators of X inside K(L)

    Returns:
        CoverCurve: Curve with a normalized context and its quotient model
    """
    ctx = PolarizationContext.standard(d)
    for g in generators:
        ctx.require_in_kernel(g)
    subgroup = span(generators)
    if subgroup.order != d:
        raise NotPolarizingSubgroupError(f"subgroup has order {subgroup.order}, expected d={d}")
    if not is_isotropic(ctx, subgroup):
        raise NotIsotropicError("the generators pair non-trivially under e^L")
    normalized = normalize_decomposition(ctx, subgroup)
    curve = CoverCurve(normalized, subgroup, d + 1, build_quotient(normalized, subgroup))
    logger.info("built %s of genus %d", curve.label, curve.genus)
    return curve


def fix_count(curve: CoverCurve, x: TorsionPoint) -> FixReport:
    """
    Number of fixed points of [-1] o t_x on C.

    Every halving of x in K(L) is evaluated and all must give the same parity.

    Args:
        curve (CoverCurve): Curve to inspect
        x (TorsionPoint): Element of X

    Returns:
        FixReport: Count together with the branch, theta structure status and parity used
    """
    if x not in curve.subgroup:
        raise DomainError(f"{x} is not in X", condition="translation in X")
    ctx, d = curve.context, curve.d
    halvings = tuple(halvings_in(x, ctx.kernel))
    # every x in K(L) has a halving in the 2d-torsion of A
    some_halving = halvings_in(x, torsion_grid(2 * d))[0]
    sts = sts_after_translate(ctx, -some_halving)

    if sts is StsStatus.NO_STS:
        if halvings:
            raise InvariantViolation(f"{x} has a halving in K(L) but no theta structure")
        count = profile_lookup(d, sts, Parity.EVEN).fix_minus
        return FixReport(x, count, FixBranch.NO_SYMMETRIC_THETA_STRUCTURE, sts)

    if not halvings:
        raise InvariantViolation(f"{x} has a theta structure but no halving in K(L)")
    parities = {translated_M_parity(curve.quotient, y) for y in halvings}
    if len(parities) != 1:
        raise InvariantViolation(f"halvings of {x} disagree on parity: {parities}")
    parity = parities.pop()
    # t*_{-y} L is isomorphic to L, hence even with a theta structure
    count = profile_lookup(d, sts, Parity.EVEN).fixed_points(parity.eigenvalue)
    if d % 2:
        branch = FixBranch.ODD_DEGREE
    else:
        branch = FixBranch.EVEN_TRANSLATE if parity is Parity.EVEN else FixBranch.ODD_TRANSLATE
    return FixReport(x, count, branch, sts, parity, halvings)


def fix_table(curve: CoverCurve) -> List[FixReport]:
    return [fix_count(curve, x) for x in curve.subgroup]


def involution_quotient_genus(g: int, r: int) -> int:
    """Genus of C/<sigma> for an involution with r fixed points on a genus g curve."""
    numerator = 2 * g + 2 - r
    if r < 0 or numerator < 0 or numerator % 4:
        raise InconsistentRamificationError(
            f"an involution with {r} fixed points cannot act on a genus {g} curve"
        )
    return numerator // 4


def hyperelliptic_involutions(curve: CoverCurve) -> List[TorsionPoint]:
    """Shifts x whose involution [-1] o t_x has 2g + 2 fixed points."""
    target = 2 * curve.genus + 2
    return [x for x in curve.subgroup if fix_count(curve, x).count == target]


@dataclass(frozen=True)
class CensusTerm:
    label: str
    translations: int
    source: str
    involution: Optional[TorsionPoint] = None


@dataclass(frozen=True)
class CensusResult:
    d: int
    total: int
    terms: Tuple[CensusTerm, ...]
    trace: Tuple[str, ...]


def hyperelliptic_census(d: int) -> CensusResult:
    """
    Count smooth hyperelliptic curves in the linear system of L.

    Args:
        d (int): Polarization type, 1 <= d <= 4

    Returns:
        CensusResult: Total, the contributing terms and a derivation trace
    """
    if d not in (1, 2, 3, 4):
        raise DomainError(
            f"hyperelliptic curves only occur for d <= 4, got d={d}", condition="census degree"
        )
    ctx = PolarizationContext.standard(d)
    kernel = ctx.kernel
    terms, trace = [], []
    for subgroup in subgroups_of_order(kernel, d):
        if not is_isotropic(ctx, subgroup):
            continue
        curve = make_cover_curve(d, subgroup.canonical_generators() or [TorsionPoint(0, 0)])
        involutions = hyperelliptic_involutions(curve)
        if involutions:
            terms.append(
                CensusTerm(curve.label, kernel.order // subgroup.order, "construction", involutions[0])
            )
            trace.append(f"{curve.label}: [-1] o t_{involutions[0]} has {2 * d + 4} fixed points")
        else:
            counts = sorted({fix_count(curve, x).count for x in subgroup})
            trace.append(f"{curve.label}: fixed point counts {counts}, none reach {2 * d + 4}")
    if d == 3:
        # the construction produces none here; the curves come from an orbit of K(L)
        terms.append(CensusTerm("K(L)-orbit", kernel.order, "external"))
        trace.append("d=3: one K(L)-orbit of hyperelliptic curves taken as an external input")
    total = sum(t.translations for t in terms)
    logger.info("census d=%d: %d hyperelliptic curves", d, total)
    return CensusResult(d, total, tuple(terms), tuple(trace))
