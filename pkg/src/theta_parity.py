"""
Parity bookkeeping for symmetric line bundles and their translates.

A symmetric line bundle with a symmetric theta structure has a well defined
parity; the eigenspace dimensions of the (-1)-action on its sections, and the
number of fixed points of the induced involution on a curve in its linear
system, depend only on d, the parity and whether a symmetric theta structure
exists.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Tuple

import numpy as np

from src.errors import DomainError, InvariantViolation
from src.polarization import PolarizationContext, QuotientModel
from src.torsion_group import TorsionPoint, torsion_grid

logger = logging.getLogger(__name__)


class Parity(Enum):
    EVEN = "even"
    ODD = "odd"

    @property
    def eigenvalue(self) -> int:
        """Eigenvalue of (-1) on the section whose divisor is the curve."""
        return 1 if self is Parity.EVEN else -1


class StsStatus(Enum):
    HAS_STS = "has_sts"
    NO_STS = "no_sts"


@dataclass(frozen=True)
class LinearSystemProfile:
    h_plus: int
    h_minus: int
    fix_minus: int
    fix_plus: int

    def __post_init__(self):
        if min(self.h_plus, self.h_minus, self.fix_minus, self.fix_plus) < 0:
            raise InvariantViolation(f"negative entry in {self}")
        if self.fix_minus + self.fix_plus != 16:
            raise InvariantViolation(f"fixed point counts of {self} do not cover A[2]")

    def fixed_points(self, eigenvalue: int) -> int:
        """Fixed points of (-1) on a curve cut by an eigenvalue-``eigenvalue`` section."""
        if eigenvalue == 1:
            return self.fix_minus
        if eigenvalue == -1:
            return self.fix_plus
        raise DomainError(f"eigenvalue must be +1 or -1, got {eigenvalue}", condition="eigenvalue")


def profile_lookup(d: int, sts: StsStatus, parity: Parity) -> LinearSystemProfile:
    """
    Eigenspace dimensions and fixed-point counts of the linear system of L.

    Args:
        d (int): Polarization type (1, d)
        sts (StsStatus): Whether L carries a symmetric theta structure
        parity (Parity): Parity of L; ignored when there is no theta structure

    Returns:
        LinearSystemProfile: (h+, h-, fix counts for curves cut by +1 and by -1 sections)
    """
    if d < 1:
        raise DomainError(f"d must be a positive integer, got {d}", condition="polarization type")
    if d % 2:
        # odd d always carries a symmetric theta structure
        if parity is Parity.EVEN:
            return LinearSystemProfile((d + 1) // 2, (d - 1) // 2, 6, 10)
        return LinearSystemProfile((d - 1) // 2, (d + 1) // 2, 10, 6)
    if sts is StsStatus.NO_STS:
        return LinearSystemProfile(d // 2, d // 2, 8, 8)
    if parity is Parity.EVEN:
        return LinearSystemProfile(d // 2 + 1, d // 2 - 1, 4, 12)
    return LinearSystemProfile(d // 2 - 1, d // 2 + 1, 12, 4)


def symmetric_after_translate(ctx: PolarizationContext, y: TorsionPoint) -> bool:
    """t*_y L is symmetric iff 2y lies in K(L)."""
    return (ctx.d * (2 * y)).is_zero()


def sts_after_translate(ctx: PolarizationContext, y: TorsionPoint) -> StsStatus:
    if not symmetric_after_translate(ctx, y):
        raise DomainError(f"t*_y L is not symmetric for y={y}", condition="symmetric translate")
    two_torsion = torsion_grid(2)
    if any((ctx.d * (y - z)).is_zero() for z in two_torsion):
        return StsStatus.HAS_STS
    return StsStatus.NO_STS


def symmetric_translate_classes(ctx: PolarizationContext) -> Tuple[int, int]:
    """(classes of symmetric translates, classes among them with a theta structure).

    Classes are taken modulo K(L) inside the modelled plane.
    """
    kernel = ctx.kernel
    candidates = torsion_grid(2 * ctx.d)
    classes = {}
    for y in candidates:
        if symmetric_after_translate(ctx, y):
            key = min((y + k for k in kernel), key=TorsionPoint.sort_key)
            classes.setdefault(key, y)
    with_sts = sum(1 for y in classes.values() if sts_after_translate(ctx, y) is StsStatus.HAS_STS)
    return len(classes), with_sts


def translate_image(model: QuotientModel, y: TorsionPoint) -> TorsionPoint:
    ctx = model.context
    ctx.require_in_kernel(y)
    if 2 * y not in model.subgroup:
        raise DomainError(f"2y={2 * y} is not in X", condition="halving in X")
    return model.project(-y)


def translated_M_parity(model: QuotientModel, y: TorsionPoint) -> Parity:
    """
    Parity of t*_{-y} M on the quotient A/X.

    Even exactly when the image of -y is 0, w1 or w2; odd when it is w1 + w2.

    Args:
        model (QuotientModel): Quotient by X with its 2-torsion points w1, w2
        y (TorsionPoint): Point of K(L) with 2y in X

    Returns:
        Parity: Parity of the translated bundle
    """
    image = translate_image(model, y)
    if image not in model.two_torsion_images():
        raise InvariantViolation(f"image {image} of -y is not one of 0, w1, w2, w1+w2")
    even_points = {model.project(TorsionPoint(0, 0))}
    even_points.update(model.project(w) for w in (model.w1, model.w2) if w is not None)
    return Parity.EVEN if image in even_points else Parity.ODD


_HYPERBOLIC = np.array([[0, 1], [1, 0]], dtype=np.int64)


def quadratic_form_oracle(model: QuotientModel, z: TorsionPoint) -> Parity:
    """Parity from q(a*w1 + b*w2) = (-1)^(ab), computed over GF(2)."""
    image = model.project(z)
    for a in (0, 1):
        for b in (0, 1):
            if (a and model.w1 is None) or (b and model.w2 is None):
                continue
            point = TorsionPoint(0, 0)
            if a:
                point = point + model.w1
            if b:
                point = point + model.w2
            if model.project(point) == image:
                exponent = int(np.array([a, 0]) @ _HYPERBOLIC @ np.array([0, b])) % 2
                return Parity.ODD if exponent else Parity.EVEN
    raise InvariantViolation(f"{image} is not in the span of w1, w2")
