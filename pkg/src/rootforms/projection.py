"""Scale-free triangle coordinates of root forms, and the inverse map.

A root form (r12, r01, r02) divided by its entry sum gives barycentric
coordinates in the full triangle; the sorted triples form the quotient
triangle parameterised by x = (b02 - b01) / 2 in [0, 1/2] and y = b12 in
[0, 1/3]. Mirror images of chiral lattices carry signed_x = -x.

The inverse map rebuilds the canonical obtuse superbase: v1 on the positive
x axis, v2 at the obtuse angle arccos(-r12^2 / (|v1| |v2|)), counterclockwise
for positive (or neutral) lattices and clockwise for negative ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .errors import DegenerateLattice
from .lattice import (
    LatticeSign,
    ObtuseSuperbase,
    OrientedRootForm,
    RootForm,
    Vec2,
)


class BarycentricTriple(NamedTuple):
    """Root products scaled to unit sum."""

    b12: float
    b01: float
    b02: float


@dataclass(frozen=True)
class QTPoint:
    """Quotient-triangle coordinates; signed_x is negative for mirror images."""

    x: float
    y: float
    signed_x: float

    def __post_init__(self):
        if abs(self.signed_x) != self.x:
            raise ValueError("signed_x must be +-x")


def to_full_triangle(rf: RootForm) -> BarycentricTriple:
    """Normalise a root form by its entry sum."""
    total = rf[0] + rf[1] + rf[2]
    if total <= 0.0:
        raise DegenerateLattice("root products sum to zero")
    return BarycentricTriple(rf[0] / total, rf[1] / total, rf[2] / total)


def to_quotient_triangle(rf: RootForm) -> QTPoint:
    """Quotient-triangle point of a sorted root form."""
    b12, b01, b02 = to_full_triangle(rf)
    x = 0.5 * (b02 - b01)
    return QTPoint(x, b12, x)


def to_quotient_triangle_oriented(orf: OrientedRootForm, sign: LatticeSign) -> QTPoint:
    """Quotient-triangle point with signed_x = -x for negative lattices."""
    base = to_quotient_triangle(RootForm(*sorted(orf)))
    if sign is LatticeSign.NEGATIVE:
        return QTPoint(base.x, base.y, -base.x)
    return base


def reconstruct_superbase(
    rf: RootForm, sign: LatticeSign = LatticeSign.POSITIVE
) -> ObtuseSuperbase:
    """Canonical obtuse superbase realising a root form.

    The conorms of the result are exactly the squared root products, so the
    root form round-trips. Passing LatticeSign.NEGATIVE places v2 clockwise,
    producing the mirror-image representative.
    """
    r12, r01, r02 = rf
    len1 = math.hypot(r12, r01)
    len2 = math.hypot(r12, r02)
    if len1 <= 0.0 or len2 <= 0.0:
        raise DegenerateLattice(f"root form {tuple(rf)} has a vanishing basis vector")
    cos_a = -(r12 * r12) / (len1 * len2)
    cos_a = max(-1.0, min(1.0, cos_a))
    sin_a = math.sqrt(1.0 - cos_a * cos_a)
    if sign is LatticeSign.NEGATIVE:
        sin_a = -sin_a
    v1 = Vec2(len1, 0.0)
    v2 = Vec2(len2 * cos_a, len2 * sin_a)
    return ObtuseSuperbase(-(v1 + v2), v1, v2, reduction_steps=0)
