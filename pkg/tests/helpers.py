"""Shared random generators for the test suite.

Everything takes an explicit numpy Generator so each test pins its own seed.
"""

from __future__ import annotations

import math

import numpy as np

from rootforms import (
    Basis2,
    LatticeSign,
    ObtuseSuperbase,
    RootForm,
    Superbase2,
    Vec2,
    reconstruct_superbase,
)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_basis(rng, scale: float = 1.0, max_cond: float = 1e3) -> Basis2:
    """Gaussian random basis, resampled until reasonably conditioned."""
    while True:
        m = rng.normal(0.0, scale, size=(2, 2))
        if np.linalg.cond(m) <= max_cond:
            return Basis2(Vec2(m[0, 0], m[0, 1]), Vec2(m[1, 0], m[1, 1]))


def random_unimodular(rng, shears: int = 4, kmax: int = 5) -> np.ndarray:
    """Random integer matrix with determinant +-1 (product of shears/swaps)."""
    m = np.eye(2, dtype=np.int64)
    for _ in range(shears):
        k = int(rng.integers(-kmax, kmax + 1))
        if rng.random() < 0.5:
            m = m @ np.array([[1, k], [0, 1]], dtype=np.int64)
        else:
            m = m @ np.array([[1, 0], [k, 1]], dtype=np.int64)
        if rng.random() < 0.3:
            m = m @ np.array([[0, 1], [1, 0]], dtype=np.int64)
    return m


def apply_unimodular(b: Basis2, m: np.ndarray) -> Basis2:
    v1 = Vec2(m[0, 0] * b.v1.x + m[0, 1] * b.v2.x, m[0, 0] * b.v1.y + m[0, 1] * b.v2.y)
    v2 = Vec2(m[1, 0] * b.v1.x + m[1, 1] * b.v2.x, m[1, 0] * b.v1.y + m[1, 1] * b.v2.y)
    return Basis2(v1, v2)


def rotated_basis(b: Basis2, angle: float) -> Basis2:
    return Basis2(b.v1.rotated(angle), b.v2.rotated(angle))


def reflected_basis(b: Basis2) -> Basis2:
    """Mirror across the y axis (x -> -x)."""
    return Basis2(Vec2(-b.v1.x, b.v1.y), Vec2(-b.v2.x, b.v2.y))


def random_root_form(rng, lo: float = 0.2, hi: float = 3.0) -> RootForm:
    vals = sorted(rng.uniform(lo, hi, size=3))
    return RootForm(*vals)


def random_oriented_form(rng, lo: float = 0.2, hi: float = 3.0):
    """Cyclic-canonical triple: smallest first, random order of the rest."""
    a, b, c = sorted(rng.uniform(lo, hi, size=3))
    return (a, b, c) if rng.random() < 0.5 else (a, c, b)


def random_obtuse_superbase(
    rng,
    conorm_lo: float = 0.1,
    conorm_hi: float = 3.0,
    scale: float = 1.0,
) -> ObtuseSuperbase:
    """Random strict obtuse superbase in general position."""
    p = np.sort(rng.uniform(conorm_lo, conorm_hi, size=3)) * scale * scale
    rf = RootForm(*(math.sqrt(v) for v in p))
    sign = LatticeSign.NEGATIVE if rng.random() < 0.5 else LatticeSign.POSITIVE
    base = reconstruct_superbase(rf, sign)
    angle = rng.uniform(0.0, 2.0 * math.pi)
    return ObtuseSuperbase(
        base.v0.rotated(angle), base.v1.rotated(angle), base.v2.rotated(angle)
    )


def perturbed_superbase(rng, s: Superbase2, delta: float):
    """Perturb v1 and v2 by vectors of norm <= delta/2, rebuild v0.

    Returns (perturbed superbase, actual max vector deviation).
    """
    def noise():
        ang = rng.uniform(0.0, 2.0 * math.pi)
        r = rng.uniform(0.0, 0.5 * delta)
        return Vec2(r * math.cos(ang), r * math.sin(ang))

    e1, e2 = noise(), noise()
    v1 = s.v1 + e1
    v2 = s.v2 + e2
    v0 = -(v1 + v2)
    actual = max(e1.norm(), e2.norm(), (e1 + e2).norm())
    return Superbase2(v0, v1, v2), actual
