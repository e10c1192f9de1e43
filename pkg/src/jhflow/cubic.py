"""Roots of P3(h) = h^3 + 6h^2 + 6 C1 h + C2 and the (C1, C2) region map.

Regions of the parameter plane:

    I1      C1 > 2
    Gamma0  C1 = 2, C2 != 8
    P0      (2, 8)
    I2      C1 < 2 and C2 outside [L-(C1), L+(C1)]
    II      C1 < 2 and L-(C1) < C2 < L+(C1)
    GammaP  C1 < 2 and C2 = L+(C1)
    GammaM  C1 < 2 and C2 = L-(C1)

with L+-(C1) = 12 C1 - 16 +- 4 (2 - C1) sqrt(2 (2 - C1)).
I = I1 u Gamma0 u I2 is where P3 has one real root and a conjugate pair.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Union

BOUNDARY_RTOL = 1e-12


@dataclass(frozen=True)
class ParameterPoint:
    C1: float
    C2: float

    def __post_init__(self):
        if not (math.isfinite(self.C1) and math.isfinite(self.C2)):
            raise ValueError("C1 and C2 must be finite")


class RegionTag(str, enum.Enum):
    I1 = "I1"
    Gamma0 = "Gamma0"
    I2 = "I2"
    P0 = "P0"
    II = "II"
    GammaPlus = "GammaPlus"
    GammaMinus = "GammaMinus"

    @property
    def in_I(self) -> bool:
        return self in (RegionTag.I1, RegionTag.Gamma0, RegionTag.I2)


@dataclass(frozen=True)
class ThreeDistinctReal:
    a: float
    b: float
    c: float

    @property
    def roots(self) -> tuple[complex, ...]:
        return (self.a, self.b, self.c)


@dataclass(frozen=True)
class DoubleAndSimple:
    double: float
    simple: float

    @property
    def roots(self) -> tuple[complex, ...]:
        return (self.double, self.double, self.simple)


@dataclass(frozen=True)
class TripleReal:
    r: float

    @property
    def roots(self) -> tuple[complex, ...]:
        return (self.r, self.r, self.r)


@dataclass(frozen=True)
class OneRealPlusConjugate:
    alpha: float
    m: float
    n: float

    @property
    def roots(self) -> tuple[complex, ...]:
        return (self.alpha, complex(self.m, self.n), complex(self.m, -self.n))


CubicRoots = Union[ThreeDistinctReal, DoubleAndSimple, TripleReal, OneRealPlusConjugate]


class Discriminants(NamedTuple):
    delta_cubic: float
    delta_square: float
    L_plus: float
    L_minus: float


def _pp(p) -> ParameterPoint:
    return p if isinstance(p, ParameterPoint) else ParameterPoint(*map(float, p))


def p3_eval(h: float, p: ParameterPoint) -> float:
    p = _pp(p)
    return ((h + 6.0) * h + 6.0 * p.C1) * h + p.C2


def _p3_prime(h: float, p: ParameterPoint) -> float:
    return (3.0 * h + 12.0) * h + 6.0 * p.C1


def boundary_curves(C1: float) -> tuple[float, float]:
    """(L+, L-) at C1; NaN for C1 > 2 where the curves do not exist."""
    if C1 > 2.0:
        return math.nan, math.nan
    w = 2.0 - C1
    bend = 4.0 * w * math.sqrt(2.0 * w)
    return 12.0 * C1 - 16.0 + bend, 12.0 * C1 - 16.0 - bend


def discriminants(p: ParameterPoint) -> Discriminants:
    p = _pp(p)
    C1, C2 = p.C1, p.C2
    delta_cubic = -27.0 * (C2 * C2 + (-24.0 * C1 + 32.0) * C2 + 32.0 * C1**3 - 48.0 * C1**2)
    delta_square = -128.0 * (C1 - 2.0) ** 3
    lp, lm = boundary_curves(C1)
    # + 0.0 folds negative zero
    return Discriminants(delta_cubic + 0.0, delta_square + 0.0, lp, lm)


def _close(u: float, v: float) -> bool:
    return abs(u - v) <= BOUNDARY_RTOL * max(1.0, abs(u), abs(v))


def classify(p: ParameterPoint) -> RegionTag:
    p = _pp(p)
    C1, C2 = p.C1, p.C2
    if _close(C1, 2.0):
        return RegionTag.P0 if _close(C2, 8.0) else RegionTag.Gamma0
    if C1 > 2.0:
        return RegionTag.I1
    lp, lm = boundary_curves(C1)
    if _close(C2, lp):
        return RegionTag.GammaPlus
    if _close(C2, lm):
        return RegionTag.GammaMinus
    if lm < C2 < lp:
        return RegionTag.II
    return RegionTag.I2


def _polish(h: float, p: ParameterPoint) -> float:
    d = _p3_prime(h, p)
    if d == 0.0:
        return h
    step = p3_eval(h, p) / d
    # a Newton step that increases the residual is a sign of a near-multiple root
    cand = h - step
    return cand if abs(p3_eval(cand, p)) <= abs(p3_eval(h, p)) else h


def solve_cubic(p: ParameterPoint) -> CubicRoots:
    """Root structure of P3 following the region map, with one Newton polish.

    In the shifted variable t = h + 2 the cubic reads t^3 + P t + Q with
    P = 6 C1 - 12 and Q = C2 - 12 C1 + 16.
    """
    p = _pp(p)
    tag = classify(p)
    C1 = p.C1
    if tag is RegionTag.P0:
        return TripleReal(-2.0)
    if tag in (RegionTag.GammaPlus, RegionTag.GammaMinus):
        s = math.sqrt(2.0 * (2.0 - C1))
        if tag is RegionTag.GammaPlus:
            return DoubleAndSimple(double=-2.0 + s, simple=-2.0 - 2.0 * s)
        return DoubleAndSimple(double=-2.0 - s, simple=-2.0 + 2.0 * s)
    P = 6.0 * C1 - 12.0
    Q = p.C2 - 12.0 * C1 + 16.0
    if tag is RegionTag.II:
        r = 2.0 * math.sqrt(-P / 3.0)
        arg = max(-1.0, min(1.0, 3.0 * Q / (P * r)))
        base = math.acos(arg) / 3.0
        ts = sorted(r * math.cos(base - 2.0 * math.pi * j / 3.0) for j in range(3))
        a, b, c = (_polish(t - 2.0, p) for t in ts)
        return ThreeDistinctReal(a, b, c)
    disc = Q * Q / 4.0 + P**3 / 27.0
    big = math.copysign(abs(Q) / 2.0 + math.sqrt(disc), Q)
    A = -math.copysign(abs(big) ** (1.0 / 3.0), big)
    t = A - P / (3.0 * A) if A != 0.0 else 0.0
    alpha = _polish(t - 2.0, p)
    # deflate: P3(h) / (h - alpha) = h^2 + (6 + alpha) h + alpha (6 + alpha) + 6 C1
    m = -(6.0 + alpha) / 2.0
    n2 = alpha * (6.0 + alpha) + 6.0 * C1 - m * m
    return OneRealPlusConjugate(alpha, m, math.sqrt(max(n2, 0.0)))


def from_roots(a: float, b: float, c: float) -> ParameterPoint:
    """(C1, C2) of the monic cubic with real roots a, b, c (requires a+b+c = -6)."""
    return ParameterPoint((a * b + a * c + b * c) / 6.0, -a * b * c)
