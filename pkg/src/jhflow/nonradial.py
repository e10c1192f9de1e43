"""Non-radial self-similar solutions with xv - yu = C0 != 0.

The field is a linear (Landau-type) part plus a radial correction,

    u = u_L + x H(theta) / r^2,  v = v_L + y H(theta) / r^2,  p = p_L + 2 H(theta) / r^2,

where H solves the Lienard equation H'' - C0 H' + H^2 + 2 (Ct1 + 2) H = 0.
For Ct1 = -2 + 3 C0^2 / 25 it is integrable and

    H = -(6 C0^2 / 25) tau^2 P(tau + C; 0, g3),   tau = exp(C0 theta / 5).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .elliptic import WeierstrassInvariants, weierstrass_p, weierstrass_p_prime, weierstrass_period
from .errors import BlowUpError, DomainError, ParameterError, PoleError

BLOWUP = 1e12
PRINCIPAL = (-math.pi / 2, math.pi / 2)


class Variant(str, enum.Enum):
    LinearOnly = "LinearOnly"
    Weierstrass = "Weierstrass"
    Degenerate = "Degenerate"
    NumericLienard = "NumericLienard"


def integrable_Ctilde1(C0: float) -> float:
    return -2.0 + 3.0 * C0 * C0 / 25.0


def integrable_C1(C0: float) -> float:
    """C1 for which the integrable Ct1 is the '+' branch of the linear coefficient."""
    return 2.0 - C0 * C0 / 2.0 - 9.0 * C0**4 / 1250.0


def linear_coefficient(C0: float, C1: float, branch: int = 1) -> float:
    """Ct1 = -2 +- sqrt(4 - C0^2 - 2 C1), making h_L(z) = -C0 z + Ct1 a solution."""
    disc = 4.0 - C0 * C0 - 2.0 * C1
    if disc < 0.0:
        raise ParameterError(f"linear solution needs C0^2 <= 4 - 2 C1 (margin {disc:.3e})")
    return -2.0 + math.copysign(math.sqrt(disc), branch)


@dataclass(frozen=True)
class NonRadialSpec:
    C0: float
    Ctilde1: float
    g3: float = 0.0
    C: float = 0.0
    variant: Variant = Variant.Weierstrass
    C1: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        if self.C0 == 0.0 or not math.isfinite(self.C0):
            raise ParameterError("C0 must be finite and non-zero")
        if self.variant in (Variant.Weierstrass, Variant.Degenerate):
            want = integrable_Ctilde1(self.C0)
            if abs(self.Ctilde1 - want) > 1e-12 * max(1.0, abs(want)):
                raise ParameterError("integrable variants need Ct1 = -2 + 3 C0^2 / 25")
        if self.variant is Variant.Degenerate and self.g3 != 0.0:
            raise ParameterError("the degenerate variant has g3 = 0")
        if self.variant is Variant.LinearOnly:
            if self.C1 is None:
                raise ParameterError("LinearOnly needs C1")
            branches = [linear_coefficient(self.C0, self.C1, s) for s in (1, -1)]
            if min(abs(self.Ctilde1 - b) for b in branches) > 1e-12 * max(1.0, abs(self.Ctilde1)):
                raise ParameterError("Ct1 is not a linear coefficient for (C0, C1)")

    @classmethod
    def weierstrass(cls, C0: float, g3: float, C: float = 0.0):
        return cls(C0, integrable_Ctilde1(C0), g3, C, Variant.Weierstrass, integrable_C1(C0))

    @classmethod
    def degenerate(cls, C0: float, C: float = 0.0):
        return cls(C0, integrable_Ctilde1(C0), 0.0, C, Variant.Degenerate, integrable_C1(C0))

    @classmethod
    def linear(cls, C0: float, C1: float, branch: int = 1):
        return cls(C0, linear_coefficient(C0, C1, branch), 0.0, 0.0, Variant.LinearOnly, C1)

    @classmethod
    def numeric(cls, C0: float, Ctilde1: float):
        return cls(C0, Ctilde1, 0.0, 0.0, Variant.NumericLienard)


class LienardState(NamedTuple):
    theta: float
    H: float
    Hprime: float


def lienard_rhs(state: LienardState, C0: float, Ctilde1: float) -> float:
    """H'' from the Lienard equation."""
    return C0 * state.Hprime - state.H**2 - 2.0 * (Ctilde1 + 2.0) * state.H


def lienard_integrate(spec: NonRadialSpec, init: LienardState, theta_end: float,
                      step: float) -> list[LienardState]:
    """Classical RK4 from ``init`` to ``theta_end``; the step is shrunk to land exactly."""
    if step <= 0.0:
        raise ValueError("step must be positive")
    span = theta_end - init.theta
    n = max(1, math.ceil(abs(span) / step - 1e-12))
    h = span / n
    C0, ct1 = spec.C0, spec.Ctilde1

    def rhs(y):
        return np.array([y[1], C0 * y[1] - y[0] ** 2 - 2.0 * (ct1 + 2.0) * y[0]])

    y = np.array([init.H, init.Hprime], dtype=float)
    out = [LienardState(float(init.theta), float(y[0]), float(y[1]))]
    for i in range(1, n + 1):
        k1 = rhs(y)
        k2 = rhs(y + 0.5 * h * k1)
        k3 = rhs(y + 0.5 * h * k2)
        k4 = rhs(y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(y)) or abs(y[0]) > BLOWUP:
            raise BlowUpError(f"|H| exceeded {BLOWUP:g} near theta={init.theta + i * h:.6g}")
        out.append(LienardState(init.theta + i * h, float(y[0]), float(y[1])))
    return out


def first_integral(state: LienardState, C0: float) -> float:
    """Estimate of the constant C2 in the integrable case."""
    lhs = (state.Hprime - 0.4 * C0 * state.H) ** 2 + (2.0 / 3.0) * state.H**3
    return lhs * math.exp(-1.2 * C0 * state.theta)


def first_integral_exact(C0: float, g3: float) -> float:
    """C2 carried by the Weierstrass family: -36 g3 C0^6 / 5^6."""
    return -36.0 * g3 * C0**6 / 15625.0


def weierstrass_H_derivs(theta, C0: float, g3: float, C: float = 0.0):
    """(H, H', H'') of the Weierstrass profile; P'' = 6 P^2 since g2 = 0."""
    inv = WeierstrassInvariants(0.0, float(g3))
    theta = np.asarray(theta, dtype=float)
    a = C0 / 5.0
    q = 6.0 * C0 * C0 / 25.0
    tau = np.exp(a * theta)
    w = weierstrass_p(tau + C, inv)
    dw = weierstrass_p_prime(tau + C, inv)
    ddw = 6.0 * w * w
    t2 = tau * tau
    H = -q * t2 * w
    dH = -q * a * (2.0 * t2 * w + t2 * tau * dw)
    d2H = -q * a * a * (4.0 * t2 * w + 5.0 * t2 * tau * dw + t2 * t2 * ddw)
    if np.ndim(H) == 0:
        return float(H), float(dH), float(d2H)
    return H, dH, d2H


def weierstrass_H(theta, C0: float, g3: float, C: float = 0.0):
    return weierstrass_H_derivs(theta, C0, g3, C)[0]


def degenerate_H(theta, C0: float, C: float):
    """Elementary profile for g3 = 0: -(6 C0^2/25) / (1 + C exp(-C0 theta / 5))^2."""
    theta = np.asarray(theta, dtype=float)
    den = 1.0 + C * np.exp(-C0 * theta / 5.0)
    if np.any(np.abs(den) < 1e-12):
        raise PoleError("1 + C exp(-C0 theta / 5) vanishes")
    H = -(6.0 * C0 * C0 / 25.0) / den**2
    return float(H) if np.ndim(H) == 0 else H


def pole_thetas(spec: NonRadialSpec, lo: float, hi: float) -> list[float]:
    """Angles in [lo, hi] where the profile H is singular."""
    if spec.variant in (Variant.LinearOnly, Variant.NumericLienard):
        return []
    C0, C = spec.C0, spec.C
    t_lo, t_hi = sorted((math.exp(C0 * lo / 5.0), math.exp(C0 * hi / 5.0)))
    period = weierstrass_period(spec.g3)
    # singular where tau + C hits a lattice point j * period, tau > 0
    if math.isinf(period):
        targets = [-C]
    else:
        j0 = math.ceil((t_lo + C) / period)
        j1 = math.floor((t_hi + C) / period)
        targets = [j * period - C for j in range(j0, j1 + 1)]
    out = [5.0 / C0 * math.log(t) for t in targets if t > 0.0 and t_lo <= t <= t_hi]
    return sorted(out)


def pole_free_windows(spec: NonRadialSpec, lo: float = PRINCIPAL[0], hi: float = PRINCIPAL[1]):
    """Maximal open pole-free theta intervals inside (lo, hi), as (lo, hi) pairs."""
    cuts = [t for t in pole_thetas(spec, lo, hi) if lo < t < hi]
    edges = [lo, *cuts, hi]
    return [(edges[i], edges[i + 1]) for i in range(len(edges) - 1)]


def principal_window(spec: NonRadialSpec, lo: float = PRINCIPAL[0], hi: float = PRINCIPAL[1]):
    wins = pole_free_windows(spec, lo, hi)
    return min(wins, key=lambda w: 0.0 if w[0] < 0.0 < w[1] else min(abs(w[0]), abs(w[1])))


def profile_H(spec: NonRadialSpec, theta):
    if spec.variant is Variant.LinearOnly:
        return np.zeros_like(np.asarray(theta, dtype=float)) + 0.0
    if spec.variant is Variant.Degenerate:
        return degenerate_H(theta, spec.C0, spec.C)
    if spec.variant is Variant.NumericLienard:
        raise ParameterError("no closed form; integrate with lienard_integrate")
    return weierstrass_H(theta, spec.C0, spec.g3, spec.C)


def landau_field(C1: float, C2: float, x, y):
    """Constant-profile field: u = (C1 x - C2 y)/r^2, v = (C1 y + C2 x)/r^2."""
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    r2 = x * x + y * y
    if np.any(r2 == 0.0):
        raise DomainError("field is singular at the origin")
    u = (C1 * x - C2 * y) / r2
    v = (C1 * y + C2 * x) / r2
    p = -(C1 * C1 + C2 * C2) / (2.0 * r2)
    if np.ndim(u) == 0:
        return float(u), float(v), float(p)
    return u, v, p


def _combine(C0, ct1, x, y, H):
    uL, vL, pL = landau_field(ct1, C0, x, y)
    r2 = np.asarray(x, dtype=float) ** 2 + np.asarray(y, dtype=float) ** 2
    u = uL + x * H / r2
    v = vL + y * H / r2
    p = pL + 2.0 * H / r2
    if np.ndim(u) == 0:
        return float(u), float(v), float(p)
    return u, v, p


def _angle(x, y):
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    if np.any(x <= 0.0):
        raise DomainError("non-radial fields are evaluated in cones with x > 0")
    return np.arctan(y / x)


def nonradial_field(spec: NonRadialSpec, x, y):
    """(u, v, p) of the non-radial solution; xv - yu = C0 by construction."""
    H = profile_H(spec, _angle(x, y))
    return _combine(spec.C0, spec.Ctilde1, x, y, H)


def degenerate_field(C0: float, C: float, x, y):
    """Elementary g3 = 0 field with the integrable Ct1."""
    H = degenerate_H(_angle(x, y), C0, C)
    return _combine(C0, integrable_Ctilde1(C0), x, y, H)


def h_c0_residual(z, h, hz, hzz, C0: float, C1: float):
    """Residual of the reduced ODE for h(z) = (z^2 + 1) x u at slope z = y/x."""
    z2 = z * z + 1.0
    return (z2 * z2 * hzz + (2.0 * z - C0) * z2 * hz + h * h + (2.0 * C0 * z + 4.0) * h
            + 2.0 * C0 * z**3 + 6.0 * C0 * z + 2.0 * C1)
