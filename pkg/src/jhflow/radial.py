"""Radial self-similar profiles f0..f7, their velocity/pressure fields, and
globally periodic solutions on the punctured plane.

A radial field is u = x k / r^2, v = y k / r^2, p = (2 k + C1) / r^2 with
k = f(theta).  Every non-constant profile solves

    f'' + f^2 + 4 f + 2 C1 = 0,
    (f')^2 + (2/3) f^3 + 4 f^2 + 4 C1 f + (2/3) C2 = 0.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

import numpy as np
from scipy import integrate, optimize

from . import cubic
from .cubic import ParameterPoint, RegionTag
from .elliptic import ellint_K, jacobi_am
from .errors import DomainError, NoBracketError, ParameterError, PoleError

POLE_TOL = 1e-10
PRINCIPAL = (-math.pi / 2, math.pi / 2)


class Family(str, enum.Enum):
    F0 = "F0"
    F1 = "F1"
    F2 = "F2"
    F3 = "F3"
    F4 = "F4"
    F5 = "F5"
    F6 = "F6"
    F7 = "F7"


_ADMISSIBLE = {
    Family.F1: (RegionTag.I1, RegionTag.Gamma0, RegionTag.I2),
    Family.F2: (RegionTag.P0,),
    Family.F3: (RegionTag.II,),
    Family.F4: (RegionTag.II,),
    Family.F5: (RegionTag.GammaPlus,),
    Family.F6: (RegionTag.GammaMinus,),
    Family.F7: (RegionTag.GammaMinus,),
}


@dataclass(frozen=True)
class ConeDomain:
    """Open sector theta_min < theta < theta_max; (0, 2 pi) is the plane minus R_0."""

    theta_min: float
    theta_max: float

    def __post_init__(self):
        width = self.theta_max - self.theta_min
        if not (0.0 < width <= 2.0 * math.pi + 1e-15):
            raise ValueError("cone opening must lie in (0, 2 pi]")

    def contains(self, theta):
        """Membership of polar angles, taken modulo 2 pi."""
        theta = np.asarray(theta, dtype=float)
        t = self.theta_min + np.mod(theta - self.theta_min, 2.0 * math.pi)
        return (t > self.theta_min) & (t < self.theta_max)


@dataclass(frozen=True)
class ThetaInterval:
    lo: float
    hi: float
    lo_open: bool = True
    hi_open: bool = True

    def __contains__(self, theta: float) -> bool:
        above = theta > self.lo if self.lo_open else theta >= self.lo
        below = theta < self.hi if self.hi_open else theta <= self.hi
        return above and below


@dataclass(frozen=True)
class RadialProfileSpec:
    family: Family
    C: float
    source: ParameterPoint
    params: Mapping[str, float] = field(compare=False)

    @property
    def C1(self) -> float:
        return self.source.C1

    @property
    def C2(self) -> float:
        return self.source.C2

    @classmethod
    def build(cls, family, C1: float | None = None, C2: float | None = None, C: float = 0.0):
        """Construct a spec, deriving the family parameters from (C1, C2).

        For F0, ``C`` is the constant value itself; when (C1, C2) are omitted
        they are taken so that C solves f^2 + 4f + 2C1 = 0 and P3(C) = 0.
        F2 defaults to (2, 8); F5 to C2 = L+(C1); F6/F7 to C2 = L-(C1).
        """
        family = Family(family)
        C = float(C)
        if not math.isfinite(C):
            raise ParameterError("free constant must be finite")
        if family is Family.F0:
            if C1 is None:
                C1 = -(C * C + 4.0 * C) / 2.0
            if C2 is None:
                C2 = -C * (C * C + 6.0 * C + 6.0 * C1)
        elif family is Family.F2:
            C1 = 2.0 if C1 is None else C1
            C2 = 8.0 if C2 is None else C2
        elif family in (Family.F5, Family.F6, Family.F7) and C2 is None:
            if C1 is None or C1 >= 2.0:
                raise ParameterError(f"{family.value} needs C1 < 2")
            lp, lm = cubic.boundary_curves(C1)
            C2 = lp if family is Family.F5 else lm
        if C1 is None or C2 is None:
            raise ParameterError(f"{family.value} needs both C1 and C2")
        source = ParameterPoint(float(C1), float(C2))
        params = _derive(family, source, C)
        return cls(family, C, source, MappingProxyType(params))


def _derive(family: Family, src: ParameterPoint, C: float) -> dict:
    if family is Family.F0:
        resid = cubic.p3_eval(C, src)
        if abs(resid) > 1e-9 * max(1.0, abs(C) ** 3, abs(src.C2)):
            raise ParameterError(f"constant {C} is not a root of P3 (residual {resid:.3e})")
        return {"Cconst": C}
    tag = cubic.classify(src)
    if tag not in _ADMISSIBLE[family]:
        raise ParameterError(f"{family.value} is not admissible in region {tag.value}")
    roots = cubic.solve_cubic(src)
    if family is Family.F1:
        alpha, m, n = roots.alpha, roots.m, roots.n
        beta = math.hypot(m - alpha, n)
        if n <= 0.0 or beta <= 0.0:
            raise ParameterError("degenerate conjugate pair")
        k = math.sqrt((beta - m + alpha) / (2.0 * beta))
        if not 0.0 <= k < 1.0:
            raise ParameterError(f"modulus {k} outside [0, 1)")
        return {
            "alpha": alpha, "m": m, "n": n, "beta": beta, "k": k,
            "rate": math.sqrt(6.0 * beta) / 3.0, "shift": math.sqrt(beta) * C,
            "K": ellint_K(k),
        }
    if family is Family.F2:
        return {}
    if family in (Family.F3, Family.F4):
        a, b, c = roots.a, roots.b, roots.c
        if not a < b < c:
            raise ParameterError("need three distinct roots a < b < c")
        k = math.sqrt((c - b) / (c - a))
        return {
            "a": a, "b": b, "c": c, "k": k,
            "rate": math.sqrt((c - a) / 6.0), "shift": math.sqrt(c - a) * C,
            "K": ellint_K(k),
        }
    s = math.sqrt(2.0 * (2.0 - src.C1))
    if family is Family.F5:
        return {"s": s, "base": -2.0 - 2.0 * s, "rate": ((2.0 - src.C1) / 2.0) ** 0.25}
    a6 = (2.0 - src.C1) ** 0.25 / 2.0
    return {"s": s, "base": -2.0 + 2.0 * s, "A6": a6, "rate": a6 * 8.0**0.25}


def _pole_lattice(spec: RadialProfileSpec):
    """(theta_star, period) describing poles theta_star + j*period, or None."""
    P, C = spec.params, spec.C
    fam = spec.family
    if fam is Family.F1:
        # cot^2(am/2) blows up where am = 2 pi j, i.e. argument = 4 K j
        return -P["shift"] / P["rate"], 4.0 * P["K"] / P["rate"]
    if fam is Family.F2:
        return -C, math.inf
    if fam is Family.F4:
        return (P["K"] - P["shift"]) / P["rate"], 2.0 * P["K"] / P["rate"]
    if fam is Family.F5:
        return (math.pi / 2 - C) / P["rate"], math.pi / P["rate"]
    if fam is Family.F7:
        return -C / 8.0**0.25, math.inf
    return None


def poles(spec: RadialProfileSpec, lo: float, hi: float) -> list[float]:
    lat = _pole_lattice(spec)
    if lat is None:
        return []
    t0, period = lat
    if math.isinf(period):
        return [t0] if lo <= t0 <= hi else []
    j0, j1 = math.ceil((lo - t0) / period), math.floor((hi - t0) / period)
    return [t0 + j * period for j in range(j0, j1 + 1)]


def pole_distance(spec: RadialProfileSpec, theta):
    lat = _pole_lattice(spec)
    theta = np.asarray(theta, dtype=float)
    if lat is None:
        return np.full_like(theta, np.inf)
    t0, period = lat
    d = theta - t0
    if math.isinf(period):
        return np.abs(d)
    return np.abs(d - np.rint(d / period) * period)


def validity(spec: RadialProfileSpec, lo: float = PRINCIPAL[0], hi: float = PRINCIPAL[1]):
    """Maximal open pole-free subintervals of (lo, hi)."""
    cuts = [t for t in poles(spec, lo, hi) if lo < t < hi]
    edges = [lo, *cuts, hi]
    return [ThetaInterval(edges[i], edges[i + 1]) for i in range(len(edges) - 1)
            if edges[i + 1] > edges[i]]


def principal_interval(spec: RadialProfileSpec, lo: float = PRINCIPAL[0],
                       hi: float = PRINCIPAL[1]) -> ThetaInterval | None:
    """The validity interval containing theta = 0 (or nearest to it)."""
    ivs = validity(spec, lo, hi)
    if not ivs:
        return None
    return min(ivs, key=lambda iv: 0.0 if 0.0 in iv else min(abs(iv.lo), abs(iv.hi)))


def _check_theta(spec, theta):
    if not np.all(np.isfinite(theta)):
        raise DomainError("theta must be finite")
    if np.any(pole_distance(spec, theta) < POLE_TOL):
        raise PoleError(f"{spec.family.value} has a pole at the requested angle")


def eval_f(spec: RadialProfileSpec, theta):
    """Profile value f(theta)."""
    scalar = np.ndim(theta) == 0
    theta = np.asarray(theta, dtype=float)
    _check_theta(spec, theta)
    P, fam = spec.params, spec.family
    if fam is Family.F0:
        val = np.full_like(theta, P["Cconst"])
    elif fam is Family.F1:
        half = 0.5 * jacobi_am(P["rate"] * theta + P["shift"], P["k"])
        val = P["alpha"] - P["beta"] / np.tan(half) ** 2
    elif fam is Family.F2:
        val = -2.0 - 6.0 / (theta + spec.C) ** 2
    elif fam is Family.F3:
        phi = jacobi_am(P["rate"] * theta + P["shift"], P["k"])
        val = P["c"] - (P["c"] - P["b"]) * np.sin(phi) ** 2
    elif fam is Family.F4:
        phi = jacobi_am(P["rate"] * theta + P["shift"], P["k"])
        val = P["a"] - (P["b"] - P["a"]) * np.tan(phi) ** 2
    elif fam is Family.F5:
        val = P["base"] - 3.0 * P["s"] * np.tan(P["rate"] * theta + spec.C) ** 2
    else:
        g = P["A6"] * (8.0**0.25 * theta + spec.C)
        sq = np.tanh(g) ** 2 if fam is Family.F6 else 1.0 / np.tanh(g) ** 2
        val = P["base"] - 3.0 * P["s"] * sq
    return float(val) if scalar else val


def eval_df(spec: RadialProfileSpec, theta):
    """Analytic derivative f'(theta)."""
    scalar = np.ndim(theta) == 0
    theta = np.asarray(theta, dtype=float)
    _check_theta(spec, theta)
    P, fam = spec.params, spec.family
    if fam is Family.F0:
        val = np.zeros_like(theta)
    elif fam in (Family.F1, Family.F3, Family.F4):
        arg = P["rate"] * theta + P["shift"]
        phi = jacobi_am(arg, P["k"])
        dn = np.sqrt(1.0 - (P["k"] * np.sin(phi)) ** 2)
        if fam is Family.F1:
            h = 0.5 * phi
            val = P["beta"] * np.cos(h) / np.sin(h) ** 3 * dn * P["rate"]
        elif fam is Family.F3:
            val = -(P["c"] - P["b"]) * np.sin(2.0 * phi) * dn * P["rate"]
        else:
            val = -2.0 * (P["b"] - P["a"]) * np.sin(phi) / np.cos(phi) ** 3 * dn * P["rate"]
    elif fam is Family.F2:
        val = 12.0 / (theta + spec.C) ** 3
    elif fam is Family.F5:
        w = P["rate"] * theta + spec.C
        val = -6.0 * P["s"] * P["rate"] * np.tan(w) / np.cos(w) ** 2
    else:
        g = P["A6"] * (8.0**0.25 * theta + spec.C)
        if fam is Family.F6:
            val = -6.0 * P["s"] * P["rate"] * np.tanh(g) / np.cosh(g) ** 2
        else:
            val = 6.0 * P["s"] * P["rate"] * np.cosh(g) / np.sinh(g) ** 3
    return float(val) if scalar else val


def tilde_theta(x, y):
    """Angle in [0, 2 pi) built piecewise from arctan, continuous off R_0."""
    scalar = np.ndim(x) == 0 and np.ndim(y) == 0
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    if np.any((x == 0.0) & (y == 0.0)):
        raise DomainError("tilde_theta undefined at the origin")
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        q1 = np.arctan(y / x)
        q2 = math.pi / 2 - np.arctan(x / y)
        q3 = math.pi + np.arctan(y / x)
        q4 = 3.0 * math.pi / 2 - np.arctan(x / y)
    out = np.select(
        [(x > 0) & (y >= 0), (x <= 0) & (y > 0), (x < 0) & (y <= 0)],
        [q1, q2, q3],
        default=q4,
    )
    return float(out) if scalar else out


def _radii(x, y):
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    r2 = x * x + y * y
    if np.any(r2 == 0.0):
        raise DomainError("fields are singular at the origin")
    return x, y, r2


def _pressure_constant(spec: RadialProfileSpec) -> float:
    # constant profiles carry their own C1 (the singular-solution pressure law)
    if spec.family is Family.F0:
        c = spec.params["Cconst"]
        return -(c * c + 4.0 * c) / 2.0
    return spec.C1


def _field(spec, x, y, r2, kappa, scalar):
    u = x * kappa / r2
    v = y * kappa / r2
    p = (2.0 * kappa + _pressure_constant(spec)) / r2
    if scalar:
        return float(u), float(v), float(p)
    return u, v, p


def eval_field_radial(spec: RadialProfileSpec, x, y, extended: bool = False):
    """(u, v, p) of the radial solution.

    Non-extended evaluation uses theta = arctan(y/x) and needs x > 0; the
    extended form uses tilde_theta on the plane minus the origin.
    """
    scalar = np.ndim(x) == 0 and np.ndim(y) == 0
    x, y, r2 = _radii(x, y)
    if extended:
        theta = tilde_theta(x, y)
    else:
        if np.any(x <= 0.0):
            raise DomainError("non-extended radial fields need x > 0")
        theta = np.arctan(y / x)
    return _field(spec, x, y, r2, eval_f(spec, theta), scalar)


def eval_field_reciprocal(spec: RadialProfileSpec, x, y):
    """Radial field built from the x/y invariant: kappa = f(arctan(x/y))."""
    scalar = np.ndim(x) == 0 and np.ndim(y) == 0
    x, y, r2 = _radii(x, y)
    if np.any(y == 0.0):
        raise DomainError("reciprocal form is undefined on the x-axis")
    return _field(spec, x, y, r2, eval_f(spec, np.arctan(x / y)), scalar)


def reciprocal_equivalent_C(spec: RadialProfileSpec, x: float, y: float) -> float:
    """Free constant of the arctan(y/x) form matching the reciprocal F2 field.

    arctan(x/y) = sgn(x/y) pi/2 - arctan(y/x), and f2 is even about its pole.
    """
    if spec.family is not Family.F2:
        raise ParameterError("closed-form matching implemented for F2 only")
    return -spec.C - math.copysign(math.pi / 2, x / y)


@dataclass(frozen=True)
class GlobalSolution:
    n_periods: int
    a: float
    b: float
    c: float
    source: ParameterPoint
    C: float
    flux: float
    condition_residual: float

    @property
    def flux_ok(self) -> bool:
        """4 + flux/pi < n^2."""
        return 4.0 + self.flux / math.pi < self.n_periods**2

    @property
    def spec(self) -> RadialProfileSpec:
        return RadialProfileSpec.build(Family.F3, self.source.C1, self.source.C2, self.C)


def periodicity_residual(a: float, b: float, c: float, n: int) -> float:
    """pi sqrt((c-a)/6) - n K(sqrt((c-b)/(c-a)))."""
    return math.pi * math.sqrt((c - a) / 6.0) - n * ellint_K(math.sqrt((c - b) / (c - a)))


def default_seed(n: int) -> float:
    # C1 well inside the range 2 - n^4/8 > C1 where a bracket exists
    return 2.0 - n**4 / 4.0


def global_periodic_solve(n: int, seed: float | None = None, C: float = 0.0) -> GlobalSolution:
    """Find roots a < b < c of P3 satisfying the 2 pi / n periodicity condition.

    ``seed`` fixes C1 < 2; C2 is then located inside region II by Brent's
    method.  Near C2 = L-(C1) the modulus tends to 1 and the residual to
    -inf; at C2 = L+(C1) it equals pi (sqrt(s/2) - n/2), s = sqrt(2(2-C1)).
    """
    if int(n) != n or n < 1:
        raise ParameterError("number of periods must be a positive integer")
    n = int(n)
    C1 = default_seed(n) if seed is None else float(seed)
    if not C1 < 2.0:
        raise NoBracketError("seed C1 must be below 2 for region II to exist")
    lp, lm = cubic.boundary_curves(C1)
    width = lp - lm
    lo, hi = lm + 1e-9 * width, lp - 1e-9 * width

    def resid(C2):
        r = cubic.solve_cubic(ParameterPoint(C1, C2))
        if not isinstance(r, cubic.ThreeDistinctReal):
            raise NoBracketError("left region II while bracketing")
        return periodicity_residual(r.a, r.b, r.c, n)

    f_lo, f_hi = resid(lo), resid(hi)
    if not (f_lo < 0.0 < f_hi):
        raise NoBracketError(
            f"no sign change for n={n}, C1={C1}: residuals {f_lo:.3e}, {f_hi:.3e}")
    C2 = optimize.brentq(resid, lo, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps, maxiter=500)
    roots = cubic.solve_cubic(ParameterPoint(C1, C2))
    a, b, c = roots.a, roots.b, roots.c
    sol = GlobalSolution(n, a, b, c, ParameterPoint(C1, C2), float(C), math.nan,
                         periodicity_residual(a, b, c, n))
    return GlobalSolution(**{**sol.__dict__, "flux": flux(sol)})


def flux(sol) -> float:
    """Integral of the profile over one turn [0, 2 pi)."""
    spec = sol.spec if isinstance(sol, GlobalSolution) else sol
    if spec.family is Family.F0:
        return 2.0 * math.pi * spec.params["Cconst"]
    val, _ = integrate.quad(lambda t: eval_f(spec, t), 0.0, 2.0 * math.pi,
                            epsabs=1e-10, epsrel=1e-12, limit=400)
    return val
