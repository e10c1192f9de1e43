"""Independent numerical checks of the exact solutions.

PDE residuals come from finite differences of evaluated fields, never from
the closed-form derivatives, so they test the field formulas end to end.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.polynomial import chebyshev

from . import nonradial as nr
from . import radial
from .errors import BlowUpError, DomainError, ParameterError, StencilError
from .radial import Family, GlobalSolution, RadialProfileSpec

DEFAULT_REL_STEP = 1e-2
THETA_STEP = 1e-2


@dataclass(frozen=True)
class FieldEvaluator:
    """A point-to-(u, v, p) map with its region of validity.

    ``region`` labels each point with the index of the smooth piece it lies
    in, or -1 outside the domain; a stencil is usable only when every node
    carries the same non-negative label.
    """

    fn: Callable
    region: Callable
    C0: float = 0.0
    name: str = "field"

    def __call__(self, x, y):
        return self.fn(x, y)

    def contains(self, x, y):
        return np.asarray(self.region(x, y)) >= 0

    def scaled(self, factor_u: float) -> "FieldEvaluator":
        """Same field with u multiplied by ``factor_u``; used to build broken solutions."""
        def fn(x, y):
            u, v, p = self.fn(x, y)
            return u * factor_u, v, p
        return FieldEvaluator(fn, self.region, self.C0, f"{self.name}*{factor_u:g}")

    # factories

    @classmethod
    def radial(cls, spec: RadialProfileSpec, extended: bool = False):
        if extended:
            ivs = radial.validity(spec, 0.0, 2.0 * math.pi)
            if len(ivs) == 1:
                ivs = [radial.ThetaInterval(0.0, 2.0 * math.pi, lo_open=False)]

            def region(x, y):
                x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
                ok = (x != 0.0) | (y != 0.0)
                th = radial.tilde_theta(np.where(ok, x, 1.0), np.where(ok, y, 0.0))
                return np.where(ok, _interval_index(spec, th, ivs), -1)
        else:
            ivs = radial.validity(spec)

            def region(x, y):
                x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
                ok = x > 0.0
                th = np.arctan(y / np.where(ok, x, 1.0))
                return np.where(ok, _interval_index(spec, th, ivs), -1)

        return cls(lambda x, y: radial.eval_field_radial(spec, x, y, extended), region, 0.0,
                   f"radial {spec.family.value}{' extended' if extended else ''}")

    @classmethod
    def reciprocal(cls, spec: RadialProfileSpec):
        ivs = radial.validity(spec)

        def region(x, y):
            x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
            ok = y > 0.0
            th = np.arctan(x / np.where(ok, y, 1.0))
            return np.where(ok, _interval_index(spec, th, ivs), -1)

        return cls(lambda x, y: radial.eval_field_reciprocal(spec, x, y), region, 0.0,
                   f"reciprocal {spec.family.value}")

    @classmethod
    def nonradial(cls, spec: nr.NonRadialSpec):
        if spec.variant is nr.Variant.NumericLienard:
            raise ParameterError("NumericLienard profiles have no field evaluator")
        wins = nr.pole_free_windows(spec)

        def region(x, y):
            x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
            ok = x > 0.0
            th = np.arctan(y / np.where(ok, x, 1.0))
            idx = np.full(th.shape, -1)
            for i, (lo, hi) in enumerate(wins):
                idx = np.where((th > lo) & (th < hi) & (_nr_pole_gap(spec, th) > 1e-9), i, idx)
            return np.where(ok, idx, -1)

        return cls(lambda x, y: nr.nonradial_field(spec, x, y), region, spec.C0,
                   f"nonradial {spec.variant.value}")

    @classmethod
    def degenerate(cls, C0: float, C: float):
        spec = nr.NonRadialSpec.degenerate(C0, C)
        fe = cls.nonradial(spec)
        return cls(lambda x, y: nr.degenerate_field(C0, C, x, y), fe.region, C0, "degenerate")

    @classmethod
    def landau(cls, C1: float, C2: float):
        def region(x, y):
            x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
            return np.where((x != 0.0) | (y != 0.0), 0, -1)

        return cls(lambda x, y: nr.landau_field(C1, C2, x, y), region, C2, "landau")


def _interval_index(spec, theta, ivs):
    theta = np.asarray(theta, dtype=float)
    idx = np.full(theta.shape, -1)
    gap = radial.pole_distance(spec, theta)
    for i, iv in enumerate(ivs):
        lo_ok = theta > iv.lo if iv.lo_open else theta >= iv.lo
        hi_ok = theta < iv.hi if iv.hi_open else theta <= iv.hi
        idx = np.where(lo_ok & hi_ok & (gap > radial.POLE_TOL), i, idx)
    return idx


def _nr_pole_gap(spec, theta):
    theta = np.asarray(theta, dtype=float)
    ps = nr.pole_thetas(spec, -math.pi / 2, math.pi / 2)
    if not ps:
        return np.full(theta.shape, np.inf)
    return np.min(np.abs(theta[..., None] - np.asarray(ps)), axis=-1)


@dataclass(frozen=True)
class ResidualReport:
    momentum_x: float
    momentum_y: float
    divergence: float
    constraint: float
    normalization: float

    @property
    def normalized(self) -> tuple[float, float, float]:
        n = self.normalization
        return (abs(self.momentum_x) / n, abs(self.momentum_y) / n, abs(self.divergence) / n)

    @property
    def max_normalized(self) -> float:
        return max(self.normalized)


# 4th-order central weights on offsets -2..2
_D1 = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0
_D2 = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0
_OFFS = np.array([-2.0, -1.0, 0.0, 1.0, 2.0])


def _richardson(d_h, d_half):
    # both estimates are 4th order; the combination cancels the h^4 term
    return (16.0 * d_half - d_h) / 15.0


def pde_residual(fe: FieldEvaluator, x: float, y: float, step: float | None = None
                 ) -> ResidualReport:
    """Stationary Navier-Stokes residuals of ``fe`` at (x, y).

    Derivatives use 4th-order central differences at spacings h and h/2,
    combined by Richardson extrapolation.  The default spacing is
    1e-2 times the local length scale, the smaller of r and the distance
    to the edge of the smooth piece containing the point.
    """
    x, y = float(x), float(y)
    r = math.hypot(x, y)
    if r == 0.0:
        raise StencilError("the origin is outside every domain")
    if step is None:
        step = DEFAULT_REL_STEP * _length_scale(fe, x, y, r)
    if not step > 0.0:
        raise ValueError("step must be positive")
    offs = np.concatenate([_OFFS * step, _OFFS * step / 2.0])
    xs = np.concatenate([x + offs, np.full(offs.size, x)])
    ys = np.concatenate([np.full(offs.size, y), y + offs])
    labels = np.asarray(fe.region(xs, ys))
    if labels.min() < 0 or labels.max() != labels.min():
        raise StencilError(f"stencil of size {step:.3g} at ({x:g}, {y:g}) leaves the domain")
    u, v, p = (np.asarray(a, dtype=float) for a in fe(xs, ys))

    def derivs(vals, axis):
        base = 10 * axis
        big, half = vals[base:base + 5], vals[base + 5:base + 10]
        d1 = _richardson(_D1 @ big / step, _D1 @ half / (step / 2.0))
        d2 = _richardson(_D2 @ big / step**2, _D2 @ half / (step / 2.0) ** 2)
        return d1, d2

    ux, uxx = derivs(u, 0)
    uy, uyy = derivs(u, 1)
    vx, vxx = derivs(v, 0)
    vy, vyy = derivs(v, 1)
    px, _ = derivs(p, 0)
    py, _ = derivs(p, 1)
    u0, v0 = u[2], v[2]
    mx = -(uxx + uyy) + u0 * ux + v0 * uy + px
    my = -(vxx + vyy) + u0 * vx + v0 * vy + py
    div = ux + vy
    norm = max(1.0, (u0 * u0 + v0 * v0) / r)
    return ResidualReport(float(mx), float(my), float(div), float(x * v0 - y * u0 - fe.C0),
                          float(norm))


def _length_scale(fe, x, y, r):
    # shrink towards the edge of the smooth piece by bisection on the label
    label = int(np.asarray(fe.region(x, y)))
    if label < 0:
        raise StencilError(f"({x:g}, {y:g}) is outside the domain")
    scale = r
    for _ in range(40):
        ang = np.linspace(0.0, 2.0 * math.pi, 16, endpoint=False)
        lab = np.asarray(fe.region(x + scale * np.cos(ang), y + scale * np.sin(ang)))
        if np.all(lab == label):
            return scale
        scale /= 2.0
    return scale


def _theta_step(spec: RadialProfileSpec, theta: float, step: float | None) -> float:
    gap = float(radial.pole_distance(spec, theta))
    h = THETA_STEP if step is None else step
    h = min(h, gap / 10.0)
    if not h > 0.0:
        raise DomainError("theta sits on a pole")
    return h


def _theta_derivs(spec, theta, h):
    def at(hh):
        vals = radial.eval_f(spec, theta + _OFFS * hh)
        return _D1 @ vals / hh, _D2 @ vals / hh**2

    d1a, d2a = at(h)
    d1b, d2b = at(h / 2.0)
    return radial.eval_f(spec, theta), _richardson(d1a, d1b), _richardson(d2a, d2b)


def _check_family(spec):
    if spec.family is Family.F0:
        raise ParameterError("constant profiles are verified through pde_residual")


def angular_ode_residual(spec: RadialProfileSpec, theta: float, step: float | None = None
                         ) -> float:
    """|f'' + f^2 + 4f + 2 C1| with f'' from finite differences."""
    _check_family(spec)
    f, _, d2 = _theta_derivs(spec, float(theta), _theta_step(spec, theta, step))
    return abs(d2 + f * f + 4.0 * f + 2.0 * spec.C1)


def first_integral_residual(spec: RadialProfileSpec, theta: float, step: float | None = None
                            ) -> float:
    """|(f')^2 + (2/3) f^3 + 4 f^2 + 4 C1 f + (2/3) C2| with f' from finite differences."""
    _check_family(spec)
    f, d1, _ = _theta_derivs(spec, float(theta), _theta_step(spec, theta, step))
    return abs(d1 * d1 + (2.0 / 3.0) * f**3 + 4.0 * f * f + 4.0 * spec.C1 * f
               + (2.0 / 3.0) * spec.C2)


def rk4_profile(C1: float, theta0: float, f0: float, df0: float, theta1: float, step: float):
    """RK4 for f'' = -f^2 - 4f - 2 C1; returns (thetas, f values)."""
    n = max(1, math.ceil(abs(theta1 - theta0) / step - 1e-12))
    h = (theta1 - theta0) / n

    def rhs(s):
        return np.array([s[1], -s[0] * s[0] - 4.0 * s[0] - 2.0 * C1])

    s = np.array([f0, df0], dtype=float)
    out = np.empty(n + 1)
    out[0] = f0
    for i in range(1, n + 1):
        k1 = rhs(s)
        k2 = rhs(s + 0.5 * h * k1)
        k3 = rhs(s + 0.5 * h * k2)
        k4 = rhs(s + h * k3)
        s = s + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(s)) or abs(s[0]) > nr.BLOWUP:
            raise BlowUpError(f"RK4 profile blew up near theta={theta0 + i * h:.6g}")
        out[i] = s[0]
    return theta0 + h * np.arange(n + 1), out


def ode_oracle_compare(spec: RadialProfileSpec, theta0: float, theta1: float,
                       step: float = 1e-4) -> float:
    """Max |closed form - RK4| over [theta0, theta1], RK4 seeded from closed-form data."""
    lo, hi = sorted((theta0, theta1))
    if radial.poles(spec, lo, hi):
        raise DomainError(f"[{lo:g}, {hi:g}] contains a pole of {spec.family.value}")
    f0 = radial.eval_f(spec, theta0)
    df0 = radial.eval_df(spec, theta0)
    # a constant c solves the second-order equation with its own C1 = -(c^2 + 4c)/2
    C1 = -(f0 * f0 + 4.0 * f0) / 2.0 if spec.family is Family.F0 else spec.C1
    th, f_rk = rk4_profile(C1, theta0, f0, df0, theta1, step)
    return float(np.max(np.abs(radial.eval_f(spec, th) - f_rk)))


SMOOTH_WINDOW = 0.5
_CHEB_NODES = 64
_CHEB_DEG = 20


def _one_sided(spec, a, b, order):
    # least-squares Chebyshev fit of the analytic f' on [a, b]; returns the
    # derivatives 1..order at both ends and their max modulus over the window
    t = np.cos(np.pi * (np.arange(_CHEB_NODES) + 0.5) / _CHEB_NODES)
    th = a + (b - a) * (t + 1.0) / 2.0
    ser = chebyshev.Chebyshev.fit(th, radial.eval_df(spec, th), _CHEB_DEG, domain=[a, b])
    grid = np.linspace(a, b, 257)
    ends, peaks = [], []
    for j in range(1, order + 1):
        d = ser.deriv(j - 1) if j > 1 else ser
        ends.append((float(d(a)), float(d(b))))
        peaks.append(float(np.max(np.abs(d(grid)))))
    return ends, peaks


def smoothness_across_ray(sol, order: int = 3, with_scale: bool = False):
    """One-sided derivative mismatches |f^(j)(0+) - f^(j)(2 pi-)| for j = 0..order.

    f is read directly; for j >= 1 a Chebyshev least-squares fit of the
    analytic f' on one-sided windows [0, L] and [2 pi - L, 2 pi] is
    differentiated.  With ``with_scale`` the per-order scale
    max(1, sup |f^(j)| over both windows) is returned alongside.
    """
    if not 0 <= order <= 4:
        raise ValueError("order must be in 0..4")
    spec = sol.spec if isinstance(sol, GlobalSolution) else sol
    two_pi = 2.0 * math.pi
    if spec.family is Family.F0:
        out = [0.0] * (order + 1)
        return (out, [1.0] * (order + 1)) if with_scale else out
    L = SMOOTH_WINDOW
    near = [t for t in radial.poles(spec, -1.0, 1.0)] + [
        t - two_pi for t in radial.poles(spec, two_pi - 1.0, two_pi + 1.0)]
    if near:
        L = min(L, 0.5 * min(abs(t) for t in near))
    f0, f1 = radial.eval_f(spec, 0.0), radial.eval_f(spec, two_pi)
    mism = [abs(f0 - f1)]
    scales = [max(1.0, abs(f0), abs(f1))]
    if order:
        right, pk_r = _one_sided(spec, 0.0, L, order)
        left, pk_l = _one_sided(spec, two_pi - L, two_pi, order)
        for j in range(order):
            mism.append(abs(right[j][0] - left[j][1]))
            scales.append(max(1.0, pk_r[j], pk_l[j]))
    return (mism, scales) if with_scale else mism


def lienard_residual(spec: nr.NonRadialSpec, theta, relative: bool = False) -> float:
    """Max |H'' - C0 H' + H^2 + 2 (Ct1 + 2) H| with analytic derivatives.

    ``relative`` divides by max(1, H^2), the size of the largest term, which
    keeps the figure meaningful close to a pole.
    """
    if spec.variant is nr.Variant.LinearOnly:
        return 0.0
    if spec.variant is nr.Variant.NumericLienard:
        raise ParameterError("no closed form for NumericLienard specs")
    theta = np.asarray(theta, dtype=float)
    if spec.variant is nr.Variant.Degenerate:
        H, dH, d2H = _degenerate_derivs(theta, spec.C0, spec.C)
    else:
        H, dH, d2H = nr.weierstrass_H_derivs(theta, spec.C0, spec.g3, spec.C)
    res = np.abs(d2H - spec.C0 * dH + H * H + 2.0 * (spec.Ctilde1 + 2.0) * H)
    if relative:
        res = res / np.maximum(1.0, H * H)
    return float(np.max(res))


def _degenerate_derivs(theta, C0, C):
    # H = -q / D^2 with D = 1 + C e^{-a theta}, a = C0/5
    q, a = 6.0 * C0 * C0 / 25.0, C0 / 5.0
    E = C * np.exp(-a * theta)
    D = 1.0 + E
    H = nr.degenerate_H(theta, C0, C)
    dH = -2.0 * q * a * E / D**3
    d2H = 2.0 * q * a * a * E / D**3 - 6.0 * q * a * a * E * E / D**4
    return H, dH, d2H


def constraint_check(fe: FieldEvaluator, C0_expected: float, x, y) -> float:
    """max |xv - yu - C0|."""
    if not np.all(fe.contains(x, y)):
        raise DomainError("point outside the field's domain")
    u, v, _ = fe(x, y)
    return float(np.max(np.abs(np.asarray(x) * v - np.asarray(y) * u - C0_expected)))


def scaling_check(fe: FieldEvaluator, lam: float, x, y) -> float:
    """max of |lam u(lam x) - u(x)|, |lam v(lam x) - v(x)|, |lam^2 p(lam x) - p(x)|."""
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    if not (np.all(fe.contains(x, y)) and np.all(fe.contains(lam * x, lam * y))):
        raise DomainError("point or its scaled image outside the field's domain")
    u, v, p = fe(x, y)
    us, vs, ps = fe(lam * x, lam * y)
    return float(max(np.max(np.abs(lam * us - u)), np.max(np.abs(lam * vs - v)),
                     np.max(np.abs(lam * lam * ps - p))))
