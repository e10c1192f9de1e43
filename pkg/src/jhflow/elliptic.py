"""Real elliptic integrals, the Jacobi amplitude and Weierstrass' P with g2 = 0.

All routines accept scalars or numpy arrays for the argument and a scalar
modulus/invariant.  Scalars in give Python floats out.

F and K use Carlson's symmetric integral R_F (duplication algorithm).  The
amplitude is seeded by the arithmetic-geometric mean (descending Landen)
scheme and polished by Newton steps on F, with dn as the derivative.

P(z; 0, g3) uses the Jacobi form valid for a negative lattice discriminant,

    P(z) = e2 + H2 * cot^2(am(2 sqrt(H2) z, k) / 2),

where e2 is the real root of 4t^3 - g3, H2 = sqrt(3) |e2| and
k^2 = 1/2 - 3 e2 / (4 H2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PoleError

K_MAX = 1.0 - 1e-12
POLE_TOL = 1e-10

_EPS = np.finfo(float).eps


def _out(arr, scalar):
    return float(arr) if scalar else arr


def _check_modulus(k: float) -> float:
    k = float(k)
    if not math.isfinite(k) or k < 0.0 or k > K_MAX:
        raise DomainError(f"modulus k={k!r} outside [0, 1)")
    return k


def carlson_rf(x, y, z):
    """Carlson's R_F(x, y, z) for non-negative arguments, at most one zero."""
    x, y, z = (np.asarray(v, dtype=float) for v in (x, y, z))
    x, y, z = np.broadcast_arrays(x, y, z)
    a0 = (x + y + z) / 3.0
    q = (3.0 * _EPS) ** (-1.0 / 8.0) * np.maximum(
        np.abs(a0 - x), np.maximum(np.abs(a0 - y), np.abs(a0 - z))
    )
    xn, yn, zn, an = x.copy(), y.copy(), z.copy(), a0.copy()
    f = np.ones_like(a0)
    for _ in range(64):
        if np.all(q < np.abs(an)):
            break
        sx, sy, sz = np.sqrt(xn), np.sqrt(yn), np.sqrt(zn)
        lam = sx * sy + sx * sz + sy * sz
        xn = (xn + lam) / 4.0
        yn = (yn + lam) / 4.0
        zn = (zn + lam) / 4.0
        an = (an + lam) / 4.0
        q = q / 4.0
        f = f * 4.0
    X = (a0 - x) / (an * f)
    Y = (a0 - y) / (an * f)
    Z = -(X + Y)
    e2 = X * Y - Z * Z
    e3 = X * Y * Z
    series = (
        1.0
        + e3 * (1.0 / 14 + 3.0 * e3 / 104)
        + e2 * (-1.0 / 10 + e2 / 24 - 3.0 * e3 / 44 - 5.0 * e2 * e2 / 208 + e2 * e3 / 16)
    )
    return series / np.sqrt(an)


def ellint_K(k: float) -> float:
    """Complete elliptic integral of the first kind, K(k) = F(pi/2, k)."""
    k = _check_modulus(k)
    if k == 0.0:
        return math.pi / 2
    return float(carlson_rf(0.0, 1.0 - k * k, 1.0))


def ellint_F(phi, k: float):
    """Incomplete elliptic integral of the first kind for any real phi.

    Uses F(phi + j*pi, k) = F(phi, k) + 2 j K(k) to reduce to |phi| <= pi/2.
    """
    k = _check_modulus(k)
    scalar = np.ndim(phi) == 0
    phi = np.asarray(phi, dtype=float)
    if not np.all(np.isfinite(phi)):
        raise DomainError("phi must be finite")
    if k == 0.0:
        return _out(phi.copy(), scalar)
    j = np.rint(phi / math.pi)
    r = phi - j * math.pi
    s, c = np.sin(r), np.cos(r)
    val = s * carlson_rf(c * c, 1.0 - (k * s) ** 2, 1.0)
    val = val + 2.0 * j * ellint_K(k)
    return _out(val, scalar)


def _am_agm(u, k):
    # descending Landen / AGM seed, accurate to a few ulps for |u| <= K
    a, b, c = 1.0, math.sqrt(1.0 - k * k), k
    a_seq, c_seq = [a], [c]
    while abs(c) > _EPS and len(a_seq) < 40:
        a, b, c = (a + b) / 2.0, math.sqrt(a * b), (a - b) / 2.0
        a_seq.append(a)
        c_seq.append(c)
    n = len(a_seq) - 1
    phi = (2.0**n) * a_seq[n] * u
    for i in range(n, 0, -1):
        phi = 0.5 * (phi + np.arcsin(np.clip(c_seq[i] / a_seq[i] * np.sin(phi), -1.0, 1.0)))
    return phi


def jacobi_am(m, k: float):
    """Jacobi amplitude: the phi with F(phi, k) = m.

    The argument is reduced modulo 2K(k) using am(m + 2K) = am(m) + pi.
    """
    k = _check_modulus(k)
    scalar = np.ndim(m) == 0
    m = np.asarray(m, dtype=float)
    if not np.all(np.isfinite(m)):
        raise DomainError("argument must be finite")
    if k == 0.0:
        return _out(m.copy(), scalar)
    big_k = ellint_K(k)
    j = np.rint(m / (2.0 * big_k))
    mr = m - 2.0 * j * big_k
    phi = _am_agm(mr, k)
    for _ in range(2):
        resid = ellint_F(phi, k) - mr
        phi = phi - resid * np.sqrt(1.0 - (k * np.sin(phi)) ** 2)
    bad = np.abs(phi) > math.pi / 2 + 1e-12
    if np.any(bad):
        phi = np.where(bad, _am_bisect(mr, k), phi)
    return _out(phi + j * math.pi, scalar)


def _am_bisect(mr, k):
    lo = np.full_like(mr, -math.pi / 2)
    hi = np.full_like(mr, math.pi / 2)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        below = ellint_F(mid, k) < mr
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi)


def jacobi_dn(m, k: float):
    """dn(m, k) = d am / dm = sqrt(1 - k^2 sin^2 am(m, k))."""
    phi = jacobi_am(m, k)
    return np.sqrt(1.0 - (k * np.sin(phi)) ** 2) if np.ndim(phi) else math.sqrt(
        1.0 - (k * math.sin(phi)) ** 2
    )


@dataclass(frozen=True)
class WeierstrassInvariants:
    g2: float
    g3: float

    def __post_init__(self):
        if self.g2 != 0.0:
            raise DomainError("only invariants (0, g3) are supported")
        if not math.isfinite(self.g3):
            raise DomainError("g3 must be finite")


@dataclass(frozen=True)
class _JacobiForm:
    e2: float
    h2: float
    k: float
    period: float  # real period; poles sit on its integer multiples


def _jacobi_form(g3: float) -> _JacobiForm:
    e2 = math.copysign(abs(g3 / 4.0) ** (1.0 / 3.0), g3)
    h2 = math.sqrt(3.0) * abs(e2)
    k = math.sqrt(0.5 - 3.0 * e2 / (4.0 * h2))
    return _JacobiForm(e2, h2, k, 2.0 * ellint_K(k) / math.sqrt(h2))


def _as_inv(inv) -> WeierstrassInvariants:
    if isinstance(inv, WeierstrassInvariants):
        return inv
    return WeierstrassInvariants(0.0, float(inv))


def weierstrass_period(inv) -> float:
    """Real period of P(.; 0, g3); infinite for g3 = 0."""
    inv = _as_inv(inv)
    if inv.g3 == 0.0:
        return math.inf
    return _jacobi_form(inv.g3).period


def weierstrass_poles(inv, lo: float, hi: float) -> list[float]:
    """Real poles of P(.; 0, g3) inside [lo, hi]."""
    period = weierstrass_period(inv)
    if math.isinf(period):
        return [0.0] if lo <= 0.0 <= hi else []
    j0, j1 = math.ceil(lo / period), math.floor(hi / period)
    return [j * period for j in range(j0, j1 + 1)]


def _reduce(tau, inv):
    # returns the Jacobi form, half-angle psi with |psi| <= pi/4, parity of the shift, u
    form = _jacobi_form(inv.g3)
    dist = np.abs(tau - np.rint(tau / form.period) * form.period)
    if np.any(dist < POLE_TOL):
        raise PoleError("argument within 1e-10 of a lattice point")
    u = 2.0 * math.sqrt(form.h2) * tau
    big_k = ellint_K(form.k)
    j = np.rint(u / (2.0 * big_k))
    phi = jacobi_am(u - 2.0 * j * big_k, form.k)
    odd = np.mod(j, 2.0) == 1.0
    return form, 0.5 * phi, odd, u


def weierstrass_p(tau, inv):
    """P(tau; 0, g3) for real tau away from the real pole lattice."""
    inv = _as_inv(inv)
    scalar = np.ndim(tau) == 0
    tau = np.asarray(tau, dtype=float)
    if inv.g3 == 0.0:
        if np.any(np.abs(tau) < POLE_TOL):
            raise PoleError("argument within 1e-10 of the pole at 0")
        return _out(1.0 / (tau * tau), scalar)
    form, psi, odd, _ = _reduce(tau, inv)
    t = np.tan(psi)
    with np.errstate(divide="ignore"):
        # np.where evaluates both branches; the unused one may divide by zero
        ratio = np.where(odd, t * t, 1.0 / (t * t))
    return _out(form.e2 + form.h2 * ratio, scalar)


def weierstrass_p_prime(tau, inv):
    """Derivative of P(tau; 0, g3) with respect to tau."""
    inv = _as_inv(inv)
    scalar = np.ndim(tau) == 0
    tau = np.asarray(tau, dtype=float)
    if inv.g3 == 0.0:
        if np.any(np.abs(tau) < POLE_TOL):
            raise PoleError("argument within 1e-10 of the pole at 0")
        return _out(-2.0 / tau**3, scalar)
    form, psi, odd, u = _reduce(tau, inv)
    s, c = np.sin(psi), np.cos(psi)
    dn = np.sqrt(1.0 - (form.k * np.sin(2.0 * psi)) ** 2)
    # d/dphi of cot^2(phi/2) = -cot(phi/2) csc^2(phi/2); the odd branch is tan^2
    with np.errstate(divide="ignore"):
        dratio = np.where(odd, s / c**3, -c / s**3)
    return _out(form.h2 * dratio * dn * 2.0 * math.sqrt(form.h2), scalar)
