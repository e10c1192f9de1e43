import math

import numpy as np
import pytest

from jhflow import nonradial as nr
from jhflow import radial
from jhflow import verify as V
from jhflow.errors import DomainError, ParameterError, StencilError
from jhflow.radial import Family, RadialProfileSpec
from jhflow.verify import FieldEvaluator


def random_cone_points(rng, lo, hi, n=100, margin=0.1):
    w = hi - lo
    th = rng.uniform(lo + margin * w, hi - margin * w, n)
    r = rng.uniform(0.3, 3.0, n)
    return r * np.cos(th), r * np.sin(th)


def zero_field():
    def fn(x, y):
        z = np.zeros_like(np.asarray(x, dtype=float))
        return z, z, z
    return FieldEvaluator(fn, lambda x, y: np.zeros(np.shape(x), dtype=int), 0.0, "zero")


def test_landau_and_zero():
    rep = V.pde_residual(FieldEvaluator.landau(1.0, 1.0), 2.0, 1.0)
    assert rep.max_normalized < 1e-9
    rep = V.pde_residual(zero_field(), 0.7, -0.2, step=1e-2)
    assert (rep.momentum_x, rep.momentum_y, rep.divergence) == (0.0, 0.0, 0.0)
    assert rep.normalization == 1.0


def test_convergence_order():
    spec = RadialProfileSpec.build(Family.F3, -1.5, -14.0)
    fe = FieldEvaluator.radial(spec)
    errs = [abs(V.pde_residual(fe, 1.0, 0.3, step=h).momentum_x) for h in (0.2, 0.1, 0.05)]
    assert errs[0] / errs[1] > 16 and errs[1] / errs[2] > 16


def test_broken_field_fails():
    fe = FieldEvaluator.landau(1.0, 1.0).scaled(1.01)
    assert V.pde_residual(fe, 2.0, 1.0).max_normalized > 1e-3


def test_stencil_errors():
    fe = FieldEvaluator.radial(RadialProfileSpec.build(Family.F2, C=0.0))
    with pytest.raises(StencilError):
        V.pde_residual(fe, 1.0, 0.01, step=0.05)
    with pytest.raises(StencilError):
        V.pde_residual(fe, 1.0, 0.0)
    # default steps shrink near the pole instead of failing
    assert V.pde_residual(fe, 1.0, 0.05).max_normalized < 1e-6
    with pytest.raises(StencilError):
        V.pde_residual(FieldEvaluator.landau(1, 1), 0.0, 0.0)


def test_angular_residual_examples():
    assert V.angular_ode_residual(RadialProfileSpec.build(Family.F2, C=1.0), 0.3) < 1e-8
    s3 = RadialProfileSpec.build(Family.F3, -1.5, -14.0)
    assert max(V.angular_ode_residual(s3, t) for t in np.linspace(-1.5, 1.5, 31)) < 1e-7
    with pytest.raises(ParameterError):
        V.angular_ode_residual(RadialProfileSpec.build(Family.F0, C=-1.0), 0.0)
    with pytest.raises(DomainError):
        V.angular_ode_residual(RadialProfileSpec.build(Family.F2, C=0.0), 0.0)


def test_first_integral_examples():
    s3 = RadialProfileSpec.build(Family.F3, -1.5, -14.0)
    assert V.first_integral_residual(s3, 0.2) < 1e-7
    assert V.first_integral_residual(RadialProfileSpec.build(Family.F2, C=1.0), 0.5) < 1e-7
    # theta = 0 is a turning point with f = c = 2, a root of P3
    assert radial.eval_f(s3, 0.0) == pytest.approx(2.0)
    assert V.first_integral_residual(s3, 0.0) < 1e-12


def test_first_integral_derivative_identity():
    # d/dtheta of the first-integral expression equals 2 f' (f'' + f^2 + 4f + 2 C1)
    # for any C1, so check it with a deliberately wrong constant
    s = RadialProfileSpec.build(Family.F4, -1.5, -14.0)
    C1 = s.C1 + 0.37

    def fi(t):
        f, d1, _ = V._theta_derivs(s, t, 1e-2)
        return d1 * d1 + (2 / 3) * f**3 + 4 * f * f + 4 * C1 * f + (2 / 3) * s.C2

    for t in (-0.4, 0.1, 0.6):
        h = 1e-4
        lhs = (fi(t + h) - fi(t - h)) / (2 * h)
        f, d1, d2 = V._theta_derivs(s, t, 1e-2)
        rhs = 2 * d1 * (d2 + f * f + 4 * f + 2 * C1)
        assert lhs == pytest.approx(rhs, abs=1e-6 * max(1, abs(rhs)))


def test_ode_oracle_examples():
    assert V.ode_oracle_compare(RadialProfileSpec.build(Family.F0, C=-1.0), 0, 1, 1e-3) == 0.0
    s3 = RadialProfileSpec.build(Family.F3, -1.5, -14.0)
    assert V.ode_oracle_compare(s3, -0.5, 0.5, 1e-4) < 1e-6
    assert V.ode_oracle_compare(RadialProfileSpec.build(Family.F6, 0.0), -0.4, 0.4, 1e-4) < 1e-6
    with pytest.raises(DomainError):
        V.ode_oracle_compare(RadialProfileSpec.build(Family.F2, C=0.0), -0.5, 0.5)


def test_ode_oracle_fourth_order():
    s3 = RadialProfileSpec.build(Family.F3, -1.5, -14.0, C=0.2)
    e1 = V.ode_oracle_compare(s3, 0.0, 1.0, 0.04)
    e2 = V.ode_oracle_compare(s3, 0.0, 1.0, 0.02)
    assert 12 < e1 / e2 < 20


@pytest.mark.parametrize("n,C", [(2, 0.0), (3, 0.0), (3, 0.3), (4, 0.1)])
def test_smoothness_global(n, C):
    sol = radial.global_periodic_solve(n, C=C)
    mism, scale = V.smoothness_across_ray(sol, 3, with_scale=True)
    assert all(m < 1e-7 * s for m, s in zip(mism, scale))


def test_smoothness_counterexample_and_constant():
    s2 = RadialProfileSpec.build(Family.F2, C=-math.pi)
    mism, scale = V.smoothness_across_ray(s2, 1, with_scale=True)
    assert mism[0] < 1e-12  # f2 is even about its pole, values match
    assert mism[1] > 1e-2 * scale[1]
    assert mism[1] == pytest.approx(2 * 12 / math.pi**3, rel=1e-9)
    assert V.smoothness_across_ray(RadialProfileSpec.build(Family.F0, C=-1.0), 4) == [0.0] * 5
    with pytest.raises(ValueError):
        V.smoothness_across_ray(s2, 5)


def test_lienard_residual_examples():
    assert V.lienard_residual(nr.NonRadialSpec.weierstrass(5.0, 0.0, 0.0), 0.3) < 1e-13
    deg = nr.NonRadialSpec.degenerate(5.0, 0.4)
    assert V.lienard_residual(deg, np.linspace(-1, 1, 21)) < 1e-10
    assert V.lienard_residual(nr.NonRadialSpec.weierstrass(5.0, 4.0, 0.3), 0.2) < 1e-8


def test_constraint_check_examples(rng):
    s3 = RadialProfileSpec.build(Family.F3, -1.5, -14.0)
    x, y = random_cone_points(rng, -1.5, 1.5)
    assert V.constraint_check(FieldEvaluator.radial(s3), 0.0, x, y) < 1e-14
    sp = nr.NonRadialSpec.weierstrass(5.0, 1.0, 0.2)
    x, y = random_cone_points(rng, *nr.principal_window(sp))
    assert V.constraint_check(FieldEvaluator.nonradial(sp), 5.0, x, y) < 1e-13
    assert V.constraint_check(FieldEvaluator.landau(0.7, 2.5), 2.5, x, y) < 1e-13
    with pytest.raises(DomainError):
        V.constraint_check(FieldEvaluator.radial(s3), 0.0, -1.0, 0.0)


def all_evaluators():
    sol = radial.global_periodic_solve(3)
    out = [
        (FieldEvaluator.radial(RadialProfileSpec.build(Family.F3, -1.5, -14.0)), (-1.5, 1.5)),
        (FieldEvaluator.radial(sol.spec, extended=True), (0.0, 2 * math.pi)),
        (FieldEvaluator.reciprocal(RadialProfileSpec.build(Family.F2, C=1.0)), (0.0, 1.5)),
        (FieldEvaluator.reciprocal(RadialProfileSpec.build(Family.F4, -1.5, -14.0)), (0.3, 2.8)),
        (FieldEvaluator.landau(1.0, -2.0), (0.0, 2 * math.pi)),
        (FieldEvaluator.degenerate(5.0, 0.4), (-1.5, 1.5)),
    ]
    for sp in (nr.NonRadialSpec.weierstrass(5.0, 1.0, 0.2),
               nr.NonRadialSpec.weierstrass(-3.0, 4.0, 0.3),
               nr.NonRadialSpec.linear(1.5, -1.0, -1)):
        out.append((FieldEvaluator.nonradial(sp), nr.principal_window(sp)))
    return out


def test_every_field_passes_pde(rng):
    for fe, (lo, hi) in all_evaluators():
        x, y = random_cone_points(rng, lo, hi)
        worst = max(V.pde_residual(fe, a, b).max_normalized for a, b in zip(x, y))
        assert worst < 1e-6, fe.name


def test_scaling_examples(rng):
    for fe, (lo, hi) in all_evaluators():
        x, y = random_cone_points(rng, lo, hi, 50)
        u, v, p = fe(x, y)
        mag = max(1.0, np.max(np.abs(u)), np.max(np.abs(v)), np.max(np.abs(p)))
        assert V.scaling_check(fe, 2.0, x, y) < 1e-12 * mag, fe.name
        assert V.scaling_check(fe, 1.0, x, y) == 0.0
    sp = nr.NonRadialSpec.weierstrass(5.0, 1.0, 0.2)
    x, y = random_cone_points(rng, *nr.principal_window(sp), 50)
    assert V.scaling_check(FieldEvaluator.nonradial(sp), 10.0, x, y) < 1e-11


def test_numeric_lienard_has_no_field():
    with pytest.raises(ParameterError):
        FieldEvaluator.nonradial(nr.NonRadialSpec.numeric(1.0, 0.0))
