"""Special functions: Pochhammer symbols, theta laws, triple Gamma, modular."""

import cmath
from fractions import Fraction

import numpy as np
import pytest

from ellstab.core import (HBAR, GradedValue, Monomial, ParamPoint,
                          SingularityError, gamma3, qpoch_fin, qpoch_inf,
                          theta_modular_residual, theta_p)
from ellstab.sampling import sample_param_point

PP = sample_param_point(1, 3)
P = PP.p


def test_monomial_algebra():
    m = Monomial.var("a") * Monomial.var("b", 2)
    assert (m / m).is_one()
    assert (m ** Fraction(1, 2)).get("b") == 1
    assert Monomial.one() * m == m
    assert hash(m) == hash(Monomial({"a": 1, "b": 2}))


def test_qpoch_inf_zero_argument():
    assert qpoch_inf(0.0, 0.1) == 1.0


def test_qpoch_inf_telescoping():
    z = 0.37 + 0.21j
    assert abs(qpoch_inf(z, 0.1) / qpoch_inf(0.1 * z, 0.1) - (1 - z)) < 1e-14


def test_qpoch_inf_agrees_with_long_truncation():
    z, q = 0.3, 0.1
    direct = 1.0
    for n in range(40):
        direct *= 1 - z * q ** n
    assert abs(qpoch_inf(z, q) - direct) < 1e-14 * abs(direct)


def test_qpoch_inf_divergent_modulus():
    with pytest.raises(SingularityError):
        qpoch_inf(0.5, 1.2)


def test_qpoch_fin_small_cases():
    z, q = 0.5 + 0.1j, 0.1 + 0.05j
    assert qpoch_fin(z, q, 0) == 1.0
    assert abs(qpoch_fin(z, q, 2) - (1 - z) * (1 - q * z)) < 1e-15


def test_qpoch_fin_negative_inverse_identity():
    z, q = 0.5, 0.1
    for d in range(1, 5):
        prod = qpoch_fin(z, q, -d) * qpoch_fin(z * q ** (-d), q, d)
        assert abs(prod - 1) < 1e-12


def test_qpoch_fin_cocycle():
    z, q = 0.43 - 0.2j, 0.09 + 0.03j
    for d in range(-4, 5):
        for e in range(-4, 5):
            lhs = qpoch_fin(z, q, d) * qpoch_fin(z * q ** d, q, e)
            rhs = qpoch_fin(z, q, d + e)
            assert abs(lhs - rhs) < 1e-10 * max(abs(rhs), 1)


def test_theta_p_symmetry_and_zero():
    z = 0.4 + 0.2j
    p = 0.08
    assert abs(theta_p(p / z, p) - theta_p(z, p)) < 1e-14
    assert theta_p(1.0, p) == 0.0


def test_theta_graded_laws():
    rng = np.random.default_rng(3)
    zm = Monomial.var("w")
    pm = Monomial.var("p")
    for _ in range(100):
        zv = (0.3 + 1.4 * rng.random()) * cmath.exp(2j * np.pi * rng.random())
        pp = PP.extended({"w": zv})
        th = pp.theta(zm).materialize(pp)
        assert abs(pp.theta(zm ** -1).materialize(pp) + th) < 1e-10 * abs(th)
        shifted = pp.theta(pm * zm).materialize(pp)
        law = -pp.materialize(pm ** Fraction(-1, 2) * zm ** -1) * th
        assert abs(shifted - law) < 1e-10 * abs(law)


def test_phi_monomial_is_half_hbar():
    pp = PP.extended({"w": 0.3 + 0.4j, "y": 1.1 - 0.2j})
    phi = pp.phi(Monomial.var("w"), Monomial.var("y"))
    assert phi.mono.exps == {"t1": Fraction(-1, 2), "t2": Fraction(-1, 2)}


def test_phi_pole_at_one():
    pp = PP.extended({"w": 0.3 + 0.4j})
    with pytest.raises(SingularityError):
        pp.phi(Monomial.one(), Monomial.var("w"))


def test_phi_symmetric_and_reassociation():
    pp = PP.extended({"w": 0.3 + 0.4j, "y": 1.1 - 0.2j})
    x, y = Monomial.var("w"), Monomial.var("y")
    a = pp.phi(x, y).materialize(pp)
    b = pp.phi(y, x).materialize(pp)
    assert abs(a - b) < 1e-12 * abs(a)
    num = pp.theta(x * y) * pp.theta(HBAR)
    c = (num / pp.theta(x) / pp.theta(y)).materialize(pp)
    assert abs(a - c) < 1e-12 * abs(a)


def test_graded_addition_requires_equal_monomials():
    a = GradedValue(Monomial.var("w"), 1.0)
    b = GradedValue(Monomial.var("y"), 1.0)
    with pytest.raises(ValueError):
        a + b


def test_gamma3_symmetry():
    a, b, c = 0.2 + 0.05j, 0.3 - 0.1j, 0.15 + 0.12j
    z = 0.7 + 0.3j
    vals = [gamma3(z, *perm) for perm in
            [(a, b, c), (b, a, c), (c, b, a), (a, c, b)]]
    for v in vals[1:]:
        assert abs(v - vals[0]) < 1e-12 * abs(vals[0])


def test_gamma3_inversion_symmetry():
    a, b, c = 0.2, 0.3, 0.15
    z = 0.7 + 0.3j
    assert abs(gamma3(z, a, b, c) - gamma3(a * b * c / z, a, b, c)) \
        < 1e-12 * abs(gamma3(z, a, b, c))


def test_gamma3_rejects_zero():
    with pytest.raises(SingularityError):
        gamma3(0.0, 0.2, 0.3, 0.1)


def test_double_pochhammer_telescoping():
    from ellstab.core import qpoch2_inf
    z, p, t = 0.4 + 0.1j, 0.1, 0.3
    lhs = qpoch2_inf(z, p, t) / qpoch2_inf(z * t, p, t)
    assert abs(lhs - qpoch_inf(z, p)) < 1e-12 * abs(lhs)


def test_modular_transform():
    rng = np.random.default_rng(5)
    assert theta_modular_residual(1.0 + 0.0j, PP) < 1e-10
    for _ in range(20):
        x = abs(P) ** 0.5 * cmath.exp(2j * np.pi * rng.random())
        assert theta_modular_residual(x, PP) < 1e-10


def test_modular_consistent_with_shift_law():
    # residual at p*X and at X both vanish, consistently with the shift law
    x = 0.3 + 0.1j
    assert theta_modular_residual(x, PP) < 1e-10
    assert theta_modular_residual(P * x, PP) < 1e-10


def test_param_point_rejects_bad_nome():
    with pytest.raises(ValueError):
        ParamPoint(3, {"p": 1.2 + 0j, "t1": 0.5, "t2": 0.6})
    with pytest.raises(ValueError):
        # shifted nome outside the disc
        ParamPoint(3, {"p": 0.3 + 0j, "t1": 0.3, "t2": 0.4})
