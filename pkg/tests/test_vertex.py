"""Vertex series, Jackson oracle, normalization and Bethe equations."""

import numpy as np
import pytest

from ellstab.core import Monomial, SingularityError
from ellstab.envelopes import Envelope, EnvelopeSpec, restrict
from ellstab.partitions import fixed_points, make_fixed_point
from ellstab.rmatrix import profiles
from ellstab.sampling import sample_param_point
from ellstab.scalars import mu_vacuum_ope
from ellstab.vertex import (BetheSolution, _degree_vectors, bethe_residuals,
                            bethe_solve, jackson_term_ratio,
                            jordan_bethe_residuals, normalization_factor,
                            vertex_series)

N = 3
W = (1, 0, 0)
PP = sample_param_point(41, N, framing_counts={"u": list(W)})


def test_degree_vectors_cover_the_simplex():
    vecs = list(_degree_vectors(3, 2))
    assert len(vecs) == len(set(vecs)) == 10
    assert all(sum(v) <= 2 for v in vecs)
    assert list(_degree_vectors(0, 3)) == [()]


def test_normalization_of_empty_cycle_is_vacuum_scalar():
    fp = make_fixed_point([()], W, N)
    val = normalization_factor(fp, PP)
    assert abs(val - mu_vacuum_ope(W, PP)) < 1e-12 * abs(val)


def test_normalization_single_box_hand_expansion():
    from ellstab.core import qpoch_inf
    fp = make_fixed_point([(1,)], W, N)
    val = normalization_factor(fp, PP)
    p, h = PP.p, PP.hbar
    u = PP.values["u0_1"]
    phi = 1.0  # unframed weight of the (1,1) box
    want = mu_vacuum_ope(W, PP) * phi \
        * qpoch_inf(p * u / phi, p) / qpoch_inf(h * u / phi, p)
    assert abs(val - want) < 1e-12 * abs(want)


def test_normalization_depends_only_on_cycle():
    fp = make_fixed_point([(2, 1)], W, N)
    v1 = normalization_factor(fp, PP)
    v2 = normalization_factor(fp, PP)
    assert v1 == v2


def test_degree_zero_law_and_oracle():
    for total in (1, 2, 3):
        for v in profiles(total, N):
            basis = fixed_points(v, W, N)
            for lam in basis:
                env = Envelope(EnvelopeSpec(lam, "hat"))
                qp = env.qp_unit_factors()
                for mu in basis:
                    try:
                        series = vertex_series(lam, mu, 3, PP)
                    except SingularityError:
                        continue
                    d0 = tuple([0] * total)
                    assert series.coefficients[d0] == series.envelope_at_mu
                    scale = max(abs(c) for c in series.coefficients.values())
                    for d, c in series.coefficients.items():
                        oracle = jackson_term_ratio(mu, d, PP, qp) \
                            * series.envelope_at_mu
                        assert abs(c - oracle) <= 1e-8 * max(abs(c), abs(oracle),
                                                             1e-10 * scale)


def test_uncorrected_prefactor_differs_only_by_exact_hbar_powers():
    lam = make_fixed_point([(2,)], W, N)
    s1 = vertex_series(lam, lam, 2, PP)
    s2 = vertex_series(lam, lam, 2, PP, uncorrected_prefactor=True)
    h = PP.hbar
    for d, c in s1.coefficients.items():
        c2 = s2.coefficients[d]
        if c == 0:
            assert c2 == 0
            continue
        ratio = c2 / c
        k = round(np.log(abs(ratio)) / np.log(abs(h)))
        assert abs(ratio - h ** k) < 1e-8 * abs(ratio)


def test_off_diagonal_divergent_pairs_raise():
    basis = fixed_points((1, 1, 1), W, N)
    lam = next(b for b in basis if b.partitions() == ((2, 1),))
    mu = next(b for b in basis if b.partitions() == ((3,),))
    with pytest.raises(SingularityError):
        vertex_series(lam, mu, 2, PP)


def test_bethe_one_variable_closed_form():
    z0 = PP.values["z0"]
    u = PP.values["u0_1"]
    h = PP.hbar
    x = u * (1 - h * z0) / (1 - z0)
    res = bethe_residuals({0: [x], 1: [], 2: []}, PP, W)
    assert np.max(np.abs(res)) < 1e-12


def test_bethe_trivial_profile():
    sol = bethe_solve((0, 0, 0), W, PP)
    assert sol.converged and sol.residual == 0.0


def test_bethe_newton_converges_and_matches_closed_form():
    sol = bethe_solve((1, 0, 0), W, PP, seed=5)
    assert sol.converged and sol.residual < 1e-10
    z0, u, h = PP.values["z0"], PP.values["u0_1"], PP.hbar
    x = u * (1 - h * z0) / (1 - z0)
    assert abs(sol.roots[0][0] - x) < 1e-8 * abs(x)
    sol = bethe_solve((1, 1, 1), W, PP, seed=5)
    assert sol.converged and sol.residual < 1e-10


def test_jordan_variant_contract():
    uvals = [PP.values["u0_1"]]
    z = PP.values["z0"]
    h = PP.hbar
    u = uvals[0]
    x = u * (1 - h * z) / (1 - z)
    res = jordan_bethe_residuals([x], uvals, z, PP)
    assert res.shape == (1,)
    assert np.max(np.abs(res)) < 1e-12
    assert jordan_bethe_residuals([], uvals, z, PP).shape == (0,)
