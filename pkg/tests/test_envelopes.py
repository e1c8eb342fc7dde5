"""Stable envelopes: closed forms, factorization, restriction, shuffle."""

import cmath
from fractions import Fraction

import numpy as np
import pytest

from ellstab.core import HBAR, BudgetError, Monomial, SingularityError
from ellstab.envelopes import (Envelope, EnvelopeSpec, factorization_residual,
                               restrict, restriction_values, s_factor_product,
                               shuffle_residual, tree_weights, default_kahler)
from ellstab.partitions import (chern_slots, fixed_points, index_degrees,
                                make_fixed_point)
from ellstab.sampling import random_assignment, sample_param_point

N = 3
PP = sample_param_point(11, N, framing_counts={"u": [1, 0, 0]})
RNG = np.random.default_rng(5)


def test_empty_envelope_is_one():
    fp = make_fixed_point([()], (1, 0, 0), N)
    env = Envelope(EnvelopeSpec(fp, "plain"))
    assert env.eval(PP, {}) == 1.0


def test_single_box_closed_form():
    fp = make_fixed_point([(1,)], (1, 0, 0), N)
    d = list(index_degrees(fp).values())[0]
    env = Envelope(EnvelopeSpec(fp, "plain"))
    vals = random_assignment(RNG, env.x_names())
    got = env.eval(PP, vals)
    ppx = PP.extended(vals)
    x, u, z0 = Monomial.var("x0_1"), Monomial.var("u0_1"), Monomial.var("z0")
    want = (ppx.theta(x / u * z0 * HBAR ** d) * ppx.theta(HBAR)
            / ppx.theta(z0 * HBAR ** d)).materialize(ppx)
    assert abs(got - want) < 1e-12 * abs(want)


def test_row_of_two_tree_weight_hand_expansion():
    fp = make_fixed_point([(2,)], (1, 0, 0), N)
    d = {(b.x, b.y): v for b, v in index_degrees(fp).items()}
    weights = tree_weights(fp, default_kahler(N))
    assert len(weights) == 1
    tw = weights[0]
    assert tw.kappa == 0
    env = Envelope(EnvelopeSpec(fp, "plain"))
    vals = random_assignment(RNG, env.x_names())
    ppx = PP.extended(vals)
    got = 1.0 + 0.0j
    for xm, ym in tw.phi_args:
        got *= ppx.phi(xm, ym).materialize(ppx)
    x1, x2, u = (Monomial.var("x0_1"), Monomial.var(f"x{N-1}_1"),
                 Monomial.var("u0_1"))
    z0, zl = Monomial.var("z0"), Monomial.var(f"z{N-1}")
    t1 = Monomial.var("t1")
    root_arg = z0 * zl * HBAR ** (d[(1, 1)] + d[(1, 2)])
    edge_arg = zl * HBAR ** d[(1, 2)]
    want = (ppx.phi(x1 / u, root_arg)
            * ppx.phi(t1 * x2 / x1, edge_arg)).materialize(ppx)
    assert abs(got - want) < 1e-12 * abs(want)


def test_symmetry_under_transposition():
    fp = make_fixed_point([(4,)], (1, 0, 0), N)  # two color-0 Chern roots
    env = Envelope(EnvelopeSpec(fp, "hat"))
    vals = random_assignment(RNG, env.x_names())
    v1 = env.eval(PP, vals)
    swapped = dict(vals)
    swapped["x0_1"], swapped["x0_2"] = vals["x0_2"], vals["x0_1"]
    v2 = env.eval(PP, swapped)
    assert abs(v1 - v2) < 1e-10 * abs(v1)


def test_normalized_variants_have_integer_chern_exponents():
    # half powers survive only on t1/t2; Chern roots and framing weights
    # appear with integer exponents (exact bookkeeping, no floats involved)
    for rows in [(1,), (2, 1), (3, 1)]:
        fp = make_fixed_point([rows], (1, 0, 0), N)
        for variant in ("hat", "tilde"):
            mono = s_factor_product(fp, variant).mono_total()
            for name, e in mono.exps.items():
                if name not in ("t1", "t2"):
                    assert e.denominator == 1, (rows, variant, name, e)


def test_factorization_through_kernels():
    for w, rows_list in [((1, 0, 0), [[(1,)], [(2,)], [(2, 1)], [(1, 1, 1)]]),
                         ((1, 1, 0), [[(1,), (2,)], [(), (2, 1)]])]:
        pp = sample_param_point(12, N, framing_counts={"u": list(w)})
        for rows in rows_list:
            fp = make_fixed_point(rows, w, N)
            env = Envelope(EnvelopeSpec(fp, "plain"))
            vals = random_assignment(RNG, env.x_names())
            assert factorization_residual(fp, pp, "I", vals) < 1e-10
            assert factorization_residual(fp, pp, "II", vals) < 1e-10


def test_restriction_diagonal_nonzero_and_triangular():
    fps = fixed_points((1, 1, 1), (1, 0, 0), N)
    mat = np.zeros((3, 3), dtype=complex)
    for b, beta in enumerate(fps):
        env = Envelope(EnvelopeSpec(beta, "plain"))
        for g, gamma in enumerate(fps):
            mat[g, b] = restrict(env, gamma, PP)
    for i in range(3):
        assert abs(mat[i, i]) > 1e-6
    # support: an envelope vanishes at dominance-smaller restriction points
    # (basis order is dominance-ascending: (1,1,1), (2,1), (3))
    assert mat[0, 1] == 0 and mat[0, 2] == 0 and mat[1, 2] == 0
    assert all(abs(mat[g, b]) > 1e-8 for g in range(3) for b in range(g + 1))


def test_quasi_periodicity_exact_law():
    rng = np.random.default_rng(9)
    for rows in [(1,), (1, 1), (2,), (2, 1), (3,), (1, 1, 1)]:
        fp = make_fixed_point([rows], (1, 0, 0), N)
        env = Envelope(EnvelopeSpec(fp, "hat"))
        qp = env.qp_unit_factors()
        # the Kahler part of every unit factor is exactly z_color^(-1)
        for name, mono in qp.items():
            color = int(name[1:].split("_")[0])
            assert mono.get(f"z{color}") == Fraction(-1)
            assert all(v.startswith(("z", "t")) for v in mono.exps)
        base = restrict(env, fp, PP, framed=False)
        shifts, pred = {}, 1.0 + 0.0j
        for i, boxes in chern_slots(fp).items():
            for j in range(1, len(boxes) + 1):
                s = int(rng.integers(-2, 3))
                shifts[f"x{i}_{j}"] = s
                pred *= PP.materialize(qp[f"x{i}_{j}"]) ** s
        shifted = restrict(env, fp, PP, p_shifts=shifts, framed=False)
        assert abs(shifted - pred * base) < 1e-10 * max(abs(shifted), abs(base))


def test_framed_restriction_separates_framings():
    pp = sample_param_point(14, N, framing_counts={"u": [2, 0, 0]})
    fp = make_fixed_point([(1,), (1,)], (2, 0, 0), N)
    env = Envelope(EnvelopeSpec(fp, "plain"))
    val = restrict(env, fp, pp, framed=True)
    assert abs(val) > 1e-8
    values, _ = restriction_values(fp, pp, framed=True)
    assert abs(values["x0_1"] - values["x0_2"]) > 1e-6


def test_shuffle_trivial_second_factor():
    pp = sample_param_point(13, N, framing_counts={"ua": [1, 0, 0],
                                                   "ub": [1, 0, 0]})
    fpa = make_fixed_point([(2, 2)], (1, 0, 0), N, u_names=["ua0_1"])
    fpb = make_fixed_point([()], (1, 0, 0), N, u_names=["ub0_1"])
    r = shuffle_residual(fpa, fpb, pp, "hat", n_assignments=2,
                         rng=np.random.default_rng(3))
    assert r < 1e-10


def test_shuffle_one_box_each_all_variants():
    pp = sample_param_point(13, N, framing_counts={"ua": [1, 0, 0],
                                                   "ub": [1, 0, 0]})
    fpa = make_fixed_point([(1,)], (1, 0, 0), N, u_names=["ua0_1"])
    fpb = make_fixed_point([(1,)], (1, 0, 0), N, u_names=["ub0_1"])
    for variant in ("plain", "hat", "tilde"):
        r = shuffle_residual(fpa, fpb, pp, variant, n_assignments=3,
                             rng=np.random.default_rng(4))
        assert r < 1e-8, variant


def test_shuffle_at_shifted_nome():
    pp = sample_param_point(13, N, framing_counts={"ua": [1, 0, 0],
                                                   "ub": [0, 1, 0]})
    fpa = make_fixed_point([(2, 1)], (1, 0, 0), N, u_names=["ua0_1"])
    fpb = make_fixed_point([(1,)], (0, 1, 0), N, u_names=["ub1_1"])
    r = shuffle_residual(fpa, fpb, pp, "tilde", star=True, n_assignments=2,
                         rng=np.random.default_rng(5))
    assert r < 1e-8


def test_symmetrization_budget_guard():
    fp = make_fixed_point([(6, 5, 4, 1)], (1, 0, 0), N)
    with pytest.raises(BudgetError):
        Envelope(EnvelopeSpec(fp, "hat"), sym_budget=1000)


def test_restriction_requires_same_class():
    fp1 = make_fixed_point([(1,)], (1, 0, 0), N)
    fp2 = make_fixed_point([(2,)], (1, 0, 0), N)
    env = Envelope(EnvelopeSpec(fp1, "plain"))
    with pytest.raises(ValueError):
        restrict(env, fp2, PP)
