"""The acceptance suite: one callable per criterion, each returning a record
with the worst observed residual, its tolerance and the elapsed time.

Every tolerance is fixed here; the functions are reused by the test suite
and by the command-line runner.
"""

from __future__ import annotations

import cmath
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .core import (HBAR, Monomial, ParamPoint, SingularityError,
                   theta_modular_residual)
from .envelopes import (Envelope, EnvelopeSpec, chern_slots,
                        factorization_residual, restrict, shuffle_residual)
from .fock import (lowering_coefficient, phi_eigenvalue, phi_weight_exponent,
                   raising_coefficient)
from .partitions import (ColoredPartition, fixed_points, k_eigen_sum_ok,
                         make_fixed_point, partitions_upto, weight_identity_ok)
from .rmatrix import (FramingGroup, bare_transition, composition_residual,
                      profiles, weight_block_residual, ybe_residual)
from .sampling import random_assignment, sample_param_point
from .scalars import rll_scalar_residual
from .vertex import bethe_residuals, bethe_solve, jackson_term_ratio, vertex_series


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    worst: float
    limit: float
    seconds: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"[{status}] criterion {self.number:2d} {self.name:34s} "
                f"worst={self.worst:.3e} limit={self.limit:.0e} "
                f"({self.seconds:.1f}s) {self.detail}")


def _random_partition(rng, max_size, n_colors):
    size = int(rng.integers(0, max_size + 1))
    rows = []
    rem, mx = size, size
    while rem > 0:
        part = int(rng.integers(1, min(rem, mx) + 1))
        rows.append(part)
        mx = part
        rem -= part
    k = int(rng.integers(0, n_colors))
    return ColoredPartition(tuple(sorted(rows, reverse=True)), k, n_colors)


def criterion_weight_identity(seed: int = 0) -> CriterionResult:
    """Exact integer weight identity and central eigenvalue sum."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    failures = 0
    for _ in range(1000):
        n = int(rng.choice([3, 4, 5]))
        lam = _random_partition(rng, 12, n)
        ok, _ = weight_identity_ok(lam)
        failures += (not ok) + (not k_eigen_sum_ok(lam))
    return CriterionResult(1, "weight identity / eigenvalue sum",
                           failures == 0, float(failures), 0.5,
                           time.time() - t0, "1000 partitions")


def criterion_theta_laws(seed: int = 0) -> CriterionResult:
    t0 = time.time()
    rng = np.random.default_rng(seed)
    pp = sample_param_point(seed, 3)
    worst = 0.0
    zm = Monomial.var("w")
    pm = Monomial.var("p")
    for _ in range(100):
        zv = (0.2 + 1.6 * rng.random()) * cmath.exp(2j * np.pi * rng.random())
        ppz = pp.extended({"w": zv})
        th = ppz.theta(zm).materialize(ppz)
        inv = ppz.theta(zm ** -1).materialize(ppz)
        worst = max(worst, abs(inv + th) / abs(th))
        sh = ppz.theta(pm * zm).materialize(ppz)
        law = -ppz.materialize(pm ** Fraction(-1, 2) * zm ** -1) * th
        worst = max(worst, abs(sh - law) / abs(law))
        worst = max(worst, abs(ppz.theta_p_val(pp.p / zv) - ppz.theta_p_val(zv))
                    / abs(ppz.theta_p_val(zv)))
    return CriterionResult(2, "theta inversion / shift laws", worst < 1e-10,
                           worst, 1e-10, time.time() - t0, "100 points")


def _small_fixed_points(n, max_boxes, w):
    out = []
    for total in range(max_boxes + 1):
        for v in profiles(total, n):
            out.extend(fixed_points(v, w, n))
    return out


def criterion_factorization(seed: int = 0) -> CriterionResult:
    """S = (-1)^eps K_I S-hat and S = (-1)^eps* K_II S-tilde pointwise."""
    t0 = time.time()
    n = 3
    rng = np.random.default_rng(seed)
    worst = 0.0
    cases = 0
    for w in [(1, 0, 0), (1, 1, 0)]:
        pp = sample_param_point(seed + 1, n, framing_counts={"u": list(w)})
        for fp in _small_fixed_points(n, 3, w):
            env = Envelope(EnvelopeSpec(fp, "plain"))
            names = env.x_names()
            for _ in range(5):
                values = random_assignment(rng, names)
                worst = max(worst, factorization_residual(fp, pp, "I", values))
                worst = max(worst, factorization_residual(fp, pp, "II", values))
                cases += 1
    return CriterionResult(3, "S through K_I / K_II factorization",
                           worst < 1e-10, worst, 1e-10, time.time() - t0,
                           f"{cases} assignments")


def criterion_shuffle(seed: int = 0, max_total: int = 4) -> CriterionResult:
    """Shuffle product of envelopes, all normalizations, N in {3, 4}."""
    t0 = time.time()
    worst = 0.0
    checks = 0
    for n in (3, 4):
        for seed in (seed, seed + 1, seed + 2):
            rng = np.random.default_rng(seed + 100 * n)
            for k2 in range(n):
                wa = tuple(1 if i == 0 else 0 for i in range(n))
                wb = tuple(1 if i == k2 else 0 for i in range(n))
                pp = sample_param_point(seed + 7 * k2 + 1000 * n, n,
                                        framing_counts={"ua": list(wa),
                                                        "ub": list(wb)})
                for s1 in range(max_total + 1):
                    for rows1 in partitions_upto(s1):
                        if sum(rows1) != s1:
                            continue
                        for s2 in range(max_total - s1 + 1):
                            for rows2 in partitions_upto(s2):
                                if sum(rows2) != s2 or (s1 == 0 and s2 == 0):
                                    continue
                                fpa = make_fixed_point([rows1], wa, n,
                                                       u_names=["ua0_1"])
                                fpb = make_fixed_point([rows2], wb, n,
                                                       u_names=[f"ub{k2}_1"])
                                for variant in ("plain", "hat", "tilde"):
                                    r = shuffle_residual(fpa, fpb, pp, variant,
                                                         n_assignments=2, rng=rng)
                                    worst = max(worst, r)
                                    checks += 1
    return CriterionResult(4, "shuffle product (plain/hat/tilde)",
                           worst < 1e-8, worst, 1e-8, time.time() - t0,
                           f"{checks} checks")


def criterion_fock_dual_forms(seed: int = 0) -> CriterionResult:
    t0 = time.time()
    rng = np.random.default_rng(seed)
    worst = 0.0
    done = 0
    while done < 200:
        n = int(rng.choice([3, 4, 5]))
        lam = _random_partition(rng, 9, n)
        pp = sample_param_point(int(rng.integers(1, 1 << 30)), n, extra_vars=["u"])
        adds = lam.addable()
        rems = lam.removable()
        cell = adds[int(rng.integers(0, len(adds)))]
        a1 = raising_coefficient(lam, cell, pp, form=1).materialize(pp)
        a2 = raising_coefficient(lam, cell, pp, form=2).materialize(pp)
        worst = max(worst, abs(a1 - a2) / max(abs(a1), abs(a2)))
        if rems:
            cell = rems[int(rng.integers(0, len(rems)))]
            b1 = lowering_coefficient(lam, cell, pp, form=1).materialize(pp)
            b2 = lowering_coefficient(lam, cell, pp, form=2).materialize(pp)
            worst = max(worst, abs(b1 - b2) / max(abs(b1), abs(b2)))
        done += 1
    return CriterionResult(5, "ladder coefficient dual forms", worst < 1e-10,
                           worst, 1e-10, time.time() - t0, "200 draws")


def criterion_transition(seed: int = 0) -> CriterionResult:
    """Transition composition and weight blocks on 1- and 2-box spaces."""
    t0 = time.time()
    n = 3
    worst = 0.0
    for colors in [(0, 0), (0, 1)]:
        g1 = FramingGroup(tuple(1 if i == colors[0] else 0 for i in range(n)), "ua")
        g2 = FramingGroup(tuple(1 if i == colors[1] else 0 for i in range(n)), "ub")
        pp = sample_param_point(seed + 17, n, framing_counts={"ua": list(g1.w),
                                                              "ub": list(g2.w)})
        for total in (1, 2):
            for v in profiles(total, n):
                basis = fixed_points(v, tuple(a + b for a, b in zip(g1.w, g2.w)), n)
                if not basis:
                    continue
                worst = max(worst, composition_residual(v, g1, g2, pp, n))
                b, bare, conds = bare_transition(v, g1, g2, pp, n)
                worst = max(worst, weight_block_residual(b, bare))
    return CriterionResult(6, "transition composition / weight blocks",
                           worst < 1e-8, worst, 1e-8, time.time() - t0)


def criterion_ybe(seed: int = 0) -> CriterionResult:
    t0 = time.time()
    n = 3
    worst1 = 0.0
    for s in range(seed, seed + 5):
        g1 = FramingGroup((1, 0, 0), "ua")
        g2 = FramingGroup((1, 0, 0), "ub")
        g3 = FramingGroup((1, 0, 0), "uc")
        pp = sample_param_point(s + 31, n, framing_counts={"ua": list(g1.w),
                                                           "ub": list(g2.w),
                                                           "uc": list(g3.w)})
        worst1 = max(worst1, ybe_residual((g1, g2, g3), pp, n, 1))
    g1 = FramingGroup((1, 0, 0), "ua")
    g2 = FramingGroup((1, 0, 0), "ub")
    g3 = FramingGroup((1, 0, 0), "uc")
    pp = sample_param_point(seed + 57, n, framing_counts={"ua": list(g1.w),
                                                          "ub": list(g2.w),
                                                          "uc": list(g3.w)})
    worst2 = ybe_residual((g1, g2, g3), pp, n, 2)
    passed = worst1 < 1e-7 and worst2 < 1e-6
    return CriterionResult(7, "dynamical Yang-Baxter", passed,
                           max(worst1, worst2), 1e-6, time.time() - t0,
                           f"1-box {worst1:.1e} / 2-box {worst2:.1e}")


def criterion_vertex(seed: int = 0) -> CriterionResult:
    """Degree-zero law, Jackson-term oracle and quasi-periodicity."""
    t0 = time.time()
    n = 3
    w = (1, 0, 0)
    pp = sample_param_point(seed + 3, n, framing_counts={"u": list(w)})
    rng = np.random.default_rng(seed)
    worst_series = 0.0
    worst_qp = 0.0
    pairs = 0
    skipped = 0
    for total in (1, 2, 3):
        for v in profiles(total, n):
            basis = fixed_points(v, w, n)
            for lam in basis:
                env = Envelope(EnvelopeSpec(lam, "hat"))
                qp = env.qp_unit_factors()
                for name, mono in qp.items():
                    color = int(name[1:].split("_")[0])
                    if mono.get(f"z{color}") != Fraction(-1):
                        return CriterionResult(8, "vertex series / oracle / QP",
                                               False, 1.0, 1e-8,
                                               time.time() - t0,
                                               "Kahler part of QP factor wrong")
                for mu in basis:
                    try:
                        series = vertex_series(lam, mu, 3, pp)
                    except SingularityError:
                        skipped += 1
                        continue
                    pairs += 1
                    scale = max(abs(c) for c in series.coefficients.values())
                    d0 = tuple([0] * total)
                    worst_series = max(worst_series,
                                       abs(series.coefficients[d0]
                                           - series.envelope_at_mu)
                                       / max(abs(series.envelope_at_mu), 1e-300))
                    for d, c in series.coefficients.items():
                        oracle = jackson_term_ratio(mu, d, pp, qp) \
                            * series.envelope_at_mu
                        worst_series = max(worst_series,
                                           abs(c - oracle) / max(abs(c), abs(oracle),
                                                                 1e-12 * scale, 1e-300))
                    # quasi-periodicity for |d| <= 2 against the exact law
                    try:
                        base = restrict(env, mu, pp, framed=False)
                    except SingularityError:
                        continue
                    if base == 0:
                        continue  # structural zero: the law is trivially 0 = 0
                    for _ in range(2):
                        shifts = {}
                        pred = 1.0 + 0.0j
                        for i, boxes in chern_slots(mu).items():
                            for j in range(1, len(boxes) + 1):
                                s = int(rng.integers(-2, 3))
                                shifts[f"x{i}_{j}"] = s
                                pred *= pp.materialize(qp[f"x{i}_{j}"]) ** s
                        try:
                            sh = restrict(env, mu, pp, p_shifts=shifts,
                                          framed=False)
                        except SingularityError:
                            continue
                        worst_qp = max(worst_qp, abs(sh - pred * base)
                                       / max(abs(sh), abs(pred * base), 1e-300))
    worst = max(worst_series, worst_qp)
    return CriterionResult(8, "vertex series / oracle / QP", worst < 1e-8,
                           worst, 1e-8, time.time() - t0,
                           f"{pairs} pairs, {skipped} singular skipped")


def criterion_bethe(seed: int = 0) -> CriterionResult:
    t0 = time.time()
    n = 3
    pp = sample_param_point(seed + 5, n, framing_counts={"u": [1, 0, 0]})
    z0 = pp.values["z0"]
    u = pp.values["u0_1"]
    h = pp.hbar
    x = u * (1 - h * z0) / (1 - z0)
    closed = float(np.max(np.abs(bethe_residuals({0: [x], 1: [], 2: []},
                                                 pp, (1, 0, 0)))))
    sol = bethe_solve((1, 1, 1), (1, 0, 0), pp, seed=seed)
    passed = closed < 1e-12 and sol.converged and sol.residual < 1e-10
    return CriterionResult(9, "Bethe closed form / Newton", passed,
                           max(closed, sol.residual), 1e-10, time.time() - t0,
                           f"closed {closed:.1e}, newton {sol.residual:.1e}")


def criterion_rll(seed: int = 0) -> CriterionResult:
    t0 = time.time()
    n = 3
    rng = np.random.default_rng(seed)
    worst = 0.0
    pp0 = sample_param_point(seed + 11, n)
    for i in range(20):
        uval = (0.55 + 0.8 * rng.random()) * cmath.exp(2j * np.pi * rng.random())
        pp = pp0.extended({"u": uval})
        for k in range(n):
            worst = max(worst, rll_scalar_residual(pp, Monomial.var("u"), k))
    return CriterionResult(10, "fusion/exchange scalar identity", worst < 1e-7,
                           worst, 1e-7, time.time() - t0, "20 points x 3 colors")


def criterion_conjugate_modulus(seed: int = 0) -> CriterionResult:
    t0 = time.time()
    rng = np.random.default_rng(seed)
    pp = sample_param_point(seed + 13, 3)
    worst = 0.0
    for i in range(20):
        if i == 0:
            x = 1.0 + 0.0j
        else:
            x = (abs(pp.p) ** 0.5) * cmath.exp(2j * np.pi * rng.random())
        worst = max(worst, theta_modular_residual(x, pp))
    return CriterionResult(11, "conjugate modulus transform", worst < 1e-8,
                           worst, 1e-8, time.time() - t0, "20 points")


ALL_CRITERIA = [
    criterion_weight_identity,
    criterion_theta_laws,
    criterion_factorization,
    criterion_shuffle,
    criterion_fock_dual_forms,
    criterion_transition,
    criterion_ybe,
    criterion_vertex,
    criterion_bethe,
    criterion_rll,
    criterion_conjugate_modulus,
]


def run_all(seed: int = 0, verbose: bool = True) -> list[CriterionResult]:
    results = []
    for fn in ALL_CRITERIA:
        res = fn(seed)
        results.append(res)
        if verbose:
            print(res.line(), flush=True)
    return results
