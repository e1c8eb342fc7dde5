"""Vertex-function series, their Jackson-sum oracle, and Bethe equations.

The series counts quasimap degrees per box of the fixed point that labels the
integration cycle: each coefficient is a product of finite Pochhammer ratios
(framing, arrow and gauge factors) against a per-box power of the Kahler
parameters, times the hat-normalized envelope restricted to that fixed point.
An independent per-term oracle recomputes every coefficient directly from the
expectation-value integrand at the shifted points x = phi p^d, using only the
quasi-periodicity multipliers for the envelope factor.

Every factor base is carried as an exact monomial so that the structural
coincidences of restriction points (arrow ratios landing exactly on 1) give
exact zeros in the finite products and exactly matched vanishing factors in
the infinite ones.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import (HBAR, GradedValue, Monomial, ParamPoint, SingularityError)
from .envelopes import Envelope, EnvelopeSpec, chern_slots, restrict
from .partitions import Box, FixedPoint

SQRT_HBAR = HBAR ** Fraction(1, 2)
P = Monomial.var("p")


def _is_p_power(mono: Monomial):
    """Exponent e if the monomial equals p^e for integer e, else None."""
    exps = mono.exps
    if not exps:
        return 0
    if set(exps) == {"p"} and exps["p"].denominator == 1:
        return int(exps["p"])
    return None


def qpoch_fin_mono(base: Monomial, s: int, pp: ParamPoint) -> tuple[complex, int]:
    """Finite Pochhammer (base; p)_s of an exact monomial base.

    Returns (product over non-vanishing factors, zero count): identically
    vanishing factors are counted symbolically (+1 per vanishing factor for
    s >= 0, -1 per vanishing factor of the reciprocal product for s < 0) so
    that ratios of such symbols can cancel exactly.
    """
    if s >= 0:
        res = 1.0 + 0.0j
        zeros = 0
        for nn in range(s):
            m = base * P ** nn
            if m.is_one():
                zeros += 1
            else:
                res *= 1.0 - pp.materialize(m)
        return res, zeros
    den = 1.0 + 0.0j
    zeros = 0
    for nn in range(-s):
        m = base * P ** (s + nn)
        if m.is_one():
            zeros -= 1
        else:
            den *= 1.0 - pp.materialize(m)
    return 1.0 / den, zeros


def _inf_prod(base: Monomial, offset: int, pp: ParamPoint,
              max_terms: int = 6000) -> tuple[complex, int]:
    """(base p^offset; p)_inf with structural zeros removed and counted.

    Returns (product over the non-vanishing factors, number of identically
    vanishing factors).  A factor vanishes identically exactly when the
    argument monomial base p^(offset+n) is 1.
    """
    e = _is_p_power(base)
    zero_count = 1 if (e is not None and e + offset <= 0) else 0
    p = pp.p
    zb = pp.materialize(base)
    res = 1.0 + 0.0j
    nn = 0
    while nn < max_terms:
        if e is None or e + offset + nn != 0:
            res *= 1.0 - zb * p ** (offset + nn)
        nn += 1
        if nn >= pp.min_terms and abs(zb * p ** (offset + nn)) < 1e-18:
            break
    return res, zero_count


class _RatioAccumulator:
    """Product of infinite-Pochhammer pieces with exact zero bookkeeping."""

    def __init__(self, pp: ParamPoint):
        self.pp = pp
        self.value = 1.0 + 0.0j
        self.zeros = 0

    def times(self, base: Monomial, offset: int = 0):
        v, z = _inf_prod(base, offset, self.pp)
        self.value *= v
        self.zeros += z

    def divide(self, base: Monomial, offset: int = 0):
        v, z = _inf_prod(base, offset, self.pp)
        self.value /= v
        self.zeros -= z

    def times_scalar(self, c: complex):
        self.value *= c

    def result(self) -> complex:
        if self.zeros > 0:
            return 0.0 + 0.0j
        if self.zeros < 0:
            raise SingularityError("net structural pole in a Pochhammer ratio")
        return self.value


def _mu_monomials(mu: FixedPoint, framed: bool):
    """Canonical box list with slot names and exact weight monomials."""
    n = mu.n_colors
    out: list[tuple[Box, Monomial, str]] = []
    for i in range(n):
        for j, box in enumerate(chern_slots(mu)[i], start=1):
            slot, _ = mu.slots[box.owner]
            mono = Monomial({"t1": Fraction(1 - box.y), "t2": Fraction(1 - box.x)})
            if framed:
                mono = mono * Monomial.var(slot.u_var)
            out.append((box, mono, f"x{i}_{j}"))
    return out


def _factor_bases(mu: FixedPoint, framed: bool):
    """The monomial bases and degree assignments of all integrand factors.

    Returns (boxes, framing, arrow, gauge): framing entries are
    (box_index, base = phi/u); arrow entries (a_index, b_index, t2 phi_b/phi_a)
    over ordered pairs with content(b) = content(a)+1 mod N; gauge entries
    (a_index, b_index, phi_a/phi_b) over ordered distinct same-residue pairs.
    """
    n = mu.n_colors
    boxes = _mu_monomials(mu, framed)
    t2 = Monomial.var("t2")
    framing = []
    for rank, (slot, _) in enumerate(mu.slots):
        u = Monomial.var(slot.u_var)
        for ia, (box, mono, _) in enumerate(boxes):
            if box.content % n == slot.color % n:
                framing.append((ia, mono / u))
    arrow = []
    gauge = []
    for ia, (ba, ma, _) in enumerate(boxes):
        for ib, (bb, mb, _) in enumerate(boxes):
            if ia == ib:
                continue
            if (bb.content - ba.content - 1) % n == 0:
                arrow.append((ia, ib, t2 * mb / ma))
            if (bb.content - ba.content) % n == 0:
                gauge.append((ia, ib, ma / mb))
    return boxes, framing, arrow, gauge


def normalization_factor(mu: FixedPoint, pp: ParamPoint,
                         framed: bool = False) -> complex:
    """Restriction of the cycle integrand without the envelope factor.

    The vacuum OPE scalar times the framing, arrow and gauge infinite-product
    factors at the canonical weights; identically vanishing arrow factors in
    numerator and denominator positions are dropped pairwise (they cancel in
    every ratio this normalization enters).
    """
    from .core import qpoch_inf
    from .scalars import mu_vacuum_ope
    n = mu.n_colors
    prefix = mu.slots[0][0].u_var.rstrip("0123456789_")
    for slot, _ in mu.slots:
        if slot.u_var.rstrip("0123456789_") != prefix:
            raise ValueError("normalization needs one framing name prefix")
    out = mu_vacuum_ope(mu.w, pp, prefix=prefix)
    boxes, framing, arrow, gauge = _factor_bases(mu, framed)
    p, h = pp.p, pp.hbar
    sqh = pp.materialize(SQRT_HBAR)
    pinv_h = P / HBAR

    def inf_skip_one(mono):
        e = _is_p_power(mono)
        res = 1.0 + 0.0j
        z = pp.materialize(mono)
        nn = 0
        while nn < 6000:
            if e is None or e + nn != 0:
                res *= 1.0 - z * p ** nn
            nn += 1
            if nn >= pp.min_terms and abs(z) * abs(p) ** nn < 1e-18:
                break
        return res

    for ia, base in framing:
        out *= pp.materialize(boxes[ia][1])
        out *= inf_skip_one(P / base) / inf_skip_one(HBAR / base)
    for ia, ib, base in arrow:
        out /= pp.materialize(boxes[ia][1])
        out *= inf_skip_one(pinv_h * base) / inf_skip_one(base)
    for ia, ib, base in gauge:
        out *= pp.materialize(boxes[ia][1] * boxes[ib][1]) / sqh
        out *= inf_skip_one(HBAR * base) / inf_skip_one(P * base)
    return out


@dataclass
class VertexSeries:
    lam: FixedPoint
    mu: FixedPoint
    degree_cap: int
    envelope_at_mu: complex
    coefficients: dict[tuple[int, ...], complex]

    def total(self) -> complex:
        return sum(self.coefficients.values())


def _degree_vectors(n_boxes: int, cap: int):
    if n_boxes == 0:
        yield ()
        return
    for total in range(cap + 1):
        for cuts in itertools.combinations(range(total + n_boxes - 1), n_boxes - 1):
            vec = []
            prev = -1
            for c in cuts:
                vec.append(c - prev - 1)
                prev = c
            vec.append(total + n_boxes - 2 - prev if n_boxes > 1 else total)
            yield tuple(vec)


def vertex_series(lam: FixedPoint, mu: FixedPoint, degree_cap: int,
                  pp: ParamPoint, framed: bool = False,
                  kahler_exponent_override=None,
                  uncorrected_prefactor: bool = False) -> VertexSeries:
    """The degree-truncated vertex series paired between two fixed points.

    The per-box prefactor base is h^{w_k} p^{2-2v_k+v_{k+1}-2w_k} divided by
    the exact quasi-periodicity multiplier of the envelope at that slot; its
    Kahler part is always z_k, and the residual hbar power vanishes for
    single-box profiles.  ``uncorrected_prefactor`` forces the bare
    (h^{w_k} p^{...} z_k) base for exploration, and
    ``kahler_exponent_override(k, v, w)`` substitutes the integer p-exponent.
    """
    n = mu.n_colors
    env = Envelope(EnvelopeSpec(lam, "hat"))
    stab0 = restrict(env, mu, pp, framed=framed)
    boxes, framing, arrow, gauge = _factor_bases(mu, framed)
    v, w = mu.v, mu.w
    p, h = pp.p, pp.hbar
    qp = env.qp_unit_factors()
    pref: list[complex] = []
    for box, _, name in boxes:
        k = box.content % n
        expo = (kahler_exponent_override(k, v, w) if kahler_exponent_override
                else 2 - 2 * v[k] + v[(k + 1) % n] - 2 * w[k])
        base = h ** w[k] * p ** expo
        if uncorrected_prefactor:
            pref.append(base * pp.values[f"z{k}"])
        else:
            pref.append(base / pp.materialize(qp[name]))
    pinv_h = P / HBAR
    coeffs: dict[tuple[int, ...], complex] = {}
    for d in _degree_vectors(len(boxes), degree_cap):
        term = 1.0 + 0.0j
        zeros = 0
        for da, pr in zip(d, pref):
            term *= pr ** (-da)

        def times_ratio(num_base, den_base, s):
            nonlocal term, zeros
            vn, zn = qpoch_fin_mono(num_base, s, pp)
            vd, zd = qpoch_fin_mono(den_base, s, pp)
            term *= vn / vd
            zeros += zn - zd

        for ia, base in framing:
            times_ratio(base, pinv_h * base, d[ia])
        for ia, ib, base in arrow:
            times_ratio(base, pinv_h * base, d[ib] - d[ia])
        for ia, ib, base in gauge:
            times_ratio(P * base, HBAR * base, d[ia] - d[ib])
        if zeros > 0:
            coeffs[d] = 0.0 + 0.0j
        elif zeros < 0:
            raise SingularityError("vertex coefficient has a structural pole")
        else:
            coeffs[d] = term * stab0
    return VertexSeries(lam, mu, degree_cap, stab0, coeffs)


def jackson_term_ratio(mu: FixedPoint, degrees: tuple[int, ...],
                       pp: ParamPoint, qp_factors: dict[str, Monomial],
                       framed: bool = False) -> complex:
    """Independent oracle for coefficient(d)/coefficient(0).

    Evaluates the integrand factors at the shifted points x_a = phi_a p^(d_a)
    through infinite-product ratios (matched structural zeros dropped) and
    multiplies the exact quasi-periodicity multipliers of the envelope
    factor.
    """
    n = mu.n_colors
    boxes, framing, arrow, gauge = _factor_bases(mu, framed)
    p = pp.p
    pinv_h = P / HBAR

    acc = _RatioAccumulator(pp)
    for (box, _, name), da in zip(boxes, degrees):
        acc.times_scalar(pp.materialize(qp_factors[name]) ** da)
    for ia, base in framing:
        da = degrees[ia]
        acc.times_scalar(p ** da)  # the x_a prefactor of the framing factor
        acc.times(P / base, -da)
        acc.divide(P / base, 0)
        acc.divide(HBAR / base, -da)
        acc.times(HBAR / base, 0)
    for ia, ib, base in arrow:
        s = degrees[ib] - degrees[ia]
        acc.times_scalar(p ** (-degrees[ia]))  # the x_a^{-1} prefactor
        acc.times(pinv_h * base, s)
        acc.divide(pinv_h * base, 0)
        acc.divide(base, s)
        acc.times(base, 0)
    for ia, ib, base in gauge:
        s = degrees[ia] - degrees[ib]
        acc.times_scalar(p ** (degrees[ia] + degrees[ib]))  # the x_a x_b prefactor
        acc.times(HBAR * base, s)
        acc.divide(HBAR * base, 0)
        acc.divide(P * base, s)
        acc.times(P * base, 0)
    return acc.result()


# ---------------------------------------------------------------------------
# Bethe equations
# ---------------------------------------------------------------------------

def bethe_residuals(xvals: dict[int, list[complex]], pp: ParamPoint,
                    w: tuple[int, ...], prefix: str = "u") -> np.ndarray:
    """Residuals of the saddle-point equations, one per unknown root."""
    n = pp.n_colors
    t1, t2, h = pp.t1, pp.t2, pp.hbar
    out = []
    for k in range(n):
        vk = len(xvals.get(k, []))
        for i in range(vk):
            x = xvals[k][i]
            lhs = 1.0 + 0.0j
            for j in range(1, w[k] + 1):
                u = pp.values[f"{prefix}{k}_{j}"]
                lhs *= (1 - u / x) / (1 - h * u / x)
            for xl in xvals.get((k + 1) % n, []):
                lhs *= (1 - xl / (t1 * x)) / (1 - t2 * xl / x)
            for xm in xvals.get((k - 1) % n, []):
                lhs *= (1 - t2 * x / xm) / (1 - x / (t1 * xm))
            for nn, xn in enumerate(xvals[k]):
                if nn == i:
                    continue
                lhs *= (1 - h * xn / x) / (1 - xn / (h * x))
            out.append(lhs - pp.values[f"z{k}"] * h ** (vk - 1))
    return np.array(out, dtype=complex)


def jordan_bethe_residuals(xvals: list[complex], uvals: list[complex],
                           z: complex, pp: ParamPoint) -> np.ndarray:
    """Saddle-point residuals of the single-vertex (Jordan) quiver variant."""
    t1, t2, h = pp.t1, pp.t2, pp.hbar
    out = []
    for a, x in enumerate(xvals):
        lhs = 1.0 + 0.0j
        for u in uvals:
            lhs *= (1 - u / x) / (1 - h * u / x)
        for b, y in enumerate(xvals):
            if b == a:
                continue
            lhs *= ((x - y / h) * (x - t1 * y) * (x - t2 * y)
                    / ((x - h * y) * (x - y / t1) * (x - y / t2)))
        out.append(lhs - z)
    return np.array(out, dtype=complex)


@dataclass
class BetheSolution:
    roots: dict[int, list[complex]]
    residual: float
    iterations: int
    converged: bool


def bethe_solve(v: tuple[int, ...], w: tuple[int, ...], pp: ParamPoint,
                seed: int = 0, prefix: str = "u", max_restarts: int = 12,
                max_iter: int = 80, tol: float = 1e-12) -> BetheSolution:
    """Damped Newton on the saddle-point system from randomized starts.

    Starting points sit near the canonical weights of a fixed point of the
    same profile, jittered multiplicatively.
    """
    n = pp.n_colors
    from .partitions import fixed_points
    from .envelopes import restriction_values
    rng = np.random.default_rng(seed)
    anchors = fixed_points(v, w, n, u_names=None)
    slots = [(k, i) for k in range(n) for i in range(v[k])]
    size = len(slots)
    if size == 0:
        return BetheSolution({k: [] for k in range(n)}, 0.0, 0, True)

    def unpack(vec):
        xv: dict[int, list[complex]] = {k: [] for k in range(n)}
        for (k, _), val in zip(slots, vec):
            xv[k].append(val)
        return xv

    def fun(vec):
        return bethe_residuals(unpack(vec), pp, w, prefix)

    best = None
    total_it = 0
    for attempt in range(max_restarts):
        if anchors:
            anchor = anchors[attempt % len(anchors)]
            vals, _ = restriction_values(anchor, pp, framed=False)
            x0 = []
            for k, i in slots:
                base = vals[f"x{k}_{i + 1}"]
                jit = 1.0 + 0.35 * (rng.standard_normal() + 1j * rng.standard_normal())
                x0.append(base * jit)
            x0 = np.array(x0, dtype=complex)
        else:
            x0 = rng.standard_normal(size) + 1j * rng.standard_normal(size)
        x = x0
        for it in range(max_iter):
            total_it += 1
            f = fun(x)
            r = float(np.max(np.abs(f)))
            if r < tol:
                return BetheSolution(unpack(x), r, total_it, True)
            jac = np.zeros((size, size), dtype=complex)
            hstep = 1e-7
            for j in range(size):
                dx = np.zeros(size, dtype=complex)
                dx[j] = hstep * max(1.0, abs(x[j]))
                jac[:, j] = (fun(x + dx) - fun(x - dx)) / (2 * dx[j])
            try:
                step = np.linalg.solve(jac, f)
            except np.linalg.LinAlgError:
                break
            alpha = 1.0
            for _ in range(25):
                xn = x - alpha * step
                if np.max(np.abs(fun(xn))) < r:
                    x = xn
                    break
                alpha /= 2
            else:
                break
        f = fun(x)
        r = float(np.max(np.abs(f)))
        if best is None or r < best.residual:
            best = BetheSolution(unpack(x), r, total_it, r < tol)
    return best
