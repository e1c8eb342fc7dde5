"""Closed-form scalar kernels: vacuum OPE factor, exchange scalars, fusion
scalars and their consistency identity.

All kernels are ratios of triple Gamma factors over the moduli
(t1^N, t2^N, hbar) or (t1^N, t2^N, p/p*), with rational-power prefactors
(u/v)^eta handled through the exact-exponent monomial mechanism so that both
sides of every identity share one branch choice.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .core import (HBAR, Monomial, ParamPoint, SingularityError, qpoch_inf)

SQRT_HBAR = HBAR ** Fraction(1, 2)
MINUS = Monomial.var("sgn")


def eta_pairing(k: int, l: int, n: int) -> Fraction:
    """eta_{kl} = min(k,l) (N - max(k,l)) / N for 0 <= k, l <= N-1."""
    i, j = min(k % n, l % n), max(k % n, l % n)
    return Fraction(i * (n - j), n)


def _np_qpoch3(z: complex, a: complex, b: complex, c: complex,
               cutoff: float = 1e-18) -> complex:
    """(z; a, b, c)_inf with the lattice truncated at |z a^m b^n c^k| < cutoff."""
    for q in (a, b, c):
        if abs(q) >= 1:
            raise SingularityError("triple Pochhammer needs moduli < 1")
    az = max(abs(z), cutoff)

    def axis(q):
        m = max(2, int(np.ceil(np.log(cutoff / az) / np.log(abs(q)))) + 1)
        return q ** np.arange(m)

    pa, pb, pc = axis(a), axis(b), axis(c)
    bc = np.outer(pb, pc).ravel()
    bc = bc[np.abs(bc) * az >= cutoff * min(1.0, abs(a))]
    res = 1.0 + 0.0j
    for wa in pa:
        w = wa * bc
        w = w[np.abs(w) * az >= cutoff]
        if w.size == 0 and abs(wa) * az < cutoff:
            break
        res *= np.prod(1.0 - z * w) if w.size else 1.0
    return complex(res)


def gamma3v(z: complex, a: complex, b: complex, c: complex,
            cutoff: float = 1e-18) -> complex:
    """Triple Gamma factor Gamma(z; a, b, c), vectorized evaluation."""
    if z == 0:
        raise SingularityError("triple Gamma rejects z = 0")
    return _np_qpoch3(z, a, b, c, cutoff) * _np_qpoch3(a * b * c / z, a, b, c, cutoff)


def qpoch2_ratio(z: complex, q_num: complex, q_den: complex, q2: complex,
                 at_one: bool = False, cutoff: float = 1e-18) -> complex:
    """(z; q_num, q2)_inf / (z; q_den, q2)_inf with z = 1 regularized.

    With ``at_one`` the common vanishing (0,0) factor of numerator and
    denominator is dropped.
    """
    def dpoch(q1):
        m1 = max(2, int(np.ceil(np.log(cutoff) / np.log(abs(q1)))) + 1)
        m2 = max(2, int(np.ceil(np.log(cutoff) / np.log(abs(q2)))) + 1)
        w = np.outer(q1 ** np.arange(m1), q2 ** np.arange(m2)).ravel()
        w = w[np.abs(w) * max(abs(z), 1.0) >= cutoff]
        if at_one:
            w = w[w != 1.0 + 0.0j]
        return np.prod(1.0 - z * w)

    return complex(dpoch(q_num) / dpoch(q_den))


# ---------------------------------------------------------------------------
# Vacuum OPE scalar
# ---------------------------------------------------------------------------

def mu_vacuum_ope(framing_w: tuple[int, ...], pp: ParamPoint,
                  prefix: str = "u") -> complex:
    """Normal-ordering scalar of the ordered product of vacuum intertwiners.

    Product over color pairs k <= l and all framing index pairs; the self
    pair evaluates the double-Pochhammer ratio at argument 1 with its common
    vanishing factor removed.
    """
    n = pp.n_colors
    t1, t2 = pp.t1, pp.t2
    big1, big2 = t1 ** n, t2 ** n
    hbar, p = pp.hbar, pp.p
    out = 1.0 + 0.0j
    for k in range(n):
        for l in range(k, n):
            eta = eta_pairing(k, l, n)
            for i in range(1, framing_w[k] + 1):
                for j in range(1, framing_w[l] + 1):
                    uk = Monomial.var(f"{prefix}{k}_{i}")
                    ul = Monomial.var(f"{prefix}{l}_{j}")
                    pref = pp.materialize((MINUS * SQRT_HBAR * uk) ** eta)
                    ratio = pp.materialize(ul / uk)
                    self_pair = (k == l and i == j)
                    z1 = big1 * t1 ** (k - l) * ratio
                    z2 = t2 ** (l - k) * ratio
                    out *= pref
                    out *= qpoch2_ratio(z1, p, hbar, big1)
                    out *= qpoch2_ratio(z2, p, hbar, big2, at_one=self_pair)
    return out


# ---------------------------------------------------------------------------
# Exchange scalars of the two transition matrices
# ---------------------------------------------------------------------------

def mu_exchange(pp: ParamPoint, z: Monomial, k: int, l: int) -> complex:
    """Type-I exchange kernel mu(z)_{kl}; reciprocal rule for k > l."""
    n = pp.n_colors
    if k % n > l % n:
        return 1.0 / mu_exchange(pp, z ** -1, l, k)
    t1, t2 = pp.t1, pp.t2
    big1, big2 = t1 ** n, t2 ** n
    zv = pp.materialize(z)
    pref = pp.materialize(z ** (-eta_pairing(k, l, n)))
    d = k - l  # <= 0 here

    def block(h):
        num = (gamma3v(t2 ** (-d) * zv, big1, big2, h)
               * gamma3v(big1 * t1 ** d * zv, big1, big2, h))
        den = (gamma3v(big1 * t2 ** (-d) * zv, big1, big2, h)
               * gamma3v(big1 * big2 * t1 ** d * zv, big1, big2, h))
        return num / den

    return pref * block(pp.hbar) / block(pp.p)


def mu_star_exchange(pp: ParamPoint, z: Monomial, k: int, l: int) -> complex:
    """Type-II exchange kernel mu*(z)_{kl}; reciprocal rule for k > l."""
    n = pp.n_colors
    if k % n > l % n:
        return 1.0 / mu_star_exchange(pp, z ** -1, l, k)
    t1, t2 = pp.t1, pp.t2
    big1, big2 = t1 ** n, t2 ** n
    zv = pp.materialize(z)
    pref = pp.materialize(z ** (+eta_pairing(k, l, n)))
    d = k - l
    h = pp.hbar

    def block(shift, nome):
        num = (gamma3v(shift * big2 * t1 ** (-d) * zv, big1, big2, nome)
               * gamma3v(shift * big1 * big2 * t2 ** d * zv, big1, big2, nome))
        den = (gamma3v(shift * t1 ** (-d) * zv, big1, big2, nome)
               * gamma3v(shift * big2 * t2 ** d * zv, big1, big2, nome))
        return num / den

    return pref * block(h, h) * block(1.0, pp.pstar)


def chi_exchange(pp: ParamPoint, z: Monomial, k: int, l: int) -> complex:
    """Exchange scalar between the two kinds of intertwiners."""
    n = pp.n_colors
    t1, t2 = pp.t1, pp.t2
    big1, big2 = t1 ** n, t2 ** n
    h = pp.hbar
    zv = pp.materialize(z)
    sq = pp.materialize(SQRT_HBAR)
    pref = pp.materialize(z ** (-eta_pairing(k, l, n)))
    d = (k % n) - (l % n)
    if d <= 0:
        num = (gamma3v(sq * big2 * t2 ** d * zv, big1, big2, h)
               * gamma3v(sq * t1 ** (-d) * zv, big1, big2, h))
        den = (gamma3v(sq * big2 * t1 ** (-d) * zv, big1, big2, h)
               * gamma3v(sq * big1 * big2 * t2 ** d * zv, big1, big2, h))
    else:
        num = (gamma3v(sq * t2 ** d * zv, big1, big2, h)
               * gamma3v(sq * big1 * t1 ** (-d) * zv, big1, big2, h))
        den = (gamma3v(sq * big1 * big2 * t1 ** (-d) * zv, big1, big2, h)
               * gamma3v(sq * big1 * t2 ** d * zv, big1, big2, h))
    return pref * num / den


def rho_plus(pp: ParamPoint, z: Monomial, star: bool = False) -> complex:
    """Fusion scalar rho^+ (rho^{+*} with the shifted nome)."""
    n = pp.n_colors
    big1, big2 = pp.t1 ** n, pp.t2 ** n
    zv = pp.materialize(z)
    nome = pp.pstar if star else pp.p
    return gamma3v(1.0 / zv, big1, big2, nome) / gamma3v(zv, big1, big2, nome)


def rho_ratio(pp: ParamPoint, z: Monomial) -> complex:
    """rho(u) = rho^{+*}(u) / rho^{+}(u)."""
    return rho_plus(pp, z, star=True) / rho_plus(pp, z, star=False)


def rll_scalar_residual(pp: ParamPoint, z: Monomial, k: int) -> float:
    """Relative residual of the scalar consistency identity

    rho^+(u)/rho^{+*}(u) = chi(h^(1/2)/u)_{kk} / chi(h^(1/2) u)_{kk}
                           * mu(u)_{kk} / mu*(u)_{kk}.
    """
    lhs = rho_plus(pp, z) / rho_plus(pp, z, star=True)
    rhs = (chi_exchange(pp, SQRT_HBAR / z, k, k) / chi_exchange(pp, SQRT_HBAR * z, k, k)
           * mu_exchange(pp, z, k, k) / mu_star_exchange(pp, z, k, k))
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs))


def mu_exchange_scalar(g1, g2, pp: ParamPoint) -> complex:
    """The vacuum exchange scalar of two framing groups, mu(u1/u2)."""
    n = pp.n_colors
    out = 1.0 + 0.0j
    for k in range(n):
        for l in range(n):
            for i in range(1, g1.w[k] + 1):
                for j in range(1, g2.w[l] + 1):
                    z = (Monomial.var(f"{g2.prefix}{l}_{j}")
                         / Monomial.var(f"{g1.prefix}{k}_{i}"))
                    out *= mu_exchange(pp, z, k, l)
    return out


def mu_star_exchange_scalar(g1, g2, pp: ParamPoint) -> complex:
    """The vacuum exchange scalar of the dual intertwiners, mu*(u1/u2)."""
    n = pp.n_colors
    out = 1.0 + 0.0j
    for k in range(n):
        for l in range(n):
            for i in range(1, g1.w[k] + 1):
                for j in range(1, g2.w[l] + 1):
                    z = (Monomial.var(f"{g1.prefix}{k}_{i}")
                         / Monomial.var(f"{g2.prefix}{l}_{j}"))
                    out *= mu_star_exchange(pp, z, k, l)
    return out


def vacuum_c_constants(pp: ParamPoint) -> tuple[complex, complex]:
    """The two ladder constants (p h^{+-1}; p)_inf / (p; p)_inf."""
    p, h = pp.p, pp.hbar
    base = qpoch_inf(p, p)
    return (qpoch_inf(p * h, p) / base, qpoch_inf(p / h, p) / base)
