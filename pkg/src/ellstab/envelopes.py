"""Elliptic stable envelopes: building blocks, symmetrization, restriction.

An envelope attached to a fixed point is the per-color symmetrization of a
product of theta factors (the chamber-ordered S-product in its plain, hatted
or tilde normalization) times a sum of tree weights, one admissible rooted
tree per framing slot.  The compiled structure keeps every theta argument as
an exact monomial; evaluation assigns complex values to the Chern-root
variables and materializes each permutation term through fixed logarithms.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .core import (GV_ONE, HBAR, BudgetError, GradedValue, Monomial, ParamPoint,
                   SingularityError)
from .partitions import (Box, FixedPoint, box_slot_vars, chern_slots,
                         index_degrees, lambda_trees, phi_weight, rho_less)

VARIANTS = ("plain", "hat", "tilde")


def default_kahler(n_colors: int) -> dict[int, Monomial]:
    return {i: Monomial.var(f"z{i}") for i in range(n_colors)}


@dataclass(frozen=True)
class EnvelopeSpec:
    """What to build: fixed point, normalization variant, nome, Kahler args."""

    fp: FixedPoint
    variant: str = "hat"
    star: bool = False
    kahler: tuple[tuple[int, Monomial], ...] | None = None
    tree_filter: object = None

    def kahler_map(self) -> dict[int, Monomial]:
        if self.kahler is None:
            return default_kahler(self.fp.n_colors)
        return dict(self.kahler)


def kahler_args(mapping: dict[int, Monomial]) -> tuple[tuple[int, Monomial], ...]:
    return tuple(sorted(mapping.items()))


@dataclass
class ThetaProduct:
    """Product of odd theta factors with an overall sign, all graded."""

    num: list[Monomial] = field(default_factory=list)
    den: list[Monomial] = field(default_factory=list)
    sign: int = 0

    def mul_num(self, mono: Monomial):
        self.num.append(mono)

    def mul_den(self, mono: Monomial):
        self.den.append(mono)

    def mul_ratio(self, num: Monomial, den: Monomial, minus: bool = True):
        self.num.append(num)
        self.den.append(den)
        if minus:
            self.sign += 1

    def eval(self, pp: ParamPoint, star: bool) -> GradedValue:
        gv = GradedValue(Monomial.one(), (-1.0) ** (self.sign % 2))
        for m in self.num:
            gv = gv * pp.theta(m, star)
        for m in self.den:
            th = pp.theta(m, star)
            if th.coeff == 0:
                raise SingularityError(f"theta pole in denominator at {m}")
            gv = gv / th
        return gv

    def mono_total(self) -> Monomial:
        total = Monomial.one()
        for m in self.num:
            total = total * m ** Fraction(-1, 2)
        for m in self.den:
            total = total * m ** Fraction(1, 2)
        return total


def _u_mono(fp: FixedPoint, rank: int) -> Monomial:
    slot, _ = fp.slots[rank]
    return Monomial.var(slot.u_var)


def _rho_le_root(fp: FixedPoint, box: Box, rank: int) -> bool:
    """rho_box <= rho of the (1,1) anchor of the given framing slot."""
    anchor = fp.root_anchor(rank)
    if box.owner == anchor.owner and (box.x, box.y) == (1, 1):
        return True
    return not rho_less(anchor, 0, box)


def s_factor_product(fp: FixedPoint, variant: str) -> ThetaProduct:
    """The unsymmetrized S-product of the requested normalization."""
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    n = fp.n_colors
    boxes = fp.boxes()
    xvar = box_slot_vars(fp)
    x = {b: Monomial.var(xvar[b]) for b in boxes}
    t1 = Monomial.var("t1")
    t2 = Monomial.var("t2")
    prod = ThetaProduct()

    for a in boxes:
        for b in boxes:
            if a is b or (b.content - a.content - 1) % n != 0:
                continue
            if rho_less(a, 1, b):
                if variant == "plain":
                    prod.mul_num(t1 * x[a] / x[b])
                else:
                    prod.mul_ratio(t1 * x[a] / x[b], t2 * x[b] / x[a])
            else:
                if variant == "plain":
                    prod.mul_num(t2 * x[b] / x[a])
                else:
                    prod.mul_ratio(t2 * x[b] / x[a], t1 * x[a] / x[b])

    for rank in range(len(fp.slots)):
        slot, _ = fp.slots[rank]
        u = _u_mono(fp, rank)
        for a in boxes:
            if a.content % n != slot.color % n:
                continue
            le = _rho_le_root(fp, a, rank)
            if variant == "plain":
                prod.mul_num(x[a] / u if le else HBAR * u / x[a])
            elif variant == "hat":
                if not le:
                    prod.mul_ratio(HBAR * u / x[a], x[a] / u)
            else:  # tilde
                if le:
                    prod.mul_ratio(x[a] / u, HBAR * u / x[a])

    for a in boxes:
        for b in boxes:
            if a is b or (b.content - a.content) % n != 0:
                continue
            if not rho_less(a, 0, b):
                continue
            if variant == "plain":
                prod.mul_den(x[a] / x[b])
                prod.mul_den(HBAR * x[a] / x[b])
            elif variant == "hat":
                prod.mul_num(x[b] / x[a])
                prod.mul_den(HBAR * x[a] / x[b])
            else:
                prod.mul_num(HBAR * x[b] / x[a])
                prod.mul_den(x[a] / x[b])
    return prod


def normalization_kernel(fp: FixedPoint, which: str) -> ThetaProduct:
    """The K-factor relating the plain S-product to its hat/tilde form."""
    n = fp.n_colors
    boxes = fp.boxes()
    xvar = box_slot_vars(fp)
    x = {b: Monomial.var(xvar[b]) for b in boxes}
    t1, t2 = Monomial.var("t1"), Monomial.var("t2")
    prod = ThetaProduct()
    for a in boxes:
        for b in boxes:
            if a is b or (b.content - a.content - 1) % n != 0:
                continue
            if rho_less(a, 1, b):
                prod.mul_num(t2 * x[b] / x[a])
            else:
                prod.mul_num(t1 * x[a] / x[b])
    for rank in range(len(fp.slots)):
        slot, _ = fp.slots[rank]
        u = _u_mono(fp, rank)
        for a in boxes:
            if a.content % n != slot.color % n:
                continue
            prod.mul_num(x[a] / u if which == "I" else HBAR * u / x[a])
    for a in boxes:
        for b in boxes:
            if a is b or (b.content - a.content) % n != 0:
                continue
            prod.mul_den(x[a] / x[b] if which == "I" else HBAR * x[a] / x[b])
    return prod


def normalization_parity(fp: FixedPoint, which: str) -> int:
    """Parity exponent in S = (-1)^eps K S-normalized."""
    n = fp.n_colors
    boxes = fp.boxes()
    eps = 0
    for a in boxes:
        for b in boxes:
            if a is not b and (b.content - a.content - 1) % n == 0:
                eps += 1
    for rank in range(len(fp.slots)):
        slot, _ = fp.slots[rank]
        for a in boxes:
            if a.content % n != slot.color % n:
                continue
            le = _rho_le_root(fp, a, rank)
            if (which == "I" and not le) or (which == "II" and le):
                eps += 1
    return eps % 2


@dataclass
class TreeTupleWeight:
    """Compiled data of one admissible tree choice: sign and phi arguments."""

    kappa: int
    phi_args: list[tuple[Monomial, Monomial]]


def tree_weights(fp: FixedPoint, kahler: dict[int, Monomial],
                 tree_filter=None) -> list[TreeTupleWeight]:
    """All tree-tuple weights of a fixed point, compiled to phi arguments."""
    n = fp.n_colors
    xvar = box_slot_vars(fp)
    degrees = index_degrees(fp)
    box_at = {(b.owner, b.x, b.y): b for b in fp.boxes()}

    per_slot: list[list] = []
    for rank, (slot, lam) in enumerate(fp.slots):
        if lam.size == 0:
            per_slot.append([None])
            continue
        choices = lambda_trees(lam, tree_filter)
        if not choices:
            raise ValueError(f"no admissible tree for partition {lam.rows}")
        per_slot.append([(rank, t) for t in choices])

    def subtree_mono(rank, tree, cell) -> Monomial:
        acc = Monomial.one()
        for cx, cy in tree.subtree[cell]:
            b = box_at[(rank, cx, cy)]
            acc = acc * kahler[b.content % n] * HBAR ** degrees[b]
        return acc

    out = []
    for combo in itertools.product(*per_slot):
        kappa = 0
        phi_args: list[tuple[Monomial, Monomial]] = []
        for entry in combo:
            if entry is None:
                continue
            rank, tree = entry
            kappa += tree.kappa
            u = _u_mono(fp, rank)
            root = box_at[(rank, 1, 1)]
            xr = Monomial.var(xvar[root])
            phi_args.append((xr / u, subtree_mono(rank, tree, (1, 1))))
            for par_cell, child_cell in tree.edges():
                par = box_at[(rank,) + par_cell]
                child = box_at[(rank,) + child_cell]
                arg = (Monomial.var(xvar[child]) * phi_weight(fp, par)
                       / (Monomial.var(xvar[par]) * phi_weight(fp, child)))
                phi_args.append((arg, subtree_mono(rank, tree, child_cell)))
        out.append(TreeTupleWeight(kappa, phi_args))
    return out


def _cancel(num: list[Monomial], den: list[Monomial]):
    """Cancel matching theta arguments between numerator and denominator.

    Identical factors cancel exactly (theta(m)/theta(m) = 1) and a numerator
    m against a denominator 1/m contracts to the exact closed ratio
    theta(m)/theta(1/m) = GradedValue(1/m, -m_value).  Both removals make the
    removable zero-over-zero combinations at restriction points evaluable.
    """
    from collections import Counter
    cn, cd = Counter(num), Counter(den)
    common = cn & cd
    cn, cd = cn - common, cd - common
    inv_pairs: list[Monomial] = []
    for m in sorted(cn, key=repr):
        minv = m ** -1
        while cn[m] and cd[minv]:
            cn[m] -= 1
            cd[minv] -= 1
            inv_pairs.append(m)
    return (sorted(cn.elements(), key=repr),
            sorted(cd.elements(), key=repr),
            inv_pairs)


class Envelope:
    """A compiled stable envelope; evaluate on Chern-root value assignments."""

    def __init__(self, spec: EnvelopeSpec, sym_budget: int = 40320):
        self.spec = spec
        fp = spec.fp
        self.fp = fp
        self.slots = chern_slots(fp)
        self.nvars = {i: [f"x{i}_{j}" for j in range(1, len(bs) + 1)]
                      for i, bs in self.slots.items()}
        self.sprod = s_factor_product(fp, spec.variant)
        self.trees = tree_weights(fp, spec.kahler_map(), spec.tree_filter)
        hbar_mono = HBAR
        self._terms = []
        for tw in self.trees:
            num = list(self.sprod.num)
            den = list(self.sprod.den)
            for xm, ym in tw.phi_args:
                num.append(xm * ym)
                num.append(hbar_mono)
                den.append(xm)
                den.append(ym)
            num, den, inv = _cancel(num, den)
            coeff = (-1.0) ** ((self.sprod.sign + tw.kappa) % 2)
            self._terms.append((num, den, inv, coeff))
        if not self.trees:
            num, den, inv = _cancel(list(self.sprod.num), list(self.sprod.den))
            self._terms.append((num, den, inv, (-1.0) ** (self.sprod.sign % 2)))
        size = 1
        for i, names in self.nvars.items():
            size *= math.factorial(len(names))
        if size > sym_budget:
            raise BudgetError(f"symmetrization over {size} permutations exceeds budget")
        self._perms = [list(itertools.permutations(range(len(self.nvars[i]))))
                       for i in range(fp.n_colors)]

    def x_names(self) -> list[str]:
        return [name for i in range(self.fp.n_colors) for name in self.nvars[i]]

    def qp_unit_factors(self) -> dict[str, Monomial]:
        """Exact multiplier of the envelope under x_a -> p x_a, per slot.

        Derived from the theta shift law applied to the compiled factors: a
        numerator argument m contributes m^(-k) (k the slot exponent in m), a
        denominator argument m^(+k); for the ratio-normalized variants every
        p-power and sign cancels pairwise and the result is an x-independent
        monomial in the Kahler variables and hbar (the Kahler part is the
        z^(-1) of the quasi-periodicity law, the hbar part its correction).
        Raises if the factor differs between compiled terms or retains Chern
        variables.
        """
        out: dict[str, Monomial] = {}
        for name in self.x_names():
            factor = None
            for num, den, inv, _ in self._terms:
                m_tot = Monomial.one()
                for m in num:
                    k = m.get(name)
                    if k:
                        m_tot = m_tot * m ** (-k)
                for m in den:
                    k = m.get(name)
                    if k:
                        m_tot = m_tot * m ** k
                if factor is None:
                    factor = m_tot
                elif factor != m_tot:
                    raise ValueError("quasi-periodicity factor is not uniform "
                                     "across tree terms")
            assert factor is not None
            if any(v.startswith("x") for v in factor.exps):
                raise ValueError("quasi-periodicity factor retains Chern roots; "
                                 "only ratio-normalized variants have one")
            out[name] = factor
        return out

    def _term(self, pp: ParamPoint) -> complex:
        star = self.spec.star
        total = 0.0 + 0.0j
        for num, den, inv, coeff in self._terms:
            gv = GradedValue(Monomial.one(), coeff)
            for m in num:
                gv = gv * pp.theta(m, star)
            for m in den:
                th = pp.theta(m, star)
                if th.coeff == 0:
                    raise SingularityError(f"theta pole in denominator at {m}")
                gv = gv / th
            for m in inv:
                # theta(m)/theta(1/m) contracted: equals -materialize(m) times 1/m
                gv = gv * GradedValue(m ** -1, -pp.materialize(m))
            total += gv.materialize(pp)
        return total

    def eval(self, pp: ParamPoint, values: dict[str, complex],
             logs: dict[str, complex] | None = None, sym: bool = True) -> complex:
        """Symmetrized value at an assignment of the Chern-root variables."""
        import cmath
        if logs is None:
            logs = {k: cmath.log(v) for k, v in values.items()}
        if not sym:
            return self._term(pp.extended(values, logs))
        total = 0.0 + 0.0j
        names = self.nvars
        for combo in itertools.product(*self._perms):
            vperm: dict[str, complex] = dict(values)
            lperm: dict[str, complex] = dict(logs)
            for i, perm in enumerate(combo):
                for j, pj in enumerate(perm):
                    vperm[names[i][j]] = values[names[i][pj]]
                    lperm[names[i][j]] = logs[names[i][pj]]
            total += self._term(pp.extended(vperm, lperm))
        return total


def restriction_values(fp_rester: FixedPoint, pp: ParamPoint,
                       p_shifts: dict[str, int] | None = None,
                       framed: bool = True):
    """Chern-root values (and logs) of the canonical assignment of a fixed point.

    ``p_shifts`` multiplies the slot value by p^d for quasi-periodicity checks,
    keyed by variable name.  With ``framed`` the tautological weight carries
    the framing coordinate u of the slot (needed to separate equal boxes of
    distinct framing slots); without it the bare t1^(1-y) t2^(1-x) weight is
    used, the convention of the vertex-function normalization.
    """
    values: dict[str, complex] = {}
    logs: dict[str, complex] = {}
    for i, boxes in chern_slots(fp_rester).items():
        for j, box in enumerate(boxes, start=1):
            name = f"x{i}_{j}"
            mono = phi_weight(fp_rester, box)
            if not framed:
                slot, _ = fp_rester.slots[box.owner]
                mono = mono / Monomial.var(slot.u_var)
            if p_shifts and name in p_shifts and p_shifts[name]:
                mono = mono * Monomial.var("p") ** p_shifts[name]
            values[name] = pp.materialize(mono)
            logs[name] = pp.log_of(mono)
    return values, logs


def restrict(env: Envelope, mu: FixedPoint, pp: ParamPoint,
             p_shifts: dict[str, int] | None = None,
             framed: bool = True) -> complex:
    """Evaluate an envelope at the canonical Chern assignment of mu."""
    if mu.v != env.fp.v or mu.w != env.fp.w:
        raise ValueError("restriction point must share the (v, w) class")
    values, logs = restriction_values(mu, pp, p_shifts, framed)
    return env.eval(pp, values, logs)


# ---------------------------------------------------------------------------
# Factorization of the plain S-product through the K kernels
# ---------------------------------------------------------------------------

def factorization_residual(fp: FixedPoint, pp: ParamPoint, which: str,
                           values: dict[str, complex]) -> float:
    """Pointwise check of S = (-1)^eps K S_normalized at one assignment."""
    import cmath
    logs = {k: cmath.log(v) for k, v in values.items()}
    ppx = pp.extended(values, logs)
    plain = s_factor_product(fp, "plain").eval(ppx, False).materialize(ppx)
    variant = "hat" if which == "I" else "tilde"
    normalized = s_factor_product(fp, variant).eval(ppx, False).materialize(ppx)
    kernel = normalization_kernel(fp, which).eval(ppx, False).materialize(ppx)
    eps = normalization_parity(fp, which)
    rhs = (-1.0) ** eps * kernel * normalized
    return abs(plain - rhs) / max(abs(plain), abs(rhs))


# ---------------------------------------------------------------------------
# Shuffle product
# ---------------------------------------------------------------------------

def concat_fixed_points(fpa: FixedPoint, fpb: FixedPoint) -> FixedPoint:
    if fpa.n_colors != fpb.n_colors:
        raise ValueError("color counts differ")
    names = [s.u_var for s, _ in fpa.slots] + [s.u_var for s, _ in fpb.slots]
    if len(set(names)) != len(names):
        raise ValueError("framing variable names must be distinct")
    return FixedPoint(fpa.slots + fpb.slots, fpa.n_colors)


def shuffle_kahler_shifts(n: int, va, wa, vb, wb):
    """Kahler arguments of the two factors inside the shuffle formula.

    First factor: z_i * hbar^(w''_i - v''_i + v''_{i+1}); second factor:
    z_i * hbar^(v'_i - v'_{i-1}).
    """
    za = {i: Monomial.var(f"z{i}") * HBAR ** (wb[i] - vb[i] + vb[(i + 1) % n])
          for i in range(n)}
    zb = {i: Monomial.var(f"z{i}") * HBAR ** (va[i] - va[(i - 1) % n])
          for i in range(n)}
    return za, zb


def _cross_prefactor(fpa: FixedPoint, fpb: FixedPoint, variant: str) -> "CrossPrefactor":
    n = fpa.n_colors
    xa = box_slot_vars(fpa)
    xb = box_slot_vars(fpb)
    t1, t2 = Monomial.var("t1"), Monomial.var("t2")
    prod = ThetaProduct()
    va = {b: Monomial.var("A_" + xa[b]) for b in fpa.boxes()}
    vb = {b: Monomial.var("B_" + xb[b]) for b in fpb.boxes()}
    for a in fpa.boxes():
        for b in fpb.boxes():
            ca, cb = a.content % n, b.content % n
            if (ca + 1 - cb) % n == 0:
                if variant == "plain":
                    prod.mul_num(t1 * va[a] / vb[b])
                else:
                    prod.mul_ratio(t1 * va[a] / vb[b], t2 * vb[b] / va[a])
            if (cb + 1 - ca) % n == 0:
                if variant == "plain":
                    prod.mul_num(t2 * va[a] / vb[b])
                else:
                    prod.mul_ratio(t2 * va[a] / vb[b], t1 * vb[b] / va[a])
            if ca == cb:
                if variant == "plain":
                    prod.mul_den(va[a] / vb[b])
                    prod.mul_den(HBAR * va[a] / vb[b])
                elif variant == "hat":
                    prod.mul_num(vb[b] / va[a])
                    prod.mul_den(HBAR * va[a] / vb[b])
                else:
                    prod.mul_num(HBAR * vb[b] / va[a])
                    prod.mul_den(va[a] / vb[b])
    if variant in ("plain", "hat"):
        for rank, (slot, _) in enumerate(fpa.slots):
            u = Monomial.var(slot.u_var)
            for b in fpb.boxes():
                if b.content % n != slot.color % n:
                    continue
                if variant == "plain":
                    prod.mul_num(HBAR * u / vb[b])
                else:
                    prod.mul_ratio(HBAR * u / vb[b], vb[b] / u)
    if variant in ("plain", "tilde"):
        for rank, (slot, _) in enumerate(fpb.slots):
            u = Monomial.var(slot.u_var)
            for a in fpa.boxes():
                if a.content % n != slot.color % n:
                    continue
                if variant == "plain":
                    prod.mul_num(va[a] / u)
                else:
                    prod.mul_ratio(va[a] / u, HBAR * u / va[a])
    return prod


def shuffle_residual(fpa: FixedPoint, fpb: FixedPoint, pp: ParamPoint,
                     variant: str = "hat", star: bool = False,
                     n_assignments: int = 5, rng=None,
                     tree_filter=None) -> float:
    """Max relative deviation between a concatenated envelope and its shuffle
    product over random Chern-root assignments."""
    from .sampling import random_assignment
    if rng is None:
        rng = np.random.default_rng(0)
    n = fpa.n_colors
    big = concat_fixed_points(fpa, fpb)
    env_big = Envelope(EnvelopeSpec(big, variant, star, tree_filter=tree_filter))
    za, zb = shuffle_kahler_shifts(n, fpa.v, fpa.w, fpb.v, fpb.w)
    env_a = Envelope(EnvelopeSpec(fpa, variant, star, kahler_args(za),
                                  tree_filter=tree_filter))
    env_b = Envelope(EnvelopeSpec(fpb, variant, star, kahler_args(zb),
                                  tree_filter=tree_filter))
    pref = _cross_prefactor(fpa, fpb, variant)

    slots_big = chern_slots(big)
    slots_a = chern_slots(fpa)
    slots_b = chern_slots(fpb)
    worst = 0.0
    for _ in range(n_assignments):
        values = random_assignment(rng, env_big.x_names())
        import cmath
        logs = {k: cmath.log(v) for k, v in values.items()}
        lhs = env_big.eval(pp, values, logs)

        rhs = 0.0 + 0.0j
        choices_per_color = []
        for i in range(n):
            tot = len(slots_big[i])
            na = len(slots_a[i])
            choices_per_color.append(list(itertools.combinations(range(tot), na)))
        for picks in itertools.product(*choices_per_color):
            va: dict[str, complex] = {}
            la: dict[str, complex] = {}
            vbv: dict[str, complex] = {}
            lb: dict[str, complex] = {}
            prevals: dict[str, complex] = {}
            prelogs: dict[str, complex] = {}
            for i in range(n):
                chosen = set(picks[i])
                ja = jb = 0
                for idx in range(len(slots_big[i])):
                    src = f"x{i}_{idx + 1}"
                    if idx in chosen:
                        ja += 1
                        va[f"x{i}_{ja}"] = values[src]
                        la[f"x{i}_{ja}"] = logs[src]
                        prevals[f"A_x{i}_{ja}"] = values[src]
                        prelogs[f"A_x{i}_{ja}"] = logs[src]
                    else:
                        jb += 1
                        vbv[f"x{i}_{jb}"] = values[src]
                        lb[f"x{i}_{jb}"] = logs[src]
                        prevals[f"B_x{i}_{jb}"] = values[src]
                        prelogs[f"B_x{i}_{jb}"] = logs[src]
            ppx = pp.extended(prevals, prelogs)
            pf = pref.eval(ppx, star).materialize(ppx)
            rhs += pf * env_a.eval(pp, va, la) * env_b.eval(pp, vbv, lb)
        worst = max(worst, abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300))
    return worst
