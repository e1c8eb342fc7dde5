"""Walkthrough: the branch-safe evaluation substrate.

Every theta argument is an exact monomial in named variables; half powers are
resolved through one fixed logarithm per variable, so algebraically equal
expressions agree to machine precision.
"""
import cmath
from fractions import Fraction

from ellstab import HBAR, Monomial, sample_param_point, theta_modular_residual

pp = sample_param_point(seed=1, n_colors=3)
print("sampled point: p = %.4f%+.4fj  t1 = %.4f%+.4fj  t2 = %.4f%+.4fj"
      % (pp.p.real, pp.p.imag, pp.t1.real, pp.t1.imag, pp.t2.real, pp.t2.imag))

# The odd theta function of a monomial argument is a graded value: a complex
# coefficient together with the exact exponent vector of its half-power part.
pp = pp.extended({"w": 0.62 + 0.35j})
w = Monomial.var("w")
th = pp.theta(w)
print("\ntheta(w) graded parts: mono =", th.mono, " coeff =", th.coeff)

# Inversion and shift laws hold to machine precision.
lhs = pp.theta(w ** -1).materialize(pp)
rhs = -th.materialize(pp)
print("theta(1/w) + theta(w) =", abs(lhs - rhs))

p = Monomial.var("p")
lhs = pp.theta(p * w).materialize(pp)
rhs = -pp.materialize(p ** Fraction(-1, 2) * w ** -1) * th.materialize(pp)
print("shift law residual    =", abs(lhs - rhs))

# The phi kernel theta(xy) theta(hbar) / (theta(x) theta(y)) carries exactly
# one residual half power, on hbar = t1 t2.
pp2 = pp.extended({"y": 1.05 - 0.2j})
print("\nphi residual monomial:", pp2.phi(w, Monomial.var("y")).mono)

# Conjugate-modulus transformation: theta on the nome p against the series on
# tau = -2 pi i / log p.
for x in (1.0, 0.3 + 0.1j, cmath.exp(0.7j) * abs(pp.p) ** 0.5):
    print("conjugate-modulus residual at %s: %.2e"
          % (x, theta_modular_residual(x, pp)))
