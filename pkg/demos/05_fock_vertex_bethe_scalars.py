"""Walkthrough: Fock coefficients, vertex series, Bethe roots, scalar kernels."""

import numpy as np

from ellstab import (ColoredPartition, Envelope, EnvelopeSpec, Monomial,
                     bethe_residuals, bethe_solve, fixed_points,
                     jackson_term_ratio, lowering_coefficient, phi_eigenvalue,
                     raising_coefficient, rll_scalar_residual,
                     sample_param_point, vertex_series)

N = 3
pp = sample_param_point(51, N, extra_vars=["u", "zarg"])

# Cartan eigenvalues and ladder coefficients of the lowest-weight module.
lam = ColoredPartition((2, 1), 0, N)
z = Monomial.var("zarg")
print("Cartan eigenvalues on (2,1):")
for j in range(N):
    gv = phi_eigenvalue(lam, j, z, pp)
    print(f"  residue {j}: value {gv.materialize(pp):.6f}, "
          f"exact hbar exponent {gv.mono.get('t1')}")
print("raise by (2,2):", raising_coefficient(lam, (2, 2), pp).materialize(pp))
print("lower by (2,1):", lowering_coefficient(lam, (2, 1), pp).materialize(pp))

# The vertex series: degree-zero law and the independent per-term oracle.
ppv = sample_param_point(41, N, framing_counts={"u": [1, 0, 0]})
basis = fixed_points((1, 1, 1), (1, 0, 0), N)
lam_fp = basis[0]
series = vertex_series(lam_fp, lam_fp, 3, ppv)
env = Envelope(EnvelopeSpec(lam_fp, "hat"))
qp = env.qp_unit_factors()
print("\nvertex series of", lam_fp.partitions(), "- envelope restriction:",
      series.envelope_at_mu)
worst = 0.0
for d, c in series.coefficients.items():
    oracle = jackson_term_ratio(lam_fp, d, ppv, qp) * series.envelope_at_mu
    worst = max(worst, abs(c - oracle) / max(abs(c), 1e-300))
print("worst deviation from the Jackson-term oracle:", worst)

# Bethe saddle-point equations: the one-variable closed form and Newton.
z0, u, h = ppv.values["z0"], ppv.values["u0_1"], ppv.hbar
x = u * (1 - h * z0) / (1 - z0)
print("\n1-variable closed-form residual:",
      np.max(np.abs(bethe_residuals({0: [x], 1: [], 2: []}, ppv, (1, 0, 0)))))
sol = bethe_solve((1, 1, 1), (1, 0, 0), ppv, seed=5)
print("Newton on v=(1,1,1): residual", sol.residual, "converged:", sol.converged)

# The fusion/exchange scalar consistency identity across colors.
pps = sample_param_point(61, N).extended({"uu": 0.83 + 0.41j})
for k in range(N):
    print(f"scalar identity residual, color {k}:",
          rll_scalar_residual(pps, Monomial.var("uu"), k))
