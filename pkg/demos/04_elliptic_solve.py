"""Solving the localized elliptic equation.

The equation z'' = sigma_M(x, z) x' with zero boundary values is solved as a
contraction fixed point of its Green-kernel form. A constant coefficient with
a linear driver has the closed-form solution c t(1-t)/2, which the discrete
solve reproduces exactly; a fractional Brownian driver exercises the general
pathwise machinery.
"""

import numpy as np

from ellipticsde import (
    CutoffSpec,
    FbmConfig,
    GridFunction,
    SolverConfig,
    constant_coefficient,
    holder_norm,
    picard_map,
    sample_fbm,
    solve_elliptic,
    tanh_coefficient,
)

n = 256
spec = CutoffSpec(level=30.0, gamma=0.5, p=2, epsilon=0.3, flavor="sobolev")
cfg = SolverConfig(kappa=0.55, tol=1e-12, max_iters=100)

print("== Closed-form check: sigma = 0.25, x(t) = t ==")
x = GridFunction.from_callable(lambda u: u, n)
sol = solve_elliptic(x, constant_coefficient(0.25), spec, cfg)
exact = 0.25 * x.nodes * (1 - x.nodes) / 2
print(f"  sup |z - c t(1-t)/2| = {np.max(np.abs(sol.z.values - exact)):.2e}")
print(f"  iterations {sol.iterations}, residual {sol.residual:.2e}")

print("\n== fBm driver, smallness-checked tanh coefficient ==")
sigma = tanh_coefficient(0.02, 0.01)
report = sigma.smallness_report(spec.level)
print(f"  smallness sup|sigma^(j)| <= 1/(M+1): holds = {report['holds']}")
for stream in range(3):
    B = sample_fbm(FbmConfig(hurst=0.75, n=n, seed=7), stream=stream)
    sol = solve_elliptic(B, sigma, spec, cfg)
    print(
        f"  path {stream}: iterations {sol.iterations}, "
        f"contraction ratio {sol.contraction_ratio:.4f}, residual {sol.residual:.1e}, "
        f"cutoff {sol.cutoff_value:.3f}, |z|_kappa {holder_norm(sol.z, cfg.kappa).norm:.4f}"
    )

print("\n== Incremental vs compact formulation ==")
B = sample_fbm(FbmConfig(hurst=0.75, n=n, seed=7), stream=1)
sol = solve_elliptic(B, sigma, spec, cfg)
gamma_z = picard_map(sol.z, B, sigma, spec)
gap = np.max(np.abs(gamma_z.values - sol.z.values))
print(f"  sup |Gamma(z) - z| = {gap:.2e} (the forms differ by a 1/(2n) Young term)")
