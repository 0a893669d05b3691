"""Grid functions, Holder norms and Young integrals.

Everything in this library lives on a uniform grid over [0,1]. This script
builds a few paths, measures their Holder regularity, and evaluates Young
integrals against closed forms.
"""

import numpy as np

from ellipticsde import (
    GridFunction,
    green_kernel,
    holder_norm,
    kernel_integral,
    lacunary_path,
    trapezoid,
    young_integral,
)

n = 256
t = GridFunction.from_callable(lambda u: u, n)
parabola = GridFunction.from_callable(lambda u: u**2, n)
rough = lacunary_path(n, 0.6, phase_seed=1)

print("== Holder regularity ==")
for name, f in [("t", t), ("t^2", parabola), ("lacunary(0.6)", rough)]:
    for gamma in (0.4, 0.6, 0.9):
        rep = holder_norm(f, gamma)
        print(f"  |{name}|_{gamma}: sup {rep.sup_norm:.3f}, seminorm {rep.seminorm:.3f}")

print("\n== Trapezoid quadrature ==")
print(f"  int_0^1 t^2 dt = {trapezoid(parabola, 0.0, 1.0):.6f} (exact 1/3)")
print(f"  additivity: [0,1] == [0,1/2] + [1/2,1]:",
      trapezoid(parabola, 0, 1) == trapezoid(parabola, 0, 0.5) + trapezoid(parabola, 0.5, 1))

print("\n== Young integrals (left-point Riemann sums) ==")
v = young_integral(t, parabola, 0.0, 1.0).value
print(f"  int_0^1 u d(u^2) = {v:.5f} (exact 2/3)")
v = young_integral(t, rough, 0.0, 1.0).value
print(f"  int_0^1 u d(lacunary) = {v:.5f} (well-defined: exponents sum above 1)")

print("\n== Green kernel of the Dirichlet problem ==")
print(f"  K(0.5, 0.5) = {green_kernel(0.5, 0.5)} (peak 1/4)")
print(f"  K(0, xi) = K(1, xi) = 0 enforce the boundary conditions")
one = GridFunction(n, np.ones(n + 1))
print(f"  int_0^1 K(0.5, xi) dxi = {kernel_integral(0.5, one, t).value:.6f} "
      f"(exact t(1-t)/2 = 0.125)")
