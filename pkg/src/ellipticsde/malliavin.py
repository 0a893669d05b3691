"""Derivative of the solution with respect to the driving path.

The Frechet/Malliavin derivative is represented by a two-parameter kernel
Phi_s(t): pairing the s-slot against increments of a direction h gives the
directional derivative of the solution map, and for fBm drivers the row
s -> Phi_s(t) is the Malliavin derivative of z_t, whose |H|-norm feeds the
density experiment. Each column solves the linear elliptic equation with the
forcing term built from the Green kernel and the cutoff's derivative kernel.
"""

from dataclasses import dataclass, field

import numpy as np

from .coefficients import Coefficient
from .cutoff import (
    CutoffSpec,
    cutoff_prime,
    garsia_grad_kernel,
    sobolev_grad_kernel,
)
from .errors import DivergenceError, InvalidInputError
from .fbm import fractional_inner_product, kernel_cell_masses
from .grid import GridFunction
from .solver import Solution, SolverConfig, _solve_linear_values, green_weights
from .young import green_kernel, kernel_integral

__all__ = [
    "DerivativeKernel",
    "forcing_kernel",
    "malliavin_kernel",
    "directional_derivative",
    "derivative_norm",
    "StratoDecomposition",
    "stratonovich_decomposition",
    "sign_pattern",
]


@dataclass(frozen=True)
class DerivativeKernel:
    """Dense derivative kernel: values[i, j] = Phi_{s=i/n}(t=j/n)."""

    n: int
    values: np.ndarray = field(repr=False)
    flavor: str = "sobolev"

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.n + 1, self.n + 1):
            raise InvalidInputError(
                f"kernel must be ({self.n + 1},{self.n + 1}), got {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise InvalidInputError("kernel entries must be finite")
        values = values.copy()
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    def row(self, t: float) -> GridFunction:
        """The Malliavin-derivative profile s -> Phi_s(t) at a fixed node t."""
        j = int(round(t * self.n))
        if abs(t - j / self.n) > 1e-9 or not 0 <= j <= self.n:
            raise InvalidInputError(f"{t!r} is not a grid node")
        return GridFunction(self.n, self.values[:, j])


def _grad_kernel(x: GridFunction, spec: CutoffSpec) -> tuple[GridFunction, float]:
    """Flavor grad kernel and the constant pairing it into the forcing term.

    The constants (-2 for sobolev, +1 for garsia) are the ones under which
    the kernel pairing reproduces the cutoff's directional derivative; see
    cutoff.cutoff_derivative_forms.
    """
    if spec.flavor == "sobolev":
        return sobolev_grad_kernel(x, spec.gamma, spec.p), -2.0
    return garsia_grad_kernel(x, spec.gamma, spec.p), 1.0


def _forcing_matrix(
    z: Solution, x: GridFunction, sigma: Coefficient, spec: CutoffSpec
) -> np.ndarray:
    """Forcing term Psi[i, j] = G sigma(z_{s_i}) K(t_j, s_i) + c phi' m_{s_i} z_{t_j}."""
    nodes = x.nodes
    G = z.cutoff_value
    sig = np.asarray(sigma.fn(z.z.values), dtype=float)
    K = green_kernel(nodes[None, :], nodes[:, None])  # K[i, j] = K(t_j, s_i)
    psi = G * sig[:, None] * K
    phi_p = cutoff_prime(x, spec)
    if phi_p != 0.0:
        m, const = _grad_kernel(x, spec)
        psi = psi + const * phi_p * np.outer(m.values, z.z.values)
    return psi


def forcing_kernel(
    s: float, t: float, z: Solution, x: GridFunction, sigma: Coefficient, spec: CutoffSpec
) -> float:
    """Forcing term of the derivative equation at one (s, t) node pair.

    Away from the cutoff's transition band (phi' = 0) this reduces to
    G * sigma(z_s) * K(t, s).
    """
    i, j = x.node_index(s), x.node_index(t)
    G = z.cutoff_value
    value = G * float(sigma.fn(np.array([z.z.values[i]]))[0]) * green_kernel(t, s)
    phi_p = cutoff_prime(x, spec)
    if phi_p != 0.0:
        m, const = _grad_kernel(x, spec)
        value += const * phi_p * m.values[i] * z.z.values[j]
    return value


def malliavin_kernel(
    z: Solution,
    x: GridFunction,
    sigma: Coefficient,
    spec: CutoffSpec,
    cfg: SolverConfig,
) -> DerivativeKernel:
    """Assemble Phi by solving, for every node s, the linear equation

        Phi_s(t) = Psi_s(t) + G * int_0^1 K(t,xi) sigma'(z_xi) Phi_s(xi) dx_xi.

    The Green-kernel Young weights are computed once and shared by all n+1
    independent linear solves. Divergence of any column is re-raised with the
    offending s attached.
    """
    psi = _forcing_matrix(z, x, sigma, spec)
    weights = green_weights(x)
    G = z.cutoff_value
    # y = w - G W (R y) with R = -sigma'(z) realizes the + sign above
    r = -np.asarray(sigma.d1(z.z.values), dtype=float)
    values = np.empty_like(psi)
    for i in range(x.n + 1):
        try:
            values[i], _ = _solve_linear_values(psi[i], r, weights, G, x.n, cfg)
        except DivergenceError as exc:
            raise DivergenceError(
                f"derivative column s={i / x.n} diverged: {exc}", exc.ratio_history
            ) from exc
    return DerivativeKernel(n=x.n, values=values, flavor=spec.flavor)


def directional_derivative(kernel: DerivativeKernel, h: GridFunction) -> GridFunction:
    """Directional derivative t -> int_0^1 Phi_s(t) dh_s of the solution map."""
    if h.n != kernel.n:
        raise InvalidInputError(f"mismatched grids: n={h.n} vs n={kernel.n}")
    dh = np.diff(h.values)
    return GridFunction(kernel.n, dh @ kernel.values[:-1, :])


def derivative_norm(kernel: DerivativeKernel, t: float, hurst: float) -> float:
    """|H|-norm of the Malliavin derivative of z_t (clamped at 0)."""
    row = kernel.row(t)
    sq = fractional_inner_product(row, row, hurst)
    return float(np.sqrt(max(sq, 0.0)))


@dataclass(frozen=True)
class StratoDecomposition:
    """Pathwise integral split into Skorohod part plus trace correction."""

    pathwise: float
    trace: float
    skorohod: float


def stratonovich_decomposition(
    z: Solution,
    kernel: DerivativeKernel,
    x: GridFunction,
    sigma: Coefficient,
    spec: CutoffSpec,
    t: float,
    hurst: float,
    trace_factor: float = 1.0,
) -> StratoDecomposition:
    """Decompose the solution's stochastic integral at time t.

    pathwise is the Young value G * int K(t,xi) sigma(z_xi) dx_xi (equal to
    z_t up to the solver residual); trace integrates the Malliavin derivative
    of the integrand against |xi - s|^{2H-2}, scaled by the cutoff and the
    configurable leading constant (1 by default, pass H(2H-1) for the
    normalized-kernel convention); skorohod is defined as their difference.
    """
    if kernel.n != x.n:
        raise InvalidInputError(f"mismatched grids: n={kernel.n} vs n={x.n}")
    G = z.cutoff_value
    sig = GridFunction(x.n, np.asarray(sigma.fn(z.z.values), dtype=float))
    pathwise = G * kernel_integral(t, sig, x).value

    n = x.n
    centers = (np.arange(n) + 0.5) / n
    zm = 0.5 * (z.z.values[:-1] + z.z.values[1:])
    phim = 0.25 * (
        kernel.values[:-1, :-1]
        + kernel.values[1:, :-1]
        + kernel.values[:-1, 1:]
        + kernel.values[1:, 1:]
    )
    col = green_kernel(t, centers) * np.asarray(sigma.d1(zm), dtype=float)
    masses = kernel_cell_masses(n, hurst)
    lag = np.abs(np.arange(n)[:, None] - np.arange(n)[None, :])
    trace = trace_factor * G * float(np.sum(phim * col[None, :] * masses[lag]))
    return StratoDecomposition(pathwise=pathwise, trace=trace, skorohod=pathwise - trace)


def sign_pattern(kernel: DerivativeKernel, t: float) -> dict:
    """Observed sign structure of s -> Phi_s(t), for reporting only.

    Returns the fractions of strictly negative/positive values and the
    longest interval of consecutive strictly negative node values.
    """
    row = kernel.row(t).values
    neg = row < 0
    best_len, best_start, run, start = 0, 0, 0, 0
    for i, flag in enumerate(neg):
        if flag:
            if run == 0:
                start = i
            run += 1
            if run > best_len:
                best_len, best_start = run, start
        else:
            run = 0
    n = kernel.n
    interval = (
        (best_start / n, (best_start + best_len - 1) / n) if best_len else None
    )
    return {
        "fraction_negative": float(np.mean(neg)),
        "fraction_positive": float(np.mean(row > 0)),
        "longest_negative_interval": interval,
    }
