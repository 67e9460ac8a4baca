"""Shannon entropies of position and momentum densities.

Densities live on tensor-product grids. Numerical eigenstates are mapped to
momentum space exactly: an oscillator eigenfunction of frequency ``s`` with
``n`` quanta transforms, under ``(2 pi)^{-1/2} int dx e^{+ipx}``, into
``i^n`` times the eigenfunction of frequency ``1/s``.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .adiabatic import SmallAlphaState, solve_variational_b
from .basis import gauss_hermite_rule, hermite_functions, sinh_rule, trapezoid_axis
from .spectral import EigenPair, HamiltonianParams

log = logging.getLogger(__name__)

D = 2
BBM_BOUND = D * (1.0 + math.log(math.pi))
GAUSSIAN_2D = 1.0 + math.log(math.pi)  # unit-frequency 2D Gaussian, either space
EUR_TOLERANCE = 1e-6
SATURATION_TOLERANCE = 1e-4
BOUNDARY_TOLERANCE = 1e-12

METHODS = ("numeric-coefficients", "quadrature-grid", "analytic-small-alpha", "analytic-large-alpha")


class NegativeDensity(ValueError):
    pass


class GridTooSmall(ValueError):
    pass


@dataclass(frozen=True)
class DensityGrid:
    """Density sampled on a tensor grid with per-point quadrature weights."""

    x: np.ndarray
    y: np.ndarray
    density: np.ndarray
    weights: np.ndarray

    @classmethod
    def tensor(cls, x, wx, y, wy, density) -> "DensityGrid":
        return cls(np.asarray(x), np.asarray(y), np.asarray(density, float), np.outer(wx, wy))

    @property
    def norm(self) -> float:
        return float(np.sum(self.density * self.weights))

    def boundary_max(self) -> float:
        r = self.density
        return float(max(r[0].max(), r[-1].max(), r[:, 0].max(), r[:, -1].max()))


def shannon_entropy(grid: DensityGrid) -> float:
    """``-sum rho ln rho * weight`` of the renormalized density, with ``0 ln 0 = 0``."""
    rho = grid.density
    if np.any(rho < -1e-14):
        raise NegativeDensity(f"density reaches {rho.min():.3g}")
    rho = np.where(rho > 0, rho, 0.0)
    norm = float(np.sum(rho * grid.weights))
    if not norm > 0:
        raise NegativeDensity("density integrates to zero")
    if abs(norm - 1.0) > 1e-6:
        log.info("renormalizing density with norm %.8f", norm)
    r = rho / norm
    pos = r > 0
    return float(-np.sum(r[pos] * np.log(r[pos]) * grid.weights[pos]))


@dataclass(frozen=True)
class EntropyResult:
    S_q: float
    S_p: float
    method: str

    @property
    def sum(self) -> float:
        return self.S_q + self.S_p

    @property
    def bbm_margin(self) -> float:
        return self.sum - BBM_BOUND


@dataclass(frozen=True)
class EURCheck:
    satisfied: bool
    margin: float
    saturated: bool


def check_eur(result) -> EURCheck:
    """Compare an entropic sum (or an ``EntropyResult``) with ``2(1 + ln pi)``."""
    total = result.sum if isinstance(result, EntropyResult) else float(result)
    margin = total - BBM_BOUND
    return EURCheck(margin >= -EUR_TOLERANCE, margin, abs(margin) <= SATURATION_TOLERANCE)


# --- grids for expansion-coefficient states -------------------------------------------


def _occupied_extent(pair: EigenPair) -> tuple[int, int]:
    c = np.abs(pair.coefficients)
    keep = c > 1e-10 * c.max()
    nx = max(i.n_x for i, k in zip(pair.indices, keep) if k)
    ny = max(i.n_y for i, k in zip(pair.indices, keep) if k)
    return nx, ny


def _axis_for(n: int, freq: float, points: int | None) -> tuple[np.ndarray, np.ndarray]:
    # classical turning point of the highest occupied function plus a Gaussian tail
    L = (math.sqrt(2 * n + 1) + 6.5) / math.sqrt(freq)
    if points is None:
        h = min(0.1, 0.6 / math.sqrt(2 * n + 1)) / math.sqrt(freq)
        points = 2 * int(math.ceil(L / h)) + 1
    return trapezoid_axis(L, points)


def state_axes(pair: EigenPair, space: str, points: int | None = None):
    """Default ``(x, wx, y, wy)`` for a state, sized from its occupied quanta."""
    nx, ny = _occupied_extent(pair)
    sx, sy = pair.spec.scale_x, pair.spec.scale_y
    if space == "momentum":
        sx, sy = 1.0 / sx, 1.0 / sy
    elif space != "position":
        raise ValueError(f"space must be 'position' or 'momentum', got {space!r}")
    return _axis_for(nx, sx, points) + _axis_for(ny, sy, points)


def amplitude_from_coefficients(pair: EigenPair, a, b, space: str = "position") -> np.ndarray:
    """State amplitude on the tensor grid ``a x b`` (positions or momenta).

    In momentum space each product function picks up ``i^(n_x + n_y)`` and the
    basis frequencies are inverted; no Fourier integral is evaluated.
    """
    C = pair.coefficient_matrix()
    nx, ny = C.shape
    sx, sy = pair.spec.scale_x, pair.spec.scale_y
    if space == "position":
        Fx = hermite_functions(nx - 1, a, sx)
        Fy = hermite_functions(ny - 1, b, sy)
        return Fx.T @ C @ Fy
    if space != "momentum":
        raise ValueError(f"space must be 'position' or 'momentum', got {space!r}")
    Fx = hermite_functions(nx - 1, a, 1.0 / sx) * (1j ** np.arange(nx))[:, None]
    Fy = hermite_functions(ny - 1, b, 1.0 / sy) * (1j ** np.arange(ny))[:, None]
    return Fx.T @ C @ Fy


def density_from_coefficients(pair: EigenPair, space: str = "position", points: int | None = None,
                              axes=None) -> DensityGrid:
    x, wx, y, wy = axes if axes is not None else state_axes(pair, space, points)
    amp = amplitude_from_coefficients(pair, x, y, space)
    grid = DensityGrid.tensor(x, wx, y, wy, np.abs(amp) ** 2)
    edge = grid.boundary_max()
    if edge > BOUNDARY_TOLERANCE:
        raise GridTooSmall(f"{space} density at the grid boundary is {edge:.3g}")
    return grid


def entropy_from_coefficients(pair: EigenPair, space: str = "position", points: int | None = None,
                              axes=None) -> float:
    """Position or momentum entropy of an expansion-coefficient state."""
    return shannon_entropy(density_from_coefficients(pair, space, points, axes))


def entropies_from_coefficients(pair: EigenPair, points: int | None = None) -> EntropyResult:
    return EntropyResult(entropy_from_coefficients(pair, "position", points),
                         entropy_from_coefficients(pair, "momentum", points),
                         "numeric-coefficients")


def fourier_transform_2d(values, x, wx, y, wy, px, py) -> np.ndarray:
    """``(1/2pi) sum_ij w_i w_j f(x_i, y_j) exp(i px x_i + i py y_j)`` on a momentum grid."""
    Ex = np.exp(1j * np.outer(px, x)) * wx
    Ey = np.exp(1j * np.outer(py, y)) * wy
    return Ex @ np.asarray(values) @ Ey.T / (2 * math.pi)


def momentum_entropy_direct_ft(pair: EigenPair, points: int | None = None) -> float:
    """Momentum entropy through an explicit quadrature Fourier transform of the
    sampled position amplitude (a check on the coefficient phase identity)."""
    x, wx, y, wy = state_axes(pair, "position", points)
    psi = amplitude_from_coefficients(pair, x, y, "position")
    px, wpx, py, wpy = state_axes(pair, "momentum", points)
    amp = fourier_transform_2d(psi, x, wx, y, wy, px, py)
    return shannon_entropy(DensityGrid.tensor(px, wpx, py, wpy, np.abs(amp) ** 2))


def grid_entropy(func, x, wx, y, wy) -> float:
    """Entropy of ``|func(X, Y)|^2`` on the tensor grid."""
    X, Y = np.meshgrid(x, y, indexing="ij")
    return shannon_entropy(DensityGrid.tensor(x, wx, y, wy, np.abs(func(X, Y)) ** 2))


# --- closed forms, weak coupling ---------------------------------------------------------


def analytic_entropies_small_alpha(params: HamiltonianParams) -> EntropyResult:
    """First-order entropies; the linear terms cancel in the sum."""
    k1, k2, a = params.k1, params.k2, params.alpha
    shift = math.log(math.sqrt(k1 * k2))
    lin = 0.25 * a * (k1 + k2) / (k1 * k1 * k2 * k2)
    return EntropyResult(GAUSSIAN_2D - shift - lin, GAUSSIAN_2D + shift + lin, "analytic-small-alpha")


def i1_integral(params: HamiltonianParams, order: int = 64) -> float:
    """``int exp(-u^2) ln(k2 + alpha u^2 / (omega k2)) du``.

    This is ``sqrt(pi)`` times the Gaussian average of ``ln omega_x`` over the
    slow-mode density.
    """
    k2, a = params.k2, params.alpha
    w = SmallAlphaState(params).omega
    return gauss_hermite_rule(order).integrate(lambda u: np.log(k2 + a * u * u / (w * k2)))


def position_entropy_small_alpha_exact(params: HamiltonianParams) -> float:
    """Position entropy of the weak-coupling adiabatic state without expanding in alpha."""
    w = SmallAlphaState(params).omega
    return GAUSSIAN_2D - 0.5 * math.log(w) - i1_integral(params) / (2 * math.sqrt(math.pi))


def momentum_entropy_small_alpha_closed(params: HamiltonianParams) -> float:
    """Unexpanded momentum entropy, written with ``c = alpha / (2 beta k2^2)``."""
    st = SmallAlphaState(params)
    w, beta, c, k2 = st.omega, st.beta, st.c, params.k2
    return (math.sqrt((w / beta) / (1 - c))
            * (0.5 - math.log(math.sqrt(w / k2) / (math.pi * beta)) + (1 - 2 * c) / (2 * (1 - c))))


# --- closed forms, strong coupling -------------------------------------------------------


def analytic_entropy_large_alpha(alpha: float) -> float:
    """Simplified strong-coupling position entropy, falling as ``-(1/3) ln alpha``."""
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    return (GAUSSIAN_2D + np.euler_gamma / 4 - math.log(math.pi / 2) / 3 - math.log(alpha) / 3)


def i2_integral(alpha: float, b: float, order: int = 128) -> float:
    """``int exp(-u^2) ln(1 + 2 alpha u^2 / b) du`` by a sinh-mapped trapezoid rule."""
    u, w = sinh_rule(math.sqrt(b / (2 * alpha)), 9.0, order)
    return float(np.sum(w * np.exp(-u * u) * np.log1p(2 * alpha * u * u / b)))


def i2_integral_adaptive(alpha: float, b: float) -> float:
    f = lambda u: math.exp(-u * u) * math.log1p(2 * alpha * u * u / b)  # noqa: E731
    pole = math.sqrt(b / (2 * alpha))
    return 2 * (integrate.quad(f, 0, pole, epsabs=1e-14, epsrel=1e-13)[0]
                + integrate.quad(f, pole, np.inf, epsabs=1e-14, epsrel=1e-13)[0])


def position_entropy_large_alpha_quadrature(alpha: float, b: float | None = None) -> float:
    """Position entropy of the strong-coupling adiabatic state, ``I2`` kept in full.

    The density factorizes into a slow Gaussian in x and a fast Gaussian of
    frequency ``sqrt(1 + 2 alpha x^2)`` in y, giving
    ``1 + ln pi - ln sqrt(b) - I2 / (4 sqrt(pi))``.
    """
    if b is None:
        b = solve_variational_b(HamiltonianParams(1.0, 1.0, alpha)).b
    return GAUSSIAN_2D - 0.5 * math.log(b) - i2_integral(alpha, b) / (4 * math.sqrt(math.pi))
