"""Adiabatic (Born-Oppenheimer) ground states of the coupled oscillator.

The fast y-mode is solved at frozen x, its zero-point energy feeds an
effective x-Hamiltonian. Two regimes are covered:

* weak coupling, where the fast frequency is expanded to first order in
  ``alpha`` and everything is Gaussian;
* strong coupling (``k1 = k2 = 1``), where the x-motion is treated with a
  Gaussian trial function of frequency ``b`` fixed by a quartic, and the
  momentum state has to be obtained by numerical Fourier transform.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._io import atomic_write
from .basis import sinh_rule
from .spectral import HamiltonianParams


class MomentumDomainError(ValueError):
    def __init__(self, p_y: float, limit: float):
        self.p_y = p_y
        self.limit = limit
        super().__init__(f"omega_p <= 0 at p_y = {p_y:.6g}; the weak-coupling momentum state "
                         f"is only defined for |p_y| < {limit:.6g}")


class NormalizationDrift(RuntimeError):
    def __init__(self, norm: float, tol: float):
        self.norm = norm
        super().__init__(f"momentum grid norm {norm:.8f} deviates from 1 by more than {tol:g}; "
                         "widen the grid or raise the quadrature order")


class NoPositiveRoot(RuntimeError):
    pass


def adiabatic_ground_energy(params: HamiltonianParams) -> float:
    """``sqrt(k1^2 + alpha/k2)/2 + k2/2``."""
    return 0.5 * math.sqrt(params.k1 ** 2 + params.alpha / params.k2) + 0.5 * params.k2


@dataclass(frozen=True)
class SmallAlphaState:
    """Weak-coupling adiabatic ground state.

    Calling the object evaluates the position amplitude; ``momentum`` gives
    the first-order momentum amplitude, which is only normalized to O(alpha).
    """

    params: HamiltonianParams

    @property
    def omega(self) -> float:
        p = self.params
        return math.sqrt(p.k1 ** 2 + p.alpha / p.k2)

    @property
    def beta(self) -> float:
        return self.omega + self.params.alpha / (2 * self.params.k2 ** 2)

    @property
    def c(self) -> float:
        return self.params.alpha / (2 * self.beta * self.params.k2 ** 2)

    def omega_x(self, x):
        """Fast frequency expanded to first order, ``k2 + alpha x^2 / k2``."""
        p = self.params
        return p.k2 + p.alpha * np.square(x) / p.k2

    def Omega_x(self, x):
        """Exact fast frequency ``sqrt(k2^2 + 2 alpha x^2)``."""
        p = self.params
        return np.sqrt(p.k2 ** 2 + 2 * p.alpha * np.square(x))

    def omega_p(self, p_y):
        p = self.params
        return self.beta - p.alpha * np.square(p_y) / p.k2 ** 3

    @property
    def momentum_limit(self) -> float:
        """``|p_y|`` at which ``omega_p`` reaches zero."""
        p = self.params
        if p.alpha == 0:
            return math.inf
        return p.k2 * math.sqrt(self.beta * p.k2 / p.alpha)

    def __call__(self, x, y):
        x, y = np.asarray(x, float), np.asarray(y, float)
        wx = self.omega_x(x)
        w = self.omega
        return (w * wx) ** 0.25 / math.sqrt(math.pi) * np.exp(-0.5 * wx * y * y - 0.5 * w * x * x)

    def density(self, x, y):
        return np.square(self(x, y))

    def momentum(self, p_x, p_y):
        p_x, p_y = np.asarray(p_x, float), np.asarray(p_y, float)
        wp = self.omega_p(p_y)
        if np.any(wp <= 0):
            raise MomentumDomainError(float(np.max(np.abs(p_y))), self.momentum_limit)
        k2 = self.params.k2
        return ((self.omega / k2) ** 0.25 / math.sqrt(math.pi)
                * np.exp(-0.5 * p_y * p_y / k2 - 0.5 * p_x * p_x / wp) / np.sqrt(wp))


def position_gs_small_alpha(params: HamiltonianParams) -> SmallAlphaState:
    return SmallAlphaState(params)


def momentum_gs_small_alpha(params: HamiltonianParams):
    """Evaluator ``(p_x, p_y) -> amplitude`` of the weak-coupling momentum state."""
    return SmallAlphaState(params).momentum


def fast_mode_expectation(b: float, params: HamiltonianParams, order: int = 96) -> float:
    """``<psi_b| sqrt(k2^2 + 2 alpha x^2)/2 |psi_b>`` for the Gaussian of frequency ``b``."""
    k2, a = params.k2, params.alpha
    if a == 0:
        return 0.5 * k2
    x, w = sinh_rule(k2 / math.sqrt(2 * a), 9.0 / math.sqrt(b), order)
    rho = math.sqrt(b / math.pi) * np.exp(-b * x * x)
    return float(np.sum(w * rho * 0.5 * np.sqrt(k2 * k2 + 2 * a * x * x)))


def variational_energy(b: float, params: HamiltonianParams, order: int = 96) -> float:
    """Energy of the Gaussian trial state of frequency ``b`` in the adiabatic x-Hamiltonian."""
    if not b > 0:
        raise ValueError("b must be positive")
    return b / 4 + params.k1 ** 2 / (4 * b) + fast_mode_expectation(b, params, order)


def quartic_coefficients(params: HamiltonianParams) -> np.ndarray:
    k1 = params.k1
    return np.array([1.0, 0.0, -2 * k1 ** 2, -2 * params.alpha / math.pi, k1 ** 4])


def _newton_polish(b: float, params: HamiltonianParams) -> float:
    k = params.k1 ** 2
    s = 2 * params.alpha / math.pi
    for _ in range(50):
        f = b ** 4 - 2 * k * b * b - s * b + k * k
        df = 4 * b ** 3 - 4 * k * b - s
        if df == 0:
            break
        step = f / df
        b -= step
        if abs(step) <= 1e-15 * b:
            break
    return b


@dataclass(frozen=True)
class VariationalSolution:
    alpha: float
    b: float
    b_asymptotic: float
    energy: float
    regime: str
    roots: tuple[float, ...] = ()


def solve_variational_b(params: HamiltonianParams, regime: str = "quartic-root") -> VariationalSolution:
    """Trial-frequency ``b`` from ``b^4 - 2 k1^2 b^2 - 2 alpha b / pi + k1^4 = 0``.

    All real positive roots are found; the one with the lowest variational
    energy is returned. ``regime="asymptotic"`` returns ``(2 alpha/pi)^(1/3)``
    instead. At ``alpha = 0`` the quartic is ``(b^2 - k1^2)^2`` and ``b = k1``.
    """
    a = params.alpha
    b_asym = (2 * a / math.pi) ** (1.0 / 3.0)
    if regime == "asymptotic":
        if a == 0:
            raise NoPositiveRoot("the asymptotic root vanishes at alpha = 0")
        return VariationalSolution(a, b_asym, b_asym, variational_energy(b_asym, params), regime)
    if regime != "quartic-root":
        raise ValueError(f"unknown regime {regime!r}")
    if a == 0:
        b = float(params.k1)
        return VariationalSolution(a, b, b_asym, variational_energy(b, params), regime, (b,))
    raw = np.roots(quartic_coefficients(params))
    cand = sorted({_newton_polish(float(r.real), params) for r in raw
                   if abs(r.imag) <= 1e-6 * max(1.0, abs(r)) and r.real > 0})
    cand = [b for b in cand if b > 0]
    if not cand:
        raise NoPositiveRoot(f"quartic has no positive root at alpha={a}")
    energies = [variational_energy(b, params) for b in cand]
    i = int(np.argmin(energies))
    return VariationalSolution(a, cand[i], b_asym, energies[i], regime, tuple(cand))


@dataclass(frozen=True)
class LargeAlphaState:
    """Strong-coupling adiabatic ground state for ``k1 = k2 = 1``."""

    alpha: float
    b: float

    def Omega_x(self, x):
        return np.sqrt(1.0 + 2 * self.alpha * np.square(x))

    def __call__(self, x, y):
        x, y = np.asarray(x, float), np.asarray(y, float)
        om = self.Omega_x(x)
        return (self.b * om) ** 0.25 / math.sqrt(math.pi) * np.exp(-0.5 * om * y * y - 0.5 * self.b * x * x)

    def density(self, x, y):
        return np.square(self(x, y))


def position_gs_large_alpha(alpha: float, b: float | None = None) -> LargeAlphaState:
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    if b is None:
        b = solve_variational_b(HamiltonianParams(1.0, 1.0, alpha)).b
    return LargeAlphaState(float(alpha), float(b))


def _uniform_weights(p: np.ndarray) -> np.ndarray:
    d = np.diff(p)
    if p.ndim != 1 or len(p) < 3 or not np.allclose(d, d[0], rtol=1e-9, atol=0):
        raise ValueError("momentum grids must be uniform with at least three points")
    w = np.full(len(p), d[0])
    w[0] *= 0.5
    w[-1] *= 0.5
    return w


@dataclass(frozen=True)
class MomentumGrid:
    px: np.ndarray
    py: np.ndarray
    amplitudes: np.ndarray
    quad_order: int
    norm: float

    def density_grid(self):
        from .entropy import DensityGrid

        return DensityGrid.tensor(self.px, _uniform_weights(self.px), self.py, _uniform_weights(self.py),
                                  np.abs(self.amplitudes) ** 2)


def momentum_gs_large_alpha(alpha: float, px, py, quad_order: int = 128,
                            norm_tol: float | None = 1e-3, b: float | None = None) -> MomentumGrid:
    """Numerical Fourier transform of the strong-coupling state on a tensor grid.

    For each ``p_y`` the y-transform is done analytically; the remaining
    x-integral is evaluated with a sinh-mapped trapezoid rule of
    ``quad_order`` nodes, which handles the branch points of
    ``sqrt(1 + 2 alpha x^2)`` at ``x = +-i/sqrt(2 alpha)``.
    """
    state = position_gs_large_alpha(alpha, b)
    px = np.asarray(px, float)
    py = np.asarray(py, float)
    wx_p, wy_p = _uniform_weights(px), _uniform_weights(py)
    x, w = sinh_rule(1.0 / math.sqrt(2 * alpha), 9.0 / math.sqrt(state.b), quad_order)
    om = state.Omega_x(x)
    g = w * np.exp(-0.5 * state.b * x * x) * om ** -0.25
    fy = np.exp(-np.outer(0.5 / om, py * py))  # (nodes, py)
    phase = np.outer(px, x)
    pref = state.b ** 0.25 / (math.sqrt(2.0) * math.pi)
    re = pref * (np.cos(phase) * g) @ fy
    im = pref * (np.sin(phase) * g) @ fy
    imag_max = float(np.max(np.abs(im))) if im.size else 0.0
    if imag_max > 1e-10:
        raise AssertionError(f"imaginary part {imag_max:.3g} should vanish by symmetry")
    norm = float(wx_p @ (re * re) @ wy_p)
    if norm_tol is not None and abs(norm - 1.0) > norm_tol:
        raise NormalizationDrift(norm, norm_tol)
    return MomentumGrid(px, py, re.astype(complex), quad_order, norm)


def dump_grid_csv(path, a, b, values, space: str = "position") -> None:
    """Write a tensor-grid field as ``x,y,value`` (or ``px,py,value``) rows."""
    cols = ("x", "y") if space == "position" else ("px", "py")
    values = np.asarray(values)
    lines = [f"{cols[0]},{cols[1]},value\n"]
    for i, ai in enumerate(np.asarray(a)):
        for j, bj in enumerate(np.asarray(b)):
            lines.append(f"{ai:.12g},{bj:.12g},{values[i, j]:.12g}\n")
    atomic_write(path, "".join(lines))
