"""Harmonic-oscillator basis: Hermite functions, Gauss-Hermite rules and
the truncated two-dimensional product basis split into parity blocks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np
import scipy.linalg

EVEN, ODD = "even", "odd"
PARITIES = (EVEN, ODD)
BLOCK_LABELS = ((EVEN, EVEN), (EVEN, ODD), (ODD, EVEN), (ODD, ODD))

MAX_QUADRATURE_ORDER = 200


class BasisIndex(NamedTuple):
    n_x: int
    n_y: int


@dataclass(frozen=True)
class BasisSpec:
    """Truncated product basis of 1D oscillator eigenfunctions.

    Parameters
    ----------
    n_max : int
        Truncation. With ``truncation="triangular"`` the basis holds every
        pair with ``n_x + n_y <= n_max``; ``"rectangular"`` keeps
        ``n_x, n_y <= n_max`` and is meant for convergence studies.
    scale_x, scale_y : float
        Frequencies of the 1D basis functions along x and y.
    """

    n_max: int
    scale_x: float = 1.0
    scale_y: float = 1.0
    truncation: str = "triangular"

    def __post_init__(self):
        if int(self.n_max) != self.n_max or self.n_max < 0:
            raise ValueError(f"n_max must be a non-negative integer, got {self.n_max!r}")
        if not (self.scale_x > 0 and self.scale_y > 0):
            raise ValueError("basis scales must be positive")
        if self.truncation not in ("triangular", "rectangular"):
            raise ValueError(f"unknown truncation {self.truncation!r}")

    @classmethod
    def for_params(cls, params, n_max: int, adapt: bool = False, **kw) -> "BasisSpec":
        """Basis matched to ``params``.

        By default the scales are ``(k1, k2)``, which makes the uncoupled
        Hamiltonian exactly diagonal. ``adapt=True`` raises each scale to
        ``alpha**(1/3)`` when that is larger; at large coupling the ground
        state is squeezed to roughly that frequency and the unit-frequency
        basis converges slowly.
        """
        sx, sy = float(params.k1), float(params.k2)
        if adapt:
            s = float(params.alpha) ** (1.0 / 3.0)
            sx, sy = max(sx, s), max(sy, s)
        return cls(n_max, sx, sy, **kw)

    def contains(self, n_x: int, n_y: int) -> bool:
        if n_x < 0 or n_y < 0:
            return False
        if self.truncation == "triangular":
            return n_x + n_y <= self.n_max
        return n_x <= self.n_max and n_y <= self.n_max

    @property
    def size(self) -> int:
        if self.truncation == "triangular":
            return (self.n_max + 1) * (self.n_max + 2) // 2
        return (self.n_max + 1) ** 2


def _parity_start(parity: str) -> int:
    if parity == EVEN:
        return 0
    if parity == ODD:
        return 1
    raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")


def enumerate_block(spec: BasisSpec, parity_x: str, parity_y: str) -> list[BasisIndex]:
    """All basis indices with the requested parities.

    Ordered by total quanta, then by decreasing ``n_x``, so that
    ``(N_max=2, even, even)`` gives ``[(0,0), (2,0), (0,2)]``.
    """
    sx, sy = _parity_start(parity_x), _parity_start(parity_y)
    out = []
    top = 2 * spec.n_max if spec.truncation == "rectangular" else spec.n_max
    for total in range(sx + sy, top + 1, 2):
        for n_x in range(total - sy, sx - 1, -2):
            n_y = total - n_x
            if spec.contains(n_x, n_y):
                out.append(BasisIndex(n_x, n_y))
    return out


def enumerate_basis(spec: BasisSpec) -> list[BasisIndex]:
    """Whole basis, ordered by total quanta then decreasing ``n_x``."""
    idx = [i for lab in BLOCK_LABELS for i in enumerate_block(spec, *lab)]
    return sorted(idx, key=lambda i: (i.n_x + i.n_y, -i.n_x))


def block_of(n_x: int, n_y: int) -> tuple[str, str]:
    return (PARITIES[n_x % 2], PARITIES[n_y % 2])


def hermite_functions(n_max: int, x, scale: float = 1.0) -> np.ndarray:
    """Normalized oscillator eigenfunctions ``psi_0 .. psi_{n_max}`` at ``x``.

    Returns an array of shape ``(n_max + 1,) + np.shape(x)``. The Gaussian
    factor is carried through the three-term recurrence so nothing overflows.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    if not scale > 0:
        raise ValueError("scale must be positive")
    u = np.asarray(x, dtype=float) * math.sqrt(scale)
    out = np.empty((n_max + 1,) + u.shape)
    out[0] = math.pi ** -0.25 * np.exp(-0.5 * u * u)
    if n_max >= 1:
        out[1] = math.sqrt(2.0) * u * out[0]
    for n in range(2, n_max + 1):
        out[n] = math.sqrt(2.0 / n) * u * out[n - 1] - math.sqrt((n - 1) / n) * out[n - 2]
    out *= scale ** 0.25
    return out


def hermite_function(n: int, x, scale: float = 1.0):
    """Normalized eigenfunction of ``-d^2/2 + scale^2 x^2 / 2`` with ``n`` quanta."""
    if n < 0:
        raise ValueError("n must be >= 0")
    val = hermite_functions(n, x, scale)[n]
    return float(val) if np.ndim(val) == 0 else val


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Hermite rule for integrals against ``exp(-x**2)``."""

    nodes: np.ndarray
    weights: np.ndarray
    order: int

    def integrate(self, f) -> float:
        """``sum w_i f(x_i)``, i.e. the integral of ``exp(-x^2) f(x)``."""
        return float(np.dot(self.weights, f(self.nodes)))


def _orthonormal_hermite(order: int, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal Hermite polynomials of degree ``order`` and ``order - 1``."""
    p1 = np.full_like(z, math.pi ** -0.25)
    p2 = np.zeros_like(z)
    for j in range(1, order + 1):
        p1, p2 = z * math.sqrt(2.0 / j) * p1 - math.sqrt((j - 1) / j) * p2, p1
    return p1, p2


@lru_cache(maxsize=64)
def _gauss_hermite(order: int) -> tuple[np.ndarray, np.ndarray]:
    # starting guesses from the Jacobi matrix; plain asymptotic guesses
    # let Newton jump between neighbouring roots above order ~150
    off = np.sqrt(np.arange(1, order) / 2.0)
    z = scipy.linalg.eigvalsh_tridiagonal(np.zeros(order), off) if order > 1 else np.zeros(1)
    for _ in range(50):
        p, pm1 = _orthonormal_hermite(order, z)
        dz = p / (math.sqrt(2.0 * order) * pm1)
        z = z - dz
        if np.all(np.abs(dz) <= 1e-14 * np.maximum(1.0, np.abs(z))):
            break
    else:
        raise RuntimeError(f"Gauss-Hermite Newton iteration did not converge at order {order}")
    _, pm1 = _orthonormal_hermite(order, z)
    # w_i = 1 / (n h_{n-1}(z_i)^2) for orthonormal h
    w = 1.0 / (order * pm1 * pm1)
    # enforce exact symmetry
    z = 0.5 * (z - z[::-1])
    w = 0.5 * (w + w[::-1])
    return z, w


def gauss_hermite_rule(order: int) -> QuadratureRule:
    """Nodes and weights exact for polynomials of degree ``2*order - 1``."""
    if int(order) != order or not 1 <= order <= MAX_QUADRATURE_ORDER:
        raise ValueError(f"quadrature order must be in [1, {MAX_QUADRATURE_ORDER}], got {order!r}")
    nodes, weights = _gauss_hermite(int(order))
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(nodes, weights, int(order))


def sinh_rule(width: float, half_width: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Trapezoid rule in ``t`` for ``x = width * sinh(t)`` on ``[-half_width, half_width]``.

    Suited to integrands like ``sqrt(1 + (x/width)**2)`` or
    ``log(1 + (x/width)**2)`` whose branch points at ``x = +-i*width`` sit close
    to the real axis: after the substitution they move to ``t = +-i*pi/2``
    and the rule converges geometrically. Returns ``(nodes, weights)`` in ``x``.
    """
    if n < 2:
        raise ValueError("need at least two nodes")
    T = math.asinh(half_width / width)
    t = np.linspace(-T, T, n)
    h = t[1] - t[0]
    x = width * np.sinh(t)
    w = h * width * np.cosh(t)
    w[0] *= 0.5
    w[-1] *= 0.5
    return x, w


def trapezoid_axis(half_width: float, n_points: int) -> tuple[np.ndarray, np.ndarray]:
    """Uniform nodes on ``[-half_width, half_width]`` with trapezoid weights."""
    if n_points < 3:
        raise ValueError("need at least three points")
    x = np.linspace(-half_width, half_width, n_points)
    w = np.full(n_points, x[1] - x[0])
    w[0] *= 0.5
    w[-1] *= 0.5
    return x, w
