"""Matrix representation of the coupled quartic oscillator

    H = p_x^2/2 + p_y^2/2 + k1^2 x^2/2 + k2^2 y^2/2 + alpha x^2 y^2

in a truncated oscillator product basis, its parity-block diagonalization,
and overlap continuation of labelled states along an alpha path.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .basis import BLOCK_LABELS, BasisIndex, BasisSpec, block_of, enumerate_basis, enumerate_block


@dataclass(frozen=True)
class HamiltonianParams:
    k1: float = 1.0
    k2: float = 1.0
    alpha: float = 0.0

    def __post_init__(self):
        if not (self.k1 > 0 and self.k2 > 0):
            raise ValueError("k1 and k2 must be positive")
        if not self.alpha >= 0:
            raise ValueError("alpha must be non-negative")

    def with_alpha(self, alpha: float) -> "HamiltonianParams":
        return HamiltonianParams(self.k1, self.k2, alpha)


class EigensolverError(RuntimeError):
    def __init__(self, block, msg=""):
        self.block = block
        super().__init__(f"eigensolver failed on block {block}: {msg}")


class LostTrack(RuntimeError):
    """Overlap continuation could not identify the followed state."""

    def __init__(self, step: int, best_overlap: float):
        self.step = step
        self.best_overlap = best_overlap
        super().__init__(f"lost track at step {step}: best overlap {best_overlap:.6g}")


@dataclass(frozen=True)
class SymmetricBlock:
    label: tuple[str, str]
    indices: tuple[BasisIndex, ...]
    entries: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.indices)


@dataclass(frozen=True)
class EigenPair:
    energy: float
    coefficients: np.ndarray
    block: tuple[str, str]
    indices: tuple[BasisIndex, ...]
    spec: BasisSpec

    def coefficient_matrix(self) -> np.ndarray:
        """Coefficients scattered onto an ``(n_x, n_y)`` array."""
        nx = max(i.n_x for i in self.indices) + 1
        ny = max(i.n_y for i in self.indices) + 1
        C = np.zeros((nx, ny))
        ix = np.fromiter((i.n_x for i in self.indices), int, len(self.indices))
        iy = np.fromiter((i.n_y for i in self.indices), int, len(self.indices))
        C[ix, iy] = self.coefficients
        return C

    def overlap(self, other: "EigenPair") -> float:
        """Signed overlap; zero across blocks or bases."""
        if self.block != other.block or self.spec != other.spec:
            return 0.0
        return float(np.dot(self.coefficients, other.coefficients))


@dataclass
class TrackedPath:
    label: tuple[int, int, float]
    alphas: list[float] = field(default_factory=list)
    states: list[EigenPair] = field(default_factory=list)
    overlaps: list[float] = field(default_factory=list)


def x2_matrix(n: int, scale: float) -> np.ndarray:
    """``<m|x^2|n>`` for oscillator functions of frequency ``scale``, ``m, n < n``."""
    k = np.arange(n)
    M = np.zeros((n, n))
    M[k, k] = (2 * k + 1) / (2.0 * scale)
    j = np.arange(max(n - 2, 0))
    M[j, j + 2] = np.sqrt((j + 1.0) * (j + 2.0)) / (2.0 * scale)
    M[j + 2, j] = M[j, j + 2]
    return M


def p2_matrix(n: int, scale: float) -> np.ndarray:
    k = np.arange(n)
    M = np.zeros((n, n))
    M[k, k] = (2 * k + 1) * scale / 2.0
    j = np.arange(max(n - 2, 0))
    M[j, j + 2] = -np.sqrt((j + 1.0) * (j + 2.0)) * scale / 2.0
    M[j + 2, j] = M[j, j + 2]
    return M


def oscillator_matrix(n: int, k: float, scale: float) -> np.ndarray:
    """``p^2/2 + k^2 x^2/2`` in the basis of frequency ``scale``.

    Exactly diagonal, ``(m + 1/2) k``, when ``scale == k``.
    """
    if scale == k:
        return np.diag((np.arange(n) + 0.5) * k)
    return 0.5 * p2_matrix(n, scale) + 0.5 * k * k * x2_matrix(n, scale)


def _coupling(spec: BasisSpec, indices) -> np.ndarray:
    """``<i|x^2 y^2|j>`` over ``indices``."""
    n = spec.n_max + 1
    ix = np.array([i.n_x for i in indices], dtype=int)
    iy = np.array([i.n_y for i in indices], dtype=int)
    return x2_matrix(n, spec.scale_x)[np.ix_(ix, ix)] * x2_matrix(n, spec.scale_y)[np.ix_(iy, iy)]


def _assemble(params: HamiltonianParams, spec: BasisSpec, indices) -> np.ndarray:
    n = spec.n_max + 1
    hx = oscillator_matrix(n, params.k1, spec.scale_x)
    hy = oscillator_matrix(n, params.k2, spec.scale_y)
    ix = np.array([i.n_x for i in indices], dtype=int)
    iy = np.array([i.n_y for i in indices], dtype=int)
    same_x = ix[:, None] == ix[None, :]
    same_y = iy[:, None] == iy[None, :]
    H = hx[np.ix_(ix, ix)] * same_y + hy[np.ix_(iy, iy)] * same_x
    if params.alpha != 0:
        H = H + params.alpha * _coupling(spec, indices)
    return H


def assemble_hamiltonian(params: HamiltonianParams, spec: BasisSpec) -> list[SymmetricBlock]:
    """The four parity blocks (ee, eo, oe, oo) of the Hamiltonian matrix."""
    blocks = []
    for label in BLOCK_LABELS:
        idx = tuple(enumerate_block(spec, *label))
        blocks.append(SymmetricBlock(label, idx, _assemble(params, spec, idx)))
    return blocks


def assemble_full(params: HamiltonianParams, spec: BasisSpec) -> tuple[tuple[BasisIndex, ...], np.ndarray]:
    """Hamiltonian over the whole basis, without using parity."""
    idx = tuple(enumerate_basis(spec))
    return idx, _assemble(params, spec, idx)


def _fix_sign(v: np.ndarray) -> np.ndarray:
    k = np.argmax(np.abs(v))
    return -v if v[k] < 0 else v


def diagonalize_block(block: SymmetricBlock, spec: BasisSpec) -> tuple[np.ndarray, np.ndarray]:
    """All eigenvalues (ascending) and eigenvectors (columns) of a block."""
    if block.dim == 0:
        return np.zeros(0), np.zeros((0, 0))
    if not np.all(np.isfinite(block.entries)):
        raise EigensolverError(block.label, "matrix has non-finite entries")
    try:
        w, v = np.linalg.eigh(block.entries)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(block.label, str(exc)) from exc
    return w, v


def block_eigenpairs(block: SymmetricBlock, spec: BasisSpec, count: int | None = None) -> list[EigenPair]:
    w, v = diagonalize_block(block, spec)
    count = len(w) if count is None else min(count, len(w))
    return [EigenPair(float(w[i]), _fix_sign(v[:, i]), block.label, block.indices, spec) for i in range(count)]


def ground_state(params: HamiltonianParams, spec: BasisSpec) -> EigenPair:
    """Lowest eigenpair over all parity blocks."""
    best = None
    for block in assemble_hamiltonian(params, spec):
        if block.dim == 0:
            continue
        w, v = diagonalize_block(block, spec)
        if best is None or w[0] < best[0]:
            best = (w[0], v[:, 0], block)
    energy, vec, block = best
    return EigenPair(float(energy), _fix_sign(vec), block.label, block.indices, spec)


def spectrum(params: HamiltonianParams, spec: BasisSpec, count: int = 10) -> list[EigenPair]:
    """The ``count`` lowest eigenpairs over all blocks, ascending in energy."""
    pairs = []
    for block in assemble_hamiltonian(params, spec):
        pairs.extend(block_eigenpairs(block, spec, count))
    pairs.sort(key=lambda p: p.energy)
    return pairs[:count]


def residual_norm(params: HamiltonianParams, pair: EigenPair) -> float:
    H = _assemble(params, pair.spec, pair.indices)
    return float(np.linalg.norm(H @ pair.coefficients - pair.energy * pair.coefficients))


def _resolve_degenerate(w, v, k, coupling, tol=1e-9):
    """Rotate the eigenspace degenerate with ``w[k]`` onto eigenvectors of the
    coupling, i.e. the ``alpha -> alpha0+`` limits of the eigenvectors."""
    group = np.flatnonzero(np.abs(w - w[k]) <= tol * max(1.0, abs(w[k])))
    if len(group) == 1:
        return v
    V = v[:, group]
    _, R = np.linalg.eigh(V.T @ coupling @ V)
    v = v.copy()
    v[:, group] = V @ R
    return v


def track_state(n: int, alphas, spec: BasisSpec, overlap_threshold: float = 0.5,
                k1: float = 1.0, k2: float = 1.0) -> TrackedPath:
    """Follow the state labelled ``(n, 0)`` at ``alphas[0]`` along ``alphas``.

    At the first point the eigenvector with the largest weight on the basis
    vector ``|n, 0>`` is chosen (a degenerate level is first split by the
    coupling, so the choice is the one continuous in alpha); afterwards each step takes the eigenvector of
    the same parity block with the largest ``|<previous|current>|``.
    """
    alphas = [float(a) for a in alphas]
    if not alphas:
        raise ValueError("alpha grid is empty")
    if any(b <= a for a, b in zip(alphas, alphas[1:])):
        raise ValueError("alpha grid must be strictly increasing")
    if not spec.contains(n, 0):
        raise ValueError(f"state ({n}, 0) lies outside the basis (n_max={spec.n_max})")
    label = block_of(n, 0)
    path = TrackedPath((n, 0, alphas[0]))
    params = HamiltonianParams(k1, k2, alphas[0])
    block = SymmetricBlock(label, tuple(enumerate_block(spec, *label)), np.zeros(0))
    pos = block.indices.index(BasisIndex(n, 0))
    prev = None
    for step, a in enumerate(alphas):
        block = SymmetricBlock(label, block.indices, _assemble(params.with_alpha(a), spec, block.indices))
        w, v = diagonalize_block(block, spec)
        if prev is None:
            k = int(np.argmax(np.abs(v[pos, :])))
            v = _resolve_degenerate(w, v, k, _coupling(spec, block.indices))
            k = int(np.argmax(np.abs(v[pos, :])))
            vec = v[:, k] if v[pos, k] > 0 else -v[:, k]
        else:
            ov = v.T @ prev
            k = int(np.argmax(np.abs(ov)))
            best = abs(float(ov[k]))
            if best <= overlap_threshold:
                raise LostTrack(step, best)
            vec = v[:, k] if ov[k] > 0 else -v[:, k]
            path.overlaps.append(best)
        prev = vec
        path.alphas.append(a)
        path.states.append(EigenPair(float(w[k]), vec, label, block.indices, spec))
    return path


@dataclass(frozen=True)
class ConvergenceReport:
    energy_small: float
    energy_large: float
    delta_energy: float
    delta_sq: float


def convergence_check(params: HamiltonianParams, spec: BasisSpec, spec_larger: BasisSpec) -> ConvergenceReport:
    """Ground-state energy and position-entropy change between two truncations."""
    from .entropy import entropy_from_coefficients

    if spec_larger.n_max <= spec.n_max:
        raise ValueError("spec_larger must have a larger n_max")
    g1 = ground_state(params, spec)
    g2 = ground_state(params, spec_larger)
    s1 = entropy_from_coefficients(g1, "position")
    s2 = entropy_from_coefficients(g2, "position")
    return ConvergenceReport(g1.energy, g2.energy, abs(g2.energy - g1.energy), abs(s2 - s1))


def dump_triplets(blocks, path, tol: float = 0.0) -> None:
    """Write each block as ``row col value`` lines under a ``# block`` header."""
    with open(path, "w") as fh:
        for b in blocks:
            fh.write(f"# block {b.label[0]},{b.label[1]} dim {b.dim}\n")
            rows, cols = np.nonzero(np.abs(b.entries) > tol)
            for r, c in zip(rows, cols):
                fh.write(f"{r} {c} {b.entries[r, c]:.17g}\n")
