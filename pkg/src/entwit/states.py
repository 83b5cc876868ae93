"""Bipartite density matrices: named test states, noisy mixtures and samplers.

Random generators draw from ``numpy.random.default_rng`` (PCG64).  Every sampler
takes an explicit ``seed`` which may be an integer (up to 64 bits) or an existing
``numpy.random.Generator`` when several draws must share one stream.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import Dims, as_dims, hermitian_defect, partial_transpose

TRACE_TOL = 1e-10
PSD_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated bipartite state on ``C^m (x) C^n``."""

    mat: np.ndarray
    dims: Dims

    def __post_init__(self):
        dims = as_dims(self.dims)
        mat = np.array(self.mat, dtype=complex)
        if mat.shape != (dims.total, dims.total):
            raise ValueError(f"state must be {dims.total}x{dims.total} for dims {tuple(dims)}, got {mat.shape}")
        if not np.all(np.isfinite(mat)):
            raise ValueError("state has non-finite entries")
        defect = hermitian_defect(mat)
        if defect > 1e-10:
            raise ValueError(f"state is not Hermitian (relative defect {defect:.3e} > 1e-10)")
        mat = (mat + mat.conj().T) / 2
        tr = np.trace(mat).real
        if abs(tr - 1) > TRACE_TOL:
            raise ValueError(f"state trace {tr:.12g} differs from 1 by more than {TRACE_TOL:.0e}")
        lam = np.linalg.eigvalsh(mat)[0]
        if lam < -PSD_TOL:
            raise ValueError(f"state has eigenvalue {lam:.3e} < -{PSD_TOL:.0e}")
        mat.setflags(write=False)
        object.__setattr__(self, "mat", mat)
        object.__setattr__(self, "dims", dims)

    def __repr__(self):
        return f"DensityMatrix(dims={tuple(self.dims)})"


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def maximally_mixed(dims) -> DensityMatrix:
    dims = as_dims(dims)
    return DensityMatrix(np.eye(dims.total) / dims.total, dims)


def swap_operator(d: int) -> np.ndarray:
    """``V = sum_ij |ij><ji|`` on ``C^d (x) C^d``."""
    V = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            V[i * d + j, j * d + i] = 1.0
    return V


def werner_2x2(f: float) -> DensityMatrix:
    """Two-qubit Werner state ``((2 - f) I + (2f - 1) V) / 6``; entangled iff ``f < 0``."""
    if not -1 <= f <= 1:
        raise ValueError(f"Werner parameter f must lie in [-1, 1], got {f}")
    rho = ((2 - f) * np.eye(4) + (2 * f - 1) * swap_operator(2)) / 6
    return DensityMatrix(rho, (2, 2))


def upb_tiles_basis() -> list[np.ndarray]:
    """The five product vectors of the 3x3 "Tiles" unextendible product basis."""
    e0, e1, e2 = np.eye(3)
    s = np.sqrt(2)
    return [
        np.kron(e0, e0 - e1) / s,
        np.kron(e0 - e1, e2) / s,
        np.kron(e2, e1 - e2) / s,
        np.kron(e1 - e2, e0) / s,
        np.kron(e0 + e1 + e2, e0 + e1 + e2) / 3,
    ]


def upb_tiles_bes() -> DensityMatrix:
    """Bound entangled 3x3 state: normalised projector onto the complement of the Tiles UPB."""
    P = sum(np.outer(v, v) for v in upb_tiles_basis())
    return DensityMatrix((np.eye(9) - P) / 4, (3, 3))


def horodecki_2x4(b: float) -> DensityMatrix:
    """Horodecki's 2x4 bound entangled state, ``0 < b < 1``.

    Real symmetric; qubit ``A`` is the outer (block) index.
    """
    if not 0 < b < 1:
        raise ValueError(f"Horodecki parameter b must lie in (0, 1), got {b}")
    rho = np.zeros((8, 8))
    rho[np.arange(8), np.arange(8)] = b
    rho[4, 4] = rho[7, 7] = (1 + b) / 2
    for i, j in [(0, 5), (1, 6), (2, 7)]:
        rho[i, j] = rho[j, i] = b
    rho[4, 7] = rho[7, 4] = np.sqrt(1 - b * b) / 2
    return DensityMatrix(rho / (7 * b + 1), (2, 4))


def noisy_mixture(rho: DensityMatrix, p: float) -> DensityMatrix:
    """``p * rho + (1 - p) * I / d``."""
    if not 0 <= p <= 1:
        raise ValueError(f"mixing weight p must lie in [0, 1], got {p}")
    d = rho.dims.total
    return DensityMatrix(p * rho.mat + (1 - p) * np.eye(d) / d, rho.dims)


def random_pure_state(d: int, seed=None) -> np.ndarray:
    """Haar-random unit vector in ``C^d``."""
    rng = _rng(seed)
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_density(dims, seed=None) -> DensityMatrix:
    """``G G^H / Tr(G G^H)`` for a square complex Ginibre matrix ``G``."""
    dims = as_dims(dims)
    rng = _rng(seed)
    d = dims.total
    G = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = G @ G.conj().T
    return DensityMatrix(rho / np.trace(rho).real, dims)


def random_pure_product(dims, seed=None) -> DensityMatrix:
    """``|a><a| (x) |b><b|`` with Haar-random local vectors."""
    dims = as_dims(dims)
    rng = _rng(seed)
    a = random_pure_state(dims.m, rng)
    b = random_pure_state(dims.n, rng)
    psi = np.kron(a, b)
    return DensityMatrix(np.outer(psi, psi.conj()), dims)


def random_separable(dims, terms: int = 5, seed=None) -> DensityMatrix:
    """Convex mixture of ``terms`` random pure product states with random weights."""
    dims = as_dims(dims)
    rng = _rng(seed)
    weights = rng.dirichlet(np.ones(terms))
    rho = sum(w * random_pure_product(dims, rng).mat for w in weights)
    return DensityMatrix(rho / np.trace(rho).real, dims)


def random_ppt_symmetric(dims, seed=None, max_tries: int = 1000) -> DensityMatrix:
    """Random state with ``sigma == sigma^{T_A}`` exactly.

    Draws a Ginibre state, averages it with its partial transpose and accepts the
    result once its smallest eigenvalue is above ``-1e-10``.
    """
    dims = as_dims(dims)
    rng = _rng(seed)
    for _ in range(max_tries):
        sigma = random_density(dims, rng).mat
        sigma = (sigma + partial_transpose(sigma, dims)) / 2
        lam, vecs = np.linalg.eigh(sigma)
        if lam[0] < -1e-10:
            continue
        if lam[0] < 0:
            sigma = (vecs * np.clip(lam, 0, None)) @ vecs.conj().T
            sigma = (sigma + partial_transpose(sigma, dims)) / 2
        sigma = sigma / np.trace(sigma).real
        return DensityMatrix(sigma, dims)
    raise RuntimeError(f"no PSD partial-transpose-symmetric sample within {max_tries} tries")
