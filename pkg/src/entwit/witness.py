"""Entanglement witnesses built from the realignment and PPT criteria.

Two universal constructions turn any state ``rho`` into a witness that detects it
whenever the corresponding criterion does:

* :func:`realignment_witness` -- from the SVD of the realigned state,
  ``Tr(W rho) = 1 - ||R(rho)||``.
* :func:`ppt_witness` -- from the SVD of the partial transpose,
  ``Tr(W rho) = 1 - ||rho^{T_A}||``.

:func:`projection_witness` gives ``W = eps * I - rho`` with ``eps`` the largest
overlap of ``rho`` with a product state, and :func:`optimize_witness` shifts any
witness down by its minimum over product states.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .linalg import (
    Dims,
    as_dims,
    blocks,
    hermitian_defect,
    partial_transpose,
    realign,
    realign_inverse,
    svd,
)
from .states import DensityMatrix, _rng

OPT_TOL = 1e-6
EPS_ROUNDOFF = 1e-12
SUPPORT_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class Witness:
    """Hermitian observable on ``C^m (x) C^n``.

    ``origin`` is one of ``realign``, ``ppt``, ``projection``, ``optimized`` or
    ``file``; ``epsilon`` records the product-state shift that was applied, if any.
    """

    mat: np.ndarray
    dims: Dims
    origin: str = "file"
    source: DensityMatrix | None = None
    epsilon: float | None = None

    def __post_init__(self):
        dims = as_dims(self.dims)
        mat = np.array(self.mat, dtype=complex)
        if mat.shape != (dims.total, dims.total):
            raise ValueError(f"witness must be {dims.total}x{dims.total}, got {mat.shape}")
        if not np.all(np.isfinite(mat)):
            raise ValueError("witness has non-finite entries")
        defect = hermitian_defect(mat)
        if defect > 1e-10:
            raise ValueError(f"witness is not Hermitian (relative defect {defect:.3e} > 1e-10)")
        mat = (mat + mat.conj().T) / 2
        mat.setflags(write=False)
        object.__setattr__(self, "mat", mat)
        object.__setattr__(self, "dims", dims)

    @property
    def useful(self) -> bool:
        """True when ``W`` has a negative eigenvalue, i.e. can detect something."""
        return bool(np.linalg.eigvalsh(self.mat)[0] < 0)

    def __repr__(self):
        return f"Witness(dims={tuple(self.dims)}, origin={self.origin!r})"


def _symmetrized(W: np.ndarray) -> np.ndarray:
    defect = hermitian_defect(W)
    if defect > 1e-10:
        raise ArithmeticError(f"constructed witness is not Hermitian (defect {defect:.3e})")
    return (W + W.conj().T) / 2


def _support_svd(G: np.ndarray):
    """SVD factors restricted to the nonzero singular values.

    ``U_r V_r^H`` is then the unique partial isometry of the polar decomposition;
    columns for zero singular values are arbitrary and would break Hermiticity.
    """
    U, S, V = svd(G)
    keep = S > SUPPORT_RTOL * S[0]
    return U[:, keep], V[:, keep]


def realignment_witness(rho: DensityMatrix) -> Witness:
    """``W = I - (R^{-1}(U^* V^T))^T`` where ``R(rho) = U S V^H``."""
    U, V = _support_svd(realign(rho.mat, rho.dims))
    W2 = realign_inverse(U.conj() @ V.T, rho.dims).T
    W = np.eye(rho.dims.total) - W2
    return Witness(_symmetrized(W), rho.dims, "realign", rho)


def ppt_witness(rho: DensityMatrix) -> Witness:
    """``W = I - (V U^H)^{T_A}`` where ``rho^{T_A} = U S V^H``."""
    U, V = _support_svd(partial_transpose(rho.mat, rho.dims))
    W = np.eye(rho.dims.total) - partial_transpose(V @ U.conj().T, rho.dims)
    return Witness(_symmetrized(W), rho.dims, "ppt", rho)


def evaluate(W: Witness, rho: DensityMatrix) -> float:
    """``Tr(W rho)``; negative values certify entanglement of ``rho``."""
    if tuple(W.dims) != tuple(rho.dims):
        raise ValueError(f"dimension mismatch: witness {tuple(W.dims)} vs state {tuple(rho.dims)}")
    t = np.sum(W.mat * rho.mat.T)
    if abs(t.imag) > 1e-10:
        raise ArithmeticError(f"Tr(W rho) has imaginary part {t.imag:.3e}")
    return float(t.real)


def detects(W: Witness, rho: DensityMatrix, tol: float = 1e-10) -> bool:
    return evaluate(W, rho) < -tol


# --- optimisation over product states ---------------------------------------


def _unit_vector(x: np.ndarray, m: int) -> np.ndarray:
    """Point on the unit sphere of ``C^m`` (mod global phase) from ``2m - 2`` angles."""
    mags = np.ones(m)
    theta = x[: m - 1]
    for k in range(m - 1):
        mags[k] *= np.cos(theta[k])
        mags[k + 1 :] *= np.sin(theta[k])
    phases = np.concatenate([[0.0], x[m - 1 :]])
    return mags * np.exp(1j * phases)


def _reduced_b(B: np.ndarray, a: np.ndarray) -> np.ndarray:
    # G(a) = sum_ij W_ij a_j conj(a_i)
    return np.einsum("i,j,ijkl->kl", a.conj(), a, B)


def _reduced_a(B: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.einsum("k,l,ijkl->ij", b.conj(), b, B)


def _seesaw(B: np.ndarray, a: np.ndarray, iters: int = 200):
    """Alternate exact minimisation over each factor; never increases the value."""
    val = np.inf
    for _ in range(iters):
        lam, vec = np.linalg.eigh(_reduced_b(B, a))
        b = vec[:, 0]
        lam_a, vec_a = np.linalg.eigh(_reduced_a(B, b))
        a = vec_a[:, 0]
        if val - lam_a[0] < 1e-15:
            val = min(val, lam_a[0])
            break
        val = lam_a[0]
    lam, vec = np.linalg.eigh(_reduced_b(B, a))
    return float(lam[0]), a, vec[:, 0]


def _grid_min_blocks(B: np.ndarray, n_grid: int, chunk: int = 20000):
    theta = np.linspace(0, np.pi, n_grid)
    phi = np.linspace(0, 2 * np.pi, n_grid, endpoint=False)
    T, P = np.meshgrid(theta, phi, indexing="ij")
    A = np.stack([np.cos(T / 2).ravel() + 0j, np.exp(1j * P.ravel()) * np.sin(T / 2).ravel()], axis=1)
    best, arg = np.inf, None
    for start in range(0, len(A), chunk):
        a = A[start : start + chunk]
        lam = np.linalg.eigvalsh(np.einsum("si,sj,ijkl->skl", a.conj(), a, B))[:, 0]
        k = int(np.argmin(lam))
        if lam[k] < best:
            best, arg = float(lam[k]), a[k]
    return best, arg


def bloch_grid_minimum(W: Witness, n_grid: int = 1000) -> tuple[float, np.ndarray]:
    """Brute-force ``min_a lambda_min(G(a))`` over an ``n_grid x n_grid`` Bloch grid.

    Only defined when the first subsystem is a qubit.  Returns the value and the
    grid vector ``a`` attaining it.
    """
    if W.dims.m != 2:
        raise ValueError("Bloch-sphere grid requires a qubit first subsystem")
    return _grid_min_blocks(blocks(W.mat, W.dims), n_grid)


@dataclass
class ProductExtremum:
    """Result of optimising ``Tr(W |a><a| (x) |b><b|)`` over product vectors."""

    value: float
    a: np.ndarray
    b: np.ndarray
    mode: str
    restart_values: np.ndarray = field(repr=False)
    grid_value: float | None = None

    @property
    def agreeing_restarts(self) -> int:
        return int(np.sum(np.abs(self.restart_values - self.value) <= OPT_TOL))

    @property
    def certified(self) -> bool:
        """Grid oracle (qubit ``A``) or restart consensus confirms the optimum to ``OPT_TOL``."""
        if self.grid_value is not None:
            if self.mode == "min":
                return self.value <= self.grid_value + OPT_TOL
            return self.value >= self.grid_value - OPT_TOL
        return self.agreeing_restarts >= 3


def product_extremum(
    W: Witness, mode: str = "min", restarts: int = 50, seed=0, grid: int | None = None
) -> ProductExtremum:
    """Extremum of ``Tr(W rho_A (x) rho_B)`` over pure product states.

    For fixed ``a`` the optimum over ``b`` is an extreme eigenvalue of
    ``G(a) = sum_ij W_ij a_j conj(a_i)``, so only ``a`` is searched: Nelder-Mead in a
    ``2m - 2`` angle chart from ``restarts`` random starts, each polished by
    alternating eigen-steps.  When ``A`` is a qubit, an ``grid x grid`` Bloch-sphere
    scan (default 1000) is run as an independent check; pass ``grid=0`` to skip it.
    """
    if mode not in ("min", "max"):
        raise ValueError("mode must be 'min' or 'max'")
    sign = 1.0 if mode == "min" else -1.0
    B = sign * blocks(W.mat, W.dims)
    m = W.dims.m
    rng = _rng(seed)

    if m == 1:
        lam, vec = np.linalg.eigh(B[0, 0])
        value = sign * float(lam[0])
        return ProductExtremum(value, np.ones(1, complex), vec[:, 0], mode, np.array([value]))

    def objective(x):
        return np.linalg.eigvalsh(_reduced_b(B, _unit_vector(x, m)))[0]

    found = []
    for _ in range(restarts):
        x0 = np.concatenate([rng.uniform(0, np.pi / 2, m - 1), rng.uniform(0, 2 * np.pi, m - 1)])
        res = minimize(objective, x0, method="Nelder-Mead",
                       options={"xatol": 1e-9, "fatol": 1e-13, "maxiter": 4000 * m})
        found.append(_seesaw(B, _unit_vector(res.x, m)))
    vals = np.array([f[0] for f in found])
    k = int(np.argmin(vals))
    value, a, b = found[k]

    grid_value = None
    if m == 2:
        n_grid = 1000 if grid is None else grid
        if n_grid:
            g, ga = _grid_min_blocks(B, n_grid)
            if g < value:
                value, a, b = _seesaw(B, ga)
            grid_value = sign * g
    return ProductExtremum(sign * value, a, b, mode, sign * vals, grid_value)


def optimize_witness(W: Witness, restarts: int = 50, seed=0, grid: int | None = None) -> Witness:
    """``W' = W - eps * I`` with ``eps`` the minimum of ``W`` over product states."""
    ext = product_extremum(W, "min", restarts, seed, grid)
    # a minimum at roundoff level means the witness is already tight
    eps = 0.0 if abs(ext.value) < EPS_ROUNDOFF * max(1.0, np.abs(W.mat).max()) else ext.value
    shifted = W.mat - eps * np.eye(W.dims.total)
    return Witness(shifted, W.dims, "optimized", W.source, eps)


def projection_witness(rho: DensityMatrix, restarts: int = 50, seed=0, grid: int | None = None) -> Witness:
    """``W = eps * I - rho`` with ``eps`` the largest overlap of ``rho`` with a product state."""
    ext = product_extremum(Witness(rho.mat, rho.dims, "state"), "max", restarts, seed, grid)
    W = ext.value * np.eye(rho.dims.total) - rho.mat
    return Witness(W, rho.dims, "projection", rho, ext.value)


def sampled_product_minimum(W: Witness, samples: int = 10_000, seed=0) -> float:
    """Smallest ``Tr(W sigma)`` over ``samples`` Haar-random pure product states."""
    rng = _rng(seed)
    m, n = W.dims
    a = rng.standard_normal((samples, m)) + 1j * rng.standard_normal((samples, m))
    b = rng.standard_normal((samples, n)) + 1j * rng.standard_normal((samples, n))
    a /= np.linalg.norm(a, axis=1, keepdims=True)
    b /= np.linalg.norm(b, axis=1, keepdims=True)
    psi = (a[:, :, None] * b[:, None, :]).reshape(samples, m * n)
    vals = np.einsum("si,ij,sj->s", psi.conj(), W.mat, psi)
    return float(vals.real.min())
