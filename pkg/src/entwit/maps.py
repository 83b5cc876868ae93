"""Linear maps between matrix algebras and their use as entanglement tests.

A map ``L: M_a -> M_b`` is stored through the images of the matrix units,
``blocks[i, j] = L(|i><j|)``, an array of shape ``(a, a, b, b)``.  Read as an
``ab x ab`` block matrix this is the unnormalised Choi matrix, so converting
between a witness and its map is a reshape in either direction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import Dims, blocks, from_blocks, min_eigenvalue, partial_transpose
from .states import DensityMatrix, _rng
from .witness import Witness

DETECTION_TOL = 1e-10
POSITIVITY_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class LinearMap:
    blocks: np.ndarray
    name: str = ""

    def __post_init__(self):
        B = np.array(self.blocks, dtype=complex)
        if B.ndim != 4 or B.shape[0] != B.shape[1] or B.shape[2] != B.shape[3]:
            raise ValueError(f"blocks must have shape (a, a, b, b), got {B.shape}")
        dev = np.max(np.abs(B - B.transpose(1, 0, 3, 2).conj()), initial=0.0)
        if dev > 1e-10 * max(1.0, np.max(np.abs(B), initial=0.0)):
            raise ValueError(f"map does not preserve Hermiticity (defect {dev:.3e})")
        B.setflags(write=False)
        object.__setattr__(self, "blocks", B)

    @property
    def in_dim(self) -> int:
        return self.blocks.shape[0]

    @property
    def out_dim(self) -> int:
        return self.blocks.shape[2]

    def __call__(self, X) -> np.ndarray:
        return apply(self, X)

    def __repr__(self):
        label = f"{self.name}, " if self.name else ""
        return f"LinearMap({label}M_{self.in_dim} -> M_{self.out_dim})"


@dataclass(frozen=True)
class MapDetectionReport:
    lambda_min: float
    entangled: bool
    operator_spectrum: np.ndarray

    @property
    def f(self) -> float:
        """``min(0, lambda_min)``, the quantity plotted against the state parameter."""
        return min(0.0, self.lambda_min)


@dataclass(frozen=True)
class PositivityReport:
    min_eigenvalue: float
    samples: int
    positive: bool


@dataclass(frozen=True)
class IndecomposabilityReport:
    ppt_min_eigenvalue: float
    lambda_min: float
    positivity: PositivityReport
    indecomposable: bool

    def __bool__(self):
        return self.indecomposable


def from_witness(W: Witness) -> LinearMap:
    """``L(|i><j|) = <i|W|j>``, the ``n x n`` block ``(i, j)`` of ``W``."""
    return LinearMap(blocks(W.mat, W.dims), f"map[{W.origin}]")


def to_witness(L: LinearMap) -> Witness:
    """``(Id (x) L)`` applied to the unnormalised maximally entangled projector."""
    return Witness(from_blocks(L.blocks), Dims(L.in_dim, L.out_dim), "map")


def choi_matrix(L: LinearMap) -> np.ndarray:
    """Normalised Choi matrix ``(Id (x) L)(|Phi><Phi|)``, unit trace for trace-preserving ``L``."""
    return from_blocks(L.blocks) / L.in_dim


def apply(L: LinearMap, X) -> np.ndarray:
    X = np.asarray(X)
    if X.shape != (L.in_dim, L.in_dim):
        raise ValueError(f"input must be {L.in_dim}x{L.in_dim}, got {X.shape}")
    return np.einsum("ij,ijkl->kl", X, L.blocks)


def apply_id_tensor(L: LinearMap, rho) -> np.ndarray:
    """``(Id (x) L) rho`` with ``L`` acting on the second subsystem."""
    mat, (m, n) = _unpack(rho)
    if L.in_dim != n:
        raise ValueError(f"map acts on M_{L.in_dim} but subsystem B has dimension {n}")
    out = np.einsum("xyij,ijkl->xykl", blocks(mat, (m, n)), L.blocks)
    return from_blocks(out)


def apply_tensor_id(L: LinearMap, rho) -> np.ndarray:
    """``(L (x) Id) rho`` with ``L`` acting on the first subsystem."""
    mat, (m, n) = _unpack(rho)
    if L.in_dim != m:
        raise ValueError(f"map acts on M_{L.in_dim} but subsystem A has dimension {m}")
    b = L.out_dim
    out = np.einsum("ikjl,ijpq->pkql", mat.reshape(m, n, m, n), L.blocks)
    return out.reshape(b * n, b * n)


def _unpack(rho):
    if isinstance(rho, DensityMatrix):
        return rho.mat, rho.dims
    mat, dims = rho
    return np.asarray(mat), Dims(*dims)


def detection_value(L: LinearMap, rho: DensityMatrix, side: str = "auto") -> MapDetectionReport:
    """Smallest eigenvalue of ``(Id (x) L) rho`` (``side="B"``) or ``(L (x) Id) rho`` (``side="A"``).

    ``side="auto"`` acts on B when the input dimension fits it, otherwise on A.
    """
    if side == "auto":
        side = "B" if L.in_dim == rho.dims.n else "A"
    if side == "B":
        out = apply_id_tensor(L, rho)
    elif side == "A":
        out = apply_tensor_id(L, rho)
    else:
        raise ValueError("side must be 'A', 'B' or 'auto'")
    spec = np.linalg.eigvalsh((out + out.conj().T) / 2)
    return MapDetectionReport(float(spec[0]), bool(spec[0] < -DETECTION_TOL), spec)


def dual(L: LinearMap) -> LinearMap:
    """Hilbert-Schmidt adjoint: ``Tr(L(A)^H B) = Tr(A^H L'(B))``."""
    return LinearMap(L.blocks.transpose(2, 3, 0, 1).conj(), f"dual[{L.name}]" if L.name else "dual")


def identity_map(d: int) -> LinearMap:
    B = np.zeros((d, d, d, d))
    for i in range(d):
        for j in range(d):
            B[i, j, i, j] = 1
    return LinearMap(B, "identity")


def transpose_map(d: int) -> LinearMap:
    B = np.zeros((d, d, d, d))
    for i in range(d):
        for j in range(d):
            B[i, j, j, i] = 1
    return LinearMap(B, "transpose")


def tang_apply(a, u: float, eps: float) -> np.ndarray:
    """The ``M_4 -> M_2`` map with parameters ``u`` and ``eps`` evaluated on ``a``."""
    a = np.asarray(a)
    # 1-based indices as in the defining formula
    A = lambda i, j: a[i - 1, j - 1]  # noqa: E731
    return np.array([
        [(1 - eps) * A(1, 1) + A(2, 2) + 2 * A(3, 3) + A(4, 4),
         -2 * A(2, 3) - 2 * A(3, 4) + u * A(3, 1) - A(1, 2)],
        [-2 * A(3, 2) - 2 * A(4, 3) + u * A(1, 3) - A(2, 1),
         u * u * A(1, 1) - u * A(1, 4) + 2 * A(2, 2) - u * A(4, 1) + A(4, 4)],
    ])


def tang_map(u: float, eps: float | None = None) -> LinearMap:
    """Tang's ``M_4 -> M_2`` map; ``eps`` defaults to ``u**2 / 6``.

    Requires ``0 < u < 1`` and ``0 < eps <= u**2 / 6``.
    """
    if eps is None:
        eps = u * u / 6
    if not 0 < u < 1:
        raise ValueError(f"u must lie in (0, 1), got {u}")
    if not 0 < eps <= u * u / 6 * (1 + 1e-12):
        raise ValueError(f"eps must lie in (0, u^2/6 = {u * u / 6:.6g}], got {eps}")
    B = np.empty((4, 4, 2, 2))
    for i in range(4):
        for j in range(4):
            E = np.zeros((4, 4))
            E[i, j] = 1
            B[i, j] = tang_apply(E, u, eps)
    return LinearMap(B, f"tang(u={u:g}, eps={eps:g})")


def tang_dual(u: float, eps: float | None = None) -> LinearMap:
    """``M_2 -> M_4`` dual of :func:`tang_map`."""
    return dual(tang_map(u, eps))


def positivity_check(L: LinearMap, samples: int = 10_000, seed=0) -> PositivityReport:
    """Smallest eigenvalue of ``L(|psi><psi|)`` over Haar-random pure ``psi``.

    Sampling can only refute positivity; a pass is evidence, not proof.
    """
    rng = _rng(seed)
    a = L.in_dim
    psi = rng.standard_normal((samples, a)) + 1j * rng.standard_normal((samples, a))
    psi /= np.linalg.norm(psi, axis=1, keepdims=True)
    out = np.einsum("si,sj,ijkl->skl", psi, psi.conj(), L.blocks)
    lam = float(np.linalg.eigvalsh(out)[:, 0].min())
    return PositivityReport(lam, samples, lam >= -POSITIVITY_TOL)


def indecomposability_certificate(
    L: LinearMap, rho: DensityMatrix, side: str = "auto", samples: int = 10_000, seed=0
) -> IndecomposabilityReport:
    """Detecting a PPT state with a positive map shows the map is indecomposable.

    All three ingredients are checked: ``rho`` is PPT, the map detects it, and the
    map passes sampled positivity.  A map failing the last check certifies nothing.
    """
    ppt_lam = min_eigenvalue(partial_transpose(rho.mat, rho.dims))
    det = detection_value(L, rho, side)
    pos = positivity_check(L, samples, seed)
    ok = ppt_lam >= -DETECTION_TOL and det.entangled and pos.positive
    return IndecomposabilityReport(ppt_lam, det.lambda_min, pos, bool(ok))
