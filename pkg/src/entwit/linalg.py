"""Dense complex matrix kernel for bipartite operators.

All functions take and return plain ``numpy`` arrays.  A bipartite operator on
``C^m (x) C^n`` is an ``mn x mn`` array read as an ``m x m`` grid of ``n x n``
blocks, with block ``(i, j)`` equal to ``Z[i*n:(i+1)*n, j*n:(j+1)*n]``.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

HERMITIAN_TOL = 1e-10


class Dims(NamedTuple):
    """Local dimensions ``(m, n)`` of a bipartite system."""

    m: int
    n: int

    @property
    def total(self) -> int:
        return self.m * self.n


def as_dims(dims) -> Dims:
    m, n = (int(d) for d in dims)
    if m < 1 or n < 1:
        raise ValueError(f"subsystem dimensions must be >= 1, got ({m}, {n})")
    return Dims(m, n)


def _check_square(Z: np.ndarray, size: int, what: str = "matrix") -> None:
    if Z.ndim != 2 or Z.shape != (size, size):
        raise ValueError(f"{what} must be {size}x{size}, got shape {Z.shape}")


def vec(A) -> np.ndarray:
    """Stack the columns of ``A`` into a column vector of shape ``(rows*cols, 1)``."""
    A = np.asarray(A)
    return A.reshape(-1, order="F").reshape(-1, 1)


def realign(Z, dims) -> np.ndarray:
    """Realigned ``m^2 x n^2`` matrix of a bipartite operator.

    Rows are ``vec(Z_11)^T, ..., vec(Z_m1)^T, vec(Z_12)^T, ..., vec(Z_mm)^T``,
    i.e. blocks enumerated column by column, each block vectorised column-major.
    """
    m, n = as_dims(dims)
    Z = np.asarray(Z)
    _check_square(Z, m * n)
    # Z[i, k, j, l] is entry (k, l) of block (i, j); row = j*m + i, col = l*n + k
    return Z.reshape(m, n, m, n).transpose(2, 0, 3, 1).reshape(m * m, n * n)


def realign_inverse(Y, dims) -> np.ndarray:
    """Undo :func:`realign`; a pure permutation of entries."""
    m, n = as_dims(dims)
    Y = np.asarray(Y)
    if Y.shape != (m * m, n * n):
        raise ValueError(f"expected a {m * m}x{n * n} matrix, got shape {Y.shape}")
    return Y.reshape(m, m, n, n).transpose(1, 3, 0, 2).reshape(m * n, m * n)


def partial_transpose(Z, dims) -> np.ndarray:
    """Transpose on the first subsystem: block ``(i, j)`` becomes block ``(j, i)``."""
    m, n = as_dims(dims)
    Z = np.asarray(Z)
    _check_square(Z, m * n)
    return Z.reshape(m, n, m, n).transpose(2, 1, 0, 3).reshape(m * n, m * n)


def partial_transpose_b(Z, dims) -> np.ndarray:
    """Transpose inside every block (second subsystem)."""
    m, n = as_dims(dims)
    Z = np.asarray(Z)
    _check_square(Z, m * n)
    return Z.reshape(m, n, m, n).transpose(0, 3, 2, 1).reshape(m * n, m * n)


def svd(G):
    """Compact SVD ``G = U @ diag(S) @ V^H`` with a deterministic phase convention.

    Each left singular vector is rotated so that its largest-magnitude entry
    (lowest row index on ties) is real and positive; the matching right vector
    takes the same phase, so the product is unchanged.

    Returns ``(U, S, V)`` with ``U`` of shape ``(rows, q)``, ``V`` of shape
    ``(cols, q)`` and ``q = min(rows, cols)``; ``S`` is sorted descending.
    """
    G = np.asarray(G, dtype=complex)
    if not np.all(np.isfinite(G)):
        raise ValueError("matrix has non-finite entries")
    try:
        U, S, Vh = np.linalg.svd(G, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise RuntimeError(f"SVD did not converge: {exc}") from exc
    V = Vh.conj().T
    pivot = np.argmax(np.abs(U), axis=0)
    lead = U[pivot, np.arange(U.shape[1])]
    phase = np.ones_like(lead)
    nz = np.abs(lead) > 0
    phase[nz] = np.abs(lead[nz]) / lead[nz]
    return U * phase, S, V * phase


class SpectrumDiagnostic(NamedTuple):
    """Degeneracy summary of a singular-value list.

    ``zero_count`` counts values below ``tol * S[0]``; ``degenerate_pairs`` counts
    adjacent nonzero values closer than ``tol * S[0]``; ``min_gap`` is the smallest
    relative gap between adjacent nonzero values.  Either count being nonzero means
    the singular vectors, and anything built from them, are not unique.
    """

    singular_values: np.ndarray
    zero_count: int
    degenerate_pairs: int
    min_gap: float

    @property
    def unique(self) -> bool:
        return self.zero_count == 0 and self.degenerate_pairs == 0


def svd_diagnostic(G, tol: float = 1e-8) -> SpectrumDiagnostic:
    S = np.linalg.svd(np.asarray(G), compute_uv=False)
    scale = S[0] if S.size and S[0] > 0 else 1.0
    nonzero = S[S > tol * scale]
    gaps = -np.diff(nonzero) / scale
    return SpectrumDiagnostic(
        S,
        int(S.size - nonzero.size),
        int(np.sum(gaps < tol)),
        float(gaps.min()) if gaps.size else np.inf,
    )


def trace_norm(G) -> float:
    """Sum of singular values."""
    return float(np.sum(np.linalg.svd(np.asarray(G), compute_uv=False)))


def hermitian_defect(H) -> float:
    """``max |H - H^H|`` relative to ``max(1, max |H|)``.

    The floor of 1 keeps roundoff in near-zero matrices from reading as a large defect.
    """
    H = np.asarray(H)
    if not H.size:
        return 0.0
    return float(np.max(np.abs(H - H.conj().T)) / max(1.0, np.max(np.abs(H))))


def hermitize(H, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Return ``(H + H^H) / 2`` after checking ``H`` is Hermitian within ``tol``."""
    H = np.asarray(H)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {H.shape}")
    defect = hermitian_defect(H)
    if defect > tol:
        raise ValueError(f"matrix is not Hermitian (relative defect {defect:.3e} > {tol:.0e})")
    return (H + H.conj().T) / 2


def eigvalsh(H, tol: float = HERMITIAN_TOL) -> np.ndarray:
    return np.linalg.eigvalsh(hermitize(H, tol))


def min_eigenvalue(H, tol: float = HERMITIAN_TOL) -> float:
    return float(eigvalsh(H, tol)[0])


def max_eigenvalue(H, tol: float = HERMITIAN_TOL) -> float:
    return float(eigvalsh(H, tol)[-1])


def kron(A, B) -> np.ndarray:
    return np.kron(np.asarray(A), np.asarray(B))


def max_entangled_projector(m: int) -> np.ndarray:
    """``|Phi><Phi|`` with ``|Phi> = sum_i |ii> / sqrt(m)``."""
    if m < 1:
        raise ValueError("m must be >= 1")
    phi = np.eye(m).reshape(-1) / np.sqrt(m)
    return np.outer(phi, phi).astype(complex)


def blocks(Z, dims) -> np.ndarray:
    """View of ``Z`` as an array ``B[i, j]`` of ``n x n`` blocks."""
    m, n = as_dims(dims)
    Z = np.asarray(Z)
    _check_square(Z, m * n)
    return Z.reshape(m, n, m, n).transpose(0, 2, 1, 3)


def from_blocks(B) -> np.ndarray:
    """Inverse of :func:`blocks` for an ``(m, m, n, n)`` array."""
    B = np.asarray(B)
    m, _, n, _ = B.shape
    return B.transpose(0, 2, 1, 3).reshape(m * n, m * n)
