"""Realignment and PPT separability tests."""

from __future__ import annotations

from dataclasses import dataclass

from .linalg import min_eigenvalue, partial_transpose, realign, trace_norm
from .states import DensityMatrix

DETECTION_TOL = 1e-10


@dataclass(frozen=True)
class CriterionResult:
    criterion_name: str
    value: float
    threshold: float = 1.0
    entangled: bool = False
    min_eigenvalue: float | None = None

    @property
    def excess(self) -> float:
        """Signed distance past the separable bound (positive means detected)."""
        return self.value - self.threshold


def realignment_check(rho: DensityMatrix) -> CriterionResult:
    """Trace norm of the realigned state; a value above 1 certifies entanglement."""
    value = trace_norm(realign(rho.mat, rho.dims))
    return CriterionResult("realignment", value, 1.0, value > 1.0 + DETECTION_TOL)


def ppt_check(rho: DensityMatrix) -> CriterionResult:
    pt = partial_transpose(rho.mat, rho.dims)
    lam = min_eigenvalue(pt)
    return CriterionResult("ppt", trace_norm(pt), 1.0, lam < -DETECTION_TOL, lam)
