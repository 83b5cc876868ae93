"""Parameter scans, detection thresholds and sampled detection rates.

A *detector* is any callable ``rho -> float`` returning a signed diagnostic that
is positive exactly when ``rho`` is detected as entangled:

* realignment: ``||R(rho)|| - 1``
* PPT: ``-lambda_min(rho^{T_A})``
* witness ``W``: ``-Tr(W rho)``
* map ``L``: ``-lambda_min((Id (x) L) rho)``

each minus the detection tolerance ``1e-10``.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import bisect

from .criteria import DETECTION_TOL, ppt_check, realignment_check
from .maps import LinearMap, detection_value, from_witness
from .states import (
    DensityMatrix,
    _rng,
    horodecki_2x4,
    noisy_mixture,
    random_ppt_symmetric,
    upb_tiles_bes,
    werner_2x2,
)
from .witness import Witness, evaluate, ppt_witness, realignment_witness

Detector = Callable[[DensityMatrix], float]

SCAN_HEADER = "# entwit-scan v1"
SCAN_COLUMNS = (
    "param",
    "realign_norm",
    "ppt_min_eig",
    "ppt_norm",
    "w_realign",
    "w_ppt",
    "witness",
    "map_lambda_min",
    "f",
    "realign_detected",
    "ppt_detected",
    "witness_detected",
    "map_detected",
)


# each diagnostic is offset by the detection tolerance so that its sign is the verdict


def realign_detector(rho: DensityMatrix) -> float:
    return realignment_check(rho).value - 1.0 - DETECTION_TOL


def ppt_detector(rho: DensityMatrix) -> float:
    return -ppt_check(rho).min_eigenvalue - DETECTION_TOL


def witness_detector(W: Witness) -> Detector:
    return lambda rho: -evaluate(W, rho) - DETECTION_TOL


def map_detector(L: LinearMap, side: str = "auto") -> Detector:
    return lambda rho: -detection_value(L, rho, side).lambda_min - DETECTION_TOL


# --- state families -----------------------------------------------------------

FAMILIES = ("werner", "upb-noisy", "horodecki", "horodecki-noisy")


def family_state(family: str, t: float, b: float = 0.218) -> DensityMatrix:
    """Member of a one-parameter family at parameter ``t``.

    ``werner``: ``t = f``; ``horodecki``: ``t = b``; ``upb-noisy`` and
    ``horodecki-noisy``: ``t = p``, the weight of the entangled state in the
    mixture with white noise.
    """
    if family == "werner":
        return werner_2x2(t)
    if family == "horodecki":
        return horodecki_2x4(t)
    if family == "upb-noisy":
        return noisy_mixture(upb_tiles_bes(), t)
    if family == "horodecki-noisy":
        return noisy_mixture(horodecki_2x4(b), t)
    raise ValueError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")


# --- scans --------------------------------------------------------------------


@dataclass(frozen=True)
class ScanRow:
    param: float
    realign_norm: float
    ppt_min_eig: float
    ppt_norm: float
    w_realign: float
    w_ppt: float
    witness: float | None
    map_lambda_min: float | None

    @property
    def f(self) -> float | None:
        return None if self.map_lambda_min is None else min(0.0, self.map_lambda_min)

    @property
    def flags(self) -> tuple:
        def flag(x):
            return None if x is None else x < -DETECTION_TOL

        return (
            self.realign_norm > 1 + DETECTION_TOL,
            self.ppt_min_eig < -DETECTION_TOL,
            flag(self.witness),
            flag(self.map_lambda_min),
        )

    def values(self) -> tuple:
        return (
            self.param, self.realign_norm, self.ppt_min_eig, self.ppt_norm,
            self.w_realign, self.w_ppt, self.witness, self.map_lambda_min, self.f,
        ) + self.flags


def scan_point(rho: DensityMatrix, param: float, witness: Witness | None = None,
               linear_map: LinearMap | None = None) -> ScanRow:
    r = realignment_check(rho)
    p = ppt_check(rho)
    return ScanRow(
        param,
        r.value,
        p.min_eigenvalue,
        p.value,
        evaluate(realignment_witness(rho), rho),
        evaluate(ppt_witness(rho), rho),
        None if witness is None else evaluate(witness, rho),
        None if linear_map is None else detection_value(linear_map, rho).lambda_min,
    )


def parse_range(text: str) -> np.ndarray:
    """``"lo:hi:steps"`` -> ``steps`` evenly spaced points from ``lo`` to ``hi`` inclusive."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"range must be lo:hi:steps, got {text!r}")
    try:
        lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ValueError(f"range must be lo:hi:steps with numeric lo, hi and integer steps, got {text!r}") from None
    if steps < 1:
        raise ValueError(f"range needs at least one step, got {steps}")
    if not (np.isfinite(lo) and np.isfinite(hi)) or hi < lo:
        raise ValueError(f"range needs finite lo <= hi, got {lo}:{hi}")
    return np.linspace(lo, hi, steps) if steps > 1 else np.array([lo])


def scan(family: str, grid, b: float = 0.218, witness: Witness | None = None,
         linear_map: LinearMap | None = None, jobs: int = 1) -> list[ScanRow]:
    """Evaluate every detector at each grid point; rows come back in grid order."""
    grid = [float(t) for t in grid]
    states = [family_state(family, t, b) for t in grid]  # validate all before any work

    def work(k):
        return scan_point(states[k], grid[k], witness, linear_map)

    if jobs > 1:
        with ThreadPoolExecutor(jobs) as pool:
            return list(pool.map(work, range(len(grid))))
    return [work(k) for k in range(len(grid))]


def _cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    return f"{x:.17g}"


def format_scan_csv(rows: list[ScanRow]) -> str:
    lines = [SCAN_HEADER, ",".join(SCAN_COLUMNS)]
    lines += [",".join(_cell(v) for v in row.values()) for row in rows]
    return "\n".join(lines) + "\n"


# --- thresholds ---------------------------------------------------------------


class BracketError(ValueError):
    def __init__(self, lo: float, hi: float, d_lo: float, d_hi: float):
        self.endpoints = ((lo, d_lo), (hi, d_hi))
        super().__init__(
            f"diagnostic does not change sign on [{lo:g}, {hi:g}]: "
            f"d({lo:g}) = {d_lo:.10g}, d({hi:g}) = {d_hi:.10g}"
        )


@dataclass(frozen=True)
class Threshold:
    p_star: float
    diagnostic: float
    d_lo: float
    d_hi: float


def bisect_threshold(diag: Callable[[float], float], lo: float = 0.0, hi: float = 1.0,
                     tol: float = 1e-5) -> Threshold:
    """Root of a signed diagnostic on ``[lo, hi]`` by bisection to interval width ``tol``.

    The endpoints must have opposite signs, which guards the assumption of a single
    crossing; otherwise :class:`BracketError` reports both endpoint values.
    """
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    d_lo, d_hi = diag(lo), diag(hi)
    if not d_lo * d_hi < 0:
        raise BracketError(lo, hi, d_lo, d_hi)
    p = bisect(diag, lo, hi, xtol=tol)
    return Threshold(float(p), float(diag(p)), d_lo, d_hi)


def mixture_threshold(rho: DensityMatrix, detector: Detector, tol: float = 1e-5) -> Threshold:
    """Smallest weight ``p`` at which ``p rho + (1 - p) I / d`` is detected."""
    return bisect_threshold(lambda p: detector(noisy_mixture(rho, p)), 0.0, 1.0, tol)


# --- sampling -----------------------------------------------------------------


@dataclass(frozen=True)
class DetectionRates:
    count: int
    witness: float
    witness_map: float
    realignment: float


def ppt_symmetric_detection_rate(W: Witness, count: int = 10_000, seed=0) -> DetectionRates:
    """Fractions of random PPT-symmetric states detected by ``W``, by its map, and by realignment.

    A state with ``sigma = sigma^{T_A}`` is PPT, so any detection here is of bound
    entanglement.
    """
    if count < 1:
        raise ValueError(f"count must be positive, got {count}")
    rng = _rng(seed)
    L = from_witness(W)
    hits = np.zeros(3, dtype=int)
    for _ in range(count):
        sigma = random_ppt_symmetric(W.dims, rng)
        hits += (
            evaluate(W, sigma) < -DETECTION_TOL,
            detection_value(L, sigma).entangled,
            realignment_check(sigma).entangled,
        )
    return DetectionRates(count, *(hits / count))
