"""Scalar maximization over the splitting ratio.

Used to cross-check the closed-form optimal ratio against the high-SNR
MI expression and to locate finite-power optima of the Monte-Carlo
estimate.  Deterministic throughout: grid scans break ties toward the
smallest rho, and the MC variant shares one master seed across grid
points (common random numbers) so comparisons are not drowned in
independent sampling noise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelParams, as_rho
from .estimator import EstimatorConfig, estimate_mi

__all__ = ["ScanResult", "maximize_over_rho", "argmax_mc"]

_INV_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class ScanResult:
    """Outcome of a 1-D maximization over rho."""

    rho_star: float
    value: float
    grid_step: float
    refined: bool


def _eval_grid(objective, grid, lo):
    """Evaluate on the grid; only the lo endpoint may be undefined."""
    vals = np.empty(len(grid))
    for i, r in enumerate(grid):
        try:
            v = float(objective(r))
        except (ValueError, ZeroDivisionError, FloatingPointError):
            v = -np.inf
        if not np.isfinite(v):
            if r != lo:
                raise ValueError(f"objective is non-finite at rho={r}, beyond the lo endpoint")
            v = -np.inf
        vals[i] = v
    return vals


def maximize_over_rho(objective, lo: float, hi: float,
                      grid_step: float = 1e-3, refine_tol: float = 1e-6) -> ScanResult:
    """Coarse grid scan plus golden-section refinement of ``objective``.

    The grid covers [lo, hi] inclusive; the bracketing cell around the
    grid argmax is refined by golden section down to ``refine_tol``.
    Ties break toward the smallest rho.  The objective may be undefined
    at the lo endpoint only (treated as -inf there).
    """
    lo, hi = as_rho(lo), as_rho(hi)
    if not lo < hi:
        raise ValueError("lo must be strictly below hi")
    if grid_step <= 0 or refine_tol <= 0:
        raise ValueError("grid_step and refine_tol must be positive")
    n = int(np.ceil((hi - lo) / grid_step))
    grid = np.minimum(lo + grid_step * np.arange(n + 1), hi)
    vals = _eval_grid(objective, grid, lo)
    i = int(np.argmax(vals))  # first max: smallest rho on ties
    best_r, best_v = float(grid[i]), float(vals[i])

    a = float(grid[max(i - 1, 0)])
    b = float(grid[min(i + 1, len(grid) - 1)])
    c = b - _INV_GOLDEN * (b - a)
    d = a + _INV_GOLDEN * (b - a)
    fc = _eval_grid(objective, [c], lo)[0]
    fd = _eval_grid(objective, [d], lo)[0]
    while b - a > refine_tol:
        if fc >= fd:  # keep the left interval on ties
            b, d, fd = d, c, fc
            c = b - _INV_GOLDEN * (b - a)
            fc = _eval_grid(objective, [c], lo)[0]
        else:
            a, c, fc = c, d, fd
            d = a + _INV_GOLDEN * (b - a)
            fd = _eval_grid(objective, [d], lo)[0]
        for r, v in ((c, fc), (d, fd)):
            if v > best_v or (v == best_v and r < best_r):
                best_r, best_v = float(r), float(v)
    return ScanResult(rho_star=best_r, value=best_v,
                      grid_step=float(grid_step), refined=True)


def argmax_mc(params: ChannelParams, cfg: EstimatorConfig, grid,
              marginal: str = "radial", workers: int | None = None) -> ScanResult:
    """Grid argmax of the Monte-Carlo MI estimate under common random numbers.

    Every grid point runs with the same master seed, so the noise in
    neighboring estimates is strongly correlated and the comparison is
    far less noisy than with independent runs.  No golden refinement:
    the objective is noisy, so the result is the grid argmax with ties
    toward the smallest rho.
    """
    grid = sorted(as_rho(g) for g in np.atleast_1d(np.asarray(grid, dtype=float)))
    if not grid:
        raise ValueError("grid must be non-empty")
    best_r, best_v = None, -np.inf
    for r in grid:
        v = estimate_mi(params, r, cfg, marginal, workers).bits
        if v > best_v:
            best_r, best_v = r, v
    diffs = np.diff(grid)
    step = float(diffs.min()) if len(diffs) else float("nan")
    return ScanResult(rho_star=float(best_r), value=float(best_v),
                      grid_step=step, refined=False)
