"""Central-difference stencils on uniform grids and the grid sanity check."""
from __future__ import annotations

import numpy as np

from .errors import GridTooCoarse

GRID_LIMIT = 0.01
SUPPORT_RTOL = 1e-14


def uniform_step(x) -> float:
    x = np.asarray(x, dtype=np.float64)
    if x.size < 5:
        raise ValueError("need at least 5 grid points")
    d = np.diff(x)
    h = float(d.mean())
    if h <= 0 or np.max(np.abs(d - h)) > 1e-9 * max(abs(h), 1.0):
        raise ValueError("grid must be uniform and increasing")
    return h


def d1(f, h: float, order: int = 4):
    """First derivative on the interior; drops order//2 points at each end."""
    if order == 2:
        return (f[2:] - f[:-2]) / (2 * h)
    if order == 4:
        return (-f[4:] + 8 * f[3:-1] - 8 * f[1:-3] + f[:-4]) / (12 * h)
    if order == 6:
        return (f[6:] - 9 * f[5:-1] + 45 * f[4:-2] - 45 * f[2:-4] + 9 * f[1:-5] - f[:-6]) / (60 * h)
    raise ValueError("order must be 2, 4 or 6")


def d2(f, h: float, order: int = 4):
    """Second derivative on the interior; drops order//2 points at each end."""
    if order == 2:
        return (f[2:] - 2 * f[1:-1] + f[:-2]) / (h * h)
    if order == 4:
        return (-f[4:] + 16 * f[3:-1] - 30 * f[2:-2] + 16 * f[1:-3] - f[:-4]) / (12 * h * h)
    if order == 6:
        return (
            2 * f[6:] - 27 * f[5:-1] + 270 * f[4:-2] - 490 * f[3:-3]
            + 270 * f[2:-4] - 27 * f[1:-5] + 2 * f[:-6]
        ) / (180 * h * h)
    raise ValueError("order must be 2, 4 or 6")


def trim(a, order: int):
    k = order // 2
    return a[k:-k]


def check_grid(h: float, v, psi) -> None:
    """Raise GridTooCoarse if ``h^2 max|V|`` exceeds 0.01 where ``psi`` is not negligible.

    Points where ``|psi|`` is below ``1e-14`` of its maximum carry no weight
    in any residual and are ignored.
    """
    a = np.abs(psi)
    top = a.max() if a.size else 0.0
    mask = a >= SUPPORT_RTOL * top if top > 0 else np.ones_like(a, dtype=bool)
    vmax = float(np.max(np.abs(v[mask]))) if np.any(mask) else 0.0
    if h * h * vmax > GRID_LIMIT:
        raise GridTooCoarse(h * h * vmax)
