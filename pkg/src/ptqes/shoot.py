"""Complex shooting for 1D Schrodinger operators on a shifted line.

The equation ``-psi'' + V psi = E psi`` is integrated along ``t = x + i*eps``
with fixed-step RK4 from both ends of ``[-L, L]`` toward ``x_match``.  Each
side starts on the decaying asymptotic branch ``psi ~ exp(S(t))``; the two
solutions are compared through their Wronskian.  Eigenvalues are refined by
Newton's method on the (analytic) raw Wronskian.

A finite-difference Hamiltonian diagonalized with :mod:`ptqes.eigen` gives
an independent, lower-order cross-check.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numba
import numpy as np

from . import _fd, eigen
from .algebra import ShiftedPolynomial, evaluate
from .errors import (
    ContourError,
    NewtonDiverged,
    OverflowDespiteRenormalization,
    PoleAtPoint,
    PoleOnContour,
)
from .potentials import PotentialSpec

__all__ = [
    "ContourSpec",
    "AsymptoticBC",
    "SideSolution",
    "ShootResult",
    "default_contour",
    "asymptotic_bc",
    "integrate",
    "mismatch",
    "refine",
    "scan",
    "fd_spectrum",
    "residual_and_norm",
    "discrete_norm",
]

RENORM_EVERY = 100
DECAY_GUARD = -25.0
NEWTON_MAX_ITER = 50
NEWTON_TOL = 1e-10
DEDUPE_TOL = 1e-6
NOISE_FLOOR = 1e-14
STAGNATION_TOL = 1e-6
CERTIFY_PROBE = 1e-3
CERTIFY_FLOOR = 1e-8
FD_MAX_POINTS = 600


@dataclass(frozen=True)
class ContourSpec:
    """Integration line ``Im t = eps`` on ``[-L, L]`` with ``N`` steps per side."""

    eps: float = 1.0
    L: float = 8.0
    N: int = 8000
    x_match: float = 0.0

    def __post_init__(self):
        if not self.L > 0:
            raise ContourError("L must be positive")
        if self.N < 1000:
            raise ContourError("N must be at least 1000")
        if not -self.L < self.x_match < self.L:
            raise ContourError("x_match must lie strictly inside (-L, L)")

    @property
    def h(self) -> float:
        return self.L / self.N

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(-self.L, self.L, 2 * self.N + 1)

    @property
    def match_index(self) -> int:
        return int(round((self.x_match + self.L) / self.h))

    def replace(self, **kw) -> "ContourSpec":
        return ContourSpec(**{**self.__dict__, **kw})


@dataclass(frozen=True)
class AsymptoticBC:
    """Starting data ``psi = exp(S)``, ``psi' = S' exp(S)`` at the contour end(s)."""

    S: ShiftedPolynomial
    side: str = "both"

    def __post_init__(self):
        if self.side not in ("left", "right", "both"):
            raise ValueError("side must be 'left', 'right' or 'both'")


@dataclass(frozen=True, eq=False)
class SideSolution:
    """One-sided solution; true values are ``psi * exp(log_scale)`` up to a constant."""

    x: np.ndarray
    psi: np.ndarray
    dpsi: np.ndarray
    log_scale: np.ndarray
    side: str

    @property
    def end(self) -> tuple[complex, complex, float]:
        return complex(self.psi[-1]), complex(self.dpsi[-1]), float(self.log_scale[-1])


@dataclass(frozen=True, eq=False)
class ShootResult:
    E: complex
    mismatch: complex
    x: np.ndarray
    psi: np.ndarray
    residual: float
    norm: float
    iterations: int = 0
    steps: tuple = ()

    @property
    def samples(self):
        return np.column_stack([self.x, self.psi])


def default_contour(v: PotentialSpec, eps: float | None = None) -> ContourSpec:
    """``L = 6`` for potentials growing like ``t^6`` or faster, else ``L = 8``."""
    e = v.eps if eps is None else eps
    deg = v.expr.num.degree - v.expr.den.degree
    return ContourSpec(eps=e, L=6.0 if deg >= 6 else 8.0, N=8000)


# asymptotics -------------------------------------------------------------


def _sqrt_series(p: np.ndarray, n: int) -> np.ndarray:
    """First n+1 coefficients of sqrt(1 + p[1] s + p[2] s^2 + ...)."""
    r = np.zeros(n + 1, dtype=np.complex128)
    r[0] = 1.0
    for k in range(1, n + 1):
        acc = p[k] if k < p.size else 0.0
        for i in range(1, k):
            acc -= r[i] * r[k - i]
        r[k] = acc / 2.0
    return r


def asymptotic_bc(v: PotentialSpec, eps: float | None = None) -> AsymptoticBC:
    """Leading WKB exponent ``S = -int sqrt(P)`` of the polynomial part ``P`` of ``V``.

    Only the non-negative powers of the large-``t`` expansion of ``sqrt(P)``
    are kept; the branch is the one decaying at both ends of the contour.
    """
    e = v.eps if eps is None else eps
    num, den = v.expr.num, v.expr.den
    poly, _ = divmod(num, den)
    c = poly.coeffs
    deg = c.size - 1
    if deg < 2 or deg % 2:
        raise ContourError(f"need an even-degree confining polynomial part, got degree {deg}")
    m = deg // 2
    lead = c[-1]
    ratios = c[::-1] / lead  # 1, p1, p2, ... in powers of 1/t
    r = np.sqrt(complex(lead)) * _sqrt_series(ratios, m)
    root = np.zeros(m + 1, dtype=np.complex128)
    for k in range(m + 1):
        root[m - k] = r[k]
    integral = ShiftedPolynomial(root, e).antiderivative()
    best = None
    for sign in (-1.0, 1.0):
        S = sign * integral
        worst = max(S(-1.0e3).real, S(1.0e3).real)
        if best is None or worst < best[0]:
            best = (worst, S)
    return AsymptoticBC(best[1], "both")


# RK4 kernel --------------------------------------------------------------


@numba.njit(cache=True, nogil=True)
def _rk4_sweep(vh, E, h, start, nsteps, direction, dpsi0, renorm_every):
    psi_s = np.empty(nsteps + 1, dtype=np.complex128)
    dpsi_s = np.empty(nsteps + 1, dtype=np.complex128)
    log_s = np.empty(nsteps + 1, dtype=np.float64)
    psi = 1.0 + 0.0j
    phi = dpsi0
    log = 0.0
    psi_s[0] = psi
    dpsi_s[0] = phi
    log_s[0] = 0.0
    hh = direction * h
    ok = True
    for k in range(nsteps):
        m = 2 * (start + direction * k)
        v0 = vh[m] - E
        vm = vh[m + direction] - E
        v1 = vh[m + 2 * direction] - E
        k1p = phi
        k1f = v0 * psi
        k2p = phi + 0.5 * hh * k1f
        k2f = vm * (psi + 0.5 * hh * k1p)
        k3p = phi + 0.5 * hh * k2f
        k3f = vm * (psi + 0.5 * hh * k2p)
        k4p = phi + hh * k3f
        k4f = v1 * (psi + hh * k3p)
        psi = psi + hh / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
        phi = phi + hh / 6.0 * (k1f + 2.0 * k2f + 2.0 * k3f + k4f)
        if (k + 1) % renorm_every == 0:
            s = max(abs(psi), abs(phi))
            if s > 0.0 and np.isfinite(s):
                psi /= s
                phi /= s
                log += math.log(s)
        if not (np.isfinite(psi.real) and np.isfinite(psi.imag) and np.isfinite(phi.real) and np.isfinite(phi.imag)):
            ok = False
            break
        psi_s[k + 1] = psi
        dpsi_s[k + 1] = phi
        log_s[k + 1] = log
    return psi_s, dpsi_s, log_s, ok


def _multiplicity(f, d1, d2) -> int:
    """Zero multiplicity from ``f'^2 / (f'^2 - f f'')`` when it is clearly an integer > 1."""
    den = d1 * d1 - f * d2
    if den == 0:
        return 1
    est = (d1 * d1 / den).real
    m = int(round(est))
    if 2 <= m <= 4 and abs(est - m) < 0.25:
        return m
    return 1


class _Shooter:
    """Potential sampled once on the half-step grid of a contour."""

    def __init__(self, v: PotentialSpec, c: ContourSpec, bc: AsymptoticBC | None = None):
        self.v = v
        self.c = c
        self.bc = bc if bc is not None else asymptotic_bc(v, c.eps)
        S = self.bc.S
        if S.shift != c.eps:
            S = ShiftedPolynomial(S.coeffs, c.eps)
        for xe in (-c.L, c.L):
            if S(xe).real > DECAY_GUARD:
                raise ContourError(
                    f"decay guard violated: Re S({xe:g}) = {S(xe).real:.3g} > {DECAY_GUARD}"
                )
        self.S = S
        self.dS = S.derivative()
        n_half = 4 * c.N + 1
        xh = np.linspace(-c.L, c.L, n_half)
        von = v.with_shift(c.eps)
        try:
            self.vh = np.ascontiguousarray(evaluate(von.expr, xh), dtype=np.complex128)
        except PoleAtPoint as exc:
            raise PoleOnContour(f"potential has a pole on the contour near x={exc.x:g}") from exc
        if not np.all(np.isfinite(self.vh)):
            raise PoleOnContour("potential is not finite on the contour")
        self.x = c.grid
        self.v_grid = self.vh[::2]
        self.mi = c.match_index
        if not 0 < self.mi < 2 * c.N:
            raise ContourError("match point too close to the contour end")

    def side(self, E: complex, side: str) -> SideSolution:
        c = self.c
        E = complex(E)
        if side == "left":
            psi, dpsi, log, ok = _rk4_sweep(
                self.vh, E, c.h, 0, self.mi, 1, complex(self.dS(-c.L)), RENORM_EVERY
            )
            x = self.x[: self.mi + 1]
        else:
            psi, dpsi, log, ok = _rk4_sweep(
                self.vh, E, c.h, 2 * c.N, 2 * c.N - self.mi, -1, complex(self.dS(c.L)), RENORM_EVERY
            )
            x = self.x[self.mi :][::-1]
        if not ok:
            raise OverflowDespiteRenormalization(f"non-finite solution at E={E}")
        return SideSolution(x, psi, dpsi, log, side)

    def raw(self, E):
        """Wronskian as ``(w, log_factor)``; the true Wronskian is ``w * exp(log_factor)``."""
        pl, dl, ll = self.side(E, "left").end
        pr, dr, lr = self.side(E, "right").end
        return pl * dr - dl * pr, ll + lr, (pl, dl, pr, dr)

    def mismatch(self, E) -> complex:
        w, _, (pl, dl, pr, dr) = self.raw(E)
        return w / (math.hypot(abs(pl), abs(dl)) * math.hypot(abs(pr), abs(dr)))

    def certified(self, E) -> bool:
        """True when the mismatch rises off the round-off floor around ``E``.

        On badly conditioned contours the normalized mismatch sits at noise
        level for every energy, so a small value at ``E`` proves nothing.
        """
        d = CERTIFY_PROBE * max(1.0, abs(E))
        return max(abs(self.mismatch(E + d)), abs(self.mismatch(E - d))) > CERTIFY_FLOOR

    def newton(self, E0, max_iter=NEWTON_MAX_ITER):
        """Newton on the raw Wronskian with central-difference derivatives.

        Near a multiple zero the step is scaled by the multiplicity estimated
        from ``W W'' / W'^2``.  Iteration also stops once the normalized
        mismatch is at round-off level, or once steps below ``STAGNATION_TOL``
        stop shrinking; the latter returns the iterate with the smallest
        normalized mismatch seen.
        """
        E = complex(E0)
        steps = []
        best = (math.inf, E)
        for it in range(1, max_iter + 1):
            d = 1e-6 * max(1.0, abs(E))
            w0, l0, (pl, dl, pr, dr) = self.raw(E)
            scale = math.hypot(abs(pl), abs(dl)) * math.hypot(abs(pr), abs(dr))
            if abs(w0) <= NOISE_FLOOR * scale:
                return E, steps
            best = min(best, (abs(w0) / scale, E), key=lambda b: b[0])
            wp, lp, _ = self.raw(E + d)
            wm, lm, _ = self.raw(E - d)
            fp = wp * np.exp(lp - l0)
            fm = wm * np.exp(lm - l0)
            d1 = (fp - fm) / (2 * d)
            if d1 == 0 or not np.isfinite(d1):
                raise NewtonDiverged(f"vanishing derivative at E={E}")
            d2 = (fp - 2 * w0 + fm) / (d * d)
            m = _multiplicity(w0, d1, d2)
            step = abs(m * w0 / d1)
            E = E - m * w0 / d1
            if not np.isfinite(E):
                raise NewtonDiverged("non-finite iterate")
            tol = max(1.0, abs(E))
            if steps and step < STAGNATION_TOL * tol and step >= 0.5 * steps[-1]:
                steps.append(step)
                return best[1], steps
            steps.append(step)
            if step < NEWTON_TOL * tol:
                return E, steps
        raise NewtonDiverged(f"no convergence from E0={E0} in {max_iter} iterations")

    def assemble(self, E):
        left = self.side(E, "left")
        right = self.side(E, "right")
        pl, dl, ll = left.end
        pr, dr, lr = right.end
        with np.errstate(under="ignore", over="ignore"):
            yl = left.psi * np.exp(left.log_scale - ll)
            yr = right.psi * np.exp(right.log_scale - lr)
        den = abs(pr) ** 2 + abs(dr) ** 2
        scale = (pl * np.conj(pr) + dl * np.conj(dr)) / den
        psi = np.concatenate([yl, scale * yr[::-1][1:]])
        return psi

    def result(self, E, steps=()) -> ShootResult:
        psi = self.assemble(E)
        res, norm = _residual_and_norm(self.x, self.v_grid, psi, E)
        return ShootResult(
            complex(E), self.mismatch(E), self.x, psi / norm, res, 1.0, len(steps), tuple(steps)
        )


# public operations -------------------------------------------------------


def integrate(v: PotentialSpec, E: complex, c: ContourSpec, bc: AsymptoticBC | None = None, side: str | None = None):
    """RK4 solution from one contour end toward ``x_match``.

    ``side`` defaults to ``bc.side`` (``"both"`` returns a ``(left, right)`` pair).
    Samples are ordered from the starting end.
    """
    sh = _Shooter(v, c, bc)
    side = side or sh.bc.side
    if side == "both":
        return sh.side(E, "left"), sh.side(E, "right")
    return sh.side(E, side)


def mismatch(v: PotentialSpec, E: complex, c: ContourSpec, bc: AsymptoticBC | None = None) -> complex:
    """Normalized Wronskian ``(psi_L psi_R' - psi_L' psi_R) / (|Y_L| |Y_R|)`` at the match point.

    ``|Y|`` is the Euclidean norm of ``(psi, psi')``.  Zero at eigenvalues.
    """
    return _Shooter(v, c, bc).mismatch(E)


def refine(v: PotentialSpec, E0: complex, c: ContourSpec, bc: AsymptoticBC | None = None) -> ShootResult:
    """Newton iteration on the Wronskian from ``E0``.

    Raises NewtonDiverged when the iteration fails or when the limit cannot be
    told apart from round-off (see ``_Shooter.certified``).
    """
    sh = _Shooter(v, c, bc)
    E, steps = sh.newton(E0)
    if not sh.certified(E):
        raise NewtonDiverged(f"mismatch is at noise level around E={E}; contour too ill-conditioned")
    return sh.result(E, steps)


def _workers(workers):
    if workers is not None:
        return max(1, int(workers))
    env = os.environ.get("PTQES_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def scan(
    v: PotentialSpec,
    c: ContourSpec,
    window: tuple[float, float],
    n_seeds: int = 40,
    bc: AsymptoticBC | None = None,
    imag_window: tuple[float, float] | None = None,
    n_imag: int = 0,
    workers: int | None = None,
) -> list[ShootResult]:
    """All eigenvalues reachable by Newton from seeds in a real window.

    Seeds are ``n_seeds`` equispaced energies plus a regula-falsi estimate in
    every bracket where ``Re(mismatch)`` changes sign.  ``imag_window`` adds a
    rectangular grid of complex seeds (``n_imag`` rows).  Results with real
    part outside ``window`` are discarded; duplicates within 1e-6 merge, and
    limits that fail the noise-level certification are dropped.
    """
    lo, hi = float(window[0]), float(window[1])
    if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi):
        raise ValueError("window must be a finite increasing interval")
    sh = _Shooter(v, c, bc)
    seeds = list(np.linspace(lo, hi, n_seeds).astype(complex))
    ms = [sh.mismatch(s) for s in seeds]
    for k in range(len(seeds) - 1):
        a, b = ms[k].real, ms[k + 1].real
        if a == 0.0:
            continue
        if a * b < 0:
            ea, eb = seeds[k].real, seeds[k + 1].real
            seeds.append(complex(ea - a * (eb - ea) / (b - a)))
    if imag_window is not None and n_imag > 0:
        for im in np.linspace(imag_window[0], imag_window[1], n_imag):
            for re in np.linspace(lo, hi, n_seeds):
                seeds.append(complex(re, im))

    def run(seed):
        try:
            E, steps = sh.newton(seed)
        except (NewtonDiverged, OverflowDespiteRenormalization):
            return None
        if not lo <= E.real <= hi:
            return None
        return E, steps

    with ThreadPoolExecutor(max_workers=_workers(workers)) as pool:
        found = [r for r in pool.map(run, seeds) if r is not None]
    found.sort(key=lambda r: (r[0].real, r[0].imag))
    unique = []
    for E, steps in found:
        if any(abs(E - u[0]) <= DEDUPE_TOL * max(1.0, abs(E)) for u in unique):
            continue
        unique.append((E, steps))
    return [sh.result(E, steps) for E, steps in unique if sh.certified(E)]


def fd_spectrum(v: PotentialSpec, c: ContourSpec, k: int, n_points: int = 400) -> np.ndarray:
    """``k`` eigenvalues of smallest real part of the 3-point Dirichlet Hamiltonian.

    ``n_points`` interior points on ``(-L, L)`` along ``Im t = c.eps``.
    """
    if n_points > FD_MAX_POINTS:
        raise ValueError(f"n_points must be <= {FD_MAX_POINTS} for the dense path")
    h = 2 * c.L / (n_points + 1)
    x = -c.L + h * np.arange(1, n_points + 1)
    try:
        vx = evaluate(v.with_shift(c.eps).expr, x)
    except PoleAtPoint as exc:
        raise PoleOnContour(str(exc)) from exc
    off = -np.ones(n_points - 1) / (h * h)
    m = np.diag(2.0 / (h * h) + vx) + np.diag(off, 1) + np.diag(off, -1)
    vals = eigen.eigenvalues(m, multiplicities=False).values
    order = np.lexsort((vals.imag, vals.real))
    return vals[order][:k]


def discrete_norm(x, psi) -> float:
    """``sqrt(int |psi|^2 dx)`` by the trapezoidal rule."""
    return float(np.sqrt(np.trapezoid(np.abs(np.asarray(psi)) ** 2, np.asarray(x, dtype=np.float64))))


def _residual_and_norm(x, vx, psi, E, order=4):
    h = _fd.uniform_step(x)
    _fd.check_grid(h, vx, psi)
    res = -_fd.d2(psi, h, order) + (_fd.trim(vx, order) - E) * _fd.trim(psi, order)
    inner = np.linalg.norm(_fd.trim(psi, order))
    rel = float(np.linalg.norm(res) / inner) if inner > 0 else float("inf")
    return rel, discrete_norm(x, psi)


def residual_and_norm(v, x, psi, E: complex, order: int = 4) -> tuple[float, float]:
    """Relative residual of ``-psi'' + V psi - E psi`` and the L2 norm of ``psi``.

    ``order`` selects the 5-point (4) or 3-point (2) central stencil.  The
    residual is ``||r|| / ||psi||`` over interior points.

    Raises GridTooCoarse when ``h^2 max|V| > 0.01`` where psi is not negligible.
    """
    expr = v.expr if isinstance(v, PotentialSpec) else v
    x = np.asarray(x, dtype=np.float64)
    psi = np.asarray(psi, dtype=np.complex128)
    return _residual_and_norm(x, evaluate(expr, x), psi, complex(E), order)
