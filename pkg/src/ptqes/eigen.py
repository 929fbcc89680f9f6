"""Dense complex eigenvalue engine.

``eigenvalues`` reduces to upper Hessenberg form with Householder
reflections and runs single-shift complex QR (Wilkinson shift, explicit
Givens sweeps) with deflation.  ``charpoly_roots`` is an independent route
through the characteristic polynomial (Faddeev-LeVerrier) and simultaneous
Aberth-Ehrlich iteration, meant as a test oracle for small matrices.
"""
from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np
import scipy.linalg

from .errors import NonConvergence

__all__ = [
    "EigenReport",
    "eigenvalues",
    "hessenberg",
    "charpoly",
    "charpoly_roots",
    "polynomial_roots",
    "matrix_rank",
    "geometric_multiplicity",
    "cluster_eigenvalues",
]

MAX_DIM = 2048
CHARPOLY_MAX_DIM = 64
DEFLATION_TOL = 1e-14
RANK_RTOL = 1e-8
INVERSE_ITERATION_SHIFT = 1e-10
CLUSTER_RTOL = 1e-6


@dataclass(frozen=True)
class EigenReport:
    values: np.ndarray
    vectors: np.ndarray | None
    geometric_multiplicities: np.ndarray
    max_residual: float


def _as_matrix(m) -> np.ndarray:
    a = np.array(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] > MAX_DIM:
        raise ValueError(f"matrix dimension {a.shape[0]} exceeds {MAX_DIM}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return a


@numba.njit(cache=True, nogil=True)
def _hessenberg_inplace(h):
    n = h.shape[0]
    for k in range(n - 2):
        m = n - k - 1
        v = np.empty(m, dtype=np.complex128)
        alpha = 0.0
        for i in range(m):
            v[i] = h[k + 1 + i, k]
            alpha += v[i].real ** 2 + v[i].imag ** 2
        alpha = np.sqrt(alpha)
        if alpha == 0.0:
            continue
        x0 = v[0]
        phase = x0 / abs(x0) if abs(x0) > 0 else 1.0 + 0.0j
        v[0] = x0 + phase * alpha
        vnorm = 0.0
        for i in range(m):
            vnorm += v[i].real ** 2 + v[i].imag ** 2
        vnorm = np.sqrt(vnorm)
        for i in range(m):
            v[i] /= vnorm
        # h <- (I - 2 v v^H) h on rows k+1.., columns k..
        for j in range(k, n):
            s = 0.0j
            for i in range(m):
                s += np.conj(v[i]) * h[k + 1 + i, j]
            for i in range(m):
                h[k + 1 + i, j] -= 2.0 * v[i] * s
        # h <- h (I - 2 v v^H) on columns k+1..
        for i in range(n):
            s = 0.0j
            for jj in range(m):
                s += h[i, k + 1 + jj] * v[jj]
            for jj in range(m):
                h[i, k + 1 + jj] -= 2.0 * s * np.conj(v[jj])
        for i in range(k + 2, n):
            h[i, k] = 0.0


@numba.njit(cache=True, nogil=True)
def _givens(a, b):
    ra = abs(a)
    rb = abs(b)
    if rb == 0.0:
        return 1.0, 0.0j
    if ra == 0.0:
        return 0.0, np.conj(b) / rb
    r = np.hypot(ra, rb)
    return ra / r, (a / ra) * np.conj(b) / r


@numba.njit(cache=True, nogil=True)
def _hqr_eigvals(h, max_sweeps, tol):
    n = h.shape[0]
    eig = np.zeros(n, dtype=np.complex128)
    norm_est = 0.0
    for i in range(n):
        for j in range(n):
            norm_est += abs(h[i, j]) ** 2
    norm_est = np.sqrt(norm_est)
    if norm_est == 0.0:
        return eig, 0, True
    cs = np.empty(n, dtype=np.float64)
    ss = np.empty(n, dtype=np.complex128)
    hi = n - 1
    its = 0
    total = 0
    while hi >= 0:
        if hi == 0:
            eig[0] = h[0, 0]
            break
        lo = hi
        while lo > 0:
            s = abs(h[lo - 1, lo - 1]) + abs(h[lo, lo])
            if s == 0.0:
                s = norm_est
            if abs(h[lo, lo - 1]) <= tol * s:
                h[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            eig[hi] = h[hi, hi]
            hi -= 1
            its = 0
            continue
        if total >= max_sweeps:
            return eig, total, False
        its += 1
        total += 1
        if its % 11 == 10:
            sigma = h[hi, hi] + 0.75 * abs(h[hi, hi - 1]) + 0.5j * abs(h[hi, hi - 1])
        else:
            a = h[hi - 1, hi - 1]
            b = h[hi - 1, hi]
            c = h[hi, hi - 1]
            d = h[hi, hi]
            half_tr = 0.5 * (a + d)
            disc = np.sqrt(0.25 * (a - d) * (a - d) + b * c)
            l1 = half_tr + disc
            l2 = half_tr - disc
            sigma = l1 if abs(l1 - d) <= abs(l2 - d) else l2
        for k in range(lo, hi + 1):
            h[k, k] -= sigma
        for k in range(lo, hi):
            c_, s_ = _givens(h[k, k], h[k + 1, k])
            cs[k] = c_
            ss[k] = s_
            for j in range(k, hi + 1):
                x = h[k, j]
                y = h[k + 1, j]
                h[k, j] = c_ * x + s_ * y
                h[k + 1, j] = -np.conj(s_) * x + c_ * y
        for k in range(lo, hi):
            c_ = cs[k]
            s_ = ss[k]
            top = k + 2 if k + 2 <= hi else hi
            for i in range(lo, top + 1):
                x = h[i, k]
                y = h[i, k + 1]
                h[i, k] = x * c_ + y * np.conj(s_)
                h[i, k + 1] = -x * s_ + y * c_
        for k in range(lo, hi + 1):
            h[k, k] += sigma
    return eig, total, True


def hessenberg(m) -> np.ndarray:
    """Upper Hessenberg matrix unitarily similar to ``m``."""
    h = _as_matrix(m)
    _hessenberg_inplace(h)
    return h


def _sort_values(vals: np.ndarray) -> np.ndarray:
    order = np.lexsort((np.round(vals.imag, 12), np.round(vals.real, 12)))
    return vals[order]


def cluster_eigenvalues(values, scale: float = 1.0, rtol: float = CLUSTER_RTOL):
    """Group numerically coincident eigenvalues.

    Returns a list of ``(mean_value, indices)``; values closer than
    ``rtol * max(1, scale)`` (single linkage) share a cluster.
    """
    values = np.asarray(values, dtype=np.complex128)
    tol = rtol * max(1.0, scale)
    n = values.size
    label = -np.ones(n, dtype=int)
    clusters = []
    for i in range(n):
        if label[i] >= 0:
            continue
        label[i] = len(clusters)
        members = [i]
        stack = [i]
        while stack:
            k = stack.pop()
            close = np.nonzero((label < 0) & (np.abs(values - values[k]) <= tol))[0]
            for c in close:
                label[c] = label[i]
                members.append(int(c))
                stack.append(int(c))
        members.sort()
        clusters.append((complex(np.mean(values[members])), members))
    return clusters


def matrix_rank(m, tol: float) -> int:
    """Rank by Gaussian elimination with complete pivoting; pivots <= tol stop it."""
    a = np.array(m, dtype=np.complex128)
    rows, cols = a.shape
    rank = 0
    for k in range(min(rows, cols)):
        sub = np.abs(a[k:, k:])
        idx = np.unravel_index(np.argmax(sub), sub.shape)
        piv = sub[idx]
        if piv <= tol:
            break
        r, c = idx[0] + k, idx[1] + k
        a[[k, r], :] = a[[r, k], :]
        a[:, [k, c]] = a[:, [c, k]]
        a[k + 1 :, k:] -= np.outer(a[k + 1 :, k] / a[k, k], a[k, k:])
        rank += 1
    return rank


def geometric_multiplicity(m, lam: complex, rtol: float = RANK_RTOL) -> int:
    a = _as_matrix(m)
    n = a.shape[0]
    tol = rtol * np.linalg.norm(a)
    return n - matrix_rank(a - lam * np.eye(n), tol)


def _inverse_iteration(a, lam, exclude, rng):
    n = a.shape[0]
    sigma = lam + INVERSE_ITERATION_SHIFT * max(1.0, abs(lam))
    lu = scipy.linalg.lu_factor(a - sigma * np.eye(n), check_finite=False)
    x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    for _ in range(3):
        for e in exclude:
            x = x - e * np.vdot(e, x)
        x = scipy.linalg.lu_solve(lu, x, check_finite=False)
        nx = np.linalg.norm(x)
        if not np.isfinite(nx) or nx == 0:
            break
        x = x / nx
    for e in exclude:
        x = x - e * np.vdot(e, x)
    nx = np.linalg.norm(x)
    return x / nx if nx > 0 else x


def eigenvalues(m, vectors: bool = False, multiplicities: bool = True) -> EigenReport:
    """All eigenvalues of a dense complex matrix.

    Parameters
    ----------
    m : array_like, shape (n, n)
    vectors : bool
        Also compute right eigenvectors by inverse iteration on ``m``
        (columns of ``EigenReport.vectors``).  Defective eigenvalues get as
        many independent vectors as their geometric multiplicity; the
        remaining columns repeat the last one.
    multiplicities : bool
        Compute geometric multiplicities of repeated eigenvalues by rank
        tests.  Simple eigenvalues always have multiplicity one.

    Raises
    ------
    NonConvergence
        if the QR iteration needs more than ``40 n`` sweeps.
    """
    a = _as_matrix(m)
    n = a.shape[0]
    if n == 0:
        return EigenReport(np.zeros(0, complex), None, np.zeros(0, int), 0.0)
    h = a.copy()
    _hessenberg_inplace(h)
    vals, sweeps, ok = _hqr_eigvals(h, 40 * n, DEFLATION_TOL)
    if not ok:
        raise NonConvergence(f"QR iteration did not converge in {sweeps} sweeps (n={n})")
    vals = _sort_values(vals)
    norm = float(np.linalg.norm(a))
    geo = np.ones(n, dtype=int)
    clusters = cluster_eigenvalues(vals, norm) if (multiplicities or vectors) else []
    if multiplicities:
        for lam, idx in clusters:
            if len(idx) > 1:
                g = geometric_multiplicity(a, lam)
                geo[idx] = max(1, min(g, len(idx)))
    vecs = None
    max_res = 0.0
    if vectors:
        rng = np.random.default_rng(12345)
        vecs = np.zeros((n, n), dtype=np.complex128)
        for lam, idx in clusters:
            found = []
            for pos, i in enumerate(idx):
                if pos < geo[i]:
                    x = _inverse_iteration(a, lam if len(idx) > 1 else vals[i], found, rng)
                    found.append(x)
                vecs[:, i] = found[-1]
        for i in range(n):
            v = vecs[:, i]
            r = np.linalg.norm(a @ v - vals[i] * v) / np.linalg.norm(v)
            max_res = max(max_res, float(r))
    return EigenReport(vals, vecs, geo, max_res)


def charpoly(m) -> np.ndarray:
    """Coefficients (low first, monic) of ``det(lambda I - m)`` by Faddeev-LeVerrier."""
    a = _as_matrix(m)
    n = a.shape[0]
    if n > CHARPOLY_MAX_DIM:
        raise ValueError(f"charpoly oracle limited to n <= {CHARPOLY_MAX_DIM}")
    c = np.zeros(n + 1, dtype=np.complex128)
    c[n] = 1.0
    mk = np.zeros_like(a)
    eye = np.eye(n, dtype=np.complex128)
    for k in range(1, n + 1):
        mk = a @ mk + c[n - k + 1] * eye
        c[n - k] = -np.trace(a @ mk) / k
    return c


def polynomial_roots(coeffs, max_iter: int = 500) -> np.ndarray:
    """Roots of a polynomial (low-first coefficients) by Aberth-Ehrlich iteration.

    Starts from a perturbed circle around the root centroid; a root is frozen
    once ``|p(z)|`` drops to the Horner round-off bound.
    """
    c = np.asarray(coeffs, dtype=np.complex128)
    nz = np.nonzero(c)[0]
    if nz.size == 0:
        raise ValueError("zero polynomial has no isolated roots")
    c = c[: nz[-1] + 1]
    n = c.size - 1
    if n == 0:
        return np.zeros(0, dtype=np.complex128)
    c = c / c[-1]
    if n == 1:
        return np.array([-c[0]])
    dc = c[1:] * np.arange(1, n + 1)
    abs_c = np.abs(c)
    center = -c[n - 1] / n
    radius = 2.0 * max(np.max(np.abs(c[:-1]) ** (1.0 / np.arange(n, 0, -1))), 1e-3)
    k = np.arange(n)
    z = center + radius * np.exp(1j * (2 * np.pi * k / n + 0.4)) * (1 + 0.05 * np.cos(3.0 * k))
    eps = np.finfo(float).eps
    active = np.ones(n, dtype=bool)
    for _ in range(max_iter):
        p = np.polynomial.polynomial.polyval(z, c)
        dp = np.polynomial.polynomial.polyval(z, dc)
        bound = 4 * eps * np.polynomial.polynomial.polyval(np.abs(z), abs_c)
        active &= ~(np.abs(p) <= bound)
        if not np.any(active):
            return z
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        inv = 1.0 / diff
        np.fill_diagonal(inv, 0.0)
        s = inv.sum(axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = p / dp
            w = ratio / (1.0 - ratio * s)
        w = np.where(np.isfinite(w), w, 0.0)
        small = np.abs(w) <= 4 * eps * np.maximum(1.0, np.abs(z))
        active &= ~small
        z = np.where(active, z - w, z)
    raise NonConvergence(f"Aberth iteration did not converge in {max_iter} iterations")


def charpoly_roots(m) -> np.ndarray:
    """Eigenvalues of ``m`` as roots of its characteristic polynomial (n <= 64)."""
    c = charpoly(m)
    roots = polynomial_roots(c)
    resid = np.abs(np.polynomial.polynomial.polyval(roots, c))
    if roots.size and np.max(resid) >= 1e-8 * np.max(np.abs(c)):
        raise NonConvergence(f"root residual {np.max(resid):.2e} above tolerance")
    return _sort_values(roots)
