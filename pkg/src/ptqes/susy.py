"""Superpotentials, partner potentials and intertwining checks.

A superpotential is stored structurally: a polynomial in ``t = x + i*eps``,
logarithmic-derivative terms ``w * Q'/Q`` and a barrier ``gamma / t``.  This
keeps ``exp(-int W)`` available in closed form.  Partners are
``V_- = W^2 - W'`` and ``V_+ = W^2 + W'``; ``A = d/dx + W`` maps
eigenfunctions of ``V_-`` to those of ``V_+`` and annihilates the zero mode.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.integrate import cumulative_simpson

from . import _fd
from .algebra import RationalExpression, ShiftedPolynomial, evaluate, normalize
from .errors import DegenerateImaginaryPart, DomainError, NoRoot, NotConstantDifference
from .potentials import PotentialSpec

__all__ = [
    "Superpotential",
    "GroundState",
    "partners",
    "ground_state",
    "reality_constraints",
    "reality_constraint_roots",
    "reality_residuals",
    "acdi_check",
    "apply_intertwiner",
    "susy_map_residual",
    "offset_between",
    "pt_odd_defect",
    "harmonic_superpotential",
    "quartic_rational_superpotential",
    "quartic_barrier_superpotential",
    "sextic_superpotential",
    "sextic_barrier_superpotential",
    "sextic_barrier_excited_superpotential",
]

IM_W_FLOOR = 1e-10
RESIDUAL_TOL = 1e-10


def _power(base, expo):
    if np.isreal(expo) and float(np.real(expo)).is_integer():
        return base ** int(np.real(expo))
    return np.exp(expo * np.log(base))


@dataclass(frozen=True, eq=False)
class Superpotential:
    """``W = poly(t) + sum_k w_k Q_k'(t)/Q_k(t) + barrier / t``."""

    poly: ShiftedPolynomial
    logderiv_terms: tuple = ()
    barrier: complex = 0.0
    name: str = field(default="", compare=False)

    def __post_init__(self):
        terms = tuple((complex(w), q) for w, q in self.logderiv_terms)
        for _, q in terms:
            if q.is_constant:
                raise ValueError("log-derivative polynomials must be nonconstant")
            if q.shift != self.poly.shift:
                raise ValueError("all parts of a superpotential must share the shift")
        object.__setattr__(self, "logderiv_terms", terms)
        object.__setattr__(self, "barrier", complex(self.barrier))

    @property
    def shift(self) -> float:
        return self.poly.shift

    @cached_property
    def expr(self) -> RationalExpression:
        out = RationalExpression.from_poly(self.poly)
        for w, q in self.logderiv_terms:
            out = out + w * normalize(RationalExpression(q.derivative(), q))
        if self.barrier != 0:
            t = ShiftedPolynomial.monomial(1, self.shift)
            out = out + RationalExpression(ShiftedPolynomial.constant(self.barrier, self.shift), t)
        return out

    def __call__(self, x):
        return evaluate(self.expr, x)

    def derivative(self) -> RationalExpression:
        return self.expr.derivative()


@dataclass(frozen=True, eq=False)
class GroundState:
    """``psi0 = exp(S(t)) * prod_k Q_k(t)^(-w_k) * t^(-gamma)``, i.e. ``exp(-int W)``."""

    gauge_poly: ShiftedPolynomial
    log_weights: tuple
    barrier_weight: complex

    @property
    def shift(self) -> float:
        return self.gauge_poly.shift

    def log_value(self, x):
        """Principal-branch logarithm; use away from branch cuts."""
        t = np.asarray(x, dtype=np.float64) + 1j * self.shift
        out = self.gauge_poly.at(t)
        for w, q in self.log_weights:
            out = out - w * np.log(q.at(t))
        if self.barrier_weight != 0:
            out = out - self.barrier_weight * np.log(t)
        return out

    def __call__(self, x):
        t = np.asarray(x, dtype=np.float64) + 1j * self.shift
        out = np.exp(self.gauge_poly.at(t))
        for w, q in self.log_weights:
            out = out * _power(q.at(t), -w)
        if self.barrier_weight != 0:
            out = out * _power(t, -self.barrier_weight)
        return out

    def log_derivative(self) -> RationalExpression:
        """``d/dx log psi0`` as an expression; equals ``-W``."""
        out = RationalExpression.from_poly(self.gauge_poly.derivative())
        for w, q in self.log_weights:
            out = out - w * normalize(RationalExpression(q.derivative(), q))
        if self.barrier_weight != 0:
            t = ShiftedPolynomial.monomial(1, self.shift)
            out = out - RationalExpression(
                ShiftedPolynomial.constant(self.barrier_weight, self.shift), t
            )
        return out


def partners(w: Superpotential) -> tuple[RationalExpression, RationalExpression]:
    """``(V_-, V_+) = (W^2 - W', W^2 + W')``."""
    W = w.expr
    W2 = W * W
    dW = W.derivative()
    return W2 - dW, W2 + dW


def ground_state(w: Superpotential) -> GroundState:
    """Closed form of ``exp(-int W dx)``."""
    return GroundState(-w.poly.antiderivative(), w.logderiv_terms, w.barrier)


def reality_residuals(f: float, beta: float, g: float) -> tuple[float, float]:
    """Residuals of the two conditions making ``V_-`` of the rational quartic real."""
    d = f - g * g
    r1 = -1.0 + beta * f - f * f * g / d
    r2 = -1.0 / g + beta * g - 2.0 * f * g * g / d
    return r1, r2


def _beta(f, g):
    return (1.0 + f * f * g / (f - g * g)) / f


def _reduced(f, g):
    return reality_residuals(f, _beta(f, g), g)[1]


def reality_constraint_roots(g: float, f_max: float = 64.0) -> list[tuple[float, float]]:
    """All ``(f, beta)`` with ``0 < f <= f_max`` solving both reality conditions.

    ``beta`` is eliminated with the first condition; the second is bracketed on
    a logarithmic grid, bisected and polished with Newton steps.  A ``1e-8``
    neighbourhood of the pole ``f = g^2`` is excluded.
    """
    if not g < 0:
        raise DomainError(f"g must be negative, got {g!r}")
    g = float(g)
    pole = g * g
    fs = np.geomspace(1e-12, f_max, 6001)
    fs = fs[np.abs(fs - pole) > 1e-8]
    with np.errstate(all="ignore"):
        hs = _reduced(fs, g)
    roots = []
    for k in np.nonzero(np.sign(hs[:-1]) * np.sign(hs[1:]) <= 0)[0]:
        lo, hi = fs[k], fs[k + 1]
        if lo < pole < hi:
            continue
        hlo = hs[k]
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            hm = _reduced(mid, g)
            if np.sign(hm) == np.sign(hlo):
                lo, hlo = mid, hm
            else:
                hi = mid
            if hi - lo <= 1e-6 * mid:
                break
        f = 0.5 * (lo + hi)
        for _ in range(20):
            step = 1e-7 * f
            dh = (_reduced(f + step, g) - _reduced(f - step, g)) / (2 * step)
            if dh == 0:
                break
            df = _reduced(f, g) / dh
            f -= df
            if abs(df) <= 1e-15 * abs(f):
                break
        beta = _beta(f, g)
        r1, r2 = reality_residuals(f, beta, g)
        if f > 0 and abs(r1) < RESIDUAL_TOL and abs(r2) < RESIDUAL_TOL:
            if not any(abs(f - f0) <= 1e-9 * f for f0, _ in roots):
                roots.append((float(f), float(beta)))
    return sorted(roots)


def reality_constraints(g: float) -> tuple[float, float]:
    """Positive ``f`` and ``beta`` making ``V_-`` of the rational quartic real.

    Two positive branches exist when ``(-g)^(3/2) < 1``; the larger ``f``
    (the branch with ``f > g^2``) is returned.

    Raises
    ------
    DomainError
        for ``g >= 0``.
    NoRoot
        if no positive ``f`` satisfies both conditions to 1e-10.
    """
    roots = reality_constraint_roots(g)
    if not roots:
        raise NoRoot(f"no positive root for g={g!r}")
    return roots[-1]


def acdi_check(w: Superpotential, grid) -> tuple[float, float]:
    """Test ``exp(int 2 Re W dx) = kappa * Im W`` on a grid.

    The integral is a cumulative composite Simpson rule from the first grid
    point, so the integration constant is absorbed into ``kappa``.  Returns
    ``(kappa, max relative deviation of the ratio from kappa)``.
    """
    x = np.asarray(grid, dtype=np.float64)
    vals = w(x)
    im = vals.imag
    if np.any(np.abs(im) < IM_W_FLOOR):
        raise DegenerateImaginaryPart("Im W vanishes on the grid")
    integral = cumulative_simpson(2.0 * vals.real, x=x, initial=0.0)
    ratio = np.exp(integral) / im
    kappa = float(np.mean(ratio))
    return kappa, float(np.max(np.abs(ratio - kappa)) / abs(kappa))


def _direction_sign(direction: str) -> int:
    if direction in ("minus->plus", "minus_to_plus", "-+"):
        return +1
    if direction in ("plus->minus", "plus_to_minus", "+-"):
        return -1
    raise ValueError(f"unknown direction {direction!r}")


def apply_intertwiner(w: Superpotential, psi, grid, direction: str = "minus->plus", order: int = 6):
    """``A psi = psi' + W psi`` (or ``-psi' + W psi`` for plus->minus) on the interior.

    Returns ``(x_interior, values)``.
    """
    x = np.asarray(grid, dtype=np.float64)
    psi = np.asarray(psi, dtype=np.complex128)
    h = _fd.uniform_step(x)
    sign = _direction_sign(direction)
    xi = _fd.trim(x, order)
    return xi, sign * _fd.d1(psi, h, order) + w(xi) * _fd.trim(psi, order)


def susy_map_residual(
    w: Superpotential, psi, grid, E: complex, direction: str = "minus->plus", order: int = 6
) -> float:
    """Relative L2 residual of ``(-d^2 + V_target - E)(A psi)``.

    ``psi`` should be an eigenfunction of the source partner with energy
    ``E``; the target is ``V_+`` for ``minus->plus`` and ``V_-`` otherwise.

    The composite operator is a third derivative of sampled data, so
    round-off grows like ``1/h^3``; the 6th-order default lets the grid stay
    coarse enough (near the ``GridTooCoarse`` limit) to keep that small.

    Raises GridTooCoarse when ``h^2 max|V_target| > 0.01`` on the support.
    """
    sign = _direction_sign(direction)
    vminus, vplus = partners(w)
    target = vplus if sign > 0 else vminus
    x = np.asarray(grid, dtype=np.float64)
    h = _fd.uniform_step(x)
    xi, phi = apply_intertwiner(w, psi, x, direction, order)
    v = evaluate(target, xi)
    _fd.check_grid(h, v, phi)
    res = -_fd.d2(phi, h, order) + (_fd.trim(v, order) - E) * _fd.trim(phi, order)
    denom = np.linalg.norm(_fd.trim(phi, order))
    if denom == 0:
        raise ValueError("A psi vanishes identically (psi is the annihilated zero mode)")
    return float(np.linalg.norm(res) / denom)


def offset_between(v1, v2) -> complex:
    """Constant ``c`` with ``v1 - v2 == c``; raises NotConstantDifference otherwise."""
    e1 = v1.expr if isinstance(v1, PotentialSpec) else v1
    e2 = v2.expr if isinstance(v2, PotentialSpec) else v2
    d = normalize(e1 - e2)
    if not d.is_constant:
        raise NotConstantDifference(max(d.num.degree, d.den.degree))
    return d.constant_value()


def pt_odd_defect(w: Superpotential, grid) -> float:
    """Largest ``|conj(W(-x)) + W(x)|`` on the grid (0 for PT-odd W)."""
    x = np.asarray(grid, dtype=np.float64)
    return float(np.max(np.abs(np.conj(w(-x)) + w(x))))


# families --------------------------------------------------------------


def harmonic_superpotential(omega: float = 1.0, eps: float = 0.0) -> Superpotential:
    """``W = omega t``."""
    return Superpotential(ShiftedPolynomial([0.0, omega], eps), name="harmonic")


def quartic_rational_superpotential(beta: float, f: float, g: float) -> Superpotential:
    """``W = i x^2 + i beta + 2 f x/(1 + f x^2) - i g/(1 + i g x)`` (no shift)."""
    q1 = ShiftedPolynomial([1.0, 0.0, f])
    q2 = ShiftedPolynomial([1.0, 1j * g])
    return Superpotential(
        ShiftedPolynomial([1j * beta, 0.0, 1j]), ((1.0, q1), (-1.0, q2)), name="quartic-rational"
    )


def quartic_barrier_superpotential(eps: float = 1.0) -> Superpotential:
    """``W = i t^2 - 1/t``."""
    return Superpotential(ShiftedPolynomial([0.0, 0.0, 1j], eps), (), -1.0, name="quartic-barrier")


def sextic_superpotential(rho: float, A: float, eps: float) -> Superpotential:
    """``W = sqrt(rho) t^3 + A/(2 sqrt(rho)) t`` for ``rho = +1``.

    ``rho = -1`` is rejected: with the arithmetic root the ground state is not
    normalizable.
    """
    if rho != 1:
        raise DomainError("only rho = +1 gives a normalizable ground state")
    return Superpotential(ShiftedPolynomial([0.0, A / 2.0, 0.0, 1.0], eps), name="sextic")


def sextic_barrier_superpotential(a: float, gamma: float, eps: float = 1.0) -> Superpotential:
    """``W = t^3 + a t + gamma/t``."""
    return Superpotential(ShiftedPolynomial([0.0, a, 0.0, 1.0], eps), (), gamma, name="sextic-barrier")


def sextic_barrier_excited_superpotential(
    a: float, gamma: float = 1.0, f: float | None = None, eps: float = 1.0
) -> Superpotential:
    """``W = t^3 + a t + gamma/t - 2 f t/(1 + f t^2)``; default ``f = a + sqrt(a^2 - 2)``."""
    if f is None:
        if a * a < 2:
            raise DomainError("f = a + sqrt(a^2 - 2) needs a^2 >= 2")
        f = a + np.sqrt(a * a - 2.0)
    q = ShiftedPolynomial([1.0, 0.0, f], eps)
    return Superpotential(
        ShiftedPolynomial([0.0, a, 0.0, 1.0], eps), ((-1.0, q),), gamma, name="sextic-barrier-excited"
    )
