"""PT-symmetric quartic and sextic potential families.

The reductions decide whether a complex polynomial potential in the plain
coordinate can be rewritten as a real, even polynomial in the shifted
coordinate ``t = x + i*eps``.  Both constraints are obtained at run time by
expanding the polynomial around ``x = t - i*eps``; the closed forms quoted in
the literature are kept only in docstrings.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import RationalExpression, ShiftedPolynomial, evaluate, normalize, recompose_shift
from .errors import ConstraintViolated

__all__ = [
    "CONSTRAINT_ATOL",
    "QuarticParams",
    "ShiftedQuartic",
    "SexticParams",
    "ShiftedSextic",
    "SexticBarrierParams",
    "PotentialSpec",
    "quartic_plain_coeffs",
    "sextic_plain_coeffs",
    "reduce_quartic",
    "reduce_sextic",
    "sextic_qes_d",
    "build_barrier_sextic",
    "build_quartic_qes",
    "build_polynomial",
    "pt_check",
    "check_half_integer",
]

CONSTRAINT_ATOL = 1e-10


def _check_rho(rho):
    if rho not in (1, -1, 1.0, -1.0):
        raise ValueError(f"rho must be +1 or -1, got {rho!r}")


def check_half_integer(j) -> float:
    """Return ``j`` as float after checking ``2j`` is a non-negative integer."""
    twoj = 2.0 * float(j)
    if twoj < 0 or abs(twoj - round(twoj)) > 1e-12:
        raise ValueError(f"j must be a non-negative half-integer, got {j!r}")
    return round(twoj) / 2.0


@dataclass(frozen=True)
class QuarticParams:
    """``V = rho x^4 + i a x^3 + b x^2 + i c x``."""

    rho: float
    a: float
    b: float
    c: float

    def __post_init__(self):
        _check_rho(self.rho)


@dataclass(frozen=True)
class ShiftedQuartic:
    """``V = rho t^4 + A t^2 + B``."""

    rho: float
    A: float
    B: float
    eps: float

    def polynomial(self) -> ShiftedPolynomial:
        return ShiftedPolynomial([self.B, 0, self.A, 0, self.rho], self.eps)


@dataclass(frozen=True)
class SexticParams:
    """``V = rho x^6 + 3i a x^5 + b x^4 + i c x^3 + d x^2 + i e x``."""

    rho: float
    a: float
    b: float
    c: float
    d: float
    e: float

    def __post_init__(self):
        _check_rho(self.rho)


@dataclass(frozen=True)
class ShiftedSextic:
    """``V = rho t^6 + A t^4 + B t^2 + C``."""

    rho: float
    A: float
    B: float
    C: float
    eps: float

    def polynomial(self) -> ShiftedPolynomial:
        return ShiftedPolynomial([self.C, 0, self.B, 0, self.A, 0, self.rho], self.eps)


@dataclass(frozen=True)
class SexticBarrierParams:
    a: float
    gamma: float
    j: float

    def __post_init__(self):
        object.__setattr__(self, "j", check_half_integer(self.j))


@dataclass(frozen=True)
class PotentialSpec:
    """A potential ``V(x)`` given as a rational expression in ``t = x + i*eps``.

    ``params`` records the family parameters (informational only).
    """

    expr: RationalExpression
    family: str = "generic"
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "expr", normalize(self.expr))

    @property
    def eps(self) -> float:
        return self.expr.shift

    def __call__(self, x):
        return evaluate(self.expr, x)

    def with_shift(self, eps: float) -> "PotentialSpec":
        """Same function of ``t`` placed on the line ``Im t = eps``."""
        e = self.expr
        return PotentialSpec(
            RationalExpression(ShiftedPolynomial(e.num.coeffs, eps), ShiftedPolynomial(e.den.coeffs, eps)),
            self.family,
            {**self.params, "eps": eps},
        )


def quartic_plain_coeffs(p: QuarticParams) -> np.ndarray:
    return np.array([0.0, 1j * p.c, p.b, 1j * p.a, p.rho], dtype=np.complex128)


def sextic_plain_coeffs(p: SexticParams) -> np.ndarray:
    return np.array(
        [0.0, 1j * p.e, p.d, 1j * p.c, p.b, 3j * p.a, p.rho], dtype=np.complex128
    )


def _odd_residual(q: ShiftedPolynomial, k: int) -> float:
    # the plain coefficient i*c_k enters the t^k coefficient with weight one,
    # so a nonzero odd coefficient i*r means the supplied value exceeds the
    # required one by r
    return float(-q.coeffs[k].imag) if k < q.coeffs.size else 0.0


def reduce_quartic(p: QuarticParams) -> ShiftedQuartic:
    """Rewrite ``rho x^4 + i a x^3 + b x^2 + i c x`` as ``rho t^4 + A t^2 + B``.

    The shift ``eps = rho*a/4`` removes the cubic term; the result is real and
    even iff ``c = a (a^2 + 4 rho b) / 8``.

    Raises
    ------
    ConstraintViolated
        with ``which="c"`` and ``residual = c_required - c``.
    """
    eps = p.rho * p.a / 4.0
    q = recompose_shift(quartic_plain_coeffs(p), eps)
    residual = _odd_residual(q, 1)
    if abs(residual) > CONSTRAINT_ATOL or abs(q.coeffs[1].real) > CONSTRAINT_ATOL:
        raise ConstraintViolated("c", residual)
    return ShiftedQuartic(p.rho, float(q.coeffs[2].real), float(q.coeffs[0].real), eps)


def reduce_sextic(p: SexticParams) -> ShiftedSextic:
    """Rewrite the sextic as ``rho t^6 + A t^4 + B t^2 + C`` with ``eps = rho*a/2``.

    The cubic constraint coincides with the published ``c = 5a^3 + 2 rho a b``.
    For the linear term the expansion gives ``e = 3a^5 + rho a^3 b + rho a d``
    (at ``rho = 1``); the published ``e = a^5 + rho a^3 b + rho a d`` does not
    reproduce the shifted form and is not used.
    """
    eps = p.rho * p.a / 2.0
    q = recompose_shift(sextic_plain_coeffs(p), eps)
    for k, which in ((3, "c"), (1, "e")):
        residual = _odd_residual(q, k)
        if abs(residual) > CONSTRAINT_ATOL or abs(q.coeffs[k].real) > CONSTRAINT_ATOL:
            raise ConstraintViolated(which, residual)
    return ShiftedSextic(
        p.rho, float(q.coeffs[4].real), float(q.coeffs[2].real), float(q.coeffs[0].real), eps
    )


def sextic_qes_d(rho: float, a: float, b: float, j: float) -> float:
    """Quadratic coefficient ``d`` making the sextic quasi-exactly solvable.

    ``d = -(75/64) a^4 + (3/8) a^2 b + (1/4) b^2 - 8j - 3``; equivalent to
    ``B = A^2/4 - (8j + 3)`` for the shifted form.  The formula has no ``rho``
    dependence and the equivalence holds for ``rho = +1``.
    """
    _check_rho(rho)
    j = check_half_integer(j)
    return -75.0 / 64.0 * a**4 + 3.0 / 8.0 * a**2 * b + 0.25 * b**2 - 8.0 * j - 3.0


def build_barrier_sextic(p: SexticBarrierParams, eps: float = 1.0) -> PotentialSpec:
    """``t^6 + 2a t^4 + (a^2 - 8j - 3 + 2 gamma) t^2 + gamma (gamma + 1)/t^2``."""
    a, g, j = p.a, p.gamma, p.j
    if g * (g + 1) != 0 and eps == 0:
        raise ValueError("a barrier term needs eps != 0 to keep the pole off the real line")
    poly = ShiftedPolynomial([0, 0, a * a - 8 * j - 3 + 2 * g, 0, 2 * a, 0, 1], eps)
    t2 = ShiftedPolynomial.monomial(2, eps)
    expr = RationalExpression(poly * t2 + g * (g + 1), t2)
    return PotentialSpec(expr, "sextic-barrier", {"a": a, "gamma": g, "j": j, "eps": eps})


def build_quartic_qes(j: float, B: float, eps: float = 1.0) -> PotentialSpec:
    """``-t^4 - 2i A t + B j`` with ``A = -(2j + 1)``."""
    j = check_half_integer(j)
    A = -(2 * j + 1)
    poly = ShiftedPolynomial([B * j, -2j * A, 0, 0, -1], eps)
    return PotentialSpec(RationalExpression.from_poly(poly), "quartic-qes", {"j": j, "B": B, "eps": eps})


def build_polynomial(coeffs, eps: float = 0.0, family: str = "polynomial") -> PotentialSpec:
    """Potential given by low-first coefficients in ``t``."""
    p = ShiftedPolynomial(coeffs, eps)
    return PotentialSpec(RationalExpression.from_poly(p), family, {"eps": eps})


def pt_check(v, grid) -> float:
    """Largest ``|conj(V(-x)) - V(x)|`` over the grid (0 for PT-symmetric V)."""
    expr = v.expr if isinstance(v, PotentialSpec) else v
    x = np.asarray(grid, dtype=np.float64)
    return float(np.max(np.abs(np.conj(evaluate(expr, -x)) - evaluate(expr, x))))
