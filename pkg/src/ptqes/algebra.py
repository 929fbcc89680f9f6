"""Complex polynomials and rational functions in the shifted coordinate.

Every object here lives in the variable ``t = x + i*eps`` (the shifted
coordinate).  Arithmetic is ordinary polynomial arithmetic in ``t``; the
shift only enters when a value is requested at a plain coordinate ``x``.

Coefficients are stored dense, lowest degree first, as read-only
``complex128`` arrays.  All objects are immutable.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb
from numbers import Number

import numpy as np

from .errors import DegreeOverflow, PoleAtPoint

__all__ = [
    "MAX_DEGREE",
    "GCD_RTOL",
    "EQUAL_RTOL",
    "ShiftedPolynomial",
    "RationalExpression",
    "poly_gcd",
    "recompose_shift",
    "expand_shift",
    "evaluate",
    "differentiate",
    "normalize",
]

MAX_DEGREE = 64
# remainder truncation in the approximate Euclidean gcd, and coefficient snapping
GCD_RTOL = 1e-12
GCD_VERIFY_RTOL = 1e-9
EQUAL_RTOL = 1e-10
POLE_RTOL = 1e-12


def _as_coeffs(coeffs) -> np.ndarray:
    c = np.atleast_1d(np.asarray(coeffs, dtype=np.complex128)).ravel().copy()
    if c.size == 0:
        c = np.zeros(1, dtype=np.complex128)
    if not np.all(np.isfinite(c)):
        raise ValueError("polynomial coefficients must be finite")
    return c


def _strip(c: np.ndarray, atol: float = 0.0) -> np.ndarray:
    """Drop high-degree coefficients with modulus <= atol (keeps at least one)."""
    n = c.size
    while n > 1 and abs(c[n - 1]) <= atol:
        n -= 1
    return c[:n]


def _snap(c: np.ndarray, rtol: float = GCD_RTOL) -> np.ndarray:
    """Zero coefficients negligible relative to the largest one, then strip."""
    scale = np.max(np.abs(c)) if c.size else 0.0
    if scale == 0.0:
        return np.zeros(1, dtype=np.complex128)
    c = np.where(np.abs(c) <= rtol * scale, 0.0, c).astype(np.complex128)
    return _strip(c)


def _polydivmod(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Long division of low-first coefficient arrays; b must have nonzero lead."""
    a = a.copy()
    db = b.size - 1
    lead = b[-1]
    if a.size - 1 < db:
        return np.zeros(1, dtype=np.complex128), a
    q = np.zeros(a.size - db, dtype=np.complex128)
    for k in range(a.size - 1 - db, -1, -1):
        coef = a[k + db] / lead
        q[k] = coef
        a[k : k + db + 1] -= coef * b
    r = a[:db] if db > 0 else np.zeros(1, dtype=np.complex128)
    return q, _strip(r)


def _polymul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.convolve(a, b)


def _polyadd(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = max(a.size, b.size)
    out = np.zeros(n, dtype=np.complex128)
    out[: a.size] += a
    out[: b.size] += b
    return out


def _horner(c: np.ndarray, t):
    t = np.asarray(t, dtype=np.complex128)
    acc = np.zeros_like(t) + c[-1]
    for coef in c[-2::-1]:
        acc = acc * t + coef
    return acc


@dataclass(frozen=True, eq=False)
class ShiftedPolynomial:
    """Polynomial ``sum_k coeffs[k] * t**k`` with ``t = x + i*shift``."""

    coeffs: np.ndarray
    shift: float = 0.0

    def __post_init__(self):
        c = _strip(_as_coeffs(self.coeffs))
        if c.size - 1 > MAX_DEGREE:
            raise DegreeOverflow(f"degree {c.size - 1} exceeds cap {MAX_DEGREE}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "shift", float(self.shift))
        if not np.isfinite(self.shift):
            raise ValueError("shift must be finite")

    # construction helpers
    @classmethod
    def constant(cls, value, shift: float = 0.0) -> "ShiftedPolynomial":
        return cls([value], shift)

    @classmethod
    def monomial(cls, k: int, shift: float = 0.0, coeff=1.0) -> "ShiftedPolynomial":
        c = np.zeros(k + 1, dtype=np.complex128)
        c[k] = coeff
        return cls(c, shift)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    @property
    def is_zero(self) -> bool:
        return self.coeffs.size == 1 and self.coeffs[0] == 0

    @property
    def is_constant(self) -> bool:
        return self.coeffs.size == 1

    @property
    def lead(self) -> complex:
        return complex(self.coeffs[-1])

    def _common_shift(self, other: "ShiftedPolynomial") -> float:
        if self.shift == other.shift or other.is_constant:
            return self.shift
        if self.is_constant:
            return other.shift
        raise ValueError(f"shift mismatch: {self.shift} vs {other.shift}")

    def _coerce(self, other) -> "ShiftedPolynomial":
        if isinstance(other, ShiftedPolynomial):
            return other
        if isinstance(other, Number):
            return ShiftedPolynomial.constant(other, self.shift)
        return NotImplemented

    # evaluation
    def at(self, t):
        """Value at the shifted coordinate ``t`` itself."""
        return _horner(self.coeffs, t)

    def __call__(self, x):
        """Value at plain coordinate ``x`` (i.e. at ``t = x + i*shift``)."""
        return self.at(np.asarray(x, dtype=np.float64) + 1j * self.shift)

    # arithmetic
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ShiftedPolynomial(_polyadd(self.coeffs, other.coeffs), self._common_shift(other))

    __radd__ = __add__

    def __neg__(self):
        return ShiftedPolynomial(-self.coeffs, self.shift)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ShiftedPolynomial(_polymul(self.coeffs, other.coeffs), self._common_shift(other))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0 or int(n) != n:
            raise ValueError("only non-negative integer powers")
        out = ShiftedPolynomial.constant(1.0, self.shift)
        for _ in range(int(n)):
            out = out * self
        return out

    def __divmod__(self, other):
        other = self._coerce(other)
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        q, r = _polydivmod(self.coeffs, other.coeffs)
        shift = self._common_shift(other)
        return ShiftedPolynomial(q, shift), ShiftedPolynomial(r, shift)

    def derivative(self) -> "ShiftedPolynomial":
        if self.degree == 0:
            return ShiftedPolynomial.constant(0.0, self.shift)
        k = np.arange(1, self.coeffs.size)
        return ShiftedPolynomial(self.coeffs[1:] * k, self.shift)

    def antiderivative(self) -> "ShiftedPolynomial":
        """Antiderivative in ``t`` with zero constant term."""
        k = np.arange(1, self.coeffs.size + 1)
        return ShiftedPolynomial(np.concatenate([[0.0], self.coeffs / k]), self.shift)

    def monic(self) -> "ShiftedPolynomial":
        if self.is_zero:
            return self
        return ShiftedPolynomial(self.coeffs / self.coeffs[-1], self.shift)

    def conj(self) -> "ShiftedPolynomial":
        """Coefficient-wise complex conjugate (same shift)."""
        return ShiftedPolynomial(np.conj(self.coeffs), self.shift)

    def expand(self) -> np.ndarray:
        """Coefficients in the plain coordinate ``x``."""
        return expand_shift(self)

    def allclose(self, other: "ShiftedPolynomial", rtol: float = EQUAL_RTOL) -> bool:
        a, b = _snap(self.coeffs), _snap(other.coeffs)
        n = max(a.size, b.size)
        a = np.pad(a, (0, n - a.size))
        b = np.pad(b, (0, n - b.size))
        scale = max(np.max(np.abs(a)), np.max(np.abs(b)), np.finfo(float).tiny)
        return bool(np.max(np.abs(a - b)) <= rtol * scale)

    def __repr__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if c != 0:
                terms.append(f"({c.real:.6g}{c.imag:+.6g}j)*t^{k}")
        body = " + ".join(terms) if terms else "0"
        return f"ShiftedPolynomial({body}; eps={self.shift:g})"


def poly_gcd(a: ShiftedPolynomial, b: ShiftedPolynomial, rtol: float = GCD_RTOL) -> ShiftedPolynomial:
    """Monic approximate gcd by the Euclidean algorithm.

    Each remainder has coefficients below ``rtol`` times its largest
    coefficient snapped to zero; a remainder is treated as zero when it is
    below ``rtol`` relative to the monic divisor.
    """
    shift = a._common_shift(b)
    x = _snap(a.coeffs)
    y = _snap(b.coeffs)
    if np.all(y == 0):
        return ShiftedPolynomial(x, shift).monic() if np.any(x) else ShiftedPolynomial([1.0], shift)
    if np.all(x == 0):
        return ShiftedPolynomial(y, shift).monic()
    if x.size < y.size:
        x, y = y, x
    x = x / x[-1]
    y = y / y[-1]
    inputs = (x, y)
    while y.size > 1:
        _, r = _polydivmod(x, y)
        rmax = np.max(np.abs(r))
        if rmax <= rtol * max(np.max(np.abs(x)), np.max(np.abs(y))) and _divides(y, inputs):
            return ShiftedPolynomial(y, shift)
        r = _snap(r, rtol)
        if np.all(r == 0):
            break
        x, y = y, r / r[-1]
    return ShiftedPolynomial([1.0], shift)


def _divides(g: np.ndarray, polys, rtol: float = GCD_VERIFY_RTOL) -> bool:
    # remainder sequences can drift far from the inputs' scale; a candidate is
    # accepted only if it divides the original (monic) polynomials
    for p in polys:
        _, r = _polydivmod(p, g)
        if np.max(np.abs(r)) > rtol * np.max(np.abs(p)):
            return False
    return True


@dataclass(frozen=True, eq=False)
class RationalExpression:
    """Ratio ``num/den`` of two shifted polynomials with the same shift.

    The constructor only validates; use :func:`normalize` (all arithmetic
    does so) to obtain the canonical form with monic denominator and no
    common factor.
    """

    num: ShiftedPolynomial
    den: ShiftedPolynomial

    def __post_init__(self):
        num, den = self.num, self.den
        if not isinstance(num, ShiftedPolynomial):
            num = ShiftedPolynomial(num, getattr(den, "shift", 0.0))
        if not isinstance(den, ShiftedPolynomial):
            den = ShiftedPolynomial(den, num.shift)
        if den.is_zero:
            raise ZeroDivisionError("denominator is the zero polynomial")
        shift = num._common_shift(den)
        object.__setattr__(self, "num", ShiftedPolynomial(num.coeffs, shift))
        object.__setattr__(self, "den", ShiftedPolynomial(den.coeffs, shift))

    @classmethod
    def from_poly(cls, p) -> "RationalExpression":
        if not isinstance(p, ShiftedPolynomial):
            p = ShiftedPolynomial(p)
        return normalize(cls(p, ShiftedPolynomial.constant(1.0, p.shift)))

    @classmethod
    def from_coeffs(cls, num, den=(1.0,), shift: float = 0.0) -> "RationalExpression":
        return normalize(cls(ShiftedPolynomial(num, shift), ShiftedPolynomial(den, shift)))

    @property
    def shift(self) -> float:
        return self.num.shift

    @property
    def is_polynomial(self) -> bool:
        return self.den.is_constant

    @property
    def is_constant(self) -> bool:
        return self.num.is_constant and self.den.is_constant

    def constant_value(self) -> complex:
        if not self.is_constant:
            raise ValueError("expression is not constant")
        return complex(self.num.coeffs[0] / self.den.coeffs[0])

    def _coerce(self, other):
        if isinstance(other, RationalExpression):
            return other
        if isinstance(other, ShiftedPolynomial):
            return RationalExpression(other, ShiftedPolynomial.constant(1.0, other.shift))
        if isinstance(other, Number):
            return RationalExpression(
                ShiftedPolynomial.constant(other, self.shift),
                ShiftedPolynomial.constant(1.0, self.shift),
            )
        return NotImplemented

    def at(self, t):
        return self.num.at(t) / self.den.at(t)

    def __call__(self, x):
        return evaluate(self, x)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den.allclose(other.den, rtol=0.0):
            return normalize(RationalExpression(self.num + other.num, self.den))
        return normalize(
            RationalExpression(self.num * other.den + other.num * self.den, self.den * other.den)
        )

    __radd__ = __add__

    def __neg__(self):
        return RationalExpression(-self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return normalize(RationalExpression(self.num * other.num, self.den * other.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.num.is_zero:
            raise ZeroDivisionError("division by the zero expression")
        return normalize(RationalExpression(self.num * other.den, self.den * other.num))

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, n: int):
        if int(n) != n:
            raise ValueError("only integer powers")
        n = int(n)
        if n < 0:
            return RationalExpression.from_poly(ShiftedPolynomial.constant(1.0, self.shift)) / self ** (-n)
        return normalize(RationalExpression(self.num**n, self.den**n))

    def derivative(self) -> "RationalExpression":
        return differentiate(self)

    def conj(self) -> "RationalExpression":
        return RationalExpression(self.num.conj(), self.den.conj())

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.allclose(other)

    __hash__ = None

    def allclose(self, other: "RationalExpression", rtol: float = EQUAL_RTOL) -> bool:
        """Equality up to ``rtol`` after normalization (cross-multiplied)."""
        a, b = normalize(self), normalize(other)
        lhs = a.num * b.den
        rhs = b.num * a.den
        return lhs.allclose(rhs, rtol=rtol)

    def __repr__(self):
        return f"RationalExpression(num={self.num!r}, den={self.den!r})"


def normalize(expr: RationalExpression) -> RationalExpression:
    """Cancel common factors, snap negligible coefficients, make den monic."""
    shift = expr.shift
    num = _snap(expr.num.coeffs)
    den = _snap(expr.den.coeffs)
    if np.all(num == 0):
        return RationalExpression(
            ShiftedPolynomial([0.0], shift), ShiftedPolynomial([1.0], shift)
        )
    g = poly_gcd(ShiftedPolynomial(num, shift), ShiftedPolynomial(den, shift))
    if g.degree > 0:
        num, _ = _polydivmod(num, g.coeffs)
        den, _ = _polydivmod(den, g.coeffs)
        num, den = _snap(num), _snap(den)
    lead = den[-1]
    return RationalExpression(
        ShiftedPolynomial(num / lead, shift), ShiftedPolynomial(den / lead, shift)
    )


def evaluate(expr: RationalExpression, x):
    """Value of ``expr`` at plain coordinate(s) ``x``.

    Raises PoleAtPoint where ``|den(x + i*eps)|`` falls below
    ``1e-12 * max|den coeff|``.
    """
    t = np.asarray(x, dtype=np.float64) + 1j * expr.shift
    d = expr.den.at(t)
    bad = np.abs(d) < POLE_RTOL * np.max(np.abs(expr.den.coeffs))
    if np.any(bad):
        xs = np.atleast_1d(np.asarray(x, dtype=np.float64))
        where = xs[np.atleast_1d(bad)][0] if xs.size > 1 else float(xs[0])
        raise PoleAtPoint(float(where), float(np.min(np.abs(d))))
    val = expr.num.at(t) / d
    return complex(val) if np.ndim(val) == 0 else val


def differentiate(expr: RationalExpression) -> RationalExpression:
    """d/dx of the expression (``dt/dx = 1``), via the quotient rule."""
    n, d = expr.num, expr.den
    if d.is_constant:
        return normalize(RationalExpression(n.derivative(), d))
    return normalize(RationalExpression(n.derivative() * d - n * d.derivative(), d * d))


def recompose_shift(p, eps: float) -> ShiftedPolynomial:
    """Rewrite a polynomial in plain ``x`` as a polynomial in ``t = x + i*eps``.

    ``p`` is a low-first coefficient sequence (or a ShiftedPolynomial with
    zero shift).  Returns ``q`` with ``q(t) == p(t - i*eps)``.
    """
    if isinstance(p, ShiftedPolynomial):
        if p.shift != 0.0:
            raise ValueError("recompose_shift expects a polynomial in the plain coordinate")
        p = p.coeffs
    c = _strip(_as_coeffs(p))
    n = c.size
    if n - 1 > MAX_DEGREE:
        raise DegreeOverflow(f"degree {n - 1} exceeds cap {MAX_DEGREE}")
    h = -1j * eps
    q = np.zeros(n, dtype=np.complex128)
    for k in range(n):
        q[k] = sum(c[m] * comb(m, k) * h ** (m - k) for m in range(k, n))
    return ShiftedPolynomial(q, eps)


def expand_shift(q: ShiftedPolynomial) -> np.ndarray:
    """Coefficients of ``q(x + i*eps)`` in the plain coordinate ``x``."""
    c = q.coeffs
    n = c.size
    h = 1j * q.shift
    p = np.zeros(n, dtype=np.complex128)
    for k in range(n):
        p[k] = sum(c[m] * comb(m, k) * h ** (m - k) for m in range(k, n))
    return p
