import numpy as np
import pytest
import sympy as sp

from ptqes.algebra import RationalExpression, ShiftedPolynomial, expand_shift, recompose_shift
from ptqes.errors import ConstraintViolated
from ptqes.potentials import (
    QuarticParams,
    SexticBarrierParams,
    SexticParams,
    build_barrier_sextic,
    build_polynomial,
    build_quartic_qes,
    pt_check,
    quartic_plain_coeffs,
    reduce_quartic,
    reduce_sextic,
    sextic_plain_coeffs,
    sextic_qes_d,
)
from ptqes.susy import partners, quartic_rational_superpotential, reality_constraints

GRID = np.linspace(-3, 3, 101)


# reduce_quartic -------------------------------------------------------------


def test_quartic_reduction_example():
    r = reduce_quartic(QuarticParams(1, 2, 1, 2))
    assert (r.eps, r.A, r.B) == pytest.approx((0.5, 2.5, 0.5625))


def test_quartic_already_real():
    r = reduce_quartic(QuarticParams(1, 0, 5, 0))
    assert (r.eps, r.A, r.B) == pytest.approx((0, 5, 0))


def test_quartic_violation_residual():
    with pytest.raises(ConstraintViolated) as info:
        reduce_quartic(QuarticParams(1, 2, 1, 0))
    assert info.value.which == "c"
    assert info.value.residual == pytest.approx(2.0)


def test_quartic_shifted_form_by_symbolic_expansion():
    x = sp.symbols("x")
    a, b, rho = sp.Rational(3, 2), sp.Rational(-1, 3), 1
    c = a * (a**2 + 4 * rho * b) / 8
    r = reduce_quartic(QuarticParams(rho, float(a), float(b), float(c)))
    eps = sp.nsimplify(r.eps)
    t = x + sp.I * eps
    shifted = sp.expand(rho * t**4 + sp.nsimplify(r.A, rational=True, tolerance=1e-12) * t**2
                        + sp.nsimplify(r.B, rational=True, tolerance=1e-12))
    plain = rho * x**4 + sp.I * a * x**3 + b * x**2 + sp.I * c * x
    assert sp.simplify(shifted - plain) == 0


def test_rho_validated():
    with pytest.raises(ValueError):
        QuarticParams(2, 0, 0, 0)


# reduce_sextic ---------------------------------------------------------------


def test_sextic_reduction_example():
    r = reduce_sextic(SexticParams(1, 2, 0, 40, 0, 96))
    assert (r.eps, r.A, r.B) == pytest.approx((1, 15, 75))


def test_sextic_real_input():
    r = reduce_sextic(SexticParams(1, 0, 1, 0, 1, 0))
    assert (r.eps, r.A, r.B, r.C) == pytest.approx((0, 1, 1, 0))


def test_sextic_printed_e_formula_rejected():
    with pytest.raises(ConstraintViolated) as info:
        reduce_sextic(SexticParams(1, 2, 0, 40, 0, 32))
    assert info.value.which == "e"
    assert info.value.residual == pytest.approx(64.0)


def test_sextic_e_constraint_symbolic():
    x, a, b, d = sp.symbols("x a b d", real=True)
    t = x + sp.I * a / 2
    A, B, C = sp.symbols("A B C")
    expr = sp.Poly(sp.expand(t**6 + A * t**4 + B * t**2 + C), x)
    sol = sp.solve([expr.coeff_monomial(x**4) - b, expr.coeff_monomial(x**2) - d], [A, B], dict=True)[0]
    e = sp.simplify(expr.coeff_monomial(x).subs(sol) / sp.I)
    assert sp.expand(e - (3 * a**5 + a**3 * b + a * d)) == 0


@pytest.mark.parametrize("rho,a,b", [(1, 1.0, 0.5), (-1, 0.7, -2.0), (1, -1.3, 3.0)])
def test_sextic_round_trip(rho, a, b):
    d = 0.25
    c = 5 * a**3 + 2 * rho * a * b
    # with e = 0 the leftover odd t-coefficient is -i * e_required
    q = recompose_shift(sextic_plain_coeffs(SexticParams(rho, a, b, c, d, 0.0)), rho * a / 2)
    p = SexticParams(rho, a, b, c, d, -q.coeffs[1].imag)
    r = reduce_sextic(p)
    back = expand_shift(r.polynomial())
    want = sextic_plain_coeffs(p)
    np.testing.assert_allclose(back, want, rtol=1e-10, atol=1e-10 * np.max(np.abs(want)))


def test_sextic_qes_d_examples():
    assert sextic_qes_d(1, 0, 0, 0) == -3
    assert sextic_qes_d(1, 0, 0, 0.5) == -7
    assert sextic_qes_d(1, 2, 4, 0) == pytest.approx(-11.75)


@pytest.mark.parametrize("a,b,j", [(2, 4, 0), (1, -1, 0.5), (0.5, 2, 1), (-1.5, 0.3, 1.5)])
def test_sextic_qes_condition(a, b, j):
    d = sextic_qes_d(1, a, b, j)
    c = 5 * a**3 + 2 * a * b
    e = 3 * a**5 + a**3 * b + a * d
    r = reduce_sextic(SexticParams(1, a, b, c, d, e))
    assert r.B == pytest.approx(r.A**2 / 4 - (8 * j + 3), abs=1e-10)


def test_shifted_forms_are_real():
    r = reduce_sextic(SexticParams(1, 2, 0, 40, 0, 96))
    assert np.max(np.abs(r.polynomial().coeffs.imag)) < 1e-12


# builders ------------------------------------------------------------------


def test_barrier_sextic_a2_gamma1_j0():
    v = build_barrier_sextic(SexticBarrierParams(2, 1, 0), eps=1.0)
    t2 = ShiftedPolynomial.monomial(2, 1.0)
    want = RationalExpression(ShiftedPolynomial([2, 0, 0, 0, 3, 0, 4, 0, 1], 1.0), t2)
    assert v.expr == want


def test_barrier_sextic_plain_case():
    v = build_barrier_sextic(SexticBarrierParams(0, 0, 0), eps=0.0)
    assert v.expr == RationalExpression.from_coeffs([0, 0, -3, 0, 0, 0, 1])


def test_barrier_sextic_j_half():
    v = build_barrier_sextic(SexticBarrierParams(2, 1, 0.5), eps=1.0)
    assert v.expr == RationalExpression.from_coeffs([2, 0, 0, 0, -1, 0, 4, 0, 1], [0, 0, 1], 1.0)


def test_half_integer_validation():
    with pytest.raises(ValueError):
        SexticBarrierParams(1, 1, 0.3)


def test_barrier_needs_shift():
    with pytest.raises(ValueError):
        build_barrier_sextic(SexticBarrierParams(2, 1, 0), eps=0.0)


# PT -----------------------------------------------------------------------


def test_pt_imaginary_cubic():
    assert pt_check(RationalExpression.from_coeffs([0, 0, 0, 1j]), GRID) == 0


def test_pt_violation_detected():
    assert pt_check(RationalExpression.from_coeffs([0, 1, 1j]), np.linspace(-2, 2, 101)) > 1


def test_pt_partner_of_rational_quartic():
    g = -(2 ** (2 / 3)) * 3 ** (-2 / 3)
    f, beta = reality_constraints(g)
    _, vplus = partners(quartic_rational_superpotential(beta, f, g))
    assert pt_check(vplus, np.linspace(-4, 4, 101)) < 1e-10


@pytest.mark.parametrize(
    "v",
    [
        build_quartic_qes(0.5, 4.0, 1.0),
        build_quartic_qes(1.0, 0.0, 0.5),
        build_barrier_sextic(SexticBarrierParams(2, 1, 0.5), 1.0),
        build_barrier_sextic(SexticBarrierParams(3, 2, 1), 0.7),
        build_polynomial(expand_shift(ShiftedPolynomial([1, 0, 2, 0, 1], 0.0)).real),
    ],
)
def test_built_potentials_are_pt_symmetric(v):
    assert pt_check(v, GRID) <= 1e-10


@pytest.mark.parametrize("p", [QuarticParams(1, 2, 1, 2), QuarticParams(-1, 1.2, 0.4, 0.6 * (1.44 - 1.6) / 4)])
def test_reduced_quartic_pt_and_round_trip(p):
    r = reduce_quartic(p)
    back = expand_shift(r.polynomial())
    np.testing.assert_allclose(back[1:], quartic_plain_coeffs(p)[1:], atol=1e-10)
    assert abs(back[0]) < 1e-10
    assert pt_check(RationalExpression.from_poly(r.polynomial()), GRID) < 1e-10
