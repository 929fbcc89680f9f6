import numpy as np
import pytest

from ptqes import qes, shoot
from ptqes.algebra import RationalExpression, ShiftedPolynomial
from ptqes.errors import ContourError, NewtonDiverged, PoleOnContour
from ptqes.potentials import (
    PotentialSpec,
    SexticBarrierParams,
    build_barrier_sextic,
    build_polynomial,
    build_quartic_qes,
)

HO = build_polynomial([0, 0, 1])
SQ2 = np.sqrt(2.0)


def sextic(a=2.0, gamma=1.0, j=0.5, eps=1.0):
    return build_barrier_sextic(SexticBarrierParams(a, gamma, j), eps)


def energies(results):
    return np.array([r.E for r in results])


def real_block_energies(block):
    e = qes.solve_block(block).energies
    return np.sort(e[np.abs(e.imag) < 1e-9].real)


# contour ----------------------------------------------------------------------


def test_contour_validation():
    with pytest.raises(ValueError):
        shoot.ContourSpec(N=999)
    with pytest.raises(ValueError):
        shoot.ContourSpec(L=4, x_match=4)
    with pytest.raises(ValueError):
        shoot.ContourSpec(L=-1)


def test_contour_grid():
    c = shoot.ContourSpec(eps=0.5, L=2, N=1000, x_match=0.5)
    assert c.grid.size == 2001 and c.h == pytest.approx(0.002)
    assert c.grid[c.match_index] == pytest.approx(0.5)


def test_default_contour():
    assert shoot.default_contour(HO).L == 8
    assert shoot.default_contour(sextic()).L == 6


def test_barrier_on_real_axis_is_rejected():
    v = sextic(eps=1.0)
    with pytest.raises(PoleOnContour):
        shoot.mismatch(v, 1.0, shoot.ContourSpec(eps=0.0, L=6, N=2000))


def test_decay_guard():
    with pytest.raises(ContourError):
        shoot.mismatch(HO, 1.0, shoot.ContourSpec(L=3, N=2000))


# integrate ----------------------------------------------------------------------


def test_integrate_ho_ground_state():
    c = shoot.ContourSpec(L=8, N=4000)
    left = shoot.integrate(HO, 1.0, c, side="left")
    psi = left.psi * np.exp(left.log_scale - left.log_scale[-1])
    t = left.x + 1j * c.eps
    ratio = psi / np.exp(-t * t / 2)
    np.testing.assert_allclose(ratio / ratio[-1], 1.0, rtol=1e-7)


def test_integrate_sextic_follows_gauge():
    block = qes.sextic_block(0, 2.0, 1.0)
    v = block.potential(1.0)
    c = shoot.default_contour(v)
    left, right = shoot.integrate(v, -2.0, c, side="both")
    exact = np.abs(qes.qes_wavefunction(qes.solve_block(block)[0], block, c.grid, 1.0))
    for s, ref in ((left, exact[: c.N + 1]), (right, exact[c.N:][::-1])):
        got = np.abs(s.psi) * np.exp(s.log_scale - s.log_scale[-1])
        # the truncated asymptotic start only perturbs the far tail
        np.testing.assert_allclose(got / got[-1], ref / ref[-1], rtol=1e-3)
        keep = ref / ref[-1] > 1e-10
        np.testing.assert_allclose((got / got[-1])[keep], (ref / ref[-1])[keep], rtol=1e-7)


def test_integrate_quartic_envelope():
    v = build_quartic_qes(0.5, 4.0, 1.0)
    bc = shoot.asymptotic_bc(v)
    x = np.array([-8.0, 8.0])
    # leading term of Re S on the line is -eps x^2
    np.testing.assert_allclose(bc.S(x).real + x * x, bc.S(0.0).real, atol=1e-9)


# mismatch ------------------------------------------------------------------------


@pytest.mark.parametrize("E,small", [(1.0, True), (2.0, False), (3.0, True)])
def test_mismatch_ho(E, small):
    m = abs(shoot.mismatch(HO, E, shoot.default_contour(HO)))
    assert (m < 1e-8) if small else (m > 0.1)


def test_raw_wronskian_is_analytic():
    sh = shoot._Shooter(HO, shoot.default_contour(HO))
    E, h = 2.2 + 0.3j, 1e-4
    _, ref, _ = sh.raw(E)

    def w(z):
        val, log, _ = sh.raw(z)
        return val * np.exp(log - ref)

    dx = (w(E + h) - w(E - h)) / (2 * h)
    dy = (w(E + 1j * h) - w(E - 1j * h)) / (2j * h)
    assert abs(dx - dy) < 1e-6 * abs(dx)


# refine ----------------------------------------------------------------------------


def test_refine_ho():
    r = shoot.refine(HO, 0.9, shoot.default_contour(HO))
    assert abs(r.E - 1) < 1e-8
    assert r.residual < 1e-6
    assert shoot.discrete_norm(r.x, r.psi) == pytest.approx(1.0)
    assert r.samples.shape == (r.x.size, 2)


def test_refine_sextic_upper_level():
    v = sextic()
    r = shoot.refine(v, 4.7, shoot.default_contour(v))
    assert abs(r.E - (2 + 2 * SQ2)) < 1e-6


@pytest.mark.parametrize("E0", [1.9, 2.3, 2 + 0.3j])
def test_refine_defective_quartic(E0):
    v = build_quartic_qes(0.5, 4.0, 1.0)
    r = shoot.refine(v, E0, shoot.default_contour(v))
    assert abs(r.E - 2) < 1e-6


def test_newton_divergence_reported():
    # mid-gap seed with a single allowed iteration cannot meet the tolerance
    with pytest.raises(NewtonDiverged):
        shoot._Shooter(HO, shoot.default_contour(HO)).newton(2.0, max_iter=1)


def test_newton_is_quadratic():
    v = sextic()
    r = shoot.refine(v, 2 + 2 * SQ2 + 0.05, shoot.default_contour(v))
    s = [x for x in r.steps if x > 1e-12]
    assert len(s) >= 3
    # e_{k+1} ~ C e_k^2: the exponent log(s_{k+1})/log(s_k) approaches 2
    ratios = [np.log(s[k + 1]) / np.log(s[k]) for k in range(len(s) - 1) if s[k] < 1e-2]
    assert ratios and max(ratios) > 1.7


# scan -------------------------------------------------------------------------------


@pytest.mark.parametrize("eps", [0.0, 0.5, 1.0])
def test_scan_ho(eps):
    v = build_polynomial([0, 0, 1]).with_shift(eps)
    got = energies(shoot.scan(v, shoot.default_contour(v), (0, 8), 40))
    np.testing.assert_allclose(got, [1, 3, 5, 7], atol=1e-8)


def test_scan_deterministic_across_workers():
    v = sextic()
    c = shoot.default_contour(v)
    a = energies(shoot.scan(v, c, (-2, 6), 12, workers=1))
    b = energies(shoot.scan(v, c, (-2, 6), 12, workers=4))
    np.testing.assert_array_equal(a, b)


def test_scan_empty_window():
    assert shoot.scan(HO, shoot.default_contour(HO), (1.5, 2.5), 5) == []


def test_scan_complex_seeds():
    v = qes.quartic_block(1, 0.0).potential(1.0)
    found = energies(shoot.scan(v, shoot.default_contour(v), (-4, 4), 12, imag_window=(-3, 3), n_imag=5))
    pair = 16 ** (1 / 3) * np.exp(2j * np.pi / 3)
    assert np.min(np.abs(found - pair)) < 1e-6
    assert np.min(np.abs(found - np.conj(pair))) < 1e-6


def test_sextic_eps_invariance():
    spectra = []
    for eps in (0.5, 0.75, 1.0):
        v = sextic(j=1, a=3.0, eps=eps)
        spectra.append(energies(shoot.scan(v, shoot.default_contour(v), (-3, 25), 30)))
    assert spectra[0].size >= 4
    for other in spectra[1:]:
        np.testing.assert_allclose(other, spectra[0], atol=1e-6)


@pytest.mark.parametrize("a", [2.0, 3.0])
def test_sextic_far_contour_is_ill_conditioned(a):
    # kappa = int|psi|^2 / |int psi^2| bounds the attainable accuracy on a given line
    block = qes.sextic_block(0.5, a, 1.0)
    lv = qes.solve_block(block)[0]
    x = np.linspace(-8, 8, 40001)
    kappa = {}
    for eps in (1.0, 2.0):
        p = qes.qes_wavefunction(lv, block, x, eps)
        kappa[eps] = np.trapezoid(abs(p) ** 2, x) / abs(np.trapezoid(p * p, x))
    assert kappa[1.0] < 1e3 and kappa[2.0] > 1e12


def test_noise_level_limits_are_rejected():
    v = sextic(a=3.0, eps=2.0)
    c = shoot.default_contour(v).replace(x_match=3.0)
    assert shoot.scan(v, c, (-3, 9), 10) == []
    with pytest.raises(NewtonDiverged):
        shoot.refine(v, -2.29, c)


@pytest.mark.parametrize("j", [0, 0.5, 1])
@pytest.mark.parametrize("a", [2.0, 3.0])
def test_sextic_qes_consistency(j, a):
    block = qes.sextic_block(j, a, 1.0)
    want = real_block_energies(block)
    v = block.potential(1.0)
    got = energies(shoot.scan(v, shoot.default_contour(v), (want[0] - 1, want[-1] + 1), 20))
    for e in want:
        assert np.min(np.abs(got - e)) < 1e-6


@pytest.mark.parametrize("j", [0, 0.5])
@pytest.mark.parametrize("B", [0.0, 4.0])
def test_quartic_qes_consistency(j, B):
    block = qes.quartic_block(j, B)
    want = real_block_energies(block)
    v = block.potential(1.0)
    got = energies(shoot.scan(v, shoot.default_contour(v), (want[0] - 1, want[-1] + 1), 20))
    for e in want:
        assert np.min(np.abs(got - e)) < 1e-6


def test_isospectral_partner():
    a = 2.0
    barrier = sextic(a=a, j=0)
    partner = build_polynomial([3 * a, 0, a * a + 5, 0, 2 * a, 0, 1])
    low = energies(shoot.scan(barrier, shoot.default_contour(barrier), (-3, 25), 30))[:4]
    plus = energies(shoot.scan(partner, shoot.default_contour(partner), (0, 27), 30))[:3]
    np.testing.assert_allclose(low, np.r_[-2.0, -2.0 + plus], atol=1e-6)
    assert np.max(np.abs(low.imag)) < 1e-6


def test_step_halving():
    v = sextic()
    c = shoot.default_contour(v)
    e1 = shoot.refine(v, 4.8, c).E
    e2 = shoot.refine(v, 4.8, c.replace(N=2 * c.N)).E
    assert abs(e1 - e2) < 16e-6


# finite differences ------------------------------------------------------------------


def test_fd_ho():
    vals = shoot.fd_spectrum(HO, shoot.ContourSpec(L=8, N=1000), 3, n_points=400)
    np.testing.assert_allclose(vals.real, [1, 3, 5], atol=5e-3 * 5)
    assert abs(vals[0] - 1) < 5e-3


def test_fd_sextic_ground():
    v = sextic(j=0)
    vals = shoot.fd_spectrum(v, shoot.ContourSpec(eps=1.0, L=4, N=1000), 1, n_points=600)
    assert abs(vals[0] + 2) < 5e-3


def test_fd_agrees_with_scan():
    v = sextic(j=0)
    fd = shoot.fd_spectrum(v, shoot.ContourSpec(eps=1.0, L=4, N=1000), 4, n_points=600)
    sc = energies(shoot.scan(v, shoot.default_contour(v), (-3, 25), 30))[:4]
    np.testing.assert_allclose(fd, sc, atol=1e-2)


def test_fd_size_cap():
    with pytest.raises(ValueError):
        shoot.fd_spectrum(HO, shoot.ContourSpec(), 1, n_points=601)


# residual / norm ----------------------------------------------------------------------


def test_residual_of_exact_state():
    x = np.linspace(-8, 8, 4001)
    res, norm = shoot.residual_and_norm(HO, x, np.exp(-x * x / 2), 1.0)
    assert res < 1e-6
    assert norm == pytest.approx(np.pi**0.25, rel=1e-10)


def test_residual_detects_wrong_energy():
    x = np.linspace(-8, 8, 4001)
    res, _ = shoot.residual_and_norm(HO, x, np.exp(-x * x / 2), 1.1)
    assert res > 0.05


def test_discrete_norm():
    x = np.linspace(-10, 10, 2001)
    assert shoot.discrete_norm(x, np.exp(-x * x / 2)) == pytest.approx(np.pi**0.25, rel=1e-12)


def test_polynomial_spec_shift():
    v = PotentialSpec(RationalExpression.from_poly(ShiftedPolynomial([0, 0, 1], 0.0)), "polynomial")
    w = v.with_shift(1.0)
    assert w.eps == 1.0
    np.testing.assert_allclose(w.expr.num.coeffs, [0, 0, 1])
