import numpy as np
import pytest
import scipy.linalg
from scipy.optimize import linear_sum_assignment

from ptqes import eigen
from ptqes.errors import NonConvergence


def matched_distance(a, b):
    cost = np.abs(np.asarray(a)[:, None] - np.asarray(b)[None, :])
    r, c = linear_sum_assignment(cost)
    return float(cost[r, c].max())


def random_matrix(rng, n):
    r = np.sqrt(rng.uniform(size=(n, n)))
    return r * np.exp(2j * np.pi * rng.uniform(size=(n, n)))


def test_diagonal():
    rep = eigen.eigenvalues(np.diag([1, 2j, -3]), vectors=True)
    assert matched_distance(rep.values, [1, 2j, -3]) < 1e-14
    assert rep.max_residual < 1e-12


def test_nilpotent_jordan():
    rep = eigen.eigenvalues([[0, 0], [1, 0]])
    np.testing.assert_allclose(rep.values, [0, 0], atol=1e-12)
    assert list(rep.geometric_multiplicities) == [1, 1]


def test_random_6x6_against_oracle():
    rng = np.random.default_rng(6)
    m = random_matrix(rng, 6)
    assert matched_distance(eigen.eigenvalues(m).values, eigen.charpoly_roots(m)) < 1e-8


def test_hundred_random_matrices_match_oracle_and_lapack():
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(2, 13))
        m = random_matrix(rng, n)
        ours = eigen.eigenvalues(m, multiplicities=False).values
        worst = max(worst, matched_distance(ours, eigen.charpoly_roots(m)))
        worst = max(worst, matched_distance(ours, scipy.linalg.eigvals(m)))
    assert worst < 1e-8


@pytest.mark.parametrize("seed", range(5))
def test_trace_and_determinant(seed):
    rng = np.random.default_rng(seed)
    m = random_matrix(rng, 8)
    vals = eigen.eigenvalues(m).values
    assert abs(vals.sum() - np.trace(m)) <= 1e-9 * max(1, abs(np.trace(m)))
    det = np.linalg.det(m)
    assert abs(np.prod(vals) - det) <= 1e-9 * max(1, abs(det))


@pytest.mark.parametrize("seed", range(5))
def test_similarity_invariance(seed):
    rng = np.random.default_rng(100 + seed)
    m = random_matrix(rng, 7)
    q, _ = np.linalg.qr(random_matrix(rng, 7))
    p = q @ np.diag(1 + rng.uniform(size=7))
    sim = np.linalg.solve(p, m @ p)
    assert matched_distance(eigen.eigenvalues(m).values, eigen.eigenvalues(sim).values) < 1e-8


@pytest.mark.parametrize("seed", range(5))
def test_real_charpoly_gives_conjugate_closed_spectrum(seed):
    rng = np.random.default_rng(200 + seed)
    m = rng.standard_normal((9, 9))
    q, _ = np.linalg.qr(random_matrix(rng, 9))
    vals = eigen.eigenvalues(q.conj().T @ m @ q).values
    assert matched_distance(vals, np.conj(vals)) < 1e-9


def test_eigenvector_residuals():
    rng = np.random.default_rng(7)
    m = random_matrix(rng, 20)
    rep = eigen.eigenvalues(m, vectors=True)
    for i in range(20):
        v = rep.vectors[:, i]
        assert np.linalg.norm(m @ v - rep.values[i] * v) <= rep.max_residual + 1e-15
    assert rep.max_residual < 1e-10


def test_defective_block_multiplicity_and_vector():
    m = np.array([[2, 0], [2j, 2]])
    rep = eigen.eigenvalues(m, vectors=True)
    assert list(rep.geometric_multiplicities) == [1, 1]
    v = rep.vectors[:, 0]
    assert abs(v[0]) < 1e-8 * abs(v[1])


def test_derogatory_matrix():
    m = np.diag([3.0, 3.0, 1.0]).astype(complex)
    rep = eigen.eigenvalues(m, vectors=True)
    assert sorted(rep.geometric_multiplicities) == [1, 2, 2]
    v = rep.vectors[:, 1:3]
    assert np.linalg.matrix_rank(v, tol=1e-8) == 2


def test_larger_matrix_against_lapack():
    rng = np.random.default_rng(9)
    m = random_matrix(rng, 120)
    assert matched_distance(eigen.eigenvalues(m, multiplicities=False).values, scipy.linalg.eigvals(m)) < 1e-9


def test_hessenberg_similarity():
    rng = np.random.default_rng(3)
    m = random_matrix(rng, 10)
    h = eigen.hessenberg(m)
    assert np.allclose(np.tril(h, -2), 0)
    assert matched_distance(scipy.linalg.eigvals(h), scipy.linalg.eigvals(m)) < 1e-10


# oracle --------------------------------------------------------------------


def test_oracle_double_root():
    r = eigen.charpoly_roots([[2, 0], [2j, 2]])
    np.testing.assert_allclose(r, [2, 2], atol=1e-7)


def test_oracle_cube_roots_of_16():
    from ptqes.qes import quartic_block

    r = eigen.charpoly_roots(quartic_block(1, 0.0).matrix)
    want = 16 ** (1 / 3) * np.exp(2j * np.pi * np.arange(3) / 3)
    assert matched_distance(r, want) < 1e-10


def test_oracle_scalar():
    np.testing.assert_allclose(eigen.charpoly_roots([[3 - 1j]]), [3 - 1j])


def test_oracle_size_cap():
    with pytest.raises(ValueError):
        eigen.charpoly(np.eye(65))


def test_charpoly_coefficients():
    np.testing.assert_allclose(eigen.charpoly([[1, 2], [3, 4]]), [-2, -5, 1])


def test_polynomial_roots_iteration_cap():
    with pytest.raises(NonConvergence):
        eigen.polynomial_roots(np.r_[1.0, np.zeros(20), 1.0], max_iter=1)


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        eigen.eigenvalues(np.ones((2, 3)))
    with pytest.raises(ValueError):
        eigen.eigenvalues([[np.nan]])


def test_cluster_eigenvalues():
    cl = eigen.cluster_eigenvalues(np.array([1.0, 1.0 + 1e-9, 2.0]))
    assert [idx for _, idx in cl] == [[0, 1], [2]]
