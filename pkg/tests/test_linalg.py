import math

import numpy as np
import pytest

from vqsd import linalg
from vqsd.errors import InvalidInputError

from conftest import I2, X, Y, Z, random_hermitian


def test_mul_examples():
    a = np.array([[1, 2j], [3, 4]])
    assert np.array_equal(linalg.mul(I2, a), a)
    assert np.array_equal(linalg.mul(X, X), I2)
    assert np.array_equal(linalg.mul(X, Z), np.array([[0, -1], [1, 0]]))


def test_mul_rejects_mismatch():
    with pytest.raises(InvalidInputError):
        linalg.mul(np.ones((2, 3)), np.ones((2, 3)))


def test_adjoint_examples():
    d = np.diag([0.3, -1.0, 2.0]).astype(complex)
    assert np.array_equal(linalg.adjoint(d), d)
    assert np.array_equal(linalg.adjoint(Y), Y)
    assert np.array_equal(linalg.adjoint([[0, 1j], [0, 0]]), np.array([[0, 0], [-1j, 0]]))


def test_adjoint_involution(rng):
    a = rng.standard_normal((3, 5)) + 1j * rng.standard_normal((3, 5))
    assert np.array_equal(linalg.adjoint(linalg.adjoint(a)), a)


def test_trace_examples():
    assert linalg.trace(np.eye(4)) == 4
    assert linalg.trace(X) == 0
    rho = np.array([[0.7, 0.1 + 0.2j], [0.1 - 0.2j, 0.3]])
    assert abs(linalg.trace(rho) - 1) < 1e-15
    with pytest.raises(InvalidInputError):
        linalg.trace(np.ones((2, 3)))


def test_kron_examples():
    assert np.array_equal(linalg.kron(I2, I2), np.eye(4))
    assert np.array_equal(linalg.kron(Z, I2), np.diag([1, 1, -1, -1]))
    assert np.array_equal(linalg.kron(X, X), np.fliplr(np.eye(4)))


@pytest.mark.parametrize("method", ["jacobi", "lapack"])
def test_eigh_examples(method):
    np.testing.assert_allclose(linalg.eigh(Z, method).eigenvalues, [-1, 1], atol=1e-14)
    np.testing.assert_allclose(linalg.eigh(X, method).eigenvalues, [-1, 1], atol=1e-14)
    # Quadratic characteristic polynomial: lambda = 1/2 -+ sqrt(0.125).
    expected = [0.5 - math.sqrt(0.125), 0.5 + math.sqrt(0.125)]
    got = linalg.eigh([[0.75, 0.25], [0.25, 0.25]], method).eigenvalues
    np.testing.assert_allclose(got, expected, atol=1e-14)
    np.testing.assert_allclose(got, [0.146447, 0.853553], atol=1e-6)


def test_eigh_rejects_non_hermitian():
    with pytest.raises(InvalidInputError):
        linalg.eigh([[1, 1], [0, 1]])
    # within tolerance is accepted
    linalg.eigh([[1, 1e-12], [0, 1]])


def test_eigh_degenerate_ordering():
    dec = linalg.eigh(np.diag([3.0, 1.0, 1.0, 2.0]))
    assert dec.eigenvalues.tolist() == [1.0, 1.0, 2.0, 3.0]


def test_eigh_reconstruction_random():
    rng = np.random.default_rng(0)
    for k in range(1000):
        dim = 1 + k % 32
        h = random_hermitian(rng, dim)
        dec = linalg.eigh(h)
        v = dec.eigenvectors
        assert np.max(np.abs(v.conj().T @ v - np.eye(dim))) <= 1e-10
        assert np.max(np.abs(h - dec.reconstruct())) <= 1e-9
        assert np.max(np.abs(h @ v - v * dec.eigenvalues)) <= 1e-9
        assert np.all(np.diff(dec.eigenvalues) >= 0)


def test_jacobi_matches_lapack(rng):
    for dim in (2, 5, 16, 32):
        h = random_hermitian(rng, dim)
        np.testing.assert_allclose(linalg.eigh(h, "jacobi").eigenvalues,
                                   linalg.eigh(h, "lapack").eigenvalues, atol=1e-12)


def test_expm_examples():
    np.testing.assert_allclose(linalg.expm_hermitian_generator(np.zeros((4, 4))), np.eye(4), atol=1e-15)
    np.testing.assert_allclose(linalg.expm_hermitian_generator(math.pi / 2 * X), -1j * X, atol=1e-14)
    t = 0.37
    np.testing.assert_allclose(linalg.expm_hermitian_generator(t * Z),
                               np.diag([np.exp(-1j * t), np.exp(1j * t)]), atol=1e-15)
    # rotation identity exp(-i t X) = cos t I - i sin t X
    np.testing.assert_allclose(linalg.expm_hermitian_generator(t * X),
                               math.cos(t) * I2 - 1j * math.sin(t) * X, atol=1e-15)


def test_expm_unitary_random(rng):
    for _ in range(200):
        dim = 2 ** rng.integers(1, 5)
        u = linalg.expm_hermitian_generator(3 * random_hermitian(rng, dim))
        assert np.max(np.abs(u.conj().T @ u - np.eye(dim))) <= 1e-10


def test_expm_matches_scipy(rng):
    from scipy.linalg import expm
    h = random_hermitian(rng, 8)
    np.testing.assert_allclose(linalg.expm_hermitian_generator(h), expm(-1j * h), atol=1e-12)
    np.testing.assert_allclose(linalg.expm_hermitian_generator(h, method="jacobi"), expm(-1j * h),
                               atol=1e-12)


def test_expm_batch_matches_single(rng):
    hs = np.stack([random_hermitian(rng, 4) for _ in range(5)])
    batch = linalg.expm_hermitian_batch(hs)
    for h, u in zip(hs, batch):
        np.testing.assert_allclose(u, linalg.expm_hermitian_generator(h), atol=1e-13)


def test_kron_associative(rng):
    for _ in range(50):
        a, b, c = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
                   for d in rng.integers(1, 4, size=3))
        left = linalg.kron(linalg.kron(a, b), c)
        right = linalg.kron(a, linalg.kron(b, c))
        assert np.max(np.abs(left - right)) <= 1e-12


def test_trace_cyclic(rng):
    for _ in range(50):
        d = rng.integers(1, 9)
        a, b = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)) for _ in range(2))
        assert abs(linalg.trace(linalg.mul(a, b)) - linalg.trace(linalg.mul(b, a))) <= 1e-12


def test_matrix_roundtrip(rng):
    a = rng.standard_normal((3, 2)) + 1j * rng.standard_normal((3, 2))
    d = linalg.matrix_to_dict(a)
    assert d["rows"] == 3 and d["cols"] == 2 and len(d["re"]) == 6
    assert np.array_equal(linalg.matrix_from_dict(d), a)
    with pytest.raises(InvalidInputError):
        linalg.matrix_from_dict({"rows": 2, "cols": 2, "re": [1, 2, 3], "im": [0, 0, 0]})


def test_rejects_non_finite():
    with pytest.raises(InvalidInputError):
        linalg.as_matrix([[np.nan, 0], [0, 1]])
