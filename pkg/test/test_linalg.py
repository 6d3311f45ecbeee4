__copyright__ = "Copyright (C) 2026 The rdmat developers"

__license__ = """
Permission is hereby granted, free of charge, to any person obtaining a copy
of this software and associated documentation files (the "Software"), to deal
in the Software without restriction, including without limitation the rights
to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
copies of the Software, and to permit persons to whom the Software is
furnished to do so, subject to the following conditions:

The above copyright notice and this permission notice shall be included in
all copies or substantial portions of the Software.

THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN
THE SOFTWARE.
"""

import numpy as np
import numpy.linalg as la
import pytest

from rdmat import ConvergenceFailure, HermiticityViolation, ShapeError
from rdmat.config import DEFAULT_NUMERICS, NumericsConfig
from rdmat.linalg import (
        check_hermitian, hermitian_eig, hs_distance_sq, partial_trace_second,
        reduced_state_from_vector, unitary_from_hermitian)

import logging
logger = logging.getLogger(__name__)


def random_hermitian(n, beta, seed=17):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n, n))
    if beta == 2:
        a = a + 1j * rng.standard_normal((n, n))
    return (a + a.conj().T) / 2


# {{{ eigendecomposition

@pytest.mark.parametrize("method", ["lapack", "jacobi"])
@pytest.mark.parametrize("beta", [1, 2])
@pytest.mark.parametrize("n", [1, 2, 5, 25])
def test_hermitian_eig(method, beta, n):
    a = random_hermitian(n, beta)
    eig = hermitian_eig(a, method=method)

    assert np.all(np.diff(eig.eigenvalues) >= 0)

    v = eig.eigenvectors
    assert la.norm(v.conj().T @ v - np.eye(n)) < 1e-12 * n

    rel_err = la.norm(eig.reconstruct() - a) / la.norm(a)
    assert rel_err <= DEFAULT_NUMERICS.reconstruction_tol

    if beta == 1:
        assert np.isrealobj(v)


@pytest.mark.parametrize("n", [3, 8, 25])
def test_jacobi_agrees_with_lapack(n):
    a = random_hermitian(n, 2, seed=n)

    lapack = hermitian_eig(a, method="lapack").eigenvalues
    jacobi = hermitian_eig(a, method="jacobi").eigenvalues

    assert np.max(np.abs(lapack - jacobi)) < 1e-10 * la.norm(a)


def test_jacobi_sweep_cap():
    numerics = NumericsConfig(jacobi_max_sweeps=0)
    with pytest.raises(ConvergenceFailure):
        hermitian_eig(random_hermitian(4, 2), method="jacobi",
                numerics=numerics)


def test_eig_of_diagonal_and_zero():
    eig = hermitian_eig(np.diag([3.0, -1.0, 2.0]), method="jacobi")
    assert np.allclose(eig.eigenvalues, [-1, 2, 3])

    eig = hermitian_eig(np.zeros((3, 3)), method="jacobi")
    assert np.all(eig.eigenvalues == 0)


def test_non_hermitian_rejected():
    a = np.array([[1, 2], [0, 1]], dtype=np.float64)
    with pytest.raises(HermiticityViolation):
        check_hermitian(a)
    with pytest.raises(HermiticityViolation):
        hermitian_eig(a)

    with pytest.raises(ShapeError):
        hermitian_eig(np.ones((2, 3)))


@pytest.mark.parametrize("method", ["lapack", "jacobi"])
@pytest.mark.parametrize(("a", "expected"), [
    (np.eye(3), [1, 1, 1]),
    (np.array([[2, 1], [1, -1/2]]),
        [(3 - np.sqrt(41)) / 4, (3 + np.sqrt(41)) / 4]),
    ])
def test_eig_known_spectra(method, a, expected):
    eig = hermitian_eig(a, method=method)
    assert np.max(np.abs(eig.eigenvalues - expected)) < 1e-13


def test_unknown_eigensolver():
    with pytest.raises(ValueError):
        NumericsConfig(eigensolver="qr")

# }}}


# {{{ unitary exponential

def test_unitary_from_hermitian():
    h = random_hermitian(6, 2)
    u = unitary_from_hermitian(h, 0.7)

    assert np.max(np.abs(u.conj().T @ u - np.eye(6))) < 1e-12

    # exp(-i t H) commutes with H and its eigenvalues are phases
    assert la.norm(u @ h - h @ u) < 1e-12 * la.norm(h)

    assert np.allclose(unitary_from_hermitian(np.zeros((3, 3)), 1), np.eye(3))


@pytest.mark.parametrize(("a", "b"), [(0.3, 0.4), (-1.2, 2.5), (0, 0.7)])
def test_unitary_group_property(a, b):
    h = random_hermitian(5, 2, seed=8)
    u_sum = unitary_from_hermitian(h, a + b)
    u_prod = unitary_from_hermitian(h, a) @ unitary_from_hermitian(h, b)

    assert np.max(np.abs(u_prod - u_sum)) < 1e-12


def test_unitary_of_sign_matrix():
    u = unitary_from_hermitian(np.diag([1.0, -1.0]), np.pi)
    assert np.max(np.abs(u + np.eye(2))) < 1e-14


def test_unitary_of_pauli_y():
    sigma_y = np.array([[0, -1j], [1j, 0]])
    u = unitary_from_hermitian(sigma_y, np.pi / 2)

    # exp(-i pi/2 sigma_y) = -i sigma_y
    assert np.allclose(u, -1j * sigma_y)

# }}}


# {{{ partial trace

@pytest.mark.parametrize(("dim_a", "dim_b"), [(2, 2), (2, 3), (3, 5)])
def test_partial_trace_of_product(dim_a, dim_b):
    a = random_hermitian(dim_a, 2, seed=1)
    b = random_hermitian(dim_b, 2, seed=2)

    reduced = partial_trace_second(np.kron(a, b), dim_a, dim_b)
    assert np.allclose(reduced, np.trace(b) * a)


def test_partial_trace_of_bell_state():
    psi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    reduced = partial_trace_second(np.outer(psi, psi.conj()), 2, 2)

    assert np.max(np.abs(reduced - np.eye(2) / 2)) < 1e-15


@pytest.mark.parametrize(("dim_a", "dim_b"), [(2, 2), (3, 4), (5, 2)])
def test_partial_trace_preserves_psd(dim_a, dim_b):
    rng = np.random.default_rng(dim_a * dim_b)
    g = (rng.standard_normal((dim_a * dim_b,) * 2)
            + 1j * rng.standard_normal((dim_a * dim_b,) * 2))
    m = g @ g.conj().T
    m = (m + m.conj().T) / 2

    reduced = partial_trace_second(m, dim_a, dim_b)
    assert np.min(la.eigvalsh(reduced)) >= -1e-12 * la.norm(m)
    assert abs(np.trace(reduced) - np.trace(m)) < 1e-10 * la.norm(m)


def test_reduced_state_from_vector():
    rng = np.random.default_rng(5)
    psi = rng.standard_normal(12) + 1j * rng.standard_normal(12)
    psi /= la.norm(psi)

    rho = reduced_state_from_vector(psi, 3, 4)
    assert np.allclose(rho, partial_trace_second(np.outer(psi, psi.conj()), 3, 4))
    assert abs(np.trace(rho) - 1) < 1e-14

    with pytest.raises(ShapeError):
        reduced_state_from_vector(psi, 5, 2)
    with pytest.raises(ShapeError):
        partial_trace_second(np.eye(12), 5, 2)

# }}}


# {{{ Hilbert-Schmidt distance

def test_hs_distance_sq():
    a = random_hermitian(4, 2, seed=3)
    b = random_hermitian(4, 2, seed=4)

    d = hs_distance_sq(a, b)
    assert isinstance(d, float)
    assert abs(d - np.trace((a - b) @ (a - b)).real) < 1e-12
    assert hs_distance_sq(a, a) == 0

    stack = np.stack([a, b, a])
    assert np.allclose(hs_distance_sq(stack, b), [d, 0, d])

    with pytest.raises(ShapeError):
        hs_distance_sq(a, np.eye(3))

# }}}


if __name__ == "__main__":
    import sys
    if len(sys.argv) > 1:
        exec(sys.argv[1])
    else:
        from pytest import main
        main([__file__])

# vim: fdm=marker
