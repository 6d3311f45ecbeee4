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

from rdmat import DegenerateSample, DomainError, ParameterError
from rdmat.config import DEFAULT_NUMERICS
from rdmat.ensembles import (
        DensityMatrix, EnsembleParams, RngStream, check_density_matrix,
        density_matrix_from_ginibre, density_matrix_from_pure_state, purity,
        sample_density_matrices, sample_density_matrix, sample_ginibre,
        sample_wishart)

import logging
logger = logging.getLogger(__name__)


# {{{ parameters and streams

@pytest.mark.parametrize(("beta", "n", "m"), [
    (3, 2, 2),
    (0, 2, 2),
    (2, 0, 1),
    (2, 3, 2),
    (1, 2, 2.5),
    ])
def test_invalid_params(beta, n, m):
    with pytest.raises(ParameterError):
        EnsembleParams(beta, n, m)


def test_alpha():
    assert EnsembleParams(2, 2, 2).alpha == 0
    assert EnsembleParams(2, 3, 5).alpha == 2
    assert EnsembleParams(1, 2, 2).alpha == -0.5
    assert EnsembleParams(1, 2, 4).alpha == 0.5


def test_rng_stream_reproducible():
    params = EnsembleParams(2, 3, 4)

    a = sample_ginibre(params, RngStream(42, (1, 2)))
    b = sample_ginibre(params, RngStream(42, (1, 2)))
    assert np.array_equal(a, b)

    c = sample_ginibre(params, RngStream(42, (1, 3)))
    d = sample_ginibre(params, RngStream(43, (1, 2)))
    assert not np.array_equal(a, c)
    assert not np.array_equal(a, d)

    assert RngStream(42, (1,)).child(2) == RngStream(42, (1, 2))

    with pytest.raises(ParameterError):
        RngStream(-1)

# }}}


# {{{ Ginibre and Wishart sampling

@pytest.mark.parametrize("beta", [1, 2])
def test_ginibre_stack_prefix(beta):
    params = EnsembleParams(beta, 3, 5)
    rng = RngStream(7)

    single = sample_ginibre(params, rng)
    stack = sample_ginibre(params, rng, count=10)

    assert single.shape == (3, 5)
    assert stack.shape == (10, 3, 5)
    assert np.array_equal(stack[0], single)

    if beta == 1:
        assert np.isrealobj(stack)
    else:
        assert np.iscomplexobj(stack)


@pytest.mark.parametrize("beta", [1, 2])
def test_ginibre_normalization(beta):
    params = EnsembleParams(beta, 4, 4)
    g = sample_ginibre(params, RngStream(3), count=20000)

    # E|G_jk|^2 = 1 for both Dyson indices; 320000 entries
    mean_abs_sq = np.mean(np.abs(g)**2)
    assert abs(mean_abs_sq - 1) < 0.02


@pytest.mark.parametrize("beta", [1, 2])
def test_wishart_is_hermitian_psd(beta):
    params = EnsembleParams(beta, 4, 6)
    w = sample_wishart(params, RngStream(11), count=50)

    assert np.array_equal(w, np.conj(np.swapaxes(w, -1, -2)))
    assert np.min(la.eigvalsh(w)) > -1e-10

    # E[W] = m I
    w_many = sample_wishart(params, RngStream(12), count=20000)
    assert np.max(np.abs(np.mean(w_many, axis=0) - 6 * np.eye(4))) < 0.15

# }}}


# {{{ density matrices

@pytest.mark.parametrize("beta", [1, 2])
def test_density_matrix_from_ginibre(beta):
    params = EnsembleParams(beta, 3, 5)
    g = sample_ginibre(params, RngStream(5))

    rho = density_matrix_from_ginibre(g)
    assert isinstance(rho, DensityMatrix)
    assert rho.dim == 3
    assert abs(np.trace(rho.data) - 1) < 1e-14
    assert np.min(rho.eigenvalues()) > -1e-12

    rho_scaled = density_matrix_from_ginibre(3.7 * g)
    assert np.max(np.abs(rho_scaled.data - rho.data)) < 1e-14


def test_density_matrix_from_pure_state():
    params = EnsembleParams(2, 3, 4)
    g = sample_ginibre(params, RngStream(9))

    rho_g = density_matrix_from_ginibre(g)
    rho_psi = density_matrix_from_pure_state(g.ravel(), 3, 4)

    assert np.max(np.abs(rho_g.data - rho_psi.data)) < 1e-14


def test_degenerate_samples():
    with pytest.raises(DegenerateSample):
        density_matrix_from_ginibre(np.zeros((2, 3)))
    with pytest.raises(DegenerateSample):
        density_matrix_from_pure_state(np.zeros(6), 2, 3)


def test_check_density_matrix():
    check_density_matrix(np.eye(3) / 3)

    with pytest.raises(DomainError):
        check_density_matrix(np.eye(2))
    with pytest.raises(DomainError):
        check_density_matrix(np.diag([1.5, -0.5]))


def test_purity():
    assert abs(purity(np.eye(4) / 4) - 0.25) < 1e-15

    psi = np.array([1, 1j, 0]) / np.sqrt(2)
    pure = DensityMatrix.from_array(np.outer(psi, psi.conj()))
    assert abs(pure.purity() - 1) < 1e-15

    stack = np.stack([np.eye(2) / 2, np.diag([1.0, 0.0])])
    assert np.allclose(purity(stack), [0.5, 1])


@pytest.mark.parametrize("beta", [1, 2])
def test_sample_density_matrices(beta):
    params = EnsembleParams(beta, 5, 7)
    rhos = sample_density_matrices(params, RngStream(21), 100)

    assert rhos.shape == (100, 5, 5)
    for rho in rhos:
        check_density_matrix(rho)

    single = sample_density_matrix(params, RngStream(21))
    assert np.max(np.abs(single.data - rhos[0])) < 1e-14

    p = purity(rhos)
    assert np.all(p >= 1/5 - 1e-12)
    assert np.all(p <= 1 + 1e-12)

@pytest.mark.parametrize("beta", [1, 2])
def test_one_dimensional_density_matrix(beta):
    params = EnsembleParams(beta, 1, 4)

    rho = sample_density_matrix(params, RngStream(2))
    assert np.array_equal(rho.data, np.ones((1, 1)))
    assert np.all(sample_density_matrices(params, RngStream(3), 50) == 1)


@pytest.mark.parametrize(("beta", "n", "m"), [
    (1, 2, 2), (1, 5, 8), (2, 2, 3), (2, 5, 5),
    ])
def test_density_matrix_invariants_many_draws(beta, n, m):
    count = 10_000
    rhos = sample_density_matrices(EnsembleParams(beta, n, m), RngStream(31),
            count)
    assert rhos.shape == (count, n, n)

    if beta == 1:
        assert np.all(np.imag(rhos) == 0)

    assert np.array_equal(rhos, np.conj(np.swapaxes(rhos, -1, -2)))
    traces = np.trace(rhos, axis1=-2, axis2=-1).real
    assert np.max(np.abs(traces - 1)) <= DEFAULT_NUMERICS.trace_tol
    assert np.min(la.eigvalsh(rhos)) >= DEFAULT_NUMERICS.psd_floor

    p = purity(rhos)
    assert np.all(p >= 1/n - 1e-12)
    assert np.all(p <= 1 + 1e-12)

# }}}


if __name__ == "__main__":
    import sys
    if len(sys.argv) > 1:
        exec(sys.argv[1])
    else:
        from pytest import main
        main([__file__])

# vim: fdm=marker
