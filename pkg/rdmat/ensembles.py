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

from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np
import numpy.linalg as la

from rdmat import DegenerateSample, DomainError, ParameterError
from rdmat.config import DEFAULT_NUMERICS, NumericsConfig
from rdmat.linalg import check_hermitian, reduced_state_from_vector

__doc__ = """
.. currentmodule:: rdmat.ensembles

Parameters and streams
----------------------

.. autoclass:: EnsembleParams
.. autoclass:: RngStream
.. autoclass:: DensityMatrix

Sampling
--------

Ginibre entries are normalized so that :math:`E|G_{jk}|^2 = 1` for both
Dyson indices: real standard normals for :math:`\\beta=1`, and complex
normals with independent :math:`N(0, 1/2)` real and imaginary parts for
:math:`\\beta=2`. This matches the weight :math:`e^{-\\frac{\\beta}{2}
\\operatorname{tr} GG^\\dagger}` and gives :math:`E[W] = m I`.

.. autofunction:: sample_ginibre
.. autofunction:: sample_wishart
.. autofunction:: sample_density_matrix
.. autofunction:: sample_density_matrices
.. autofunction:: wishart_from_ginibre
.. autofunction:: density_matrix_from_ginibre
.. autofunction:: density_matrix_from_pure_state
.. autofunction:: purity
"""


# {{{ parameters

@dataclass(frozen=True)
class EnsembleParams:
    """
    .. attribute:: beta

        Dyson index, 1 (real) or 2 (complex).

    .. attribute:: n

        Matrix dimension.

    .. attribute:: m

        Degrees of freedom of the Wishart matrix, or the dimension of the
        environment that is traced out to obtain a density matrix.

    .. autoattribute:: alpha
    """

    beta: int
    n: int
    m: int

    def __post_init__(self):
        if self.beta not in (1, 2):
            raise ParameterError(f"Dyson index must be 1 or 2, got {self.beta}")
        if int(self.n) != self.n or self.n < 1:
            raise ParameterError(f"dimension must be a positive integer, "
                    f"got {self.n}")
        if int(self.m) != self.m or self.m < self.n:
            raise ParameterError(
                    f"degrees of freedom m={self.m} must be an integer "
                    f"no smaller than n={self.n}")

    @property
    def alpha(self) -> float:
        """Exponent of :math:`\\det W` in the Wishart density."""
        return self.beta * (self.m - self.n + 1) / 2 - 1

# }}}


# {{{ random streams

@dataclass(frozen=True)
class RngStream:
    """An immutable handle on a reproducible stream of random numbers.

    Each stream is identified by a *seed* and a *key* tuple, which are handed
    to :class:`numpy.random.SeedSequence` as entropy and spawn key. The
    resulting :class:`numpy.random.Philox` counter-based generator yields
    statistically independent streams for distinct keys. Identical
    ``(seed, key)`` pairs give bit-identical draws.

    .. automethod:: generator
    .. automethod:: child
    """

    seed: int
    key: Tuple[int, ...] = ()

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise ParameterError(
                    f"seed must be an unsigned 64-bit integer, got {self.seed}")

    def generator(self) -> np.random.Generator:
        """Return a fresh generator positioned at the start of the stream."""
        seq = np.random.SeedSequence(self.seed, spawn_key=self.key)
        return np.random.Generator(np.random.Philox(seq))

    def child(self, index: int) -> "RngStream":
        return RngStream(self.seed, self.key + (index,))

# }}}


# {{{ density matrices

def check_density_matrix(a: np.ndarray,
        numerics: NumericsConfig = DEFAULT_NUMERICS) -> None:
    """
    :raises HermiticityViolation:
    :raises DomainError: if the trace differs from one or an eigenvalue lies
        below :attr:`~rdmat.config.NumericsConfig.psd_floor`.
    """
    check_hermitian(a, numerics)

    tr = np.trace(a).real
    if abs(tr - 1) > numerics.trace_tol:
        raise DomainError(f"density matrix has trace {tr!r}")

    lambda_min = la.eigvalsh(a)[0]
    if lambda_min < numerics.psd_floor:
        raise DomainError(
                f"density matrix has negative eigenvalue {lambda_min:.3e}")


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A Hermitian, positive semidefinite matrix of unit trace.

    .. attribute:: data

        The ``(dim, dim)`` :class:`numpy.ndarray`.

    .. automethod:: from_array
    .. automethod:: purity
    .. automethod:: eigenvalues
    """

    data: np.ndarray

    @classmethod
    def from_array(cls, a: np.ndarray, check: bool = True,
            numerics: NumericsConfig = DEFAULT_NUMERICS) -> "DensityMatrix":
        a = np.asarray(a)
        if check:
            check_density_matrix(a, numerics)
        return cls(a)

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    def purity(self) -> float:
        return purity(self.data)

    def eigenvalues(self) -> np.ndarray:
        return la.eigvalsh(self.data)


def purity(rho: Union[np.ndarray, DensityMatrix]):
    """Return :math:`\\operatorname{tr}\\rho^2` of a density matrix or a stack
    of them.
    """
    if isinstance(rho, DensityMatrix):
        rho = rho.data
    rho = np.asarray(rho)
    result = np.sum(rho.real**2 + rho.imag**2, axis=(-2, -1))
    if result.ndim == 0:
        return float(result)
    return result

# }}}


# {{{ samplers

def _standard_ginibre(beta: int, shape: Tuple[int, ...],
        generator: np.random.Generator) -> np.ndarray:
    if beta == 1:
        return generator.standard_normal(shape)

    z = generator.standard_normal(shape + (2,))
    return np.sqrt(0.5) * (z[..., 0] + 1j * z[..., 1])


def sample_ginibre(params: EnsembleParams, rng: RngStream,
        count: Optional[int] = None) -> np.ndarray:
    """Draw an ``(n, m)`` Ginibre matrix, or a ``(count, n, m)`` stack.

    The first matrix of a stack equals the single matrix drawn from the same
    *rng*.
    """
    shape = (params.n, params.m)
    if count is not None:
        shape = (count,) + shape

    return _standard_ginibre(params.beta, shape, rng.generator())


def wishart_from_ginibre(g: np.ndarray) -> np.ndarray:
    """Return :math:`GG^\\dagger` for a Ginibre matrix or a stack of them."""
    g_dagger = np.conj(np.swapaxes(g, -1, -2))
    w = g @ g_dagger
    # enforce exact Hermiticity against rounding in the product
    return 0.5 * (w + np.conj(np.swapaxes(w, -1, -2)))


def sample_wishart(params: EnsembleParams, rng: RngStream,
        count: Optional[int] = None) -> np.ndarray:
    return wishart_from_ginibre(sample_ginibre(params, rng, count))


def _normalize_by_trace(w: np.ndarray) -> np.ndarray:
    tr = np.trace(w, axis1=-2, axis2=-1).real
    if np.any(tr <= 0):
        raise DegenerateSample("sampled Wishart matrix has vanishing trace")
    return w / tr[..., np.newaxis, np.newaxis]


def density_matrix_from_ginibre(g: np.ndarray,
        numerics: NumericsConfig = DEFAULT_NUMERICS) -> DensityMatrix:
    """Return :math:`GG^\\dagger/\\operatorname{tr}(GG^\\dagger)`.

    The result does not change when *g* is multiplied by a positive scalar.
    """
    return DensityMatrix.from_array(
            _normalize_by_trace(wishart_from_ginibre(g)), numerics=numerics)


def density_matrix_from_pure_state(psi: np.ndarray, n: int, m: int,
        numerics: NumericsConfig = DEFAULT_NUMERICS) -> DensityMatrix:
    """Reduce the (not necessarily normalized) pure state *psi* on
    :math:`\\mathbb{C}^n \\otimes \\mathbb{C}^m` to its first factor.

    A Gaussian *psi* yields the same distribution as
    :func:`density_matrix_from_ginibre`; in fact ``psi.reshape(n, m)`` plays
    the role of the Ginibre matrix.
    """
    psi = np.asarray(psi)
    norm_sq = np.vdot(psi, psi).real
    if norm_sq <= 0:
        raise DegenerateSample("pure state has zero norm")

    rho = reduced_state_from_vector(psi, n, m) / norm_sq
    return DensityMatrix.from_array(rho, numerics=numerics)


def sample_density_matrix(params: EnsembleParams, rng: RngStream,
        numerics: NumericsConfig = DEFAULT_NUMERICS) -> DensityMatrix:
    """Draw a density matrix from the fixed-trace Wishart (Hilbert-Schmidt)
    ensemble with environment dimension ``params.m``.
    """
    return density_matrix_from_ginibre(sample_ginibre(params, rng), numerics)


def sample_density_matrices(params: EnsembleParams, rng: RngStream,
        count: int) -> np.ndarray:
    """Draw a ``(count, n, n)`` stack of density matrices.

    Unlike :func:`sample_density_matrix`, members of the stack are not
    individually validated.
    """
    return _normalize_by_trace(sample_wishart(params, rng, count))

# }}}

# vim: foldmethod=marker
