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
from math import copysign, sqrt
from typing import Optional

import numpy as np
import numpy.linalg as la

from rdmat import ConvergenceFailure, HermiticityViolation, ShapeError
from rdmat.config import DEFAULT_NUMERICS, NumericsConfig

import logging
logger = logging.getLogger(__name__)

__doc__ = """
.. currentmodule:: rdmat.linalg

Matrices are plain :class:`numpy.ndarray` instances of shape ``(n, n)``
(or ``(n, m)`` for rectangular Ginibre matrices). Functions that accept
stacks operate on the last two axes.

.. autoclass:: EigenDecomposition

.. autofunction:: check_hermitian
.. autofunction:: hermitian_eig
.. autofunction:: unitary_from_hermitian
.. autofunction:: partial_trace_second
.. autofunction:: reduced_state_from_vector
.. autofunction:: hs_distance_sq
"""


# {{{ hermiticity

def _check_square(a: np.ndarray) -> None:
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise ShapeError(f"expected a square matrix, got shape {a.shape}")


def hermiticity_defect(a: np.ndarray) -> float:
    """Return ``max|A - A^dagger|`` scaled by ``max(1, max|A|)``."""
    a = np.asarray(a)
    _check_square(a)
    scale = max(1.0, float(np.max(np.abs(a), initial=0)))
    return float(np.max(
        np.abs(a - np.conj(np.swapaxes(a, -1, -2))), initial=0)) / scale


def check_hermitian(a: np.ndarray,
        numerics: NumericsConfig = DEFAULT_NUMERICS) -> None:
    """
    :raises HermiticityViolation: if *a* deviates from its conjugate
        transpose by more than :attr:`~rdmat.config.NumericsConfig.hermiticity_tol`.
    """
    defect = hermiticity_defect(a)
    if defect > numerics.hermiticity_tol:
        raise HermiticityViolation(
                f"matrix is not Hermitian (defect {defect:.3e} exceeds "
                f"{numerics.hermiticity_tol:.1e})")

# }}}


# {{{ eigendecomposition

@dataclass(frozen=True)
class EigenDecomposition:
    """
    .. attribute:: eigenvalues

        Real eigenvalues in ascending order.

    .. attribute:: eigenvectors

        Unitary matrix whose columns are the eigenvectors, in the order of
        :attr:`eigenvalues`.

    .. automethod:: reconstruct
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def _jacobi_eigh(a: np.ndarray, numerics: NumericsConfig):
    """Cyclic Jacobi iteration for a complex Hermitian matrix.

    Each rotation first removes the phase of ``a[p, q]`` and then applies the
    real symmetric Jacobi rotation to the resulting real 2x2 block.
    """
    a = np.array(a, dtype=np.complex128)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)

    norm = la.norm(a)
    if norm == 0:
        return np.zeros(n), v

    target = numerics.jacobi_tol * norm
    skip_below = target / n

    for sweep in range(numerics.jacobi_max_sweeps + 1):
        off = la.norm(a - np.diag(np.diag(a)))
        if off <= target:
            logger.debug("jacobi: converged after %d sweeps (off=%.3e)",
                    sweep, off)
            break

        if sweep == numerics.jacobi_max_sweeps:
            raise ConvergenceFailure(
                    f"Jacobi eigensolver did not converge in {sweep} sweeps "
                    f"(off-diagonal norm {off:.3e}, target {target:.3e})")

        for p in range(n - 1):
            for q in range(p + 1, n):
                h = a[p, q]
                habs = abs(h)
                if habs <= skip_below:
                    continue

                conj_phase = np.conj(h) / habs
                theta = (a[q, q].real - a[p, p].real) / (2 * habs)
                t = copysign(1.0, theta) / (abs(theta) + sqrt(theta*theta + 1))
                c = 1 / sqrt(t*t + 1)
                s = t * c

                g = np.array([
                    [c, s],
                    [-s * conj_phase, c * conj_phase]])

                idx = [p, q]
                a[:, idx] = a[:, idx] @ g
                a[idx, :] = g.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                v[:, idx] = v[:, idx] @ g

    eigenvalues = np.diag(a).real
    order = np.argsort(eigenvalues, kind="stable")
    return eigenvalues[order], v[:, order]


def hermitian_eig(a: np.ndarray, method: Optional[str] = None,
        numerics: NumericsConfig = DEFAULT_NUMERICS) -> EigenDecomposition:
    """Diagonalize the Hermitian matrix *a*.

    :arg method: ``"lapack"`` or ``"jacobi"``. Defaults to
        :attr:`~rdmat.config.NumericsConfig.eigensolver`.
    :returns: an :class:`EigenDecomposition` with ascending eigenvalues.
        Real input yields real eigenvectors.
    :raises HermiticityViolation:
    :raises ConvergenceFailure:
    """
    a = np.asarray(a)
    if a.ndim != 2:
        raise ShapeError(f"expected a single matrix, got shape {a.shape}")
    check_hermitian(a, numerics)

    if method is None:
        method = numerics.eigensolver

    if method == "lapack":
        try:
            eigenvalues, eigenvectors = la.eigh(a)
        except la.LinAlgError as exc:
            raise ConvergenceFailure(f"eigh failed: {exc}") from exc
    elif method == "jacobi":
        eigenvalues, eigenvectors = _jacobi_eigh(a, numerics)
        if np.isrealobj(a):
            eigenvectors = eigenvectors.real.copy()
    else:
        raise ValueError(f"unknown eigensolver: '{method}'")

    return EigenDecomposition(eigenvalues, eigenvectors)

# }}}


# {{{ unitary exponential

def unitary_from_hermitian(h: np.ndarray, phase_scale: float,
        numerics: NumericsConfig = DEFAULT_NUMERICS) -> np.ndarray:
    """Return ``exp(-1j * phase_scale * h)`` computed from the spectral
    decomposition of *h*.
    """
    eig = hermitian_eig(h, numerics=numerics)
    v = eig.eigenvectors
    phases = np.exp(-1j * phase_scale * eig.eigenvalues)
    return (v * phases) @ v.conj().T

# }}}


# {{{ partial trace

def partial_trace_second(m: np.ndarray, dim_a: int, dim_b: int,
        numerics: NumericsConfig = DEFAULT_NUMERICS) -> np.ndarray:
    """Trace out the second tensor factor of a Hermitian operator on
    :math:`\\mathbb{C}^{d_A} \\otimes \\mathbb{C}^{d_B}`.

    :returns: a ``(dim_a, dim_a)`` Hermitian matrix.
    """
    m = np.asarray(m)
    ntotal = dim_a * dim_b
    if m.shape != (ntotal, ntotal):
        raise ShapeError(
                f"operator of shape {m.shape} does not act on a "
                f"{dim_a}x{dim_b} bipartite space")
    check_hermitian(m, numerics)

    return np.trace(m.reshape(dim_a, dim_b, dim_a, dim_b), axis1=1, axis2=3)


def reduced_state_from_vector(psi: np.ndarray, dim_a: int,
        dim_b: int) -> np.ndarray:
    """Return ``tr_B |psi><psi|`` without forming the full outer product."""
    psi = np.asarray(psi)
    if psi.shape != (dim_a * dim_b,):
        raise ShapeError(
                f"vector of shape {psi.shape} does not live in a "
                f"{dim_a}x{dim_b} bipartite space")

    c = psi.reshape(dim_a, dim_b)
    return c @ c.conj().T

# }}}


# {{{ Hilbert-Schmidt distance

def hs_distance_sq(a: np.ndarray, b: np.ndarray):
    """Return ``tr (a - b)^2`` for Hermitian *a* and *b*.

    Stacks of matrices broadcast over leading axes; a pair of single matrices
    yields a :class:`float`.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    _check_square(a)
    _check_square(b)
    if a.shape[-1] != b.shape[-1]:
        raise ShapeError(
                f"dimension mismatch: {a.shape[-1]} vs {b.shape[-1]}")

    d = a - b
    result = np.sum(d.real**2 + d.imag**2, axis=(-2, -1))
    if result.ndim == 0:
        return float(result)
    return result

# }}}

# vim: foldmethod=marker
