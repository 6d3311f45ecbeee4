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

__doc__ = """
.. currentmodule:: rdmat.config

.. autoclass:: NumericsConfig
.. autodata:: DEFAULT_NUMERICS
"""


@dataclass(frozen=True)
class NumericsConfig:
    """Tolerances and solver choices shared by all numerical routines.

    .. attribute:: hermiticity_tol

        Largest admissible ``|A[j, k] - conj(A[k, j])|``, scaled by
        ``max(1, max|A|)``.

    .. attribute:: reconstruction_tol

        Relative Frobenius error allowed when reconstructing a matrix from
        its eigendecomposition, and the unitarity tolerance of unitary
        exponentials.

    .. attribute:: trace_tol

        Deviation of a density matrix trace from one.

    .. attribute:: psd_floor

        Smallest admissible eigenvalue of a positive semidefinite matrix
        (a small negative number).

    .. attribute:: jacobi_tol

        Off-diagonal Frobenius norm, relative to the Frobenius norm of the
        input, at which Jacobi sweeps stop.

    .. attribute:: jacobi_max_sweeps

    .. attribute:: eigensolver

        ``"lapack"`` (:func:`numpy.linalg.eigh`) or ``"jacobi"``.

    .. attribute:: mp_dps

        Decimal digits used by :mod:`mpmath` when summing the alternating
        series of the eigenvalue density.
    """

    hermiticity_tol: float = 1e-12
    reconstruction_tol: float = 1e-10
    trace_tol: float = 1e-12
    psd_floor: float = -1e-10
    jacobi_tol: float = 1e-13
    jacobi_max_sweeps: int = 100
    eigensolver: str = "lapack"
    mp_dps: int = 50

    def __post_init__(self):
        if self.eigensolver not in ("lapack", "jacobi"):
            raise ValueError(f"unknown eigensolver: '{self.eigensolver}'")


DEFAULT_NUMERICS = NumericsConfig()
