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
from math import log, pi
from typing import Any, Dict, List, Optional, Sequence, Tuple
from warnings import warn

import numpy as np
import mpmath
from scipy.special import gammaln

from pytools import memoize

from rdmat import DomainError, InvalidPurity, ParameterError, UnsupportedParameter
from rdmat.config import DEFAULT_NUMERICS, NumericsConfig
from rdmat.ensembles import EnsembleParams

import logging
logger = logging.getLogger(__name__)

__doc__ = """
.. currentmodule:: rdmat.analytic

Closed-form averages
--------------------

.. autoclass:: SpectrumSummary

.. autofunction:: mean_tr_w2
.. autofunction:: mean_tr_wx
.. autofunction:: d2_wishart_fixed
.. autofunction:: d2_wishart_pair
.. autofunction:: mean_purity
.. autofunction:: d2_rho_fixed
.. autofunction:: d2_rho_pair
.. autofunction:: distance_table_rows

Normalization constants
-----------------------

.. autofunction:: log_norm_constants
.. autofunction:: log_partition_ratio_check

Eigenvalue density
------------------

.. autoclass:: DensityCurve

.. autofunction:: hyp2f1_terminating
.. autofunction:: eig_density
.. autofunction:: eig_density_curve
.. autofunction:: eig_density_moment
.. autofunction:: eig_density_bin_masses

Asymptotics
-----------

.. autoclass:: AsymptoticFit
.. autofunction:: asymptotic_report
"""


# {{{ spectrum summary

@dataclass(frozen=True)
class SpectrumSummary:
    """The two spectral aggregates of a fixed Hermitian matrix :math:`X`
    that enter the mean-square distance to a Wishart matrix.

    .. attribute:: trace
    .. attribute:: trace_sq

        :math:`\\operatorname{tr}X^2 = \\sum_i \\chi_i^2`.

    .. attribute:: dim

        Optional dimension, used to check
        :math:`\\operatorname{tr}X^2 \\ge (\\operatorname{tr}X)^2/n`.

    .. automethod:: from_matrix
    """

    trace: float
    trace_sq: float
    dim: Optional[int] = None

    def __post_init__(self):
        if self.dim is not None:
            bound = self.trace**2 / self.dim
            if self.trace_sq < bound - 1e-12 * max(1.0, bound):
                raise ParameterError(
                        f"tr X^2={self.trace_sq} violates the Cauchy-Schwarz "
                        f"bound (tr X)^2/n={bound}")

    @classmethod
    def from_matrix(cls, x: np.ndarray) -> "SpectrumSummary":
        x = np.asarray(x)
        return cls(
                trace=float(np.trace(x).real),
                trace_sq=float(np.sum(x.real**2 + x.imag**2)),
                dim=x.shape[0])

# }}}


# {{{ Wishart averages

def mean_tr_w2(params: EnsembleParams) -> float:
    """Mean second spectral moment :math:`nm(n+m+2/\\beta-1)`."""
    n, m = params.n, params.m
    return n * m * (n + m + 2 / params.beta - 1)


def mean_tr_wx(params: EnsembleParams, x: SpectrumSummary) -> float:
    """Mean inner product :math:`\\langle\\operatorname{tr}WX\\rangle
    = m \\operatorname{tr}X`."""
    return params.m * x.trace


def d2_wishart_fixed(params: EnsembleParams, x: SpectrumSummary) -> float:
    """Mean of :math:`\\operatorname{tr}(W-X)^2` for a fixed Hermitian
    :math:`X`.
    """
    return mean_tr_w2(params) + x.trace_sq - 2 * mean_tr_wx(params, x)


def d2_wishart_pair(beta: int, n: int, m1: int, m2: int) -> float:
    """Mean of :math:`\\operatorname{tr}(W_1-W_2)^2` for independent Wishart
    matrices with *m1* and *m2* degrees of freedom.
    """
    # validates the arguments
    EnsembleParams(beta, n, m1)
    EnsembleParams(beta, n, m2)

    return n * ((m1 + m2) * (n + 2 / beta - 1) + (m1 - m2)**2)

# }}}


# {{{ density matrix averages

def mean_purity(params: EnsembleParams) -> float:
    """Average purity :math:`\\beta(n+m+2/\\beta-1)/(\\beta nm+2)`."""
    beta, n, m = params.beta, params.n, params.m
    return beta * (n + m + 2 / beta - 1) / (beta * n * m + 2)


def d2_rho_fixed(params: EnsembleParams, purity_sigma: float) -> float:
    """Mean of :math:`\\operatorname{tr}(\\rho-\\sigma)^2` for a fixed
    ``params.n``-dimensional density matrix :math:`\\sigma` of purity
    *purity_sigma*.

    :raises InvalidPurity: unless ``1/n <= purity_sigma <= 1``.
    """
    n = params.n
    slack = 1e-12
    if not 1 / n - slack <= purity_sigma <= 1 + slack:
        raise InvalidPurity(
                f"purity {purity_sigma} of a {n}-dimensional state must lie "
                f"in [1/{n}, 1]")

    return purity_sigma + mean_purity(params) - 2 / n


def d2_rho_pair(beta: int, n: int, m1: int, m2: int) -> float:
    """Mean of :math:`\\operatorname{tr}(\\rho_1-\\rho_2)^2` for independent
    random density matrices with environment dimensions *m1* and *m2*.
    """
    return (mean_purity(EnsembleParams(beta, n, m1))
            + mean_purity(EnsembleParams(beta, n, m2))
            - 2 / n)


def distance_table_rows(params: EnsembleParams, m2: int, x: SpectrumSummary,
        purity_sigma: float) -> List[Dict[str, Any]]:
    """Return the summary table of mean-square Hilbert-Schmidt distances,
    each row evaluated at *params* (with *m2* as the second number of degrees
    of freedom in pair rows).
    """
    beta, n, m = params.beta, params.n, params.m
    return [
            {"matrices": "Wishart matrix W and fixed Hermitian matrix X",
             "expression": "n*m*(n+m+2/beta-1) + tr(X^2) - 2*m*tr(X)",
             "value": d2_wishart_fixed(params, x)},
            {"matrices": "two Wishart matrices W1, W2",
             "expression": "n*((m1+m2)*(n+2/beta-1) + (m1-m2)^2)",
             "value": d2_wishart_pair(beta, n, m, m2)},
            {"matrices": "random density matrix rho and fixed density "
                "matrix sigma",
             "expression": "tr(sigma^2) + beta*(n+m+2/beta-1)/(beta*n*m+2) "
                "- 2/n",
             "value": d2_rho_fixed(params, purity_sigma)},
            {"matrices": "two random density matrices rho1, rho2",
             "expression": "beta*(n+m1+2/beta-1)/(beta*n*m1+2) "
                "+ beta*(n+m2+2/beta-1)/(beta*n*m2+2) - 2/n",
             "value": d2_rho_pair(beta, n, m, m2)},
            ]

# }}}


# {{{ normalization constants

def log_norm_constants(params: EnsembleParams) -> Tuple[float, float]:
    """Return ``(log C, log C_fixed)``: the logarithms of the normalization
    constants of the Wishart density and of the fixed-trace density.

    Both are evaluated from log-gamma sums so that large ``n*m`` does not
    overflow.
    """
    beta, n, m = params.beta, params.n, params.m
    half_bnm = beta * n * m / 2

    log_c_inv = (
            half_bnm * log(2 / beta)
            + beta * n * (n - 1) / 4 * log(pi)
            + float(np.sum(gammaln(beta / 2 * (m - np.arange(1, n + 1) + 1)))))
    log_c = -log_c_inv

    log_c_fixed = log_c + half_bnm * log(2 / beta) + float(gammaln(half_bnm))
    return log_c, log_c_fixed


def log_partition_ratio_check(params: EnsembleParams,
        numerics: NumericsConfig = DEFAULT_NUMERICS) -> float:
    """Relative deviation between ``log C_fixed - log C`` and an independent
    extended-precision evaluation of
    :math:`\\log[(2/\\beta)^{\\beta nm/2}\\Gamma(\\beta nm/2)]`.
    """
    log_c, log_c_fixed = log_norm_constants(params)
    with mpmath.workdps(numerics.mp_dps):
        half_bnm = mpmath.mpf(params.beta * params.n * params.m) / 2
        reference = float(mpmath.log(
            mpmath.power(mpmath.mpf(2) / params.beta, half_bnm)
            * mpmath.gamma(half_bnm)))

    difference = (log_c_fixed - log_c) - reference
    return abs(difference) / max(1.0, abs(reference))

# }}}


# {{{ terminating hypergeometric series

def hyp2f1_terminating(a, b, c, z):
    """Sum the terminating Gauss series
    :math:`\\sum_{k=0}^{|a|} \\frac{(a)_k (b)_k}{(c)_k k!} z^k`.

    The arithmetic follows the type of the arguments, so :mod:`mpmath`
    numbers yield an extended-precision result. Terms are accumulated from
    ``k=0`` upward with compensated (Kahan) summation.

    :arg a: a nonpositive integer.
    :raises UnsupportedParameter: if *a* is not a nonpositive integer, or if
        *c* is a nonpositive integer that makes a denominator vanish before
        the series terminates.
    """
    if int(a) != a or a > 0:
        raise UnsupportedParameter(
                f"series only terminates for nonpositive integer a, got {a}")
    nterms = -int(a)

    if int(c) == c and c <= 0 and -c < nterms:
        raise UnsupportedParameter(
                f"c={c} produces a vanishing denominator")

    total = 1 + 0 * z
    compensation = 0 * z
    term = 1 + 0 * z
    for k in range(nterms):
        term = term * (a + k) * (b + k) / ((c + k) * (k + 1)) * z
        y = term - compensation
        t = total + y
        compensation = (t - total) - y
        total = t

    return total

# }}}


# {{{ eigenvalue density

def _check_density_params(params: EnsembleParams) -> None:
    if params.n < 2:
        raise UnsupportedParameter(
                "eigenvalue density of a 1x1 density matrix is a point mass")
    if params.beta != 2:
        warn("the eigenvalue density is verified for beta=2 only; "
                f"beta={params.beta} results are unverified", stacklevel=3)


def _log_k_coefficient(params: EnsembleParams, i: int):
    """Return ``(log|K_i|, sign K_i)`` as :mod:`mpmath` numbers."""
    n, m, alpha = params.n, params.m, mpmath.mpf(params.alpha)
    nm = n * m
    lg = mpmath.loggamma
    log_k = (
            lg(m + 1) + lg(nm) - mpmath.log(n)
            - lg(i) - lg(n - i + 1) - lg(i + alpha + 1) - lg(nm - alpha - i))
    return log_k, (-1)**i


def eig_density(params: EnsembleParams, mu: float,
        numerics: NumericsConfig = DEFAULT_NUMERICS) -> float:
    """Evaluate the one-eigenvalue density :math:`p(\\mu)` of the fixed-trace
    ensemble from its representation as a sum of :math:`K_i`-weighted
    Beta-type monomials and terminating hypergeometric functions at
    :math:`\\mu/(\\mu-1)`.

    The sums alternate strongly, so they are carried out at
    :attr:`~rdmat.config.NumericsConfig.mp_dps` decimal digits.

    :raises DomainError: unless ``0 < mu < 1``.
    """
    if not 0 < mu < 1:
        raise DomainError(f"eigenvalue density requires 0 < mu < 1, got {mu}")
    _check_density_params(params)

    n, nm = params.n, params.n * params.m
    with mpmath.workdps(numerics.mp_dps):
        alpha = mpmath.mpf(params.alpha)
        mu = mpmath.mpf(mu)
        z = mu / (mu - 1)
        c = alpha + 1
        gamma_c = mpmath.gamma(c)

        total = mpmath.mpf(0)
        for i in range(1, n + 1):
            b = i - nm + alpha
            bracket = (
                    (n - i) * hyp2f1_terminating(-n, b, c, z)
                    - n * hyp2f1_terminating(1 - n, b, c, z)) / gamma_c

            log_k, sign = _log_k_coefficient(params, i)
            total += (sign * mpmath.exp(log_k)
                    * mu**(i + alpha - 1) * (1 - mu)**(nm - alpha - 1 - i)
                    * bracket)

        return float(total)


@memoize
def _monomial_coefficients(params: EnsembleParams, dps: int):
    """Expand :math:`p(\\mu)` as :math:`\\sum_s d_s \\mu^{\\alpha+s-1}
    (1-\\mu)^{nm-\\alpha-1-s}` and return the nonzero ``(s, d_s)``.

    Substituting :math:`z=\\mu/(\\mu-1)` turns :math:`z^k` into
    :math:`(-1)^k \\mu^k (1-\\mu)^{-k}`, so the term ``k`` of the series
    attached to ``K_i`` contributes to ``s = i + k``.
    """
    n, nm = params.n, params.n * params.m
    with mpmath.workdps(dps):
        alpha = mpmath.mpf(params.alpha)
        c = alpha + 1
        gamma_c = mpmath.gamma(c)

        coefficients: Dict[int, Any] = {}
        for i in range(1, n + 1):
            b = i - nm + alpha
            log_k, sign = _log_k_coefficient(params, i)
            k_i = sign * mpmath.exp(log_k)

            for k in range(n + 1):
                common = (mpmath.rf(b, k)
                        / (mpmath.rf(c, k) * mpmath.factorial(k) * gamma_c))
                series_part = (
                        (n - i) * mpmath.rf(-n, k)
                        - n * mpmath.rf(1 - n, k)) * common
                if series_part == 0:
                    continue

                s = i + k
                coefficients[s] = (coefficients.get(s, mpmath.mpf(0))
                        + k_i * (-1)**k * series_part)

        return tuple(sorted(
            (s, d) for s, d in coefficients.items() if d != 0))


def _eval_monomials(params: EnsembleParams, coefficients, mu):
    alpha = mpmath.mpf(params.alpha)
    nm = params.n * params.m
    return mpmath.fsum(
            d * mu**(alpha + s - 1) * (1 - mu)**(nm - alpha - 1 - s)
            for s, d in coefficients)


@dataclass(frozen=True)
class DensityCurve:
    """Samples of the eigenvalue density on a uniform grid.

    .. attribute:: abscissae

        The cell midpoints ``(j + 1/2)/N``, ``j = 0, ..., N-1``, of a uniform
        partition of :math:`[0, 1]` into ``N`` cells.

    .. attribute:: ordinates

    .. automethod:: integrate
    """

    abscissae: np.ndarray
    ordinates: np.ndarray

    @property
    def grid_spacing(self) -> float:
        return 1 / len(self.abscissae)

    def integrate(self, moment: int = 0) -> float:
        """Approximate :math:`\\int_0^1 \\mu^k p(\\mu)\\,d\\mu` by the
        composite midpoint rule over the samples.
        """
        f = self.abscissae**moment * self.ordinates
        return float(self.grid_spacing * np.sum(f))


def eig_density_curve(params: EnsembleParams, npoints: int = 2000,
        numerics: NumericsConfig = DEFAULT_NUMERICS) -> DensityCurve:
    _check_density_params(params)

    abscissae = (np.arange(npoints) + 0.5) / npoints
    coefficients = _monomial_coefficients(params, numerics.mp_dps)
    with mpmath.workdps(numerics.mp_dps):
        ordinates = np.array([
            float(_eval_monomials(params, coefficients, mpmath.mpf(mu)))
            for mu in abscissae])

    return DensityCurve(abscissae, ordinates)


def eig_density_moment(params: EnsembleParams, k: int = 0,
        numerics: NumericsConfig = DEFAULT_NUMERICS) -> float:
    """Return :math:`\\int_0^1 \\mu^k p(\\mu)\\,d\\mu`, integrating each
    monomial exactly as a Beta function.
    """
    _check_density_params(params)

    nm = params.n * params.m
    coefficients = _monomial_coefficients(params, numerics.mp_dps)
    with mpmath.workdps(numerics.mp_dps):
        alpha = mpmath.mpf(params.alpha)
        return float(mpmath.fsum(
            d * mpmath.beta(alpha + s + k, nm - alpha - s)
            for s, d in coefficients))


def eig_density_bin_masses(params: EnsembleParams, edges: Sequence[float],
        numerics: NumericsConfig = DEFAULT_NUMERICS) -> np.ndarray:
    """Return the probability that an eigenvalue falls in each interval
    ``[edges[j], edges[j+1]]``.
    """
    _check_density_params(params)

    nm = params.n * params.m
    coefficients = _monomial_coefficients(params, numerics.mp_dps)
    with mpmath.workdps(numerics.mp_dps):
        alpha = mpmath.mpf(params.alpha)
        masses = [
                mpmath.fsum(
                    d * mpmath.betainc(alpha + s, nm - alpha - s,
                        mpmath.mpf(lo), mpmath.mpf(hi))
                    for s, d in coefficients)
                for lo, hi in zip(edges[:-1], edges[1:])]

    return np.array([float(mass) for mass in masses])

# }}}


# {{{ asymptotics

@dataclass(frozen=True)
class AsymptoticFit:
    """
    .. attribute:: quantity
    .. attribute:: ns
    .. attribute:: errors

        Absolute deviations from the leading-order large-``n`` value.

    .. attribute:: order

        Empirical order of decay in ``1/n``.

    .. attribute:: constant

        :math:`\\max_n n^2 |\\text{error}|`, the smallest ``C`` such that the
        deviations are bounded by ``C/n^2`` on the sampled ``ns``.
    """

    quantity: str
    ns: Tuple[int, ...]
    errors: Tuple[float, ...]
    order: float
    constant: float


def asymptotic_report(beta: int, ns: Sequence[int]) -> List[AsymptoticFit]:
    """Compare the ``n = m`` averages with their leading large-``n`` forms:
    :math:`D^2_{\\rho,\\sigma} \\to \\operatorname{tr}\\sigma^2` and
    :math:`D^2_{\\rho_1,\\rho_2} \\to 2/n`.
    """
    from pytools.convergence import EOCRecorder

    deviations = {
            # independent of sigma: D^2 - tr sigma^2 = <tr rho^2> - 2/n
            "d2_rho_fixed - tr(sigma^2)": lambda n: abs(
                d2_rho_fixed(EnsembleParams(beta, n, n), 1.0) - 1.0),
            "d2_rho_pair - 2/n": lambda n: abs(
                d2_rho_pair(beta, n, n, n) - 2 / n),
            }

    result = []
    for quantity, deviation in deviations.items():
        eoc = EOCRecorder()
        errors = []
        for n in ns:
            error = deviation(n)
            errors.append(error)
            eoc.add_data_point(1 / n, error)

        fit = AsymptoticFit(
                quantity=quantity,
                ns=tuple(ns),
                errors=tuple(errors),
                order=float(eoc.order_estimate()),
                constant=max(n**2 * error for n, error in zip(ns, errors)))
        logger.info("asymptotics beta=%d, %s: order %.3f, C=%.4g",
                beta, quantity, fit.order, fit.constant)
        result.append(fit)

    return result

# }}}

# vim: foldmethod=marker
