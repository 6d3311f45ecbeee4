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

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from math import copysign, inf, sqrt
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import numpy.linalg as la

from pytools import log_process

from rdmat import DomainError, HermiticityViolation, ShapeError, SpecError
from rdmat.analytic import (
        SpectrumSummary, d2_rho_fixed, d2_rho_pair, d2_wishart_fixed,
        d2_wishart_pair, eig_density_bin_masses, mean_purity)
from rdmat.config import DEFAULT_NUMERICS, NumericsConfig
from rdmat.ensembles import (
        EnsembleParams, RngStream, check_density_matrix, purity,
        sample_density_matrices, sample_wishart)
from rdmat.linalg import check_hermitian, hs_distance_sq

import logging
logger = logging.getLogger(__name__)

__doc__ = """
.. currentmodule:: rdmat.montecarlo

Experiments
-----------

.. autoclass:: ExperimentKind
.. autoclass:: ExperimentSpec
.. autoclass:: SummaryStat
.. autoclass:: Histogram
.. autoclass:: ExperimentResult
.. autoclass:: ComparisonReport

.. autofunction:: run_experiment
.. autofunction:: analytic_value
.. autofunction:: compare
.. autofunction:: histogram_l1_distance

Fixed matrices and verification grids
-------------------------------------

.. autodata:: FIXED_MATRIX_PRESETS
.. autofunction:: reference_fixed_matrix
.. autofunction:: fixed_matrix_preset
.. autofunction:: verification_grid

Reproducibility
---------------

Trials are grouped into batches of :attr:`ExperimentSpec.batch_size`. Batch
``b`` draws from :class:`~rdmat.ensembles.RngStream` with key
``stream_key + (b,)``, and the per-trial values of all batches are
concatenated in batch order before they are reduced. The result therefore
does not depend on how many worker threads process the batches.
"""


# {{{ experiment description

class ExperimentKind(enum.Enum):
    WISHART_VS_FIXED = "WishartVsFixed"
    WISHART_PAIR = "WishartPair"
    RHO_VS_FIXED = "RhoVsFixed"
    RHO_PAIR = "RhoPair"
    EIG_DENSITY_HISTOGRAM = "EigDensityHistogram"
    PURITY = "Purity"

    @property
    def is_pair(self) -> bool:
        return self in (ExperimentKind.WISHART_PAIR, ExperimentKind.RHO_PAIR)

    @property
    def needs_fixed_matrix(self) -> bool:
        return self in (
                ExperimentKind.WISHART_VS_FIXED, ExperimentKind.RHO_VS_FIXED)


_SPEC_KEYS = frozenset([
    "kind", "params1", "params2", "fixed_matrix", "trials", "seed",
    "histogram_bins", "batch_size", "stream_key"])


@dataclass(frozen=True, eq=False)
class ExperimentSpec:
    """
    .. attribute:: kind

        An :class:`ExperimentKind`.

    .. attribute:: params1
    .. attribute:: params2

        Second :class:`~rdmat.ensembles.EnsembleParams` of pair experiments,
        with the same ``beta`` and ``n`` as :attr:`params1`.

    .. attribute:: fixed_matrix

        The fixed Hermitian matrix :math:`X`, or the fixed density matrix
        :math:`\\sigma`.

    .. attribute:: trials
    .. attribute:: seed
    .. attribute:: histogram_bins

        Number of equal-width bins on :math:`[0, 1]` used by
        :attr:`ExperimentKind.EIG_DENSITY_HISTOGRAM`.

    .. attribute:: batch_size
    .. attribute:: stream_key

        Prefix of the random stream keys, distinguishing experiments that
        share a seed.

    .. automethod:: to_json_dict
    .. automethod:: from_json_dict
    """

    kind: ExperimentKind
    params1: EnsembleParams
    params2: Optional[EnsembleParams] = None
    fixed_matrix: Optional[np.ndarray] = None
    trials: int = 100_000
    seed: int = 1234
    histogram_bins: Optional[int] = None
    batch_size: int = 1000
    stream_key: Tuple[int, ...] = field(default=())

    def __post_init__(self):
        if self.trials < 1:
            raise SpecError(f"trials must be positive, got {self.trials}")
        if self.batch_size < 1:
            raise SpecError(
                    f"batch_size must be positive, got {self.batch_size}")

        p1, p2 = self.params1, self.params2
        if self.kind.is_pair:
            if p2 is None:
                raise SpecError(f"{self.kind.value} requires params2")
            if (p1.beta, p1.n) != (p2.beta, p2.n):
                raise SpecError(
                        "pair experiments need equal beta and n, got "
                        f"(beta={p1.beta}, n={p1.n}) and "
                        f"(beta={p2.beta}, n={p2.n})")
        elif p2 is not None:
            raise SpecError(f"{self.kind.value} takes no params2")

        if self.kind.needs_fixed_matrix:
            self._check_fixed_matrix()
        elif self.fixed_matrix is not None:
            raise SpecError(f"{self.kind.value} takes no fixed matrix")

        if self.kind is ExperimentKind.EIG_DENSITY_HISTOGRAM:
            if self.histogram_bins is None or self.histogram_bins < 1:
                raise SpecError("histogram experiments require a positive "
                        "number of histogram_bins")

    def _check_fixed_matrix(self):
        x = self.fixed_matrix
        if x is None:
            raise SpecError(f"{self.kind.value} requires a fixed matrix")

        n = self.params1.n
        if x.shape != (n, n):
            raise SpecError(
                    f"fixed matrix of shape {x.shape} does not match n={n}")

        try:
            if self.kind is ExperimentKind.RHO_VS_FIXED:
                check_density_matrix(x)
            else:
                check_hermitian(x)
        except (DomainError, HermiticityViolation, ShapeError) as exc:
            raise SpecError(f"invalid fixed matrix: {exc}") from exc

    def to_json_dict(self) -> Dict[str, Any]:
        def params_to_dict(p):
            return None if p is None else {"beta": p.beta, "n": p.n, "m": p.m}

        x = self.fixed_matrix
        return {
                "kind": self.kind.value,
                "params1": params_to_dict(self.params1),
                "params2": params_to_dict(self.params2),
                "fixed_matrix": None if x is None else {
                    "real": np.real(x).tolist(),
                    "imag": np.imag(x).tolist(),
                    },
                "trials": self.trials,
                "seed": self.seed,
                "histogram_bins": self.histogram_bins,
                "batch_size": self.batch_size,
                "stream_key": list(self.stream_key),
                }

    @classmethod
    def from_json_dict(cls, d: Dict[str, Any]) -> "ExperimentSpec":
        unknown = set(d) - _SPEC_KEYS
        if unknown:
            raise SpecError(
                    f"unknown experiment keys: {', '.join(sorted(unknown))}")

        try:
            kind = ExperimentKind(d["kind"])
        except (KeyError, ValueError) as exc:
            raise SpecError(f"invalid experiment kind: {exc}") from exc

        def params_from_dict(p):
            return None if p is None else EnsembleParams(
                    int(p["beta"]), int(p["n"]), int(p["m"]))

        x = d.get("fixed_matrix")
        if x is not None:
            real = np.array(x["real"], dtype=np.float64)
            imag = np.array(x["imag"], dtype=np.float64)
            x = real if not np.any(imag) else real + 1j * imag

        return cls(
                kind=kind,
                params1=params_from_dict(d["params1"]),
                params2=params_from_dict(d.get("params2")),
                fixed_matrix=x,
                trials=int(d.get("trials", 100_000)),
                seed=int(d.get("seed", 1234)),
                histogram_bins=d.get("histogram_bins"),
                batch_size=int(d.get("batch_size", 1000)),
                stream_key=tuple(d.get("stream_key", ())))

# }}}


# {{{ results

@dataclass(frozen=True)
class SummaryStat:
    """
    .. attribute:: mean
    .. attribute:: std_error

        Unbiased sample standard deviation divided by :math:`\\sqrt{N}`.

    .. attribute:: count

    .. automethod:: from_values
    """

    mean: float
    std_error: float
    count: int

    @classmethod
    def from_values(cls, values: np.ndarray) -> "SummaryStat":
        count = len(values)
        if count > 1:
            std_error = float(np.std(values, ddof=1)) / sqrt(count)
        else:
            std_error = 0.0

        return cls(mean=float(np.mean(values)), std_error=std_error,
                count=count)


@dataclass(frozen=True, eq=False)
class Histogram:
    """Counts of eigenvalues in equal-width bins on :math:`[0, 1]`.

    .. attribute:: edges
    .. attribute:: counts

    .. autoattribute:: probabilities
    .. autoattribute:: density
    """

    edges: np.ndarray
    counts: np.ndarray

    @property
    def probabilities(self) -> np.ndarray:
        """Fraction of eigenvalues in each bin."""
        return self.counts / np.sum(self.counts)

    @property
    def density(self) -> np.ndarray:
        """Normalized histogram, comparable to the eigenvalue density."""
        return self.probabilities / np.diff(self.edges)


@dataclass(frozen=True)
class ExperimentResult:
    spec: ExperimentSpec
    summary: SummaryStat
    histogram: Optional[Histogram] = None


@dataclass(frozen=True)
class ComparisonReport:
    """
    .. attribute:: empirical

        A :class:`SummaryStat`.

    .. attribute:: analytic
    .. attribute:: z_score

        :math:`(\\bar x - a)/\\mathrm{SE}`.

    .. attribute:: relative_diff_percent

        :math:`100(\\bar x/a - 1)`, or *None* if the analytic value vanishes.

    .. attribute:: notes

        Human-readable caveats attached to the comparison.
    """

    empirical: SummaryStat
    analytic: float
    z_score: float
    relative_diff_percent: Optional[float]
    notes: Tuple[str, ...] = ()

    def passes(self, z_bound: float = 4) -> bool:
        return abs(self.z_score) <= z_bound

# }}}


# {{{ experiment runner

def _batch_stream(spec: ExperimentSpec, ibatch: int) -> RngStream:
    return RngStream(spec.seed, tuple(spec.stream_key) + (ibatch,))


def _run_batch(spec: ExperimentSpec, ibatch: int, count: int):
    """Return the per-trial values of one batch, and the eigenvalues drawn in
    it for histogram experiments.
    """
    stream = _batch_stream(spec, ibatch)
    kind = spec.kind
    eigenvalues = None

    if kind is ExperimentKind.WISHART_VS_FIXED:
        values = hs_distance_sq(
                sample_wishart(spec.params1, stream, count), spec.fixed_matrix)
    elif kind is ExperimentKind.WISHART_PAIR:
        values = hs_distance_sq(
                sample_wishart(spec.params1, stream.child(0), count),
                sample_wishart(spec.params2, stream.child(1), count))
    elif kind is ExperimentKind.RHO_VS_FIXED:
        values = hs_distance_sq(
                sample_density_matrices(spec.params1, stream, count),
                spec.fixed_matrix)
    elif kind is ExperimentKind.RHO_PAIR:
        values = hs_distance_sq(
                sample_density_matrices(spec.params1, stream.child(0), count),
                sample_density_matrices(spec.params2, stream.child(1), count))
    elif kind is ExperimentKind.PURITY:
        values = purity(sample_density_matrices(spec.params1, stream, count))
    elif kind is ExperimentKind.EIG_DENSITY_HISTOGRAM:
        rho = sample_density_matrices(spec.params1, stream, count)
        values = purity(rho)
        eigenvalues = la.eigvalsh(rho).ravel()
    else:
        raise SpecError(f"unknown experiment kind: {kind}")

    return np.atleast_1d(values), eigenvalues


@log_process(logger)
def run_experiment(spec: ExperimentSpec,
        nworkers: Optional[int] = None) -> ExperimentResult:
    """Run the trials described by *spec*.

    :arg nworkers: number of worker threads. *None* lets
        :class:`concurrent.futures.ThreadPoolExecutor` decide, ``1`` runs the
        batches in the calling thread.
    :returns: an :class:`ExperimentResult`. Histogram experiments summarize
        the purity of the sampled matrices and carry the eigenvalue
        :class:`Histogram`.
    """
    nbatches = -(-spec.trials // spec.batch_size)
    counts = [
            min(spec.batch_size, spec.trials - ibatch * spec.batch_size)
            for ibatch in range(nbatches)]

    if nworkers == 1:
        batches = [
                _run_batch(spec, ibatch, count)
                for ibatch, count in enumerate(counts)]
    else:
        with ThreadPoolExecutor(max_workers=nworkers) as executor:
            futures = [
                    executor.submit(_run_batch, spec, ibatch, count)
                    for ibatch, count in enumerate(counts)]
            batches = [future.result() for future in futures]

    values = np.concatenate([batch_values for batch_values, _ in batches])
    summary = SummaryStat.from_values(values)

    histogram = None
    if spec.kind is ExperimentKind.EIG_DENSITY_HISTOGRAM:
        edges = np.linspace(0, 1, spec.histogram_bins + 1)
        eigenvalues = np.concatenate([eigs for _, eigs in batches])
        # roundoff may push eigenvalues just outside [0, 1]
        counts_per_bin, _ = np.histogram(
                np.clip(eigenvalues, 0, 1), bins=edges)
        histogram = Histogram(edges, counts_per_bin)

    logger.info("%s (beta=%d, n=%d, m=%d): mean %.6g +/- %.2g over %d trials",
            spec.kind.value, spec.params1.beta, spec.params1.n, spec.params1.m,
            summary.mean, summary.std_error, summary.count)

    return ExperimentResult(spec=spec, summary=summary, histogram=histogram)

# }}}


# {{{ comparison with closed forms

def analytic_value(spec: ExperimentSpec) -> float:
    """Return the closed-form mean that the sample mean of *spec* estimates."""
    kind = spec.kind
    p1, p2 = spec.params1, spec.params2

    if kind is ExperimentKind.WISHART_VS_FIXED:
        return d2_wishart_fixed(p1, SpectrumSummary.from_matrix(spec.fixed_matrix))
    elif kind is ExperimentKind.WISHART_PAIR:
        return d2_wishart_pair(p1.beta, p1.n, p1.m, p2.m)
    elif kind is ExperimentKind.RHO_VS_FIXED:
        return d2_rho_fixed(p1, purity(spec.fixed_matrix))
    elif kind is ExperimentKind.RHO_PAIR:
        return d2_rho_pair(p1.beta, p1.n, p1.m, p2.m)
    elif kind in (ExperimentKind.PURITY, ExperimentKind.EIG_DENSITY_HISTOGRAM):
        return mean_purity(p1)
    else:
        raise SpecError(f"unknown experiment kind: {kind}")


def compare(empirical: SummaryStat, analytic: float) -> ComparisonReport:
    """
    :raises SpecError: if *empirical* summarizes fewer than two trials.
    """
    if empirical.count < 2:
        raise SpecError("a comparison needs at least two trials")

    notes = []
    diff = empirical.mean - analytic
    if empirical.std_error > 0:
        z_score = diff / empirical.std_error
    else:
        z_score = 0.0 if diff == 0 else copysign(inf, diff)
        notes.append("standard error vanishes")

    if analytic != 0:
        relative_diff_percent: Optional[float] = \
                100 * (empirical.mean / analytic - 1)
    else:
        relative_diff_percent = None
        notes.append("relative difference undefined for vanishing "
                "analytic value")

    return ComparisonReport(
            empirical=empirical,
            analytic=analytic,
            z_score=z_score,
            relative_diff_percent=relative_diff_percent,
            notes=tuple(notes))


def histogram_l1_distance(histogram: Histogram, params: EnsembleParams,
        numerics: NumericsConfig = DEFAULT_NUMERICS) -> float:
    """Return :math:`\\int_0^1 |h(\\mu) - p(\\mu)|\\,d\\mu` between the
    piecewise-constant histogram density and the eigenvalue density, with
    :math:`p` averaged over each bin.
    """
    masses = eig_density_bin_masses(params, histogram.edges, numerics)
    return float(np.sum(np.abs(histogram.probabilities - masses)))

# }}}


# {{{ fixed matrices

def reference_fixed_matrix(n: int, beta: int) -> np.ndarray:
    """Return the reference fixed Hermitian matrix :math:`X` used to compare
    Wishart matrices against a fixed matrix for ``n`` in ``{2, 5}``.
    """
    if n == 2:
        if beta == 1:
            return np.array([[2, 1], [1, -1/2]], dtype=np.float64)
        else:
            return np.array([
                [2, 1 + 3j],
                [1 - 3j, -1/2]])

    elif n == 5:
        if beta == 1:
            return np.array([
                [3, 1, 4, 6, 8],
                [1, -5, 4, 7, -1],
                [4, 4, 2, 1, 3],
                [6, 7, 1, 9, 0],
                [8, -1, 3, 0, -2]], dtype=np.float64)
        else:
            s3 = np.sqrt(3)
            return np.array([
                [3, 1 + 1j, 4 - 0.5j, 6 + s3*1j, 8 - 1j],
                [1 - 1j, -5, 4 + 3j, 7, -1],
                [4 + 0.5j, 4 - 3j, 2, 2 - 3j, 3],
                [6 - s3*1j, 7, 2 + 3j, 9, 0.2j],
                [8 + 1j, -1, 3, -0.2j, -2]])

    raise SpecError(f"no reference fixed matrix for n={n}")


def _reference_preset(expected_n):
    def make(n, beta):
        if n != expected_n:
            raise SpecError(
                    f"preset is {expected_n}-dimensional, requested n={n}")
        return reference_fixed_matrix(n, beta)

    return make


FIXED_MATRIX_PRESETS = {
        "reference-x2": _reference_preset(2),
        "reference-x5": _reference_preset(5),
        "paper-x2": _reference_preset(2),
        "paper-x5": _reference_preset(5),
        "maximally-mixed": lambda n, beta: np.eye(n) / n,
        "identity": lambda n, beta: np.eye(n),
        "zero": lambda n, beta: np.zeros((n, n)),
        }


def fixed_matrix_preset(name: str, n: int, beta: int) -> np.ndarray:
    try:
        make = FIXED_MATRIX_PRESETS[name]
    except KeyError:
        raise SpecError(
                f"unknown fixed matrix preset '{name}' (available: "
                f"{', '.join(FIXED_MATRIX_PRESETS)})") from None

    return make(n, beta)

# }}}


# {{{ verification grids

# offsets (m1 - n, m2 - n) of the pair experiments
PAIR_OFFSETS = ((0, 0), (0, 2), (1, 3), (3, 1))

GRID_KINDS = {
        "wishart-fixed": ExperimentKind.WISHART_VS_FIXED,
        "wishart-pair": ExperimentKind.WISHART_PAIR,
        "rho-fixed": ExperimentKind.RHO_VS_FIXED,
        "rho-pair": ExperimentKind.RHO_PAIR,
        "purity": ExperimentKind.PURITY,
        }


def verification_grid(name: str, trials: int = 100_000,
        seed: int = 1234) -> List[ExperimentSpec]:
    """Return the experiments of one verification grid: ``beta`` in
    ``{1, 2}``, ``n`` in ``{2, 5}``, and either ``m = n, ..., n+3`` or the
    pair offsets :data:`PAIR_OFFSETS`.

    Each experiment draws from its own stream family, keyed by the grid and
    the position of the experiment in it.
    """
    try:
        kind = GRID_KINDS[name]
    except KeyError:
        raise SpecError(f"unknown verification grid '{name}' (available: "
                f"{', '.join(GRID_KINDS)})") from None

    grid_index = list(GRID_KINDS).index(name)
    base = ExperimentSpec(
            kind=ExperimentKind.PURITY, params1=EnsembleParams(2, 2, 2),
            trials=trials, seed=seed)

    result = []
    for beta in (1, 2):
        for n in (2, 5):
            if kind.is_pair:
                cells = [
                        dict(params1=EnsembleParams(beta, n, n + a),
                            params2=EnsembleParams(beta, n, n + b))
                        for a, b in PAIR_OFFSETS]
            else:
                cells = [
                        dict(params1=EnsembleParams(beta, n, m))
                        for m in range(n, n + 4)]

            for cell in cells:
                if kind is ExperimentKind.WISHART_VS_FIXED:
                    cell["fixed_matrix"] = reference_fixed_matrix(n, beta)
                elif kind is ExperimentKind.RHO_VS_FIXED:
                    cell["fixed_matrix"] = np.eye(n) / n

                result.append(replace(
                    base, kind=kind,
                    stream_key=(grid_index, len(result)),
                    **cell))

    return result

# }}}

# vim: foldmethod=marker
