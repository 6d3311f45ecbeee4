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

from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, fields, replace
from typing import (
        Any, Dict, Iterator, List, Optional, Sequence, Tuple, Union)
from warnings import warn

import numpy as np
import numpy.linalg as la
from scipy.special import binom

from pytools import ProcessLogger, memoize

from rdmat import ConvergenceFailure, DomainError, ParameterError, SpecError
from rdmat.analytic import d2_rho_fixed, d2_rho_pair
from rdmat.config import DEFAULT_NUMERICS, NumericsConfig
from rdmat.ensembles import DensityMatrix, EnsembleParams, purity
from rdmat.linalg import (
        hs_distance_sq, reduced_state_from_vector, unitary_from_hermitian)
from rdmat.montecarlo import ComparisonReport, SummaryStat, compare

import logging
logger = logging.getLogger(__name__)

__doc__ = """
.. currentmodule:: rdmat.kickedtop

Two spins :math:`j_1, j_2` are kicked with strengths :math:`k_1, k_2` and
coupled through :math:`J_{z_1} \\otimes J_{z_2}` with strength
:math:`\\epsilon`. In the chaotic regime, the reduced states of the first top
along a trajectory are distributed like random density matrices with
``n = 2 j_1 + 1`` and ``m = 2 j_2 + 1`` (``beta = 2``).

Operators are written in the :math:`J_z` eigenbasis, ordered
:math:`m = j, j-1, \\dots, -j`.

.. autoclass:: KickedTopConfig
.. autoclass:: StateVector

.. autofunction:: angular_momentum_ops
.. autofunction:: build_floquet
.. autofunction:: initial_state
.. autofunction:: evolve_and_collect
.. autofunction:: collect_separated_pairs
.. autofunction:: kicked_top_eigenvalues
.. autofunction:: kicked_top_distance_report
.. autofunction:: single_top_pair_report
.. autofunction:: distance_reports
.. autofunction:: write_sample_stream

Named parameter sets
--------------------

.. autodata:: CKT_SETS
.. autodata:: CKTP_SETS
.. autofunction:: named_config
"""


CHAOTIC_KICK_THRESHOLD = 6


# {{{ configuration

def _check_spin(j: float) -> None:
    twice_j = 2 * j
    if int(twice_j) != twice_j or twice_j < 0:
        raise DomainError(f"spin must be a nonnegative half-integer, got {j}")


@dataclass(frozen=True)
class KickedTopConfig:
    """Parameters of a coupled kicked top trajectory.

    .. attribute:: j1
    .. attribute:: j2
    .. attribute:: k1
    .. attribute:: k2
    .. attribute:: epsilon
    .. attribute:: transient

        Number of initial iterations that are discarded.

    .. attribute:: samples
    .. attribute:: stride

        Iterations between retained samples.

    .. attribute:: initial_theta1
    .. attribute:: initial_phi1
    .. attribute:: initial_theta2
    .. attribute:: initial_phi2

    .. autoattribute:: n1
    .. autoattribute:: n2
    .. automethod:: regime_warnings

    .. automethod:: to_json_dict
    .. automethod:: from_json_dict
    """

    j1: float
    j2: float
    k1: float
    k2: float
    epsilon: float
    transient: int = 500
    samples: int = 5000
    stride: int = 1
    initial_theta1: float = 0.89
    initial_phi1: float = 0.63
    initial_theta2: float = 0.45
    initial_phi2: float = 0.16

    def __post_init__(self):
        for j in (self.j1, self.j2):
            try:
                _check_spin(j)
            except DomainError as exc:
                raise ParameterError(str(exc)) from exc
            if j < 0.5:
                raise ParameterError(f"spin must be at least 1/2, got {j}")

        if self.transient < 0:
            raise ParameterError(
                    f"transient must be nonnegative, got {self.transient}")
        if self.samples < 1:
            raise ParameterError(
                    f"samples must be positive, got {self.samples}")
        if self.stride < 1:
            raise ParameterError(f"stride must be positive, got {self.stride}")

        for message in self.regime_warnings():
            logger.warning("%s", message)
            warn(f"{message}; reduced states need not follow the random "
                    "density matrix ensemble", stacklevel=3)

    @property
    def n1(self) -> int:
        """Dimension of the first top, the one that is kept."""
        return int(2 * self.j1) + 1

    @property
    def n2(self) -> int:
        """Dimension of the second top, the one that is traced out."""
        return int(2 * self.j2) + 1

    @property
    def is_chaotic(self) -> bool:
        return min(self.k1, self.k2) >= CHAOTIC_KICK_THRESHOLD

    @property
    def is_coupled(self) -> bool:
        return self.epsilon != 0

    def regime_warnings(self) -> List[str]:
        """Return the reasons why the dynamics are not expected to be ergodic."""
        result = []
        if not self.is_chaotic:
            result.append(f"kick strengths ({self.k1}, {self.k2}) are below "
                    f"the chaotic regime k >= {CHAOTIC_KICK_THRESHOLD}")
        if not self.is_coupled:
            result.append("the tops are uncoupled (epsilon=0), so the states "
                    "stay unentangled and the dynamics are not ergodic")
        return result

    def to_json_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_json_dict(cls, d: Dict[str, Any]) -> "KickedTopConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise SpecError(
                    f"unknown kicked top keys: {', '.join(sorted(unknown))}")
        return cls(**d)


# (k1, k2, epsilon)
CKT_SETS: Dict[str, Tuple[float, float, float]] = {
        "CKT I": (7, 8, 1),
        "CKT II": (6, 7, 0.75),
        "CKT III": (6, 9, 0.5),
        }

# ((k1, k2, epsilon) of top A, (k1, k2, epsilon) of top B)
CKTP_SETS: Dict[str, Tuple[Tuple[float, float, float], ...]] = {
        "CKTP I": ((8, 7, 0.5), (7, 8, 1)),
        "CKTP II": ((6, 6, 0.8), (7, 8, 0.75)),
        "CKTP III": ((7, 7, 0.75), (8, 8, 0.75)),
        }


def named_config(name: str, j1: float, j2: float,
        **kwargs: Any) -> Union[KickedTopConfig,
            Tuple[KickedTopConfig, KickedTopConfig]]:
    """Return the configuration of a named single-top set, or the two
    configurations of a named pair set. *kwargs* are passed on to
    :class:`KickedTopConfig`; for pair sets, *j2* may be a tuple giving the
    second spin of each top.
    """
    if name in CKT_SETS:
        k1, k2, epsilon = CKT_SETS[name]
        return KickedTopConfig(j1, j2, k1, k2, epsilon, **kwargs)

    if name in CKTP_SETS:
        j2_a, j2_b = j2 if isinstance(j2, tuple) else (j2, j2)
        (ka1, ka2, eps_a), (kb1, kb2, eps_b) = CKTP_SETS[name]
        # top B starts from the swapped angles
        cfg_b = KickedTopConfig(j1, j2_b, kb1, kb2, eps_b, **kwargs)
        cfg_b = replace(cfg_b,
                initial_theta1=cfg_b.initial_theta2,
                initial_phi1=cfg_b.initial_phi2,
                initial_theta2=cfg_b.initial_theta1,
                initial_phi2=cfg_b.initial_phi1)
        return (KickedTopConfig(j1, j2_a, ka1, ka2, eps_a, **kwargs), cfg_b)

    raise SpecError(f"unknown parameter set '{name}' (available: "
            f"{', '.join(list(CKT_SETS) + list(CKTP_SETS))})")

# }}}


# {{{ states

@dataclass(frozen=True, eq=False)
class StateVector:
    """
    .. attribute:: amplitudes

        Components in the product :math:`J_z` basis.

    .. automethod:: normalized
    """

    amplitudes: np.ndarray

    def __post_init__(self):
        norm = la.norm(self.amplitudes)
        if abs(norm - 1) > 1e-10:
            raise DomainError(f"state vector has norm {norm!r}")

    @property
    def dim(self) -> int:
        return len(self.amplitudes)

    @classmethod
    def normalized(cls, amplitudes: np.ndarray) -> "StateVector":
        amplitudes = np.asarray(amplitudes, dtype=np.complex128)
        return cls(amplitudes / la.norm(amplitudes))


def coherent_state(j: float, theta: float, phi: float) -> np.ndarray:
    """Return the spin coherent state :math:`|\\theta, \\phi\\rangle`, the
    highest-weight state rotated to polar angle *theta* and azimuth *phi*.
    """
    _check_spin(j)
    m = -np.arange(-j, j + 1)
    return (
            np.sqrt(binom(2 * j, j - m))
            * np.cos(theta / 2)**(j + m)
            * np.sin(theta / 2)**(j - m)
            * np.exp(1j * (j - m) * phi))


def initial_state(cfg: KickedTopConfig) -> StateVector:
    """Return the product of the coherent states of both tops."""
    return StateVector.normalized(np.kron(
        coherent_state(cfg.j1, cfg.initial_theta1, cfg.initial_phi1),
        coherent_state(cfg.j2, cfg.initial_theta2, cfg.initial_phi2)))

# }}}


# {{{ operators

@memoize
def angular_momentum_ops(j: float) -> Tuple[np.ndarray, np.ndarray]:
    """Return :math:`(J_y, J_z)` for spin *j*.

    :raises DomainError: unless ``2 j`` is a nonnegative integer.
    """
    _check_spin(j)

    m = -np.arange(-j, j + 1)
    # <m+1|J_+|m> sits one above the diagonal
    j_plus = np.diag(np.sqrt(j * (j + 1) - m[1:] * (m[1:] + 1)), k=1)
    j_minus = j_plus.T

    j_y = (j_plus - j_minus) / 2j
    j_z = np.diag(m)
    return j_y, j_z


def single_top_floquet(j: float, k: float,
        numerics: NumericsConfig = DEFAULT_NUMERICS) -> np.ndarray:
    """Return :math:`\\exp(-i(\\frac{\\pi}{2} J_y + \\frac{k}{2j} J_z^2))`,
    a single exponential of the combined generator.
    """
    j_y, j_z = angular_momentum_ops(j)
    generator = np.pi / 2 * j_y + k / (2 * j) * (j_z @ j_z)
    return unitary_from_hermitian(generator, 1, numerics)


def build_floquet(cfg: KickedTopConfig,
        numerics: NumericsConfig = DEFAULT_NUMERICS) -> np.ndarray:
    """Return the one-period unitary :math:`(U_1 \\otimes U_2) U_{12}`.

    :raises ConvergenceFailure: if the eigensolver fails or the result
        deviates from unitarity by more than
        :attr:`~rdmat.config.NumericsConfig.reconstruction_tol`.
    """
    with ProcessLogger(logger,
            f"building {cfg.n1 * cfg.n2}-dimensional Floquet operator"):
        u1 = single_top_floquet(cfg.j1, cfg.k1, numerics)
        u2 = single_top_floquet(cfg.j2, cfg.k2, numerics)

        # U_12 is diagonal in the product basis
        _, jz1 = angular_momentum_ops(cfg.j1)
        _, jz2 = angular_momentum_ops(cfg.j2)
        coupling = np.outer(np.diag(jz1), np.diag(jz2)).ravel()
        u12 = np.exp(-1j * cfg.epsilon / np.sqrt(cfg.j1 * cfg.j2) * coupling)

        u = np.kron(u1, u2) * u12[np.newaxis, :]

    defect = np.max(np.abs(u.conj().T @ u - np.eye(len(u))))
    if defect > numerics.reconstruction_tol:
        raise ConvergenceFailure(
                f"Floquet operator deviates from unitarity by {defect:.3e}")

    return u

# }}}


# {{{ trajectories

def _trajectory(cfg: KickedTopConfig, floquet: Optional[np.ndarray],
        numerics: NumericsConfig) -> Iterator[np.ndarray]:
    """Yield the state after each iteration following the transient."""
    if floquet is None:
        floquet = build_floquet(cfg, numerics)

    psi = initial_state(cfg).amplitudes
    for _ in range(cfg.transient):
        psi = floquet @ psi
        psi /= la.norm(psi)

    while True:
        psi = floquet @ psi
        psi /= la.norm(psi)
        yield psi


def _reduced(cfg: KickedTopConfig, psi: np.ndarray,
        numerics: NumericsConfig) -> DensityMatrix:
    return DensityMatrix.from_array(
            reduced_state_from_vector(psi, cfg.n1, cfg.n2), numerics=numerics)


def evolve_and_collect(cfg: KickedTopConfig,
        floquet: Optional[np.ndarray] = None,
        numerics: NumericsConfig = DEFAULT_NUMERICS
        ) -> Iterator[DensityMatrix]:
    """Yield ``cfg.samples`` reduced states of the first top, one every
    ``cfg.stride`` iterations after ``cfg.transient`` iterations.

    :arg floquet: a precomputed :func:`build_floquet` result for *cfg*.
    """
    trajectory = _trajectory(cfg, floquet, numerics)
    for _ in range(cfg.samples):
        for _ in range(cfg.stride):
            psi = next(trajectory)
        yield _reduced(cfg, psi, numerics)


def collect_separated_pairs(cfg: KickedTopConfig, separation: int = 20,
        floquet: Optional[np.ndarray] = None,
        numerics: NumericsConfig = DEFAULT_NUMERICS
        ) -> Iterator[Tuple[DensityMatrix, DensityMatrix]]:
    """Yield ``cfg.samples`` pairs of reduced states of a single trajectory
    that lie *separation* iterations apart. Consecutive pairs start
    ``cfg.stride`` iterations apart.
    """
    if separation < 1:
        raise ParameterError(
                f"separation must be positive, got {separation}")

    buffer: deque = deque(maxlen=separation + 1)
    trajectory = _trajectory(cfg, floquet, numerics)
    for iteration in range(separation + cfg.samples * cfg.stride):
        buffer.append(_reduced(cfg, next(trajectory), numerics))

        offset = iteration - separation
        if offset >= 0 and offset % cfg.stride == 0:
            yield buffer[0], buffer[-1]


def kicked_top_eigenvalues(cfg: KickedTopConfig,
        numerics: NumericsConfig = DEFAULT_NUMERICS) -> np.ndarray:
    """Return the eigenvalues of all sampled reduced states, pooled into one
    array.
    """
    with ProcessLogger(logger, f"sampling {cfg.samples} kicked top states"):
        return np.concatenate([
            rho.eigenvalues()
            for rho in evolve_and_collect(cfg, numerics=numerics)])

# }}}


# {{{ comparison with random density matrices

def _with_regime_notes(report: ComparisonReport,
        cfgs: Sequence[KickedTopConfig]) -> ComparisonReport:
    notes = list(report.notes)
    for cfg in cfgs:
        notes.extend(cfg.regime_warnings())
    return replace(report, notes=tuple(notes))


def kicked_top_distance_report(cfg_a: KickedTopConfig,
        cfg_b: Optional[KickedTopConfig] = None,
        sigma: Optional[Union[DensityMatrix, np.ndarray]] = None,
        numerics: NumericsConfig = DEFAULT_NUMERICS) -> ComparisonReport:
    """Compare the mean squared Hilbert-Schmidt distance of kicked top reduced
    states with its random density matrix value.

    With *sigma*, the states of *cfg_a* are compared with the fixed state
    *sigma*. With *cfg_b*, the states of two independent trajectories are
    compared sample by sample.

    :raises SpecError: unless exactly one of *cfg_b* and *sigma* is given,
        or if the kept tops of *cfg_a* and *cfg_b* differ in dimension.
    """
    if (cfg_b is None) == (sigma is None):
        raise SpecError("give exactly one of a second kicked top or a fixed "
                "density matrix")

    if sigma is not None:
        if not isinstance(sigma, DensityMatrix):
            sigma = DensityMatrix.from_array(sigma, numerics=numerics)
        if sigma.dim != cfg_a.n1:
            raise SpecError(f"fixed state has dimension {sigma.dim}, "
                    f"kicked top has {cfg_a.n1}")

        with ProcessLogger(logger, "kicked top distances to a fixed state"):
            values = np.array([
                hs_distance_sq(rho.data, sigma.data)
                for rho in evolve_and_collect(cfg_a, numerics=numerics)])
        analytic = d2_rho_fixed(
                EnsembleParams(2, cfg_a.n1, cfg_a.n2), purity(sigma))
        cfgs = [cfg_a]

    else:
        if cfg_a.n1 != cfg_b.n1:
            raise SpecError(
                    "kicked top pairs need a common dimension, got "
                    f"{cfg_a.n1} and {cfg_b.n1}")
        if cfg_a.samples != cfg_b.samples:
            raise SpecError("kicked top pairs need equal sample counts")

        with ProcessLogger(logger, "kicked top pair distances"):
            values = np.array([
                hs_distance_sq(rho_a.data, rho_b.data)
                for rho_a, rho_b in zip(
                    evolve_and_collect(cfg_a, numerics=numerics),
                    evolve_and_collect(cfg_b, numerics=numerics))])
        analytic = d2_rho_pair(2, cfg_a.n1, cfg_a.n2, cfg_b.n2)
        cfgs = [cfg_a, cfg_b]

    report = _with_regime_notes(
            compare(SummaryStat.from_values(values), analytic), cfgs)
    logger.info("kicked top: mean %.6g, expected %.6g (%.3g%%)",
            report.empirical.mean, analytic,
            report.relative_diff_percent)
    return report


def single_top_pair_report(cfg: KickedTopConfig, separation: int = 20,
        numerics: NumericsConfig = DEFAULT_NUMERICS) -> ComparisonReport:
    """Like the pair mode of :func:`kicked_top_distance_report`, but with both
    states of a pair taken from one trajectory, *separation* iterations apart.
    """
    values = np.array([
        hs_distance_sq(rho_a.data, rho_b.data)
        for rho_a, rho_b in collect_separated_pairs(
            cfg, separation, numerics=numerics)])
    analytic = d2_rho_pair(2, cfg.n1, cfg.n2, cfg.n2)

    return _with_regime_notes(
            compare(SummaryStat.from_values(values), analytic), [cfg])


def distance_reports(
        jobs: Sequence[Tuple[KickedTopConfig, Optional[KickedTopConfig],
            Optional[np.ndarray]]],
        nworkers: Optional[int] = None,
        numerics: NumericsConfig = DEFAULT_NUMERICS) -> List[ComparisonReport]:
    """Run :func:`kicked_top_distance_report` for each ``(cfg_a, cfg_b,
    sigma)`` in *jobs* on a thread pool, returning reports in job order.
    """
    with ThreadPoolExecutor(max_workers=nworkers) as executor:
        futures = [
                executor.submit(kicked_top_distance_report,
                    cfg_a, cfg_b, sigma, numerics)
                for cfg_a, cfg_b, sigma in jobs]
        return [future.result() for future in futures]

# }}}


# {{{ export

def write_sample_stream(cfg: KickedTopConfig, path: str,
        overwrite: bool = False,
        numerics: NumericsConfig = DEFAULT_NUMERICS) -> str:
    """Write the reduced states of a trajectory to the CSV file *path*, one
    row per sample with the real and imaginary parts of every entry, and a
    JSON metadata file next to it.

    :returns: the path of the metadata file.
    :raises FileExistsError: if either file exists and *overwrite* is not set.
    """
    from rdmat.io import check_writable, file_sha256, write_csv, write_json_record

    n = cfg.n1
    header = ["sample"] + [
            f"{part}_{row}_{col}"
            for row in range(n) for col in range(n)
            for part in ("re", "im")]

    def rows():
        samples = evolve_and_collect(cfg, numerics=numerics)
        for isample, rho in enumerate(samples):
            pairs = np.stack([rho.data.real, rho.data.imag], axis=-1)
            yield [isample] + list(pairs.ravel())

    metadata_path = f"{path}.json"
    check_writable([path, metadata_path], overwrite)

    write_csv(path, header, rows(), overwrite=True)
    write_json_record(metadata_path,
            config=cfg.to_json_dict(),
            results={"csv": path, "sha256": file_sha256(path),
                "rows": cfg.samples, "columns": len(header)},
            overwrite=True)

    return metadata_path

# }}}

# vim: foldmethod=marker
