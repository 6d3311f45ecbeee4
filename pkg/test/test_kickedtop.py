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

import os

import numpy as np
import numpy.linalg as la
import pytest

from rdmat import DomainError, ParameterError, SpecError
from rdmat.analytic import d2_rho_fixed, d2_rho_pair, mean_purity
from rdmat.ensembles import EnsembleParams, purity
from rdmat.io import file_sha256, read_csv, read_json_record
from rdmat.kickedtop import (
        CKT_SETS, CKTP_SETS, KickedTopConfig, StateVector,
        angular_momentum_ops, build_floquet, coherent_state,
        collect_separated_pairs, distance_reports, evolve_and_collect,
        initial_state, kicked_top_distance_report, kicked_top_eigenvalues,
        named_config, single_top_floquet, single_top_pair_report,
        write_sample_stream)

import logging
logger = logging.getLogger(__name__)


def small_chaotic_config(**kwargs):
    kwargs.setdefault("transient", 20)
    kwargs.setdefault("samples", 40)
    return KickedTopConfig(2, 3, 7, 8, 1, **kwargs)


# {{{ angular momentum

def test_spin_half_ops():
    j_y, j_z = angular_momentum_ops(0.5)

    assert np.allclose(j_z, np.diag([0.5, -0.5]))
    assert np.allclose(j_y, np.array([[0, -1j], [1j, 0]]) / 2)


@pytest.mark.parametrize("j", [0.5, 1, 1.5, 4, 12, 15.5])
def test_angular_momentum_algebra(j):
    j_y, j_z = angular_momentum_ops(j)
    dim = int(2 * j) + 1
    m = j - np.arange(dim)

    assert j_y.shape == j_z.shape == (dim, dim)
    assert np.allclose(j_y, j_y.conj().T)

    # [J_y, J_z] = i J_x, and J_x has the same spectrum as J_z
    j_x = -1j * (j_y @ j_z - j_z @ j_y)
    assert np.allclose(j_x, j_x.conj().T)
    assert np.allclose(np.sort(la.eigvalsh(j_x)), np.sort(m))
    assert np.allclose(np.sort(la.eigvalsh(j_y)), np.sort(m))

    casimir = j_x @ j_x + j_y @ j_y + j_z @ j_z
    assert np.allclose(casimir, j * (j + 1) * np.eye(dim))


def test_invalid_spin():
    with pytest.raises(DomainError):
        angular_momentum_ops(0.3)
    with pytest.raises(DomainError):
        coherent_state(-1, 0, 0)

# }}}


# {{{ configuration

def test_config_validation():
    with pytest.raises(ParameterError):
        KickedTopConfig(0.3, 1, 7, 8, 1)
    with pytest.raises(ParameterError):
        KickedTopConfig(0, 1, 7, 8, 1)
    with pytest.raises(ParameterError):
        KickedTopConfig(1, 1, 7, 8, 1, stride=0)
    with pytest.raises(ParameterError):
        KickedTopConfig(1, 1, 7, 8, 1, samples=0)
    with pytest.raises(ParameterError):
        KickedTopConfig(1, 1, 7, 8, 1, transient=-1)

    cfg = KickedTopConfig(12, 15, 7, 8, 1)
    assert (cfg.n1, cfg.n2) == (25, 31)
    assert cfg.is_chaotic


def test_non_chaotic_warns():
    with pytest.warns(UserWarning):
        cfg = KickedTopConfig(1, 1, 3, 8, 1)
    assert not cfg.is_chaotic
    assert cfg.is_coupled
    assert len(cfg.regime_warnings()) == 1


def test_uncoupled_warns():
    with pytest.warns(UserWarning, match="uncoupled"):
        cfg = KickedTopConfig(1, 1, 7, 7, 0)
    assert cfg.is_chaotic
    assert not cfg.is_coupled

    assert small_chaotic_config().regime_warnings() == []


def test_config_json():
    cfg = small_chaotic_config(stride=3)
    assert KickedTopConfig.from_json_dict(cfg.to_json_dict()) == cfg

    d = cfg.to_json_dict()
    d["kick"] = 3
    with pytest.raises(SpecError):
        KickedTopConfig.from_json_dict(d)


def test_named_config():
    cfg = named_config("CKT I", 12, 15)
    assert (cfg.k1, cfg.k2, cfg.epsilon) == CKT_SETS["CKT I"]

    cfg_a, cfg_b = named_config("CKTP II", 12, (15, 17), samples=10)
    (ka1, ka2, eps_a), (kb1, kb2, eps_b) = CKTP_SETS["CKTP II"]
    assert (cfg_a.k1, cfg_a.k2, cfg_a.epsilon) == (ka1, ka2, eps_a)
    assert (cfg_b.k1, cfg_b.k2, cfg_b.epsilon) == (kb1, kb2, eps_b)
    assert (cfg_a.n2, cfg_b.n2) == (31, 35)
    assert cfg_a.samples == cfg_b.samples == 10
    assert initial_state(cfg_a).amplitudes.shape == (25 * 31,)
    assert cfg_a.initial_theta1 != cfg_b.initial_theta1

    with pytest.raises(SpecError):
        named_config("CKT IV", 12, 15)

# }}}


# {{{ states

@pytest.mark.parametrize("j", [0.5, 2, 7.5])
@pytest.mark.parametrize(("theta", "phi"), [(0, 0), (0.89, 0.63), (2.5, 4)])
def test_coherent_state(j, theta, phi):
    _, j_z = angular_momentum_ops(j)
    psi = coherent_state(j, theta, phi)

    assert abs(la.norm(psi) - 1) < 1e-12
    expectation = np.vdot(psi, j_z @ psi).real
    assert abs(expectation - j * np.cos(theta)) < 1e-12 * max(1, j)

    if theta == 0:
        assert abs(abs(psi[0]) - 1) < 1e-15


def test_state_vector():
    with pytest.raises(DomainError):
        StateVector(np.array([1.0, 1.0]))

    psi = StateVector.normalized([3, 4j])
    assert psi.dim == 2
    assert abs(la.norm(psi.amplitudes) - 1) < 1e-15

# }}}


# {{{ Floquet operator

def test_floquet_unitary_large():
    cfg = named_config("CKT I", 12, 15)
    u = build_floquet(cfg)

    assert u.shape == (775, 775)
    assert np.max(np.abs(u.conj().T @ u - np.eye(775))) < 1e-10


def test_spin_half_rotation_period():
    with pytest.warns(UserWarning):
        cfg = KickedTopConfig(0.5, 0.5, 0, 0, 0)
    u = build_floquet(cfg)

    # four quarter turns about y multiply the spinor by -1 on each top
    u4 = la.matrix_power(u, 4)
    assert abs(abs(u4[0, 0]) - 1) < 1e-12
    assert np.max(np.abs(u4 - u4[0, 0] * np.eye(4))) < 1e-12


def test_uncoupled_floquet_factorizes():
    with pytest.warns(UserWarning):
        cfg = KickedTopConfig(1, 1.5, 3, 4, 0)
    u = build_floquet(cfg)

    expected = np.kron(single_top_floquet(1, 3), single_top_floquet(1.5, 4))
    assert np.max(np.abs(u - expected)) < 1e-14

# }}}


# {{{ trajectories

def test_trajectory_states():
    cfg = small_chaotic_config()
    states = list(evolve_and_collect(cfg))

    assert len(states) == cfg.samples
    for rho in states:
        assert rho.dim == 5
        assert abs(np.trace(rho.data) - 1) < 1e-12

    again = list(evolve_and_collect(cfg))
    assert all(np.array_equal(a.data, b.data) for a, b in zip(states, again))


def test_uncoupled_tops_stay_pure():
    with pytest.warns(UserWarning):
        cfg = KickedTopConfig(2, 3, 3, 4, 0, transient=5, samples=30)

    for rho in evolve_and_collect(cfg):
        assert abs(rho.purity() - 1) < 1e-9


def test_stride():
    cfg = small_chaotic_config(samples=30)
    strided = small_chaotic_config(samples=10, stride=3)
    floquet = build_floquet(cfg)

    states = list(evolve_and_collect(cfg, floquet=floquet))
    strided_states = list(evolve_and_collect(strided, floquet=floquet))

    for i, rho in enumerate(strided_states):
        assert np.array_equal(rho.data, states[3 * i + 2].data)


def test_separated_pairs():
    separation = 5
    cfg = small_chaotic_config(samples=30)
    longer = small_chaotic_config(samples=30 + separation)
    floquet = build_floquet(cfg)

    states = list(evolve_and_collect(longer, floquet=floquet))
    pairs = list(collect_separated_pairs(cfg, separation, floquet=floquet))

    assert len(pairs) == cfg.samples
    for k, (rho_a, rho_b) in enumerate(pairs):
        assert np.array_equal(rho_a.data, states[k].data)
        assert np.array_equal(rho_b.data, states[k + separation].data)

    with pytest.raises(ParameterError):
        list(collect_separated_pairs(cfg, 0))


def test_kicked_top_eigenvalues():
    cfg = small_chaotic_config()
    eigenvalues = kicked_top_eigenvalues(cfg)

    assert eigenvalues.shape == (cfg.samples * cfg.n1,)
    assert np.all(eigenvalues > -1e-12)
    assert abs(np.sum(eigenvalues) - cfg.samples) < 1e-10

# }}}


# {{{ distance reports

def test_distance_report_fixed():
    cfg = small_chaotic_config()
    sigma = np.eye(5) / 5

    report = kicked_top_distance_report(cfg, sigma=sigma)
    assert report.analytic == d2_rho_fixed(EnsembleParams(2, 5, 7), purity(sigma))
    assert report.empirical.count == cfg.samples
    assert report.notes == ()

    expected = np.mean([
        np.sum(np.abs(rho.data - sigma)**2) for rho in evolve_and_collect(cfg)])
    assert abs(report.empirical.mean - expected) < 1e-12


def test_distance_report_pair():
    cfg_a = small_chaotic_config()
    cfg_b = KickedTopConfig(2, 4, 8, 7, 0.5, transient=20, samples=40)

    report = kicked_top_distance_report(cfg_a, cfg_b)
    assert report.analytic == d2_rho_pair(2, 5, 7, 9)
    assert report.empirical.count == 40

    reports = distance_reports(
            [(cfg_a, cfg_b, None), (cfg_a, None, np.eye(5) / 5)], nworkers=2)
    assert reports[0].empirical == report.empirical
    assert reports[1].analytic == d2_rho_fixed(
            EnsembleParams(2, 5, 7), purity(np.eye(5) / 5))


def test_distance_report_errors():
    cfg = small_chaotic_config()

    with pytest.raises(SpecError):
        kicked_top_distance_report(cfg)
    with pytest.raises(SpecError):
        kicked_top_distance_report(cfg, cfg, np.eye(5) / 5)
    with pytest.raises(SpecError):
        kicked_top_distance_report(cfg, sigma=np.eye(3) / 3)
    with pytest.raises(SpecError):
        kicked_top_distance_report(cfg, KickedTopConfig(1, 3, 7, 8, 1))
    with pytest.raises(SpecError):
        kicked_top_distance_report(cfg, small_chaotic_config(samples=41))


def test_regime_notes():
    with pytest.warns(UserWarning):
        cfg = KickedTopConfig(2, 3, 3, 4, 0.5, transient=5, samples=10)

    report = single_top_pair_report(cfg, separation=3)
    assert report.empirical.count == 10
    assert any("chaotic" in note for note in report.notes)


@pytest.mark.parametrize(("k1", "k2", "epsilon", "expected"), [
    (7, 7, 0, ["uncoupled"]),
    (3, 4, 0.5, ["chaotic regime"]),
    (3, 4, 0, ["chaotic regime", "uncoupled"]),
    ])
def test_regime_notes_against_pure_state(k1, k2, epsilon, expected):
    with pytest.warns(UserWarning):
        cfg = KickedTopConfig(2, 2, k1, k2, epsilon, transient=5, samples=20)

    sigma = np.diag([1.0, 0, 0, 0, 0])
    report = kicked_top_distance_report(cfg, sigma=sigma)

    regime_notes = report.notes[-len(expected):]
    assert regime_notes == tuple(cfg.regime_warnings())
    for note, fragment in zip(regime_notes, expected):
        assert fragment in note

# }}}


# {{{ export

def test_write_sample_stream(tmp_path):
    cfg = small_chaotic_config(samples=7)
    path = str(tmp_path / "stream" / "samples.csv")

    metadata_path = write_sample_stream(cfg, path)
    assert metadata_path == path + ".json"

    header, rows = read_csv(path)
    assert header[:3] == ["sample", "re_0_0", "im_0_0"]
    assert len(header) == 1 + 2 * 25
    assert len(rows) == 7

    record = read_json_record(metadata_path)
    assert record["results"]["sha256"] == file_sha256(path)
    assert KickedTopConfig.from_json_dict(record["config"]) == cfg

    first = next(iter(evolve_and_collect(cfg)))
    assert float(rows[0][1]) == first.data[0, 0].real

    with pytest.raises(FileExistsError):
        write_sample_stream(cfg, path)
    os.remove(path)
    with pytest.raises(FileExistsError):
        write_sample_stream(cfg, path)

    write_sample_stream(cfg, path, overwrite=True)

# }}}


# {{{ full-size runs

@pytest.mark.slow
@pytest.mark.parametrize("name", list(CKT_SETS))
def test_kicked_top_matches_random_states(name):
    cfg = named_config(name, 12, 15)
    params = EnsembleParams(2, 25, 31)
    floquet = build_floquet(cfg)

    states = list(evolve_and_collect(cfg, floquet=floquet))
    purities = np.array([rho.purity() for rho in states])
    assert abs(np.mean(purities) / mean_purity(params) - 1) < 0.02

    # stationarity: both halves of the trajectory agree
    first, second = purities[:len(purities)//2], purities[len(purities)//2:]
    se = np.sqrt(np.var(first, ddof=1) / len(first)
            + np.var(second, ddof=1) / len(second))
    # successive states are correlated, so allow a generous margin
    assert abs(np.mean(first) - np.mean(second)) <= 10 * se

    report = kicked_top_distance_report(cfg, sigma=np.eye(25) / 25)
    logger.info("%s: %s", name, report)
    assert abs(report.relative_diff_percent) < 1


@pytest.mark.slow
@pytest.mark.parametrize("stride", [1, 10])
def test_kicked_top_stride_insensitive(stride):
    cfg = named_config("CKT I", 12, 15, stride=stride)
    report = kicked_top_distance_report(cfg, sigma=np.eye(25) / 25)

    logger.info("stride %d: %s", stride, report)
    assert abs(report.relative_diff_percent) < 1


@pytest.mark.slow
@pytest.mark.parametrize("name", list(CKTP_SETS))
def test_kicked_top_pairs_match_random_states(name):
    cfg_a, cfg_b = named_config(name, 12, 15)
    report = kicked_top_distance_report(cfg_a, cfg_b)
    logger.info("%s: %s", name, report)
    assert abs(report.relative_diff_percent) < 1

# }}}


if __name__ == "__main__":
    import sys
    if len(sys.argv) > 1:
        exec(sys.argv[1])
    else:
        from pytest import main
        main([__file__])

# vim: fdm=marker
