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

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, TextIO

import numpy as np

from pytools import log_process

import rdmat
from rdmat import (
        ConvergenceFailure, DegenerateSample, DomainError, HermiticityViolation,
        InvalidPurity, ParameterError, ShapeError, SpecError,
        UnsupportedParameter)
from rdmat.analytic import (
        SpectrumSummary, asymptotic_report, d2_rho_fixed, d2_rho_pair,
        d2_wishart_fixed, d2_wishart_pair, distance_table_rows, eig_density,
        eig_density_bin_masses, eig_density_curve, eig_density_moment,
        log_norm_constants, log_partition_ratio_check, mean_purity, mean_tr_w2,
        mean_tr_wx)
from rdmat.ensembles import EnsembleParams, purity
from rdmat.io import (
        check_writable, read_json_record, write_csv, write_json_record)
from rdmat.montecarlo import (
        GRID_KINDS, ComparisonReport, ExperimentKind, ExperimentSpec,
        analytic_value, compare, fixed_matrix_preset, histogram_l1_distance,
        run_experiment, verification_grid)

import logging
logger = logging.getLogger(__name__)

__doc__ = """
.. currentmodule:: rdmat.cli

Usage::

    python -m rdmat formula --eq d2-rho-pair --beta 2 --n 2 --m1 2 --m2 2
    python -m rdmat mc --kind RhoVsFixed --beta 2 --n 2 --m 2 \\
        --fixed maximally-mixed --trials 100000
    python -m rdmat eigdensity --beta 2 --n 25 --m 29 --grid 2000
    python -m rdmat kickedtop --set "CKT I" --j1 12 --j2 15
    python -m rdmat reproduce --trials 100000 --seed 1234

Artifacts are written to ``--output-dir``, which defaults to the value of the
environment variable ``RDMAT_OUTPUT_DIR`` or the current directory. Every
JSON artifact holds the resolved run configuration under ``config``; passing
that file to ``--config`` repeats the run.

Exit status is 0 on success, 2 for invalid input (including existing output
files without ``--overwrite``), and 3 for numerical failures. Failures print
a JSON object with the keys ``error`` and ``message`` to standard error.

.. autoclass:: RunConfig
.. autodata:: VERIFICATIONS
.. autodata:: NUMBERED_CHECKS
.. autofunction:: dispatch
.. autofunction:: reproduce_all
.. autofunction:: main
"""

DEFAULT_SEED = 1234

COMPARISON_COLUMNS = (
        "beta", "n", "m1", "m2",
        "analytic", "empirical", "std_error", "z", "relative_diff_percent")
EIG_DENSITY_COLUMNS = ("mu", "density")
HISTOGRAM_COLUMNS = (
        "bin_lo", "bin_hi", "count",
        "empirical_probability", "analytic_probability")
DISTANCE_TABLE_COLUMNS = ("matrices", "expression", "value")

FORMULAS = (
        "mean-tr-w2", "mean-tr-wx", "d2-wishart-fixed", "d2-wishart-pair",
        "mean-purity", "d2-rho-fixed", "d2-rho-pair", "log-norm-constants")

PARAMETER_KEYS = {
        "formula": {"eq", "beta", "n", "m", "m1", "m2", "fixed", "sigma",
            "purity_sigma"},
        "mc": {"experiment"},
        "eigdensity": {"beta", "n", "m", "grid"},
        "kickedtop": {"mode", "top_a", "top_b", "sigma", "separation",
            "export_samples"},
        "reproduce": {"trials", "seed", "checks", "skip_dynamics",
            "kicked_samples", "kicked_transient"},
        }

KICKED_TOP_CHECKS = ("kicked-spectrum", "kicked-fixed", "kicked-pair")
VERIFICATIONS = tuple(GRID_KINDS) + KICKED_TOP_CHECKS

# numbered aliases accepted by ``reproduce --figure``
NUMBERED_CHECKS = {
        "1": "wishart-fixed", "2": "wishart-pair", "3": "rho-fixed",
        "4": "rho-pair", "5": "kicked-spectrum", "6": "kicked-fixed",
        "7": "kicked-pair",
        }


# {{{ run configuration

@dataclass(frozen=True)
class RunConfig:
    """
    .. attribute:: command

        One of ``formula``, ``mc``, ``eigdensity``, ``kickedtop``,
        ``reproduce``.

    .. attribute:: parameters

        Fully resolved parameters of the command. Unknown keys are rejected.

    .. attribute:: output_dir
    .. attribute:: name

        Base name of the artifacts, defaults to :attr:`command`.

    .. attribute:: format

        ``csv`` writes a CSV table and a JSON record, ``json`` writes the JSON
        record only.

    .. automethod:: to_json_dict
    .. automethod:: from_json_dict
    """

    command: str
    parameters: Dict[str, Any] = field(default_factory=dict)
    output_dir: str = "."
    name: Optional[str] = None
    format: str = "csv"

    def __post_init__(self):
        if self.command not in PARAMETER_KEYS:
            raise SpecError(f"unknown command '{self.command}'")
        if self.format not in ("csv", "json"):
            raise SpecError(f"unknown output format '{self.format}'")

        unknown = set(self.parameters) - PARAMETER_KEYS[self.command]
        if unknown:
            raise SpecError(f"unknown parameters for '{self.command}': "
                    f"{', '.join(sorted(unknown))}")

    def artifact_path(self, suffix: str) -> str:
        return os.path.join(self.output_dir,
                f"{self.name or self.command}{suffix}")

    def to_json_dict(self) -> Dict[str, Any]:
        return {
                "command": self.command,
                "parameters": self.parameters,
                "name": self.name,
                "format": self.format,
                }

    @classmethod
    def from_json_dict(cls, d: Dict[str, Any], output_dir: str) -> "RunConfig":
        unknown = set(d) - {"command", "parameters", "name", "format"}
        if unknown:
            raise SpecError(
                    f"unknown run configuration keys: {', '.join(sorted(unknown))}")
        if "command" not in d:
            raise SpecError("run configuration lacks a command")

        return cls(
                command=d["command"],
                parameters=dict(d.get("parameters", {})),
                output_dir=output_dir,
                name=d.get("name"),
                format=d.get("format", "csv"))

# }}}


# {{{ helpers

def _comparison_row(beta: int, n: int, m1: int, m2: Optional[int],
        report: ComparisonReport) -> List[Any]:
    return [
            beta, n, m1, m2,
            report.analytic, report.empirical.mean, report.empirical.std_error,
            report.z_score, report.relative_diff_percent]


def _report_to_json(report: ComparisonReport) -> Dict[str, Any]:
    return {
            "mean": report.empirical.mean,
            "std_error": report.empirical.std_error,
            "count": report.empirical.count,
            "analytic": report.analytic,
            "z": report.z_score,
            "relative_diff_percent": report.relative_diff_percent,
            "notes": list(report.notes),
            }


def _spec_row(spec: ExperimentSpec, report: ComparisonReport) -> List[Any]:
    p1, p2 = spec.params1, spec.params2
    return _comparison_row(p1.beta, p1.n, p1.m,
            None if p2 is None else p2.m, report)


def _histogram_rows(histogram, masses) -> List[List[Any]]:
    edges = histogram.edges
    return [
            [edges[i], edges[i+1], histogram.counts[i],
                histogram.probabilities[i], masses[i]]
            for i in range(len(histogram.counts))]

# }}}


# {{{ commands

def evaluate_formula(parameters: Dict[str, Any]):
    """Return the value of the closed form named by ``parameters["eq"]``.
    ``log-norm-constants`` yields a tuple.
    """
    eq = parameters["eq"]
    beta, n = parameters["beta"], parameters["n"]
    m = parameters.get("m")
    m1 = parameters.get("m1") or m
    m2 = parameters.get("m2") or m1

    if m1 is None:
        raise SpecError(f"'{eq}' needs --m or --m1")

    params = EnsembleParams(beta, n, m1)
    if eq == "mean-tr-w2":
        return mean_tr_w2(params)
    elif eq in ("mean-tr-wx", "d2-wishart-fixed"):
        x = SpectrumSummary.from_matrix(
                fixed_matrix_preset(parameters.get("fixed") or "zero", n, beta))
        if eq == "mean-tr-wx":
            return mean_tr_wx(params, x)
        return d2_wishart_fixed(params, x)
    elif eq == "d2-wishart-pair":
        return d2_wishart_pair(beta, n, m1, m2)
    elif eq == "mean-purity":
        return mean_purity(params)
    elif eq == "d2-rho-fixed":
        purity_sigma = parameters.get("purity_sigma")
        if purity_sigma is None:
            purity_sigma = purity(fixed_matrix_preset(
                parameters.get("sigma") or "maximally-mixed", n, beta))
        return d2_rho_fixed(params, purity_sigma)
    elif eq == "d2-rho-pair":
        return d2_rho_pair(beta, n, m1, m2)
    elif eq == "log-norm-constants":
        return log_norm_constants(params)
    else:
        raise SpecError(f"unknown formula '{eq}' (available: "
                f"{', '.join(FORMULAS)})")


def _run_formula(cfg: RunConfig, ctx: "_Context") -> None:
    value = evaluate_formula(cfg.parameters)
    values = value if isinstance(value, tuple) else (value,)
    print(" ".join(format(v, ".15g") for v in values),
            file=ctx.stdout or sys.stdout)


def _run_mc(cfg: RunConfig, ctx: "_Context") -> None:
    spec = ExperimentSpec.from_json_dict(cfg.parameters["experiment"])

    csv_path = cfg.artifact_path(".csv")
    json_path = cfg.artifact_path(".json")
    hist_path = cfg.artifact_path("-histogram.csv")
    is_histogram = spec.kind is ExperimentKind.EIG_DENSITY_HISTOGRAM
    check_writable(
            ([csv_path] if cfg.format == "csv" else [])
            + ([hist_path] if is_histogram and cfg.format == "csv" else [])
            + [json_path], ctx.overwrite)

    result = run_experiment(spec, nworkers=ctx.nworkers)
    report = compare(result.summary, analytic_value(spec))
    results = _report_to_json(report)

    if is_histogram:
        masses = eig_density_bin_masses(spec.params1, result.histogram.edges)
        results["histogram_l1"] = histogram_l1_distance(
                result.histogram, spec.params1)
        if cfg.format == "csv":
            write_csv(hist_path, HISTOGRAM_COLUMNS,
                    _histogram_rows(result.histogram, masses), overwrite=True)
        results["histogram"] = {
                "edges": result.histogram.edges,
                "counts": result.histogram.counts,
                "analytic_probability": masses,
                }

    if cfg.format == "csv":
        write_csv(csv_path, COMPARISON_COLUMNS, [_spec_row(spec, report)],
                overwrite=True)
    write_json_record(json_path, cfg.to_json_dict(), results, overwrite=True)


def _run_eigdensity(cfg: RunConfig, ctx: "_Context") -> None:
    p = cfg.parameters
    params = EnsembleParams(p["beta"], p["n"], p["m"])

    csv_path = cfg.artifact_path(".csv")
    json_path = cfg.artifact_path(".json")
    check_writable(([csv_path] if cfg.format == "csv" else []) + [json_path],
            ctx.overwrite)

    curve = eig_density_curve(params, p["grid"])
    if cfg.format == "csv":
        write_csv(csv_path, EIG_DENSITY_COLUMNS,
                zip(curve.abscissae, curve.ordinates), overwrite=True)

    write_json_record(json_path, cfg.to_json_dict(), {
        "grid": f"midpoints of {p['grid']} equal cells of [0, 1]",
        "grid_points": len(curve.abscissae),
        "grid_spacing": curve.grid_spacing,
        "abscissa_range": [float(curve.abscissae[0]),
            float(curve.abscissae[-1])],
        "quadrature": "composite midpoint rule",
        "integral": curve.integrate(),
        "first_moment": curve.integrate(1),
        "exact_integral": eig_density_moment(params, 0),
        "exact_first_moment": eig_density_moment(params, 1),
        "min_density": float(np.min(curve.ordinates)),
        }, overwrite=True)


def _kicked_top_configs(p: Dict[str, Any]):
    from rdmat.kickedtop import KickedTopConfig
    cfg_a = KickedTopConfig.from_json_dict(p["top_a"])
    cfg_b = (None if p.get("top_b") is None
            else KickedTopConfig.from_json_dict(p["top_b"]))
    return cfg_a, cfg_b


def _run_kickedtop(cfg: RunConfig, ctx: "_Context") -> None:
    from rdmat.kickedtop import (
            kicked_top_distance_report, single_top_pair_report,
            write_sample_stream)

    p = cfg.parameters
    mode = p["mode"]
    cfg_a, cfg_b = _kicked_top_configs(p)

    csv_path = cfg.artifact_path(".csv")
    json_path = cfg.artifact_path(".json")
    samples_path = cfg.artifact_path("-samples.csv")
    check_writable(
            ([csv_path] if cfg.format == "csv" else [])
            + ([samples_path, samples_path + ".json"]
                if p.get("export_samples") else [])
            + [json_path], ctx.overwrite)

    if mode == "fixed":
        sigma = fixed_matrix_preset(p["sigma"], cfg_a.n1, 2)
        report = kicked_top_distance_report(cfg_a, sigma=sigma)
        m2 = None
    elif mode == "pair":
        if cfg_b is None:
            raise SpecError("pair mode needs a second kicked top")
        report = kicked_top_distance_report(cfg_a, cfg_b)
        m2 = cfg_b.n2
    elif mode == "single-pair":
        report = single_top_pair_report(cfg_a, p["separation"])
        m2 = cfg_a.n2
    else:
        raise SpecError(f"unknown kicked top mode '{mode}'")

    if p.get("export_samples"):
        write_sample_stream(cfg_a, samples_path, overwrite=True)

    if cfg.format == "csv":
        write_csv(csv_path, COMPARISON_COLUMNS,
                [_comparison_row(2, cfg_a.n1, cfg_a.n2, m2, report)],
                overwrite=True)
    write_json_record(json_path, cfg.to_json_dict(), _report_to_json(report),
            overwrite=True)


def _run_reproduce(cfg: RunConfig, ctx: "_Context") -> None:
    p = cfg.parameters
    reproduce_all(
            trials=p["trials"], seed=p["seed"],
            output_dir=cfg.output_dir,
            checks=p["checks"],
            skip_dynamics=p["skip_dynamics"],
            kicked_samples=p["kicked_samples"],
            kicked_transient=p["kicked_transient"],
            overwrite=ctx.overwrite,
            nworkers=ctx.nworkers,
            config=cfg.to_json_dict())


@dataclass(frozen=True)
class _Context:
    overwrite: bool = False
    nworkers: Optional[int] = None
    stdout: Optional[TextIO] = None


_COMMANDS: Dict[str, Callable[[RunConfig, _Context], None]] = {
        "formula": _run_formula,
        "mc": _run_mc,
        "eigdensity": _run_eigdensity,
        "kickedtop": _run_kickedtop,
        "reproduce": _run_reproduce,
        }

# }}}


# {{{ reproduction bundle

_ASYMPTOTIC_NS = (50, 100, 200, 500)
_LOG_PARTITION_SWEEP = (
        (1, 1, 1), (2, 1, 1), (1, 2, 2), (2, 2, 2),
        (1, 5, 8), (2, 5, 8), (1, 25, 31), (2, 25, 31))
_KICKED_TOP_MS = (25, 27, 29, 31)
_KICKED_TOP_PAIRS = ((25, 27), (27, 29), (29, 31), (31, 25))


def _criterion(name: str, check: Callable[[], Dict[str, Any]]) -> Dict[str, Any]:
    """Run *check*, which returns a dictionary with at least ``passed``.
    Any exception is recorded as a failure, so that the remaining checks
    still run.
    """
    try:
        result = check()
    except Exception as exc:  # noqa: BLE001
        if isinstance(exc, rdmat.Error):
            logger.error("%s failed: %s", name, exc)
        else:
            logger.exception("%s failed unexpectedly", name)
        result = {"passed": False, "error": type(exc).__name__,
                "message": str(exc)}

    logger.info("%s: %s", name,
            {True: "passed", False: "FAILED", None: "recorded"}[
                result["passed"]])
    return {"name": name, **result}


@log_process(logger)
def reproduce_all(trials: int = 100_000, seed: int = DEFAULT_SEED,
        output_dir: str = ".",
        checks: Optional[Sequence[str]] = None,
        skip_dynamics: bool = False,
        kicked_samples: int = 5000,
        kicked_transient: int = 500,
        overwrite: bool = False,
        nworkers: Optional[int] = None,
        config: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """Recompute every verification and write a bundle of CSV files and a
    ``summary.json`` with one pass/fail entry per criterion.

    :arg checks: subset of :data:`VERIFICATIONS`. *None* selects all.
    :arg skip_dynamics: leave out the kicked top runs.
    :returns: the summary record that was written.
    """
    if checks is None:
        checks = VERIFICATIONS
    checks = [str(c) for c in checks]
    unknown = set(checks) - set(VERIFICATIONS)
    if unknown:
        raise SpecError(f"unknown checks: {', '.join(sorted(unknown))}")
    if skip_dynamics:
        checks = [c for c in checks if c not in KICKED_TOP_CHECKS]

    def path(name):
        return os.path.join(output_dir, name)

    grids = [c for c in checks if c in GRID_KINDS]
    planned = (
            [path("summary.json"), path("distance-table.csv"),
                path("eig-density-n2-m2.csv"),
                path("eig-density-histogram-n5-m5.csv")]
            + [path(f"eig-density-n25-m{m}.csv") for m in _KICKED_TOP_MS]
            + [path(f"{c}.csv") for c in grids]
            + [path(f"{c}.csv") for c in checks if c in KICKED_TOP_CHECKS])
    check_writable(planned, overwrite)

    criteria = []

    # {{{ Monte Carlo grids

    ncells = 0
    for grid in grids:
        def check_grid(grid=grid):
            rows = []
            zs = []
            for spec in verification_grid(grid, trials=trials, seed=seed):
                result = run_experiment(spec, nworkers=nworkers)
                report = compare(result.summary, analytic_value(spec))
                rows.append(_spec_row(spec, report))
                zs.append(report.z_score)

            write_csv(path(f"{grid}.csv"), COMPARISON_COLUMNS, rows,
                    overwrite=True)
            return {"passed": bool(np.all(np.abs(zs) <= 4)),
                    "cells": len(zs), "max_abs_z": float(np.max(np.abs(zs)))}

        entry = _criterion(grid, check_grid)
        ncells += entry.get("cells", 0)
        criteria.append(entry)

    # }}}

    # {{{ closed forms

    def check_distance_table():
        params = EnsembleParams(2, 2, 2)
        rows = distance_table_rows(params, 3,
                SpectrumSummary.from_matrix(
                    fixed_matrix_preset("reference-x2", 2, 2)),
                purity(fixed_matrix_preset("maximally-mixed", 2, 2)))
        write_csv(path("distance-table.csv"), DISTANCE_TABLE_COLUMNS,
                [[row[col] for col in DISTANCE_TABLE_COLUMNS] for row in rows],
                overwrite=True)
        return {"passed": True, "reference": {"beta": 2, "n": 2, "m1": 2,
            "m2": 3, "X": "reference-x2", "sigma": "maximally-mixed"}}

    criteria.append(_criterion("distance-table", check_distance_table))

    def check_closed_form_density():
        params = EnsembleParams(2, 2, 2)
        mus = (np.arange(50) + 0.5) / 50
        errors = [abs(eig_density(params, mu) - 3 * (2*mu - 1)**2)
                for mu in mus]
        curve = eig_density_curve(params)
        write_csv(path("eig-density-n2-m2.csv"), EIG_DENSITY_COLUMNS,
                zip(curve.abscissae, curve.ordinates), overwrite=True)
        return {"passed": max(errors) <= 1e-9, "max_error": max(errors)}

    criteria.append(_criterion("eig-density-closed-form",
        check_closed_form_density))

    def check_density_normalization():
        detail = []
        passed = True
        for m in _KICKED_TOP_MS:
            params = EnsembleParams(2, 25, m)
            curve = eig_density_curve(params)
            write_csv(path(f"eig-density-n25-m{m}.csv"), EIG_DENSITY_COLUMNS,
                    zip(curve.abscissae, curve.ordinates), overwrite=True)

            moment0 = eig_density_moment(params, 0)
            moment1 = eig_density_moment(params, 1)
            passed = passed and (
                    abs(moment0 - 1) <= 1e-6 and abs(moment1 - 1/25) <= 1e-6)
            detail.append({"m": m, "integral": moment0,
                "first_moment": moment1,
                "grid_integral": curve.integrate(),
                "grid_first_moment": curve.integrate(1)})
        return {"passed": passed, "detail": detail}

    criteria.append(_criterion("eig-density-normalization",
        check_density_normalization))

    def check_density_histogram():
        params = EnsembleParams(2, 5, 5)
        spec = ExperimentSpec(ExperimentKind.EIG_DENSITY_HISTOGRAM, params,
                trials=10_000, seed=seed, histogram_bins=50,
                stream_key=(len(GRID_KINDS),))
        result = run_experiment(spec, nworkers=nworkers)
        masses = eig_density_bin_masses(params, result.histogram.edges)
        write_csv(path("eig-density-histogram-n5-m5.csv"), HISTOGRAM_COLUMNS,
                _histogram_rows(result.histogram, masses), overwrite=True)
        l1 = histogram_l1_distance(result.histogram, params)
        return {"passed": l1 <= 0.05, "l1": l1}

    criteria.append(_criterion("eig-density-histogram",
        check_density_histogram))

    def check_log_partition():
        residuals = {
                f"beta={b},n={n},m={m}":
                log_partition_ratio_check(EnsembleParams(b, n, m))
                for b, n, m in _LOG_PARTITION_SWEEP}
        return {"passed": max(residuals.values()) <= 1e-10,
                "residuals": residuals}

    criteria.append(_criterion("log-partition-ratio", check_log_partition))

    def check_asymptotics():
        bound_ok = all(
                abs(d2_rho_pair(2, n, n, n) - 2/n) <= 4 / n**2
                for n in _ASYMPTOTIC_NS)
        fits = [
                {"beta": beta, "quantity": fit.quantity, "order": fit.order,
                    "constant": fit.constant}
                for beta in (1, 2)
                for fit in asymptotic_report(beta, _ASYMPTOTIC_NS)]
        return {"passed": bound_ok, "fits": fits}

    criteria.append(_criterion("asymptotics", check_asymptotics))

    # }}}

    # {{{ kicked tops

    if any(c in checks for c in KICKED_TOP_CHECKS):
        from rdmat.kickedtop import (
                CKT_SETS, CKTP_SETS, KickedTopConfig, kicked_top_eigenvalues,
                named_config)

        kicked_kwargs = dict(samples=kicked_samples, transient=kicked_transient)

    if "kicked-spectrum" in checks:
        def check_kicked_eigenvalues():
            params = EnsembleParams(2, 25, 25)
            eigenvalues = kicked_top_eigenvalues(
                    KickedTopConfig(12, 12, 7, 7, 1, **kicked_kwargs))
            edges = np.linspace(0, 1, 51)
            counts, _ = np.histogram(np.clip(eigenvalues, 0, 1), bins=edges)
            masses = eig_density_bin_masses(params, edges)
            probabilities = counts / np.sum(counts)
            write_csv(path("kicked-spectrum.csv"), HISTOGRAM_COLUMNS,
                    [[edges[i], edges[i+1], counts[i], probabilities[i],
                        masses[i]] for i in range(len(counts))],
                    overwrite=True)
            return {"passed": None,
                    "l1": float(np.sum(np.abs(probabilities - masses)))}

        criteria.append(_criterion("kicked-spectrum", check_kicked_eigenvalues))

    if "kicked-fixed" in checks:
        def check_fixed_tops():
            jobs = []
            labels = []
            for name in CKT_SETS:
                for m in _KICKED_TOP_MS:
                    jobs.append((named_config(name, 12, (m - 1) / 2,
                        **kicked_kwargs), None, np.eye(25) / 25))
                    labels.append((name, m, None))
            return _kicked_top_criterion(labels, jobs, path("kicked-fixed.csv"),
                    nworkers)

        criteria.append(_criterion("kicked-fixed", check_fixed_tops))

    if "kicked-pair" in checks:
        def check_pair_tops():
            jobs = []
            labels = []
            for name in CKTP_SETS:
                for m1, m2 in _KICKED_TOP_PAIRS:
                    cfg_a, cfg_b = named_config(name, 12,
                            ((m1 - 1) / 2, (m2 - 1) / 2), **kicked_kwargs)
                    jobs.append((cfg_a, cfg_b, None))
                    labels.append((name, m1, m2))
            return _kicked_top_criterion(labels, jobs, path("kicked-pair.csv"),
                    nworkers)

        criteria.append(_criterion("kicked-pair", check_pair_tops))

    # }}}

    summary = {
            "cells": ncells,
            "passed": all(c["passed"] is not False for c in criteria),
            "criteria": criteria,
            }
    write_json_record(path("summary.json"),
            config if config is not None else {
                "trials": trials, "seed": seed, "checks": list(checks),
                "skip_dynamics": skip_dynamics},
            summary, overwrite=True)

    return summary


def _kicked_top_criterion(labels, jobs, csv_path, nworkers) -> Dict[str, Any]:
    from rdmat.kickedtop import distance_reports

    reports = distance_reports(jobs, nworkers=nworkers)
    rows = [
            _comparison_row(2, 25, m1, m2, report)
            for (_, m1, m2), report in zip(labels, reports)]
    write_csv(csv_path, COMPARISON_COLUMNS, rows, overwrite=True)

    rel = [abs(report.relative_diff_percent) for report in reports]
    return {
            "passed": max(rel) < 1,
            "max_abs_relative_diff_percent": max(rel),
            "sets": sorted({name for name, _, _ in labels}),
            }

# }}}


# {{{ command line

class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise SpecError(message)


def _add_ensemble_args(parser, pair=False):
    parser.add_argument("--beta", type=int, default=2, choices=(1, 2))
    parser.add_argument("--n", type=int, required=True)
    parser.add_argument("--m", type=int)
    if pair:
        parser.add_argument("--m1", type=int)
        parser.add_argument("--m2", type=int)


def _add_common_args(parser, suppress=False):
    def default(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument("-v", "--verbose", action="count", default=default(0))
    parser.add_argument("--output-dir",
            default=default(os.environ.get("RDMAT_OUTPUT_DIR", ".")))
    parser.add_argument("--name", default=default(None),
            help="base name of the artifacts")
    parser.add_argument("--format", choices=("csv", "json"),
            default=default("csv"))
    parser.add_argument("--overwrite", action="store_true",
            default=default(False))
    parser.add_argument("--nworkers", type=int, default=default(None),
            help="worker threads (does not change results)")


def make_parser() -> argparse.ArgumentParser:
    # options may precede or follow the command; the copies after the
    # command must not reset values given before it
    common = _ArgumentParser(add_help=False)
    _add_common_args(common, suppress=True)

    # allow_abbrev=False: on Python < 3.12 the top-level parser would
    # otherwise prefix-match subcommand options (e.g. --n vs. --name)
    parser = _ArgumentParser(prog="rdmat", allow_abbrev=False,
            description="Random density matrices and mean-square "
            "Hilbert-Schmidt distances")
    parser.add_argument("--version", action="version",
            version=rdmat.VERSION_TEXT)
    parser.add_argument("--config",
            help="repeat the run recorded in a JSON artifact")
    _add_common_args(parser)

    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("formula", parents=[common],
            help="evaluate a closed-form average")
    p.add_argument("--eq", required=True, choices=FORMULAS)
    _add_ensemble_args(p, pair=True)
    p.add_argument("--fixed", help="preset for the fixed Hermitian matrix")
    p.add_argument("--sigma", help="preset for the fixed density matrix")
    p.add_argument("--purity-sigma", type=float)

    p = sub.add_parser("mc", parents=[common],
            help="run a Monte Carlo experiment")
    p.add_argument("--kind", required=True,
            choices=[kind.value for kind in ExperimentKind])
    _add_ensemble_args(p)
    p.add_argument("--m2", type=int)
    p.add_argument("--fixed", help="fixed matrix preset")
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--bins", type=int, default=50)
    p.add_argument("--batch-size", type=int, default=1000)

    p = sub.add_parser("eigdensity", parents=[common],
            help="tabulate the eigenvalue density")
    _add_ensemble_args(p)
    p.add_argument("--grid", type=int, default=2000)

    p = sub.add_parser("kickedtop", parents=[common],
            help="compare kicked top reduced states with random states")
    p.add_argument("--mode", choices=("fixed", "pair", "single-pair"),
            default="fixed")
    p.add_argument("--set", dest="param_set", default="CKT I",
            help="named parameter set, e.g. 'CKT I' or 'CKTP I'")
    p.add_argument("--j1", type=float, default=12)
    p.add_argument("--j2", type=float, default=15)
    p.add_argument("--j2b", type=float, help="second spin of top B")
    p.add_argument("--samples", type=int, default=5000)
    p.add_argument("--transient", type=int, default=500)
    p.add_argument("--stride", type=int, default=1)
    p.add_argument("--separation", type=int, default=20)
    p.add_argument("--sigma", default="maximally-mixed")
    p.add_argument("--export-samples", action="store_true")

    p = sub.add_parser("reproduce", parents=[common],
            help="recompute all verifications into a bundle")
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--check", action="append", dest="checks",
            choices=VERIFICATIONS)
    p.add_argument("--figure", action="append", dest="numbered_checks",
            choices=list(NUMBERED_CHECKS),
            help="select a check by its number")
    p.add_argument("--skip-dynamics", action="store_true")
    p.add_argument("--kicked-samples", type=int, default=5000)
    p.add_argument("--kicked-transient", type=int, default=500)

    return parser


def _selected_checks(args) -> List[str]:
    selected = list(args.checks or [])
    selected += [NUMBERED_CHECKS[k] for k in args.numbered_checks or []]
    if not selected:
        return list(VERIFICATIONS)
    return list(dict.fromkeys(selected))


def _resolve_parameters(args) -> Dict[str, Any]:
    command = args.command
    if command == "formula":
        return {
                "eq": args.eq, "beta": args.beta, "n": args.n, "m": args.m,
                "m1": args.m1, "m2": args.m2, "fixed": args.fixed,
                "sigma": args.sigma, "purity_sigma": args.purity_sigma}

    elif command == "mc":
        kind = ExperimentKind(args.kind)
        m = args.m if args.m is not None else args.n
        params1 = EnsembleParams(args.beta, args.n, m)
        params2 = None
        if kind.is_pair:
            params2 = EnsembleParams(args.beta, args.n,
                    args.m2 if args.m2 is not None else m)

        fixed = None
        if kind.needs_fixed_matrix:
            default = ("maximally-mixed" if kind is ExperimentKind.RHO_VS_FIXED
                    else "zero")
            fixed = fixed_matrix_preset(args.fixed or default, args.n, args.beta)

        spec = ExperimentSpec(kind, params1, params2, fixed,
                trials=args.trials, seed=args.seed,
                histogram_bins=(args.bins
                    if kind is ExperimentKind.EIG_DENSITY_HISTOGRAM else None),
                batch_size=args.batch_size)
        return {"experiment": spec.to_json_dict()}

    elif command == "eigdensity":
        return {"beta": args.beta, "n": args.n,
                "m": args.m if args.m is not None else args.n,
                "grid": args.grid}

    elif command == "kickedtop":
        from rdmat.kickedtop import CKTP_SETS, named_config

        kwargs = dict(samples=args.samples, transient=args.transient,
                stride=args.stride)
        is_pair_set = args.param_set in CKTP_SETS
        if is_pair_set != (args.mode == "pair"):
            raise SpecError(f"parameter set '{args.param_set}' does not fit "
                    f"mode '{args.mode}'")

        top_b = None
        if args.mode == "pair":
            j2b = args.j2b if args.j2b is not None else args.j2
            cfg_a, cfg_b = named_config(args.param_set, args.j1,
                    (args.j2, j2b), **kwargs)
            top_b = cfg_b.to_json_dict()
        else:
            cfg_a = named_config(args.param_set, args.j1, args.j2, **kwargs)

        return {"mode": args.mode, "top_a": cfg_a.to_json_dict(),
                "top_b": top_b, "sigma": args.sigma,
                "separation": args.separation,
                "export_samples": args.export_samples}

    elif command == "reproduce":
        return {"trials": args.trials, "seed": args.seed,
                "checks": _selected_checks(args),
                "skip_dynamics": args.skip_dynamics,
                "kicked_samples": args.kicked_samples,
                "kicked_transient": args.kicked_transient}

    raise SpecError(f"unknown command '{command}'")


_USAGE_ERRORS = (SpecError, ParameterError, UnsupportedParameter, DomainError,
        InvalidPurity, FileExistsError, KeyError, TypeError, ValueError)
_NUMERIC_ERRORS = (ConvergenceFailure, DegenerateSample, HermiticityViolation,
        ShapeError, FloatingPointError)


def _error_record(exc: BaseException, stream: TextIO) -> None:
    print(json.dumps({"error": type(exc).__name__, "message": str(exc)}),
            file=stream)


def _exit_status(exc: BaseException) -> int:
    # numerical failures take precedence over their ValueError base
    if isinstance(exc, _NUMERIC_ERRORS):
        return 3
    if isinstance(exc, _USAGE_ERRORS):
        return 2
    return 3


def dispatch(cfg: RunConfig, overwrite: bool = False,
        nworkers: Optional[int] = None,
        stdout: Optional[TextIO] = None,
        stderr: Optional[TextIO] = None) -> int:
    """Run *cfg* and return the exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    ctx = _Context(overwrite=overwrite, nworkers=nworkers, stdout=stdout)
    try:
        _COMMANDS[cfg.command](cfg, ctx)
    except _USAGE_ERRORS + _NUMERIC_ERRORS + (rdmat.Error,) as exc:
        logger.debug("%s failed", cfg.command, exc_info=True)
        _error_record(exc, stderr)
        return _exit_status(exc)

    return 0


def main(argv: Optional[Sequence[str]] = None,
        stdout: Optional[TextIO] = None,
        stderr: Optional[TextIO] = None) -> int:
    """Parse *argv* and run the command. Returns the exit status."""
    stderr = stderr or sys.stderr
    try:
        args = make_parser().parse_args(argv)

        if args.config is not None:
            record = read_json_record(args.config)
            cfg = RunConfig.from_json_dict(record["config"], args.output_dir)
        elif args.command is None:
            raise SpecError("no command given")
        else:
            cfg = RunConfig(
                    command=args.command,
                    parameters=_resolve_parameters(args),
                    output_dir=args.output_dir,
                    name=args.name,
                    format=args.format)
    except _USAGE_ERRORS + _NUMERIC_ERRORS + (rdmat.Error, OSError) as exc:
        _error_record(exc, stderr)
        return 2 if isinstance(exc, OSError) else _exit_status(exc)

    logging.basicConfig(
            level={0: logging.WARNING, 1: logging.INFO}.get(
                args.verbose, logging.DEBUG),
            format="%(asctime)s %(name)s %(levelname)s: %(message)s")

    return dispatch(cfg, overwrite=args.overwrite, nworkers=args.nworkers,
            stdout=stdout, stderr=stderr)

# }}}

# vim: foldmethod=marker
