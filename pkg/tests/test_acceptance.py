"""Acceptance criteria, each run at its stated sample size and tolerance.

Every test prints one ``PASS``/``FAIL`` line for its criterion (shown even
without ``-s``), followed by the per-shape checks it aggregates.
"""
import math
import time

import numpy as np
import pytest

from conebilliard.geometry import builtin_shapes
from conebilliard.harness.angle import run_angle_oracle
from conebilliard.harness.checks import (build_ensemble, check_angle_recursion,
                                         check_angular_momentum, check_caustic,
                                         check_closed_vs_generic, check_glue,
                                         check_integral_drift, check_rank, check_reconstruction,
                                         check_sigma_involution, check_sigma_limit,
                                         check_sine_law, check_smooth_recovery,
                                         check_smooth_vanishing, check_termination,
                                         check_uniqueness, check_vector_invariance,
                                         delta0_lines)
from conebilliard.integrals import TransportField

ENSEMBLE_SIZE = 10_000
CAP = 100_000
RUNTIME_TARGET = 60.0
SHAPES = builtin_shapes()


@pytest.fixture(scope="module")
def ensembles():
    start = time.perf_counter()
    ens = {name: build_ensemble(shape, ENSEMBLE_SIZE, seed=2024, cap=CAP, name=name)
           for name, shape in SHAPES.items()}
    drift = {name: check_integral_drift(e) for name, e in ens.items()}
    elapsed = time.perf_counter() - start
    return ens, drift, elapsed


@pytest.fixture(scope="module")
def fields():
    return {name: TransportField(shape) for name, shape in SHAPES.items()}


@pytest.fixture(scope="module")
def delta0():
    return {name: delta0_lines(shape, 1000, seed=77) for name, shape in SHAPES.items()}


def report(capsys, number, title, results, extra_ok=True, note=""):
    ok = extra_ok and all(r.passed for r in results.values())
    with capsys.disabled():
        print(f"\n[criterion {number}] {'PASS' if ok else 'FAIL'}  {title}"
              + (f"  ({note})" if note else ""))
        for label, r in results.items():
            print(f"    {label:<15s} {r.line()}")
    return ok


def test_criterion_01_integral_invariance(ensembles, capsys):
    ens, drift, elapsed = ensembles
    sizes_ok = all(len(e.trajectories) >= ENSEMBLE_SIZE for e in ens.values())
    ok = report(capsys, 1, "relative drift of I <= 1e-8 over 10^4 trajectories per shape",
                drift, sizes_ok and elapsed < RUNTIME_TARGET,
                f"runtime {elapsed:.1f}s, target < {RUNTIME_TARGET:.0f}s")
    assert ok


def test_criterion_02_caustic_tangency(ensembles, capsys):
    ens, _, _ = ensembles
    results = {name: check_caustic(e, 1e-9) for name, e in ens.items()}
    assert report(capsys, 2, "every chord tangent to the sphere of radius sqrt(I), 1e-9 rel",
                  results)


def test_criterion_03_finiteness(ensembles, capsys):
    ens, _, _ = ensembles
    results = {name: check_termination(e) for name, e in ens.items()}
    max_m = ", ".join(f"{n}={max(t.m for t in e.trajectories)}" for n, e in ens.items())
    assert report(capsys, 3, f"zero cap breaches at cap={CAP}", results, note=f"max m: {max_m}")


def test_criterion_04_angle_recursion(ensembles, capsys):
    ens, _, _ = ensembles
    results = {}
    for name, e in ens.items():
        results[f"{name}"] = check_angle_recursion(e, 1e-9)
        results[f"{name} sin"] = check_sine_law(e, 1e-9)
    assert report(capsys, 4, "alpha_{k+1} = alpha_k - theta_k, alpha decreasing, "
                  "sin(alpha_k)|p_k| constant", results)


def test_criterion_05_planar_bound(capsys):
    reports = [run_angle_oracle(theta, 1000, seed=5)
               for theta in (math.pi / 3, math.pi / 2, 1.0, 0.3)]
    ok = all(r.within_bound and r.attained and r.mismatches == 0 and r.errors == 0
             for r in reports)
    with capsys.disabled():
        print(f"\n[criterion 5] {'PASS' if ok else 'FAIL'}  reflection count <= ceil(pi/theta), "
              "bound attained")
        for r in reports:
            print(f"    {r.summary()}")
    assert ok


def test_criterion_06_sigma(delta0, fields, capsys):
    results = {}
    for name, shape in SHAPES.items():
        lines = delta0[name]
        results[f"{name} inv"] = check_sigma_involution(shape, lines, 1e-12)
        results[f"{name} lim"] = check_sigma_limit(shape, lines, s=1e-2, tol=1e-6)
        results[f"{name} glue"] = check_glue(shape, lines, fields[name], 1e-12)
    assert report(capsys, 6, "sigma involution 1e-12, psi-limit within 1e-6, glue identity 1e-12 "
                  "on 10^3 Delta_0 lines", results)


def test_criterion_07_rank(fields, capsys):
    results = {name: check_rank(shape, 500, seed=9, field=fields[name])
               for name, shape in SHAPES.items()}
    assert report(capsys, 7, "F-map smallest singular value > 1e-6 on D, "
                  "rank n-2 on Gamma", results)


def test_criterion_08_uniqueness(ensembles, fields, capsys):
    ens, _, _ = ensembles
    results = {}
    for name, e in ens.items():
        shape, field = SHAPES[name], fields[name]
        results[f"{name} (a)"] = check_vector_invariance(shape, e.trajectories[:500], field, 1e-8)
        results[f"{name} (b)"] = check_uniqueness(shape, e.trajectories[:2000], field, 1e-6,
                                                  pairs=1000, seed=11)
        results[f"{name} (c)"] = check_reconstruction(shape, 1000, seed=13, field=field, tol=1e-8)
    assert report(capsys, 8, "shared vectors 1e-8, pairs separated > 1e-6, "
                  "reconstruction 1e-8", results)


def test_criterion_09_smooth_integrals(delta0, fields, capsys):
    results = {}
    for name, shape in SHAPES.items():
        results[f"{name} zero"] = check_smooth_vanishing(shape, delta0[name], fields[name], 1e-12)
        results[f"{name} rec"] = check_smooth_recovery(shape, 1000, seed=17,
                                                       field=fields[name], tol=1e-8)
    assert report(capsys, 9, "I^s vanishes on Delta_0 (and preimages), recovery 1e-8", results)


def test_criterion_10_geometry_oracle(ensembles, capsys):
    ens, _, _ = ensembles
    results = {}
    for name, shape in SHAPES.items():
        r = check_closed_vs_generic(shape, 10_000, seed=19, tol=1e-9)
        if r is not None:
            results[f"{name} t"] = r
    results["circular m12"] = check_angular_momentum(ens["circular"], 1e-10)
    assert report(capsys, 10, "closed form vs bracketing on 10^4 lines (1e-9 in t, relative to "
                  "max(1,|t|)); m12 conserved 1e-10", results)
