"""Verification suites: each check returns a :class:`CheckResult`.

The same functions back ``conebilliard verify`` and the acceptance tests.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .. import dynamics
from ..config import REFLECTION_CAP, SAMPLE_RADIUS
from ..dynamics import (billiard_map, perturbed_line, run_trajectory, sigma_inverse,
                        sigma_limit_check, sigma_map)
from ..errors import BilliardError, MaxReflectionsExceeded
from ..geometry.intersect import intersect, surface_point
from ..geometry.lines import OrientedLine, line_from_point_direction
from ..geometry.phase import PhaseTag, classify, gamma_normal
from ..geometry.shapes import EllipsoidSection
from ..integrals import (F_components, F_singular_values, TransportField, caustic_check,
                         exit_point_closed_form, integral_I, integral_vector,
                         reconstruct_from_smooth, reconstruct_line)
from .sampling import (delta0_line, escaping_line, gamma_direction, interior_direction,
                       random_line, sample_phase_space)


@dataclass
class CheckResult:
    name: str
    samples: int
    max_dev: float
    tol: float
    passed: bool
    note: str = ""

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        note = f"  {self.note}" if self.note else ""
        return (f"{status}  {self.name:<28s} n={self.samples:<6d} max={self.max_dev:.3e} "
                f"tol={self.tol:.0e}{note}")


def _result(name, devs, tol, extra_ok=True, note="", strict=False):
    devs = list(devs)
    worst = max(devs) if devs else 0.0
    ok = (worst < tol if strict else worst <= tol) and extra_ok and bool(devs)
    return CheckResult(name, len(devs), worst, tol, bool(ok), note)


def rel_diff(a, b):
    """``|a - b|_inf / max(1, |a|_inf)``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return float(np.max(np.abs(a - b)) / max(1.0, float(np.max(np.abs(a)))))


# ---------------------------------------------------------------- ensembles

@dataclass
class Ensemble:
    name: str
    shape: object
    starts: list
    trajectories: list = field(default_factory=list)
    cap_breaches: int = 0
    errors: list = field(default_factory=list)
    acceptance_rate: float = 0.0


def build_ensemble(shape, count, seed=0, cap=REFLECTION_CAP, radius=SAMPLE_RADIUS, name=""):
    """Sample ``count`` phase-space lines and run each to escape."""
    from .sampling import SampleStats

    rng = np.random.default_rng(seed)
    stats = SampleStats()
    starts = [line for line, _ in sample_phase_space(shape, count, rng, radius, stats=stats)]
    ens = Ensemble(name, shape, starts, acceptance_rate=stats.acceptance_rate)
    for line in starts:
        try:
            ens.trajectories.append(run_trajectory(shape, line, cap))
        except MaxReflectionsExceeded:
            ens.cap_breaches += 1
        except BilliardError as exc:
            ens.errors.append(f"{type(exc).__name__}: {exc}")
    return ens


# ----------------------------------------------------------------- dynamics

def check_termination(ens):
    ms = [t.m for t in ens.trajectories]
    ok = ens.cap_breaches == 0 and not ens.errors and len(ms) == len(ens.starts)
    note = f"max m={max(ms) if ms else 0} cap_breaches={ens.cap_breaches} errors={len(ens.errors)}"
    return CheckResult("termination", len(ens.starts), float(ens.cap_breaches + len(ens.errors)),
                       0.0, ok, note)


def _drift(values):
    ref = values[0]
    return max(abs(x - ref) for x in values) / ref


def check_integral_drift(ens, tol=1e-8):
    devs = [_drift([integral_I(l) for l in t.lines]) for t in ens.trajectories]
    return _result("integral I drift", devs, tol, not ens.errors and ens.cap_breaches == 0)


def check_distance_invariance(ens, tol=1e-9):
    devs = [_drift([l.distance for l in t.lines]) for t in ens.trajectories]
    return _result("distance invariance", devs, tol, not ens.errors and ens.cap_breaches == 0)


def check_caustic(ens, tol=1e-9):
    devs = []
    for t in ens.trajectories:
        rep = caustic_check(t, tol)
        devs.append(max(rep.line_deviation, rep.chord_deviation))
    return _result("caustic tangency", devs, tol)


def check_angle_recursion(ens, tol=1e-9):
    devs, monotone, in_range = [], True, True
    for t in ens.trajectories:
        steps = t.steps
        for a, b in zip(steps[:-1], steps[1:]):
            devs.append(abs(b.alpha - (a.alpha - a.theta)))
            monotone &= b.alpha < a.alpha and a.theta > 0.0
        in_range &= all(0.0 < s.alpha < math.pi for s in steps)
    note = f"strictly_decreasing={monotone} alpha_in_(0,pi)={in_range}"
    return _result("angle recursion", devs, tol, monotone and in_range, note)


def check_telescoping(ens, tol=1e-9):
    devs = []
    for t in ens.trajectories:
        steps = t.steps
        if len(steps) >= 2:
            total = sum(s.theta for s in steps[:-1])
            devs.append(abs(total - (steps[0].alpha - steps[-1].alpha)))
    return _result("theta telescoping", devs, tol)


def check_sine_law(ens, tol=1e-9):
    devs = []
    for t in ens.trajectories:
        R = t.initial.distance
        for s in t.steps:
            devs.append(abs(math.sin(s.alpha) * float(np.linalg.norm(s.p)) - R) / R)
    return _result("sin(alpha)|p| = R", devs, tol)


def check_A_positive(ens):
    values = [s.A for t in ens.trajectories for s in t.steps]
    bad = sum(1 for a in values if not a > 0.0)
    return CheckResult("A_k positivity", len(values), float(bad), 0.0, bad == 0 and bool(values),
                       f"min A={min(values):.3e}" if values else "")


def check_angular_momentum(ens, tol=1e-10):
    if not ens.shape.rotationally_symmetric:
        return None
    devs = []
    for t in ens.trajectories:
        ms = [l.Q[0] * l.v[1] - l.Q[1] * l.v[0] for l in t.lines]
        devs.extend(abs(b - a) for a, b in zip(ms[:-1], ms[1:]))
    return _result("angular momentum m12", devs, tol)


def check_reflection_algebra(dim, count=1000, seed=0, tol=1e-15):
    rng = np.random.default_rng(seed)
    inv, unit = [], []
    for _ in range(count):
        v = rng.standard_normal(dim)
        v /= np.linalg.norm(v)
        n = rng.standard_normal(dim)
        n /= np.linalg.norm(n)
        w = dynamics.reflect_direction(v, n)
        inv.append(float(np.max(np.abs(dynamics.reflect_direction(w, n) - v))))
        unit.append(abs(float(np.linalg.norm(w)) - 1.0))
    return [_result("reflection involution", inv, tol), _result("reflection unit norm", unit, tol)]


def check_line_invariants(ens, tol=1e-12):
    devs = []
    for t in ens.trajectories:
        for l in t.lines:
            devs.append(max(abs(float(np.linalg.norm(l.v)) - 1.0),
                            abs(float(l.v @ l.Q)) / max(1.0, l.distance)))
    return _result("line invariants", devs, tol)


# ----------------------------------------------------------------- geometry

def _same_endpoint(a, b):
    """``|a - b| / max(1, |a|)``; the endpoints are only determined relative to |t|."""
    if a is None or b is None:
        return (0.0 if a is b else math.inf)
    if math.isinf(a) or math.isinf(b):
        return 0.0 if a == b else math.inf
    return abs(a - b) / max(1.0, abs(a))


def check_closed_vs_generic(shape, count=10_000, seed=0, tol=1e-9, radius=SAMPLE_RADIUS):
    if not isinstance(shape.section, EllipsoidSection):
        return None
    rng = np.random.default_rng(seed)
    devs, tangent, absolute = [], 0, 0.0
    for _ in range(count):
        line = random_line(rng, shape.dim, radius)
        try:
            a = intersect(shape, line, method="closed")
            b = intersect(shape, line, method="generic")
        except BilliardError:
            tangent += 1
            continue
        devs.append(max(_same_endpoint(a.t_a, b.t_a), _same_endpoint(a.t_b, b.t_b)))
        for x, y in ((a.t_a, b.t_a), (a.t_b, b.t_b)):
            if x is not None and y is not None and math.isfinite(x) and math.isfinite(y):
                absolute = max(absolute, abs(x - y))
    return _result("closed vs generic", devs, tol,
                   note=f"relative to max(1,|t|); max abs={absolute:.2e} skipped={tangent}")


def check_surface_normals(shape, count=1000, seed=0, tol=1e-10):
    rng = np.random.default_rng(seed)
    devs, inward = [], True
    found = 0
    axis = shape.axis
    while found < count:
        line = random_line(rng, shape.dim)
        try:
            rec = intersect(shape, line)
        except BilliardError:
            continue
        for hit in rec.hits:
            n = surface_point(shape, hit.point)
            scale = float(np.linalg.norm(hit.point))
            devs.append(max(abs(float(n @ hit.point)) / max(1.0, scale),
                            abs(float(np.linalg.norm(n)) - 1.0)))
            inward &= float(n @ axis) > 0.0
            found += 1
    return _result("surface normals", devs, tol, inward, f"inward={inward}")


_SWAP = {PhaseTag.PSI_MINUS: PhaseTag.PSI_PLUS, PhaseTag.PSI_PLUS: PhaseTag.PSI_MINUS,
         PhaseTag.PSI: PhaseTag.PSI, PhaseTag.NOT_IN_PHASE_SPACE: PhaseTag.NOT_IN_PHASE_SPACE}


def check_time_reversal(shape, count=1000, seed=0):
    rng = np.random.default_rng(seed)
    bad, n = 0, 0
    for _ in range(count):
        line = random_line(rng, shape.dim)
        a = classify(shape, line).tag
        if a in (PhaseTag.DELTA0, PhaseTag.DELTA1):
            continue
        b = classify(shape, line.reversed()).tag
        n += 1
        bad += _SWAP[a] != b
    return CheckResult("time reversal", n, float(bad), 0.0, bad == 0 and n > 0)


def check_indicator_rays(shape, count=200, seed=0):
    """Sign of G along rays from the axis point through surface points."""
    rng = np.random.default_rng(seed)
    G = shape.section.indicator
    z = shape.axis
    s = np.concatenate([np.linspace(0.0, 0.999, 200), np.linspace(1.001, 4.0, 200)])
    bad = 0
    for _ in range(count):
        x = gamma_direction(shape, rng)
        x = x / x[-1] * (0.5 + 2.0 * rng.random())
        signs = [G(z + si * (x - z)) for si in s]
        bad += not (all(g < 0.0 for g in signs[:200]) and all(g > 0.0 for g in signs[200:]))
    return CheckResult("indicator along rays", count, float(bad), 0.0, bad == 0)


# ---------------------------------------------------------------- integrals

def delta0_lines(shape, count, seed=0):
    rng = np.random.default_rng(seed)
    return [delta0_line(shape, rng) for _ in range(count)]


def check_sigma_involution(shape, lines, tol=1e-12):
    devs, sign_ok = [], True
    for x in lines:
        y = sigma_map(shape, x)
        back = sigma_inverse(shape, y)
        n = gamma_normal(shape, x.v)
        sign_ok &= float(n @ y.Q) < 0.0
        devs.append(max(float(np.max(np.abs(back.Q - x.Q))), float(np.max(np.abs(back.v - x.v))),
                        abs(float(y.Q @ y.Q) - float(x.Q @ x.Q))))
    return _result("sigma involution", devs, tol, sign_ok, f"image_in_Delta1={sign_ok}")


def check_sigma_limit(shape, lines, s=1e-2, tol=1e-6):
    devs, bad = [], 0
    for x in lines:
        rep = sigma_limit_check(shape, x, s=s, tol=tol)
        devs.append(min(rep.distances) if rep.distances else math.inf)
        bad += not rep.ok
    return _result("sigma limit", devs, tol, bad == 0, f"not converged/monotone={bad}", strict=True)


def check_glue(shape, lines, field=None, tol=1e-12):
    field = TransportField(shape) if field is None else field
    devs = [float(np.max(np.abs(F_components(shape, x, field)
                                - F_components(shape, sigma_map(shape, x), field))))
            for x in lines]
    return _result("glue identity", devs, tol)


def check_continuity(shape, lines, field=None, s=1e-2, tol=1e-6, min_scale=1e-9):
    """Lifted (v^, F) of psi-approximants of Delta_0 lines approach their values at the limit."""
    field = TransportField(shape) if field is None else field
    n = shape.dim
    devs = []
    for x in lines:
        target = integral_vector(shape, x, field).values[: 2 * n - 2]
        eps, best = s, math.inf
        while eps >= min_scale and best >= tol:
            xk = perturbed_line(shape, x, eps)
            eps *= 0.5
            if classify(shape, xk).tag != PhaseTag.PSI:
                continue
            best = min(best, float(np.max(np.abs(
                integral_vector(shape, xk, field).values[: 2 * n - 2] - target))))
        devs.append(best)
    return _result("continuity across Delta", devs, tol, strict=True)


def check_rank(shape, count=200, seed=0, field=None, d_tol=1e-6, gamma_tol=1e-9):
    field = TransportField(shape) if field is None else field
    rng = np.random.default_rng(seed)
    inside = [F_singular_values(shape, interior_direction(shape, rng), field)[-1]
              for _ in range(count)]
    boundary = [F_singular_values(shape, gamma_direction(shape, rng), field) for _ in range(count)]
    smallest = [float(sv[-1]) for sv in boundary]
    second = [float(sv[-2]) if len(sv) >= 2 else math.inf for sv in boundary]
    ok_d = min(inside) > d_tol
    ok_g = max(smallest) < gamma_tol and (shape.dim == 2 or min(second) > d_tol)
    note = (f"D: min sv={min(inside):.3e}; Gamma: max smallest={max(smallest):.3e}"
            + (f", min second={min(second):.3e}" if shape.dim > 2 else ""))
    return CheckResult("rank dichotomy", 2 * count, float(max(smallest)), gamma_tol,
                       ok_d and ok_g, note)


def integral_vectors_along(shape, traj, field):
    return [integral_vector(shape, l, field) for l in traj.lines]


def check_vector_invariance(shape, trajectories, field=None, tol=1e-8):
    field = TransportField(shape) if field is None else field
    devs = []
    for t in trajectories:
        vecs = integral_vectors_along(shape, t, field)
        ref = vecs[0].values
        devs.append(max(rel_diff(ref, w.values) for w in vecs))
    return _result("integral vector invariance", devs, tol)


def check_uniqueness(shape, trajectories, field=None, tol=1e-6, pairs=1000, seed=0):
    field = TransportField(shape) if field is None else field
    rng = np.random.default_rng(seed)
    vecs = [integral_vector(shape, t.initial, field).values for t in trajectories]
    seps = []
    for _ in range(pairs):
        i, j = rng.choice(len(vecs), size=2, replace=False)
        seps.append(float(np.max(np.abs(vecs[i] - vecs[j]))))
    worst = min(seps) if seps else 0.0
    return CheckResult("trajectory separation", len(seps), worst, tol, worst > tol,
                       "max is the smallest separation")


def check_reconstruction(shape, count=500, seed=0, field=None, tol=1e-8):
    field = TransportField(shape) if field is None else field
    rng = np.random.default_rng(seed)
    devs = []
    for _ in range(count):
        x = escaping_line(shape, rng)
        rec = reconstruct_line(shape, integral_vector(shape, x, field).values, field)
        devs.append(rel_diff(x.as_vector(), rec.as_vector()))
    return _result("reconstruction", devs, tol)


def check_smooth_vanishing(shape, lines, field=None, tol=1e-12):
    field = TransportField(shape) if field is None else field
    devs = []
    for x in lines:
        devs.append(float(np.max(np.abs(integral_vector(shape, x, field).smooth_values))))
        pre = dynamics.inverse_billiard_map(shape, x)
        devs.append(float(np.max(np.abs(integral_vector(shape, pre, field).smooth_values))))
    return _result("smooth integrals vanish", devs, tol)


def check_smooth_recovery(shape, count=500, seed=0, field=None, tol=1e-8):
    field = TransportField(shape) if field is None else field
    rng = np.random.default_rng(seed)
    devs = []
    for _ in range(count):
        x = escaping_line(shape, rng)
        rec = reconstruct_from_smooth(integral_vector(shape, x, field).smooth_values)
        devs.append(rel_diff(x.as_vector(), rec.as_vector()))
    return _result("smooth recovery", devs, tol)


def check_transport(shape, count=200, seed=0, field=None, tol=1e-9):
    field = TransportField(shape) if field is None else field
    rng = np.random.default_rng(seed)
    devs = [float(np.max(np.abs(field(field.v0))))]
    for _ in range(count):
        v = gamma_direction(shape, rng)
        devs.append(float(np.max(np.abs(field(v) - gamma_normal(shape, v)))))
        devs.append(abs(field.g(v) - 1.0))
        devs.append(abs(field.g1(v) - 1.0))
        w = interior_direction(shape, rng)
        X = field(w)
        devs.append(abs(float(np.linalg.norm(X)) - field.g(w)))
        devs.append(float(np.max(np.abs(field.exit_point(w) - exit_point_closed_form(shape, w)))))
    return _result("transport field", devs, tol)


# ------------------------------------------------------------------- suites

SUITES = ("geometry", "dynamics", "integrals")


def run_suite(shape, suite="all", n=500, seed=0):
    """Run the named suite(s) on ``shape`` with ``n`` samples per check."""
    if suite != "all" and suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    chosen = SUITES if suite == "all" else (suite,)
    results = []
    if "geometry" in chosen:
        results.append(check_closed_vs_generic(shape, n, seed))
        results.append(check_surface_normals(shape, n, seed))
        results.append(check_time_reversal(shape, n, seed))
        results.append(check_indicator_rays(shape, max(n // 5, 10), seed))
    ens = None
    if "dynamics" in chosen or "integrals" in chosen:
        ens = build_ensemble(shape, n, seed)
    if "dynamics" in chosen:
        results.append(check_termination(ens))
        results.append(check_distance_invariance(ens))
        results.append(check_integral_drift(ens))
        results.append(check_caustic(ens))
        results.append(check_angle_recursion(ens))
        results.append(check_telescoping(ens))
        results.append(check_sine_law(ens))
        results.append(check_A_positive(ens))
        results.append(check_angular_momentum(ens))
        results.append(check_line_invariants(ens))
        results.extend(check_reflection_algebra(shape.dim, n, seed))
    if "integrals" in chosen:
        field = TransportField(shape)
        lines = delta0_lines(shape, max(n // 5, 10), seed)
        few = lines[: max(n // 50, 5)]
        trajs = ens.trajectories
        results.append(check_transport(shape, max(n // 5, 10), seed, field))
        results.append(check_sigma_involution(shape, lines))
        results.append(check_sigma_limit(shape, few))
        results.append(check_glue(shape, lines, field))
        results.append(check_continuity(shape, few, field))
        results.append(check_rank(shape, max(n // 5, 10), seed, field))
        results.append(check_vector_invariance(shape, trajs[: max(n // 5, 10)], field))
        results.append(check_uniqueness(shape, trajs, field, pairs=n, seed=seed))
        results.append(check_reconstruction(shape, max(n // 5, 10), seed, field))
        results.append(check_smooth_vanishing(shape, lines, field))
        results.append(check_smooth_recovery(shape, max(n // 5, 10), seed, field))
    return [r for r in results if r is not None]
