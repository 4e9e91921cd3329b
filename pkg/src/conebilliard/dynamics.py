"""The billiard map, trajectories and their per-reflection diagnostics."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .config import REFLECTION_CAP
from .errors import (DegenerateStep, MaxReflectionsExceeded, NotOnDelta0, NotReflectable,
                     TangentLine, VertexHit)
from .geometry.lines import OrientedLine, line_distance, line_from_point_direction
from .geometry.phase import PhaseTag, gamma_normal, on_gamma, phase_of
from .vectors import angle_between, normalize

log = logging.getLogger(__name__)

_REFLECTABLE = (PhaseTag.PSI_MINUS, PhaseTag.PSI)
_TERMINAL = (PhaseTag.PSI_PLUS, PhaseTag.DELTA0)


def reflect_direction(v, n):
    """Mirror ``v`` in the hyperplane orthogonal to the unit normal ``n``.

    Evaluated as ``v - 2 <v, n> n / <n, n>`` in extended precision and
    rounded once, so that reflecting twice returns ``v`` to an ulp even
    though ``|n|`` is only 1 to rounding.
    """
    vl = np.asarray(v, dtype=np.longdouble)
    nl = np.asarray(n, dtype=np.longdouble)
    return (vl - (2 * np.dot(vl, nl) / np.dot(nl, nl)) * nl).astype(float)


@dataclass(frozen=True, eq=False)
class ReflectionStep:
    """Diagnostics of line ``l_k``, which leaves the cone point ``p_k``.

    ``p_k`` is a reflection point, or the entry point when ``l_k`` is the
    initial line.  ``theta`` is the angle ``p_k O p_{k+1}`` where
    ``p_{k+1}`` is the next cone point, and is ``None`` for the escaping
    line.  ``reflected`` tells the two kinds of ``p_k`` apart.
    """

    k: int
    line: OrientedLine
    p: np.ndarray
    q: np.ndarray
    normal: np.ndarray
    alpha: float
    theta: float | None
    A: float
    dist: float
    reflected: bool = True


def step_diagnostics(k, line, p, normal, p_next=None, reflected=True):
    """Build the diagnostics of line ``k`` from raw data.

    ``line`` leaves ``p`` (on the cone, inward normal ``normal``) and meets
    the cone next at ``p_next`` (``None`` if it escapes).
    """
    p = np.asarray(p, dtype=float)
    norm_p = float(np.linalg.norm(p))
    if norm_p == 0.0 or p[-1] <= 0.0:
        raise DegenerateStep("reflection point at the vertex")
    theta = None
    if p_next is not None:
        p_next = np.asarray(p_next, dtype=float)
        if float(np.linalg.norm(p_next - p)) <= 1e-15 * norm_p:
            raise DegenerateStep("consecutive reflection points coincide")
        theta = angle_between(p, p_next)
    q = p / p[-1]
    alpha = angle_between(line.v, p)
    A = norm_p * float(line.v @ normal) / float(np.linalg.norm(q))
    return ReflectionStep(k, line, p, q, np.asarray(normal, dtype=float), alpha, theta, A,
                          line.distance, reflected)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Lines ``l_1 = initial, ..., l_{m+1} = final`` and their diagnostics.

    ``steps`` holds one record per line that leaves a cone point, so a
    start in psi_- has no record for ``l_1``.
    """

    lines: tuple
    steps: tuple
    points: tuple
    complete: bool = True
    final_tag: PhaseTag | None = None

    @property
    def initial(self):
        return self.lines[0]

    @property
    def final(self):
        return self.lines[-1]

    @property
    def m(self):
        return len(self.lines) - 1


def _raise_for_class(cls):
    if cls.reason == "tangent":
        raise TangentLine("trajectory became tangent to the cone")
    if cls.reason == "through vertex":
        raise VertexHit("trajectory runs into the cone vertex")
    raise NotReflectable(f"line left the phase space: {cls}")


def _reflect_at(hit, v):
    w = normalize(reflect_direction(v, hit.normal))
    return line_from_point_direction(hit.point, w)


def billiard_map(shape, line):
    """Reflect ``line`` at the point where it leaves the cone's interior."""
    cls, rec = phase_of(shape, line)
    if cls.tag not in _REFLECTABLE:
        if cls.reason == "tangent":
            raise TangentLine("tangent line cannot be reflected")
        raise NotReflectable(f"billiard map undefined on {cls}")
    return _reflect_at(rec.exiting, line.v)


def _records(lines, departures, hits):
    """Diagnostics for every line with a departure point."""
    steps = []
    for k, line in enumerate(lines):
        dep = departures[k]
        if dep is None:
            continue
        p_next = hits[k].point if k < len(hits) else None
        steps.append(step_diagnostics(k + 1, line, dep[0], dep[1], p_next, reflected=k > 0))
    return tuple(steps)


def run_trajectory(shape, start, cap=REFLECTION_CAP):
    """Iterate the billiard map from ``start`` until the line escapes."""
    cls, rec = phase_of(shape, start)
    if cls.tag not in _REFLECTABLE + _TERMINAL:
        raise NotReflectable(f"start line is not in the phase space: {cls}")
    entry = rec.entering if rec is not None else None
    lines = [start]
    departures = [None if entry is None else (entry.point, entry.normal)]
    hits = []
    while cls.tag not in _TERMINAL:
        if len(hits) >= cap:
            partial = Trajectory(tuple(lines), _records(lines, departures, hits),
                                 tuple(h.point for h in hits), complete=False)
            raise MaxReflectionsExceeded(f"reflection cap {cap} reached", partial)
        hit = rec.exiting
        hits.append(hit)
        lines.append(_reflect_at(hit, lines[-1].v))
        departures.append((hit.point, hit.normal))
        cls, rec = phase_of(shape, lines[-1])
        if cls.tag == PhaseTag.NOT_IN_PHASE_SPACE or cls.tag == PhaseTag.DELTA1:
            _raise_for_class(cls)
    log.debug("trajectory finished after %d reflections", len(hits))
    points = ([] if entry is None else [entry.point]) + [h.point for h in hits]
    return Trajectory(tuple(lines), _records(lines, departures, hits), tuple(points),
                      True, cls.tag)


def terminal_line(shape, line, cap=REFLECTION_CAP):
    """``(mu^m(line), m)`` with ``m`` minimal such that the result escapes."""
    traj = run_trajectory(shape, line, cap)
    return traj.final, traj.m


def sigma_map(shape, line):
    """The limit of the billiard map at a line of Delta_0."""
    shape.require_valid()
    if not on_gamma(shape, line.v):
        raise NotOnDelta0("direction is not on Gamma")
    n = gamma_normal(shape, line.v)
    pairing = float(line.Q @ n)
    if pairing <= 0.0:
        raise NotOnDelta0(f"<n_v, Q> = {pairing:.3g} is not positive")
    return OrientedLine(line.v, line.Q - 2.0 * pairing * n)


def sigma_inverse(shape, line):
    """Inverse of :func:`sigma_map`, defined on the interior of Delta_1."""
    shape.require_valid()
    if not on_gamma(shape, line.v):
        raise NotOnDelta0("direction is not on Gamma")
    n = gamma_normal(shape, line.v)
    pairing = float(line.Q @ n)
    if pairing >= 0.0:
        raise NotOnDelta0(f"<n_v, Q> = {pairing:.3g} is not negative")
    return OrientedLine(line.v, line.Q - 2.0 * pairing * n)


@dataclass
class SigmaLimitReport:
    branch: str
    target: OrientedLine
    scales: list = field(default_factory=list)
    distances: list = field(default_factory=list)
    skipped: list = field(default_factory=list)
    counts: list = field(default_factory=list)
    tol: float = 1e-6
    min_scale: float = 1e-9

    @property
    def converged(self):
        return any(d < self.tol for d in self.distances)

    @property
    def monotone(self):
        d = self.distances
        return all(b < a for a, b in zip(d[:-1], d[1:]))

    @property
    def ok(self):
        return self.converged and self.monotone


def perturbed_line(shape, line, eps):
    """``line`` with its direction tilted by ``eps`` along ``-n_v`` (out of D).

    Negative ``eps`` tilts into D.  The point ``Q`` stays on the line.
    """
    n = gamma_normal(shape, line.v)
    w = normalize(line.v - eps * n)
    return line_from_point_direction(line.Q, w)


def sigma_limit_check(shape, line, s=1e-2, tol=1e-6, min_scale=1e-9, branch="outside"):
    """Approach a Delta_0 line by lines of psi and compare mu with sigma.

    With ``branch="outside"`` the directions leave the closure of D, the
    approximants lie in psi and ``mu(x_k)`` is compared against
    ``sigma(x)``.  Scales at which the tilted line is not yet in psi are
    listed in ``skipped`` and do not count.  With ``branch="inside"`` they move into D, the
    approximants escape without reflecting and are compared with ``x``.
    """
    if not (s > 0.0) or not math.isfinite(s):
        raise ValueError("sequence scale must be a positive finite number")
    if branch not in ("outside", "inside"):
        raise ValueError(f"unknown branch {branch!r}")
    target = sigma_map(shape, line) if branch == "outside" else line
    report = SigmaLimitReport(branch, target, tol=tol, min_scale=min_scale)
    wanted = PhaseTag.PSI if branch == "outside" else PhaseTag.PSI_PLUS
    eps = s
    while eps >= min_scale:
        xk = perturbed_line(shape, line, eps if branch == "outside" else -eps)
        cls, _ = phase_of(shape, xk)
        if cls.tag != wanted:
            # too coarse: the tilted line does not yet meet the cone as required
            report.skipped.append((eps, cls.tag.value))
            eps *= 0.5
            continue
        if branch == "outside":
            image, count = billiard_map(shape, xk), 1
        else:
            image, count = terminal_line(shape, xk)
        report.scales.append(eps)
        report.counts.append(count)
        report.distances.append(line_distance(image, target))
        if report.distances[-1] < tol:
            break
        eps *= 0.5
    return report


def inverse_billiard_map(shape, line):
    """The line that the billiard map sends to ``line``: time reversal conjugates mu."""
    return billiard_map(shape, line.reversed()).reversed()
