"""Reflection counts in a planar angle against an unfolding oracle."""
from __future__ import annotations

import collections
import math
from dataclasses import dataclass, field

import numpy as np

from ..dynamics import run_trajectory
from ..geometry.lines import OrientedLine
from ..geometry.shapes import planar_angle

GENERIC_TOL = 1e-9


def reflection_bound(theta):
    """``ceil(pi / theta)``, robust to ``pi / theta`` landing a hair above an integer."""
    return math.ceil(math.pi / theta - GENERIC_TOL)


def is_generic(theta):
    ratio = math.pi / theta
    return abs(ratio - round(ratio)) > GENERIC_TOL


def unfolded_count(theta, v, Q):
    """Reflections of the line ``(v, Q)`` coming from infinity inside the angle.

    Unfolding the angle turns the trajectory into the straight line,
    whose polar angle sweeps ``pi`` from the direction ``-v``.  Each
    crossing of a copy of a boundary ray is a reflection.
    """
    phi = math.atan2(-v[1], -v[0])
    left = 0.5 * (math.pi + theta)
    right = 0.5 * (math.pi - theta)
    ccw = Q[0] * v[1] - Q[1] * v[0] > 0.0
    gap = left - phi if ccw else phi - right
    return math.floor((math.pi - gap) / theta) + 1


def planar_start(theta, rng, offset=3.0):
    """A start in psi_-: the line arrives from infinity inside the angle."""
    phi = 0.5 * (math.pi - theta) + theta * rng.uniform(0.001, 0.999)
    v = -np.array([math.cos(phi), math.sin(phi)])
    while True:
        s = offset * rng.uniform(-1.0, 1.0)
        if abs(s) > 1e-6:
            break
    Q = s * np.array([-v[1], v[0]])
    return OrientedLine(v, Q)


@dataclass
class AngleReport:
    theta: float
    bound: int
    generic: bool
    counts: collections.Counter = field(default_factory=collections.Counter)
    mismatches: int = 0
    errors: int = 0

    @property
    def max_count(self):
        return max(self.counts) if self.counts else 0

    @property
    def within_bound(self):
        return self.max_count <= self.bound

    @property
    def attained(self):
        return self.counts.get(self.bound, 0) > 0

    @property
    def both_realized(self):
        if not self.generic:
            return True
        return self.attained and self.counts.get(self.bound - 1, 0) > 0

    @property
    def passed(self):
        return (self.within_bound and self.attained and self.both_realized
                and self.mismatches == 0 and self.errors == 0)

    def summary(self):
        hist = ", ".join(f"{k}: {v}" for k, v in sorted(self.counts.items()))
        return (f"theta={self.theta:.6g} bound={self.bound} generic={self.generic} "
                f"max={self.max_count} counts={{{hist}}} oracle_mismatches={self.mismatches} "
                f"errors={self.errors} -> {'PASS' if self.passed else 'FAIL'}")


def run_angle_oracle(theta, samples=1000, seed=0):
    shape = planar_angle(theta)
    rng = np.random.default_rng(seed)
    report = AngleReport(theta, reflection_bound(theta), is_generic(theta))
    for _ in range(samples):
        start = planar_start(theta, rng)
        try:
            m = run_trajectory(shape, start).m
        except Exception:
            report.errors += 1
            continue
        report.counts[m] += 1
        if m != unfolded_count(theta, start.v, start.Q):
            report.mismatches += 1
    return report
