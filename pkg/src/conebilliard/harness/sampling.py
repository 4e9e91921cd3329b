"""Seeded random oriented lines."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..config import ORIGIN_TOL, SAMPLE_RADIUS
from ..geometry.lines import OrientedLine
from ..geometry.phase import phase_of


def random_line(rng, dim, radius=SAMPLE_RADIUS):
    """``v`` uniform on the sphere, ``Q`` uniform in the radius-``radius`` ball of ``v^perp``."""
    v = rng.standard_normal(dim)
    v /= np.linalg.norm(v)
    w = rng.standard_normal(dim)
    w -= (w @ v) * v
    w /= np.linalg.norm(w)
    r = radius * rng.random() ** (1.0 / (dim - 1))
    Q = r * w
    Q -= (Q @ v) * v
    return OrientedLine(v, Q)


@dataclass
class SampleStats:
    drawn: int = 0
    accepted: int = 0

    @property
    def acceptance_rate(self):
        return self.accepted / self.drawn if self.drawn else 0.0


def sample_phase_space(shape, count, rng, radius=SAMPLE_RADIUS, max_draws=None, stats=None):
    """Rejection-sample ``count`` lines of psi_-, psi or psi_+.

    Returns ``[(line, PhaseClass), ...]``.  Stops early after ``max_draws``
    draws (default ``100 * count``) so a degenerate configuration such
    as ``radius = 0`` terminates.
    """
    stats = SampleStats() if stats is None else stats
    max_draws = 100 * max(count, 1) if max_draws is None else max_draws
    out = []
    while len(out) < count and stats.drawn < max_draws:
        line = random_line(rng, shape.dim, radius)
        stats.drawn += 1
        if line.distance < ORIGIN_TOL:
            continue
        cls, _ = phase_of(shape, line)
        if cls.tag.value in ("PsiMinus", "Psi", "PsiPlus"):
            stats.accepted += 1
            out.append((line, cls))
    return out


def _horizontal_direction(rng, dim):
    e = rng.standard_normal(dim - 1)
    return e / np.linalg.norm(e)


def gamma_direction(shape, rng):
    """A unit vector on Gamma, built from the radial function of the section."""
    e = _horizontal_direction(rng, shape.dim)
    x = np.append(shape.section.radius(e) * e, 1.0)
    return x / np.linalg.norm(x)


def interior_direction(shape, rng, max_fraction=0.99):
    """A unit vector in D, a fraction of the way from v0 to Gamma in the hyperplane."""
    e = _horizontal_direction(rng, shape.dim)
    u = max_fraction * rng.random()
    x = np.append(u * shape.section.radius(e) * e, 1.0)
    return x / np.linalg.norm(x)


def _offset(rng, v, radius, avoid=None):
    """Random vector of norm <= radius orthogonal to v (and to ``avoid``)."""
    basis = [v] if avoid is None else [v, avoid]
    w = rng.standard_normal(len(v))
    for b in basis:
        w -= (w @ b) * b
    nw = np.linalg.norm(w)
    if nw == 0.0:
        return w
    return radius * rng.random() * w / nw


def delta0_line(shape, rng, radius=SAMPLE_RADIUS, min_pairing=0.05):
    """An oriented line of Delta_0: ``v`` on Gamma and ``<n_v, Q> > 0``."""
    from ..geometry.phase import gamma_normal

    v = gamma_direction(shape, rng)
    n = gamma_normal(shape, v)
    a = min_pairing + (radius - min_pairing) * rng.random()
    Q = _offset(rng, v, radius, avoid=n) + a * n
    Q -= (Q @ v) * v
    return OrientedLine(v, Q)


def escaping_line(shape, rng, radius=SAMPLE_RADIUS, max_fraction=0.99):
    """A line of psi_+ whose direction lies in D."""
    v = interior_direction(shape, rng, max_fraction)
    while True:
        Q = _offset(rng, v, radius)
        if np.linalg.norm(Q) >= ORIGIN_TOL:
            return OrientedLine(v, Q)
