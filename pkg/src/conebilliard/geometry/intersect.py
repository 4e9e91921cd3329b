"""Indicator, surface normals and line/cone intersection."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from ..errors import NotOnSurface, RootFindFailure, TangentLine, VertexHit
from .roots import negative_interval
from .shapes import EllipsoidSection

log = logging.getLogger(__name__)

SURFACE_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class SurfaceHit:
    t: float
    point: np.ndarray
    normal: np.ndarray
    incidence: float


@dataclass(frozen=True, eq=False)
class Intersection:
    """``{t : Q + t v in conv(K)^o} = (t_a, t_b)``; ``t_a is None`` when empty."""

    t_a: float | None
    t_b: float | None
    hits: tuple
    min_value: float

    @property
    def empty(self):
        return self.t_a is None

    @property
    def entering(self):
        if self.t_a is None or math.isinf(self.t_a):
            return None
        return self.hits[0]

    @property
    def exiting(self):
        if self.t_b is None or math.isinf(self.t_b):
            return None
        return self.hits[-1]


def inside_indicator(shape, x):
    """Signed membership: < 0 inside conv(K), 0 on K, > 0 outside.

    Returns ``+inf`` for ``x^n <= 0``.
    """
    shape.require_valid()
    x = np.asarray(x, dtype=float)
    if x[-1] <= 0.0:
        return math.inf
    return shape.section.indicator(x)


def _inward_normal(section, x):
    grad = section.gradient(x)
    n = -grad / np.linalg.norm(grad)
    # cone normals annihilate the radial direction; remove rounding residue
    n = n - (float(n @ x) / float(x @ x)) * x
    return n / np.linalg.norm(n)


def surface_point(shape, x):
    """Inward unit normal of K at a surface point ``x``."""
    shape.require_valid()
    x = np.asarray(x, dtype=float)
    norm = float(np.linalg.norm(x))
    if x[-1] <= 0.0 or norm == 0.0:
        raise NotOnSurface(f"{x.tolist()} is not on the cone")
    G = shape.section.indicator(x)
    if abs(G) > SURFACE_TOL * max(1.0, norm):
        raise NotOnSurface(f"G(x) = {G:.3g} at {x.tolist()}")
    n = _inward_normal(shape.section, x)
    assert n[-1] > 0.0, "inward normal must pair positively with the axis"
    return n


def _quadratic_roots(a, b, c):
    if a == 0.0:
        return [] if b == 0.0 else [-c / b]
    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        return []
    q = -0.5 * (b + math.copysign(math.sqrt(disc), b))
    if q == 0.0:
        return [0.0]
    return sorted({q / a, c / q})


def _closed_form_interval(section, Q, v, limit=math.inf):
    a, b, c = section.line_quadratic(Q, v)
    # a direction on the cone within rounding leaves a spurious root near
    # |t| ~ 1 / eps; like the generic solver, ignore anything beyond limit
    roots = [t for t in _quadratic_roots(a, b, c) if abs(t) <= limit]
    edges = [-math.inf] + roots + [math.inf]
    qn, vn = float(Q[-1]), float(v[-1])
    found = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        if math.isinf(lo) and math.isinf(hi):
            tp = 0.0
        elif math.isinf(lo):
            tp = hi - max(1.0, abs(hi))
        elif math.isinf(hi):
            tp = lo + max(1.0, abs(lo))
        else:
            tp = 0.5 * (lo + hi)
        if (a * tp + b) * tp + c < 0.0 and qn + tp * vn > 0.0:
            found.append((lo, hi))
    if not found:
        return None, None, _touching_value(section, Q, v, a, b, c)
    if len(found) > 1:
        raise RootFindFailure(f"closed form found {len(found)} interior components")
    return found[0][0], found[0][1], math.nan


def _touching_value(section, Q, v, a, b, c):
    """``G`` at the critical point of the quadratic, where a tangent line touches."""
    if a <= 0.0:
        return math.inf
    x = Q - (b / (2.0 * a)) * v
    return abs(section.indicator(x)) if x[-1] > 0.0 else math.inf


def _make_hit(shape, Q, v, t, entering):
    point = Q + t * v
    if float(np.linalg.norm(point)) <= shape.tol.origin * max(1.0, abs(t)):
        raise VertexHit("line passes through the cone vertex")
    n = _inward_normal(shape.section, point)
    inc = float(v @ n)
    if abs(inc) <= shape.tol.tangent:
        raise TangentLine(f"incidence {inc:.3g} at t = {t!r}")
    if (inc > 0.0) != entering:
        raise RootFindFailure(f"incidence {inc:.3g} has the wrong sign at t = {t!r}")
    return SurfaceHit(t, point, n, inc)


def intersect(shape, line, method="auto"):
    """Intersect an oriented line with the open convex hull of K.

    ``method`` is ``"closed"`` (ellipsoid sections only), ``"generic"``
    (bracketing and bisection, any section) or ``"auto"``.
    """
    shape.require_valid()
    Q, v = line.Q, line.v
    section = shape.section
    if method == "auto":
        method = "closed" if isinstance(section, EllipsoidSection) else "generic"
    if method == "closed":
        if not isinstance(section, EllipsoidSection):
            raise ValueError("closed-form intersection needs an ellipsoid section")
        t_a, t_b, min_value = _closed_form_interval(section, Q, v, shape.tol.bracket_limit)
    elif method == "generic":
        g = section.line_function(Q, v)
        t_a, t_b, min_value = negative_interval(
            g, scale=max(1.0, float(np.linalg.norm(Q))), rel_tol=shape.tol.root,
            max_iter=shape.tol.max_iter, limit=shape.tol.bracket_limit)
    else:
        raise ValueError(f"unknown method {method!r}")
    if t_a is None:
        return Intersection(None, None, (), min_value)
    hits = []
    if not math.isinf(t_a):
        hits.append(_make_hit(shape, Q, v, t_a, entering=True))
    if not math.isinf(t_b):
        hits.append(_make_hit(shape, Q, v, t_b, entering=False))
    return Intersection(t_a, t_b, tuple(hits), min_value)
