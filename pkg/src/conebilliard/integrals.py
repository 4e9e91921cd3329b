"""First integrals: the quadratic integral, the lifted family and its smooth variant."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import REFLECTION_CAP
from .dynamics import run_trajectory
from .errors import OutsideClosedD, RootFindFailure
from .geometry.lines import OrientedLine
from .geometry.phase import PhaseTag, direction_escapes, gamma_normal
from .geometry.roots import bisect_sign_change
from .vectors import wedge_norm

TRANSPORT_FLOOR = 1e-6


def integral_I(line):
    """Sum over ``i < j`` of the squared angular momenta ``Q^i v^j - Q^j v^i``."""
    return wedge_norm(line.Q, line.v) ** 2


@dataclass
class CausticReport:
    radius: float
    line_deviation: float
    chord_deviation: float
    chords: int
    tol: float

    @property
    def ok(self):
        return max(self.line_deviation, self.chord_deviation) <= self.tol


def caustic_check(trajectory, tol=1e-9):
    """Check that every line and chord of ``trajectory`` touches the sphere of radius sqrt(I).

    Chord distances come from the endpoints alone: ``|a ^ b| / |b - a|``
    for consecutive cone points ``a, b``.
    """
    I = integral_I(trajectory.initial)
    if I == 0.0:
        raise ValueError("trajectory passes through the vertex; no caustic sphere")
    R = math.sqrt(I)
    line_dev = max(abs(l.distance - R) / R for l in trajectory.lines)
    chord_dev = 0.0
    pts = trajectory.points
    for a, b in zip(pts[:-1], pts[1:]):
        d = wedge_norm(a, b) / float(np.linalg.norm(b - a))
        chord_dev = max(chord_dev, abs(d - R) / R)
    return CausticReport(R, line_dev, chord_dev, max(len(pts) - 1, 0), tol)


class TransportField:
    """The field ``X`` on the closure of D.

    ``X(v)`` is the inward normal at the exit point ``p_v`` of the geodesic
    from ``v0 = e_n`` through ``v``, carried to ``v`` along that geodesic
    and scaled by ``g(v) = d(v0, v) / d(v0, p_v)``.
    """

    def __init__(self, shape):
        shape.require_valid()
        self.shape = shape
        self.dim = shape.dim
        self.v0 = np.zeros(shape.dim)
        self.v0[-1] = 1.0
        self.v0.setflags(write=False)

    def _geodesic(self, v):
        v = np.asarray(v, dtype=float)
        if not direction_escapes(self.shape, v):
            raise OutsideClosedD(f"{v.tolist()} is outside the closure of D")
        horiz = v[:-1]
        r = float(np.linalg.norm(horiz))
        if r == 0.0:
            return v, None, 0.0
        e = np.append(horiz / r, 0.0)
        return v, e, math.atan2(r, float(v[-1]))

    def exit_angle(self, v):
        """``(e, s_v, s*)``: geodesic direction, angle of ``v``, angle of ``p_v``.

        ``s*`` is located by bisection of ``s -> G(cos s v0 + sin s e)`` on
        ``[s_v, pi/2]``; ``G`` is negative (or zero) at ``v`` and positive on
        the horizon ``s = pi/2``.
        """
        v, e, s_v = self._geodesic(v)
        if e is None:
            return None, 0.0, None
        G = self.shape.section.indicator
        v0 = self.v0

        def h(s):
            return G(math.cos(s) * v0 + math.sin(s) * e)

        if h(s_v) >= 0.0:
            return e, s_v, s_v
        top = 0.5 * math.pi
        if h(top) <= 0.0:
            raise RootFindFailure("indicator is not positive on the horizon")
        s_star = bisect_sign_change(h, s_v, top, rel_tol=0.0)
        return e, s_v, s_star

    def exit_point(self, v):
        e, _, s_star = self.exit_angle(v)
        if e is None:
            return None
        return math.cos(s_star) * self.v0 + math.sin(s_star) * e

    def g(self, v):
        """Relative geodesic distance ``d(v0, v) / d(v0, p_v)``."""
        e, s_v, s_star = self.exit_angle(v)
        return 0.0 if e is None else s_v / s_star

    def g1(self, v):
        """Ratio of horizontal norms ``|v^| / |p_v^|``."""
        p = self.exit_point(v)
        if p is None:
            return 0.0
        return float(np.linalg.norm(np.asarray(v, dtype=float)[:-1]) / np.linalg.norm(p[:-1]))

    def __call__(self, v):
        e, s_v, s_star = self.exit_angle(v)
        v = np.asarray(v, dtype=float)
        if e is None:
            return np.zeros(self.dim)
        p = math.cos(s_star) * self.v0 + math.sin(s_star) * e
        n_p = gamma_normal(self.shape, p)
        denom = 1.0 + float(p @ v)
        assert denom >= TRANSPORT_FLOOR, "transport between nearly antipodal points"
        moved = n_p - (float(n_p @ v) / denom) * (p + v)
        return (s_v / s_star) * moved


def exit_point_closed_form(shape, v):
    """Exit point through the radial function of the section (test oracle)."""
    v = np.asarray(v, dtype=float)
    horiz = v[:-1]
    e = horiz / np.linalg.norm(horiz)
    x = np.append(shape.section.radius(e) * e, 1.0)
    return x / np.linalg.norm(x)


def transport_field(shape, v, field=None):
    """``X(v)`` for ``v`` in the closure of D."""
    field = TransportField(shape) if field is None else field
    return field(v)


def F_components(shape, line, field=None):
    """First ``n - 1`` coordinates of ``Q - <Q, X(v)> X(v)``."""
    X = transport_field(shape, line.v, field)
    Q = line.Q
    return (Q - float(Q @ X) * X)[:-1]


def tangent_basis(v):
    """Orthonormal basis of ``v^perp`` as the columns of an ``n x (n-1)`` matrix."""
    v = np.asarray(v, dtype=float).reshape(1, -1)
    return np.linalg.svd(v)[2][1:].T


def F_matrix(shape, v, field=None):
    """The linear map ``Q -> F(v, Q)`` on ``v^perp`` in the basis of :func:`tangent_basis`."""
    X = transport_field(shape, v, field)
    n = len(X)
    P = np.eye(n) - np.outer(X, X)
    return P[:-1] @ tangent_basis(v)


def F_singular_values(shape, v, field=None):
    """Singular values of :func:`F_matrix`, in decreasing order."""
    return np.linalg.svd(F_matrix(shape, v, field), compute_uv=False)


@dataclass(frozen=True)
class LiftedFunction:
    """A function on psi_+ extended to the phase space by running to escape."""

    base: object
    shape: object
    cap: int = REFLECTION_CAP

    def __call__(self, line):
        return lift(self.shape, self.base, line, self.cap)


def lift(shape, base, line, cap=REFLECTION_CAP):
    """``(base(mu^m(line)), m)``."""
    traj = run_trajectory(shape, line, cap)
    return base(traj.final), traj.m


@dataclass(frozen=True, eq=False)
class IntegralVector:
    values: np.ndarray
    smooth_values: np.ndarray
    m: int
    final: OrientedLine
    final_tag: PhaseTag | None = None


def _integral_values(shape, final, I, field):
    return np.concatenate([final.v[:-1], F_components(shape, final, field), [I]])


def _smooth_values(shape, final, tag, field):
    n = shape.dim
    if tag == PhaseTag.DELTA0:
        return np.zeros(2 * n - 1)
    h = (field.g1(final.v) - 1.0) ** 2
    return np.concatenate([final.v[:-1] * h, final.Q[:-1] * h, [h]])


def integral_vector(shape, line, field=None, cap=REFLECTION_CAP):
    """``(I_1, ..., I_{2n-1})`` and ``(I^s_1, ..., I^s_{2n-1})`` of ``line``."""
    field = TransportField(shape) if field is None else field
    traj = run_trajectory(shape, line, cap)
    final = traj.final
    values = _integral_values(shape, final, float(line.Q @ line.Q), field)
    smooth = _smooth_values(shape, final, traj.final_tag, field)
    return IntegralVector(values, smooth, traj.m, final, traj.final_tag)


def smooth_integral_vector(shape, line, field=None, cap=REFLECTION_CAP):
    return integral_vector(shape, line, field, cap).smooth_values


def reconstruct_line(shape, values, field=None, gamma_tol=None):
    """Recover the escaping line of a trajectory from its integral vector.

    Inside D the map ``Q -> F`` is invertible.  On Gamma it loses the
    ``n_v`` direction, which ``I_{2n-1} = |Q|^2`` and ``<n_v, Q> > 0``
    restore.
    """
    n = shape.dim
    values = np.asarray(values, dtype=float)
    vh = values[: n - 1]
    vn2 = 1.0 - float(vh @ vh)
    v = np.append(vh, math.sqrt(max(vn2, 0.0)))
    v /= np.linalg.norm(v)
    F = values[n - 1: 2 * n - 2]
    I = float(values[-1])
    B = tangent_basis(v)
    M = F_matrix(shape, v, field)
    sv = np.linalg.svd(M, compute_uv=False)
    tol = 1e-9 if gamma_tol is None else gamma_tol
    if sv[-1] > tol:
        Q = B @ np.linalg.solve(M, F)
        return OrientedLine(v, Q - float(Q @ v) * v)
    nv = gamma_normal(shape, v)
    Q0 = B @ np.linalg.lstsq(M, F, rcond=tol)[0]
    Q0 = Q0 - float(Q0 @ nv) * nv
    c = math.sqrt(max(I - float(Q0 @ Q0), 0.0))
    Q = Q0 + c * nv
    return OrientedLine(v, Q - float(Q @ v) * v)


def reconstruct_from_smooth(values):
    """Recover ``(v, Q)`` from a nonzero smooth integral vector."""
    values = np.asarray(values, dtype=float)
    n = (len(values) + 1) // 2
    h = float(values[-1])
    if h == 0.0:
        raise ValueError("smooth integrals vanish: the line cannot be recovered")
    vh = values[: n - 1] / h
    Qh = values[n - 1: 2 * n - 2] / h
    vn = math.sqrt(max(1.0 - float(vh @ vh), 0.0))
    v = np.append(vh, vn)
    Q = np.append(Qh, -float(vh @ Qh) / vn)
    return OrientedLine(v, Q)
