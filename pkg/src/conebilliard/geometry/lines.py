"""Oriented lines as points of the tangent bundle of the sphere."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

LINE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class OrientedLine:
    """The line ``{Q + t v}`` with ``|v| = 1`` and ``<v, Q> = 0``.

    ``Q`` is the foot of the perpendicular from the origin.  The
    constructor only rejects grossly malformed input; lines produced by
    :func:`line_from_point_direction` are tight to rounding.
    """

    v: np.ndarray
    Q: np.ndarray

    def __post_init__(self):
        v = np.array(self.v, dtype=float)
        Q = np.array(self.Q, dtype=float)
        if v.ndim != 1 or v.shape != Q.shape or v.shape[0] < 2:
            raise ValueError("v and Q must be vectors of the same dimension >= 2")
        if not (np.all(np.isfinite(v)) and np.all(np.isfinite(Q))):
            raise ValueError("line coordinates must be finite")
        if abs(float(v @ v) - 1.0) > LINE_TOL:
            raise ValueError(f"direction is not a unit vector (|v| = {np.linalg.norm(v):.12g})")
        if abs(float(v @ Q)) > LINE_TOL * max(1.0, float(np.linalg.norm(Q))):
            raise ValueError(f"<v, Q> = {float(v @ Q):.3g} is not zero")
        v.setflags(write=False)
        Q.setflags(write=False)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "Q", Q)

    @property
    def dim(self):
        return self.v.shape[0]

    @property
    def distance(self):
        """Distance from the line to the origin."""
        return float(np.linalg.norm(self.Q))

    def point(self, t):
        return self.Q + t * self.v

    def reversed(self):
        """The same line with the opposite orientation."""
        return OrientedLine(-self.v, self.Q)

    def as_vector(self):
        return np.concatenate([self.v, self.Q])

    def __repr__(self):
        return f"OrientedLine(v={self.v.tolist()}, Q={self.Q.tolist()})"


def line_from_point_direction(P, v):
    """The oriented line through ``P`` with unit direction ``v``."""
    P = np.asarray(P, dtype=float)
    v = np.asarray(v, dtype=float)
    Q = P - float(P @ v) * v
    # second pass: for |P| >> |Q| the first leaves <v, Q> ~ eps |P|
    Q = Q - float(Q @ v) * v
    return OrientedLine(v, Q)


def line_distance(a, b):
    """Euclidean distance between two lines as points ``(v, Q)`` of R^2n."""
    return float(np.linalg.norm(a.as_vector() - b.as_vector()))
