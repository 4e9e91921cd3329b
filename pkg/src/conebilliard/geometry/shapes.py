"""Cone shapes: cross-section families, validation and the shape JSON format.

A cone ``K = {t p : p in gamma, t > 0}`` is described by its cross-section
``gamma`` in the hyperplane ``x^n = 1``.  Each section family supplies a
convex, positively homogeneous indicator

    G(x) = gauge(x) - x^n

where ``gauge`` is a norm-like function of the horizontal part.  ``G`` is
negative exactly on the open convex hull of ``K``, zero on ``K`` and
positive elsewhere.  Homogeneity gives ``<grad G(x), x> = G(x)``, so the
gradient annihilates the radial direction on ``K``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .. import config
from ..config import Tolerances
from ..errors import AxisNotInterior, ConfigError, NonConvexSection, ShapeError


def _readonly(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class EllipsoidSection:
    """Section ``{y : (y - c)^T M (y - c) = 1}`` of the hyperplane, any n >= 2."""

    center: np.ndarray
    matrix: np.ndarray
    kind: str = field(default="ellipsoid", init=False)

    def __post_init__(self):
        object.__setattr__(self, "center", _readonly(np.atleast_1d(self.center)))
        object.__setattr__(self, "matrix", _readonly(np.atleast_2d(self.matrix)))

    @property
    def section_dim(self):
        return self.center.shape[0]

    def indicator(self, x):
        x = np.asarray(x, dtype=float)
        w = x[:-1] - self.center * x[-1]
        return math.sqrt(max(float(w @ self.matrix @ w), 0.0)) - float(x[-1])

    def gradient(self, x):
        x = np.asarray(x, dtype=float)
        w = x[:-1] - self.center * x[-1]
        Mw = self.matrix @ w
        s = math.sqrt(max(float(w @ Mw), 0.0))
        if s == 0.0:
            raise ZeroDivisionError("gradient undefined on the cone axis through the center")
        grad = np.empty_like(x)
        grad[:-1] = Mw / s
        grad[-1] = -float(self.center @ Mw) / s - 1.0
        return grad

    def line_quadratic(self, Q, v):
        """Coefficients of ``q(t) = s(t)^2 - x^n(t)^2`` along ``Q + t v``.

        ``q < 0`` with ``x^n > 0`` is the interior of the cone.
        """
        w0 = Q[:-1] - self.center * Q[-1]
        w1 = v[:-1] - self.center * v[-1]
        M = self.matrix
        Mw1 = M @ w1
        a = float(w1 @ Mw1) - v[-1] * v[-1]
        b = 2.0 * float(w0 @ Mw1) - 2.0 * Q[-1] * v[-1]
        c = float(w0 @ M @ w0) - Q[-1] * Q[-1]
        return a, b, c

    def line_function(self, Q, v):
        w0 = Q[:-1] - self.center * Q[-1]
        w1 = v[:-1] - self.center * v[-1]
        M = self.matrix
        qa = float(w1 @ M @ w1)
        qb = 2.0 * float(w0 @ M @ w1)
        qc = float(w0 @ M @ w0)
        qn, vn = float(Q[-1]), float(v[-1])
        sqrt = math.sqrt

        def g(t):
            s2 = (qa * t + qb) * t + qc
            return (sqrt(s2) if s2 > 0.0 else 0.0) - (qn + t * vn)

        return g

    def radius(self, direction):
        """Distance from the hyperplane origin to the section along ``direction``."""
        e = np.asarray(direction, dtype=float)
        M, c = self.matrix, self.center
        a = float(e @ M @ e)
        b = float(e @ M @ c)
        k = float(c @ M @ c) - 1.0
        return (b + math.sqrt(b * b - a * k)) / a

    def validate(self, dim):
        checks, errors, warnings = {}, [], []
        M, c = self.matrix, self.center
        checks["dimension"] = M.shape == (dim - 1, dim - 1) and c.shape == (dim - 1,)
        if not checks["dimension"]:
            errors.append(ShapeError(f"ellipsoid section needs a {dim - 1}-vector center "
                                     f"and a {dim - 1}x{dim - 1} matrix"))
            return checks, errors, warnings
        checks["finite"] = bool(np.all(np.isfinite(M)) and np.all(np.isfinite(c)))
        checks["symmetric"] = bool(np.allclose(M, M.T, rtol=0.0, atol=1e-12 * max(1.0, np.abs(M).max())))
        eig_min = float(np.linalg.eigvalsh(0.5 * (M + M.T)).min()) if checks["finite"] else -math.inf
        checks["convex"] = checks["symmetric"] and eig_min > 0.0
        if not checks["convex"]:
            errors.append(NonConvexSection(f"section matrix is not symmetric positive definite "
                                           f"(min eigenvalue {eig_min:.3g})"))
        checks["axis_interior"] = checks["finite"] and float(c @ M @ c) < 1.0
        if not checks["axis_interior"]:
            errors.append(AxisNotInterior("the point (0,...,0,1) is not inside the section"))
        return checks, errors, warnings

    def to_dict(self):
        return {"kind": "ellipsoid", "center": self.center.tolist(), "matrix": self.matrix.tolist()}


@dataclass(frozen=True, eq=False)
class RadialFourierSection:
    """Star-shaped curve ``r = rho(phi)`` in the plane ``x^3 = 1`` (n = 3 only).

    ``rho(phi) = a0 + sum_k cos[k-1] cos(k phi) + sin[k-1] sin(k phi)``.
    """

    a0: float
    cos: tuple = ()
    sin: tuple = ()
    kind: str = field(default="radial_fourier", init=False)

    def __post_init__(self):
        object.__setattr__(self, "a0", float(self.a0))
        object.__setattr__(self, "cos", tuple(float(a) for a in self.cos))
        object.__setattr__(self, "sin", tuple(float(b) for b in self.sin))
        k = max(len(self.cos), len(self.sin))
        object.__setattr__(self, "_terms", tuple(
            (j + 1,
             self.cos[j] if j < len(self.cos) else 0.0,
             self.sin[j] if j < len(self.sin) else 0.0)
            for j in range(k)))

    @property
    def section_dim(self):
        return 2

    def rho(self, phi):
        r = self.a0
        for k, a, b in self._terms:
            r += a * math.cos(k * phi) + b * math.sin(k * phi)
        return r

    def rho_derivatives(self, phi):
        """``(rho, rho', rho'')`` at scalar or array ``phi``."""
        phi = np.asarray(phi, dtype=float)
        r = np.full_like(phi, self.a0)
        d1 = np.zeros_like(phi)
        d2 = np.zeros_like(phi)
        for k, a, b in self._terms:
            c, s = np.cos(k * phi), np.sin(k * phi)
            r += a * c + b * s
            d1 += k * (-a * s + b * c)
            d2 -= k * k * (a * c + b * s)
        return r, d1, d2

    def indicator(self, x):
        r = math.hypot(x[0], x[1])
        if r == 0.0:
            return -float(x[2])
        return r / self.rho(math.atan2(x[1], x[0])) - float(x[2])

    def gradient(self, x):
        x0, x1 = float(x[0]), float(x[1])
        r = math.hypot(x0, x1)
        if r == 0.0:
            raise ZeroDivisionError("gradient undefined on the cone axis")
        phi = math.atan2(x1, x0)
        rho, d1, _ = (float(u) for u in self.rho_derivatives(phi))
        er = (x0 / r, x1 / r)
        ephi = (-x1 / r, x0 / r)
        gr, gphi = 1.0 / rho, -d1 / (rho * rho)
        return np.array([gr * er[0] + gphi * ephi[0], gr * er[1] + gphi * ephi[1], -1.0])

    def line_function(self, Q, v):
        q0, q1, q2 = (float(u) for u in Q)
        v0, v1, v2 = (float(u) for u in v)
        a0, terms = self.a0, self._terms
        hypot, atan2, cos, sin = math.hypot, math.atan2, math.cos, math.sin

        def g(t):
            x0 = q0 + t * v0
            x1 = q1 + t * v1
            r = hypot(x0, x1)
            if r == 0.0:
                return -(q2 + t * v2)
            phi = atan2(x1, x0)
            rho = a0
            for k, a, b in terms:
                rho += a * cos(k * phi) + b * sin(k * phi)
            return r / rho - (q2 + t * v2)

        return g

    def radius(self, direction):
        return self.rho(math.atan2(direction[1], direction[0]))

    def validate(self, dim):
        checks, errors, warnings = {}, [], []
        checks["dimension"] = dim == 3
        if not checks["dimension"]:
            errors.append(ShapeError("radial_fourier sections are only defined for n = 3"))
            return checks, errors, warnings
        phi = np.linspace(0.0, 2.0 * math.pi, config.CONVEXITY_GRID, endpoint=False)
        r, d1, d2 = self.rho_derivatives(phi)
        checks["finite"] = bool(np.all(np.isfinite(r)))
        # rho > 0 everywhere <=> the hyperplane origin is strictly inside
        checks["axis_interior"] = checks["finite"] and float(r.min()) > 0.0
        if not checks["axis_interior"]:
            errors.append(AxisNotInterior(f"rho(phi) <= 0 somewhere (min {float(r.min()):.3g})"))
        curvature = r * r + 2.0 * d1 * d1 - r * d2
        kmin = float(curvature.min())
        scale = float(np.max(r * r))
        checks["convex"] = kmin >= -config.CONVEXITY_TOL * scale
        checks["nondegenerate"] = kmin > config.CONVEXITY_TOL * scale
        if not checks["convex"]:
            at = float(phi[int(np.argmin(curvature))])
            errors.append(NonConvexSection(f"rho^2 + 2 rho'^2 - rho rho'' = {kmin:.3g} < 0 at phi = {at:.4f}"))
        elif not checks["nondegenerate"]:
            warnings.append(f"curvature numerator reaches {kmin:.3g}: the section is convex but "
                            f"its second fundamental form degenerates at isolated angles")
        return checks, errors, warnings

    def to_dict(self):
        return {"kind": "radial_fourier", "a0": self.a0, "cos": list(self.cos), "sin": list(self.sin)}


@dataclass
class ValidationReport:
    checks: dict
    errors: list
    warnings: list

    @property
    def ok(self):
        return not self.errors

    def raise_for_errors(self):
        if self.errors:
            raise self.errors[0]

    def __str__(self):
        lines = [f"{name}: {'pass' if ok else 'FAIL'}" for name, ok in self.checks.items()]
        lines += [f"error: {type(e).__name__}: {e}" for e in self.errors]
        lines += [f"warning: {w}" for w in self.warnings]
        return "\n".join(lines)


@dataclass(frozen=True, eq=False)
class ConeShape:
    """A cone over a strictly convex cross-section, validated on construction.

    Construction never raises for geometric reasons; an invalid shape
    carries its failing :class:`ValidationReport` and every geometric
    operation refuses it via :meth:`require_valid`.
    """

    dim: int
    section: EllipsoidSection | RadialFourierSection
    tol: Tolerances = field(default_factory=Tolerances)

    def __post_init__(self):
        if self.dim < 2:
            raise ConfigError("cone dimension must be at least 2")
        checks, errors, warnings = self.section.validate(self.dim)
        object.__setattr__(self, "report", ValidationReport(checks, errors, warnings))
        axis = np.zeros(self.dim)
        axis[-1] = 1.0
        object.__setattr__(self, "axis", _readonly(axis))

    @property
    def valid(self):
        return self.report.ok

    def require_valid(self):
        if self.report.errors:
            raise self.report.errors[0]

    @property
    def rotationally_symmetric(self):
        s = self.section
        if isinstance(s, RadialFourierSection):
            return not any(a or b for _, a, b in s._terms)
        M = s.matrix
        return (not np.any(s.center)) and np.allclose(M, M[0, 0] * np.eye(M.shape[0]), rtol=0, atol=0)

    def to_dict(self):
        return {"dim": self.dim, "section": self.section.to_dict(), "tol": self.tol.to_dict()}


def validate_shape(shape):
    """Re-run the standing-hypothesis checks on ``shape`` and return the report."""
    checks, errors, warnings = shape.section.validate(shape.dim)
    return ValidationReport(checks, errors, warnings)


def shape_from_dict(data):
    try:
        dim = int(data["dim"])
        sec = data["section"]
        kind = sec["kind"]
        if kind == "ellipsoid":
            section = EllipsoidSection(sec["center"], sec["matrix"])
        elif kind == "radial_fourier":
            section = RadialFourierSection(sec["a0"], sec.get("cos", ()), sec.get("sin", ()))
        else:
            raise ConfigError(f"unknown section kind {kind!r}")
        tol = Tolerances.from_dict(data.get("tol"))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed shape description: {exc}") from exc
    return ConeShape(dim, section, tol)


def load_shape(path):
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read shape file {path}: {exc}") from exc
    return shape_from_dict(data)


def circular_cone(dim=3, half_angle=math.pi / 4):
    r = math.tan(half_angle)
    return ConeShape(dim, EllipsoidSection(np.zeros(dim - 1), np.eye(dim - 1) / (r * r)))


def elliptic_cone(axes, center=None, rotation=None):
    """Cone over an ellipsoid with semi-axes ``axes``, optional center and rotation."""
    axes = np.asarray(axes, dtype=float)
    k = axes.shape[0]
    R = np.eye(k) if rotation is None else np.asarray(rotation, dtype=float)
    M = R @ np.diag(1.0 / axes ** 2) @ R.T
    c = np.zeros(k) if center is None else np.asarray(center, dtype=float)
    return ConeShape(k + 1, EllipsoidSection(c, 0.5 * (M + M.T)))


def fourier_cone(a0=1.0, cos=(), sin=()):
    return ConeShape(3, RadialFourierSection(a0, cos, sin))


def planar_angle(theta):
    """The planar angle of opening ``theta``: a cone in R^2 over two points."""
    if not 0.0 < theta < math.pi:
        raise ConfigError("angle must lie in (0, pi)")
    r = math.tan(theta / 2.0)
    return ConeShape(2, EllipsoidSection([0.0], [[1.0 / (r * r)]]))


def builtin_shapes():
    """The shapes the acceptance suite runs on."""
    rot = _rotation_4d()
    return {
        "circular": circular_cone(3),
        "ellipse": elliptic_cone([1.0, 0.5]),
        "fourier3": fourier_cone(1.0, cos=[0.0, 0.0, 0.1]),
        "ellipsoid4": elliptic_cone([1.0, 0.7, 0.5], center=[0.1, -0.05, 0.02], rotation=rot),
    }


def _rotation_4d():
    a, b = 0.3, -0.4
    Rz = np.array([[math.cos(a), -math.sin(a), 0.0], [math.sin(a), math.cos(a), 0.0], [0.0, 0.0, 1.0]])
    Rx = np.array([[1.0, 0.0, 0.0], [0.0, math.cos(b), -math.sin(b)], [0.0, math.sin(b), math.cos(b)]])
    return Rz @ Rx
