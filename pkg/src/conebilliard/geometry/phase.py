"""Classification of oriented lines into the pieces of the phase space."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from ..errors import TangentLine, VertexHit
from .intersect import _inward_normal, intersect


class PhaseTag(str, enum.Enum):
    PSI_MINUS = "PsiMinus"
    PSI = "Psi"
    PSI_PLUS = "PsiPlus"
    DELTA0 = "Delta0"
    DELTA1 = "Delta1"
    NOT_IN_PHASE_SPACE = "NotInPhaseSpace"


@dataclass(frozen=True)
class PhaseClass:
    tag: PhaseTag
    reason: str | None = None

    def __str__(self):
        return self.tag.value if self.reason is None else f"{self.tag.value}({self.reason})"

    @property
    def in_phase_space(self):
        """Member of Psi (Delta0 lies inside psi_+)."""
        return self.tag in (PhaseTag.PSI_MINUS, PhaseTag.PSI, PhaseTag.PSI_PLUS, PhaseTag.DELTA0)

    @property
    def escaping(self):
        return self.tag in (PhaseTag.PSI_PLUS, PhaseTag.DELTA0)


def on_gamma(shape, v):
    """Whether the unit vector ``v`` lies on Gamma = K ∩ S^{n-1} within tolerance."""
    return v[-1] > 0.0 and abs(shape.section.indicator(v)) <= shape.tol.gamma


def direction_escapes(shape, v):
    """True iff ``v`` lies in the closed escape region: the closure of D."""
    shape.require_valid()
    v = np.asarray(v, dtype=float)
    return bool(v[-1] > 0.0 and shape.section.indicator(v) <= shape.tol.gamma)


def gamma_normal(shape, v):
    """Inward normal n_v at a direction ``v`` on Gamma."""
    return _inward_normal(shape.section, np.asarray(v, dtype=float))


def phase_of(shape, line):
    """``(PhaseClass, Intersection | None)`` for ``line``."""
    shape.require_valid()
    Q, v = line.Q, line.v
    if float(np.linalg.norm(Q)) < shape.tol.origin:
        return PhaseClass(PhaseTag.NOT_IN_PHASE_SPACE, "through vertex"), None
    if on_gamma(shape, v):
        pairing = float(gamma_normal(shape, v) @ Q)
        tag = PhaseTag.DELTA0 if pairing > 0.0 else PhaseTag.DELTA1
        return PhaseClass(tag), None
    try:
        rec = intersect(shape, line)
    except TangentLine:
        return PhaseClass(PhaseTag.NOT_IN_PHASE_SPACE, "tangent"), None
    except VertexHit:
        return PhaseClass(PhaseTag.NOT_IN_PHASE_SPACE, "through vertex"), None
    if rec.empty:
        scale = max(1.0, float(np.linalg.norm(Q)))
        if rec.min_value <= shape.tol.tangent * scale:
            return PhaseClass(PhaseTag.NOT_IN_PHASE_SPACE, "tangent"), rec
        return PhaseClass(PhaseTag.NOT_IN_PHASE_SPACE, "misses"), rec
    lo_inf, hi_inf = math.isinf(rec.t_a), math.isinf(rec.t_b)
    if lo_inf and hi_inf:
        return PhaseClass(PhaseTag.NOT_IN_PHASE_SPACE, "inside everywhere"), rec
    if lo_inf:
        return PhaseClass(PhaseTag.PSI_MINUS), rec
    if hi_inf:
        return PhaseClass(PhaseTag.PSI_PLUS), rec
    return PhaseClass(PhaseTag.PSI), rec


def classify(shape, line):
    """The phase-space class of an oriented line."""
    return phase_of(shape, line)[0]
