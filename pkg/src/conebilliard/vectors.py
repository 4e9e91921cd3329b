"""Small vector helpers shared across modules."""
import math

import numpy as np


def normalize(a):
    a = np.asarray(a, dtype=float)
    return a / np.linalg.norm(a)


def angle_between(a, b):
    """Angle in ``[0, pi]`` between two nonzero vectors.

    Uses ``2 atan2(|a^ - b^|, |a^ + b^|)``, which keeps full relative
    accuracy near 0 and pi where ``arccos`` of a clamped cosine does not.
    """
    ua, ub = normalize(a), normalize(b)
    return 2.0 * math.atan2(float(np.linalg.norm(ua - ub)), float(np.linalg.norm(ua + ub)))


def wedge_norm(a, b):
    """``|a ^ b|`` from the 2x2 minors, free of the cancellation in
    ``|a|^2 |b|^2 - <a, b>^2``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    minors = np.outer(a, b) - np.outer(b, a)
    return float(np.sqrt(0.5 * np.sum(minors * minors)))
