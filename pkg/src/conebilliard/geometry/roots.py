"""Scalar root finding for convex functions restricted to a line.

Everything here works on plain Python callables ``g(t) -> float``.  The
indicator of a convex cone is convex along any line, so ``{t : g(t) < 0}``
is a single open interval; finding one point inside it is enough to
bracket both of its endpoints.
"""
import math

from ..config import MAX_ITER, ROOT_TOL, BRACKET_LIMIT
from ..errors import RootFindFailure

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_min(g, a, b, max_iter=MAX_ITER, rel_tol=ROOT_TOL, stop_below=None):
    """Minimise a unimodal ``g`` on ``[a, b]``.

    Returns ``(t, g(t))``.  If ``stop_below`` is given the search returns as
    soon as a value strictly below it is seen.
    """
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    gc, gd = g(c), g(d)
    best = (c, gc) if gc <= gd else (d, gd)
    for _ in range(max_iter):
        if stop_below is not None and best[1] < stop_below:
            return best
        if b - a <= rel_tol * max(1.0, abs(a), abs(b)):
            break
        if gc <= gd:
            b, d, gd = d, c, gc
            c = b - INV_PHI * (b - a)
            gc = g(c)
            if gc < best[1]:
                best = (c, gc)
        else:
            a, c, gc = c, d, gd
            d = a + INV_PHI * (b - a)
            gd = g(d)
            if gd < best[1]:
                best = (d, gd)
    return best


def bisect_sign_change(g, neg, pos, rel_tol=ROOT_TOL, max_iter=MAX_ITER):
    """Locate the zero of ``g`` between ``neg`` (g < 0) and ``pos`` (g >= 0).

    ``neg`` may lie on either side of ``pos``.  Stops when the bracket is
    below ``rel_tol * max(1, |t|)`` or cannot be split further in floating
    point.
    """
    for _ in range(max_iter):
        if abs(pos - neg) <= rel_tol * max(1.0, abs(neg), abs(pos)):
            return 0.5 * (neg + pos)
        mid = 0.5 * (neg + pos)
        if mid == neg or mid == pos:
            return mid
        if g(mid) < 0.0:
            neg = mid
        else:
            pos = mid
    raise RootFindFailure(f"bisection did not converge in {max_iter} iterations "
                          f"(bracket [{min(neg, pos)!r}, {max(neg, pos)!r}])")


def find_negative_point(g, scale=1.0, max_iter=MAX_ITER, limit=BRACKET_LIMIT):
    """Find ``t`` with ``g(t) < 0`` for a convex ``g``, or the minimiser if none.

    The window ``[-T, T]`` doubles until ``g`` is non-decreasing outward on
    both sides (so the minimiser is inside) or ``T`` reaches ``limit``; the
    window is then searched by golden section.  Returns ``(t, g(t))``.
    """
    g0 = g(0.0)
    if g0 < 0.0:
        return 0.0, g0
    T = max(1.0, scale)
    prev_l = prev_r = g0
    while True:
        gl = g(-T)
        if gl < 0.0:
            return -T, gl
        gr = g(T)
        if gr < 0.0:
            return T, gr
        if (gl >= prev_l and gr >= prev_r) or T >= limit:
            break
        prev_l, prev_r = gl, gr
        T = min(2.0 * T, limit)
    return golden_section_min(g, -T, T, max_iter=max_iter, stop_below=0.0)


def expand_to_nonnegative(g, z, direction, scale=1.0, limit=BRACKET_LIMIT):
    """Walk from ``z`` (where g < 0) in ``direction`` until ``g >= 0``.

    Returns the first such ``t`` or ``None`` if ``g`` stays negative up to
    ``|t| = limit`` (the interval is unbounded on that side).
    """
    step = max(1.0, scale)
    while True:
        t = z + direction * step
        if abs(t) >= limit:
            t = math.copysign(limit, direction)
            return t if g(t) >= 0.0 else None
        if g(t) >= 0.0:
            return t
        step *= 2.0


def negative_interval(g, scale=1.0, rel_tol=ROOT_TOL, max_iter=MAX_ITER, limit=BRACKET_LIMIT):
    """The open interval where a convex ``g`` is negative.

    Returns ``(t_a, t_b, g_min)`` with infinite endpoints for unbounded
    sides, or ``(None, None, g_min)`` when ``g >= 0`` everywhere searched.
    """
    z, gz = find_negative_point(g, scale, max_iter=max_iter, limit=limit)
    if gz >= 0.0:
        return None, None, gz
    lo = expand_to_nonnegative(g, z, -1.0, scale, limit)
    hi = expand_to_nonnegative(g, z, +1.0, scale, limit)
    t_a = -math.inf if lo is None else bisect_sign_change(g, z, lo, rel_tol, max_iter)
    t_b = math.inf if hi is None else bisect_sign_change(g, z, hi, rel_tol, max_iter)
    return t_a, t_b, gz
