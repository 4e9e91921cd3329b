import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conebilliard.errors import RootFindFailure
from conebilliard.geometry.roots import (bisect_sign_change, golden_section_min,
                                         negative_interval)


def test_golden_section_finds_parabola_minimum():
    t, g = golden_section_min(lambda t: (t - 0.3) ** 2 + 1.0, -5.0, 5.0)
    assert t == pytest.approx(0.3, abs=1e-6)
    assert g == pytest.approx(1.0)


def test_golden_section_stops_at_first_negative():
    calls = []

    def g(t):
        calls.append(t)
        return abs(t - 1.0) - 0.5

    t, val = golden_section_min(g, -10.0, 10.0, stop_below=0.0)
    assert val < 0.0
    assert len(calls) < 30


def test_bisection_either_orientation():
    g = lambda t: t - 2.0
    assert bisect_sign_change(g, 0.0, 5.0) == pytest.approx(2.0, rel=1e-12)
    assert bisect_sign_change(lambda t: 2.0 - t, 5.0, 0.0) == pytest.approx(2.0, rel=1e-12)


def test_bisection_iteration_cap():
    with pytest.raises(RootFindFailure):
        bisect_sign_change(lambda t: t - 1e-3, 0.0, 1e6, rel_tol=0.0, max_iter=3)


def test_negative_interval_bounded_and_half_infinite():
    t_a, t_b, _ = negative_interval(lambda t: abs(t) - 1.0)
    assert (t_a, t_b) == (pytest.approx(-1.0, rel=1e-12), pytest.approx(1.0, rel=1e-12))
    t_a, t_b, _ = negative_interval(lambda t: 2.0 - t if t < 2.0 else -0.5 * (t - 2.0))
    assert t_a == pytest.approx(2.0, rel=1e-12) and t_b == math.inf
    assert negative_interval(lambda t: t * t + 1.0)[0] is None


@settings(max_examples=200, deadline=None)
@given(c=st.floats(-50, 50), r=st.floats(1e-3, 50))
def test_negative_interval_of_shifted_abs(c, r):
    t_a, t_b, _ = negative_interval(lambda t: abs(t - c) - r, scale=1.0)
    assert t_a == pytest.approx(c - r, abs=1e-10 * max(1.0, abs(c) + r))
    assert t_b == pytest.approx(c + r, abs=1e-10 * max(1.0, abs(c) + r))
