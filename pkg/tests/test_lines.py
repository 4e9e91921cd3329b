import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conebilliard.geometry import OrientedLine, line_distance, line_from_point_direction

vec3 = st.lists(st.floats(-1e3, 1e3), min_size=3, max_size=3)


def test_foot_of_perpendicular_example():
    line = line_from_point_direction((1, 0, 1), (-1, 0, 0))
    np.testing.assert_allclose(line.Q, (0, 0, 1), atol=1e-15)


def test_perpendicular_point_unchanged():
    line = line_from_point_direction((0, 2, 1), (1, 0, 0))
    np.testing.assert_array_equal(line.Q, (0, 2, 1))


def test_line_through_origin():
    line = line_from_point_direction((0, 0, 0), (0, 0, 1))
    np.testing.assert_array_equal(line.Q, (0, 0, 0))
    assert line.distance == 0.0


def test_rejects_malformed():
    with pytest.raises(ValueError):
        OrientedLine((1, 1, 0), (0, 0, 1))
    with pytest.raises(ValueError):
        OrientedLine((1, 0, 0), (1, 0, 1))
    with pytest.raises(ValueError):
        OrientedLine((1, 0), (0, 0, 1))
    with pytest.raises(ValueError):
        OrientedLine((np.nan, 0, 1), (0, 0, 0))


def test_reversal_and_vector():
    line = OrientedLine((0, 0, 1), (1, 0, 0))
    back = line.reversed()
    np.testing.assert_array_equal(back.v, (0, 0, -1))
    assert line_distance(line, back) == pytest.approx(2.0)
    assert line.as_vector().shape == (6,)


@settings(max_examples=300, deadline=None)
@given(P=vec3, w=vec3, s=st.floats(-1e3, 1e3))
def test_refooting_is_tight_and_idempotent(P, w, s):
    w = np.array(w)
    if np.linalg.norm(w) < 1e-3:
        return
    v = w / np.linalg.norm(w)
    line = line_from_point_direction(P, v)
    assert abs(float(line.v @ line.Q)) <= 1e-12 * max(1.0, line.distance)
    again = line_from_point_direction(line.Q + s * v, v)
    scale = max(1.0, np.linalg.norm(P) + abs(s))
    np.testing.assert_allclose(again.Q, line.Q, atol=1e-13 * scale)
