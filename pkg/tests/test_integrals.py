import math

import numpy as np
import pytest

from conebilliard.dynamics import inverse_billiard_map, run_trajectory, sigma_map
from conebilliard.errors import OutsideClosedD
from conebilliard.geometry import OrientedLine, gamma_normal, circular_cone
from conebilliard.harness.sampling import (delta0_line, escaping_line, gamma_direction,
                                           interior_direction, sample_phase_space)
from conebilliard.integrals import (F_components, F_singular_values, LiftedFunction,
                                    TransportField, caustic_check, exit_point_closed_form,
                                    integral_I, integral_vector, lift, reconstruct_from_smooth,
                                    reconstruct_line, smooth_integral_vector, transport_field)

S2 = 1 / math.sqrt(2)
START = OrientedLine((-1, 0, 0), (0, 0, 1))


def test_integral_I_examples(circ):
    assert integral_I(OrientedLine((0, 0, 1), (1, 0, 0))) == pytest.approx(1.0)
    assert integral_I(OrientedLine((0, 0, 1), (0, 0, 0))) == 0.0
    traj = run_trajectory(circ, START)
    assert [integral_I(l) for l in traj.lines] == [pytest.approx(1.0)] * 2


def test_integral_I_equals_norm_squared(rng):
    for _ in range(100):
        v = rng.standard_normal(4)
        v /= np.linalg.norm(v)
        Q = rng.standard_normal(4)
        line = OrientedLine(v, Q - (Q @ v) * v)
        assert integral_I(line) == pytest.approx(float(line.Q @ line.Q), rel=1e-12)


def test_caustic_example(circ):
    rep = caustic_check(run_trajectory(circ, START))
    assert rep.ok and rep.radius == pytest.approx(1.0) and rep.chords == 1


def test_caustic_rejects_vertex_line(circ):
    from conebilliard.dynamics import Trajectory
    line = OrientedLine((0, 0, 1), (0, 0, 0))
    with pytest.raises(ValueError):
        caustic_check(Trajectory((line,), (), ()))


def test_transport_examples(circ):
    field = TransportField(circ)
    np.testing.assert_array_equal(field(field.v0), 0.0)
    v = np.array([math.sin(math.pi / 8), 0.0, math.cos(math.pi / 8)])
    oracle = -0.5 * np.array([math.cos(math.pi / 8), 0.0, -math.sin(math.pi / 8)])
    np.testing.assert_allclose(transport_field(circ, v), oracle, atol=1e-12)
    assert field.g(v) == pytest.approx(0.5, abs=1e-12)
    with pytest.raises(OutsideClosedD):
        field(np.array([1.0, 0.0, 0.0]))


def test_transport_on_gamma_is_normal(shape, rng):
    field = TransportField(shape)
    for _ in range(50):
        v = gamma_direction(shape, rng)
        np.testing.assert_allclose(field(v), gamma_normal(shape, v), atol=1e-9)
        assert field.g(v) == pytest.approx(1.0, abs=1e-9)
        assert field.g1(v) == pytest.approx(1.0, abs=1e-9)


def test_transport_norm_is_g(shape, rng):
    field = TransportField(shape)
    for _ in range(50):
        v = interior_direction(shape, rng)
        g = field.g(v)
        assert 0.0 <= g <= 1.0
        assert np.linalg.norm(field(v)) == pytest.approx(g, abs=1e-12)
        assert abs(float(field(v) @ v)) < 1e-12
        np.testing.assert_allclose(field.exit_point(v), exit_point_closed_form(shape, v),
                                   atol=1e-12)


def test_g_and_g1_share_boundary_values_but_differ(circ):
    field = TransportField(circ)
    assert field.g(field.v0) == 0.0 == field.g1(field.v0)
    v = np.array([math.sin(math.pi / 8), 0.0, math.cos(math.pi / 8)])
    assert field.g1(v) == pytest.approx(math.sin(math.pi / 8) / math.sin(math.pi / 4))
    assert field.g1(v) != pytest.approx(field.g(v))


def test_F_at_axis_is_projection(circ):
    line = OrientedLine((0, 0, 1), (0.3, -0.7, 0))
    np.testing.assert_allclose(F_components(circ, line), (0.3, -0.7), atol=1e-15)


def test_glue_identity(shape, rng):
    field = TransportField(shape)
    for _ in range(100):
        x = delta0_line(shape, rng)
        a = F_components(shape, x, field)
        b = F_components(shape, sigma_map(shape, x), field)
        assert np.max(np.abs(a - b)) <= 1e-12


def test_rank_dichotomy(shape, rng):
    field = TransportField(shape)
    for _ in range(30):
        assert F_singular_values(shape, interior_direction(shape, rng), field)[-1] > 1e-6
        sv = F_singular_values(shape, gamma_direction(shape, rng), field)
        assert sv[-1] < 1e-9 and sv[-2] > 1e-6


def test_lift_examples(circ):
    assert lift(circ, lambda l: l.v[-1], START) == (pytest.approx(1.0), 1)
    escaping = OrientedLine((0, 0, 1), (1, 0, 0))
    assert lift(circ, lambda l: l.Q[0], escaping) == (1.0, 0)
    f = LiftedFunction(lambda l: float(l.Q[0]), circ)
    traj = run_trajectory(circ, START)
    assert f(traj.lines[0])[0] == f(traj.lines[1])[0]


def test_integral_vector_example(circ):
    iv = integral_vector(circ, START)
    np.testing.assert_allclose(iv.values, (0, 0, -1, 0, 1), atol=1e-15)
    assert iv.m == 1
    np.testing.assert_allclose(integral_vector(circ, iv.final).values, iv.values, atol=1e-15)


def test_integral_vector_constant_along_trajectories(shape, rng):
    field = TransportField(shape)
    for line, _ in sample_phase_space(shape, 20, rng):
        traj = run_trajectory(shape, line)
        ref = integral_vector(shape, line, field).values
        assert ref[-1] == pytest.approx(float(line.Q @ line.Q), rel=1e-14)
        for l in traj.lines:
            w = integral_vector(shape, l, field).values
            assert np.max(np.abs(w - ref)) <= 1e-8 * max(1.0, np.max(np.abs(ref)))


def test_reconstruction_in_D(shape, rng):
    field = TransportField(shape)
    for _ in range(50):
        x = escaping_line(shape, rng)
        rec = reconstruct_line(shape, integral_vector(shape, x, field).values, field)
        np.testing.assert_allclose(rec.as_vector(), x.as_vector(), atol=1e-8)


def test_reconstruction_on_delta0(shape, rng):
    field = TransportField(shape)
    for _ in range(20):
        x = delta0_line(shape, rng)
        rec = reconstruct_line(shape, integral_vector(shape, x, field).values, field)
        np.testing.assert_allclose(rec.as_vector(), x.as_vector(), atol=1e-8)


def test_smooth_vector_vanishes_on_delta(shape, rng):
    field = TransportField(shape)
    for _ in range(30):
        x = delta0_line(shape, rng)
        assert np.max(np.abs(smooth_integral_vector(shape, x, field))) <= 1e-12
        pre = inverse_billiard_map(shape, x)
        assert np.max(np.abs(smooth_integral_vector(shape, pre, field))) <= 1e-12


def test_smooth_vector_at_axis(circ):
    line = OrientedLine((0, 0, 1), (0.3, -0.7, 0))
    np.testing.assert_allclose(smooth_integral_vector(circ, line), (0, 0, 0.3, -0.7, 1), atol=1e-15)


def test_smooth_recovery(shape, rng):
    field = TransportField(shape)
    for _ in range(50):
        x = escaping_line(shape, rng)
        rec = reconstruct_from_smooth(integral_vector(shape, x, field).smooth_values)
        np.testing.assert_allclose(rec.as_vector(), x.as_vector(), atol=1e-8)
    with pytest.raises(ValueError):
        reconstruct_from_smooth(np.zeros(2 * shape.dim - 1))
