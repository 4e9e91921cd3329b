import json
import math

import numpy as np
import pytest

from conebilliard import dynamics
from conebilliard.geometry import PhaseTag, classify, planar_angle
from conebilliard.harness import io
from conebilliard.harness.angle import (is_generic, planar_start, reflection_bound,
                                        run_angle_oracle, unfolded_count)
from conebilliard.harness.checks import (build_ensemble, check_distance_invariance,
                                         check_termination, run_suite)
from conebilliard.harness.sampling import SampleStats, random_line, sample_phase_space


def test_random_line_distribution(rng):
    lines = [random_line(rng, 3) for _ in range(2000)]
    assert all(abs(float(l.v @ l.Q)) < 1e-12 for l in lines)
    r = np.array([l.distance for l in lines])
    assert r.max() <= 3.0
    # uniform in a disc: P(r < 1.5) = 1/4
    assert abs(np.mean(r < 1.5) - 0.25) < 0.04


def test_sampler_accepts_only_phase_space(shape, rng):
    stats = SampleStats()
    picked = sample_phase_space(shape, 200, rng, stats=stats)
    assert len(picked) == 200 and stats.acceptance_rate > 0
    for line, cls in picked:
        assert cls.tag in (PhaseTag.PSI_MINUS, PhaseTag.PSI, PhaseTag.PSI_PLUS)


def test_zero_radius_rejects_everything(circ, rng):
    stats = SampleStats()
    assert sample_phase_space(circ, 10, rng, radius=0.0, stats=stats) == []
    assert stats.accepted == 0 and stats.drawn > 0


def test_sampling_is_deterministic(circ):
    a = sample_phase_space(circ, 50, np.random.default_rng(7))
    b = sample_phase_space(circ, 50, np.random.default_rng(7))
    assert all(np.array_equal(x.as_vector(), y.as_vector()) for (x, _), (y, _) in zip(a, b))


def test_json_floats_have_17_digits():
    text = io.dumps({"a": 0.1, "b": [1.0, 2], "c": None, "d": True, "e": "x"})
    assert text == '{"a":0.10000000000000001,"b":[1.0,2],"c":null,"d":true,"e":"x"}'
    assert json.loads(text)["a"] == 0.1
    with pytest.raises(ValueError):
        io.dumps(math.inf)


def test_jsonl_roundtrip(circ, tmp_path):
    from conebilliard.geometry import OrientedLine
    traj = dynamics.run_trajectory(circ, OrientedLine((-1, 0, 0), (0, 0, 1)))
    path = tmp_path / "t.jsonl"
    io.write_jsonl(path, io.trajectory_records(traj))
    recs = io.read_jsonl(path)
    assert [r["k"] for r in recs[:-1]] == [1, 2]
    assert recs[-1]["m"] == 1
    assert recs[0]["alpha"] == traj.steps[0].alpha


def test_bound_and_genericity():
    assert reflection_bound(math.pi / 3) == 3
    assert reflection_bound(math.pi / 2) == 2
    assert reflection_bound(1.0) == 4
    assert reflection_bound(0.3) == 11
    assert not is_generic(math.pi / 3) and is_generic(1.0)


def test_unfolding_oracle_by_hand():
    # right angle, line x = 0.5 travelling down: bounces at (0.5, 0.5) and (-0.5, 0.5)
    theta = math.pi / 2
    shape = planar_angle(theta)
    from conebilliard.geometry import OrientedLine
    line = OrientedLine((0, -1), (0.5, 0))
    assert classify(shape, line).tag == PhaseTag.PSI_MINUS
    assert dynamics.run_trajectory(shape, line).m == unfolded_count(theta, line.v, line.Q) == 2


def test_oracle_agrees_with_simulation(rng):
    for theta in (1.0, 0.3, 2.5):
        shape = planar_angle(theta)
        for _ in range(100):
            start = planar_start(theta, rng)
            assert classify(shape, start).tag == PhaseTag.PSI_MINUS
            assert dynamics.run_trajectory(shape, start).m == unfolded_count(theta, start.v, start.Q)


@pytest.mark.parametrize("theta,expected", [(math.pi / 3, {3}), (math.pi / 2, {2}),
                                            (1.0, {3, 4})])
def test_angle_oracle_counts(theta, expected):
    rep = run_angle_oracle(theta, 300, seed=1)
    assert rep.passed and set(rep.counts) == expected


def test_default_suites_pass_on_acceptance_cones(shapes):
    for name in ("circular", "ellipse"):
        results = run_suite(shapes[name], "all", n=150, seed=3)
        failed = [r.line() for r in results if not r.passed]
        assert not failed, failed


def test_mutation_canary(shapes, monkeypatch):
    """A reflection that flips the axial normal component breaks distance invariance."""
    true_reflect = dynamics.reflect_direction

    def corrupted(v, n):
        n = np.array(n, dtype=float)
        n[-1] = -n[-1]
        return true_reflect(v, n)

    monkeypatch.setattr(dynamics, "reflect_direction", corrupted)
    ens = build_ensemble(shapes["ellipse"], 100, seed=0, cap=1000)
    assert not check_distance_invariance(ens).passed or not check_termination(ens).passed
    assert not check_distance_invariance(ens).passed
