import math

import numpy as np
import pytest

from conrel import generator
from conrel import problem as problem_mod
from conrel.gradient import (
    StencilError,
    angle_decomposition,
    gradient,
    gradient_relationship,
)


def interior_points(problem, count, seed, margin=0.1):
    """Random points at least `margin` of the range inside every bound."""
    rng = np.random.default_rng(seed)
    lo = problem.lower_bounds()
    hi = problem.upper_bounds()
    span = hi - lo
    return lo + span * margin + rng.random((count, lo.size)) * span * (1 - 2 * margin)


class TestGradient:
    def test_parabola(self, independence_problem):
        g = gradient(independence_problem, 1, (0.5, 3.0))
        assert g == pytest.approx([0.0, 6.0], abs=1e-12)
        fd = gradient(independence_problem, 1, (0.5, 2.0), mode="fd")
        sym = gradient(independence_problem, 1, (0.5, 2.0))
        assert fd == pytest.approx(sym, rel=1e-6, abs=1e-9)

    def test_sine(self, independence_problem):
        for point in [(-1.0, 0.5), (0.3, -2.0), (2.5, 2.5)]:
            sym = gradient(independence_problem, 0, point)
            assert sym == pytest.approx([2 * math.cos(point[0]), 0.0], abs=1e-12)
            fd = gradient(independence_problem, 0, point, mode="fd")
            assert fd == pytest.approx(sym, rel=1e-6, abs=1e-9)

    def test_constant_constraint(self, write_problem):
        doc = {
            "name": "const",
            "variables": [{"name": "x1", "lower": -1, "upper": 1}],
            "constraints": [{"name": "g", "kind": "inequality", "expr": "0-1"}],
        }
        p = problem_mod.load_problem_file(write_problem(doc))
        assert np.array_equal(gradient(p, 0, (0.2,)), np.zeros(1))

    def test_fd_needs_interior_margin(self, conflict_problem):
        with pytest.raises(StencilError):
            gradient(conflict_problem, 0, (3.0, 0.0), mode="fd", step=1e-5)
        with pytest.raises(StencilError):
            gradient(conflict_problem, 0, (-3.0 + 1e-7, 0.0), mode="fd", step=1e-5)

    def test_unknown_mode(self, conflict_problem):
        with pytest.raises(ValueError):
            gradient(conflict_problem, 0, (0.0, 0.0), mode="adjoint")

    @pytest.mark.parametrize("example", ["conflict", "harmony", "independence"])
    def test_symbolic_matches_fd_at_random_interior_points(self, example):
        problem = {
            "conflict": generator.conflict_example,
            "harmony": generator.harmony_example,
            "independence": generator.independence_example,
        }[example]()
        points = interior_points(problem, 100, seed=13)
        for point in points:
            for j in range(len(problem.constraints)):
                sym = gradient(problem, j, point)
                fd = gradient(problem, j, point, mode="fd")
                assert fd == pytest.approx(sym, rel=1e-6, abs=1e-9)


class TestAngleDecomposition:
    def test_same_direction(self):
        d = angle_decomposition((1.0, 0.0), (2.0, 0.0))
        assert d.angle == 0.0
        assert d.harmony_magnitude == 1.0
        assert d.conflict_magnitude == 0.0
        assert not d.degenerate

    def test_antiparallel(self):
        d = angle_decomposition((1.0, 0.0), (-3.0, 0.0))
        assert d.degenerate
        assert d.angle == pytest.approx(math.pi)
        assert d.conflict_magnitude == 1.0
        assert d.harmony_magnitude == 0.0

    def test_orthogonal(self):
        d = angle_decomposition((1.0, 0.0), (0.0, 1.0))
        assert d.angle == pytest.approx(math.pi / 2, abs=1e-12)
        # both magnitudes equal cos(pi/4), checked against the math library
        assert d.harmony_magnitude == pytest.approx(math.cos(math.pi / 4), abs=1e-12)
        assert d.conflict_magnitude == pytest.approx(math.sin(math.pi / 4), abs=1e-12)

    def test_zero_gradient_undefined(self):
        d = angle_decomposition((0.0, 0.0), (1.0, 0.0))
        assert d.degenerate
        assert d.harmony_magnitude is None
        assert d.conflict_magnitude is None
        assert d.angle is None

    def test_scaling_invariance(self):
        rng = np.random.default_rng(30)
        for _ in range(50):
            u = rng.normal(size=3)
            v = rng.normal(size=3)
            base = angle_decomposition(u, v)
            scaled = angle_decomposition(u * rng.uniform(0.1, 50), v * rng.uniform(0.1, 50))
            assert scaled.harmony_magnitude == pytest.approx(base.harmony_magnitude, abs=1e-12)
            assert scaled.conflict_magnitude == pytest.approx(base.conflict_magnitude, abs=1e-12)

    def test_symmetry(self):
        rng = np.random.default_rng(31)
        for _ in range(50):
            u = rng.normal(size=4)
            v = rng.normal(size=4)
            a = angle_decomposition(u, v)
            b = angle_decomposition(v, u)
            assert a.harmony_magnitude == pytest.approx(b.harmony_magnitude, abs=1e-15)
            assert a.angle == pytest.approx(b.angle, abs=1e-15)

    def test_unit_circle_identity(self):
        rng = np.random.default_rng(32)
        for _ in range(100):
            u = rng.normal(size=2)
            v = rng.normal(size=2)
            d = angle_decomposition(u, v)
            if d.defined:
                assert d.harmony_magnitude**2 + d.conflict_magnitude**2 == pytest.approx(
                    1.0, abs=1e-12
                )

    def test_harmony_monotone_in_angle(self):
        angles = np.linspace(0, math.pi - 1e-6, 50)
        values = []
        for theta in angles:
            d = angle_decomposition((1.0, 0.0), (math.cos(theta), math.sin(theta)))
            values.append(d.harmony_magnitude)
        assert all(a >= b - 1e-15 for a, b in zip(values, values[1:]))


class TestGradientRelationship:
    def test_conflict_pair_mean_conflict_one(self, conflict_problem):
        samples = problem_mod.sample(conflict_problem, 200, seed=42)
        aggregate = gradient_relationship(conflict_problem, 0, 1, samples)
        assert aggregate.mean_conflict == pytest.approx(1.0, abs=1e-9)
        assert aggregate.mean_harmony == pytest.approx(0.0, abs=1e-9)

    def test_harmony_pair_mean_harmony_one(self, harmony_problem):
        samples = problem_mod.sample(harmony_problem, 200, seed=42)
        aggregate = gradient_relationship(harmony_problem, 0, 1, samples)
        assert aggregate.mean_harmony == pytest.approx(1.0, abs=1e-9)
        assert aggregate.mean_conflict == pytest.approx(0.0, abs=1e-9)

    def test_independent_pair_orthogonal(self, independence_problem):
        samples = problem_mod.sample(independence_problem, 200, seed=42)
        aggregate = gradient_relationship(independence_problem, 0, 1, samples)
        assert aggregate.mean_harmony == pytest.approx(math.cos(math.pi / 4), abs=1e-9)
        assert aggregate.mean_conflict == pytest.approx(math.cos(math.pi / 4), abs=1e-9)
        assert aggregate.degenerate_points == 0

    def test_all_points_degenerate(self, write_problem):
        doc = {
            "name": "consts",
            "variables": [{"name": "x1", "lower": -1, "upper": 1}],
            "constraints": [
                {"name": "a", "kind": "inequality", "expr": "0-1"},
                {"name": "b", "kind": "inequality", "expr": "2-1"},
            ],
        }
        p = problem_mod.load_problem_file(write_problem(doc))
        samples = problem_mod.sample(p, 10, seed=0)
        aggregate = gradient_relationship(p, 0, 1, samples)
        assert aggregate.mean_harmony is None
        assert aggregate.mean_conflict is None
        assert aggregate.degenerate_points == 10
        assert aggregate.used_points == 0

    def test_self_pair_rejected(self, conflict_problem):
        samples = problem_mod.sample(conflict_problem, 10, seed=0)
        with pytest.raises(ValueError):
            gradient_relationship(conflict_problem, 0, 0, samples)
