import xml.etree.ElementTree as ET

import pytest

from conrel import generator
from conrel import problem as problem_mod
from conrel.plots import emit_parallel_coordinates_svg, emit_scatter_svg

SVG_NS = "{http://www.w3.org/2000/svg}"


def parse_polyline_segments(path):
    """Extract ((x1, y1), (x2, y2)) per sample polyline from the SVG."""
    root = ET.parse(path).getroot()
    segments = []
    for polyline in root.iter(f"{SVG_NS}polyline"):
        points = polyline.attrib["points"].split()
        (x1, y1), (x2, y2) = (tuple(map(float, p.split(","))) for p in points)
        segments.append(((x1, y1), (x2, y2)))
    return segments


def count_geometric_crossings(segments):
    """Segments share the two x positions, so a pair crosses iff the
    left-end and right-end orderings differ strictly."""
    crossings = 0
    for a in range(len(segments)):
        for b in range(a + 1, len(segments)):
            (ya1, yb1) = segments[a][0][1], segments[b][0][1]
            (ya2, yb2) = segments[a][1][1], segments[b][1][1]
            if (ya1 - yb1) * (ya2 - yb2) < 0:
                crossings += 1
    return crossings


def parse_points(path):
    root = ET.parse(path).getroot()
    return [
        (float(c.attrib["cx"]), float(c.attrib["cy"])) for c in root.iter(f"{SVG_NS}circle")
    ]


class TestParallelCoordinates:
    def test_harmony_data_renders_no_crossings(self, harmony_problem, tmp_path):
        samples = problem_mod.sample(harmony_problem, 60, seed=42)
        path = tmp_path / "harmony.svg"
        emit_parallel_coordinates_svg(
            samples.values[:, 0], samples.values[:, 1], harmony_problem.constraint_names, path
        )
        segments = parse_polyline_segments(path)
        assert len(segments) == 60
        assert count_geometric_crossings(segments) == 0

    def test_two_conflicting_samples_cross_once(self, tmp_path):
        path = tmp_path / "two.svg"
        emit_parallel_coordinates_svg([1.0, 2.0], [5.0, 3.0], ("a", "b"), path)
        segments = parse_polyline_segments(path)
        assert count_geometric_crossings(segments) == 1

    def test_conflict_data_matches_crossing_count(self, conflict_problem, tmp_path):
        from conrel.pairwise import crossing_count

        samples = problem_mod.sample(conflict_problem, 40, seed=7)
        path = tmp_path / "conflict.svg"
        emit_parallel_coordinates_svg(
            samples.values[:, 0], samples.values[:, 1], conflict_problem.constraint_names, path
        )
        segments = parse_polyline_segments(path)
        expected = crossing_count(samples.values[:, 0], samples.values[:, 1])
        assert count_geometric_crossings(segments) == expected

    def test_constant_axis_uses_midpoint(self, tmp_path):
        path = tmp_path / "const.svg"
        emit_parallel_coordinates_svg([1.0, 1.0, 1.0], [0.0, 1.0, 2.0], ("a", "b"), path)
        segments = parse_polyline_segments(path)
        left_ys = {seg[0][1] for seg in segments}
        assert len(left_ys) == 1
        (midpoint,) = left_ys
        assert midpoint == pytest.approx((60.0 + 430.0) / 2)

    def test_axis_labels_present(self, tmp_path):
        path = tmp_path / "labels.svg"
        emit_parallel_coordinates_svg([0.0, 1.0], [1.0, 0.0], ("f<1>", "g&h"), path)
        root = ET.parse(path).getroot()
        texts = [t.text for t in root.iter(f"{SVG_NS}text")]
        assert texts == ["f<1>", "g&h"]

    def test_needs_two_points(self, tmp_path):
        with pytest.raises(ValueError):
            emit_parallel_coordinates_svg([1.0], [2.0], ("a", "b"), tmp_path / "x.svg")

    def test_length_mismatch(self, tmp_path):
        with pytest.raises(ValueError):
            emit_parallel_coordinates_svg([1.0, 2.0], [2.0], ("a", "b"), tmp_path / "x.svg")


class TestScatter:
    def test_conflict_points_colinear(self, conflict_problem, tmp_path):
        # the pair satisfies f2 = -0.1 - f1, so pixel points must sit on a line
        samples = problem_mod.sample(conflict_problem, 50, seed=42)
        path = tmp_path / "scatter.svg"
        emit_scatter_svg(
            samples.values[:, 0], samples.values[:, 1], conflict_problem.constraint_names, path
        )
        points = parse_points(path)
        assert len(points) == 50
        (x0, y0), (x1, y1) = points[0], points[1]
        for x, y in points[2:]:
            cross = (x1 - x0) * (y - y0) - (y1 - y0) * (x - x0)
            assert abs(cross) < 1e-6 * 360 * 370

    def test_harmony_points_colinear(self, harmony_problem, tmp_path):
        samples = problem_mod.sample(harmony_problem, 30, seed=1)
        path = tmp_path / "harmony-scatter.svg"
        emit_scatter_svg(
            samples.values[:, 0], samples.values[:, 1], harmony_problem.constraint_names, path
        )
        points = parse_points(path)
        (x0, y0), (x1, y1) = points[0], points[1]
        for x, y in points[2:]:
            cross = (x1 - x0) * (y - y0) - (y1 - y0) * (x - x0)
            assert abs(cross) < 1e-6 * 360 * 370

    def test_single_point(self, tmp_path):
        path = tmp_path / "one.svg"
        emit_scatter_svg([2.5], [1.0], ("a", "b"), path)
        points = parse_points(path)
        assert len(points) == 1
        assert points[0][0] == pytest.approx((140.0 + 500.0) / 2)

    def test_valid_xml(self, independence_problem, tmp_path):
        samples = problem_mod.sample(independence_problem, 20, seed=3)
        path = tmp_path / "ok.svg"
        emit_scatter_svg(
            samples.values[:, 0], samples.values[:, 1],
            independence_problem.constraint_names, path,
        )
        ET.parse(path)  # raises on malformed XML


def test_pipeline_svgs_for_all_examples(tmp_path):
    for problem in generator.example_suite():
        samples = problem_mod.sample(problem, 25, seed=11)
        par = tmp_path / f"{problem.name}-par.svg"
        sca = tmp_path / f"{problem.name}-sca.svg"
        emit_parallel_coordinates_svg(
            samples.values[:, 0], samples.values[:, 1], problem.constraint_names, par
        )
        emit_scatter_svg(
            samples.values[:, 0], samples.values[:, 1], problem.constraint_names, sca
        )
        assert par.exists() and sca.exists()
