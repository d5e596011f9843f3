import json

import pytest

from conrel import generator


@pytest.fixture
def conflict_problem():
    return generator.conflict_example()


@pytest.fixture
def harmony_problem():
    return generator.harmony_example()


@pytest.fixture
def independence_problem():
    return generator.independence_example()


@pytest.fixture
def write_problem(tmp_path):
    """Write a problem document dict to a temp file, return the path."""

    def _write(document, name="problem.json"):
        path = tmp_path / name
        path.write_text(json.dumps(document), encoding="utf-8")
        return path

    return _write
