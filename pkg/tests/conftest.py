"""Test configuration and fixtures for sftalgebra tests."""

import json
import random
from pathlib import Path
from typing import Any, Callable, Dict, Optional

import pytest

from sft.formats import format_matrix
from sft.matrix import IntMatrix
from sft.structure import ashley_eight_by_eight
from utils.limits import ComputeConfig
from utils.shared_config import SharedComputeConfig


@pytest.fixture
def rng():
    """Seeded generator so random sweeps are reproducible."""
    return random.Random(20240611)


@pytest.fixture
def compute_config():
    """Default compute limits, independent of the environment."""
    return ComputeConfig()


@pytest.fixture
def small_config():
    """Tight budgets for exercising budget and truncation paths."""
    return ComputeConfig(
        max_factorizations=50,
        max_periodic_points=100,
        default_timeout=5.0,
        max_output_lines=40,
    )


@pytest.fixture(autouse=True)
def reset_shared_config():
    """Drop the process-wide configuration between tests."""
    SharedComputeConfig.reset_singleton()
    yield
    SharedComputeConfig.reset_singleton()


@pytest.fixture
def nonplussed():
    """Primitive 4x4 with nonzero spectrum (2, 1)."""
    return IntMatrix.from_rows(
        [[1, 0, 0, 1], [0, 1, 0, 1], [0, 1, 1, 0], [1, 0, 1, 0]]
    )


@pytest.fixture
def ashley():
    return ashley_eight_by_eight()


@pytest.fixture
def cycle_c():
    """Irreducible of period 3."""
    return IntMatrix.from_rows([[0, 1, 0], [0, 0, 1], [1, 0, 0]])


@pytest.fixture
def cycle_d():
    """Irreducible of period 2."""
    return IntMatrix.from_rows([[0, 0, 1], [0, 0, 1], [1, 1, 0]])


@pytest.fixture
def golden_mean():
    return IntMatrix.from_rows([[1, 1], [1, 0]])


@pytest.fixture
def write_matrix(tmp_path: Path) -> Callable[[str, IntMatrix], str]:
    """Write a matrix in the shared text format and return its path."""

    def _write(name: str, m: IntMatrix) -> str:
        path = tmp_path / name
        path.write_text(format_matrix(m))
        return str(path)

    return _write


@pytest.fixture
def write_text(tmp_path: Path) -> Callable[[str, str], str]:
    def _write(name: str, text: str) -> str:
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return _write


@pytest.fixture
def write_json(tmp_path: Path) -> Callable[[str, Any], str]:
    def _write(name: str, doc: Any) -> str:
        path = tmp_path / name
        path.write_text(json.dumps(doc))
        return str(path)

    return _write


# Test utilities
def validate_json_response(response: str) -> Dict[str, Any]:
    """Validate that a response is valid JSON and return parsed data."""
    try:
        return json.loads(response)
    except json.JSONDecodeError as e:
        pytest.fail(f"Response is not valid JSON: {e}\nResponse: {response}")


def assert_error_response(
    response: str,
    expected_error_type: Optional[str] = None,
    expected_exit_code: Optional[int] = None,
) -> Dict[str, Any]:
    """Assert that a response is an error document and return its error part."""
    doc = validate_json_response(response)
    assert doc["verdict"] == "error", doc
    error = doc["error"]
    if expected_error_type:
        assert error["type"] == expected_error_type, error
    if expected_exit_code is not None:
        assert error["exit_code"] == expected_exit_code, error
    return error


def summary_text(doc: Dict[str, Any]) -> str:
    return "\n".join(doc.get("summary", []))
