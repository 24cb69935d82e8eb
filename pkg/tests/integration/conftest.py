"""Integration test configuration for the command-line front end.

Every invocation runs with ``--quiet --no-log-file`` so stdout carries only
the JSON report.
"""

import json
from pathlib import Path
from typing import Any, Callable

import pytest
from click.testing import CliRunner, Result

from trickle_hdx.cli import cli
from trickle_hdx.complex_io import dump_complex
from trickle_hdx.zoo import complete_partite_complex, hardcore_complex

BASE_ARGS = ["--quiet", "--no-log-file"]


@pytest.fixture
def invoke() -> Callable[..., Result]:
    """Run the CLI group in-process with the quiet base options."""
    runner = CliRunner()

    def _invoke(*args: str, input: Any = None) -> Result:
        return runner.invoke(cli, BASE_ARGS + list(args), input=input)

    return _invoke


def report_of(result: Result) -> Any:
    return json.loads(result.stdout)


def write_complex(directory: Path, name: str, X) -> str:
    path = directory / name
    path.write_text(dump_complex(X))
    return str(path)


@pytest.fixture
def hardcore_file(tmp_path) -> str:
    return write_complex(tmp_path, "hardcore.json", hardcore_complex(2, 0.01))


@pytest.fixture
def tripartite_file(tmp_path) -> str:
    X = complete_partite_complex([2, 2, 2])
    return write_complex(tmp_path, "tripartite.json", X)


@pytest.fixture
def k3_file(tmp_path, k3_coloring) -> str:
    return write_complex(tmp_path, "k3.json", k3_coloring)


@pytest.fixture
def two_edges_file(tmp_path, two_edges) -> str:
    return write_complex(tmp_path, "two_edges.json", two_edges)
