"""Test configuration for pytest."""

import math

import networkx as nx
import pytest

from trickle_hdx.complex import build_complex
from trickle_hdx.partite import EpsilonTable, dependency_graph
from trickle_hdx.zoo import coloring_complex, complete_partite_complex, hardcore_complex


@pytest.fixture(autouse=True)
def isolated_dirs(tmp_path, monkeypatch):
    """Keep config and log files of every test inside its tmp_path."""
    monkeypatch.setenv("XDG_CONFIG_HOME", str(tmp_path / "config"))
    monkeypatch.setenv("XDG_STATE_HOME", str(tmp_path / "state"))
    monkeypatch.setenv("XDG_CACHE_HOME", str(tmp_path / "cache"))
    monkeypatch.delenv("LOG_LEVEL", raising=False)
    yield


@pytest.fixture
def triangle():
    """A single partite 2-simplex."""
    return build_complex([(["a", "b", "c"], 1.0)], types={"a": 0, "b": 1, "c": 2})


@pytest.fixture
def triangle_boundary():
    """The three edges of a triangle, unit weights (ground skeleton K_3)."""
    return build_complex([(["a", "b"], 1.0), (["b", "c"], 1.0), (["a", "c"], 1.0)])


@pytest.fixture
def two_edges():
    """Two disjoint edges: the link of the empty face is disconnected."""
    return build_complex([(["a", "b"], 1.0), (["c", "d"], 1.0)])


@pytest.fixture
def hardcore_small():
    return hardcore_complex(2, 1.0)


@pytest.fixture
def hardcore_low():
    """Hardcore complex with a small activity, which passes the conditions."""
    return hardcore_complex(2, 0.01)


@pytest.fixture
def k3_coloring():
    """Proper colorings of K_3 from lists of size 5."""
    graph = nx.complete_graph(3)
    return coloring_complex(graph, {v: range(5) for v in graph.nodes})


@pytest.fixture
def path_coloring():
    """Proper 3-colorings of the path 0 - 1 - 2."""
    graph = nx.path_graph(3)
    return coloring_complex(graph, {v: range(3) for v in graph.nodes})


@pytest.fixture
def complete_tripartite():
    return complete_partite_complex([2, 2, 2])


def star_table(Delta, eps):
    """Uniform epsilon on the star with centre 0 and ``Delta`` leaves."""
    table = EpsilonTable.uniform(
        range(Delta + 1), [(0, j) for j in range(1, Delta + 1)], eps
    )
    return table, dependency_graph(table, tol=0.0)


@pytest.fixture
def ko_star():
    """Delta = 2 star at p = 193 with its delta: (eps, G, delta)."""
    p = 193
    table, G = star_table(2, 1.0 / math.sqrt(p))
    return table, G, 1.0 - 2.0 / math.sqrt(p)


@pytest.fixture
def captured_logs():
    """Loguru records of the package, collected without touching the sinks."""
    from loguru import logger

    records = []
    logger.enable("trickle_hdx")
    handler_id = logger.add(
        lambda message: records.append(message.record), level="TRACE"
    )
    yield records
    logger.remove(handler_id)
    logger.disable("trickle_hdx")
