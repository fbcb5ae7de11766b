import networkx as nx
import pytest

from graphprop.graph import finite_graph


def to_graph(G: nx.Graph, name="atlas"):
    """networkx graph -> finite Graph with labels n(i)."""
    verts = [f"n({v})" for v in G.nodes()]
    edges = [(f"n({a})", f"n({b})") for a, b in G.edges()]
    return finite_graph(name, edges, vertices=verts)


def connected_atlas(max_nodes: int, min_nodes: int = 1):
    for G in nx.graph_atlas_g()[1:]:
        n = G.number_of_nodes()
        if min_nodes <= n <= max_nodes and nx.is_connected(G):
            yield G


@pytest.fixture(scope="session")
def atlas7():
    return [to_graph(G) for G in connected_atlas(7)]


ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
