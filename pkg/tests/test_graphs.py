import pytest
from hypothesis import given
from hypothesis import strategies as st

from maproof.errors import ParseError, UsageError
from maproof.graphs import Graph, graph_to_text, parse_edge_list, parse_matrix, parse_vectors, rows_to_csv


def test_edges_normalised():
    G = Graph(3, ((2, 0), (0, 2), (1, 1)))
    assert G.edges == ((0, 2),)
    assert G.adjacency[2][0] == 1 and G.neighbors[0] == frozenset({2})
    D = G.as_directed()
    assert D.directed and set(D.edges) == {(0, 2), (2, 0)}


def test_bad_graph():
    with pytest.raises(UsageError):
        Graph(2, ((0, 2),))


def test_edge_list():
    G = parse_edge_list("# triangle\n5\n1 2\n2 3\n3 1\n")
    assert G.n == 5 and G.edges == ((0, 1), (0, 2), (1, 2))
    assert parse_edge_list("1 2\n").n == 2
    with pytest.raises(ParseError):
        parse_edge_list("1 x\n")
    with pytest.raises(ParseError):
        parse_edge_list("0 1\n")


@given(st.integers(1, 8).flatmap(lambda n: st.tuples(
    st.just(n), st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=20))))
def test_text_round_trip(case):
    n, edges = case
    G = Graph(n, tuple(edges))
    assert parse_edge_list(graph_to_text(G)) == G


def test_csv_parsers():
    assert parse_matrix("1,2\n3,4\n") == [[1, 2], [3, 4]]
    with pytest.raises(ParseError):
        parse_matrix("1,2\n3\n")
    assert parse_vectors(rows_to_csv([(0, 1), (1, 1)])) == [(0, 1), (1, 1)]
    with pytest.raises(ParseError):
        parse_vectors("0,2\n")
    with pytest.raises(ParseError):
        parse_vectors("0,1\n1\n")
