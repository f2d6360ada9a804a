import io
import warnings

import numpy as np
import pytest
from hypothesis import given, settings

from bipdense import Graph, GraphFormatError, ValidationError, bipartiteness_ratio, load_graph, parse_edgelist, set_metrics
from _graphs import K3, graph_and_pair, graphs, named


def test_path_degrees_and_volume(p3):
    assert p3.n == 3
    assert p3.tokens == ["a", "b", "c"]
    assert p3.degree.tolist() == [1.0, 2.0, 1.0]
    assert p3.total_volume == 4.0


def test_duplicate_edges_merge_by_summing():
    g = parse_edgelist("a b 2\nb a 1")
    assert g.edge_count == 1
    assert g.degree.tolist() == [3.0, 3.0]
    assert list(g.edges()) == [(0, 1, 3.0)]


def test_self_loop_rejected():
    with pytest.raises(ValidationError, match="self-loop"):
        parse_edgelist("a a")


@pytest.mark.parametrize("w", ["0", "-1", "nan", "inf"])
def test_non_positive_weight_rejected(w):
    with pytest.raises(ValidationError, match="line 2"):
        parse_edgelist(f"a b\nb c {w}\n")


def test_malformed_line_reports_line_number():
    with pytest.raises(GraphFormatError) as exc:
        parse_edgelist("# header\na b\nc\n")
    assert exc.value.lineno == 3
    assert "line 3" in str(exc.value)
    with pytest.raises(GraphFormatError, match="line 1"):
        parse_edgelist("a b x\n")


def test_comments_and_blank_lines_ignored():
    g = parse_edgelist("# comment\n\na b  # trailing\n   \nb c 2.5\n")
    assert g.n == 3
    assert g.degree.tolist() == [1.0, 3.5, 2.5]


def test_load_from_path_and_stream(tmp_path):
    path = tmp_path / "k3.el"
    path.write_text(K3)
    assert load_graph(path).n == 3
    assert load_graph(str(path)).total_volume == 6.0
    assert load_graph(io.StringIO(K3)).edge_count == 3


def test_isolated_vertices_dropped_with_warning():
    with pytest.warns(UserWarning, match="dropped 2 isolated"):
        g = Graph.from_edges([(0, 3), (3, 4)], n=5)
    assert g.n == 3
    assert g.dropped_isolated == 2
    assert g.tokens == ["0", "3", "4"]


def test_graph_arrays_are_read_only(k3):
    with pytest.raises(ValueError):
        k3.degree[0] = 5.0


def test_write_edgelist_round_trip():
    g = parse_edgelist("a b 2\nb c 0.5\nc a\n")
    again = parse_edgelist(g.to_edgelist())
    assert again.tokens == g.tokens
    assert np.array_equal(again.weights, g.weights)
    assert "a b 2\n" in g.to_edgelist()


def test_c4_perfect_bipartition(c4):
    pair = bipartiteness_ratio(c4, c4.vertex_ids(["a", "c"]), c4.vertex_ids(["b", "d"]))
    assert pair.beta == 0.0
    assert pair.e_lr == 4.0
    assert pair.e_boundary == 0.0


def test_triangle_ratios(k3):
    a, b, c = k3.vertex_ids(["a", "b", "c"])
    pair = bipartiteness_ratio(k3, [a], [b, c])
    assert (2 * pair.e_r, pair.vol_u) == (2.0, 6.0)
    assert pair.beta == pytest.approx(1 / 3, abs=1e-15)
    pair = bipartiteness_ratio(k3, [a], [b])
    assert (pair.e_boundary, pair.vol_u, pair.beta) == (2.0, 4.0, 0.5)


def test_pair_validation(k3):
    with pytest.raises(ValidationError, match="disjoint"):
        bipartiteness_ratio(k3, [0, 1], [1])
    with pytest.raises(ValidationError, match="nonempty"):
        bipartiteness_ratio(k3, [], [])
    with pytest.raises(ValidationError):
        bipartiteness_ratio(k3, [7], [])


def test_pair_json_uses_tokens(c4):
    d = bipartiteness_ratio(c4, [0, 2], [1, 3]).to_dict(c4)
    assert list(d) == ["left", "right", "vol", "beta", "e_l", "e_r", "e_lr", "e_boundary"]
    assert d["left"] == ["a", "c"] and d["right"] == ["b", "d"]


def test_set_metrics_examples(k3, p3):
    assert set_metrics(k3, k3.vertex_ids(["a", "b"])) == (4.0, 1.0, 2.0)
    assert set_metrics(p3, [p3.vertex_id("b")]) == (2.0, 0.0, 2.0)
    for g in (k3, p3):
        assert set_metrics(g, range(g.n)) == (g.total_volume, g.total_weight, 0.0)


@given(graphs())
@settings(max_examples=150, deadline=None)
def test_graph_invariants(g):
    a = g.adjacency_dense()
    assert np.array_equal(a, a.T)
    assert np.all(g.weights > 0)
    assert np.all(np.diag(a) == 0)
    assert np.all(g.degree > 0)
    assert g.total_volume == pytest.approx(2 * g.total_weight, rel=1e-15)
    assert np.allclose(a.sum(axis=1), g.degree)


@given(graph_and_pair())
@settings(max_examples=300, deadline=None)
def test_pair_identities(case):
    g, left, right = case
    pair = bipartiteness_ratio(g, left, right)
    lhs = 2 * pair.e_l + 2 * pair.e_r + 2 * pair.e_lr + pair.e_boundary
    assert lhs == pytest.approx(pair.vol_u, rel=1e-12)
    assert pair.beta + 2 * pair.e_lr / pair.vol_u == pytest.approx(1.0, abs=1e-12)
    assert 0.0 <= pair.beta <= 1.0 + 1e-15
    assert bipartiteness_ratio(g, right, left).beta == pytest.approx(pair.beta, abs=1e-15)


@given(graph_and_pair())
@settings(max_examples=100, deadline=None)
def test_ratio_invariant_under_weight_rescaling(case):
    g, left, right = case
    src = np.repeat(np.arange(g.n), g.counts)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        scaled = Graph.from_arrays(src, g.indices, g.weights * 3.7, n=g.n)
    assert bipartiteness_ratio(scaled, left, right).beta == pytest.approx(
        bipartiteness_ratio(g, left, right).beta, abs=1e-12
    )


@given(graph_and_pair(max_n=9))
@settings(max_examples=100, deadline=None)
def test_ratio_matches_dense_count(case):
    g, left, right = case
    a = g.adjacency_dense()
    u = left + right
    num = a[np.ix_(left, left)].sum() + a[np.ix_(right, right)].sum()
    num += a[u].sum() - a[np.ix_(u, u)].sum()
    assert bipartiteness_ratio(g, left, right).beta == pytest.approx(num / g.degree[u].sum(), abs=1e-12)
