import json
import warnings

import numpy as np
import pytest

from bipdense import PlantSpec, ValidationError, bipartiteness_ratio, generate, write_instance
from bipdense.synth import _streams


def test_complete_planted_pair_has_zero_ratio():
    inst = generate(PlantSpec(0, 4, 5))
    assert inst.measured_theta == 0.0
    assert inst.graph.edge_count == 20


def test_attachment_ratio_formula():
    inst = generate(PlantSpec(50, 3, 4, n_attach=6, rng_seed=11))
    b = inst.planted.e_boundary
    assert b > 0
    assert inst.measured_theta == pytest.approx(b / (2 * 3 * 4 + b), abs=1e-15)


def test_same_seed_same_bytes(tmp_path):
    spec = PlantSpec(300, 6, 6, p_cross=0.7, p_noise_internal=0.1, n_attach=5, background_p=0.02, rng_seed=9)
    a, b = generate(spec), generate(spec)
    assert a.graph.to_edgelist() == b.graph.to_edgelist()
    write_instance(a, tmp_path / "x")
    write_instance(b, tmp_path / "y")
    assert (tmp_path / "x.el").read_bytes() == (tmp_path / "y.el").read_bytes()
    assert (tmp_path / "x.json").read_bytes() == (tmp_path / "y.json").read_bytes()
    other = generate(PlantSpec(300, 6, 6, p_cross=0.7, p_noise_internal=0.1, n_attach=5, background_p=0.02, rng_seed=10))
    assert other.graph.to_edgelist() != a.graph.to_edgelist()


def test_streams_are_independent():
    base = PlantSpec(400, 5, 5, p_cross=0.6, n_attach=4, background_p=0.01, rng_seed=2)
    a = generate(base)
    b = generate(PlantSpec(400, 5, 5, p_cross=0.6, n_attach=40, background_p=0.01, rng_seed=2))

    def bg_edges(inst):
        g = inst.graph
        return {(g.tokens[u], g.tokens[v]) for u, v, _ in g.edges() if g.tokens[u][0] == g.tokens[v][0] == "v"}

    def cross_edges(inst):
        g = inst.graph
        return {(g.tokens[u], g.tokens[v]) for u, v, _ in g.edges() if {g.tokens[u][0], g.tokens[v][0]} == {"L", "R"}}

    assert bg_edges(a) == bg_edges(b)
    assert cross_edges(a) == cross_edges(b)
    s1 = [rng.random() for rng in _streams(5)]
    assert len(set(s1)) == 3


def test_sidecar_contents(tmp_path):
    inst = generate(PlantSpec(100, 3, 3, p_cross=1.0, n_attach=3, background_p=0.05, rng_seed=1))
    write_instance(inst, tmp_path / "inst")
    side = json.loads((tmp_path / "inst.json").read_text())
    assert side["planted_left"] == ["L0", "L1", "L2"]
    assert side["planted_right"] == ["R0", "R1", "R2"]
    assert side["spec"]["rng_seed"] == 1
    g = inst.graph
    again = bipartiteness_ratio(g, g.vertex_ids(side["planted_left"]), g.vertex_ids(side["planted_right"]))
    assert again.beta == side["measured_theta"]


@pytest.mark.parametrize("seed", range(5))
def test_generated_graph_invariants(seed):
    inst = generate(PlantSpec(200, 8, 7, p_cross=0.5, p_noise_internal=0.2, n_attach=10, background_p=0.03, rng_seed=seed))
    g = inst.graph
    a = g.adjacency_dense()
    assert np.array_equal(a, a.T) and np.all(np.diag(a) == 0)
    assert np.all(g.weights == 1.0) and np.all(g.degree > 0)
    assert inst.measured_theta == bipartiteness_ratio(g, inst.planted.left, inst.planted.right).beta


def test_regular_background():
    inst = generate(PlantSpec(60, 2, 2, background_model="regular", background_degree=5, rng_seed=4))
    g = inst.graph
    bg = [v for v, t in enumerate(g.tokens) if t.startswith("v")]
    assert np.all(g.degree[bg] == 5)


@pytest.mark.parametrize(
    "spec",
    [
        PlantSpec(10, 0, 2),
        PlantSpec(10, 2, 2, p_cross=1.5),
        PlantSpec(10, 2, 2, n_attach=-1),
        PlantSpec(10, 2, 2, background_model="ba"),
        PlantSpec(7, 2, 2, background_model="regular", background_degree=3),
        PlantSpec(10, 2, 2, p_cross=0.0),
    ],
)
def test_bad_specs(spec):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        with pytest.raises(ValidationError):
            generate(spec)
