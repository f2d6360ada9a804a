"""Seeded generator for planted dense bipartite-like instances.

Randomness comes from numpy's PCG64 generator. ``np.random.SeedSequence(rng_seed)``
is spawned into three independent streams, one each for the background graph,
the planted pair and the attachment edges, so changing one probability leaves
the draws of the other two parts untouched.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import asdict, dataclass

import numpy as np

from .errors import ValidationError
from .graph import Graph, PairSubgraph, bipartiteness_ratio


@dataclass(frozen=True)
class PlantSpec:
    n_background: int
    k_left: int
    k_right: int
    p_cross: float = 1.0
    p_noise_internal: float = 0.0
    n_attach: float = 0.0
    background_model: str = "er"  # "er" or "regular"
    background_p: float = 0.0
    background_degree: int = 3
    rng_seed: int = 0


@dataclass
class PlantedInstance:
    graph: Graph
    planted: PairSubgraph
    measured_theta: float
    spec: PlantSpec

    def sidecar(self):
        g = self.graph
        return {
            "planted_left": [g.tokens[v] for v in self.planted.left],
            "planted_right": [g.tokens[v] for v in self.planted.right],
            "measured_theta": self.measured_theta,
            "spec": asdict(self.spec),
        }


def _streams(seed):
    ss = np.random.SeedSequence(seed)
    return [np.random.Generator(np.random.PCG64(s)) for s in ss.spawn(3)]


def _er_edges(rng, n, p):
    if n < 2 or p <= 0:
        return np.zeros(0, np.int64), np.zeros(0, np.int64)
    total = n * (n - 1) // 2
    if p >= 1:
        lo, hi = np.triu_indices(n, 1)
        return lo.astype(np.int64), hi.astype(np.int64)
    m = int(rng.binomial(total, p))
    keys = np.zeros(0, dtype=np.int64)
    while len(keys) < m:
        draw = max(64, int(1.1 * (m - len(keys))) + 16)
        a = rng.integers(0, n, size=draw)
        b = rng.integers(0, n, size=draw)
        ok = a != b
        new = np.minimum(a, b)[ok] * n + np.maximum(a, b)[ok]
        keys = np.concatenate([keys, new])
        _, first = np.unique(keys, return_index=True)
        keys = keys[np.sort(first)]
    keys = keys[:m]
    return keys // n, keys % n


def _regular_edges(rng, n, d):
    import networkx as nx

    if (n * d) % 2 or d >= n:
        raise ValidationError(f"no {d}-regular graph on {n} vertices")
    h = nx.random_regular_graph(d, n, seed=int(rng.integers(2**32)))
    e = np.array(sorted((min(u, v), max(u, v)) for u, v in h.edges()), dtype=np.int64)
    return e[:, 0], e[:, 1]


def _pairs_within(rng, ids, p):
    if p <= 0 or len(ids) < 2:
        return np.zeros(0, np.int64), np.zeros(0, np.int64)
    i, j = np.triu_indices(len(ids), 1)
    hit = rng.random(len(i)) < p
    return ids[i[hit]], ids[j[hit]]


def generate(spec: PlantSpec) -> PlantedInstance:
    """Build the planted instance described by ``spec``.

    The planted pair's B-ratio is measured on the realised graph, never
    assumed from the probabilities in ``spec``.
    """
    if spec.k_left < 1 or spec.k_right < 1:
        raise ValidationError("planted sides need at least one vertex each")
    for name in ("p_cross", "p_noise_internal", "background_p"):
        val = getattr(spec, name)
        if not 0 <= val <= 1:
            raise ValidationError(f"{name} must lie in [0, 1], got {val}")
    if spec.n_attach < 0 or spec.n_background < 0:
        raise ValidationError("n_attach and n_background must be non-negative")
    if spec.background_model not in ("er", "regular"):
        raise ValidationError(f"unknown background model {spec.background_model!r}")

    bg_rng, plant_rng, attach_rng = _streams(spec.rng_seed)
    nb, kl, kr = spec.n_background, spec.k_left, spec.k_right
    if spec.background_model == "er":
        bs, bd = _er_edges(bg_rng, nb, spec.background_p)
    else:
        bs, bd = _regular_edges(bg_rng, nb, spec.background_degree)

    left = np.arange(nb, nb + kl, dtype=np.int64)
    right = np.arange(nb + kl, nb + kl + kr, dtype=np.int64)
    cross = plant_rng.random((kl, kr)) < spec.p_cross
    ci, cj = np.nonzero(cross)
    ls, ld = _pairs_within(plant_rng, left, spec.p_noise_internal)
    rs, rd = _pairs_within(plant_rng, right, spec.p_noise_internal)

    u_ids = np.concatenate([left, right])
    slots = len(u_ids) * nb
    as_, ad = np.zeros(0, np.int64), np.zeros(0, np.int64)
    if slots and spec.n_attach > 0:
        q = min(1.0, spec.n_attach / slots)
        count = int(attach_rng.binomial(slots, q))
        flat = np.sort(attach_rng.choice(slots, size=count, replace=False))
        as_, ad = u_ids[flat // nb], flat % nb

    src = np.concatenate([bs, left[ci], ls, rs, as_])
    dst = np.concatenate([bd, right[cj], ld, rd, ad])
    tokens = [f"v{i}" for i in range(nb)] + [f"L{i}" for i in range(kl)] + [f"R{j}" for j in range(kr)]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        g = Graph.from_arrays(src, dst, n=nb + kl + kr, tokens=tokens)
    idx = g._token_index
    lkeep = [idx[f"L{i}"] for i in range(kl) if f"L{i}" in idx]
    rkeep = [idx[f"R{j}"] for j in range(kr) if f"R{j}" in idx]
    if not lkeep and not rkeep:
        raise ValidationError("planted pair is empty after removing isolated vertices")
    planted = bipartiteness_ratio(g, lkeep, rkeep)
    return PlantedInstance(g, planted, planted.beta, spec)


def write_instance(instance: PlantedInstance, prefix):
    """Write ``<prefix>.el`` (edge list) and ``<prefix>.json`` (planted sidecar)."""
    with open(f"{prefix}.el", "w", encoding="utf-8") as fh:
        instance.graph.write_edgelist(fh)
    with open(f"{prefix}.json", "w", encoding="utf-8") as fh:
        json.dump(instance.sidecar(), fh, indent=2, sort_keys=True)
        fh.write("\n")
