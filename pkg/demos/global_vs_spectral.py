"""
Global sweeps against the eigenvector sweep and the exact optimum
=================================================================

"""

import math

import networkx as nx
import numpy as np

from bipdense import DetectParams, Graph, brute_force_beta, dense_spectrum, eigen_sweep, swpdb

rng = np.random.default_rng(0)
h = nx.gnp_random_graph(10, 0.45, seed=1)
g = Graph.from_edges(h.edges(), n=10)

exact = brute_force_beta(g).beta
glob = swpdb(g, DetectParams.swpdb(k=g.total_volume, theta=0.05, eps=0.4, cap=math.inf))
eig = eigen_sweep(g)
lam = dense_spectrum(g).top

print("exact optimum      ", round(exact, 4))
print("global sweep       ", round(glob.beta, 4), "found at (seed, t, i) =", glob.found_at)
print("eigenvector sweep  ", round(eig.beta, 4), "bound", round(math.sqrt(2 * (2 - lam)), 4))

# best sweep value per walk length
for row in glob.trace:
    print(row)
