"""
The sweep potential and the inequality checkers
================================================

"""

import networkx as nx
import numpy as np

from bipdense import Graph, SignedVec, TruncationSchedule, check_convergence_lemma, check_truncation_proposition, parse_edgelist
from bipdense.oracle import psi_identities_check, trace_identity_check
from bipdense.potential import potential_curve

p3 = parse_edgelist("a b\nb c\n")
p = SignedVec.from_dict(p3, {0: -0.5, 1: 1.0, 2: -0.5})
print(potential_curve(p).breakpoints)

# random graph and vector: the potential of pM stays under the two shifted copies of J(p)
rng = np.random.default_rng(5)
g = Graph.from_edges(nx.gnp_random_graph(25, 0.2, seed=2).edges(), n=25)
q = SignedVec(g, rng.choice(25, 6, replace=False), rng.standard_normal(6))
print(check_convergence_lemma(q).to_dict())

# truncated chain vs exact chain
print(check_truncation_proposition(g, 0, TruncationSchedule(1e-4), 20).to_dict())

# walk traces against the spectrum, and the signed-indicator identities
print(trace_identity_check(g, 16, every_step=True).to_dict()["violations"])
print(psi_identities_check(g, [0, 1, 2], [3, 4], 10).to_dict()["violations"])
