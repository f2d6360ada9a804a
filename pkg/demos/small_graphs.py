"""
Bipartiteness ratio on toy graphs
=================================

"""

from bipdense import bipartiteness_ratio, brute_force_beta, indicator, multiply_m, parse_edgelist, sweep

# a 4-cycle is perfectly bipartite, a triangle is not
c4 = parse_edgelist("a b\nb c\nc d\nd a\n")
k3 = parse_edgelist("a b\nb c\nc a\n")

print(bipartiteness_ratio(c4, c4.vertex_ids(["a", "c"]), c4.vertex_ids(["b", "d"])).beta)
print(bipartiteness_ratio(k3, k3.vertex_ids(["a"]), k3.vertex_ids(["b", "c"])).beta)

# exact answers by enumeration
print(brute_force_beta(k3).to_dict(k3))

# two steps of the walk from a, then a sweep over its sign pattern
p = multiply_m(multiply_m(indicator(c4, c4.vertex_id("a"))))
print(p.to_dict(tokens=True))
out = sweep(p)
print(out.to_csv())
print(out.best.to_dict(c4))
