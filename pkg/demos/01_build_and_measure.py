"""
Building metric graphs and measuring them
=========================================

A metric graph is a set of edges, each a real interval of some length,
glued at vertices.  Distances are intrinsic: the length of the shortest
route along edges.
"""

from graphchase import build_graph, GraphPoint, discretize

# a triangle with one long side
g = build_graph(["a", "b", "c"],
                [("a", "b", 1.0), ("b", "c", 1.0), ("c", "a", 1.8)])
print("total length:", g.total_length)
print("degree of b:", g.degree("b"))

# distances between arbitrary interior points, not just vertices
p = GraphPoint("e0", 0.25)          # a quarter of the way from a to b
q = GraphPoint("e1", 0.50)          # midpoint of b--c
print("d(p, q) =", g.distance(p, q))

# routes come back as explicit edge runs
length, runs = g.route(g.vertex_point("a"), q)
print("route a -> q has length", length, "via", [r[0] for r in runs])

# loops and parallel edges are normalized away at construction
loop = build_graph(["x"], [("x", "x", 3.0)])
print("a loop of length 3 becomes", len(loop.edges), "arcs:",
      sorted(e.length for e in loop.edges))

# verification works on a finite sample grid laid over every edge
grid = discretize(g, 0.1)
print("grid:", grid.n, "samples, spacing <=", round(grid.max_spacing, 6))
