#!/usr/bin/env python3
"""Walk the tree: canonical vertices, distances, geodesics, and transport.

Vertices at distance n from the root are the points of P^1(Z/p^n); reducing
the coordinate one level gives the neighbor toward the root.  The script
builds the p=3 tree to depth 3, measures a few distances two ways, and moves
one geodesic onto another with an explicit matrix.
"""

from btcomplex.padics import PadicConfig
from btcomplex.tree import (
    Vertex,
    act_vertex,
    distance,
    dot_tree,
    map_path,
    neighbors,
    path,
    standard_path,
    vertex_canonical,
    vertices_at_depth,
)

p = 3
cfg = PadicConfig(p, 14)

print("== layers ==")
for i in range(4):
    layer = vertices_at_depth(p, i)
    print(f"depth {i}: {len(layer)} vertices (expected {(p + 1) * p ** (i - 1) if i else 1})")

v0 = Vertex.root(p)
print("\n== lattice classes ==")
for cols in [((1, 0), (0, 1)), ((3, 0), (0, 1)), ((9, 1), (0, 1)), ((1, 0), (5, 27))]:
    v = vertex_canonical(cfg, cols)
    print(f"columns {cols} -> {v}, distance from root {distance(v0, v)}")

print("\n== a geodesic and its transport ==")
sp = standard_path(p, 3)
print("standard path:", sp)
target = [v0, neighbors(v0)[2]]
while len(target) < 4:
    target.append([w for w in neighbors(target[-1]) if w != target[-2]][1])
print("target path:  ", target)
g = map_path(cfg, sp, target)
print("transport matrix:", g)
print("vertexwise check:", all(act_vertex(g, a) == b for a, b in zip(sp, target)))
print("path() recovers the target geodesic:", path(target[0], target[-1]) == target)

print("\n== DOT output (depth 1) ==")
print(dot_tree(p, 1))
