#!/usr/bin/env python3
"""Orbits of congruence subgroups on the projective line, as exact discs.

The level-k group of a vertex cuts P^1(Q_p) into disjoint closed discs:
p^k of radius p^-k on the unit disc and p^(k-1) outside.  Moving the vertex
transports the picture by an exact Moebius map, so orbits of far-away
vertices become large discs, and even complements of discs.  The script
enumerates a few orbit families and checks the counting identities.
"""

import json

from btcomplex.padics import PadicConfig
from btcomplex.projline import ProjPoint
from btcomplex.tree import Vertex, standard_orientation, standard_path
from btcomplex.orbits import (
    build_registry,
    check_partition,
    enumerate_orbits,
    orbit_of_point,
    verify_counts,
)

p, k = 3, 1
cfg = PadicConfig(p, 14)
v0, v1 = standard_path(p, 1)

print(f"== orbits of the root vertex at level {k} ==")
for rec in enumerate_orbits(cfg, v0, k):
    print("  ", rec.ball, " measure", rec.ball.measure())

print("\n== the same for the standard edge ==")
for rec in enumerate_orbits(cfg, standard_orientation(v0, v1), k):
    print("  ", rec.ball)

print("\n== a deep vertex: transported orbits grow ==")
deep = Vertex(p, 2, (1, 0))
for rec in enumerate_orbits(cfg, deep, k):
    print("  ", rec.ball, "chart", rec.ball.chart_data()[0])
print("these still partition P^1:", check_partition(cfg, [r.ball for r in enumerate_orbits(cfg, deep, k)]))

print("\n== the orbit of a point ==")
for z in (0, 5, None):
    pt = ProjPoint.infinity(cfg) if z is None else ProjPoint.from_z(cfg, z)
    rec = orbit_of_point(cfg, deep, k, pt)
    print(f"  orbit of {'inf' if z is None else z}: {rec.ball}")

print("\n== counting certificates over a depth-2 registry ==")
reg = build_registry(cfg, 2, k)
report = verify_counts(reg)
for row in report["rows"]:
    print(f"  [{'ok' if row['pass'] else 'FAIL'}] {row['name']}: expected {row['expected']}, got {row['actual']}")
print("overall:", json.dumps(report["pass"]))
