"""Congruence-subgroup orbits on P^1(Q_p) as exact discs.

For the standard vertex the level-k orbits are the discs of radius p^-k in
both charts; for the standard edge they are the discs of radius p^-(k-1) on
the unit disc and p^-k on the outside.  Every other simplex is handled by
transporting the standard picture with the deterministic path-transitivity
element: orbits move by B -> B.g^{-1} when the simplex moves by g.

The registry collects all orbit records over a ball of simplices, flags the
minimal ones (deepest vertex, contained in an orbit of the parent), links
containments, and fixes the total order used by the boundary matrix:
measure descending, then owner direction, then ball key.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .padics import PadicConfig
from .projline import (
    Ball,
    GL2,
    ProjPoint,
    ball_cells,
    cell_ids,
    moebius_apply,
    moebius_ball_image,
    point_cell,
)
from .tree import (
    OrientedEdge,
    Vertex,
    edges_upto,
    transport_to_edge,
    transport_to_vertex,
    vertices_upto,
)


# ---------------------------------------------------------------------------
# records
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OrbitRecord:
    """One orbit of the level-k group of a simplex, stored as its disc."""

    simplex: object  # Vertex or OrientedEdge
    k: int
    ball: Ball

    def id_str(self) -> str:
        return f"{self.simplex.id_str()}|{self.ball.id_str()}"

    def __repr__(self):
        return self.id_str()


def _standard_vertex_balls(cfg: PadicConfig, k: int):
    p = cfg.p
    out = [Ball.z_disc(cfg, r, k) for r in range(p**k)]
    out.extend(Ball.u_disc(cfg, u, k) for u in range(0, p**k, p))
    return out


def _standard_edge_balls(cfg: PadicConfig, k: int):
    """(ball, owner_is_child) pairs for the standard edge (v0, v1)."""
    p = cfg.p
    out = [(Ball.z_disc(cfg, r, k - 1), True) for r in range(p ** (k - 1))]
    out.extend((Ball.u_disc(cfg, u, k), False) for u in range(0, p**k, p))
    return out


def simplex_transport(cfg: PadicConfig, simplex) -> GL2:
    if isinstance(simplex, Vertex):
        return transport_to_vertex(cfg, simplex)
    return transport_to_edge(cfg, simplex)


def enumerate_orbits(cfg: PadicConfig, simplex, k: int):
    """All level-k orbit records of a simplex: pairwise-disjoint discs covering P^1."""
    assert k >= 1
    hinv = simplex_transport(cfg, simplex).inverse()
    if isinstance(simplex, Vertex):
        balls = [moebius_ball_image(hinv, b) for b in _standard_vertex_balls(cfg, k)]
    else:
        balls = [moebius_ball_image(hinv, b) for b, _ in _standard_edge_balls(cfg, k)]
    records = [OrbitRecord(simplex, k, b) for b in balls]
    assert len({r.ball for r in records}) == len(records)
    return records


def orbit_of_point(cfg: PadicConfig, simplex, k: int, z: ProjPoint) -> OrbitRecord:
    """The orbit record whose disc contains z."""
    assert k >= 1
    h = simplex_transport(cfg, simplex)
    zs = moebius_apply(h, z)
    edge = isinstance(simplex, OrientedEdge)
    m_in = (k - 1) if edge else k
    if zs.in_z_domain():
        std = Ball.z_disc(cfg, zs.z_coord(), m_in)
    else:
        u = cfg.zero() if zs.is_infinity() else zs.u_coord()
        std = Ball.u_disc(cfg, u, k)
    return OrbitRecord(simplex, k, moebius_ball_image(h.inverse(), std))


# ---------------------------------------------------------------------------
# registries
# ---------------------------------------------------------------------------


@dataclass
class OrbitRegistry:
    """Built once, then read-only; the complex layer memoizes derived lookup
    tables on the instance, so share a registry across threads only after
    warming it up single-threaded."""

    cfg: PadicConfig
    n: int
    k: int
    vertex_records: dict = field(default_factory=dict)  # Vertex -> [OrbitRecord]
    edge_records: dict = field(default_factory=dict)  # OrientedEdge -> [OrbitRecord]
    minimal_flags: dict = field(default_factory=dict)  # record id -> bool
    minimal_witness: dict = field(default_factory=dict)  # record id -> parent OrbitRecord
    edge_owner: dict = field(default_factory=dict)  # edge record id -> Vertex
    nonmin_order: list = field(default_factory=list)  # ordered non-minimal vertex records

    @property
    def p(self) -> int:
        return self.cfg.p

    def vertices(self):
        return list(self.vertex_records)

    def edges(self):
        return list(self.edge_records)

    def all_vertex_records(self):
        for recs in self.vertex_records.values():
            yield from recs

    def all_edge_records(self):
        for recs in self.edge_records.values():
            yield from recs

    def minimal_records(self):
        return [r for r in self.all_vertex_records() if self.minimal_flags[r.id_str()]]

    def nonminimal_records(self):
        return [r for r in self.all_vertex_records() if not self.minimal_flags[r.id_str()]]


def _total_order_key(rec: OrbitRecord):
    # Measure-descending refines inclusion strictly; ties broken by the owner
    # vertex's direction, then by the ball's canonical key.
    mu = rec.ball.measure()
    return (-mu, rec.simplex.sort_key(), rec.ball.sort_key())


def build_registry(cfg: PadicConfig, n: int, k: int) -> OrbitRegistry:
    """All orbit records for simplices within distance n of the root."""
    assert n >= 0 and k >= 1
    reg = OrbitRegistry(cfg, n, k)
    p = cfg.p
    for v in vertices_upto(p, n):
        reg.vertex_records[v] = enumerate_orbits(cfg, v, k)
    for e in edges_upto(p, n):
        recs = []
        h = transport_to_edge(cfg, e)
        hinv = h.inverse()
        par, chi = e.src, e.dst
        for ball, owner_is_child in _standard_edge_balls(cfg, k):
            rec = OrbitRecord(e, k, moebius_ball_image(hinv, ball))
            recs.append(rec)
            reg.edge_owner[rec.id_str()] = chi if owner_is_child else par
        reg.edge_records[e] = recs
    _flag_minimal(reg)
    reg.nonmin_order = sorted(reg.nonminimal_records(), key=_total_order_key)
    return reg


def _flag_minimal(reg: OrbitRegistry):
    """Deepest-vertex records contained in an orbit of the neighbor toward the
    root are the minimal ones; everything shallower never is."""
    n = reg.n
    for v, recs in reg.vertex_records.items():
        if v.n != n or n == 0:
            for r in recs:
                reg.minimal_flags[r.id_str()] = False
            continue
        parent_recs = reg.vertex_records[v.parent()]
        for r in recs:
            witness = next((q for q in parent_recs if r.ball.subset(q.ball)), None)
            reg.minimal_flags[r.id_str()] = witness is not None
            if witness is not None:
                reg.minimal_witness[r.id_str()] = witness


def minimal_orbits(reg: OrbitRegistry):
    """The minimal records; their balls partition P^1 (a separate check)."""
    assert reg.n >= 1
    return reg.minimal_records()


def edge_orbit_owner(reg: OrbitRegistry, rec: OrbitRecord) -> Vertex:
    """The unique endpoint whose own registry holds the same ball."""
    e = rec.simplex
    assert isinstance(e, OrientedEdge)
    hits = [
        v
        for v in e.endpoints()
        if any(q.ball == rec.ball for q in reg.vertex_records.get(v, ()))
    ]
    if len(hits) != 1:
        raise AssertionError(
            f"edge orbit {rec.id_str()} owned by {len(hits)} endpoints; expected exactly one"
        )
    return hits[0]


# ---------------------------------------------------------------------------
# partitions and counts
# ---------------------------------------------------------------------------


def check_partition(cfg: PadicConfig, balls, level: int | None = None) -> bool:
    """Exact disjoint-cover test by residue enumeration at a refining level."""
    balls = list(balls)
    if not balls:
        return False
    needed = max(b.required_level() for b in balls)
    M = needed if level is None else max(level, needed)
    seen = set()
    total = 0
    for b in balls:
        cells = ball_cells(cfg, b, M)
        total += len(cells)
        seen |= cells
    universe = len(cell_ids(cfg, M))
    return total == universe and len(seen) == universe


def expected_orbit_count(p: int, k: int, simplex) -> int:
    if isinstance(simplex, Vertex):
        return (p + 1) * p ** (k - 1)
    return 2 * p ** (k - 1)


def nonminimal_count_formula(p: int, k: int, n: int) -> int:
    return 2 * p ** (k - 1) * (p + 1) * (p**n - 1) // (p - 1)


def verify_counts(reg: OrbitRegistry) -> dict:
    """Counting certificates; each row carries expected/actual and a verdict."""
    p, k, n = reg.p, reg.k, reg.n
    rows = []
    fails = []

    def row(name, expected, actual, detail=""):
        ok = expected == actual
        rows.append(
            {"name": name, "expected": expected, "actual": actual, "pass": ok, "detail": detail}
        )
        if not ok:
            fails.append(rows[-1])

    for i in range(1, n + 1):
        row(
            f"vertices at distance {i}",
            (p + 1) * p ** (i - 1),
            sum(1 for v in reg.vertices() if v.n == i),
        )
    bad_v = [
        v.id_str()
        for v, recs in reg.vertex_records.items()
        if len(recs) != expected_orbit_count(p, k, v)
    ]
    row("vertex orbit counts (q+1)q^(k-1) everywhere", [], bad_v)
    bad_e = [
        e.id_str()
        for e, recs in reg.edge_records.items()
        if len(recs) != expected_orbit_count(p, k, e)
    ]
    row("edge orbit counts 2q^(k-1) everywhere", [], bad_e)

    if n >= 1:
        mincount = {v.id_str(): 0 for v in reg.vertices()}
        for r in reg.minimal_records():
            mincount[r.simplex.id_str()] += 1
        bad_deep = [
            v.id_str() for v in reg.vertices() if v.n == n and mincount[v.id_str()] != p**k
        ]
        row("q^k minimal orbits at every deepest vertex", [], bad_deep)
        bad_shallow = [
            v.id_str() for v in reg.vertices() if v.n < n and mincount[v.id_str()] != 0
        ]
        row("no minimal orbits above the deepest layer", [], bad_shallow)

        r_formula = nonminimal_count_formula(p, k, n)
        row("non-minimal record count", r_formula, len(reg.nonminimal_records()))
        row("edge record count", r_formula, sum(len(v) for v in reg.edge_records.values()))

        # the set identity: edge records biject onto non-minimal vertex records
        owner_map = {}
        collisions = []
        for rec in reg.all_edge_records():
            owner = edge_orbit_owner(reg, rec)
            key = (owner, rec.ball)
            if key in owner_map:
                collisions.append(rec.id_str())
            owner_map[key] = rec
        row("edge->vertex record map injective", [], collisions)
        nonmin_keys = {(r.simplex, r.ball) for r in reg.nonminimal_records()}
        diff = sorted(f"{v.id_str()}|{b.id_str()}" for (v, b) in set(owner_map) ^ nonmin_keys)
        row("edge records = non-minimal vertex records (as owner/ball sets)", [], diff)

    return {
        "params": {"p": p, "k": k, "n": n},
        "rows": rows,
        "pass": not fails,
        "counterexamples": fails,
    }


# ---------------------------------------------------------------------------
# the enumeration oracle: orbits as BFS closures on residue cells
# ---------------------------------------------------------------------------


def sample_group_element(cfg: PadicConfig, simplex, k: int, rng: random.Random) -> GL2:
    """Seeded random element of the level-k group of a simplex, built from the
    explicit congruence pattern in the standard frame and conjugated over."""
    p = cfg.p
    span = p ** min(cfg.N - 2, k + 5)
    a, b, c, d = (rng.randrange(span) for _ in range(4))
    pk = Fraction(p**k)
    if isinstance(simplex, Vertex):
        std = GL2(cfg, 1 + pk * a, pk * b, pk * c, 1 + pk * d)
    else:
        std = GL2(cfg, 1 + pk * a, pk * b, Fraction(p ** (k - 1)) * c, 1 + pk * d)
    h = simplex_transport(cfg, simplex)
    return h @ std @ h.inverse()


def bfs_orbit_cells(cfg: PadicConfig, simplex, k: int, z: ProjPoint, rng: random.Random,
                    generators: int = 30, level: int | None = None):
    """Closure of z's residue cell under sampled group elements, as cell ids.

    Generators are reduced to integer matrices mod a comfortable power of p so
    the closure runs on machine integers; the action descends to level-M cells
    because every group element permutes the cells inside each of its orbit
    discs isometrically.
    """
    p = cfg.p
    M = (k + 3) if level is None else level
    gens = [sample_group_element(cfg, simplex, k, rng).scaled_integral() for _ in range(generators)]
    guard = min(
        [cfg.N - 2]
        + [e.prec for g in gens for e in g.entries() if not e.is_zero()]
    )
    assert guard >= M + 6, "working precision too small for the closure oracle"
    work = p**guard
    int_gens = [
        tuple(
            0 if e.is_zero() else (e.unit_residue(guard) * pow(p, e.valuation, work)) % work
            for e in g.entries()
        )
        for g in gens
    ]

    def cell_of_pair(x, y):
        assert x or y, "projective pair collapsed"
        s = min(_ival(x, p) if x else guard, _ival(y, p) if y else guard)
        assert s <= guard - M - 2, "residue budget exceeded"
        x //= p**s
        y //= p**s
        if y % p != 0:  # val(x) >= val(y) = 0: the unit disc
            return ("z", x * pow(y, -1, p**M) % p**M)
        return ("w", y * pow(x, -1, p**M) % p**M)

    start = _cell_pair(point_cell(cfg, z, M))
    seen = {cell_of_pair(*start)}
    frontier = [start]
    while frontier:
        x, y = frontier.pop()
        for a, b, c, d in int_gens:
            cid = cell_of_pair((x * a + y * c) % work, (x * b + y * d) % work)
            if cid not in seen:
                seen.add(cid)
                frontier.append(_cell_pair(cid))
    return frozenset(seen)


def _ival(x: int, p: int) -> int:
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def _cell_pair(cid):
    kind, r = cid
    return (r, 1) if kind == "z" else (1, r)
