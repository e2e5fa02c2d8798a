"""The Bruhat-Tits tree of GL2(Q_p).

A vertex at distance n from the root v0 = [Z_p + Z_p] is encoded by a point
of P^1(Z/p^n): the homothety class determines, after scaling to a primitive
sublattice of Z_p^2 of cyclic index p^n, the row functional (a : b) mod p^n
whose kernel it is.  Canonical coordinate forms are (1, b) with b mod p^n,
or (a, 1) with a in pZ/p^n.  Reducing the coordinate mod p^(n-1) gives the
unique neighbor toward the root, so the encoding is simultaneously the tree
structure and the classical ball parametrization of directions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .padics import INF, PadicConfig, val_fraction
from .projline import GL2, Ball


# ---------------------------------------------------------------------------
# vertices
# ---------------------------------------------------------------------------


def _canonical_coord(p: int, n: int, a: int, b: int):
    """Canonical form of (a : b) in P^1(Z/p^n); requires one of a, b a unit."""
    mod = p**n
    a %= mod
    b %= mod
    if a % p != 0:
        return (1, b * pow(a, -1, mod) % mod if n else 0)
    assert b % p != 0, "coordinate pair is not unimodular"
    return (a * pow(b, -1, mod) % mod, 1)


@dataclass(frozen=True)
class Vertex:
    """Lattice class at depth n, coordinate a canonical point of P^1(Z/p^n)."""

    p: int
    n: int
    coord: tuple

    @staticmethod
    def root(p: int) -> "Vertex":
        return Vertex(p, 0, (1, 0))

    @staticmethod
    def make(p: int, n: int, a: int, b: int) -> "Vertex":
        if n == 0:
            return Vertex.root(p)
        return Vertex(p, n, _canonical_coord(p, n, a, b))

    def parent(self) -> "Vertex":
        assert self.n >= 1, "the root has no parent"
        a, b = self.coord
        return Vertex.make(self.p, self.n - 1, a, b)

    def children(self):
        p, n = self.p, self.n
        if n == 0:
            return vertices_at_depth(p, 1)
        a, b = self.coord
        step = p**n
        if a == 1:
            return [Vertex(p, n + 1, (1, b + t * step)) for t in range(p)]
        return [Vertex(p, n + 1, (a + t * step, 1)) for t in range(p)]

    def basis_matrix(self):
        """Integer 2x2 matrix whose columns span a representative lattice."""
        a, b = self.coord
        q = self.p**self.n
        if a == 1:
            return ((-b, q), (1, 0))
        return ((1, 0), (-a, q))

    def direction_ball(self, cfg: PadicConfig) -> Ball:
        """The depth-n ball of P^1(Q_p) of directions through this vertex."""
        assert self.n >= 1, "the root sees every direction"
        a, b = self.coord
        if a == 1:
            return Ball.u_disc(cfg, b, self.n)
        return Ball.z_disc(cfg, a, self.n)

    def sort_key(self):
        a, b = self.coord
        if b == 1:  # toward a z-point a (a in pZ)
            return (self.n, 0, a)
        if b % self.p != 0:  # toward the z-point 1/b
            c = pow(b, -1, self.p**self.n) if self.n else 0
            return (self.n, 0, c)
        return (self.n, 1, b)  # toward the u-point b (w side)

    def to_json(self) -> dict:
        return {"n": self.n, "coord": list(self.coord)}

    def id_str(self) -> str:
        return f"v({self.n};{self.coord[0]}:{self.coord[1]})"

    def __repr__(self):
        return self.id_str()


@dataclass(frozen=True)
class OrientedEdge:
    """Ordered pair of adjacent vertices."""

    src: Vertex
    dst: Vertex

    def __post_init__(self):
        assert distance(self.src, self.dst) == 1, "endpoints are not adjacent"

    def reversed(self) -> "OrientedEdge":
        return OrientedEdge(self.dst, self.src)

    def endpoints(self):
        return (self.src, self.dst)

    @property
    def depth(self) -> int:
        return max(self.src.n, self.dst.n)

    def id_str(self) -> str:
        return f"e[{self.src.id_str()}->{self.dst.id_str()}]"

    def __repr__(self):
        return self.id_str()


def standard_orientation(v: Vertex, w: Vertex) -> OrientedEdge:
    """Orient every edge away from the root (parent first)."""
    assert abs(v.n - w.n) == 1
    return OrientedEdge(v, w) if v.n < w.n else OrientedEdge(w, v)


class Orientation:
    """A choice of one orientation per unordered edge; default: away from root."""

    def __init__(self, chooser=standard_orientation):
        self.chooser = chooser

    def orient(self, v: Vertex, w: Vertex) -> OrientedEdge:
        e = self.chooser(v, w)
        assert {e.src, e.dst} == {v, w}
        return e


# ---------------------------------------------------------------------------
# enumeration and metric structure
# ---------------------------------------------------------------------------


def vertices_at_depth(p: int, n: int):
    """All vertices at distance exactly n from the root: P^1(Z/p^n)."""
    if n == 0:
        return [Vertex.root(p)]
    mod = p**n
    out = [Vertex(p, n, (1, b)) for b in range(mod)]
    out.extend(Vertex(p, n, (a, 1)) for a in range(0, mod, p))
    return out


def vertices_upto(p: int, n: int):
    out = []
    for i in range(n + 1):
        out.extend(vertices_at_depth(p, i))
    return out


def edges_upto(p: int, n: int):
    """Standard-oriented edges (parent, child) with child depth <= n."""
    out = []
    for i in range(1, n + 1):
        for v in vertices_at_depth(p, i):
            out.append(OrientedEdge(v.parent(), v))
    return out


def neighbors(v: Vertex):
    """The q+1 adjacent vertices."""
    out = list(v.children())
    if v.n >= 1:
        out.append(v.parent())
    return out


def vertex_canonical(cfg: PadicConfig, matrix) -> Vertex:
    """Vertex of the lattice spanned by the columns of a 2x2 matrix.

    Entries may be ints, Fractions, or PadicNums; homothetic inputs give the
    identical Vertex.
    """
    p = cfg.p
    ent = [cfg.number(x) for row in matrix for x in row]
    if all(e.is_zero() for e in ent):
        raise ValueError("zero matrix spans no lattice")
    det = ent[0] * ent[3] - ent[1] * ent[2]
    if det.is_zero():
        raise ValueError("singular matrix spans no lattice")
    e1 = min(e.valuation for e in ent if not e.is_zero())
    scaled = [e.shift(-e1) for e in ent]
    n = (scaled[0] * scaled[3] - scaled[1] * scaled[2]).valuation
    assert n is not INF and n >= 0
    if n == 0:
        return Vertex.root(p)
    mod = p**n
    m11, m12, m21, m22 = (0 if e.is_zero() else int(e.residue_class(n)) for e in scaled)
    for row in (((m22 % mod), (-m12) % mod), ((-m21) % mod, (m11 % mod))):
        if row[0] % p != 0 or row[1] % p != 0:
            return Vertex.make(p, n, row[0], row[1])
    raise AssertionError("adjugate of a primitive lattice matrix has a unimodular row")


def _frac_matrix(m):
    return tuple(tuple(Fraction(x) for x in row) for row in m)


def distance(v: Vertex, w: Vertex) -> int:
    """Graph distance: difference of the elementary divisor exponents of a
    relative basis matrix, computed exactly over the rationals."""
    if v == w:
        return 0
    p = v.p
    (a, b), (c, d) = _frac_matrix(v.basis_matrix())
    det = a * d - b * c
    (x, y), (z, t) = _frac_matrix(w.basis_matrix())
    # C = B_v^{-1} B_w
    c11 = (d * x - b * z) / det
    c12 = (d * y - b * t) / det
    c21 = (a * z - c * x) / det
    c22 = (a * t - c * y) / det
    ent = [c11, c12, c21, c22]
    e1 = min(val_fraction(e, p) for e in ent if e != 0)
    edet = val_fraction(c11 * c22 - c12 * c21, p)
    return int(edet - 2 * e1)


def _lca_depth(v: Vertex, w: Vertex) -> int:
    """Depth of the lowest common ancestor in the rooted encoding."""
    j = min(v.n, w.n)
    av, aw = v, w
    while av.n > j:
        av = av.parent()
    while aw.n > j:
        aw = aw.parent()
    while av != aw:
        av, aw = av.parent(), aw.parent()
    return av.n


def path(v: Vertex, w: Vertex):
    """The unique geodesic from v to w, inclusive."""
    j = _lca_depth(v, w)
    up = [v]
    while up[-1].n > j:
        up.append(up[-1].parent())
    down = [w]
    while down[-1].n > j:
        down.append(down[-1].parent())
    assert up[-1] == down[-1]
    return up + down[-2::-1]


def act_vertex(g: GL2, v: Vertex) -> Vertex:
    """g.[L] = [g.L]; a distance-preserving action."""
    cfg = g.cfg
    (m11, m12), (m21, m22) = v.basis_matrix()
    b11, b12 = cfg.from_int(m11), cfg.from_int(m12)
    b21, b22 = cfg.from_int(m21), cfg.from_int(m22)
    out = (
        (g.a * b11 + g.b * b21, g.a * b12 + g.b * b22),
        (g.c * b11 + g.d * b21, g.c * b12 + g.d * b22),
    )
    return vertex_canonical(cfg, out)


# ---------------------------------------------------------------------------
# path transitivity
# ---------------------------------------------------------------------------


def standard_path(p: int, length: int):
    """v0, v1, ..., v_length with v_i = [(p^i) + Z_p], coordinates (1, 0)."""
    return [Vertex.root(p)] + [Vertex(p, i, (1, 0)) for i in range(1, length + 1)]


def is_geodesic(pathlist) -> bool:
    if len(pathlist) <= 1:
        return True
    for i in range(len(pathlist) - 1):
        if distance(pathlist[i], pathlist[i + 1]) != 1:
            return False
    return all(pathlist[i + 1] != pathlist[i - 1] for i in range(1, len(pathlist) - 1))


def _standardize(cfg: PadicConfig, pathlist) -> GL2:
    """g with g.(standard path) = pathlist, built by the inductive correction:
    move the first vertex by a basis matrix, then repair one vertex at a time
    with an element fixing everything shallower."""
    p = cfg.p
    h = GL2.from_rows(cfg, pathlist[0].basis_matrix())
    for i in range(1, len(pathlist)):
        u = act_vertex(h.inverse(), pathlist[i])
        assert u.n == i and distance(u, standard_path(p, i)[i - 1]) == 1
        if i == 1:
            a, b = u.coord
            if a % p != 0:
                w_inv = GL2.from_rows(cfg, ((a, b), (0, 1)))
            else:
                w_inv = GL2.from_rows(cfg, ((a, b), (1, 0)))
            w = w_inv.inverse()
        else:
            a, b = u.coord
            assert a == 1 and b % p ** (i - 1) == 0, "input path is not geodesic"
            w = GL2.from_rows(cfg, ((1, b), (0, 1)))
            w = w.inverse()
        # w maps the standard vertex v_i to u while fixing v_0 .. v_{i-1}
        assert act_vertex(w, standard_path(p, i)[i]) == u
        h = h @ w
    return h


def map_path(cfg: PadicConfig, path_p, path_q) -> GL2:
    """A matrix g with g . path_p[i] = path_q[i] for all i.

    Both inputs must be geodesics of equal length; the output is the
    deterministic element produced by the inductive construction.
    """
    if len(path_p) != len(path_q):
        raise ValueError("paths have different lengths")
    if not (is_geodesic(path_p) and is_geodesic(path_q)):
        raise ValueError("input is not a geodesic")
    g = _standardize(cfg, path_q) @ _standardize(cfg, path_p).inverse()
    for a, b in zip(path_p, path_q):
        assert act_vertex(g, a) == b
    return g


def transport_to_vertex(cfg: PadicConfig, v: Vertex) -> GL2:
    """h with h . v0 = v (a basis matrix of v)."""
    return GL2.from_rows(cfg, v.basis_matrix())


def transport_to_edge(cfg: PadicConfig, e: OrientedEdge) -> GL2:
    """h carrying the standard edge (v0, v1) to (parent, child)."""
    p = e.src.p
    par, chi = (e.src, e.dst) if e.src.n < e.dst.n else (e.dst, e.src)
    return map_path(cfg, standard_path(p, 1), [par, chi])


# ---------------------------------------------------------------------------
# congruence subgroups
# ---------------------------------------------------------------------------


def _entry_vals(g: GL2):
    one = g.cfg.one()
    return (
        (g.a - one).valuation,
        g.b.valuation,
        g.c.valuation,
        (g.d - one).valuation,
    )


def _matches_vertex_pattern(g: GL2, k: int) -> bool:
    return all(v >= k for v in _entry_vals(g))


def _matches_edge_pattern(g: GL2, k: int) -> bool:
    va, vb, vc, vd = _entry_vals(g)
    return va >= k and vb >= k and vc >= k - 1 and vd >= k


def in_group(g: GL2, simplex, k: int) -> bool:
    """Membership in the level-k congruence subgroup of a vertex or edge.

    Vertex v: conjugate into the frame of v and test that the matrix is
    congruent to the identity mod p^k.  Edge: conjugate the standard edge
    onto it and test the pattern with the lower-left entry allowed one digit
    less.
    """
    assert k >= 1
    cfg = g.cfg
    if isinstance(simplex, Vertex):
        h = transport_to_vertex(cfg, simplex)
        return _matches_vertex_pattern(h.inverse() @ g @ h, k)
    h = transport_to_edge(cfg, simplex)
    return _matches_edge_pattern(h.inverse() @ g @ h, k)


def factor_edge_group(g: GL2, e: OrientedEdge, k: int):
    """Split g in the edge group as (deep factor, shallow factor).

    In the standard frame [[1+p^k a, p^k b], [p^(k-1) c, 1+p^k d]] factors as
    a lower-triangular element of the deeper vertex group times an
    upper-triangular element of the shallower vertex group; the result is
    conjugated back.  Requires in_group(g, e, k).
    """
    cfg = g.cfg
    if not in_group(g, e, k):
        raise ValueError("matrix is not in the edge group at this level")
    h = transport_to_edge(cfg, e)
    hinv = h.inverse()
    std = hinv @ g @ h
    g1_std = GL2(cfg, std.a, 0, std.c, 1)
    g2_std = g1_std.inverse() @ std
    assert _matches_vertex_pattern(g2_std, k)
    par, chi = (e.src, e.dst) if e.src.n < e.dst.n else (e.dst, e.src)
    g1 = h @ g1_std @ hinv
    g2 = h @ g2_std @ hinv
    assert in_group(g1, chi, k) and in_group(g2, par, k)
    return g1, g2


# ---------------------------------------------------------------------------
# emitters
# ---------------------------------------------------------------------------


def dot_tree(p: int, n: int) -> str:
    """Graphviz DOT of the tree out to depth n, labels '(depth; a:b)'."""
    lines = ["graph bruhat_tits {", "  node [shape=circle, fontsize=10];"]
    for v in vertices_upto(p, n):
        lines.append(f'  "{v.id_str()}" [label="({v.n}; {v.coord[0]}:{v.coord[1]})"];')
    for e in edges_upto(p, n):
        lines.append(f'  "{e.src.id_str()}" -- "{e.dst.id_str()}";')
    lines.append("}")
    return "\n".join(lines)
