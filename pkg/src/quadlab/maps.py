"""Half-edge combinatorial maps on the sphere, with the ribbon-road model
for simple cycles: circuits travel oriented lanes (darts) and sweep
roundabout arcs at vertices, so a cycle may reuse a vertex through disjoint
arcs and may use both lanes of an edge.

Conventions: ``nxt`` is the counterclockwise rotation around the origin
vertex of a dart, and faces are the orbits of ``nxt(opp(.))``, which keeps
every face on the left of its darts.  Around each vertex the local slot
order per ribbon is (out-lane, core, in-lane, corner); an arc enters at an
in-lane slot and sweeps counterclockwise to an out-lane slot.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

__all__ = [
    "CombinatorialMap",
    "Quadrangulation",
    "SimpleCycle",
    "CutResult",
    "MapError",
    "NonInvolution",
    "DisconnectedMap",
    "NonSphericalEuler",
    "UnknownVertex",
    "NotSimpleCycle",
    "NotFoundWithinBound",
    "InvalidQuadrangulation",
    "build_map",
    "map_from_tree",
    "bfs_distance",
    "cut_along_cycle",
    "brute_min_separating_loop",
    "map_to_lines",
    "map_from_lines",
]


class MapError(ValueError):
    pass


class NonInvolution(MapError):
    pass


class DisconnectedMap(MapError):
    pass


class NonSphericalEuler(MapError):
    pass


class UnknownVertex(KeyError):
    pass


class NotSimpleCycle(MapError):
    pass


class NotFoundWithinBound(MapError):
    pass


class InvalidQuadrangulation(MapError):
    pass


class CombinatorialMap:
    """Immutable dart-based planar map (sphere topology enforced)."""

    __slots__ = ("opp", "nxt", "vert", "nv", "ne", "nf", "face_of", "faces", "vertex_darts")

    def __init__(self, opp, nxt, vert, validate=True):
        self.opp = tuple(opp)
        self.nxt = tuple(nxt)
        self.vert = tuple(vert)
        nd = len(self.opp)
        if validate:
            if nd == 0 or nd % 2:
                raise MapError("dart count must be positive and even")
            for d in range(nd):
                o = self.opp[d]
                if not 0 <= o < nd or o == d or self.opp[o] != d:
                    raise NonInvolution(f"opp is not a fixed-point-free involution at {d}")
            if sorted(self.nxt) != list(range(nd)):
                raise MapError("nxt is not a permutation")
            for d in range(nd):
                if self.vert[self.nxt[d]] != self.vert[d]:
                    raise MapError("rotation orbit changes vertex")
        self.nv = max(self.vert) + 1
        self.ne = nd // 2
        face_of = [-1] * nd
        faces = []
        for d in range(nd):
            if face_of[d] >= 0:
                continue
            orbit = []
            e = d
            while face_of[e] < 0:
                face_of[e] = len(faces)
                orbit.append(e)
                e = self.nxt[self.opp[e]]
            if e != d:
                raise MapError("face orbit inconsistency")
            faces.append(tuple(orbit))
        self.face_of = tuple(face_of)
        self.faces = tuple(faces)
        self.nf = len(faces)
        vd = [[] for _ in range(self.nv)]
        seen = [False] * nd
        for d in range(nd):
            if seen[d]:
                continue
            orbit = []
            e = d
            while not seen[e]:
                seen[e] = True
                orbit.append(e)
                e = self.nxt[e]
            vd[self.vert[d]] = orbit
        self.vertex_darts = tuple(tuple(o) for o in vd)
        if validate:
            if any(not o for o in self.vertex_darts):
                raise MapError("vertex with no darts")
            self._check_connected()
            if self.nv - self.ne + self.nf != 2:
                raise NonSphericalEuler(
                    f"V-E+F = {self.nv}-{self.ne}+{self.nf} != 2"
                )

    def _check_connected(self):
        nd = len(self.opp)
        seen = [False] * nd
        q = deque([0])
        seen[0] = True
        count = 1
        while q:
            d = q.popleft()
            for e in (self.opp[d], self.nxt[d]):
                if not seen[e]:
                    seen[e] = True
                    count += 1
                    q.append(e)
        if count != nd:
            raise DisconnectedMap("darts are not connected under opp/nxt")

    # -- queries --------------------------------------------------------
    def head(self, d: int) -> int:
        return self.vert[self.opp[d]]

    def degree(self, v: int) -> int:
        return len(self.vertex_darts[v])

    def face_degrees(self):
        return tuple(len(f) for f in self.faces)

    def neighbors(self, v: int):
        return [self.head(d) for d in self.vertex_darts[v]]

    def two_coloring(self):
        """A proper 2-coloring of vertices, or None if not bipartite."""
        color = [-1] * self.nv
        color[0] = 0
        q = deque([0])
        while q:
            v = q.popleft()
            for w in self.neighbors(v):
                if color[w] < 0:
                    color[w] = 1 - color[v]
                    q.append(w)
                elif color[w] == color[v]:
                    return None
        return color

    def is_quadrangulation(self) -> bool:
        return all(len(f) == 4 for f in self.faces) and self.two_coloring() is not None


@dataclass(frozen=True)
class Quadrangulation:
    """A validated quadrangulation with optional marked vertices."""

    map: CombinatorialMap
    v1: int | None = None
    v2: int | None = None
    v3: int | None = None

    def __post_init__(self):
        if not self.map.is_quadrangulation():
            raise InvalidQuadrangulation("faces must all have degree four on a bipartite map")
        marks = [m for m in (self.v1, self.v2, self.v3) if m is not None]
        if len(set(marks)) != len(marks):
            raise InvalidQuadrangulation("marked vertices must be distinct")
        for m in marks:
            if not 0 <= m < self.map.nv:
                raise UnknownVertex(m)

    @property
    def n_faces(self) -> int:
        return self.map.nf


def build_map(edge_records) -> CombinatorialMap:
    """Build and validate a map from (dart, opposite, next_at_vertex, vertex)
    records; dart ids may be arbitrary and are normalized."""
    ids = [r[0] for r in edge_records]
    index = {d: i for i, d in enumerate(ids)}
    if len(index) != len(ids):
        raise MapError("duplicate dart ids")
    try:
        opp = [index[r[1]] for r in edge_records]
        nxt = [index[r[2]] for r in edge_records]
    except KeyError as e:
        raise MapError(f"record references unknown dart {e}") from None
    vert = [r[3] for r in edge_records]
    return CombinatorialMap(opp, nxt, vert)


def map_from_tree(tree) -> CombinatorialMap:
    """A plane tree as a map (single face of degree 2n)."""
    n = tree.n
    if n == 0:
        raise MapError("tree must have at least one edge")
    # dart 2(v-1) points parent->v, dart 2(v-1)+1 points v->parent
    opp = []
    vert = []
    for v in range(1, n + 1):
        opp.extend([2 * (v - 1) + 1, 2 * (v - 1)])
        vert.extend([tree.parent[v], v])
    nxt = [0] * (2 * n)
    for v in range(n + 1):
        out = []
        if v != 0:
            out.append(2 * (v - 1) + 1)
        out.extend(2 * (c - 1) for c in tree.children[v])
        for i, d in enumerate(out):
            nxt[d] = out[(i + 1) % len(out)]
    return CombinatorialMap(opp, nxt, vert)


def bfs_distance(m: CombinatorialMap, source: int):
    if not 0 <= source < m.nv:
        raise UnknownVertex(source)
    dist = [-1] * m.nv
    dist[source] = 0
    q = deque([source])
    while q:
        v = q.popleft()
        for w in m.neighbors(v):
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                q.append(w)
    return dist


# ----------------------------------------------------------------------
# Cycles in the ribbon-road sense
# ----------------------------------------------------------------------

class SimpleCycle:
    """A closed non-crossing circuit given by its dart sequence."""

    __slots__ = ("darts", "base", "arcs")

    def __init__(self, m: CombinatorialMap, darts):
        darts = tuple(darts)
        if not darts:
            raise NotSimpleCycle("empty circuit")
        if len(set(darts)) != len(darts):
            raise NotSimpleCycle("dart reused")
        k = len(darts)
        for i, d in enumerate(darts):
            if m.head(d) != m.vert[darts[(i + 1) % k]]:
                raise NotSimpleCycle("darts are not head-to-tail")
        self.darts = darts
        self.base = m.vert[darts[0]]
        self.arcs = _collect_arcs(m, darts)

    def __len__(self):
        return len(self.darts)


def _slot_tables(m: CombinatorialMap, v: int):
    """Position of each out-dart of v in its rotation orbit."""
    orbit = m.vertex_darts[v]
    return {d: i for i, d in enumerate(orbit)}, len(orbit)


def _arc_slots(pos_in, pos_out, nribbons):
    """Closed set of slots swept counterclockwise from in-slot of ribbon
    pos_in to out-slot of ribbon pos_out; slots per ribbon i are
    (out 4i, core 4i+1, in 4i+2, corner 4i+3)."""
    total = 4 * nribbons
    start = 4 * pos_in + 2
    end = 4 * pos_out
    out = []
    sslot = start
    while True:
        out.append(sslot)
        if sslot == end:
            break
        sslot = (sslot + 1) % total
    return out


def _collect_arcs(m: CombinatorialMap, darts):
    """Per-vertex swept arcs of the circuit; raises NotSimpleCycle if any
    two arcs at a vertex intersect."""
    k = len(darts)
    arcs = {}
    for i, d in enumerate(darts):
        v = m.head(d)
        e_next = darts[(i + 1) % k]
        table, deg = _slot_tables(m, v)
        pos_in = table[m.opp[d]]   # the arrival ribbon's out-dart at v
        pos_out = table[e_next]
        slots = _arc_slots(pos_in, pos_out, deg)
        arcs.setdefault(v, []).append(slots)
    for v, lst in arcs.items():
        seen = set()
        for slots in lst:
            if seen.intersection(slots):
                raise NotSimpleCycle(f"crossing arcs at vertex {v}")
            seen.update(slots)
    return arcs


@dataclass
class CutResult:
    """Two-sided decomposition of the sphere along a simple cycle."""

    face_side: dict
    vertex_side: dict

    def faces_on(self, side: int):
        return [f for f, s in self.face_side.items() if s == side]

    def side_of_vertex(self, v: int) -> int:
        return self.vertex_side[v]

    def separates(self, a: int, b: int) -> bool:
        return self.vertex_side[a] != self.vertex_side[b]


def cut_along_cycle(m: CombinatorialMap, cycle: SimpleCycle) -> CutResult:
    """Flood-fill the complement of the circuit into its two domains.

    Atoms are faces, vertex centers, edge cores and per-arc outer blobs;
    adjacency follows the ribbon-road local model.
    """
    used = set(cycle.darts)
    adj = {}

    def link(a, b):
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)

    edge_id = lambda d: min(d, m.opp[d])

    for d in range(0, len(m.opp)):
        if d != edge_id(d):
            continue
        d2 = m.opp[d]
        u_used, u2 = d in used, d2 in used
        if not u_used and not u2:
            link(("F", m.face_of[d]), ("F", m.face_of[d2]))
            link(("F", m.face_of[d]), ("E", d))
        elif u_used != u2:
            lane = d2 if u_used else d
            link(("E", d), ("F", m.face_of[lane]))
        # both lanes used: core connects only through its end gaps

    blob_count = 0
    for v in range(m.nv):
        orbit = m.vertex_darts[v]
        deg = len(orbit)
        arcs = cycle.arcs.get(v, [])
        swept = {}
        for slots in arcs:
            tag = ("B", blob_count)
            blob_count += 1
            for sslot in slots:
                swept[sslot] = tag
        for i, dout in enumerate(orbit):
            succ = m.nxt[dout]
            items = (
                (4 * i, dout, "lane"),
                (4 * i + 1, dout, "core"),
                (4 * i + 2, m.opp[dout], "lane"),
                (4 * i + 3, succ, "corner"),
            )
            for sslot, ref, kind in items:
                owner = swept.get(sslot, ("V", v))
                if kind == "lane":
                    if ref in used or owner[0] == "V":
                        # arc endpoint, or an untouched attachment whose
                        # strip already bridges core and face elsewhere
                        continue
                    # arc passes over an unused attachment: the strip hangs
                    # outside the arc and bridges to its core and face
                    link(owner, ("E", edge_id(ref)))
                    link(owner, ("F", m.face_of[ref]))
                    continue
                if kind == "corner":
                    link(owner, ("F", m.face_of[ref]))
                else:  # core
                    link(owner, ("E", edge_id(ref)))

    for f in range(m.nf):
        adj.setdefault(("F", f), [])
    for v in range(m.nv):
        adj.setdefault(("V", v), [])

    comp = {}
    n_comp = 0
    for start in adj:
        if start in comp:
            continue
        comp[start] = n_comp
        q = deque([start])
        while q:
            a = q.popleft()
            for b in adj[a]:
                if b not in comp:
                    comp[b] = n_comp
                    q.append(b)
        n_comp += 1
    if n_comp != 2:
        raise NotSimpleCycle(f"cut produced {n_comp} regions instead of 2")
    face_side = {f: comp[("F", f)] for f in range(m.nf)}
    vertex_side = {v: comp[("V", v)] for v in range(m.nv)}
    return CutResult(face_side, vertex_side)


# ----------------------------------------------------------------------
# Brute-force minimal separating loop
# ----------------------------------------------------------------------

def brute_min_separating_loop(m: CombinatorialMap, v1: int, v2: int, v3: int, max_len=None):
    """Exhaustive search over simple circuits through v3, shortest first.

    Returns (length, SimpleCycle) for the minimal circuit separating v1
    from v2 under cut_along_cycle; raises NotFoundWithinBound otherwise.
    """
    if len({v1, v2, v3}) != 3:
        raise MapError("marked vertices must be distinct")
    dist3 = bfs_distance(m, v3)
    if max_len is None:
        max_len = 2 * min(dist3[v1], dist3[v2])
    if max_len < 2:
        raise NotFoundWithinBound("bound below any circuit length")

    for target in range(2, max_len + 1):
        hit = _search_circuits(m, v1, v2, v3, dist3, target)
        if hit is not None:
            return target, hit
    raise NotFoundWithinBound(f"no separating loop of length <= {max_len}")


def _search_circuits(m, v1, v2, v3, dist3, target):
    path = []
    used = set()
    arcs = {}  # vertex -> list of slot lists

    def arc_ok(v, slots):
        for prev in arcs.get(v, []):
            if not set(prev).isdisjoint(slots):
                return False
        return True

    def place(v, slots):
        arcs.setdefault(v, []).append(slots)

    def unplace(v):
        arcs[v].pop()

    def extend(depth):
        head = m.head(path[-1])
        if depth == target:
            if head != v3:
                return None
            table, deg = _slot_tables(m, v3)
            slots = _arc_slots(table[m.opp[path[-1]]], table[path[0]], deg)
            if not arc_ok(v3, slots):
                return None
            try:
                cyc = SimpleCycle(m, list(path))
                cut = cut_along_cycle(m, cyc)
            except NotSimpleCycle:
                return None
            if cut.separates(v1, v2):
                return cyc
            return None
        if dist3[head] > target - depth:
            return None
        table, deg = _slot_tables(m, head)
        pos_in = table[m.opp[path[-1]]]
        for dnext in m.vertex_darts[head]:
            if dnext in used:
                continue
            slots = _arc_slots(pos_in, table[dnext], deg)
            if not arc_ok(head, slots):
                continue
            place(head, slots)
            used.add(dnext)
            path.append(dnext)
            got = extend(depth + 1)
            path.pop()
            used.discard(dnext)
            unplace(head)
            if got is not None:
                return got
        return None

    for d0 in m.vertex_darts[v3]:
        used.add(d0)
        path.append(d0)
        got = extend(1)
        path.pop()
        used.discard(d0)
        if got is not None:
            return got
    return None


# ----------------------------------------------------------------------
# Serialization
# ----------------------------------------------------------------------

def map_to_lines(m: CombinatorialMap):
    return [f"{d} {m.opp[d]} {m.nxt[d]} {m.vert[d]}" for d in range(len(m.opp))]


def map_from_lines(lines) -> CombinatorialMap:
    records = []
    for line in lines:
        line = line.strip()
        if not line:
            continue
        d, o, n, v = (int(x) for x in line.split())
        records.append((d, o, n, v))
    return build_map(records)
