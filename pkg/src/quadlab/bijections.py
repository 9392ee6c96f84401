"""Closure and opening between well-labeled maps and quadrangulations.

One closure engine serves every source count: each face of a well-labeled
map receives an added source vertex, every corner is joined by an arch to
its successor (the next corner of the same face, in face-orbit order,
whose label is one less; minimal corners point to the source), and the
arches are the edges of a quadrangulation.  The single-face case on a tree
is the classical pointed construction; three faces with loop delays give
the two-cycles-plus-bridge geometry.

The opening applies the facewise local rules (one new edge per
quadrangulation face, selected from the label pattern around the face)
and is validated by re-closing and matching the original map dart for
dart.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .maps import CombinatorialMap, MapError, bfs_distance, map_from_tree

__all__ = [
    "Closure",
    "OpenedMap",
    "InadmissibleDelays",
    "InvalidLabels",
    "NotRawForm",
    "close_labeled_map",
    "open_quadrangulation",
    "schaeffer_close",
    "schaeffer_open",
    "miermont_forward",
    "miermont_close",
    "successor_chain",
    "chain_vertices",
    "dart_isomorphism",
    "loop_delay_structure",
    "LoopDelayStructure",
]


# closure wiring conventions; pinned by validity of the closure (face count
# and degrees, label-distance agreement) over exhaustive small enumerations:
# within a corner the incoming arches nest nearest-source-innermost with the
# outgoing arch after them, and a source sees its face orbit reversed
CORNER_INS_NEAREST_FIRST = True
CORNER_OUT_LAST = True
SOURCE_ASCENDING = False

# in a simple face (labels l, l+1, l+2, l+1) the drawn edge joins the l+2
# corner to the l+1 corner this many face-orbit steps away; pinned by the
# re-closure round trip over exhaustive small enumerations
SIMPLE_RULE_STEP = -1


class InadmissibleDelays(MapError):
    pass


class InvalidLabels(MapError):
    pass


class NotRawForm(MapError):
    pass


@dataclass
class Closure:
    """Result of closing a well-labeled map into a quadrangulation."""

    quad: CombinatorialMap
    base: CombinatorialMap          # the map that was closed
    base_labels: tuple              # labels on base vertices
    sources: tuple                  # quad vertex id of the source per base face
    taus: tuple                     # label of each source
    labels: tuple                   # labels on quad vertices (base + sources)
    succ: dict                      # base corner (dart) -> corner or ("src", face)
    arch_out: dict                  # base corner -> quad dart leaving that corner


def close_labeled_map(m: CombinatorialMap, labels, taus=None) -> Closure:
    """Close a well-labeled map; one added source per face.

    ``taus`` may prescribe source labels; they must equal the facewise
    minimum minus one, which is also the default.
    """
    for d in range(len(m.opp)):
        if abs(labels[m.vert[d]] - labels[m.head(d)]) > 1:
            raise InvalidLabels("adjacent labels differ by more than 1")

    face_min = [min(labels[m.vert[d]] for d in f) for f in m.faces]
    if taus is None:
        taus = tuple(mn - 1 for mn in face_min)
    else:
        taus = tuple(taus)
        if list(taus) != [mn - 1 for mn in face_min]:
            raise InvalidLabels("source labels must be facewise minimum - 1")

    nd_m = len(m.opp)
    succ = {}
    arch_src = [None] * nd_m  # arch index whose out corner is this dart
    arches = []  # (corner, target) with target a corner or ("src", face)
    pos_in_face = {}
    for fi, orbit in enumerate(m.faces):
        L = len(orbit)
        labs = [labels[m.vert[d]] for d in orbit]
        for i, d in enumerate(orbit):
            pos_in_face[d] = i
            if labs[i] == taus[fi] + 1:
                target = ("src", fi)
            else:
                target = None
                for step in range(1, L):
                    j = (i + step) % L
                    if labs[j] == labs[i] - 1:
                        target = orbit[j]
                        break
                if target is None:
                    raise InvalidLabels("corner without successor")
            succ[d] = target
            arch_src[d] = len(arches)
            arches.append((d, target))

    nv_m = m.nv
    n_src = m.nf
    # quad darts: arch k -> out dart 2k (at the corner), in dart 2k+1 (at target)
    q_opp = []
    q_vert = []
    for k, (corner, target) in enumerate(arches):
        q_opp.extend([2 * k + 1, 2 * k])
        tv = nv_m + target[1] if isinstance(target, tuple) else m.vert[target]
        q_vert.extend([m.vert[corner], tv])

    # incoming arches per corner, nearest source first along the face orbit
    ins = {d: [] for d in range(nd_m)}
    src_ins = [[] for _ in range(n_src)]
    for k, (corner, target) in enumerate(arches):
        if isinstance(target, tuple):
            src_ins[target[1]].append((pos_in_face[corner], k))
        else:
            fl = len(m.faces[m.face_of[target]])
            back = (pos_in_face[target] - pos_in_face[corner]) % fl
            ins[target].append((back, k))

    q_nxt = [0] * len(q_opp)

    def wire(fan):
        for i, d in enumerate(fan):
            q_nxt[d] = fan[(i + 1) % len(fan)]

    for v in range(nv_m):
        fan = []
        for corner in m.vertex_darts[v]:
            sub = [2 * k + 1 for _, k in sorted(ins[corner], reverse=not CORNER_INS_NEAREST_FIRST)]
            if CORNER_OUT_LAST:
                fan.extend(sub + [2 * arch_src[corner]])
            else:
                fan.extend([2 * arch_src[corner]] + sub)
        wire(fan)
    for fi in range(n_src):
        fan = [2 * k + 1 for _, k in sorted(src_ins[fi], reverse=not SOURCE_ASCENDING)]
        wire(fan)

    quad = CombinatorialMap(q_opp, q_nxt, q_vert)
    q_labels = tuple(labels) + taus
    arch_out = {corner: 2 * arch_src[corner] for corner in range(nd_m)}
    return Closure(
        quad=quad,
        base=m,
        base_labels=tuple(labels),
        sources=tuple(nv_m + f for f in range(n_src)),
        taus=taus,
        labels=q_labels,
        succ=succ,
        arch_out=arch_out,
    )


def successor_chain(closure: Closure, corner: int):
    """Corners visited by iterated successors, ending at a source marker."""
    out = [corner]
    while True:
        nxt = closure.succ[out[-1]]
        if isinstance(nxt, tuple):
            out.append(nxt)
            return out
        out.append(nxt)


def chain_vertices(closure: Closure, corner: int):
    """Vertex path (in the quadrangulation) of a successor chain."""
    path = []
    for c in successor_chain(closure, corner):
        if isinstance(c, tuple):
            path.append(closure.sources[c[1]])
        else:
            path.append(closure.base.vert[c])
    return path


def chain_darts(closure: Closure, corner: int):
    """The quadrangulation darts traveled by a successor chain."""
    return [
        closure.arch_out[c]
        for c in successor_chain(closure, corner)
        if not isinstance(c, tuple)
    ]


# ----------------------------------------------------------------------
# Opening: facewise local rules
# ----------------------------------------------------------------------

@dataclass
class OpenedMap:
    """Result of opening a multiply-pointed quadrangulation."""

    map: CombinatorialMap           # the well-labeled map
    labels: tuple                   # labels on map vertices
    to_quad_vertex: tuple           # map vertex -> quad vertex id
    from_quad_vertex: dict          # quad vertex -> map vertex (non-sources)
    face_source: tuple              # map face index -> source index
    sources: tuple
    delays: tuple
    quad: CombinatorialMap
    closure: Closure                # re-closure used for validation
    end_corner: dict                # map dart -> quad corner (dart) hosting it


def check_delays(dists, sources, delays):
    p = len(sources)
    for i in range(p):
        for j in range(i + 1, p):
            dij = dists[i][sources[j]]
            if abs(delays[i] - delays[j]) >= dij:
                raise InadmissibleDelays(
                    f"|tau_{i}-tau_{j}| = {abs(delays[i]-delays[j])} !< d = {dij}"
                )
            if (delays[i] - delays[j] + dij) % 2:
                raise InadmissibleDelays("delay parity violated")


def open_quadrangulation(q: CombinatorialMap, sources, delays) -> OpenedMap:
    """Inverse of the closure: one new edge per quadrangulation face."""
    sources = tuple(sources)
    delays = tuple(delays)
    if len(set(sources)) != len(sources):
        raise MapError("sources must be distinct")
    dists = [bfs_distance(q, s) for s in sources]
    check_delays(dists, sources, delays)
    labels_q = [
        min(dists[i][v] + delays[i] for i in range(len(sources)))
        for v in range(q.nv)
    ]

    # corner id == quad dart id; each face contributes one map edge
    pos = {}
    for orbit in q.faces:
        for i, d in enumerate(orbit):
            pos[d] = i
    m_end_corner = []  # per map dart, the quad corner it sits in
    for orbit in q.faces:
        labs = [labels_q[q.vert[d]] for d in orbit]
        mn = min(labs)
        diffs = [l - mn for l in labs]
        if sorted(diffs) == [0, 1, 1, 2]:
            i2 = diffs.index(2)
            a = orbit[i2]
            b = orbit[(i2 + SIMPLE_RULE_STEP) % 4]
        elif sorted(diffs) == [0, 0, 1, 1]:
            ones = [i for i, x in enumerate(diffs) if x == 1]
            a, b = orbit[ones[0]], orbit[ones[1]]
        else:
            raise InvalidLabels(f"face label pattern {labs} is not of a quadrangulation")
        m_end_corner.extend([a, b])

    src_set = set(sources)
    for c in m_end_corner:
        if q.vert[c] in src_set:
            raise InvalidLabels("local rule attached an edge to a source")

    # map vertices = non-source quad vertices hosting at least one end
    hosting = sorted({q.vert[c] for c in m_end_corner})
    expected = [v for v in range(q.nv) if v not in src_set]
    if hosting != expected:
        raise InvalidLabels("opened map does not span the non-source vertices")
    mv_of = {v: i for i, v in enumerate(hosting)}

    end_at_corner = {c: k for k, c in enumerate(m_end_corner)}
    m_vert = [mv_of[q.vert[c]] for c in m_end_corner]
    m_opp = [k + 1 if k % 2 == 0 else k - 1 for k in range(len(m_end_corner))]
    m_nxt = [0] * len(m_end_corner)
    for v in expected:
        fan = [
            end_at_corner[c]
            for c in q.vertex_darts[v]
            if c in end_at_corner
        ]
        for i, d in enumerate(fan):
            m_nxt[d] = fan[(i + 1) % len(fan)]

    m = CombinatorialMap(m_opp, m_nxt, m_vert)
    m_labels = tuple(labels_q[v] for v in hosting)
    if m.nf != len(sources):
        raise InvalidLabels(f"opened map has {m.nf} faces, expected {len(sources)}")

    closure = close_labeled_map(m, m_labels)
    face_source, iso = _match_reclosure(q, sources, closure, hosting)
    if iso is None:
        raise InvalidLabels("re-closure does not reproduce the quadrangulation")

    return OpenedMap(
        map=m,
        labels=m_labels,
        to_quad_vertex=tuple(hosting),
        from_quad_vertex=mv_of,
        face_source=face_source,
        sources=sources,
        delays=delays,
        quad=q,
        closure=closure,
        end_corner={k: c for k, c in enumerate(m_end_corner)},
    )


def _match_reclosure(q, sources, closure, hosting):
    """Find the face->source matching under which the re-closure is dart
    isomorphic to the original quadrangulation (vertices held fixed)."""
    import itertools

    p = len(sources)
    for perm in itertools.permutations(range(p)):
        vmap = list(hosting) + [sources[perm[f]] for f in range(p)]
        iso = dart_isomorphism(closure.quad, q, vmap)
        if iso is not None:
            return tuple(perm), iso
    return None, None


def dart_isomorphism(m1: CombinatorialMap, m2: CombinatorialMap, vmap):
    """A dart bijection with nxt/opp equivariance sending vertex v of m1 to
    vmap[v] of m2, or None.  The image of dart 0 forces everything."""
    nd = len(m1.opp)
    if nd != len(m2.opp):
        return None
    v0 = vmap[m1.vert[0]]
    for cand in m2.vertex_darts[v0]:
        f = [-1] * nd
        f[0] = cand
        stack = [0]
        ok = True
        while stack and ok:
            d = stack.pop()
            for nd1, nd2 in ((m1.nxt[d], m2.nxt[f[d]]), (m1.opp[d], m2.opp[f[d]])):
                if f[nd1] == -1:
                    if vmap[m1.vert[nd1]] != m2.vert[nd2]:
                        ok = False
                        break
                    f[nd1] = nd2
                    stack.append(nd1)
                elif f[nd1] != nd2:
                    ok = False
                    break
        if ok and -1 not in f and len(set(f)) == nd:
            return f
    return None


# ----------------------------------------------------------------------
# Named spec surfaces
# ----------------------------------------------------------------------

def schaeffer_close(wlt) -> Closure:
    """Close a raw well-labeled tree into a pointed quadrangulation."""
    if min(wlt.labels) != 1:
        raise NotRawForm("tree must be in raw form (minimal label 1)")
    return close_labeled_map(map_from_tree(wlt.tree), wlt.labels)


def schaeffer_open(q: CombinatorialMap, origin: int) -> OpenedMap:
    return open_quadrangulation(q, (origin,), (0,))


def miermont_forward(q: CombinatorialMap, sources, delays) -> OpenedMap:
    return open_quadrangulation(q, sources, delays)


def miermont_close(m: CombinatorialMap, labels, taus=None) -> Closure:
    return close_labeled_map(m, labels, taus)


# ----------------------------------------------------------------------
# Structure of the loop-delay Miermont map
# ----------------------------------------------------------------------

@dataclass
class LoopDelayStructure:
    """Skeleton of the three-face map for delays (-s, -t, -u), s,t >= 1."""

    c1_vertices: tuple
    c2_vertices: tuple
    bridge_vertices: tuple
    c1_edges: tuple
    c2_edges: tuple
    bridge_edges: tuple
    minima: dict


def _frontier_edges(m: CombinatorialMap, fa: int, fb: int):
    out = []
    for d in range(0, len(m.opp), 1):
        if d > m.opp[d]:
            continue
        sides = {m.face_of[d], m.face_of[m.opp[d]]}
        if sides == {fa, fb}:
            out.append(d)
    return out


def _edge_cycle_vertices(m: CombinatorialMap, edges):
    """Vertices of a set of edges that should form a single closed cycle."""
    adj = {}
    for d in edges:
        a, b = m.vert[d], m.head(d)
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    if not adj:
        return None
    if any(len(x) != 2 for x in adj.values()):
        return None
    start = min(adj)
    cyc = [start]
    prev = None
    while True:
        nxts = [w for w in adj[cyc[-1]] if w != prev]
        nxt = nxts[0] if nxts else prev
        if nxt == start:
            break
        prev = cyc[-1]
        cyc.append(nxt)
        if len(cyc) > 2 * len(edges):
            return None
    if len(cyc) != len(edges):
        return None
    return tuple(cyc)


def loop_delay_structure(opened: OpenedMap) -> LoopDelayStructure:
    """Verify and extract the two-cycles-plus-bridge skeleton with its six
    label minima for the loop delays (-s, -t, -u) on sources (v1, v2, v3).
    """
    m = opened.map
    labels = opened.labels
    s, t, u = (-d for d in opened.delays)
    if s < 1 or t < 1:
        raise InadmissibleDelays("skeleton analysis requires s, t >= 1")
    face_of_source = {src: f for f, src in enumerate(opened.face_source)}
    f1, f2, f3 = (face_of_source[i] for i in range(3))

    if _frontier_edges(m, f1, f2):
        raise InvalidLabels("faces f1 and f2 must not be adjacent")
    c1_edges = _frontier_edges(m, f1, f3)
    c2_edges = _frontier_edges(m, f2, f3)
    c1 = _edge_cycle_vertices(m, c1_edges)
    c2 = _edge_cycle_vertices(m, c2_edges)
    if c1 is None or c2 is None:
        raise InvalidLabels("frontier is not a single cycle")

    # bridge: path from c1 to c2 avoiding the cycles' edges
    cyc_edges = set(c1_edges) | set(c2_edges)
    in_c1, in_c2 = set(c1), set(c2)
    parent = {v: None for v in in_c1}
    queue = deque(in_c1)
    meet = None
    if in_c1 & in_c2:
        meet = min(in_c1 & in_c2)
        parent[meet] = None
    while queue and meet is None:
        v = queue.popleft()
        for d in m.vertex_darts[v]:
            if min(d, m.opp[d]) in cyc_edges:
                continue
            w = m.head(d)
            if w in parent:
                continue
            parent[w] = (v, min(d, m.opp[d]))
            if w in in_c2:
                meet = w
                break
            queue.append(w)
    if meet is None:
        raise InvalidLabels("no bridge connects the two cycles")
    bridge_vertices = [meet]
    bridge_edges = []
    v = meet
    while parent[v] is not None:
        v, e = parent[v]
        bridge_vertices.append(v)
        bridge_edges.append(e)
    for e in bridge_edges:
        if not (m.face_of[e] == f3 and m.face_of[m.opp[e]] == f3):
            raise InvalidLabels("bridge edge not interior to f3")

    def vmin(vs):
        return min(labels[v] for v in vs)

    incident = [sorted({m.vert[d] for d in m.faces[f]}) for f in range(m.nf)]
    minima = {
        "f1": vmin(incident[f1]),
        "f2": vmin(incident[f2]),
        "f3": vmin(incident[f3]),
        "c1": vmin(c1),
        "c2": vmin(c2),
        "b": vmin(bridge_vertices),
    }
    expect = {"f1": 1 - s, "f2": 1 - t, "f3": 1 - u, "c1": 0, "c2": 0, "b": 0}
    if minima != expect:
        raise InvalidLabels(f"six-minima check failed: {minima} != {expect}")
    return LoopDelayStructure(
        c1_vertices=c1,
        c2_vertices=c2,
        bridge_vertices=tuple(bridge_vertices),
        c1_edges=tuple(c1_edges),
        c2_edges=tuple(c2_edges),
        bridge_edges=tuple(bridge_edges),
        minima=minima,
    )
