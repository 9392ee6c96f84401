"""Geometric observables of triply-pointed quadrangulations.

Everything here exists twice: an *operational* value computed on the
closed quadrangulation (explicit successor chains, explicit loops, face
flood fills) and a *fast* value read off the tree or map decomposition.
The operational values are the ground truth; the fast values are the ones
the generating functions count, and the test suite asserts their
agreement wherever the paper's correspondences apply.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, fields

from .bijections import (
    Closure,
    OpenedMap,
    chain_darts,
    chain_vertices,
    close_labeled_map,
    miermont_forward,
    schaeffer_close,
)
from .maps import (
    CombinatorialMap,
    NotSimpleCycle,
    SimpleCycle,
    bfs_distance,
    brute_min_separating_loop,
    cut_along_cycle,
)
from .trees import BranchStats, MarkedVertexMissing, branch_statistics

__all__ = [
    "LoopObservables",
    "ConfluenceObservables",
    "TriangleObservables",
    "ObservableRecord",
    "InadmissibleTriple",
    "loop_observables",
    "confluence_delta",
    "triangle_observables",
    "observable_record",
    "write_records_csv",
    "RECORD_FIELDS",
]


class InadmissibleTriple(ValueError):
    pass


# corner choices for the dedicated chains; pinned by exhaustive agreement
# of operational common-part lengths with the tree statistics
GEO_V1_CORNER_AFTER = True    # chain at v1 starts just after the branch ribbon
GEO_V2_CORNER_AFTER = False   # chain at v2 starts just before the branch ribbon
LOOP_LEFT_AT_INCOMING = True  # left chain corner adjacent to the incoming edge
LOOP_RIGHT_AT_INCOMING = False


def _tree_dart(tree, v: int, w: int) -> int:
    """Dart v -> w in map_from_tree's numbering."""
    if tree.parent[w] == v:
        return 2 * (w - 1)
    if tree.parent[v] == w:
        return 2 * (v - 1) + 1
    raise ValueError("not a tree edge")


def _corner_before(m: CombinatorialMap, d: int) -> int:
    """The corner just before ribbon d around its origin: corner(d) itself."""
    return d


def _corner_after(m: CombinatorialMap, d: int) -> int:
    return m.nxt[d]


def _common_suffix(pa, pb) -> int:
    """Shared trailing steps of two chains toward a common endpoint.

    Chains are compared as edge sequences: passing the same vertex through
    different corners continues along distinct (parallel) arches and is
    not a merge, while sharing one arch forces identical continuations.
    """
    k = 0
    while k < len(pa) and k < len(pb) and pa[-1 - k] == pb[-1 - k]:
        k += 1
    return k


# ----------------------------------------------------------------------
# Confluence of the two leftmost geodesics (tree route)
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class ConfluenceObservables:
    delta: int            # operational common-part length
    sign: int             # sign of u1 - u2 (merge side)
    u1: int
    u2: int
    path1: tuple
    path2: tuple


def confluence_delta(wlt, v1: int, v2: int, closure: Closure | None = None,
                     stats: BranchStats | None = None) -> ConfluenceObservables:
    """Common part of the leftmost geodesics from v1 and v2 to the origin."""
    st = stats or branch_statistics(wlt, v1, v2)
    cl = closure or schaeffer_close(wlt)
    tm = cl.base
    d1 = _tree_dart(wlt.tree, v1, st.branch[1])
    d2 = _tree_dart(wlt.tree, v2, st.branch[-2])
    c1 = _corner_after(tm, d1) if GEO_V1_CORNER_AFTER else _corner_before(tm, d1)
    c2 = _corner_after(tm, d2) if GEO_V2_CORNER_AFTER else _corner_before(tm, d2)
    p1 = chain_vertices(cl, c1)
    p2 = chain_vertices(cl, c2)
    delta = _common_suffix(chain_darts(cl, c1), chain_darts(cl, c2))
    return ConfluenceObservables(
        delta=delta,
        sign=(st.u1 > st.u2) - (st.u1 < st.u2),
        u1=st.u1,
        u2=st.u2,
        path1=tuple(p1),
        path2=tuple(p2),
    )


# ----------------------------------------------------------------------
# Canonical minimal separating loop (tree route)
# ----------------------------------------------------------------------

def _loop_witness(q, dL, dR, v1, v2):
    """An embedded length-2u circuit realizing the two-chain loop.

    Generically the concatenation of chain L with the reversed lanes of
    chain R embeds.  When the chains merge in a degenerate way (a marked
    vertex sitting on the branch minimum), the loop's image is a doubled
    geodesic and the embedded realization is the tight wrap around one
    chain instead.
    """
    candidates = [tuple(dL) + tuple(q.opp[d] for d in reversed(dR))]
    if dL != dR:
        candidates.append(tuple(dL) + tuple(q.opp[d] for d in reversed(dL)))
        candidates.append(tuple(dR) + tuple(q.opp[d] for d in reversed(dR)))
    best = None
    for darts in candidates:
        try:
            cyc = SimpleCycle(q, darts)
            res = cut_along_cycle(q, cyc)
        except NotSimpleCycle:
            continue
        if res.separates(v1, v2):
            return darts, res
        if best is None:
            best = (darts, res)
    if best is not None:
        return best
    return candidates[0], None

@dataclass(frozen=True)
class LoopObservables:
    l123: int
    delta_loop: int       # operational common-part length
    l_open: int           # operational open-part length
    ub1: int
    ub2: int
    witness: tuple        # darts of the explicit minimal loop
    common_side_is_v1: bool | None
    eta_v1: float         # face fraction of the v1 domain
    n_v1: int             # faces on the v1 side
    separates: bool


def loop_observables(wlt, v1: int, v2: int, closure: Closure | None = None,
                     stats: BranchStats | None = None,
                     cut=True) -> LoopObservables:
    """The explicit minimal separating loop through the first branch
    minimum: two successor chains, one from each side of the branch."""
    st = stats or branch_statistics(wlt, v1, v2)
    cl = closure or schaeffer_close(wlt)
    tm = cl.base
    tree = wlt.tree
    j = st.j_star
    v = st.branch[j]
    if j == 0:
        d_next = _tree_dart(tree, v, st.branch[1])
        cL = _corner_after(tm, d_next)
        cR = _corner_before(tm, d_next)
    elif j == len(st.branch) - 1:
        d_prev = _tree_dart(tree, v, st.branch[j - 1])
        cL = _corner_before(tm, d_prev)
        cR = _corner_after(tm, d_prev)
    else:
        d_prev = _tree_dart(tree, v, st.branch[j - 1])
        d_next = _tree_dart(tree, v, st.branch[j + 1])
        cL = _corner_before(tm, d_prev) if LOOP_LEFT_AT_INCOMING else _corner_after(tm, d_next)
        cR = _corner_after(tm, d_prev) if LOOP_RIGHT_AT_INCOMING else _corner_before(tm, d_next)
    dL, dR = chain_darts(cl, cL), chain_darts(cl, cR)
    delta_op = _common_suffix(dL, dR)
    l123 = 2 * st.u

    common_side = None
    eta_v1 = float("nan")
    n_v1 = -1
    separates = False
    witness, cut_res = _loop_witness(cl.quad, dL, dR, v1, v2)
    if cut:
        if cut_res is None:
            raise NotSimpleCycle("no embeddable minimal loop witness")
        separates = cut_res.separates(v1, v2)
        side_v1 = cut_res.vertex_side[v1]
        n_v1 = sum(1 for s in cut_res.face_side.values() if s == side_v1)
        eta_v1 = n_v1 / cl.quad.nf
        if delta_op > 0:
            merge = cl.quad.vert[dL[len(dL) - delta_op]]
            common_side = cut_res.vertex_side[merge] == side_v1
    return LoopObservables(
        l123=l123,
        delta_loop=delta_op,
        l_open=l123 - 2 * delta_op,
        ub1=st.ub1,
        ub2=st.ub2,
        witness=witness,
        common_side_is_v1=common_side,
        eta_v1=eta_v1,
        n_v1=n_v1,
        separates=separates,
    )


def loop_edge_split(wlt, v1: int, v2: int, stats: BranchStats | None = None):
    """Tree-edge (= quadrangulation-face) count of the v1 domain of the
    canonical minimal loop, read off the tree decomposition.

    The v1 domain consists of the branch segment from v1 to the first
    minimum, everything attached to its interior, and the left arc of the
    fan at the first minimum (the side the left chain starts on).
    """
    st = stats or branch_statistics(wlt, v1, v2)
    tree = wlt.tree
    j = st.j_star
    path = st.branch
    inside = set(path[: j + 1])
    count = j  # branch edges v1 .. j*

    size = tree.subtree_sizes()
    total = tree.n

    def comp_size(v, w):
        """Edges of the component containing w in tree - v, plus the edge."""
        if tree.parent[w] == v:
            return size[w]
        return total + 1 - size[v]

    for k in range(0, j):
        w = path[k]
        prev = path[k - 1] if k > 0 else None
        nxt = path[k + 1]
        for x in tree.rotation(w):
            if x == prev or x == nxt:
                continue
            count += comp_size(w, x)
    # fan at the first minimum: left arc only
    w = path[j]
    if 0 < j < len(path) - 1:
        rot = tree.rotation(w)
        prev, nxt = path[j - 1], path[j + 1]
        i_prev, i_nxt = rot.index(prev), rot.index(nxt)
        k = (i_nxt + 1) % len(rot)
        while k != i_prev:
            count += comp_size(w, rot[k])
            k = (k + 1) % len(rot)
    elif j == len(path) - 1 and j > 0:
        rot = tree.rotation(w)
        i_prev = rot.index(path[j - 1])
        for off in range(1, len(rot)):
            count += comp_size(w, rot[(i_prev + off) % len(rot)])
    return count


# ----------------------------------------------------------------------
# Triangle observables (three-source route)
# ----------------------------------------------------------------------

# conventions of the six-minima extraction; pinned by exact Delta^6 tally
# matching (see test_tallies)
FRONTIER_FROM_POSITIVE_JUNCTION = True  # first 0 measured from J+ (ccw f1,f2,f3)
MARK_PRIME_TAKES_OTHER_FACE = True      # at a first-0 mark on frontier (i,j),
                                        # the prime piece owns the face-j arc
LAST0_STAR_TAKES_OTHER_FACE = True      # same question at a last-0 mark


@dataclass(frozen=True)
class TriangleObservables:
    d12: int
    d23: int
    d31: int
    sp: int
    spp: int
    tp: int
    tpp: int
    up: int
    upp: int
    delta1: int
    delta2: int
    delta3: int
    dp12: int
    dp23: int
    dp31: int
    arrangement: str
    op_delta1: int
    op_delta2: int
    op_delta3: int
    n_prime: int          # map edges in the prime domain
    eta_prime: float
    degenerate: str


_ARRANGEMENT = {
    (1, 1, 1): "a",
    (1, 1, -1): "b",
    (1, -1, 1): "c",
    (-1, 1, 1): "d",
    (-1, -1, 1): "e",
    (-1, 1, -1): "f",
    (1, -1, -1): "g",
    (-1, -1, -1): "h",
}


def _sign(x):
    return (x > 0) - (x < 0)


def arrangement_tag(sp, spp, tp, tpp, up, upp) -> str:
    signs = (_sign(sp - spp), _sign(tp - tpp), _sign(up - upp))
    if 0 in signs:
        return "tie"
    return _ARRANGEMENT[signs]


class _Skeleton:
    """Theta-graph skeleton of the three-source map with section bookkeeping."""

    def __init__(self, opened: OpenedMap):
        m = opened.map
        self.m = m
        self.labels = opened.labels
        face_of_source = {src: f for f, src in enumerate(opened.face_source)}
        self.face = [face_of_source[i] for i in range(3)]  # face index of v_i

        skel_darts = [d for d in range(len(m.opp)) if m.face_of[d] != m.face_of[m.opp[d]]]
        self.skel_edges = {min(d, m.opp[d]) for d in skel_darts}
        incident_faces = {}
        for d in skel_darts:
            incident_faces.setdefault(m.vert[d], set()).update(
                (m.face_of[d], m.face_of[m.opp[d]])
            )
        junctions = sorted(v for v, fs in incident_faces.items() if len(fs) == 3)
        if len(junctions) != 2:
            raise InadmissibleTriple(f"expected 2 junctions, found {len(junctions)}")
        # positive junction: faces of v1, v2, v3 counterclockwise around it
        self.j_pos, self.j_neg = self._orient_junctions(junctions)
        self.paths = {}
        for (a, b) in ((0, 1), (1, 2), (2, 0)):
            self.paths[(a, b)] = self._frontier_path(self.face[a], self.face[b])

    def _orient_junctions(self, junctions):
        f1, f2, f3 = self.face
        m = self.m
        tagged = []
        for j in junctions:
            seq = [m.face_of[d] for d in m.vertex_darts[j]]
            # distinct faces in ccw order of first appearance from f1
            order = []
            for f in seq + seq:
                if f in (f1, f2, f3) and (not order or order[-1] != f):
                    if f not in order:
                        order.append(f)
                    elif len(order) == 3:
                        break
            i1 = order.index(f1)
            ccw = order[i1:] + order[:i1]
            tagged.append((j, ccw == [f1, f2, f3]))
        pos = [j for j, p in tagged if p]
        neg = [j for j, p in tagged if not p]
        if len(pos) != 1 or len(neg) != 1:
            raise InadmissibleTriple("junction orientations are not opposite")
        return pos[0], neg[0]

    def _frontier_path(self, fa, fb):
        m = self.m
        edges = [
            e for e in self.skel_edges
            if {m.face_of[e], m.face_of[m.opp[e]]} == {fa, fb}
        ]
        start = self.j_pos if FRONTIER_FROM_POSITIVE_JUNCTION else self.j_neg
        goal = self.j_neg if FRONTIER_FROM_POSITIVE_JUNCTION else self.j_pos
        if not edges:
            if start != goal:
                raise InadmissibleTriple("empty frontier between distinct junctions")
            return (start,)
        adj = {}
        for e in edges:
            a, b = m.vert[e], m.head(e)
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
        path = [start]
        prev = None
        while path[-1] != goal or len(path) == 1:
            cands = [w for w in adj.get(path[-1], []) if w != prev]
            if len(path) == 1:
                cands = adj.get(path[-1], [])
            if not cands:
                raise InadmissibleTriple("frontier is not a path")
            prev = path[-1]
            path.append(cands[0])
            if len(path) > len(edges) + 1:
                raise InadmissibleTriple("frontier walk does not close")
        if len(path) != len(edges) + 1:
            raise InadmissibleTriple("frontier is not a simple path")
        return tuple(path)


def _component_fans(opened: OpenedMap):
    """For every skeleton vertex and face: minima of the label over each
    hanging tree anchored there, plus the edge count of the hanging trees."""
    m = opened.map
    labels = opened.labels
    skel_vertices = set()
    skel_edges = set()
    for d in range(len(m.opp)):
        if m.face_of[d] != m.face_of[m.opp[d]]:
            skel_vertices.add(m.vert[d])
            skel_edges.add(min(d, m.opp[d]))
    comp = {}
    fan_min = {}
    fan_edges = {}
    for v0 in range(m.nv):
        if v0 in skel_vertices or v0 in comp:
            continue
        stack = [v0]
        comp[v0] = v0
        verts = [v0]
        while stack:
            v = stack.pop()
            for d in m.vertex_darts[v]:
                w = m.head(d)
                if w in skel_vertices or w in comp:
                    continue
                comp[w] = v0
                verts.append(w)
                stack.append(w)
        anchors = set()
        edges = 0
        mn = min(labels[v] for v in verts)
        for v in verts:
            for d in m.vertex_darts[v]:
                w = m.head(d)
                if w in skel_vertices:
                    anchors.add((w, m.face_of[d]))
                    edges += 1
        edges = edges + len(verts) - 1  # anchor edges + interior tree edges
        if len(anchors) != 1:
            raise InadmissibleTriple("hanging tree with multiple anchors")
        anchor = anchors.pop()
        fan_min.setdefault(anchor, []).append(mn)
        fan_edges[anchor] = fan_edges.get(anchor, 0) + edges
    return skel_vertices, skel_edges, fan_min, fan_edges


def triangle_observables(wlt, v1: int, v2: int, closure: Closure | None = None,
                         cut=True) -> TriangleObservables:
    """Six-length decomposition of the geodesic triangle, via the
    three-source bijection with the pairwise-distance delays."""
    cl = closure or schaeffer_close(wlt)
    q = cl.quad
    origin = cl.sources[0]
    dist1 = bfs_distance(q, v1)
    d12, d31 = dist1[v2], dist1[origin]
    d23 = wlt.labels[v2]
    s2 = d12 + d31 - d23
    t2 = d12 + d23 - d31
    u2 = d23 + d31 - d12
    if s2 <= 0 or t2 <= 0 or u2 <= 0 or s2 % 2:
        raise InadmissibleTriple(f"triple ({d12},{d23},{d31}) not strict/even")
    s, t, u = s2 // 2, t2 // 2, u2 // 2
    opened = miermont_forward(q, (v1, v2, origin), (-s, -t, -u))
    sk = _Skeleton(opened)
    m, labels = opened.map, opened.labels
    skel_vertices, skel_edges, fan_min, fan_edges = _component_fans(opened)

    # first and last label 0 along each frontier (from the chosen junction)
    marks = {}
    for key, path in sk.paths.items():
        zeros = [i for i, v in enumerate(path) if labels[v] == 0]
        if not zeros:
            raise InadmissibleTriple("frontier without a 0 label")
        marks[key] = (zeros[0], zeros[-1])

    prime = {0: [], 1: [], 2: []}    # fan minima per source index
    dbl = {0: [], 1: [], 2: []}
    prime_force = {0: False, 1: False, 2: False}
    dbl_force = {0: False, 1: False, 2: False}
    prime_edges = 0
    face_to_idx = {sk.face[i]: i for i in range(3)}

    def add_fans(v, face_idx, bucket, edges_too=False):
        nonlocal prime_edges
        mins = fan_min.get((v, sk.face[face_idx]), [])
        bucket[face_idx].extend(mins)
        if edges_too:
            prime_edges_add = fan_edges.get((v, sk.face[face_idx]), 0)
            prime_edges += prime_edges_add

    for (a, b), path in sk.paths.items():
        first, last = marks[(a, b)]
        mpos = len(path) - 1
        # sections: (0, first) prime branch, (first, last) middle,
        # (last, mpos) far-junction branch
        for i in range(1, first):
            v = path[i]
            for fidx in (a, b):
                add_fans(v, fidx, prime, edges_too=True)
                if labels[v] == 0:
                    prime_force[fidx] = True
            prime_edges += 0
        for i in range(first + 1, last):
            v = path[i]
            for fidx in (a, b):
                add_fans(v, fidx, dbl)
                if labels[v] == 0:
                    dbl_force[fidx] = True
        for i in range(last + 1, mpos):
            v = path[i]
            for fidx in (a, b):
                add_fans(v, fidx, dbl)
                if labels[v] == 0:
                    dbl_force[fidx] = True
        # prime-branch skeleton edges belong to the prime domain
        prime_edges += first

        # the first-0 mark: one face arc to the prime piece, the other to the
        # middle; a nontrivial owning piece is forced by the 0 host
        vfirst = path[first]
        prime_arc = b if MARK_PRIME_TAKES_OTHER_FACE else a
        middle_arc = a if MARK_PRIME_TAKES_OTHER_FACE else b
        if first > 0:  # prime branch nontrivial
            add_fans(vfirst, prime_arc, prime, edges_too=True)
            prime_force[prime_arc] = True
        else:
            add_fans(vfirst, prime_arc, dbl)
            if last > first:
                dbl_force[prime_arc] = True
        if last > first:  # middle nontrivial
            add_fans(vfirst, middle_arc, dbl)
            dbl_force[middle_arc] = True
        else:
            # middle trivial: the arc belongs to the far-junction branch
            add_fans(vfirst, middle_arc, dbl)
            if last < mpos:
                dbl_force[middle_arc] = True
        if last != first:
            vlast = path[last]
            star_arc = b if LAST0_STAR_TAKES_OTHER_FACE else a
            mid_arc = a if LAST0_STAR_TAKES_OTHER_FACE else b
            add_fans(vlast, star_arc, dbl)
            if last < mpos:
                dbl_force[star_arc] = True
            add_fans(vlast, mid_arc, dbl)
            dbl_force[mid_arc] = True

    # junction sectors: the positive junction's sector in face i goes to the
    # prime statistic of face i, the other junction's to the double-prime
    jp = sk.j_pos if FRONTIER_FROM_POSITIVE_JUNCTION else sk.j_neg
    jn = sk.j_neg if FRONTIER_FROM_POSITIVE_JUNCTION else sk.j_pos
    for i in range(3):
        add_fans(jp, i, prime, edges_too=True)
        if labels[jp] == 0:
            prime_force[i] = True
        add_fans(jn, i, dbl)
        if labels[jn] == 0:
            dbl_force[i] = True

    def stat(mins, forced):
        best = 1 if forced else 0
        for x in mins:
            best = max(best, 1 - x)
        return best

    sp, tp, up = (stat(prime[i], prime_force[i]) for i in range(3))
    spp, tpp, upp = (stat(dbl[i], dbl_force[i]) for i in range(3))

    delta1, delta2, delta3 = abs(sp - spp), abs(tp - tpp), abs(up - upp)
    dp12 = min(sp, spp) + min(tp, tpp)
    dp23 = min(tp, tpp) + min(up, upp)
    dp31 = min(up, upp) + min(sp, spp)

    op_d1, op_d2, op_d3, degenerate = _operational_triangle(
        opened, sk, marks, (v1, v2, origin)
    )
    arrangement = arrangement_tag(sp, spp, tp, tpp, up, upp)
    return TriangleObservables(
        d12=d12, d23=d23, d31=d31,
        sp=sp, spp=spp, tp=tp, tpp=tpp, up=up, upp=upp,
        delta1=delta1, delta2=delta2, delta3=delta3,
        dp12=dp12, dp23=dp23, dp31=dp31,
        arrangement=arrangement,
        op_delta1=op_d1, op_delta2=op_d2, op_delta3=op_d3,
        n_prime=prime_edges, eta_prime=prime_edges / max(m.ne, 1),
        degenerate=degenerate,
    )


def _operational_triangle(opened, sk, marks, sources_q):
    """Explicit geodesics by successor chains from the marked corners; the
    pairwise common suffixes at the three endpoints."""
    m = opened.map
    labels = opened.labels
    recl = opened.closure
    # corner of the mark vertex inside a given face: any corner works for
    # vertex-path purposes only if the chain choice is canonical; take the
    # corner whose dart lies in that face, adjacent to the mark's skeleton
    # edge toward the middle section (exists since the mark is on the path)
    def mark_corner(key, face_idx):
        path = sk.paths[key]
        first, _ = marks[key]
        v = path[first]
        face = sk.face[face_idx]
        cands = [d for d in m.vertex_darts[v] if m.face_of[d] == face]
        if not cands:
            return None
        return cands[0]

    paths = {}
    for key, end_faces in (((0, 1), (0, 1)), ((1, 2), (1, 2)), ((2, 0), (2, 0))):
        for fidx in end_faces:
            c = mark_corner(key, fidx)
            if c is None:
                return -1, -1, -1, "pinched"
            paths[(key, fidx)] = chain_darts(recl, c)

    d1 = _common_suffix(paths[((0, 1), 0)], paths[((2, 0), 0)])
    d2 = _common_suffix(paths[((1, 2), 1)], paths[((0, 1), 1)])
    d3 = _common_suffix(paths[((2, 0), 2)], paths[((1, 2), 2)])
    return d1, d2, d3, ""


# ----------------------------------------------------------------------
# Flat per-instance record
# ----------------------------------------------------------------------

RECORD_FIELDS = (
    "n", "d12", "d13", "d23", "l123", "delta", "delta_loop", "l_open",
    "common_side_v1", "ub1", "ub2", "u1", "u2",
    "delta1", "delta2", "delta3", "dp12", "dp23", "dp31",
    "arrangement", "eta_v1", "eta_prime",
)


@dataclass
class ObservableRecord:
    n: int
    d12: int
    d13: int
    d23: int
    l123: int
    delta: int
    delta_loop: int
    l_open: int
    common_side_v1: int
    ub1: int
    ub2: int
    u1: int
    u2: int
    delta1: int
    delta2: int
    delta3: int
    dp12: int
    dp23: int
    dp31: int
    arrangement: str
    eta_v1: float
    eta_prime: float

    def row(self):
        return [getattr(self, f) for f in RECORD_FIELDS]


def observable_record(wlt, v1, v2, with_triangle=True, cut=True) -> ObservableRecord:
    st = branch_statistics(wlt, v1, v2)
    cl = schaeffer_close(wlt)
    conf = confluence_delta(wlt, v1, v2, closure=cl, stats=st)
    loop = loop_observables(wlt, v1, v2, closure=cl, stats=st, cut=cut)
    tri = None
    if with_triangle:
        try:
            tri = triangle_observables(wlt, v1, v2, closure=cl, cut=cut)
        except InadmissibleTriple:
            tri = None
    return ObservableRecord(
        n=wlt.n,
        d12=tri.d12 if tri else -1,
        d13=st.d13,
        d23=st.d23,
        l123=st.l123,
        delta=conf.delta,
        delta_loop=loop.delta_loop,
        l_open=loop.l_open,
        common_side_v1=(
            -1 if loop.common_side_is_v1 is None else int(loop.common_side_is_v1)
        ),
        ub1=st.ub1,
        ub2=st.ub2,
        u1=st.u1,
        u2=st.u2,
        delta1=tri.delta1 if tri else -1,
        delta2=tri.delta2 if tri else -1,
        delta3=tri.delta3 if tri else -1,
        dp12=tri.dp12 if tri else -1,
        dp23=tri.dp23 if tri else -1,
        dp31=tri.dp31 if tri else -1,
        arrangement=tri.arrangement if tri else "degenerate",
        eta_v1=loop.eta_v1,
        eta_prime=tri.eta_prime if tri else float("nan"),
    )


def write_records_csv(path, records):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(RECORD_FIELDS)
        for r in records:
            w.writerow(r.row())
