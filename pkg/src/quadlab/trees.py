"""Plane trees with integer labels: enumeration, uniform sampling, branch
statistics.

Trees are rooted plane trees on preorder-numbered vertices (root 0).  A
*well-labeled* tree carries integer vertex labels differing by at most one
across every edge, normalized so the minimal label is 1 ("raw" form).

Marked pairs (v1, v2) rigidify the embedding, so unrooted pair-marked
trees are enumerated as canonical classes: a class representative is the
corner re-rooting with lexicographically minimal encoding, and marked
pairs are reduced modulo the label-preserving rotation group.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

__all__ = [
    "PlaneTree",
    "WellLabeledTree",
    "BranchStats",
    "BoundExceeded",
    "MarkedVertexMissing",
    "all_plane_trees",
    "enumerate_well_labeled_trees",
    "enumerate_marked_classes",
    "sample_well_labeled_tree",
    "branch_statistics",
    "catalan",
    "tree_to_line",
    "tree_from_line",
]

ENUMERATION_BOUND = 8


class BoundExceeded(ValueError):
    pass


class MarkedVertexMissing(KeyError):
    pass


def catalan(n: int) -> int:
    c = Fraction(1)
    for k in range(n):
        c = c * 2 * (2 * k + 1) / (k + 2)
    return int(c)


class PlaneTree:
    """Rooted plane tree; vertices are preorder ids, root is 0."""

    __slots__ = ("n", "parent", "children")

    def __init__(self, parent, children):
        self.parent = tuple(parent)
        self.children = tuple(tuple(c) for c in children)
        self.n = len(self.parent) - 1

    @staticmethod
    def from_dyck(steps) -> "PlaneTree":
        parent = [-1]
        children = [[]]
        stack = [0]
        for s in steps:
            if s > 0:
                v = len(parent)
                parent.append(stack[-1])
                children.append([])
                children[stack[-1]].append(v)
                stack.append(v)
            else:
                stack.pop()
        if len(stack) != 1:
            raise ValueError("unbalanced step sequence")
        return PlaneTree(parent, children)

    def to_dyck(self):
        steps = []

        def walk(v):
            for c in self.children[v]:
                steps.append(1)
                walk(c)
                steps.append(-1)

        walk(0)
        return tuple(steps)

    def rotation(self, v: int):
        """Neighbors of v in planar rotation order (parent first for non-root)."""
        if v == 0:
            return list(self.children[0])
        return [self.parent[v]] + list(self.children[v])

    def contour(self):
        """Corners in contour order as (vertex, gap_index) pairs.

        gap_index k means the corner between rotation(v)[k-1] and
        rotation(v)[k] (cyclically); there are deg(v) corners per vertex
        and 2n in total.
        """
        out = []

        def walk(v):
            rot = self.rotation(v)
            kids = self.children[v]
            base = 0 if v == 0 else 1
            for i, c in enumerate(kids):
                out.append((v, (base + i) % max(len(rot), 1)))
                walk(c)
            if v != 0:
                out.append((v, 0))

        walk(0)
        return out

    def subtree_sizes(self):
        size = [1] * (self.n + 1)
        for v in range(self.n, 0, -1):
            size[self.parent[v]] += size[v]
        return size

    def reroot(self, corner_vertex: int, after_neighbor: int | None):
        """New PlaneTree rooted at ``corner_vertex`` with child order starting
        just after ``after_neighbor`` in the rotation (None for leaves)."""
        rot = self.rotation(corner_vertex)
        if rot:
            if after_neighbor is None:
                raise ValueError("interior corner needs its preceding neighbor")
            k = rot.index(after_neighbor)
            order = rot[k + 1 :] + rot[: k + 1]
        else:
            order = []
        parent = [-1]
        children = [[]]
        vmap = {corner_vertex: 0}

        def attach(old_v, old_from, new_parent, neigh_order):
            for w in neigh_order:
                nv = len(parent)
                parent.append(new_parent)
                children.append([])
                children[new_parent].append(nv)
                vmap[w] = nv
                rot_w = self.rotation(w)
                j = rot_w.index(old_v)
                sub_order = rot_w[j + 1 :] + rot_w[:j]
                attach(w, old_v, nv, sub_order)

        attach(corner_vertex, None, 0, order)
        return PlaneTree(parent, children), vmap


@dataclass(frozen=True)
class WellLabeledTree:
    """Plane tree plus raw labels (minimum exactly 1)."""

    tree: PlaneTree
    labels: tuple

    def __post_init__(self):
        if min(self.labels) != 1:
            raise ValueError("raw form requires minimal label 1")
        for v in range(1, self.tree.n + 1):
            if abs(self.labels[v] - self.labels[self.tree.parent[v]]) > 1:
                raise ValueError("labels must differ by at most 1 across edges")

    @property
    def n(self) -> int:
        return self.tree.n

    def encode(self):
        return (self.tree.to_dyck(), self.labels)


# ----------------------------------------------------------------------
# Enumeration
# ----------------------------------------------------------------------

def all_plane_trees(n: int):
    """All rooted plane trees with n edges (Catalan many)."""
    if n > ENUMERATION_BOUND:
        raise BoundExceeded(f"n={n} beyond enumeration bound {ENUMERATION_BOUND}")
    out = []

    def gen(remaining, steps, open_):
        if remaining == 0:
            out.append(PlaneTree.from_dyck(steps + [-1] * open_))
            return
        gen(remaining - 1, steps + [1], open_ + 1)
        if open_ > 0:
            gen(remaining, steps + [-1], open_ - 1)

    gen(n, [], 0)
    return out


def _labelings(tree: PlaneTree):
    """All raw labelings: increments in {-1,0,1} per edge, shifted to min 1."""
    n = tree.n
    order = list(range(1, n + 1))
    labs = [0] * (n + 1)
    out = []

    def rec(i):
        if i == len(order):
            m = min(labs)
            out.append(tuple(l - m + 1 for l in labs))
            return
        v = order[i]
        base = labs[tree.parent[v]]
        for d in (-1, 0, 1):
            labs[v] = base + d
            rec(i + 1)

    rec(0)
    return out


def enumerate_well_labeled_trees(n: int):
    """Every rooted well-labeled tree with n edges exactly once (3^n Cat(n))."""
    if n < 1:
        raise BoundExceeded("n must be >= 1")
    for tree in all_plane_trees(n):
        for labels in _labelings(tree):
            yield WellLabeledTree(tree, labels)


def _rooting_encodings(wlt: WellLabeledTree):
    """Encodings and vertex maps of all 2n corner re-rootings."""
    tree = wlt.tree
    encs = []
    for v, gap in tree.contour():
        rot = tree.rotation(v)
        after = rot[gap - 1] if rot else None
        rt, vmap = tree.reroot(v, after)
        inv = [0] * (tree.n + 1)
        for old, new in vmap.items():
            inv[new] = old
        labels = tuple(wlt.labels[inv[i]] for i in range(tree.n + 1))
        encs.append(((rt.to_dyck(), labels), vmap))
    return encs


def enumerate_marked_classes(n: int):
    """Canonical representatives of unrooted pair-marked well-labeled trees.

    Yields (WellLabeledTree, v1, v2): one item per isomorphism class of
    (plane tree, raw labels, ordered pair of distinct marked vertices).
    """
    for wlt in enumerate_well_labeled_trees(n):
        encs = _rooting_encodings(wlt)
        self_enc = wlt.encode()
        best = min(e for e, _ in encs)
        if self_enc != best:
            continue
        auts = []
        for enc, vmap in encs:
            if enc == self_enc:
                auts.append(tuple(vmap[v] for v in range(wlt.n + 1)))
        seen = set()
        nv = wlt.n + 1
        for v1 in range(nv):
            for v2 in range(nv):
                if v1 == v2:
                    continue
                orbit = min((a[v1], a[v2]) for a in auts)
                if orbit in seen:
                    continue
                seen.add(orbit)
                yield wlt, v1, v2


# ----------------------------------------------------------------------
# Uniform sampling
# ----------------------------------------------------------------------

def sample_well_labeled_tree(n: int, seed=None, rng=None) -> WellLabeledTree:
    """Uniform rooted well-labeled tree with n edges.

    Uniform plane tree via the cycle lemma on a random word of n up-steps
    and n+1 down-steps, then i.i.d. uniform {-1,0,+1} edge increments with
    the whole labeling shifted to minimum 1.
    """
    steps, labels = sample_tree_arrays(n, seed=seed, rng=rng)
    tree = PlaneTree.from_dyck(steps.tolist())
    return WellLabeledTree(tree, tuple(int(x) for x in labels))


def sample_tree_arrays(n: int, seed=None, rng=None):
    """Array form of the sampler: (dyck steps +-1 of length 2n, raw labels
    in preorder of length n+1)."""
    if rng is None:
        rng = np.random.default_rng(seed)
    word = np.concatenate([np.ones(n, dtype=np.int64), -np.ones(n + 1, dtype=np.int64)])
    rng.shuffle(word)
    pref = np.cumsum(word)
    pivot = int(np.argmin(pref))  # first position attaining the global minimum
    rot = np.concatenate([word[pivot + 1 :], word[: pivot + 1]])
    steps = rot[:-1]  # drop the closing down-step
    inc = rng.integers(-1, 2, size=n)
    labels = np.empty(n + 1, dtype=np.int64)
    labels[0] = 0
    stack = [0]
    j = 1
    k = 0
    for s in steps:
        if s > 0:
            labels[j] = labels[stack[-1]] + inc[k]
            stack.append(j)
            j += 1
            k += 1
        else:
            stack.pop()
    labels += 1 - labels.min()
    return steps, labels


# ----------------------------------------------------------------------
# Branch statistics
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class BranchStats:
    """Marked-pair observables read off the tree.

    u is the raw branch minimum (half the minimal separating loop length);
    s, t are the shifted endpoint labels.  (u1, u2) are the confluence
    side statistics for the left/right split of the oriented branch, and
    (ub1, ub2) the first-minimum split driving the loop confluence; both
    follow the host-and-fan accounting of the block generating functions,
    so exact-cell tallies match finite-difference coefficients.
    """

    u: int
    s: int
    t: int
    u1: int
    u2: int
    ub1: int
    ub2: int
    branch: tuple
    j_star: int
    j_last: int

    @property
    def l123(self) -> int:
        return 2 * self.u

    @property
    def d13(self) -> int:
        return self.s + self.u

    @property
    def d23(self) -> int:
        return self.t + self.u


# which geometric arc of the first-minimum vertex belongs to the v1-side
# piece of the bar decomposition; pinned by exact tally matching against
# Delta^2 Hbar (see test_tallies).
BAR_SPLIT_V1_TAKES_LEFT = True


def tree_path(tree: PlaneTree, a: int, b: int):
    """Vertex path from a to b."""
    pa, pb = [a], [b]
    seen = {a: 0}
    v = a
    while tree.parent[v] >= 0:
        v = tree.parent[v]
        seen[v] = len(pa)
        pa.append(v)
    v = b
    while v not in seen:
        v = tree.parent[v]
        pb.append(v)
    cut = seen[v]
    pb.pop()
    return pa[: cut + 1] + pb[::-1]


def _directed_component_mins(tree: PlaneTree, labels):
    """min label of the component containing w when v is removed, for every
    directed edge (v -> w); computed as subtree mins plus complement mins."""
    n = tree.n
    down = list(labels)
    for v in range(n, 0, -1):
        p = tree.parent[v]
        if down[v] < down[p]:
            down[p] = down[v]
    up = [None] * (n + 1)  # min over everything outside subtree(v)
    INFTY = 10 ** 9
    up[0] = INFTY
    order = list(range(n + 1))
    for v in order:
        kids = tree.children[v]
        k = len(kids)
        pref = [INFTY] * (k + 1)
        for i, c in enumerate(kids):
            pref[i + 1] = min(pref[i], down[c])
        suf = [INFTY] * (k + 1)
        for i in range(k - 1, -1, -1):
            suf[i] = min(suf[i + 1], down[kids[i]])
        base = min(up[v], labels[v])
        for i, c in enumerate(kids):
            up[c] = min(base, pref[i], suf[i + 1])
    def dirmin(v, w):
        if tree.parent[w] == v:
            return down[w]
        if tree.parent[v] == w:
            return up[v]
        raise ValueError("not an edge")
    return dirmin


def _fan_arcs(tree: PlaneTree, dirmin, v, prev, nxt):
    """Split the fan of branch vertex v into the two arcs between branch
    edges: (arc from nxt onward to prev, arc from prev onward to nxt),
    each as a list of component minima in rotation order."""
    rot = tree.rotation(v)
    i_prev = rot.index(prev) if prev is not None else None
    i_nxt = rot.index(nxt) if nxt is not None else None
    d = len(rot)
    if prev is None or nxt is None:
        anchor = i_nxt if prev is None else i_prev
        others = [rot[(anchor + k) % d] for k in range(1, d)]
        return [dirmin(v, w) for w in others], None
    arc_a = []
    k = (i_nxt + 1) % d
    while k != i_prev:
        arc_a.append(dirmin(v, rot[k]))
        k = (k + 1) % d
    arc_b = []
    k = (i_prev + 1) % d
    while k != i_nxt:
        arc_b.append(dirmin(v, rot[k]))
        k = (k + 1) % d
    return arc_a, arc_b


def branch_statistics(wlt: WellLabeledTree, v1: int, v2: int) -> BranchStats:
    """Branch minimum, endpoint offsets, and the two refined side splits."""
    tree = wlt.tree
    if v1 == v2 or not (0 <= v1 <= tree.n) or not (0 <= v2 <= tree.n):
        raise MarkedVertexMissing((v1, v2))
    labels = wlt.labels
    path = tree_path(tree, v1, v2)
    m = len(path) - 1
    u = min(labels[w] for w in path)
    s = labels[v1] - u
    t = labels[v2] - u
    lsh = [labels[w] - u for w in path]
    j_star = lsh.index(0)
    j_last = m - lsh[::-1].index(0)

    dirmin = _directed_component_mins(tree, labels)

    # per branch vertex: (left arc mins, right arc mins), shifted by -u.
    left = [[] for _ in range(m + 1)]
    right = [[] for _ in range(m + 1)]
    for k, w in enumerate(path):
        prev = path[k - 1] if k > 0 else None
        nxt = path[k + 1] if k < m else None
        if k == 0:
            fans, _ = _fan_arcs(tree, dirmin, w, None, nxt)
            left[k] = [x - u for x in fans]
        elif k == m:
            fans, _ = _fan_arcs(tree, dirmin, w, prev, None)
            right[k] = [x - u for x in fans]
        else:
            arc_a, arc_b = _fan_arcs(tree, dirmin, w, prev, nxt)
            # arc_a runs from the outgoing branch edge around to the incoming
            # one; with the contour conventions of this package that is the
            # left side of the branch oriented v1 -> v2.
            left[k] = [x - u for x in arc_a]
            right[k] = [x - u for x in arc_b]

    def side_value(host_ids, fan_mins):
        best = 0
        for k in host_ids:
            if lsh[k] == 0:
                best = max(best, 1)
        for x in fan_mins:
            best = max(best, 1 - x)
        return best

    all_left = [x for k in range(m + 1) for x in left[k]]
    all_right = [x for k in range(m + 1) for x in right[k]]
    u1 = side_value(range(0, m), all_left)
    u2 = side_value(range(1, m + 1), all_right)

    # bar split: piece 1 is the branch segment [v1 .. j*] with its whole
    # fans plus one arc of the fan at j*; the complement takes the rest.
    # An empty piece contributes no host factors, hence side value 0.
    def whole_fans(lo, hi):
        return [x for k in range(lo, hi + 1) for x in left[k] + right[k]]

    if j_star == 0:
        ub1 = 0
        ub2 = side_value(range(0, m + 1), whole_fans(0, m))
    elif j_star == m:
        ub1 = side_value(range(0, m + 1), whole_fans(0, m))
        ub2 = 0
    else:
        if BAR_SPLIT_V1_TAKES_LEFT:
            arc1, arc2 = left[j_star], right[j_star]
        else:
            arc1, arc2 = right[j_star], left[j_star]
        ub1 = side_value(range(0, j_star + 1), whole_fans(0, j_star - 1) + arc1)
        ub2 = side_value(range(j_star, m + 1), arc2 + whole_fans(j_star + 1, m))
    return BranchStats(u, s, t, u1, u2, ub1, ub2, tuple(path), j_star, j_last)


# ----------------------------------------------------------------------
# Serialization
# ----------------------------------------------------------------------

def tree_to_line(wlt: WellLabeledTree, marks=None) -> str:
    word = "".join("(" if s > 0 else ")" for s in wlt.tree.to_dyck())
    lab = ",".join(str(x) for x in wlt.labels)
    if marks is None:
        return f"{word} {lab}"
    return f"{word} {lab} {marks[0]} {marks[1]}"


def tree_from_line(line: str):
    parts = line.split()
    steps = [1 if ch == "(" else -1 for ch in parts[0]]
    labels = tuple(int(x) for x in parts[1].split(","))
    wlt = WellLabeledTree(PlaneTree.from_dyck(steps), labels)
    if len(parts) > 2:
        return wlt, int(parts[2]), int(parts[3])
    return wlt
