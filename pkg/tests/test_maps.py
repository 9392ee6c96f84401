import pytest

from quadlab.maps import (
    CombinatorialMap,
    DisconnectedMap,
    NonInvolution,
    NonSphericalEuler,
    NotFoundWithinBound,
    NotSimpleCycle,
    Quadrangulation,
    SimpleCycle,
    UnknownVertex,
    bfs_distance,
    brute_min_separating_loop,
    build_map,
    cut_along_cycle,
    map_from_lines,
    map_from_tree,
    map_to_lines,
)
from quadlab.trees import PlaneTree


def one_edge_map():
    return CombinatorialMap(opp=[1, 0], nxt=[0, 1], vert=[0, 1])


def cycle_map(k):
    """The k-cycle with vertices 0..k-1."""
    opp, vert = [], []
    for i in range(k):
        opp.extend([2 * i + 1, 2 * i])
        vert.extend([i, (i + 1) % k])
    nxt = [0] * (2 * k)
    for v in range(k):
        outs = [2 * v, 2 * ((v - 1) % k) + 1]
        nxt[outs[0]] = outs[1]
        nxt[outs[1]] = outs[0]
    return CombinatorialMap(opp, nxt, vert)


def star_map(k):
    """k leaves around a center vertex 0; leaf i is vertex i."""
    opp, vert = [], []
    for i in range(k):
        opp.extend([2 * i + 1, 2 * i])
        vert.extend([0, i + 1])
    nxt = list(range(2 * k))
    for i in range(k):
        nxt[2 * i] = 2 * ((i + 1) % k)
    return CombinatorialMap(opp, nxt, vert)


def test_one_edge_accepted():
    m = one_edge_map()
    assert (m.nv, m.ne, m.nf) == (2, 1, 1)
    assert m.face_degrees() == (2,)


def test_four_cycle_is_quadrangulation():
    m = cycle_map(4)
    assert (m.nv, m.ne, m.nf) == (4, 4, 2)
    assert m.face_degrees() == (4, 4)
    assert m.is_quadrangulation()
    Quadrangulation(m, 0, 2)


def test_involution_with_fixed_point_rejected():
    with pytest.raises(NonInvolution):
        CombinatorialMap(opp=[0, 1], nxt=[0, 1], vert=[0, 1])


def test_disconnected_rejected():
    with pytest.raises(DisconnectedMap):
        CombinatorialMap(opp=[1, 0, 3, 2], nxt=[0, 1, 2, 3], vert=[0, 1, 2, 3])


def test_torus_rejected():
    # one vertex, two interleaved loops: V-E+F = 1-2+1 = 0
    with pytest.raises(NonSphericalEuler):
        CombinatorialMap(opp=[1, 0, 3, 2], nxt=[2, 3, 1, 0], vert=[0, 0, 0, 0])


def test_build_map_normalizes_ids():
    recs = [(10, 20, 10, 0), (20, 10, 20, 1)]
    m = build_map(recs)
    assert (m.nv, m.ne, m.nf) == (2, 1, 1)


def test_euler_holds_on_tree_maps():
    for steps in ([1, -1], [1, 1, -1, -1], [1, -1, 1, -1], [1, 1, -1, 1, -1, -1]):
        t = PlaneTree.from_dyck(steps)
        m = map_from_tree(t)
        assert m.nf == 1
        assert m.nv - m.ne + m.nf == 2


def test_bfs_distances():
    m = cycle_map(4)
    d = bfs_distance(m, 0)
    assert d[0] == 0 and d[2] == 2 and d[1] == d[3] == 1
    with pytest.raises(UnknownVertex):
        bfs_distance(m, 9)


def test_cut_four_cycle_one_face_per_side():
    m = cycle_map(4)
    cut = cut_along_cycle(m, SimpleCycle(m, [0, 2, 4, 6]))
    assert sorted(cut.face_side.values()) == [0, 1]
    assert len(cut.faces_on(0)) + len(cut.faces_on(1)) == m.nf


def test_cut_tight_loop_around_leaf_edge():
    t = PlaneTree.from_dyck([1, 1, -1, -1])  # path 0-1-2
    m = map_from_tree(t)
    cyc = SimpleCycle(m, [2, 3])  # both lanes of edge (1,2)
    cut = cut_along_cycle(m, cyc)
    assert cut.separates(0, 2)
    # one side holds no complete face
    assert sorted(len(cut.faces_on(s)) for s in (0, 1)) == [0, 1]


def test_simple_cycle_validation():
    m = cycle_map(4)
    with pytest.raises(NotSimpleCycle):
        SimpleCycle(m, [0, 0])
    with pytest.raises(NotSimpleCycle):
        SimpleCycle(m, [0, 4])  # not head-to-tail
    s = star_map(4)
    with pytest.raises(NotSimpleCycle):
        # figure with interleaved arcs at the hub crosses itself
        SimpleCycle(s, [0, 1, 4, 5, 2, 3])


def test_noncrossing_revisit_is_allowed():
    s = star_map(4)
    # peanut around leaves 1 and 3: revisits the hub through disjoint arcs
    cyc = SimpleCycle(s, [0, 1, 4, 5])
    cut = cut_along_cycle(s, cyc)
    assert cut.separates(1, 2) and cut.separates(3, 2)
    assert not cut.separates(1, 3)


def test_brute_min_separating_loop_four_cycle():
    m = cycle_map(4)
    length, wit = brute_min_separating_loop(m, 1, 3, 0)
    assert length == 2
    cut = cut_along_cycle(m, wit)
    assert cut.separates(1, 3)
    d0 = bfs_distance(m, 0)
    assert length <= 2 * min(d0[1], d0[3])
    assert length % 2 == 0


def test_brute_min_loop_bound_too_small():
    m = cycle_map(6)
    with pytest.raises(NotFoundWithinBound):
        brute_min_separating_loop(m, 1, 5, 0, max_len=1)


def test_serialization_roundtrip():
    m = cycle_map(4)
    m2 = map_from_lines(map_to_lines(m))
    assert m2.opp == m.opp and m2.nxt == m.nxt and m2.vert == m.vert
