import pytest

from quadlab.bijections import (
    Closure,
    InadmissibleDelays,
    InvalidLabels,
    NotRawForm,
    chain_vertices,
    close_labeled_map,
    dart_isomorphism,
    loop_delay_structure,
    miermont_forward,
    open_quadrangulation,
    schaeffer_close,
    schaeffer_open,
    successor_chain,
)
from quadlab.maps import bfs_distance, map_from_tree
from quadlab.trees import (
    PlaneTree,
    WellLabeledTree,
    branch_statistics,
    enumerate_marked_classes,
    enumerate_well_labeled_trees,
    sample_well_labeled_tree,
)


def close_open_roundtrip(wlt):
    cl = schaeffer_close(wlt)
    op = schaeffer_open(cl.quad, cl.sources[0])
    assert op.labels == wlt.labels
    tm = map_from_tree(wlt.tree)
    assert dart_isomorphism(op.map, tm, list(range(wlt.n + 1))) is not None


def test_one_edge_tree_closure_degenerate_face():
    # two arches close the (1,1)-tree into the degenerate 4-face o-a-o-b
    w = WellLabeledTree(PlaneTree.from_dyck([1, -1]), (1, 1))
    cl = schaeffer_close(w)
    assert (cl.quad.nv, cl.quad.ne, cl.quad.nf) == (3, 2, 1)
    assert cl.quad.face_degrees() == (4,)
    assert cl.taus == (0,)


def test_closure_rejects_shifted_form():
    tree = PlaneTree.from_dyck([1, -1])
    wlt = WellLabeledTree(tree, (1, 2))
    object.__setattr__(wlt, "labels", (0, 1))  # bypass validation to hit the guard
    with pytest.raises(NotRawForm):
        schaeffer_close(wlt)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_closure_validity_exhaustive(n):
    for wlt in enumerate_well_labeled_trees(n):
        cl = schaeffer_close(wlt)
        q = cl.quad
        assert q.nf == n and q.nv == n + 2
        assert all(len(f) == 4 for f in q.faces)
        dist = bfs_distance(q, cl.sources[0])
        assert all(dist[v] == wlt.labels[v] for v in range(n + 1))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_roundtrip_exhaustive(n):
    for wlt in enumerate_well_labeled_trees(n):
        close_open_roundtrip(wlt)


def test_roundtrip_sampled_large():
    for seed in range(3):
        close_open_roundtrip(sample_well_labeled_tree(1000, seed=seed))


def test_successor_chain_geodesic():
    # chains of successors are geodesics: length = label, steps decrease by 1
    for wlt in enumerate_well_labeled_trees(3):
        cl = schaeffer_close(wlt)
        for corner in range(2 * wlt.n):
            verts = chain_vertices(cl, corner)
            lab = wlt.labels[cl.base.vert[corner]]
            assert len(verts) == lab + 1
            assert verts[-1] == cl.sources[0]
            labs = cl.labels
            for i in range(len(verts) - 1):
                assert labs[verts[i]] - 1 == labs[verts[i + 1]]


def test_chain_on_path_tree():
    # tree 1-2: the chain from the label-2 vertex has length 2
    wlt = WellLabeledTree(PlaneTree.from_dyck([1, -1]), (1, 2))
    cl = schaeffer_close(wlt)
    corner = next(c for c in range(2) if cl.base.vert[c] == 1)
    assert chain_vertices(cl, corner) == [1, 0, cl.sources[0]]


def test_miermont_single_source_equals_schaeffer():
    for wlt in enumerate_well_labeled_trees(3):
        cl = schaeffer_close(wlt)
        op1 = miermont_forward(cl.quad, (cl.sources[0],), (0,))
        op2 = schaeffer_open(cl.quad, cl.sources[0])
        assert op1.labels == op2.labels
        assert op1.map.opp == op2.map.opp and op1.map.nxt == op2.map.nxt


def test_inadmissible_delays():
    wlt = sample_well_labeled_tree(30, seed=5)
    cl = schaeffer_close(wlt)
    q = cl.quad
    dist = bfs_distance(q, 0)
    far = max(range(q.nv), key=lambda v: dist[v])
    with pytest.raises(InadmissibleDelays):
        miermont_forward(q, (0, far), (0, dist[far]))  # |tau_i - tau_j| not < d
    with pytest.raises(InadmissibleDelays):
        miermont_forward(q, (0, far), (0, dist[far] % 2 + 1))  # parity broken


def test_miermont_label_law_sampled():
    # label(v) = min_j d(v, v_j) + tau_j, checked vertexwise
    for seed in range(5):
        wlt = sample_well_labeled_tree(200, seed=seed)
        st = None
        v1, v2 = 1, 2
        st = branch_statistics(wlt, v1, v2)
        if st.s < 1 or st.t < 1:
            continue
        cl = schaeffer_close(wlt)
        src = (v1, v2, cl.sources[0])
        tau = (-st.s, -st.t, -st.u)
        op = miermont_forward(cl.quad, src, tau)
        dists = [bfs_distance(cl.quad, s) for s in src]
        for mv, qv in enumerate(op.to_quad_vertex):
            assert op.labels[mv] == min(dists[i][qv] + tau[i] for i in range(3))
        # face-source incidence: the minimum is attained by the face's source
        for f, orbit in enumerate(op.map.faces):
            i = op.face_source[f]
            for d in orbit:
                qv = op.to_quad_vertex[op.map.vert[d]]
                assert dists[i][qv] + tau[i] == op.labels[op.map.vert[d]]


@pytest.mark.parametrize("n", [2, 3, 4])
def test_loop_delay_structure_exhaustive(n):
    # two cycles joined by a bridge, with the six label minima
    count = 0
    for wlt, v1, v2 in enumerate_marked_classes(n):
        st = branch_statistics(wlt, v1, v2)
        if st.s < 1 or st.t < 1:
            continue
        cl = schaeffer_close(wlt)
        op = miermont_forward(cl.quad, (v1, v2, cl.sources[0]), (-st.s, -st.t, -st.u))
        assert op.map.nf == 3
        # the re-closure's added labels are the delays
        got = sorted(cl2 := [op.closure.taus[f] for f in range(3)])
        assert got == sorted([-st.s, -st.t, -st.u])
        loop_delay_structure(op)
        count += 1
    assert count > 0


def test_degenerate_two_source_case():
    # s = 0: apply the bijection with sources (v2, v3) and delays (-t, -u);
    # v1 becomes a label-0 map vertex
    found = 0
    for wlt, v1, v2 in enumerate_marked_classes(3):
        st = branch_statistics(wlt, v1, v2)
        if st.s != 0 or st.t < 1:
            continue
        cl = schaeffer_close(wlt)
        op = miermont_forward(cl.quad, (v2, cl.sources[0]), (-st.t, -st.u))
        assert op.map.nf == 2
        mv1 = op.from_quad_vertex[v1]
        assert op.labels[mv1] == 0
        found += 1
    assert found > 0


def test_close_rejects_bad_labels():
    tm = map_from_tree(PlaneTree.from_dyck([1, -1]))
    with pytest.raises(InvalidLabels):
        close_labeled_map(tm, (1, 3))
    with pytest.raises(InvalidLabels):
        close_labeled_map(tm, (1, 2), taus=(5,))
