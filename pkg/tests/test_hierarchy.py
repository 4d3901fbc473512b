from __future__ import annotations

import numpy as np

from hsal.hierarchy import ClusterTree, build_hierarchy, tree_linearization

from conftest import bridged_triangles, graph_from_edges, random_connected_graph


def assert_tree_invariants(tree: ClusterTree, n: int):
    roots = [t for t in tree.nodes if t.parent is None]
    assert len(roots) == 1
    assert roots[0].id == tree.root
    assert roots[0].member_count == n

    # every level partitions all N datapoints
    by_level: dict[int, int] = {}
    for t in tree.nodes:
        by_level[t.level] = by_level.get(t.level, 0) + t.member_count
    assert set(by_level) == set(range(tree.levels))
    assert all(total == n for total in by_level.values())

    for t in tree.nodes:
        if t.children:
            child_reps = [tree.node(c).representative for c in t.children]
            # the authority property: the node's representative is the
            # representative of exactly one child
            assert child_reps.count(t.representative) == 1
            assert t.member_count == sum(
                tree.node(c).member_count for c in t.children
            )
            counts = [tree.node(c).member_count for c in t.children]
            keys = list(zip([-c for c in counts], child_reps))
            assert keys == sorted(keys)
            for c in t.children:
                assert tree.node(c).parent == t.id
                assert tree.node(c).level == t.level - 1


def mini_variant_oracle_level0(w: np.ndarray) -> np.ndarray:
    """Independent basin computation for the first level: transition matrix,
    cumulative two-step visit counts, authority argmax, pointer chase."""
    m = w.shape[0]
    d = w.sum(axis=1)
    p = w / d[:, None]
    v = p + p @ p  # t = 2: visits after one and two steps
    s = v.sum(axis=0)
    targets = []
    for i in range(m):
        cand = sorted(set(np.nonzero(w[i] > 0)[0].tolist()) | {i})
        scores = [(v[i, j] * s[j], -j) for j in cand]
        targets.append(cand[int(np.argmax([sc for sc, _ in scores]))])
    root_of = []
    for i in range(m):
        path = [i]
        while True:
            nxt = targets[path[-1]]
            if nxt == path[-1]:
                root_of.append(nxt)
                break
            if nxt in path:
                cyc = path[path.index(nxt):]
                root_of.append(min(cyc))
                break
            path.append(nxt)
    return np.asarray(root_of)


class TestBuildHierarchy:
    def test_single_node(self):
        g = graph_from_edges(1, [])
        tree = build_hierarchy(g)
        assert tree.levels == 1
        assert tree.node(tree.root).representative == 0
        assert len(tree.nodes) == 1

    def test_bridged_triangles_level_one(self, bridged_triangles):
        tree = build_hierarchy(bridged_triangles)
        level1 = [t for t in tree.nodes if t.level == 1]
        assert len(level1) == 2
        clusters = []
        for t in level1:
            members = {tree.node(c).representative for c in t.children}
            clusters.append(members)
        assert {frozenset(c) for c in clusters} == {
            frozenset({0, 1, 2}),
            frozenset({3, 4, 5}),
        }
        root = tree.node(tree.root)
        assert root.level == 2
        assert {tree.node(c).id for c in root.children} == {t.id for t in level1}
        assert_tree_invariants(tree, 6)

    def test_bridged_triangles_matches_level0_oracle(self, bridged_triangles):
        w = bridged_triangles.weights.toarray()
        root_of = mini_variant_oracle_level0(w)
        tree = build_hierarchy(bridged_triangles)
        level1 = [t for t in tree.nodes if t.level == 1]
        got = {}
        for t in level1:
            for c in t.children:
                got[tree.node(c).representative] = t.representative
        for i in range(6):
            assert got[i] == root_of[i]

    def test_representative_among_children(self):
        rng = np.random.default_rng(60)
        for _ in range(10):
            g = random_connected_graph(rng, int(rng.integers(2, 40)))
            tree = build_hierarchy(g)
            assert_tree_invariants(tree, g.n)

    def test_disconnected_graph(self):
        g = graph_from_edges(5, [(0, 1, 1.0), (2, 3, 1.0)])
        tree = build_hierarchy(g)
        assert_tree_invariants(tree, 5)

    def test_determinism(self):
        rng = np.random.default_rng(61)
        g = random_connected_graph(rng, 25)
        t1 = build_hierarchy(g)
        t2 = build_hierarchy(g)
        assert t1.to_json_dict() == t2.to_json_dict()

    def test_invariants_on_fifty_random_graphs(self):
        rng = np.random.default_rng(62)
        for _ in range(50):
            n = int(rng.integers(1, 60))
            g = random_connected_graph(rng, max(n, 1))
            tree = build_hierarchy(g)
            assert_tree_invariants(tree, g.n)

    def test_height_soft_bound_on_geometric_graphs(self):
        from hsal.graph import build_perplexity_graph
        from conftest import random_dataset

        rng = np.random.default_rng(63)
        for n in (30, 80, 150):
            ds = random_dataset(rng, n, 2, 2)
            g = build_perplexity_graph(ds, 6, 15.0)
            tree = build_hierarchy(g)
            assert tree.levels <= 4 * int(np.ceil(np.log2(n))) + 1


class TestTreeLinearization:
    def test_root_first(self, bridged_triangles):
        tree = build_hierarchy(bridged_triangles)
        order = tree_linearization(tree)
        assert order[0].id == tree.root

    def test_sibling_order_by_member_count(self):
        # star pulls everything onto the hub: children are the hub leaf and
        # the spokes, with sizes 1 each; build a two-cluster case instead
        edges = [
            (0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0), (2, 3, 1.0), (2, 4, 1.0),
            (5, 6, 1.0),
        ]
        g = graph_from_edges(7, edges)
        tree = build_hierarchy(g)
        for t in tree.nodes:
            counts = [tree.node(c).member_count for c in t.children]
            assert counts == sorted(counts, reverse=True)

    def test_full_ordering_on_fixture(self, bridged_triangles):
        tree = build_hierarchy(bridged_triangles)
        order = tree_linearization(tree)
        expected = sorted(
            tree.nodes,
            key=lambda t: (-t.level, -t.member_count, t.representative),
        )
        assert [t.id for t in order] == [t.id for t in expected]
        # hand enumeration: root (level 2), two triangles (level 1, 3 each,
        # rep ascending), six leaves by id
        levels = [t.level for t in order]
        assert levels == [2, 1, 1, 0, 0, 0, 0, 0, 0]
        reps = [t.representative for t in order]
        assert reps[1] < reps[2]
        assert reps[3:] == [0, 1, 2, 3, 4, 5]
