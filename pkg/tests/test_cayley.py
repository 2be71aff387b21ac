"""Balls, Cayley graphs, coned-off graphs, hyperbolicity, penetration."""

from __future__ import annotations

import itertools
from fractions import Fraction

import pytest

from ggtkit.cayley import (
    CyclicSubgroup,
    FactorSubgroup,
    ball,
    cayley_graph,
    coned_off,
    estimate_delta_4point,
    has_backtracking,
    is_quasi_geodesic,
    path_from_vertices,
    penetration_report,
)
from ggtkit.errors import DomainError, OracleInconsistency, ResourceCapError
from ggtkit.groups import FreeAbelian, FreeProduct, cyclic_group

# -- balls --------------------------------------------------------------------


def test_f2_ball_sizes(f2):
    assert len(ball(f2, 1)) == 5
    assert len(ball(f2, 3)) == 53  # 1 + 4 + 12 + 36


def test_ball_bfs_structure(heis):
    b = ball(heis, 3)
    assert b.elements[0] == heis.identity()
    assert all(b.lengths[i] <= b.lengths[i + 1] for i in range(len(b) - 1))
    assert all(b.verify_parent(i) for i in range(len(b)))


def test_heisenberg_ball_matches_product_oracle(heis):
    # independent oracle: exhaustively multiply generator strings of length <= 2
    gens = heis.generator_elements()
    expected = {heis.identity()}
    for s in gens:
        expected.add(s)
        for t in gens:
            expected.add(heis.multiply(s, t))
    assert set(ball(heis, 2).elements) == expected


def test_ball_cap_raises(f2):
    with pytest.raises(ResourceCapError):
        ball(f2, 6, cap=50)


# -- cayley graphs -----------------------------------------------------------


def test_f2_ball2_graph_is_tree(f2):
    g = cayley_graph(ball(f2, 2))
    assert g.n == 17 and len(g.edges) == 16


def test_z2_ball1_graph_is_star(z2):
    g = cayley_graph(ball(z2, 1))
    assert g.n == 5 and len(g.edges) == 4


def test_z6_graph_is_simple_cycle():
    z6 = cyclic_group(6)
    b = ball(z6, 6)
    g = cayley_graph(b)
    # direct-construction oracle: the cycle i -- i+1 mod 6 (doubled edges
    # collapse), mapped through the ball's BFS vertex numbering
    expected = {
        tuple(sorted((b.index[i], b.index[z6.multiply(i, 1)]))) for i in range(6)
    }
    assert {(u, v) for u, v, _ in g.edges} == expected


def test_distance_is_metric_on_small_graphs(f2):
    g = cayley_graph(ball(f2, 2))
    n = g.n
    dist = [[g.distance_scaled(i, j) for j in range(n)] for i in range(n)]
    for i in range(n):
        assert dist[i][i] == 0
        for j in range(n):
            assert dist[i][j] == dist[j][i]
            assert (dist[i][j] == 0) == (i == j)
            for k in range(n):
                assert dist[i][j] <= dist[i][k] + dist[k][j]


def test_distance_units_halved(f2):
    g = cayley_graph(ball(f2, 2))
    b = ball(f2, 2)
    assert g.distance(b.index[()], b.index[(1, 2)]) == 2
    assert g.distance(0, 0) == 0


# -- coned-off graphs ----------------------------------------------------------


def test_coned_off_f2_cyclic_a(f2):
    b = ball(f2, 4)
    coned = coned_off(b, [CyclicSubgroup((1,), label="<a>")])
    e = b.index[()]
    a4 = b.index[(1, 1, 1, 1)]
    assert coned.distance(e, a4) == 1  # two half-edges through the cone
    b5 = ball(f2, 5)
    coned5 = coned_off(b5, [CyclicSubgroup((1,), label="<a>")])
    ba4 = b5.index[(2, 1, 1, 1, 1)]
    # shortest-path oracle on the assembled graph (plain Dijkstra recheck)
    assert coned5.distance(b5.index[()], ba4) == 2


def test_coned_distance_never_exceeds_cayley(f2):
    b = ball(f2, 3)
    coned = coned_off(b, [CyclicSubgroup((1,), label="<a>")])
    base = coned.base
    for i in range(0, len(b), 5):
        for j in range(0, len(b), 7):
            assert coned.distance(i, j) <= base.distance(i, j)


def test_coned_cone_count_matches_membership_oracle():
    P = FreeProduct([FreeAbelian(2), FreeAbelian(1)])
    b = ball(P, 3)
    coned = coned_off(b, [FactorSubgroup(0)])
    oracle = FactorSubgroup(0)
    reps = []
    for e in b.elements:
        if not any(
            oracle.contains(P, P.multiply(P.inverse(r), e)) for r in reps
        ):
            reps.append(e)
    assert len(coned.cones) == len(reps)
    # every cone vertex joins exactly the ball elements of its coset
    for ci, (fi, cid) in enumerate(coned.cones):
        members = set(coned.coset_members[fi][cid])
        attached = {
            u if v == coned.cone_start + ci else v
            for u, v, w in coned.graph.edges
            if w == 1 and coned.cone_start + ci in (u, v)
        }
        assert attached == members


def test_inconsistent_oracle_rejected(f2):
    class Broken(CyclicSubgroup):
        def contains(self, model, elem):
            return elem in ((), (1,))  # not closed: a*a missing

        def coset_key(self, model, elem):
            return None

    b = ball(f2, 2)
    with pytest.raises(OracleInconsistency):
        coned_off(b, [Broken((1,))])


# -- four-point condition ------------------------------------------------------


def test_delta_zero_on_trees(f2):
    for r in (2, 3):
        assert estimate_delta_4point(cayley_graph(ball(f2, r))) == 0


def test_delta_single_edge():
    from ggtkit.cayley import MetricGraph

    g = MetricGraph(2, [(0, 1, 2)])
    assert estimate_delta_4point(g) == 0


def test_delta_positive_on_z2_ball(z2):
    # frozen regression constant from the exhaustive quadruple scan
    d = estimate_delta_4point(cayley_graph(ball(z2, 4)))
    assert d == Fraction(4)


def test_delta_matches_slow_oracle(z2):
    g = cayley_graph(ball(z2, 2))
    n = g.n
    D = [[g.distance_scaled(i, j) for j in range(n)] for i in range(n)]
    best = 0
    for x, y, zz, w in itertools.product(range(n), repeat=4):
        s = sorted([D[x][y] + D[zz][w], D[x][zz] + D[y][w], D[x][w] + D[y][zz]])
        best = max(best, s[2] - s[1])
    assert estimate_delta_4point(g) == Fraction(best, 4)


def test_delta_sampled_mode_deterministic(f2):
    g = cayley_graph(ball(f2, 4))
    d1 = estimate_delta_4point(g, exhaustive=False, sample_vertices=24, seed=3)
    d2 = estimate_delta_4point(g, exhaustive=False, sample_vertices=24, seed=3)
    assert d1 == d2 == 0


# -- quasi-geodesics -----------------------------------------------------------


def test_geodesics_are_1_quasi_geodesics(f2):
    b = ball(f2, 3)
    g = cayley_graph(b)
    path = path_from_vertices(g, [b.index[()], b.index[(1,)], b.index[(1, 2)]])
    assert is_quasi_geodesic(path, 1, g)


def test_backtracking_path_fails_lower_bound(f2):
    b = ball(f2, 3)
    g = cayley_graph(b)
    path = path_from_vertices(g, [b.index[()], b.index[(1,)], b.index[()], b.index[(1,)]])
    assert not is_quasi_geodesic(path, 1, g)


def test_quasi_geodesic_matches_subpath_oracle(z2):
    b = ball(z2, 3)
    g = cayley_graph(b)
    spiral = [(0, 0), (1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1)]
    path = path_from_vertices(g, [b.index[v] for v in spiral])
    for k in (Fraction(1), Fraction(3), Fraction(5)):
        # O(n^2) oracle, written independently of the library routine
        pos = [0]
        for u, v in zip(path.vertices, path.vertices[1:]):
            pos.append(pos[-1] + g.edge_weight(u, v))
        expect = True
        for i in range(len(path.vertices)):
            for j in range(i + 1, len(path.vertices)):
                span = Fraction(pos[j] - pos[i], 2)
                d = Fraction(g.distance_scaled(path.vertices[i], path.vertices[j]), 2)
                if span > k * d + k or d > k * span + k:
                    expect = False
        assert is_quasi_geodesic(path, k, g) == expect


def test_quasi_geodesic_requires_k_at_least_one(f2):
    b = ball(f2, 2)
    g = cayley_graph(b)
    path = path_from_vertices(g, [0, 1])
    with pytest.raises(DomainError):
        is_quasi_geodesic(path, Fraction(1, 2), g)


# -- penetration ---------------------------------------------------------------


def test_penetration_through_cone(f2):
    b = ball(f2, 4)
    coned = coned_off(b, [CyclicSubgroup((1,), label="<a>")])
    e = b.index[()]
    a4 = b.index[(1, 1, 1, 1)]
    cone = coned.cone_vertex(0, coned.coset_of[0][e])
    path = path_from_vertices(coned, [e, cone, a4])
    recs = penetration_report(path, coned)
    assert len(recs) == 1
    assert recs[0].entry_vertex == e and recs[0].exit_vertex == a4
    assert recs[0].gamma_distance == 4


def test_penetration_empty_for_transverse_geodesic(f2):
    b = ball(f2, 4)
    coned = coned_off(b, [CyclicSubgroup((1,), label="<a>")])
    path = path_from_vertices(coned, [b.index[()], b.index[(2,)], b.index[(2, 1, 1)]][:2])
    assert penetration_report(path, coned) == []


def test_penetration_reports_differ_exactly_on_detoured_coset(f2):
    b = ball(f2, 4)
    coned = coned_off(b, [CyclicSubgroup((1,), label="<a>")])
    e = b.index[()]
    a1 = b.index[(1,)]
    b1 = b.index[(2,)]
    cone_h = coned.cone_vertex(0, coned.coset_of[0][e])
    direct = path_from_vertices(coned, [e, b1])
    detour = path_from_vertices(coned, [e, a1, cone_h, e, b1])
    cos_h = coned.coset_of[0][e]
    r_direct = penetration_report(direct, coned)
    r_detour = penetration_report(detour, coned)
    assert all(r.coset != cos_h for r in r_direct)
    assert [r.coset for r in r_detour] == [cos_h]


def test_backtracking_detection(f2):
    b = ball(f2, 4)
    coned = coned_off(b, [CyclicSubgroup((1,), label="<a>")])
    e = b.index[()]
    a1 = b.index[(1,)]
    b1 = b.index[(2,)]
    cone_e = coned.cone_vertex(0, coned.coset_of[0][e])
    # leave the identity coset and come back through its cone
    loop = path_from_vertices(coned, [a1, cone_e, e, b1, e, cone_e, a1])
    assert has_backtracking(loop, coned)
    straight = path_from_vertices(coned, [e, cone_e, a1])
    assert not has_backtracking(straight, coned)


def test_graph_csv_and_summary(f2):
    g = cayley_graph(ball(f2, 1))
    rows = g.csv_rows()
    assert all(len(r) == 3 and r[2] == 2 for r in rows)
    s = g.summary()
    assert s["vertices"] == 5 and s["edges"] == 4 and s["scaled"] is True
